"""
生存振幅与最大可区分度

S(t) = Σ p_n e^{−iω_n t}，可区分度 D(t) = 1 − |S(t)|²。
|S(t)|² 是有限三角多项式，最快振荡由支撑集上的最大能级间隔决定，
因此按最快周期加密的网格扫描可以括住每一个局部极值，再用黄金分割和
极值条件 d|S|²/dt = 0 的求根细化。
"""
import math
from dataclasses import asdict
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from ..util.assertion import assert_same_length
from ..util.assertion import assert_unit_interval
from ..util.exception import DegenerateWindowError
from .spectra import Spectrum
from .spectra import TimeWindow

DEFAULT_POINTS_PER_PERIOD = 32
DEFAULT_REFINE_TOLERANCE = 1e-10
MIN_POINTS_PER_PERIOD = 8
# 并列极大值的判定容差，取最早的一个
TIE_TOLERANCE = 1e-12
# 每次向量化计算的时间点数
TIME_BLOCK = 2048


@dataclass(frozen=True)
class GridConfig:
  """
  网格扫描与细化参数

  Args:
    points_per_fastest_period: 每个最快振荡周期内的网格点数
    refine_tolerance: 局部细化的相对时间容差
    refine: 是否在网格最优点附近细化
  """
  points_per_fastest_period: int = DEFAULT_POINTS_PER_PERIOD
  refine_tolerance: float = DEFAULT_REFINE_TOLERANCE
  refine: bool = True

  def __post_init__(self):
    assert self.points_per_fastest_period >= MIN_POINTS_PER_PERIOD, \
      f'points_per_fastest_period不能小于{MIN_POINTS_PER_PERIOD}'
    assert self.refine_tolerance > 0, 'refine_tolerance必须为正数'

  @property
  def slack(self) -> float:
    """网格值与真实极小值之差的上界 ½(π/points)²"""
    return 0.5 * (math.pi / self.points_per_fastest_period) ** 2

  def to_dict(self) -> dict:
    return asdict(self)

  @classmethod
  def from_dict(cls, data: dict) -> 'GridConfig':
    return cls(**data)


@dataclass(frozen=True)
class OptimizationResult:
  """
  单个态在给定能谱下的最大可区分度

  Args:
    tau: 最大可区分度对应的（最早）时间
    d_max: 最大可区分度
    window: 使用的搜索时间窗
    grid_points: 网格点数
    refined: 是否经过局部细化
  """
  tau: float
  d_max: float
  window: TimeWindow
  grid_points: int
  refined: bool

  @property
  def truncated(self) -> bool:
    return self.window.truncated

  def to_dict(self) -> dict:
    return {
      'tau': self.tau,
      'd_max': self.d_max,
      't_lo': self.window.t_lo,
      't_hi': self.window.t_hi,
      'grid_points': self.grid_points,
      'refined': self.refined,
      'truncated': self.truncated,
    }


@dataclass(frozen=True)
class _Grid:
  t_lo: float
  t_hi: float
  step: float
  intervals: int

  @property
  def points(self) -> int:
    return self.intervals + 1

  def times(self, k):
    return self.t_lo + np.asarray(k) * self.step


def _weights(p, spectrum: Spectrum) -> np.ndarray:
  p = np.asarray(p, dtype=float)
  assert_same_length(p, spectrum.frequencies)
  return p


def _survival(p: np.ndarray, w: np.ndarray, t):
  phase = np.multiply.outer(t, w)
  c = np.cos(phase) @ p
  s = np.sin(phase) @ p
  return np.clip(c * c + s * s, 0.0, 1.0)


def _survival_derivative(p: np.ndarray, w: np.ndarray, t):
  # 按能级对展开：d|S|²/dt = −2 Σ_{n<m} p_n p_m Δ_nm sin(Δ_nm t)
  i, j = np.triu_indices(w.size, k=1)
  gap = w[j] - w[i]
  return -2 * (np.sin(np.multiply.outer(t, gap)) @ (p[i] * p[j] * gap))


def survival_probability(p, spectrum: Spectrum, t):
  """
  生存概率 |Σ_n p_n e^{−iω_n t}|²

  按 (Σ p_n cos ω_n t)² + (Σ p_n sin ω_n t)² 计算，t可以是标量或数组
  """
  p = _weights(p, spectrum)
  rv = _survival(p, spectrum.as_array(), t)
  return float(rv) if np.ndim(rv) == 0 else rv


def survival_derivative(p, spectrum: Spectrum, t):
  """生存概率对时间的导数，其零点即可区分度的极值条件"""
  p = _weights(p, spectrum)
  rv = _survival_derivative(p, spectrum.as_array(), t)
  return float(rv) if np.ndim(rv) == 0 else rv


def distinguishability_at(p, spectrum: Spectrum, t):
  """t时刻的可区分度 D(t) = 1 − |S(t)|²"""
  rv = 1 - np.asarray(survival_probability(p, spectrum, t))
  return float(rv) if np.ndim(rv) == 0 else rv


def make_grid(window: TimeWindow, max_gap: float, cfg: GridConfig) -> _Grid:
  """按最快周期 2π/max_gap 生成均匀网格，步长不超过 最快周期/points"""
  if window.t_lo >= window.t_hi:
    raise DegenerateWindowError(
        f'搜索窗退化：t_lo={window.t_lo}，t_hi={window.t_hi}'
    )
  length = window.t_hi - window.t_lo
  if max_gap > 0:
    h = 2 * math.pi / max_gap / cfg.points_per_fastest_period
    intervals = max(1, math.ceil(length / h))
  else:
    intervals = 1
  return _Grid(window.t_lo, window.t_hi, length / intervals, intervals)


def _scan(P: np.ndarray, w: np.ndarray, grid: _Grid, slack: float):
  """
  分块扫描整个网格，返回每一行的网格最小值、其下标以及候选局部极小值

  候选为值不超过（最终最小值 + slack）的网格局部极小点，按时间先后排列
  """
  n_rows = P.shape[0]
  m = grid.intervals
  best_val = np.full(n_rows, np.inf)
  best_idx = np.zeros(n_rows, dtype=np.int64)
  found_rows, found_idx, found_val = [], [], []
  ar = np.arange(n_rows)
  for a in range(0, m + 1, TIME_BLOCK):
    b = min(a + TIME_BLOCK, m + 1)
    lo, hi = max(a - 1, 0), min(b + 1, m + 1)
    phase = np.multiply.outer(w, grid.times(np.arange(lo, hi)))
    c = P @ np.cos(phase)
    s = P @ np.sin(phase)
    S = np.clip(c * c + s * s, 0.0, 1.0)
    core = S[:, a - lo:a - lo + (b - a)]

    j = core.argmin(axis=1)
    v = core[ar, j]
    better = v < best_val
    best_val = np.where(better, v, best_val)
    best_idx = np.where(better, a + j, best_idx)

    left = S[:, :1] if lo < a else np.full((n_rows, 1), np.inf)
    right = S[:, -1:] if hi > b else np.full((n_rows, 1), np.inf)
    ext = np.hstack([left, core, right])
    is_min = (core <= ext[:, :-2]) & (core <= ext[:, 2:])
    mask = is_min & (core <= (best_val + slack)[:, None])
    rows, cols = np.nonzero(mask)
    found_rows.append(rows)
    found_idx.append(a + cols)
    found_val.append(core[rows, cols])

  rows = np.concatenate(found_rows)
  idx = np.concatenate(found_idx)
  val = np.concatenate(found_val)
  order = np.argsort(rows, kind='stable')
  rows, idx, val = rows[order], idx[order], val[order]
  bounds = np.searchsorted(rows, np.arange(n_rows + 1))
  candidates = []
  for r in range(n_rows):
    sel = slice(bounds[r], bounds[r + 1])
    keep = (idx[sel] < best_idx[r]) & (val[sel] <= best_val[r] + slack)
    candidates.append(idx[sel][keep])
  return best_idx, best_val, candidates


def _polish(p, w, x, lo, hi, cfg: GridConfig):
  """在x附近对导数求根，得到极值条件的精确解；找不到变号区间时返回None"""
  g = lambda t: _survival_derivative(p, w, t)
  delta = max(cfg.refine_tolerance, 1e-7) * max(abs(x), 1.0)
  while delta <= hi - lo:
    a, b = max(lo, x - delta), min(hi, x + delta)
    ga, gb = g(a), g(b)
    if ga <= 0 <= gb and a < b:
      return optimize.brentq(g, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    if a == lo and b == hi:
      return
    delta *= 4


def _refine_at(p, w, grid: _Grid, k: int, cfg: GridConfig):
  """在网格点k的相邻区间内细化极小值，返回 (t, |S(t)|²)"""
  f = lambda t: float(_survival(p, w, t))
  tk = float(grid.times(k))
  lo = float(grid.times(max(k - 1, 0)))
  hi = float(grid.times(min(k + 1, grid.intervals)))
  candidates = [(f(tk), tk)]
  if lo < tk < hi:
    try:
      x = optimize.golden(f, brack=(lo, tk, hi), tol=cfg.refine_tolerance)
      candidates.append((f(x), float(x)))
    except ValueError:
      x = tk
  else:
    x = tk
  root = _polish(p, w, x, lo, hi, cfg)
  s_min = min(c[0] for c in candidates)
  if root is not None and f(root) <= s_min + 1e-14:
    return float(root), min(f(root), s_min)
  s, t = min(candidates)
  return t, s


def _third_derivative_bound(p: np.ndarray, w: np.ndarray) -> float:
  """|S|² = Σp² + 2Σ_{n<m} p_n p_m cos(Δ_nm t)，三阶导数不超过 2Σ p_n p_m |Δ_nm|³"""
  i, j = np.triu_indices(w.size, k=1)
  return float(2 * np.sum(p[i] * p[j] * np.abs(w[j] - w[i]) ** 3))


def _tie_candidates(p: np.ndarray, w: np.ndarray, grid: _Grid, cands,
                    s: float) -> np.ndarray:
  """
  筛掉不可能与已细化的最优值s并列的候选网格极小点

  用相邻三点的抛物线估计区间 [k−1, k+1] 内的最小值，二次插值误差不超过
  M3·h³/(9√3)；下界仍大于 s + TIE_TOLERANCE 的候选无需细化
  """
  k = np.asarray(cands, dtype=np.int64)
  if not k.size:
    return k
  lo = np.maximum(k - 1, 0)
  hi = np.minimum(k + 1, grid.intervals)
  f0, f1, f2 = (_survival(p, w, grid.times(x)) for x in (lo, k, hi))
  curv = f0 - 2 * f1 + f2
  with np.errstate(divide='ignore', invalid='ignore'):
    est = np.where(curv > 0, f1 - (f2 - f0) ** 2 / (8 * curv), f1)
  err = _third_derivative_bound(p, w) * grid.step ** 3 / (9 * math.sqrt(3))
  lower = est - err - 1e-14
  # 搜索窗端点无法构造三点估计，全部保留
  keep = (lower <= s + TIE_TOLERANCE) | (lo == k) | (hi == k)
  return k[keep]


def _clip_tau(t, window: TimeWindow) -> float:
  return float(min(max(t, window.t_lo), window.t_hi))


def maximize_distinguishability_batch(P,
                                      spectrum: Spectrum,
                                      window: TimeWindow,
                                      cfg: GridConfig = None) -> list:
  """
  在共享网格上批量求多个态的最大可区分度

  网格步长由整批态的联合支撑集上的最大能级间隔决定，
  因此同一批的结果只依赖批内的态，与批次在哪个worker上计算无关

  Args:
    P: (样本数, N) 的权重矩阵
    spectrum: 能谱
    window: 搜索时间窗
    cfg: 网格配置
  """
  cfg = cfg or GridConfig()
  P = np.atleast_2d(np.asarray(P, dtype=float))
  assert_same_length(P[0], spectrum.frequencies)
  w = spectrum.as_array()
  active = (P > 0).sum(axis=1) >= 2
  results = [None] * P.shape[0]

  grid = make_grid(window, 0.0, cfg)
  if active.any():
    support = (P[active] > 0).any(axis=0)
    grid = make_grid(window, spectrum.max_gap(support), cfg)
    rows = np.flatnonzero(active)
    best_idx, best_val, candidates = _scan(P[rows], w, grid, cfg.slack)
    for r, k_best, s_grid, cands in zip(rows, best_idx, best_val, candidates):
      p = P[r]
      if not cfg.refine:
        t = float(grid.times(k_best))
        results[r] = OptimizationResult(
            _clip_tau(t, window), float(1 - s_grid), window, grid.points, False
        )
        continue
      t, s = _refine_at(p, w, grid, int(k_best), cfg)
      for k in _tie_candidates(p, w, grid, cands, s):
        tk, sk = _refine_at(p, w, grid, int(k), cfg)
        if sk <= s + TIE_TOLERANCE:
          t, s = tk, sk
          break
      results[r] = OptimizationResult(
          _clip_tau(t, window), float(1 - s), window, grid.points, True
      )

  # 单能级态不随时间演化，D恒为0
  for r in np.flatnonzero(~active):
    results[r] = OptimizationResult(
        float(window.t_lo), 0.0, window, grid.points, False
    )
  return results


def maximize_distinguishability(p,
                                spectrum: Spectrum,
                                window: TimeWindow,
                                cfg: GridConfig = None) -> OptimizationResult:
  """
  求单个态在搜索窗内的最大可区分度及其（最早）时间

  先按最快周期加密的网格扫描，再用黄金分割在最优网格点的相邻区间内细化，
  最后对极值条件求根；多个极大值并列时取最早的一个

  Args:
    p: 权重向量
    spectrum: 能谱
    window: 搜索时间窗，通常来自search_window
    cfg: 网格配置
  """
  p = _weights(p, spectrum)
  return maximize_distinguishability_batch(p[None, :], spectrum, window, cfg)[0]


def first_hit_time(p,
                   spectrum: Spectrum,
                   level: float,
                   window: TimeWindow,
                   cfg: GridConfig = None,
                   tau: float = None):
  """
  可区分度首次达到level的时间

  先找第一个达到level的网格点，再按时间先后细化它之前可能达到level的
  网格极大值（网格值与真实极大值之差不超过slack），最后对 D(t) − level 求根

  Args:
    p: 权重向量
    spectrum: 能谱
    level: 目标可区分度
    window: 搜索时间窗
    cfg: 网格配置
    tau: 已知 D(tau) ≥ level 的时间（通常为最大可区分度的时间），
      给定时只在tau之前搜索，且一定返回不晚于tau的时间

  Returns:
    首次达到的时间；未给定tau且在搜索窗内未达到时返回None
  """
  cfg = cfg or GridConfig()
  p = _weights(p, spectrum)
  w = spectrum.as_array()
  if level <= 0:
    return float(window.t_lo)
  grid = make_grid(window, spectrum.max_gap(p > 0), cfg)
  h = lambda t: 1 - float(_survival(p, w, t)) - level
  last = grid.intervals
  if tau is not None:
    last = min(last, max(0, math.floor((tau - grid.t_lo) / grid.step)))

  S = np.concatenate([
    _survival(p, w, grid.times(np.arange(a, min(a + TIME_BLOCK, last + 1))))
    for a in range(0, last + 1, TIME_BLOCK)
  ])
  hit = np.flatnonzero(1 - S >= level)
  first = int(hit[0]) if hit.size else None
  if first == 0:
    return float(window.t_lo)

  # first之前的网格点都低于level，都可作为求根的左端点
  stop = last if first is None else first - 1
  below = S[:stop + 1]
  ext = np.concatenate([[np.inf], below, [np.inf]])
  is_min = (below <= ext[:-2]) & (below <= ext[2:])
  for k in np.flatnonzero(is_min & (1 - below + cfg.slack >= level)):
    t, s = _refine_at(p, w, grid, int(k), cfg)
    if tau is not None and t > tau:
      break
    if first is not None and t >= grid.times(first):
      break
    if 1 - s < level:
      continue
    if h(t) <= 0:
      return _clip_tau(t, window)
    lo = float(grid.times(min(math.floor((t - grid.t_lo) / grid.step), stop)))
    if lo >= t:
      lo = float(grid.times(max(int(k) - 1, 0)))
    return _clip_tau(optimize.brentq(h, lo, t, xtol=1e-15), window)

  if first is not None:
    lo, hi = float(grid.times(first - 1)), float(grid.times(first))
    return _clip_tau(optimize.brentq(h, lo, hi, xtol=1e-15), window)
  if tau is None:
    return
  lo = float(grid.times(last))
  if lo >= tau or h(tau) <= 0:
    return _clip_tau(tau, window)
  return _clip_tau(optimize.brentq(h, lo, tau, xtol=1e-15), window)


def two_level_closed_form(p, gap: float) -> tuple:
  """
  二能级系统的精确解：τ = π/Δω，D = 1 − (p₁ − p₂)² = 4p₁p₂

  Args:
    p: 长度为2的权重向量
    gap: 能级间隔Δω
  """
  p = np.asarray(p, dtype=float)
  assert p.size == 2, f'二能级系统的权重长度必须为2，当前为{p.size}'
  assert gap > 0, f'能级间隔必须为正数，当前为{gap}'
  return math.pi / gap, float(4 * p[0] * p[1])


def n2_threshold_probability(epsilon: float) -> float:
  """
  二维系统中随机态满足 D ≥ 1 − ε 的概率

  α± = sqrt(2/(1 ± √ε) − 1)，P = (2/π)·|arctan α₊ − arctan α₋|；
  ε = 1 时 α₋ → ∞，取极限 arctan α₋ = π/2
  """
  assert_unit_interval(epsilon, 'epsilon')
  if epsilon == 0:
    return 0.0
  root = math.sqrt(epsilon)
  a_plus = math.sqrt(max(2 / (1 + root) - 1, 0.0))
  if epsilon == 1:
    arctan_minus = math.pi / 2
  else:
    arctan_minus = math.atan(math.sqrt(2 / (1 - root) - 1))
  return min(1.0, 2 / math.pi * abs(math.atan(a_plus) - arctan_minus))
