"""
量子速度极限

Mandelstam-Tamm：τ ≥ arccos(√η)/ΔE
Margolus-Levitin：τ ≥ (π/2)/E
修正的Margolus-Levitin：τ ≥ (π/2)(1 − √η)/E

E为高于（截断系统）基态的平均能量，ΔE为能量标准差，η = 1 − D，ħ = 1。
不适用的界（定态）记为None，不计为违反。
"""
import math
from dataclasses import asdict
from dataclasses import dataclass
from dataclasses import fields

import numpy as np

from ..util.assertion import assert_same_length
from ..util.assertion import assert_unit_interval
from ..util.exception import ConfigMismatchError
from .dynamics import GridConfig
from .dynamics import OptimizationResult
from .dynamics import first_hit_time
from .spectra import Spectrum

TIME_TOLERANCE = 1e-9


@dataclass(frozen=True)
class EnergyMoments:
  """高于基态的平均能量与能量标准差"""
  e_above_ground: float
  delta_e: float


@dataclass(frozen=True)
class BoundReport:
  """
  单个态的速度极限检查结果，不适用的界和标志为None

  first_hit 及 *_strict_satisfied 仅在严格模式下给出：用可区分度首次达到
  (1 − η)·d_max 的时间代替 τ 进行比较
  """
  tau: float
  eta: float
  mt_bound: float = None
  ml_bound: float = None
  modified_ml_bound: float = None
  mt_satisfied: bool = None
  ml_satisfied: bool = None
  modified_ml_satisfied: bool = None
  first_hit: float = None
  mt_strict_satisfied: bool = None
  ml_strict_satisfied: bool = None
  modified_ml_strict_satisfied: bool = None

  def to_dict(self) -> dict:
    return asdict(self)


def energy_moments(p, spectrum: Spectrum) -> EnergyMoments:
  """
  计算权重p下的能量矩

  e_above_ground = Σ p_n(ω_n − min ω)，delta_e = sqrt(Σ p_n ω_n² − (Σ p_n ω_n)²)，
  舍入误差导致的负方差截断为0
  """
  p = np.asarray(p, dtype=float)
  assert_same_length(p, spectrum.frequencies)
  w = spectrum.as_array()
  e = float(p @ (w - w.min()))
  # 以均值为中心计算方差，减少抵消误差
  mean = p @ w
  var = float(p @ (w - mean) ** 2)
  return EnergyMoments(max(e, 0.0), math.sqrt(max(var, 0.0)))


def mandelstam_tamm_bound(delta_e: float, eta: float):
  """Mandelstam-Tamm界 arccos(√η)/ΔE，ΔE = 0时不适用，返回None"""
  assert_unit_interval(eta, 'eta')
  if delta_e <= 0:
    return
  return math.acos(math.sqrt(eta)) / delta_e


def mandelstam_tamm_small_eta(delta_e: float, eta: float):
  """小η下的近似 (π/2)(1/ΔE)(1 − 2√η/π)"""
  assert_unit_interval(eta, 'eta')
  if delta_e <= 0:
    return
  return math.pi / 2 / delta_e * (1 - 2 * math.sqrt(eta) / math.pi)


def margolus_levitin_bound(e_above_ground: float):
  """Margolus-Levitin界 π/(2E)，E = 0时不适用，返回None"""
  if e_above_ground <= 0:
    return
  return math.pi / (2 * e_above_ground)


def modified_ml_bound(e_above_ground: float, eta: float):
  """修正的Margolus-Levitin界 (π/(2E))(1 − √η)"""
  assert_unit_interval(eta, 'eta')
  ml = margolus_levitin_bound(e_above_ground)
  if ml is None:
    return
  return ml * (1 - math.sqrt(eta))


def _satisfied(t, bound):
  if bound is None or t is None:
    return
  return bool(t + TIME_TOLERANCE >= bound)


def check_bounds(result: OptimizationResult,
                 p,
                 spectrum: Spectrum,
                 strict: bool = False,
                 cfg: GridConfig = None) -> BoundReport:
  """
  用找到的τ检查三个速度极限

  Args:
    result: 由(p, spectrum)得到的优化结果
    p: 权重向量
    spectrum: 能谱
    strict: 是否额外计算可区分度首次达到 (1 − η)·d_max 的时间并据此检查
    cfg: 严格模式下首达时间的网格配置
  """
  eta = min(max(1 - result.d_max, 0.0), 1.0)
  moments = energy_moments(p, spectrum)
  mt = mandelstam_tamm_bound(moments.delta_e, eta)
  ml = margolus_levitin_bound(moments.e_above_ground)
  mml = modified_ml_bound(moments.e_above_ground, eta)
  extra = {}
  if strict:
    hit = first_hit_time(p, spectrum, (1 - eta) * result.d_max,
                         result.window, cfg, tau=result.tau)
    extra = {
      'first_hit': hit,
      'mt_strict_satisfied': _satisfied(hit, mt),
      'ml_strict_satisfied': _satisfied(hit, ml),
      'modified_ml_strict_satisfied': _satisfied(hit, mml),
    }
  return BoundReport(
      tau=result.tau,
      eta=eta,
      mt_bound=mt,
      ml_bound=ml,
      modified_ml_bound=mml,
      mt_satisfied=_satisfied(result.tau, mt),
      ml_satisfied=_satisfied(result.tau, ml),
      modified_ml_satisfied=_satisfied(result.tau, mml),
      **extra,
  )


@dataclass(frozen=True)
class BoundSummary:
  """一个(维度, 能谱)单元内速度极限的适用数与违反数"""
  n: int = 0
  mt_applicable: int = 0
  mt_violations: int = 0
  ml_applicable: int = 0
  ml_violations: int = 0
  modified_ml_applicable: int = 0
  modified_ml_violations: int = 0
  ml_saturated: int = 0
  strict_checked: int = 0
  mt_strict_violations: int = 0
  ml_strict_violations: int = 0
  modified_ml_strict_violations: int = 0

  def merge(self, other: 'BoundSummary') -> 'BoundSummary':
    if not isinstance(other, BoundSummary):
      raise ConfigMismatchError(f'无法合并的类型：{type(other)}')
    return BoundSummary(**{
      f.name: getattr(self, f.name) + getattr(other, f.name)
      for f in fields(self)
    })

  def rate(self, name: str):
    """违反率，name取 mt/ml/modified_ml，无适用样本时返回None"""
    applicable = getattr(self, f'{name}_applicable')
    if not applicable:
      return
    return getattr(self, f'{name}_violations') / applicable

  def to_dict(self) -> dict:
    rv = asdict(self)
    for name in ('mt', 'ml', 'modified_ml'):
      rv[f'{name}_violation_rate'] = self.rate(name)
    return rv


def summarize_bounds(reports) -> BoundSummary:
  """汇总一组BoundReport的违反情况"""
  counts = {f.name: 0 for f in fields(BoundSummary)}
  for r in reports:
    counts['n'] += 1
    for name in ('mt', 'ml', 'modified_ml'):
      ok = getattr(r, f'{name}_satisfied')
      if ok is not None:
        counts[f'{name}_applicable'] += 1
        counts[f'{name}_violations'] += int(not ok)
      strict_ok = getattr(r, f'{name}_strict_satisfied')
      if strict_ok is not None:
        counts[f'{name}_strict_violations'] += int(not strict_ok)
    if r.first_hit is not None:
      counts['strict_checked'] += 1
    if r.ml_bound is not None and abs(r.tau - r.ml_bound) <= TIME_TOLERANCE:
      counts['ml_saturated'] += 1
  return BoundSummary(**counts)
