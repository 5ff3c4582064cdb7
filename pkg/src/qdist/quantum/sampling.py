"""
态空间采样

态 |ψ⟩ = (e^{iφ_1}x_1, …, x_N)/r 的最大可区分度与相位φ无关，
因此只保留权重 p_n = x_n²/r²，相位不进入下游计算。
"""
from dataclasses import dataclass

import numpy as np

from ..util.assertion import assert_dimension
from ..util.assertion import assert_probability_vector
from ..util.random import SeededStream
from ..util.random import substream

REAL_GAUSSIAN = 'real_gaussian'
HAAR = 'haar'
MEASURES = (REAL_GAUSSIAN, HAAR)


@dataclass(frozen=True, eq=False)
class ProbabilityVector:
  """态在能量本征基下的权重 p_n，非负且和为1"""
  p: np.ndarray

  def __post_init__(self):
    p = np.array(self.p, dtype=float)
    assert_probability_vector(p)
    p.setflags(write=False)
    object.__setattr__(self, 'p', p)

  def __len__(self):
    return self.p.size

  def __array__(self, dtype=None, copy=None):
    return self.p if dtype is None else self.p.astype(dtype)

  def __eq__(self, other):
    if not isinstance(other, ProbabilityVector):
      return NotImplemented
    return np.array_equal(self.p, other.p)

  def __hash__(self):
    return hash(self.p.tobytes())

  @property
  def dim(self) -> int:
    return self.p.size

  def support(self) -> np.ndarray:
    """非零权重的布尔掩码"""
    return self.p > 0

  def embed(self, n: int) -> 'ProbabilityVector':
    """补零嵌入到更高维度，新增能级不被占据"""
    assert n >= self.dim, f'目标维度{n}小于当前维度{self.dim}'
    return ProbabilityVector(np.concatenate([self.p, np.zeros(n - self.dim)]))


def _draw_weights(gen: np.random.Generator, n: int, measure: str):
  if measure == REAL_GAUSSIAN:
    return gen.standard_normal(n) ** 2
  # Haar：复高斯坐标，|z|²服从指数分布，p ~ Dirichlet(1, …, 1)
  return gen.standard_normal(n) ** 2 + gen.standard_normal(n) ** 2


def sample_weights(n: int, rng: SeededStream, measure: str = REAL_GAUSSIAN):
  """抽取一个态的权重数组，r = 0 的零测事件重新抽取"""
  assert measure in MEASURES, f'未知的采样测度：{measure}，可选：{MEASURES}'
  gen = rng.generator()
  while True:
    w = _draw_weights(gen, n, measure)
    r2 = w.sum()
    if r2 > 0:
      return w / r2


def sample_state(n: int,
                 rng: SeededStream,
                 measure: str = REAL_GAUSSIAN) -> ProbabilityVector:
  """
  按态空间的均匀测度抽取一个态并约化为权重向量

  默认抽取N个独立标准正态实数 x_n，返回 p_n = x_n²/r²，
  p 服从 Dirichlet(1/2, …, 1/2)；measure='haar' 时使用复高斯坐标，
  p 服从 Dirichlet(1, …, 1)

  Args:
    n: 希尔伯特空间维度
    rng: 随机数子流
    measure: 'real_gaussian' 或 'haar'
  """
  assert_dimension(n)
  return ProbabilityVector(sample_weights(n, rng, measure))


def sample_states(count: int,
                  n: int,
                  master_seed: int,
                  start: int = 0,
                  measure: str = REAL_GAUSSIAN) -> np.ndarray:
  """
  抽取样本序号为 start..start+count-1 的态，返回 (count, n) 的权重矩阵

  第i行只依赖 (master_seed, start + i)
  """
  assert_dimension(n)
  rows = np.empty((count, n), dtype=float)
  for i in range(count):
    rows[i] = sample_weights(n, substream(master_seed, start + i), measure)
  return rows
