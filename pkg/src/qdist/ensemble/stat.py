"""
可区分度样本的聚合：直方图、阈值曲线与统计量

所有部分聚合都可以用merge合并，计数相加，均值方差按合并公式计算，
因此按样本序号的固定顺序归约时结果与并行方式无关。
"""
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..base import warn_
from ..util.exception import ConfigMismatchError
from ..util.exception import EmptySampleError
from ..util.exception import SampleRangeError
from .config import DEFAULT_BIN_WIDTH
from .config import DEFAULT_EPSILON_POINTS

RANGE_TOLERANCE = 1e-9
THRESHOLD_TOLERANCE = 1e-9
STATS_BLOCK = 4096


class Normalization(str, Enum):
  TOTAL_ONE = 'total_one'
  TOP_BIN_ONE = 'top_bin_one'
  RAW_COUNTS = 'raw_counts'

  @classmethod
  def parse(cls, value) -> 'Normalization':
    if isinstance(value, cls):
      return value
    try:
      return cls(str(value).lower())
    except ValueError:
      raise ValueError(
          f'未知的归一化方式：{value}，可选：{[m.value for m in cls]}'
      )


def n_bins(bin_width: float) -> int:
  """[0, 1]按bin_width划分的箱数，要求1/bin_width为整数"""
  n = round(1 / bin_width)
  if n < 1 or abs(n * bin_width - 1) > 1e-9:
    raise ValueError(f'bin_width必须整除1，当前值：{bin_width}')
  return n


def bin_lowers(nb: int) -> np.ndarray:
  """各箱下沿 k/nb，既用于分箱也用于输出"""
  return np.arange(nb) / nb


def check_samples(samples) -> np.ndarray:
  """检查样本位于[0, 1]（容差1e-9），超出即视为优化器错误"""
  d = np.asarray(samples, dtype=float).ravel()
  bad = (d < -RANGE_TOLERANCE) | (d > 1 + RANGE_TOLERANCE) | ~np.isfinite(d)
  if bad.any():
    raise SampleRangeError(f'可区分度样本超出[0, 1]：{d[bad][:5].tolist()}')
  return np.clip(d, 0.0, 1.0)


@dataclass(frozen=True, eq=False)
class Histogram:
  """
  [0, 1]上的等宽直方图，保存原始计数，归一化仅在输出时进行

  箱为半开区间 [k·w, (k+1)·w)，最后一个箱包含1
  """
  bin_width: float
  counts: np.ndarray
  normalization: Normalization = Normalization.TOTAL_ONE

  @property
  def samples(self) -> int:
    return int(self.counts.sum())

  @property
  def bin_lowers(self) -> np.ndarray:
    return bin_lowers(self.counts.size)

  def normalized(self, normalization=None) -> np.ndarray:
    """按归一化方式输出：总和为1、D=1所在箱为1、或原始计数"""
    mode = Normalization.parse(normalization or self.normalization)
    counts = self.counts.astype(float)
    if mode is Normalization.RAW_COUNTS:
      return counts
    if mode is Normalization.TOTAL_ONE:
      total = counts.sum()
      return counts / total if total else counts
    top = counts[-1]
    warn_('D=1所在的箱为空，改为按最大箱归一化', not top, mode='logging')
    top = top or counts.max()
    return counts / top if top else counts

  def merge(self, other: 'Histogram') -> 'Histogram':
    if self.counts.size != other.counts.size:
      raise ConfigMismatchError(
          f'箱宽不一致：{self.bin_width} != {other.bin_width}'
      )
    return Histogram(self.bin_width, self.counts + other.counts,
                     self.normalization)

  @classmethod
  def empty(cls, bin_width=DEFAULT_BIN_WIDTH,
            normalization=Normalization.TOTAL_ONE) -> 'Histogram':
    return cls(bin_width, np.zeros(n_bins(bin_width), dtype=np.int64),
               Normalization.parse(normalization))


def histogram(samples,
              bin_width: float = DEFAULT_BIN_WIDTH,
              normalization=Normalization.TOTAL_ONE) -> Histogram:
  """
  统计可区分度样本的直方图

  Args:
    samples: D样本
    bin_width: 箱宽，默认0.01
    normalization: 输出时的归一化方式
  """
  d = check_samples(samples)
  nb = n_bins(bin_width)
  # 恰好落在下沿k/nb上的样本归入第k个箱
  idx = np.searchsorted(bin_lowers(nb), d, side='right') - 1
  counts = np.bincount(idx, minlength=nb).astype(np.int64)
  return Histogram(bin_width, counts, Normalization.parse(normalization))


@dataclass(frozen=True, eq=False)
class ThresholdCurve:
  """P(D ≥ 1 − ε) 随ε的变化，附二项分布标准误"""
  epsilons: np.ndarray
  probabilities: np.ndarray
  stderr: np.ndarray
  samples: int


def default_epsilon_grid(points: int = DEFAULT_EPSILON_POINTS) -> np.ndarray:
  return np.linspace(0.0, 1.0, points)


def threshold_curve(samples, epsilon_grid=None) -> ThresholdCurve:
  """
  阈值曲线 P(ε) = #{D ≥ 1 − ε}/n

  D与阈值的比较带1e-9的容差，ε = 0时统计的是D = 1（容差内）的比例

  Args:
    samples: D样本
    epsilon_grid: [0, 1]内递增的ε网格，默认101个均匀点
  """
  d = np.sort(check_samples(samples))
  if d.size == 0:
    raise EmptySampleError('阈值曲线的样本为空')
  eps = default_epsilon_grid() if epsilon_grid is None else np.asarray(
      epsilon_grid, dtype=float)
  if (eps < 0).any() or (eps > 1).any():
    raise ValueError('ε网格必须位于[0, 1]')
  if (np.diff(eps) < 0).any():
    raise ValueError('ε网格必须递增')
  n = d.size
  counts = n - np.searchsorted(d, 1 - eps - THRESHOLD_TOLERANCE, side='left')
  prob = counts / n
  stderr = np.sqrt(prob * (1 - prob) / n)
  return ThresholdCurve(eps, prob, stderr, n)


@dataclass(frozen=True)
class EnsembleStats:
  """
  最大可区分度的均值与总体标准差

  Args:
    mean_d: 均值
    std_d: 总体标准差
    n: 样本数
    truncated_fraction: 搜索窗被截断的样本比例
  """
  mean_d: float = 0.0
  std_d: float = 0.0
  n: int = 0
  truncated_fraction: float = 0.0

  @property
  def stderr(self) -> float:
    return self.std_d / math.sqrt(self.n) if self.n else math.nan

  def merge(self, other: 'EnsembleStats') -> 'EnsembleStats':
    """按合并公式汇总两组统计量，空统计量为单位元"""
    if not other.n:
      return self
    if not self.n:
      return other
    n = self.n + other.n
    delta = other.mean_d - self.mean_d
    mean = self.mean_d + delta * other.n / n
    m2 = (self.std_d ** 2 * self.n + other.std_d ** 2 * other.n +
          delta * delta * self.n * other.n / n)
    truncated = (self.truncated_fraction * self.n +
                 other.truncated_fraction * other.n) / n
    return EnsembleStats(mean, math.sqrt(max(m2, 0.0) / n), n, truncated)


def summary_stats(samples, truncated=None) -> EnsembleStats:
  """
  分块单遍累积计算均值与总体标准差

  Args:
    samples: D样本
    truncated: 与样本对应的截断标志，默认全部未截断
  """
  d = check_samples(samples)
  if d.size == 0:
    raise EmptySampleError('统计量的样本为空')
  flags = np.zeros(d.size, bool) if truncated is None else np.asarray(
      truncated, dtype=bool).ravel()
  assert flags.size == d.size, '截断标志与样本长度不一致'
  rv = EnsembleStats()
  for a in range(0, d.size, STATS_BLOCK):
    block = d[a:a + STATS_BLOCK]
    rv = rv.merge(EnsembleStats(
        float(block.mean()),
        float(block.std()),
        block.size,
        float(flags[a:a + STATS_BLOCK].mean()),
    ))
  return rv


@dataclass(frozen=True)
class CellAggregate:
  """一个(维度, 能谱)单元的部分聚合，可按merge合并"""
  dim: int
  kind: str
  histogram: Histogram
  stats: EnsembleStats

  @property
  def key(self) -> tuple:
    return self.dim, self.kind, self.histogram.bin_width

  @classmethod
  def empty(cls, dim, kind, bin_width=DEFAULT_BIN_WIDTH) -> 'CellAggregate':
    return cls(dim, kind, Histogram.empty(bin_width), EnsembleStats())

  @classmethod
  def from_samples(cls, dim, kind, samples, truncated=None,
                   bin_width=DEFAULT_BIN_WIDTH) -> 'CellAggregate':
    if len(samples) == 0:
      return cls.empty(dim, kind, bin_width)
    return cls(dim, kind, histogram(samples, bin_width),
               summary_stats(samples, truncated))


def merge(a: CellAggregate, b: CellAggregate) -> CellAggregate:
  """
  合并两个部分聚合：直方图计数相加，统计量按合并公式计算

  两者的(维度, 能谱, 箱宽)必须一致
  """
  if a.key != b.key:
    raise ConfigMismatchError(f'无法合并不同单元的聚合：{a.key} != {b.key}')
  return CellAggregate(a.dim, a.kind, a.histogram.merge(b.histogram),
                       a.stats.merge(b.stats))
