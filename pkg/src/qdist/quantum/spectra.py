"""
能谱构造与搜索时间窗

能量统一以角频率表示（ħ = 1）。谐振子能谱等间距，原子能谱为截断的玻尔模型，
其保真度的复现周期由 {1², 2², …, N²} 的最小公倍数决定。
"""
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from functools import reduce

import numpy as np

from ..util.assertion import assert_dimension
from ..util.assertion import assert_positive

DEFAULT_CAP_MULTIPLIER = 10


class SpectrumClass(str, Enum):
  HARMONIC = 'harmonic'
  ATOMIC = 'atomic'

  @classmethod
  def parse(cls, value) -> 'SpectrumClass':
    """从字符串解析能谱类型，不区分大小写"""
    if isinstance(value, cls):
      return value
    try:
      return cls(str(value).lower())
    except ValueError:
      raise ValueError(f'未知的能谱类型：{value}，可选：harmonic/atomic')


@dataclass(frozen=True)
class Spectrum:
  """
  有序的角频率列表

  Args:
    kind: 能谱类型
    omega: 基础角频率
    frequencies: 各能级角频率 ω_n，n = 1..N，严格递增
  """
  kind: SpectrumClass
  omega: float
  frequencies: tuple

  @property
  def dim(self) -> int:
    return len(self.frequencies)

  def as_array(self) -> np.ndarray:
    return np.asarray(self.frequencies, dtype=float)

  def gaps(self) -> np.ndarray:
    """所有能级对的频率差 |ω_n − ω_m|（n > m）"""
    w = self.as_array()
    i, j = np.triu_indices(self.dim, k=1)
    return np.abs(w[j] - w[i])

  def max_gap(self, support=None) -> float:
    """
    最大的能级间隔，可限定在给定的能级子集上

    Args:
      support: 布尔掩码或下标，仅统计这些能级之间的间隔
    """
    w = self.as_array()
    if support is not None:
      w = w[np.asarray(support)]
    if w.size < 2:
      return 0.0
    return float(w.max() - w.min())


@dataclass(frozen=True)
class SearchCap:
  """原子能谱搜索窗的上限倍数K，窗口上界不超过 K·N³·π/ω"""
  multiplier: float = DEFAULT_CAP_MULTIPLIER

  def __post_init__(self):
    assert_positive(self.multiplier, 'cap multiplier')

  def to_dict(self) -> dict:
    return {'multiplier': self.multiplier}


@dataclass(frozen=True)
class TimeWindow:
  """搜索时间窗 [t_lo, t_hi]，truncated表示窗口被截断到完整复现周期以内"""
  t_lo: float
  t_hi: float
  truncated: bool = False

  def __post_init__(self):
    assert self.t_lo >= 0, f't_lo不能为负数：{self.t_lo}'

  @property
  def length(self) -> float:
    return self.t_hi - self.t_lo


def harmonic_spectrum(n: int, omega: float = 1.0) -> Spectrum:
  """谐振子能谱 ω_n = n·ω，n = 1..N"""
  assert_dimension(n)
  assert_positive(omega, 'omega')
  frequencies = tuple(float(k * omega) for k in range(1, n + 1))
  return Spectrum(SpectrumClass.HARMONIC, float(omega), frequencies)


def atomic_spectrum(n: int, omega: float = 1.0) -> Spectrum:
  """原子（截断玻尔模型）能谱 ω_n = −ω/n²，n = 1..N"""
  assert_dimension(n)
  assert_positive(omega, 'omega')
  frequencies = tuple(-float(omega) / (k * k) for k in range(1, n + 1))
  return Spectrum(SpectrumClass.ATOMIC, float(omega), frequencies)


def make_spectrum(kind, n: int, omega: float = 1.0) -> Spectrum:
  """按类型构造能谱"""
  kind = SpectrumClass.parse(kind)
  if kind is SpectrumClass.HARMONIC:
    return harmonic_spectrum(n, omega)
  return atomic_spectrum(n, omega)


@lru_cache(maxsize=None)
def lcm_of_squares(n: int) -> int:
  """
  {1², 2², …, N²} 的最小公倍数，使用任意精度整数逐项通过gcd迭代计算

  Examples:
    >>> lcm_of_squares(4)
    144
  """
  if int(n) != n or n < 1:
    raise ValueError(f'N必须为正整数，当前值：{n}')
  return reduce(
      lambda acc, k: acc * (k * k) // math.gcd(acc, k * k),
      range(1, int(n) + 1),
      1,
  )


def recurrence_period(spectrum: Spectrum) -> float:
  """保真度的复现周期：谐振子为 2π/ω，原子为 2π·lcm(1², …, N²)/ω"""
  if spectrum.kind is SpectrumClass.HARMONIC:
    return 2 * math.pi / spectrum.omega
  return 2 * math.pi * float(lcm_of_squares(spectrum.dim)) / spectrum.omega


def search_window(spectrum: Spectrum, cap: SearchCap = None) -> TimeWindow:
  """
  最大可区分度的搜索时间窗

  谐振子取一个完整周期 [0, 2π/ω]；原子取
  [0, min((π/ω)·lcm(1², …, N²), K·N³·π/ω)]，上限生效时truncated为True

  Args:
    spectrum: 能谱
    cap: 原子能谱的窗口上限配置
  """
  cap = cap or SearchCap()
  omega = spectrum.omega
  if spectrum.kind is SpectrumClass.HARMONIC:
    return TimeWindow(0.0, 2 * math.pi / omega, False)
  n = spectrum.dim
  lcm = lcm_of_squares(n)
  # 整数比较，避免大数转浮点时的舍入
  truncated = lcm > cap.multiplier * n ** 3
  if truncated:
    t_hi = cap.multiplier * n ** 3 * math.pi / omega
  else:
    t_hi = lcm * math.pi / omega
  return TimeWindow(0.0, float(t_hi), bool(truncated))
