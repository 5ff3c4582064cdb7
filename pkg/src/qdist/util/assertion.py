import numpy as np

from ..base import ensure_list
from .exception import DimensionMismatchError

PROBABILITY_ATOL = 1e-12


def assert_positive(value, name: str):
  """检查参数是否为正数"""
  if not np.isfinite(value) or value <= 0:
    raise ValueError(f'{name}必须为正数，当前值：{value}')


def assert_dimension(n: int, minimum: int = 2):
  """检查希尔伯特空间维度"""
  if int(n) != n or n < minimum:
    raise ValueError(f'维度N必须为不小于{minimum}的整数，当前值：{n}')


def assert_dims(dims):
  """检查维度列表，每个维度都不小于2"""
  dims = ensure_list(dims)
  assert dims, '维度列表不能为空'
  for n in dims:
    assert_dimension(n)


def assert_unit_interval(value, name: str):
  """检查数值是否位于闭区间[0, 1]"""
  if not 0 <= value <= 1:
    raise ValueError(f'{name}必须位于[0, 1]区间，当前值：{value}')


def assert_probability_vector(p, atol: float = PROBABILITY_ATOL):
  """检查概率向量：非负且和为1"""
  p = np.asarray(p, dtype=float)
  if p.ndim != 1 or p.size < 1:
    raise ValueError('概率向量必须为一维非空数组')
  if (p < 0).any():
    raise ValueError(f'概率向量存在负值：{p[p < 0].tolist()}')
  if abs(p.sum() - 1) > atol:
    raise ValueError(f'概率向量之和应为1，当前为：{p.sum():.17g}')


def assert_same_length(p, frequencies):
  """检查概率向量与能谱的维度是否一致"""
  if len(p) != len(frequencies):
    raise DimensionMismatchError(
        f'维度不一致：概率向量长度{len(p)}，能谱长度{len(frequencies)}'
    )
