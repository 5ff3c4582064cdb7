from dataclasses import dataclass

import numpy as np

SEED_MODULUS = 2 ** 64


def ensure_seed(seed) -> int:
  """规范主种子为64位无符号整数"""
  if int(seed) != seed:
    raise ValueError(f'种子必须为整数，当前值：{seed}')
  return int(seed) % SEED_MODULUS


@dataclass(frozen=True)
class SeededStream:
  """
  可复现的随机数子流，由(master_seed, stream_index)唯一确定

  Args:
    master_seed: 64位主种子
    stream_index: 子流编号，通常为样本序号
  """
  master_seed: int
  stream_index: int

  def generator(self) -> np.random.Generator:
    """生成该子流对应的随机数生成器，每次调用都从子流起点开始"""
    seq = np.random.SeedSequence(
        entropy=self.master_seed,
        spawn_key=(self.stream_index,),
    )
    return np.random.Generator(np.random.PCG64(seq))


def substream(master_seed: int, sample_index: int) -> SeededStream:
  """
  派生第sample_index个样本的随机数子流

  子流只依赖(master_seed, sample_index)，与worker数量和调度顺序无关
  """
  if int(sample_index) != sample_index or sample_index < 0:
    raise ValueError(f'样本序号必须为非负整数，当前值：{sample_index}')
  return SeededStream(ensure_seed(master_seed), int(sample_index))
