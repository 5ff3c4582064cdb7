from dataclasses import dataclass
from dataclasses import field

from ..base import ensure_list
from ..quantum.dynamics import GridConfig
from ..quantum.sampling import MEASURES
from ..quantum.sampling import REAL_GAUSSIAN
from ..quantum.spectra import SearchCap
from ..quantum.spectra import SpectrumClass
from ..util.assertion import assert_dims
from ..util.assertion import assert_positive
from ..util.random import ensure_seed

DEFAULT_DIMS = tuple(range(2, 21))
DEFAULT_CLASSES = (SpectrumClass.HARMONIC.value, SpectrumClass.ATOMIC.value)
DEFAULT_SAMPLES = 100_000
DEFAULT_BIN_WIDTH = 0.01
DEFAULT_EPSILON_POINTS = 101
DEFAULT_CHUNK_SIZE = 256


@dataclass(frozen=True)
class RunConfig:
  """
  一次蒙特卡洛实验的完整配置，配置（不含workers和progress）唯一决定输出

  Args:
    dims: 希尔伯特空间维度列表
    classes: 能谱类型，harmonic/atomic
    samples_per_dim: 每个(维度, 能谱)单元的样本数
    omega: 基础角频率
    master_seed: 64位主种子
    grid: 网格扫描配置
    cap: 原子能谱搜索窗上限
    measure: 采样测度，real_gaussian/haar
    bin_width: 直方图的箱宽
    epsilon_points: 阈值曲线在[0, 1]上的均匀点数
    chunk_size: 每个任务包含的样本数，决定归约顺序
    workers: 进程数，None时按CPU核数
    check_bounds: 是否检查速度极限
    strict_bounds: 是否使用首达时间进行严格检查
    progress: 是否显示进度条
  """
  dims: tuple = DEFAULT_DIMS
  classes: tuple = DEFAULT_CLASSES
  samples_per_dim: int = DEFAULT_SAMPLES
  omega: float = 1.0
  master_seed: int = 0
  grid: GridConfig = field(default_factory=GridConfig)
  cap: SearchCap = field(default_factory=SearchCap)
  measure: str = REAL_GAUSSIAN
  bin_width: float = DEFAULT_BIN_WIDTH
  epsilon_points: int = DEFAULT_EPSILON_POINTS
  chunk_size: int = DEFAULT_CHUNK_SIZE
  workers: int = None
  check_bounds: bool = True
  strict_bounds: bool = False
  progress: bool = True

  def __post_init__(self):
    dims = tuple(int(n) for n in ensure_list(self.dims))
    assert_dims(dims)
    classes = tuple(
        SpectrumClass.parse(c).value for c in ensure_list(self.classes)
    )
    assert classes, '能谱类型不能为空'
    if self.samples_per_dim < 1:
      raise ValueError(f'samples_per_dim至少为1，当前值：{self.samples_per_dim}')
    assert_positive(self.omega, 'omega')
    assert self.measure in MEASURES, f'未知的采样测度：{self.measure}'
    if not 0 < self.bin_width <= 1:
      raise ValueError(f'bin_width必须位于(0, 1]，当前值：{self.bin_width}')
    assert self.epsilon_points >= 2, 'epsilon_points至少为2'
    assert self.chunk_size >= 1, 'chunk_size至少为1'
    assert self.workers is None or self.workers >= 1, 'workers至少为1'
    object.__setattr__(self, 'dims', dims)
    object.__setattr__(self, 'classes', classes)
    object.__setattr__(self, 'master_seed', ensure_seed(self.master_seed))
    if isinstance(self.grid, dict):
      object.__setattr__(self, 'grid', GridConfig.from_dict(self.grid))
    if isinstance(self.cap, dict):
      object.__setattr__(self, 'cap', SearchCap(**self.cap))

  @property
  def cells(self) -> list:
    """所有(维度, 能谱)单元，按维度、能谱顺序排列"""
    return [(n, c) for n in self.dims for c in self.classes]

  def to_dict(self) -> dict:
    return {
      'dims': list(self.dims),
      'classes': list(self.classes),
      'samples_per_dim': self.samples_per_dim,
      'omega': self.omega,
      'master_seed': self.master_seed,
      'grid': self.grid.to_dict(),
      'cap': self.cap.to_dict(),
      'measure': self.measure,
      'bin_width': self.bin_width,
      'epsilon_points': self.epsilon_points,
      'chunk_size': self.chunk_size,
      'workers': self.workers,
      'check_bounds': self.check_bounds,
      'strict_bounds': self.strict_bounds,
      'progress': self.progress,
    }

  @classmethod
  def from_dict(cls, data: dict) -> 'RunConfig':
    return cls(**data)
