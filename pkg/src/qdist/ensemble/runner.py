import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from dataclasses import field

import numpy as np
from tqdm import tqdm

from ..base import warn_
from ..quantum.bounds import BoundSummary
from ..quantum.bounds import check_bounds
from ..quantum.bounds import summarize_bounds
from ..quantum.dynamics import GridConfig
from ..quantum.dynamics import maximize_distinguishability_batch
from ..quantum.sampling import HAAR
from ..quantum.sampling import sample_states
from ..quantum.spectra import SearchCap
from ..quantum.spectra import SpectrumClass
from ..quantum.spectra import TimeWindow
from ..quantum.spectra import make_spectrum
from ..quantum.spectra import search_window
from ..util.decorator import get_cores
from ..util.decorator import timer
from .config import RunConfig
from .stat import CellAggregate
from .stat import default_epsilon_grid
from .stat import merge
from .stat import threshold_curve

logger = logging.getLogger('qdist.ensemble')


@dataclass(frozen=True)
class ChunkTask:
  """一个任务：某单元内样本序号 [start, stop) 的一段"""
  dim: int
  kind: str
  start: int
  stop: int
  omega: float
  master_seed: int
  measure: str
  grid: GridConfig
  cap: SearchCap
  bin_width: float
  check_bounds: bool
  strict_bounds: bool


@dataclass(frozen=True, eq=False)
class ChunkResult:
  task: ChunkTask
  d: np.ndarray
  tau: np.ndarray
  interval_violations: int
  aggregate: CellAggregate
  bounds: BoundSummary


@dataclass(eq=False)
class CellResult:
  """
  一个(维度, 能谱)单元的全部结果

  d和tau按样本序号排列；interval_violations仅对谐振子能谱统计
  """
  dim: int
  kind: str
  window: TimeWindow
  d: np.ndarray
  tau: np.ndarray
  aggregate: CellAggregate
  bounds: BoundSummary = field(default_factory=BoundSummary)
  interval_violations: int = 0

  @property
  def key(self) -> str:
    return f'{self.kind}_N{self.dim}'

  @property
  def stats(self):
    return self.aggregate.stats

  @property
  def histogram(self):
    return self.aggregate.histogram

  @property
  def truncated_fraction(self) -> float:
    return self.aggregate.stats.truncated_fraction

  def threshold(self, epsilon_grid=None):
    return threshold_curve(self.d, epsilon_grid)


@dataclass(eq=False)
class EnsembleResult:
  config: RunConfig
  cells: dict
  started: float
  finished: float

  @property
  def wall_time(self) -> float:
    return self.finished - self.started

  def cell(self, dim: int, kind) -> CellResult:
    return self.cells[(dim, SpectrumClass.parse(kind).value)]


def harmonic_interval(dim: int, omega: float) -> tuple:
  """谐振子能谱下 τ 的理论区间 [π/(ω(N−1)), π/ω]"""
  return math.pi / (omega * (dim - 1)), math.pi / omega


def harmonic_interval_violations(tau, P, dim: int, omega: float,
                                 tolerance: float) -> int:
  """统计至少两个非零权重的态中，τ 落在理论区间外的数量"""
  lo, hi = harmonic_interval(dim, omega)
  tau = np.asarray(tau, dtype=float)
  eligible = (np.asarray(P) > 0).sum(axis=1) >= 2
  outside = (tau < lo - tolerance) | (tau > hi + tolerance)
  return int((eligible & outside).sum())


def run_chunk(task: ChunkTask) -> ChunkResult:
  """计算一个任务：采样、优化、检查速度极限并做部分聚合"""
  spectrum = make_spectrum(task.kind, task.dim, task.omega)
  window = search_window(spectrum, task.cap)
  P = sample_states(task.stop - task.start, task.dim, task.master_seed,
                    start=task.start, measure=task.measure)
  results = maximize_distinguishability_batch(P, spectrum, window, task.grid)
  d = np.array([r.d_max for r in results], dtype=float)
  tau = np.array([r.tau for r in results], dtype=float)
  truncated = np.array([r.truncated for r in results], dtype=bool)

  violations = 0
  if spectrum.kind is SpectrumClass.HARMONIC:
    tolerance = task.grid.refine_tolerance * math.pi / task.omega
    violations = harmonic_interval_violations(tau, P, task.dim, task.omega,
                                              tolerance)
  bounds = BoundSummary()
  if task.check_bounds:
    bounds = summarize_bounds(
        check_bounds(r, p, spectrum, strict=task.strict_bounds, cfg=task.grid)
        for r, p in zip(results, P)
    )
  aggregate = CellAggregate.from_samples(task.dim, task.kind, d, truncated,
                                         task.bin_width)
  return ChunkResult(task, d, tau, violations, aggregate, bounds)


def make_tasks(cfg: RunConfig) -> list:
  """按单元和固定的chunk_size切分任务，切分方式与worker数量无关"""
  tasks = []
  for dim, kind in cfg.cells:
    for start in range(0, cfg.samples_per_dim, cfg.chunk_size):
      tasks.append(ChunkTask(
          dim=dim,
          kind=kind,
          start=start,
          stop=min(start + cfg.chunk_size, cfg.samples_per_dim),
          omega=cfg.omega,
          master_seed=cfg.master_seed,
          measure=cfg.measure,
          grid=cfg.grid,
          cap=cfg.cap,
          bin_width=cfg.bin_width,
          check_bounds=cfg.check_bounds,
          strict_bounds=cfg.strict_bounds,
      ))
  return tasks


def _execute(tasks: list, workers: int, progress: bool) -> list:
  if workers == 1:
    return [run_chunk(t) for t in tqdm(tasks, disable=not progress)]
  with ProcessPoolExecutor(max_workers=workers) as executor:
    return list(
        tqdm(
            executor.map(run_chunk, tasks),
            total=len(tasks),
            disable=not progress,
        )
    )


def _reduce(cfg: RunConfig, chunks: list) -> dict:
  """按单元、样本序号的固定顺序归约"""
  grouped = {cell: [] for cell in cfg.cells}
  for c in chunks:
    grouped[(c.task.dim, c.task.kind)].append(c)
  cells = {}
  for (dim, kind), parts in grouped.items():
    parts.sort(key=lambda c: c.task.start)
    aggregate = CellAggregate.empty(dim, kind, cfg.bin_width)
    bounds = BoundSummary()
    for c in parts:
      aggregate = merge(aggregate, c.aggregate)
      bounds = bounds.merge(c.bounds)
    window = search_window(make_spectrum(kind, dim, cfg.omega), cfg.cap)
    cells[(dim, kind)] = CellResult(
        dim=dim,
        kind=kind,
        window=window,
        d=np.concatenate([c.d for c in parts]),
        tau=np.concatenate([c.tau for c in parts]),
        aggregate=aggregate,
        bounds=bounds,
        interval_violations=sum(c.interval_violations for c in parts),
    )
  return cells


def _report(cells: dict):
  for cell in cells.values():
    warn_(f'{cell.key}：搜索窗截断至t={cell.window.t_hi:.6g}，'
          f'D为真实最大值的下界', cell.window.truncated, mode='logging')
    warn_(f'{cell.key}：{cell.interval_violations}个样本的τ落在谐振子理论区间外',
          cell.interval_violations > 0, mode='logging')
    mt = cell.bounds.rate('mt')
    warn_(f'{cell.key}：Mandelstam-Tamm界的违反率为{mt}，可能是网格过粗',
          bool(mt), mode='logging')
    logger.info('%s: n=%d mean_d=%.6f std_d=%.6f', cell.key, cell.stats.n,
                cell.stats.mean_d, cell.stats.std_d)


@timer('run_ensemble')
def run_ensemble(cfg: RunConfig) -> EnsembleResult:
  """
  对每个(维度, 能谱)单元抽样并求最大可区分度

  第i个样本的态只依赖(master_seed, i)，任务按固定的chunk_size切分并按
  样本序号归约，因此结果与worker数量和调度无关

  Args:
    cfg: 实验配置
  """
  warn_('使用Haar测度采样，结果不对应实高斯测度下的解析曲线',
        cfg.measure == HAAR, mode='logging')
  workers = cfg.workers or get_cores()
  tasks = make_tasks(cfg)
  logger.info('cells=%d tasks=%d workers=%d', len(cfg.cells), len(tasks),
              workers)
  started = time.time()
  chunks = _execute(tasks, workers, cfg.progress)
  assert len(chunks) == len(tasks), '任务结果数量与任务数量不一致'
  cells = _reduce(cfg, chunks)
  _report(cells)
  return EnsembleResult(cfg, cells, started, time.time())


def epsilon_grid(cfg: RunConfig) -> np.ndarray:
  return default_epsilon_grid(cfg.epsilon_points)
