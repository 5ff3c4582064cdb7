import json
import time
from dataclasses import asdict
from dataclasses import dataclass
from dataclasses import field
from datetime import datetime
from datetime import timezone

from ..ensemble.config import RunConfig
from ..ensemble.runner import EnsembleResult
from ..quantum.spectra import SpectrumClass
from ..quantum.spectra import lcm_of_squares
from ..quantum.spectra import make_spectrum
from ..quantum.spectra import recurrence_period
from .load import to_json


@dataclass
class RunManifest:
  """
  运行清单：配置回显、版本、起止时间、输出文件与各单元的截断比例

  配置足以逐字节复现所有CSV输出
  """
  config: dict
  tool_version: str
  started: str
  finished: str
  wall_time: float
  outputs: dict = field(default_factory=dict)
  truncated_fraction: dict = field(default_factory=dict)
  cells: dict = field(default_factory=dict)
  extra: dict = field(default_factory=dict)

  def run_config(self) -> RunConfig:
    """从清单重建运行配置"""
    return RunConfig.from_dict(self.config)

  def to_dict(self) -> dict:
    return asdict(self)


def _iso(ts: float) -> str:
  return datetime.fromtimestamp(ts, tz=timezone.utc).isoformat()


def cell_info(result: EnsembleResult) -> dict:
  """每个单元的搜索窗、统计量、区间检查与速度极限汇总；大整数以十进制字符串保存"""
  rv = {}
  for cell in result.cells.values():
    info = {
      'dim': cell.dim,
      'class': cell.kind,
      't_lo': cell.window.t_lo,
      't_hi': cell.window.t_hi,
      'truncated': cell.window.truncated,
      'recurrence_period': recurrence_period(
          make_spectrum(cell.kind, cell.dim, result.config.omega)),
      'n': cell.stats.n,
      'mean_d': cell.stats.mean_d,
      'std_d': cell.stats.std_d,
      'bounds': cell.bounds.to_dict(),
    }
    if cell.kind == SpectrumClass.ATOMIC.value:
      info['lcm_of_squares'] = str(lcm_of_squares(cell.dim))
    else:
      info['interval_violations'] = cell.interval_violations
    rv[cell.key] = info
  return rv


def build_manifest(result: EnsembleResult, outputs: dict = None,
                   extra: dict = None) -> RunManifest:
  from .. import __version__
  return RunManifest(
      config=result.config.to_dict(),
      tool_version=__version__,
      started=_iso(result.started),
      finished=_iso(result.finished),
      wall_time=result.wall_time,
      outputs=outputs or {},
      truncated_fraction={
        c.key: c.truncated_fraction for c in result.cells.values()
      },
      cells=cell_info(result),
      extra=extra or {},
  )


def lcm_manifest(started: float) -> RunManifest:
  """不涉及抽样的输出（如lcm表）的清单"""
  from .. import __version__
  finished = time.time()
  return RunManifest(
      config={},
      tool_version=__version__,
      started=_iso(started),
      finished=_iso(finished),
      wall_time=finished - started,
  )


def write_manifest(manifest: RunManifest, filepath: str) -> str:
  return to_json(manifest.to_dict(), filepath)


def load_manifest(filepath: str) -> RunManifest:
  with open(filepath, encoding='utf-8') as f:
    return RunManifest(**json.load(f))
