import json
import os

import pandas as pd

from ..ensemble.runner import CellResult
from ..ensemble.runner import EnsembleResult
from ..ensemble.runner import epsilon_grid
from ..ensemble.stat import Histogram
from ..ensemble.stat import Normalization
from ..ensemble.stat import ThresholdCurve
from ..util.os import ensure_dirpath_exist
from ..util.os import extension

FLOAT_FORMAT = '%.17g'


def to_file(df: pd.DataFrame, filepath: str, *, log=True):
  """
  根据文件扩展名保存Dataframe，浮点数统一写出17位有效数字

  Args:
    df: 要保存的Dataframe
    filepath: 文件路径，目前仅支持.csv
    log: 是否打印保存信息
  """
  ex = extension(filepath)
  assert ex == '.csv', f'不支持的文件扩展名：{ex}'
  ensure_dirpath_exist(filepath)
  if log:
    print(f'Saving: {filepath}, Rows：{df.shape[0]}')
  df.to_csv(filepath, index=False, float_format=FLOAT_FORMAT,
            lineterminator='\n')
  return filepath


def to_json(data, filepath: str):
  """保存JSON，键排序以保证输出稳定"""
  ensure_dirpath_exist(filepath)
  with open(filepath, 'w', encoding='utf-8') as f:
    json.dump(data, f, indent=2, sort_keys=True, ensure_ascii=False)
    f.write('\n')
  return filepath


def histogram_frame(hist: Histogram, normalization=None) -> pd.DataFrame:
  """直方图表：bin_lower, count, normalized"""
  return pd.DataFrame({
    'bin_lower': hist.bin_lowers,
    'count': hist.counts,
    'normalized': hist.normalized(normalization),
  })


def threshold_frame(curve: ThresholdCurve) -> pd.DataFrame:
  """阈值曲线表：epsilon, probability, stderr"""
  return pd.DataFrame({
    'epsilon': curve.epsilons,
    'probability': curve.probabilities,
    'stderr': curve.stderr,
  })


def summary_frame(result: EnsembleResult) -> pd.DataFrame:
  """每个(维度, 能谱)单元一行的汇总表"""
  rows = []
  for cell in result.cells.values():
    bounds = cell.bounds
    rows.append({
      'dim': cell.dim,
      'class': cell.kind,
      'n': cell.stats.n,
      'mean_d': cell.stats.mean_d,
      'std_d': cell.stats.std_d,
      'truncated_fraction': cell.truncated_fraction,
      't_hi': cell.window.t_hi,
      'interval_violations': cell.interval_violations,
      'mt_violation_rate': bounds.rate('mt'),
      'ml_violation_rate': bounds.rate('ml'),
      'modified_ml_violation_rate': bounds.rate('modified_ml'),
    })
  return pd.DataFrame(rows)


def cell_paths(out_dir: str, cell: CellResult) -> dict:
  return {
    'histogram': os.path.join(out_dir, f'hist_{cell.key}.csv'),
    'threshold': os.path.join(out_dir, f'threshold_{cell.key}.csv'),
  }


def write_cells(result: EnsembleResult, out_dir: str,
                normalization=Normalization.TOTAL_ONE, log=True) -> dict:
  """
  写出每个单元的直方图与阈值曲线，以及summary.csv

  Returns:
    {单元名: {'histogram': 路径, 'threshold': 路径}}
  """
  outputs = {}
  eps = epsilon_grid(result.config)
  for cell in result.cells.values():
    paths = cell_paths(out_dir, cell)
    to_file(histogram_frame(cell.histogram, normalization),
            paths['histogram'], log=log)
    to_file(threshold_frame(cell.threshold(eps)), paths['threshold'], log=log)
    outputs[cell.key] = paths
  outputs['summary'] = to_file(summary_frame(result),
                               os.path.join(out_dir, 'summary.csv'), log=log)
  return outputs
