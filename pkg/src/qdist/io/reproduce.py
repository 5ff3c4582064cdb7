"""
图表复现

fig1：二维系统阈值曲线的解析值与蒙特卡洛值
fig2/fig5：谐振子/原子能谱代表维度的直方图（对数坐标）
fig3/fig7：谐振子/原子能谱的阈值曲线
fig4：lcm(1², …, N²) 随N的变化（对数坐标）
fig6：两类能谱的 ⟨D⟩ ± σ 随N的变化
"""
import os
import time
from dataclasses import dataclass
from dataclasses import field
from dataclasses import replace

import numpy as np
import pandas as pd

from ..ensemble.config import RunConfig
from ..ensemble.runner import run_ensemble
from ..ensemble.stat import Normalization
from ..quantum.dynamics import n2_threshold_probability
from ..quantum.spectra import SpectrumClass
from ..quantum.spectra import lcm_of_squares
from ..util.decorator import timer
from .load import to_file
from .manifest import build_manifest
from .manifest import lcm_manifest
from .manifest import write_manifest
from .svg import LINEAR
from .svg import LOG
from .svg import SvgChart
from .svg import SvgFigure

HARMONIC = SpectrumClass.HARMONIC.value
ATOMIC = SpectrumClass.ATOMIC.value
REPRESENTATIVE_DIMS = (2, 3, 4, 5, 10, 20)
THRESHOLD_DIMS = (2, 3, 4, 5, 10, 15, 20)
LCM_DIMS = tuple(range(2, 21))
FIG1_EPSILONS = np.round(np.arange(1, 20) * 0.05, 2)
# 对数坐标下空箱的显示下限（相对最大值）
DEFAULT_LOG_FLOOR = 1e-6


@dataclass(frozen=True)
class PlotSpec:
  """一张图的布局：图号、输入数据、坐标轴类型与输出路径"""
  figure: str
  title: str
  xscale: str
  yscale: str
  inputs: tuple = ()
  output: str = None

  def with_paths(self, inputs, output) -> 'PlotSpec':
    return replace(self, inputs=tuple(inputs), output=output)


FIGURES = {
  'fig1': PlotSpec('fig1', 'P(D >= 1 - eps), N = 2', LINEAR, LINEAR),
  'fig2': PlotSpec('fig2', 'Harmonic: populations of D', LINEAR, LOG),
  'fig3': PlotSpec('fig3', 'Harmonic: P(D >= 1 - eps)', LINEAR, LINEAR),
  'fig4': PlotSpec('fig4', 'lcm(1^2, ..., N^2)', LINEAR, LOG),
  'fig5': PlotSpec('fig5', 'Atomic: populations of D', LINEAR, LOG),
  'fig6': PlotSpec('fig6', 'Average maximum distinguishability', LINEAR,
                   LINEAR),
  'fig7': PlotSpec('fig7', 'Atomic: P(D >= 1 - eps)', LINEAR, LINEAR),
}


@dataclass
class Reproduction:
  spec: PlotSpec
  data: pd.DataFrame
  figure: SvgFigure
  manifest_path: str = None
  extra: dict = field(default_factory=dict)


def clamp_for_log(values, floor: float = DEFAULT_LOG_FLOOR) -> np.ndarray:
  """对数坐标显示用：非正值替换为 floor·max，数据文件中保留真实的0"""
  v = np.asarray(values, dtype=float)
  top = v.max() if v.size else 0.0
  if top <= 0:
    return v
  return np.where(v > 0, v, floor * top)


def _lcm_figure(spec: PlotSpec, dims=LCM_DIMS):
  lcms = [lcm_of_squares(n) for n in dims]
  data = pd.DataFrame({'N': list(dims), 'lcm': [str(v) for v in lcms]})
  chart = SvgChart(spec.title, 'N', 'lcm', spec.xscale, spec.yscale)
  chart.line(dims, [float(v) for v in lcms], 'lcm of squares')
  return data, SvgFigure([chart], spec.title), {}


def _fig1(spec: PlotSpec, result):
  cell = result.cell(2, HARMONIC)
  curve = cell.threshold(FIG1_EPSILONS)
  analytic = np.array([n2_threshold_probability(e) for e in FIG1_EPSILONS])
  deviation = float(np.abs(curve.probabilities - analytic).max())
  data = pd.DataFrame({
    'epsilon': FIG1_EPSILONS,
    'analytic': analytic,
    'empirical': curve.probabilities,
    'stderr': curve.stderr,
  })
  fine = np.linspace(0, 1, 201)
  chart = SvgChart(spec.title, 'epsilon', 'P(D >= 1 - eps)', spec.xscale,
                   spec.yscale, xlim=(0, 1), ylim=(0, 1))
  chart.line(fine, [n2_threshold_probability(e) for e in fine], 'theory')
  chart.markers(FIG1_EPSILONS, curve.probabilities, 'Monte Carlo',
                marker='triangle')
  return data, SvgFigure([chart], spec.title), {'max_abs_deviation': deviation}


def _histograms(spec: PlotSpec, result, kind, normalization, floor):
  frames = []
  chart = SvgChart(spec.title, 'D', 'population', spec.xscale, spec.yscale,
                   xlim=(0, 1))
  for dim in result.config.dims:
    hist = result.cell(dim, kind).histogram
    normalized = hist.normalized(normalization)
    frames.append(pd.DataFrame({
      'dim': dim,
      'bin_lower': hist.bin_lowers,
      'count': hist.counts,
      'normalized': normalized,
    }))
    chart.line(hist.bin_lowers, clamp_for_log(normalized, floor), f'N={dim}')
  data = pd.concat(frames, ignore_index=True)
  return data, SvgFigure([chart], spec.title), {
    'normalization': Normalization.parse(normalization).value,
    'log_floor': floor,
  }


def _thresholds(spec: PlotSpec, result, kind):
  frames = []
  eps = np.linspace(0, 1, result.config.epsilon_points)
  chart = SvgChart(spec.title, 'epsilon', 'P(D >= 1 - eps)', spec.xscale,
                   spec.yscale, xlim=(0, 1), ylim=(0, 1))
  for dim in result.config.dims:
    curve = result.cell(dim, kind).threshold(eps)
    frames.append(pd.DataFrame({
      'dim': dim,
      'epsilon': curve.epsilons,
      'probability': curve.probabilities,
      'stderr': curve.stderr,
    }))
    chart.line(curve.epsilons, curve.probabilities, f'N={dim}')
  return pd.concat(frames, ignore_index=True), SvgFigure([chart],
                                                         spec.title), {}


def _fig6(spec: PlotSpec, result):
  rows, panels = [], []
  reference, reference_label = None, ''
  for kind in (HARMONIC, ATOMIC):
    dims = list(result.config.dims)
    stats = [result.cell(n, kind).stats for n in dims]
    rows += [{'class': kind, 'dim': n, 'mean_d': s.mean_d, 'std_d': s.std_d,
              'n': s.n} for n, s in zip(dims, stats)]
    chart = SvgChart(kind, 'N', '<D>', spec.xscale, spec.yscale, ylim=(0, 1))
    chart.markers(dims, [s.mean_d for s in stats], '<D> +/- std',
                  yerr=[s.std_d for s in stats])
    if reference is None:
      reference = stats[-1].mean_d
      reference_label = f'{kind} <D> at N={dims[-1]}'
    chart.hline(reference, reference_label)
    panels.append(chart)
  return pd.DataFrame(rows), SvgFigure(panels, spec.title), {}


def figure_config(figure: str, base: RunConfig, dims=None) -> RunConfig:
  """复现某张图所需的最小实验配置"""
  if figure == 'fig1':
    return replace(base, dims=(2,), classes=(HARMONIC,))
  if figure in ('fig2', 'fig5'):
    kind = HARMONIC if figure == 'fig2' else ATOMIC
    return replace(base, dims=dims or REPRESENTATIVE_DIMS, classes=(kind,))
  if figure in ('fig3', 'fig7'):
    kind = HARMONIC if figure == 'fig3' else ATOMIC
    return replace(base, dims=dims or THRESHOLD_DIMS, classes=(kind,))
  if figure == 'fig6':
    return replace(base, dims=dims or LCM_DIMS, classes=(HARMONIC, ATOMIC))
  raise ValueError(f'图{figure}不需要蒙特卡洛实验')


@timer('reproduce')
def reproduce(figure: str,
              out_dir: str,
              base: RunConfig = None,
              dims=None,
              log_floor: float = DEFAULT_LOG_FLOOR,
              log=True) -> Reproduction:
  """
  运行复现某张图所需的最小实验，输出数据CSV、SVG与清单

  Args:
    figure: 图号 fig1..fig7
    out_dir: 输出目录
    base: 基础实验配置（样本数、种子、网格等），维度与能谱按图确定
    dims: 覆盖默认的代表维度
    log_floor: 对数坐标下空箱的显示下限
    log: 是否打印保存信息
  """
  if figure not in FIGURES:
    raise ValueError(f'未知的图号：{figure}，可选：{sorted(FIGURES)}')
  spec = FIGURES[figure]
  csv_path = os.path.join(out_dir, f'{figure}.csv')
  svg_path = os.path.join(out_dir, f'{figure}.svg')
  manifest_path = os.path.join(out_dir, f'{figure}_manifest.json')

  if figure == 'fig4':
    started = time.time()
    data, svg, extra = _lcm_figure(spec, dims or LCM_DIMS)
    manifest = lcm_manifest(started)
  else:
    cfg = figure_config(figure, base or RunConfig(), dims)
    result = run_ensemble(cfg)
    if figure == 'fig1':
      data, svg, extra = _fig1(spec, result)
    elif figure in ('fig2', 'fig5'):
      normalization = Normalization.TOTAL_ONE if figure == 'fig2' else \
        Normalization.TOP_BIN_ONE
      kind = HARMONIC if figure == 'fig2' else ATOMIC
      data, svg, extra = _histograms(spec, result, kind, normalization,
                                     log_floor)
    elif figure in ('fig3', 'fig7'):
      kind = HARMONIC if figure == 'fig3' else ATOMIC
      data, svg, extra = _thresholds(spec, result, kind)
    else:
      data, svg, extra = _fig6(spec, result)
    manifest = build_manifest(result)

  to_file(data, csv_path, log=log)
  svg.save(svg_path)
  spec = spec.with_paths([csv_path], svg_path)
  manifest.outputs = {'data': csv_path, 'svg': svg_path}
  manifest.extra = {'figure': figure, 'xscale': spec.xscale,
                    'yscale': spec.yscale, **extra}
  write_manifest(manifest, manifest_path)
  return Reproduction(spec, data, svg, manifest_path, extra)

