"""
静态SVG图

不依赖绘图库，直接生成SVG文本。每个数据点都带有 data-x/data-y 属性
（原始数值），便于按数据而非像素比较图形。
"""
import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from ..util.os import ensure_dirpath_exist

PALETTE = [
  '#1f77b4', '#ff7f0e', '#2ca02c', '#d62728', '#9467bd',
  '#8c564b', '#e377c2', '#7f7f7f', '#bcbd22', '#17becf',
]
FONT = 'font-family="sans-serif"'
LINEAR = 'linear'
LOG = 'log'


def _num(x) -> str:
  return f'{float(x):.17g}'


def _px(x) -> str:
  return f'{float(x):.2f}'


@dataclass
class Series:
  label: str
  xs: np.ndarray
  ys: np.ndarray
  kind: str = 'line'
  marker: str = 'circle'
  dash: bool = False
  yerr: np.ndarray = None
  color: str = None


class SvgChart:
  """
  单个坐标系

  Args:
    title: 标题
    xlabel: x轴标签
    ylabel: y轴标签
    xscale: linear或log
    yscale: linear或log
    xlim: x轴范围，默认取数据范围
    ylim: y轴范围，默认取数据范围
  """

  def __init__(self, title='', xlabel='', ylabel='', xscale=LINEAR,
               yscale=LINEAR, xlim=None, ylim=None, width=480, height=360):
    assert xscale in (LINEAR, LOG) and yscale in (LINEAR, LOG), \
      '坐标轴类型只能为linear或log'
    self.title = title
    self.xlabel = xlabel
    self.ylabel = ylabel
    self.xscale = xscale
    self.yscale = yscale
    self.xlim = xlim
    self.ylim = ylim
    self.width = width
    self.height = height
    self.margin = (50, 20, 45, 65)  # top, right, bottom, left
    self.series = []
    self.hlines = []

  def _add(self, series: Series):
    series.color = series.color or PALETTE[len(self.series) % len(PALETTE)]
    self.series.append(series)
    return self

  def line(self, xs, ys, label='', dash=False, color=None):
    return self._add(Series(label, np.asarray(xs, float),
                            np.asarray(ys, float), 'line', dash=dash,
                            color=color))

  def markers(self, xs, ys, label='', marker='circle', yerr=None, color=None):
    yerr = None if yerr is None else np.asarray(yerr, float)
    return self._add(Series(label, np.asarray(xs, float),
                            np.asarray(ys, float), 'markers', marker=marker,
                            yerr=yerr, color=color))

  def hline(self, y, label=''):
    self.hlines.append((float(y), label))
    return self

  def _t(self, v, scale):
    v = np.asarray(v, float)
    if scale == LOG:
      with np.errstate(divide='ignore', invalid='ignore'):
        return np.where(v > 0, np.log10(np.where(v > 0, v, 1)), np.nan)
    return v

  def _limits(self, axis):
    lim, scale = (self.xlim, self.xscale) if axis == 'x' else (
      self.ylim, self.yscale)
    if lim is not None:
      lo, hi = self._t(lim, scale)
    else:
      values = []
      for s in self.series:
        values.append(self._t(s.xs if axis == 'x' else s.ys, scale))
        if axis == 'y' and s.yerr is not None:
          values.append(self._t(s.ys + s.yerr, scale))
          values.append(self._t(s.ys - s.yerr, scale))
      if axis == 'y':
        values.append(self._t([y for y, _ in self.hlines], scale))
      v = np.concatenate([np.ravel(a) for a in values]) if values else []
      v = v[np.isfinite(v)] if len(v) else np.array([0.0, 1.0])
      lo, hi = (float(v.min()), float(v.max())) if v.size else (0.0, 1.0)
      if scale == LOG:
        lo, hi = math.floor(lo), math.ceil(hi)
    if hi <= lo:
      hi = lo + 1
    return float(lo), float(hi)

  def _ticks(self, lo, hi, scale):
    if scale == LOG:
      return [(v, f'1e{int(v)}') for v in range(int(lo), int(hi) + 1)]
    return [(v, f'{v:.3g}') for v in np.linspace(lo, hi, 5)]

  def render(self, x0=0.0, y0=0.0) -> str:
    """渲染为一个 <g> 元素"""
    top, right, bottom, left = self.margin
    pw = self.width - left - right
    ph = self.height - top - bottom
    xlo, xhi = self._limits('x')
    ylo, yhi = self._limits('y')

    def sx(v):
      return left + (v - xlo) / (xhi - xlo) * pw

    def sy(v):
      return top + ph - (v - ylo) / (yhi - ylo) * ph

    out = [f'<g transform="translate({_px(x0)},{_px(y0)})">']
    out.append(f'<text x="{_px(left + pw / 2)}" y="25" text-anchor="middle" '
               f'{FONT} font-size="14">{escape(self.title)}</text>')
    out.append(f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" '
               f'fill="none" stroke="black"/>')
    for v, text in self._ticks(xlo, xhi, self.xscale):
      out.append(f'<text x="{_px(sx(v))}" y="{_px(top + ph + 15)}" '
                 f'text-anchor="middle" {FONT} font-size="10">{text}</text>')
    for v, text in self._ticks(ylo, yhi, self.yscale):
      out.append(f'<text x="{left - 5}" y="{_px(sy(v) + 3)}" '
                 f'text-anchor="end" {FONT} font-size="10">{text}</text>')
    out.append(f'<text x="{_px(left + pw / 2)}" y="{self.height - 8}" '
               f'text-anchor="middle" {FONT} font-size="12">'
               f'{escape(self.xlabel)}</text>')
    out.append(f'<text x="15" y="{_px(top + ph / 2)}" text-anchor="middle" '
               f'{FONT} font-size="12" transform="rotate(-90 15,'
               f'{_px(top + ph / 2)})">{escape(self.ylabel)}</text>')
    for y, label in self.hlines:
      ty = float(self._t(y, self.yscale))
      out.append(f'<line class="hline" x1="{left}" x2="{left + pw}" '
                 f'y1="{_px(sy(ty))}" y2="{_px(sy(ty))}" stroke="gray" '
                 f'stroke-dasharray="6,4"/>')
      if label:
        out.append(f'<text class="hline-label" x="{_px(left + 5)}" '
                   f'y="{_px(sy(ty) - 4)}" {FONT} font-size="10" '
                   f'fill="gray">{escape(label)}</text>')

    for i, s in enumerate(self.series):
      tx, ty = self._t(s.xs, self.xscale), self._t(s.ys, self.yscale)
      ok = np.isfinite(tx) & np.isfinite(ty)
      out.append(f'<g class="series" data-label="{escape(s.label)}">')
      if s.kind == 'line':
        pts = ' '.join(f'{_px(sx(a))},{_px(sy(b))}'
                       for a, b in zip(tx[ok], ty[ok]))
        dash = ' stroke-dasharray="5,3"' if s.dash else ''
        out.append(f'<polyline points="{pts}" fill="none" stroke="{s.color}" '
                   f'stroke-width="1.5"{dash}/>')
      for j in np.flatnonzero(ok):
        px, py = sx(tx[j]), sy(ty[j])
        attrs = f'class="point" data-x="{_num(s.xs[j])}" ' \
                f'data-y="{_num(s.ys[j])}"'
        if s.kind == 'line':
          out.append(f'<circle {attrs} cx="{_px(px)}" cy="{_px(py)}" r="0" '
                     f'fill="none"/>')
          continue
        if s.yerr is not None:
          lo_y = self._t(s.ys[j] - s.yerr[j], self.yscale)
          hi_y = self._t(s.ys[j] + s.yerr[j], self.yscale)
          if np.isfinite(lo_y) and np.isfinite(hi_y):
            out.append(f'<line class="errorbar" x1="{_px(px)}" '
                       f'x2="{_px(px)}" y1="{_px(sy(lo_y))}" '
                       f'y2="{_px(sy(hi_y))}" stroke="{s.color}"/>')
        if s.marker == 'triangle':
          tri = f'{_px(px)},{_px(py - 4)} {_px(px - 4)},{_px(py + 3)} ' \
                f'{_px(px + 4)},{_px(py + 3)}'
          out.append(f'<polygon {attrs} points="{tri}" fill="{s.color}"/>')
        else:
          out.append(f'<circle {attrs} cx="{_px(px)}" cy="{_px(py)}" r="3" '
                     f'fill="{s.color}"/>')
      out.append('</g>')
      ly = top + 14 + 14 * i
      out.append(f'<text class="legend" x="{_px(left + pw - 5)}" y="{ly}" '
                 f'text-anchor="end" {FONT} font-size="10" '
                 f'fill="{s.color}">{escape(s.label)}</text>')
    out.append('</g>')
    return '\n'.join(out)


class SvgFigure:
  """横向排列的一个或多个坐标系"""

  def __init__(self, panels, title=''):
    self.panels = list(panels)
    self.title = title

  @property
  def width(self):
    return sum(p.width for p in self.panels)

  @property
  def height(self):
    return max(p.height for p in self.panels) + (30 if self.title else 0)

  def to_string(self) -> str:
    offset = 30 if self.title else 0
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" '
           f'height="{self.height}" style="background-color: white;">']
    if self.title:
      out.append(f'<text x="{self.width / 2:.1f}" y="20" text-anchor="middle" '
                 f'{FONT} font-size="16">{escape(self.title)}</text>')
    x = 0
    for p in self.panels:
      out.append(p.render(x, offset))
      x += p.width
    out.append('</svg>')
    return '\n'.join(out) + '\n'

  def save(self, filepath: str) -> str:
    ensure_dirpath_exist(filepath)
    with open(filepath, 'w', encoding='utf-8') as f:
      f.write(self.to_string())
    return filepath
