"""
命令行入口

  qdist run --dims 2..20 --class both --samples 100000 --seed 7
  qdist reproduce fig4
  qdist lcm 4
  qdist analytic 0.5
  qdist bounds --dims 2..5 --samples 1000 --strict-bounds

退出码：0成功，1运行错误（含IO错误），2参数错误
"""
import argparse
import json
import logging
import os
import sys

from .ensemble.config import DEFAULT_BIN_WIDTH
from .ensemble.config import DEFAULT_CHUNK_SIZE
from .ensemble.config import DEFAULT_DIMS
from .ensemble.config import DEFAULT_SAMPLES
from .ensemble.config import RunConfig
from .ensemble.runner import run_ensemble
from .ensemble.stat import Normalization
from .io.load import to_json
from .io.load import write_cells
from .io.manifest import build_manifest
from .io.manifest import write_manifest
from .io.reproduce import FIGURES
from .io.reproduce import reproduce
from .quantum.dynamics import DEFAULT_POINTS_PER_PERIOD
from .quantum.dynamics import DEFAULT_REFINE_TOLERANCE
from .quantum.dynamics import GridConfig
from .quantum.dynamics import n2_threshold_probability
from .quantum.sampling import MEASURES
from .quantum.sampling import REAL_GAUSSIAN
from .quantum.spectra import DEFAULT_CAP_MULTIPLIER
from .quantum.spectra import SearchCap
from .quantum.spectra import SpectrumClass
from .quantum.spectra import lcm_of_squares
from .util.exception import QdistError
from .util.os import default_output_dir

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
DEFAULT_BOUNDS_SAMPLES = 1000

logger = logging.getLogger('qdist.cli')


class UsageError(Exception):
  """参数可以解析但取值不合法"""


def parse_dims(text: str) -> tuple:
  """
  解析维度参数

  Examples:
    >>> parse_dims('2..5')
    (2, 3, 4, 5)
    >>> parse_dims('2,3,10')
    (2, 3, 10)
  """
  text = text.strip()
  try:
    if '..' in text:
      lo, hi = text.split('..')
      dims = tuple(range(int(lo), int(hi) + 1))
    else:
      dims = tuple(int(v) for v in text.split(',') if v.strip())
  except ValueError:
    raise argparse.ArgumentTypeError(f'无法解析的维度：{text}')
  if not dims:
    raise argparse.ArgumentTypeError(f'维度列表为空：{text}')
  return dims


def parse_classes(text: str) -> tuple:
  if text == 'both':
    return SpectrumClass.HARMONIC.value, SpectrumClass.ATOMIC.value
  return (SpectrumClass.parse(text).value,)


def _add_ensemble_args(parser, samples=DEFAULT_SAMPLES):
  parser.add_argument('--dims', type=parse_dims,
                      default=DEFAULT_DIMS, help='维度，如 2..20 或 2,3,5')
  parser.add_argument('--class', dest='classes', default='both',
                      choices=['harmonic', 'atomic', 'both'])
  parser.add_argument('--samples', type=int, default=samples,
                      help='每个单元的样本数')
  parser.add_argument('--seed', type=int, default=0, help='64位主种子')
  parser.add_argument('--omega', type=float, default=1.0)
  parser.add_argument('--cap', type=float, default=DEFAULT_CAP_MULTIPLIER,
                      help='原子能谱搜索窗上限倍数K')
  parser.add_argument('--points-per-period', type=int,
                      default=DEFAULT_POINTS_PER_PERIOD)
  parser.add_argument('--refine-tol', type=float,
                      default=DEFAULT_REFINE_TOLERANCE)
  parser.add_argument('--no-refine', action='store_true')
  parser.add_argument('--measure', default=REAL_GAUSSIAN, choices=MEASURES)
  parser.add_argument('--bin-width', type=float, default=DEFAULT_BIN_WIDTH)
  parser.add_argument('--workers', type=int, default=None,
                      help='进程数，默认按CPU核数')
  parser.add_argument('--chunk-size', type=int, default=DEFAULT_CHUNK_SIZE)
  parser.add_argument('--strict-bounds', action='store_true',
                      help='同时用首达时间检查速度极限')
  parser.add_argument('--quiet', action='store_true', help='不显示进度与日志')


def build_parser() -> argparse.ArgumentParser:
  parser = argparse.ArgumentParser(
      prog='qdist',
      description='量子态最大可区分度的蒙特卡洛实验',
  )
  sub = parser.add_subparsers(dest='command', required=True)

  p = sub.add_parser('run', help='运行实验并写出CSV与清单')
  _add_ensemble_args(p)
  p.add_argument('--normalization', default=Normalization.TOTAL_ONE.value,
                 choices=[v.value for v in Normalization])
  p.add_argument('--no-bounds', action='store_true', help='不检查速度极限')
  p.add_argument('--out', default=None, help='输出目录')

  p = sub.add_parser('reproduce', help='复现图表')
  p.add_argument('figure', choices=sorted(FIGURES))
  _add_ensemble_args(p)
  p.set_defaults(dims=None)
  p.add_argument('--log-floor', type=float, default=1e-6,
                 help='对数坐标下空箱的显示下限（相对最大值）')
  p.add_argument('--out', default=None, help='输出目录')

  p = sub.add_parser('lcm', help='打印 lcm(1², …, N²)')
  p.add_argument('n', type=int)

  p = sub.add_parser('analytic', help='打印二维系统 P(D ≥ 1 − ε) 的解析值')
  p.add_argument('epsilon', type=float)

  p = sub.add_parser('bounds', help='打印各单元速度极限的检查汇总')
  _add_ensemble_args(p, samples=DEFAULT_BOUNDS_SAMPLES)
  return parser


def config_from_args(args, check_bounds=True) -> RunConfig:
  try:
    return RunConfig(
        dims=args.dims or DEFAULT_DIMS,
        classes=parse_classes(args.classes),
        samples_per_dim=args.samples,
        omega=args.omega,
        master_seed=args.seed,
        grid=GridConfig(args.points_per_period, args.refine_tol,
                        not args.no_refine),
        cap=SearchCap(args.cap),
        measure=args.measure,
        bin_width=args.bin_width,
        chunk_size=args.chunk_size,
        workers=args.workers,
        check_bounds=check_bounds,
        strict_bounds=args.strict_bounds,
        progress=not args.quiet,
    )
  except (ValueError, AssertionError) as e:
    raise UsageError(str(e))


def _print_json(data):
  print(json.dumps(data, sort_keys=True, ensure_ascii=False))


def cmd_run(args) -> int:
  cfg = config_from_args(args, check_bounds=not args.no_bounds)
  out_dir = args.out or default_output_dir()
  result = run_ensemble(cfg)
  log = not args.quiet
  outputs = write_cells(result, out_dir, args.normalization, log=log)
  outputs['bounds'] = to_json(
      {c.key: c.bounds.to_dict() for c in result.cells.values()},
      os.path.join(out_dir, 'bounds.json'),
  )
  manifest = build_manifest(result, outputs,
                            extra={'normalization': args.normalization})
  write_manifest(manifest, os.path.join(out_dir, 'manifest.json'))
  logger.info('%d cells written to %s', len(result.cells), out_dir)
  return EXIT_OK


def cmd_reproduce(args) -> int:
  base = config_from_args(args)
  out_dir = args.out or default_output_dir()
  rv = reproduce(args.figure, out_dir, base=base, dims=args.dims,
                 log_floor=args.log_floor, log=not args.quiet)
  if rv.extra:
    _print_json(rv.extra)
  return EXIT_OK


def cmd_lcm(args) -> int:
  if args.n < 1:
    raise UsageError(f'N至少为1，当前值：{args.n}')
  # 大整数以字符串输出
  _print_json(str(lcm_of_squares(args.n)))
  return EXIT_OK


def cmd_analytic(args) -> int:
  if not 0 <= args.epsilon <= 1:
    raise UsageError(f'epsilon必须位于[0, 1]，当前值：{args.epsilon}')
  # 15位有效数字，消除末位舍入误差
  value = float(f'{n2_threshold_probability(args.epsilon):.15g}')
  _print_json(value)
  return EXIT_OK


def cmd_bounds(args) -> int:
  cfg = config_from_args(args)
  result = run_ensemble(cfg)
  _print_json({c.key: c.bounds.to_dict() for c in result.cells.values()})
  return EXIT_OK


COMMANDS = {
  'run': cmd_run,
  'reproduce': cmd_reproduce,
  'lcm': cmd_lcm,
  'analytic': cmd_analytic,
  'bounds': cmd_bounds,
}


def main(argv=None) -> int:
  parser = build_parser()
  try:
    args = parser.parse_args(argv)
  except SystemExit as e:
    return EXIT_OK if e.code in (0, None) else EXIT_USAGE
  quiet = getattr(args, 'quiet', False)
  logging.basicConfig(level=logging.WARNING if quiet else logging.INFO)
  try:
    return COMMANDS[args.command](args)
  except UsageError as e:
    print(f'{parser.prog} {args.command}: error: {e}', file=sys.stderr)
    return EXIT_USAGE
  except (QdistError, ValueError, OSError) as e:
    logger.error('%s: %s', type(e).__name__, e)
    return EXIT_FAILURE


if __name__ == '__main__':
  sys.exit(main())
