import json
import os

import pytest

from qdist.cli import main
from qdist.cli import parse_dims

QUIET_RUN = ['--workers', '1', '--quiet']


def read(path):
  with open(path, encoding='utf-8') as f:
    return f.read()


def test_parse_dims():
  assert parse_dims('2..5') == (2, 3, 4, 5)
  assert parse_dims('2,3,10') == (2, 3, 10)
  assert parse_dims('7') == (7,)


def test_lcm(capsys):
  assert main(['lcm', '4']) == 0
  assert capsys.readouterr().out == '"144"\n'
  assert main(['lcm', '20']) == 0
  assert json.loads(capsys.readouterr().out) == '54192375991353600'


def test_analytic(capsys):
  assert main(['analytic', '0.5']) == 0
  assert capsys.readouterr().out == '0.5\n'
  assert main(['analytic', '1.0']) == 0
  assert capsys.readouterr().out == '1.0\n'
  assert main(['analytic', '0']) == 0
  assert capsys.readouterr().out == '0.0\n'


def test_usage_errors():
  assert main([]) == 2
  assert main(['lcm', 'four']) == 2
  assert main(['lcm', '0']) == 2
  assert main(['analytic', '1.5']) == 2
  assert main(['run', '--dims', '1..3']) == 2
  assert main(['run', '--dims', 'a..b']) == 2
  assert main(['run', '--class', 'hydrogen']) == 2
  assert main(['run', '--points-per-period', '4']) == 2
  assert main(['reproduce', 'fig9']) == 2


def test_run(tmp_path):
  out_a = os.path.join(str(tmp_path), 'a')
  out_b = os.path.join(str(tmp_path), 'b')
  args = ['run', '--dims', '2', '--class', 'harmonic', '--samples', '300',
          '--seed', '7'] + QUIET_RUN
  assert main(args + ['--out', out_a]) == 0
  assert main(args + ['--out', out_b]) == 0
  for name in ['hist_harmonic_N2.csv', 'threshold_harmonic_N2.csv',
               'summary.csv']:
    assert read(os.path.join(out_a, name)) == read(os.path.join(out_b, name))
  manifest = json.loads(read(os.path.join(out_a, 'manifest.json')))
  assert manifest['config']['master_seed'] == 7
  assert manifest['config']['samples_per_dim'] == 300
  assert manifest['truncated_fraction'] == {'harmonic_N2': 0.0}
  bounds = json.loads(read(os.path.join(out_a, 'bounds.json')))
  assert bounds['harmonic_N2']['mt_violations'] == 0


def test_run_output_env(tmp_path, monkeypatch):
  monkeypatch.setenv('QDIST_OUTPUT_DIR', str(tmp_path))
  args = ['run', '--dims', '2,3', '--class', 'both', '--samples', '20',
          '--no-bounds'] + QUIET_RUN
  assert main(args) == 0
  manifest = json.loads(read(os.path.join(str(tmp_path), 'manifest.json')))
  assert len(manifest['cells']) == 4


def test_run_io_failure(tmp_path):
  blocker = os.path.join(str(tmp_path), 'file')
  with open(blocker, 'w') as f:
    f.write('x')
  args = ['run', '--dims', '2', '--class', 'harmonic', '--samples', '10',
          '--out', os.path.join(blocker, 'sub')] + QUIET_RUN
  assert main(args) == 1


def test_reproduce(tmp_path, capsys):
  assert main(['reproduce', 'fig4', '--out', str(tmp_path), '--quiet']) == 0
  assert os.path.exists(os.path.join(str(tmp_path), 'fig4.csv'))
  assert os.path.exists(os.path.join(str(tmp_path), 'fig4.svg'))
  assert os.path.exists(os.path.join(str(tmp_path), 'fig4_manifest.json'))
  capsys.readouterr()
  args = ['reproduce', 'fig1', '--samples', '100', '--out', str(tmp_path)]
  assert main(args + QUIET_RUN) == 0
  extra = json.loads(capsys.readouterr().out)
  assert 'max_abs_deviation' in extra


def test_bounds(capsys):
  args = ['bounds', '--dims', '2..3', '--class', 'atomic', '--samples', '20',
          '--strict-bounds'] + QUIET_RUN
  assert main(args) == 0
  summary = json.loads(capsys.readouterr().out)
  assert sorted(summary) == ['atomic_N2', 'atomic_N3']
  assert summary['atomic_N2']['n'] == 20
  assert summary['atomic_N2']['strict_checked'] == 20
  assert summary['atomic_N3']['mt_violations'] == 0
