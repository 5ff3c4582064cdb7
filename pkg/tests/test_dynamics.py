import math

import numpy as np
import pytest

from qdist.quantum.dynamics import TIE_TOLERANCE
from qdist.quantum.dynamics import GridConfig
from qdist.quantum.dynamics import _refine_at
from qdist.quantum.dynamics import _scan
from qdist.quantum.dynamics import _tie_candidates
from qdist.quantum.dynamics import distinguishability_at
from qdist.quantum.dynamics import first_hit_time
from qdist.quantum.dynamics import make_grid
from qdist.quantum.dynamics import maximize_distinguishability
from qdist.quantum.dynamics import maximize_distinguishability_batch
from qdist.quantum.dynamics import n2_threshold_probability
from qdist.quantum.dynamics import survival_derivative
from qdist.quantum.dynamics import survival_probability
from qdist.quantum.dynamics import two_level_closed_form
from qdist.quantum.sampling import ProbabilityVector
from qdist.quantum.sampling import sample_states
from qdist.quantum.spectra import TimeWindow
from qdist.quantum.spectra import atomic_spectrum
from qdist.quantum.spectra import harmonic_spectrum
from qdist.quantum.spectra import make_spectrum
from qdist.quantum.spectra import search_window
from qdist.util.exception import DegenerateWindowError
from qdist.util.exception import DimensionMismatchError


def optimize(p, spectrum, cfg=None):
  return maximize_distinguishability(p, spectrum, search_window(spectrum), cfg)


def test_survival_probability():
  h = harmonic_spectrum(2)
  assert survival_probability([0.3, 0.7], h, 0.0) == pytest.approx(1.0)
  assert survival_probability([0.5, 0.5], h, math.pi) == pytest.approx(
      0.0, abs=1e-15)
  assert survival_probability([0.75, 0.25], h, math.pi) == pytest.approx(0.25)
  t = np.linspace(0, 2 * math.pi, 5)
  assert survival_probability([0.5, 0.5], h, t).shape == (5,)
  with pytest.raises(DimensionMismatchError):
    survival_probability([0.5, 0.5], harmonic_spectrum(3), 1.0)


def test_distinguishability_at():
  h = harmonic_spectrum(2)
  assert distinguishability_at([0.5, 0.5], h, 0.0) == pytest.approx(0.0)
  assert distinguishability_at([0.5, 0.5], h, math.pi) == pytest.approx(1.0)
  # 二能级恒等式 D = 2p₁p₂(1 − cos Δωt)
  t = 0.7
  p = ProbabilityVector([0.2, 0.8])
  expected = 2 * 0.2 * 0.8 * (1 - math.cos(t))
  assert distinguishability_at(p, h, t) == pytest.approx(expected)


def test_survival_derivative():
  h = harmonic_spectrum(3)
  p = [0.2, 0.5, 0.3]
  t, dt = 1.3, 1e-6
  numeric = (survival_probability(p, h, t + dt) -
             survival_probability(p, h, t - dt)) / (2 * dt)
  assert survival_derivative(p, h, t) == pytest.approx(numeric, abs=1e-8)
  assert survival_derivative([0.5, 0.5], harmonic_spectrum(2),
                             math.pi) == pytest.approx(0.0, abs=1e-15)


def test_grid_config():
  cfg = GridConfig()
  assert cfg.points_per_fastest_period == 32
  assert cfg.refine_tolerance == 1e-10
  assert cfg.refine is True
  assert cfg.slack == pytest.approx(0.5 * (math.pi / 32) ** 2)
  assert GridConfig.from_dict(cfg.to_dict()) == cfg
  with pytest.raises(AssertionError):
    GridConfig(points_per_fastest_period=4)


def test_make_grid():
  grid = make_grid(TimeWindow(0.0, 2 * math.pi), 1.0, GridConfig(32))
  assert grid.intervals == 32
  assert grid.step == pytest.approx(2 * math.pi / 32)
  with pytest.raises(DegenerateWindowError):
    make_grid(TimeWindow(1.0, 1.0), 1.0, GridConfig())


def test_equal_superposition():
  r = optimize([0.5, 0.5], harmonic_spectrum(2))
  assert r.d_max == pytest.approx(1.0, abs=1e-12)
  assert r.tau == pytest.approx(math.pi, abs=1e-9)
  assert r.refined is True
  assert r.truncated is False
  assert r.window.t_lo <= r.tau <= r.window.t_hi


def test_two_level_oracle():
  h = harmonic_spectrum(2)
  P = sample_states(1000, 2, 2024)
  results = maximize_distinguishability_batch(P, h, search_window(h))
  for p, r in zip(P, results):
    tau, d = two_level_closed_form(p, 1.0)
    assert abs(r.d_max - d) <= 1e-9
    assert abs(r.tau - tau) <= 1e-9


def test_two_level_closed_form():
  tau, d = two_level_closed_form([0.25, 0.75], 2.0)
  assert tau == pytest.approx(math.pi / 2)
  assert d == pytest.approx(0.75)
  with pytest.raises(AssertionError):
    two_level_closed_form([0.2, 0.3, 0.5], 1.0)


@pytest.mark.parametrize('n', [3, 4, 5])
def test_brute_force_scan(n):
  h = harmonic_spectrum(n)
  window = search_window(h)
  t = np.linspace(window.t_lo, window.t_hi, 200001)
  P = sample_states(10, n, 100 + n)
  for p, r in zip(P, maximize_distinguishability_batch(P, h, window)):
    scan = distinguishability_at(p, h, t).max()
    assert r.d_max >= scan - 1e-12
    assert abs(r.d_max - scan) <= 1e-6
    assert distinguishability_at(p, h, r.tau) == pytest.approx(r.d_max,
                                                               abs=1e-12)


@pytest.mark.parametrize('n', range(2, 11))
def test_harmonic_tau_interval(n):
  h = harmonic_spectrum(n)
  P = sample_states(2000, n, 7)
  for r in maximize_distinguishability_batch(P, h, search_window(h)):
    assert math.pi / (n - 1) - 1e-9 <= r.tau <= math.pi + 1e-9


@pytest.mark.parametrize('n', [2, 5, 10, 20])
def test_atomic_minimum_time(n):
  p = np.zeros(n)
  p[0] = p[-1] = 0.5
  r = optimize(p, atomic_spectrum(n))
  assert r.tau == pytest.approx(math.pi * n * n / (n * n - 1), abs=1e-8)
  assert r.d_max == pytest.approx(1.0, abs=1e-12)
  assert r.truncated is (n >= 5)


def test_stationary_state():
  r = optimize([1.0, 0.0, 0.0], harmonic_spectrum(3))
  assert r.d_max == 0.0
  assert r.tau == 0.0
  assert r.refined is False


def test_no_refine():
  h = harmonic_spectrum(4)
  p = [0.1, 0.2, 0.3, 0.4]
  coarse = optimize(p, h, GridConfig(refine=False))
  fine = optimize(p, h)
  assert coarse.refined is False
  assert coarse.d_max <= fine.d_max + 1e-12
  assert fine.d_max - coarse.d_max <= GridConfig().slack


def test_embedding():
  """只占据前两个能级的态，其结果与二维系统相同"""
  p = ProbabilityVector([0.3, 0.7])
  small = optimize(p, harmonic_spectrum(2))
  large = optimize(p.embed(5), harmonic_spectrum(5))
  assert large.d_max == pytest.approx(small.d_max, abs=1e-12)
  assert large.tau == pytest.approx(small.tau, abs=1e-9)


def test_batch_matches_single():
  a = atomic_spectrum(4)
  window = search_window(a)
  P = sample_states(5, 4, 3)
  batch = maximize_distinguishability_batch(P, a, window)
  for p, r in zip(P, batch):
    single = maximize_distinguishability(p, a, window)
    assert single.d_max == pytest.approx(r.d_max, abs=1e-12)


def test_first_hit_time():
  h = harmonic_spectrum(2)
  window = search_window(h)
  assert first_hit_time([0.5, 0.5], h, 0.5, window) == pytest.approx(
      math.pi / 2, abs=1e-12)
  assert first_hit_time([0.5, 0.5], h, 0.0, window) == 0.0
  assert first_hit_time([0.9, 0.1], h, 0.5, window) is None


@pytest.mark.parametrize('kind', ['harmonic', 'atomic'])
def test_first_hit_time_before_tau(kind):
  spectrum = make_spectrum(kind, 5)
  window = search_window(spectrum)
  for p in sample_states(20, 5, 31):
    r = maximize_distinguishability(p, spectrum, window)
    for level in (r.d_max, r.d_max ** 2):
      hit = first_hit_time(p, spectrum, level, window, tau=r.tau)
      assert hit is not None
      assert window.t_lo <= hit <= r.tau + 1e-12
      assert distinguishability_at(p, spectrum, hit) >= level - 1e-9


def test_n2_threshold_probability():
  assert n2_threshold_probability(0.0) == 0.0
  assert n2_threshold_probability(0.5) == pytest.approx(0.5, abs=1e-12)
  assert n2_threshold_probability(1.0) == pytest.approx(1.0, abs=1e-12)
  eps = np.linspace(0, 1, 101)
  values = [n2_threshold_probability(e) for e in eps]
  assert all(a <= b + 1e-15 for a, b in zip(values, values[1:]))
  with pytest.raises(ValueError):
    n2_threshold_probability(1.5)


def test_harmonic_periodicity():
  rng = np.random.default_rng(5)
  for n, omega in [(3, 1.0), (6, 2.0), (10, 0.5)]:
    h = harmonic_spectrum(n, omega)
    period = 2 * math.pi / omega
    t = rng.uniform(0, 3 * period, 50)
    for p in sample_states(5, n, 17):
      np.testing.assert_allclose(distinguishability_at(p, h, t + period),
                                 distinguishability_at(p, h, t),
                                 rtol=0, atol=1e-12)


@pytest.mark.parametrize('spectrum', [
    harmonic_spectrum(3),
    harmonic_spectrum(4),
    atomic_spectrum(3),
])
def test_grid_doubling(spectrum):
  window = search_window(spectrum)
  P = sample_states(20, spectrum.dim, 8)
  previous = None
  for points in (32, 64, 128):
    cfg = GridConfig(points)
    d = np.array([r.d_max for r in
                  maximize_distinguishability_batch(P, spectrum, window, cfg)])
    if previous is not None:
      assert (d >= previous - cfg.refine_tolerance).all()
    previous = d


def tie_candidates_for(p, spectrum, cfg=None):
  cfg = cfg or GridConfig()
  w = spectrum.as_array()
  grid = make_grid(search_window(spectrum), spectrum.max_gap(p > 0), cfg)
  best_idx, _, cands = _scan(p[None, :], w, grid, cfg.slack)
  _, s = _refine_at(p, w, grid, int(best_idx[0]), cfg)
  kept = _tie_candidates(p, w, grid, cands[0], s)
  return w, grid, cfg, s, cands[0], kept


def test_tie_candidates_keep_every_tie():
  a = atomic_spectrum(8)
  for p in sample_states(5, 8, 11):
    w, grid, cfg, s, cands, kept = tie_candidates_for(p, a)
    assert set(kept.tolist()) <= set(cands.tolist())
    for k in set(cands.tolist()) - set(kept.tolist()):
      assert _refine_at(p, w, grid, k, cfg)[1] > s + TIE_TOLERANCE


def test_tie_candidates_prune_truncated_window():
  a = atomic_spectrum(20)
  total_cands, total_kept = 0, 0
  for p in sample_states(4, 20, 3):
    *_, cands, kept = tie_candidates_for(p, a)
    total_cands += cands.size
    total_kept += kept.size
  assert total_kept * 4 <= total_cands + 16
