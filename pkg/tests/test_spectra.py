import math

import pytest

from qdist.quantum.spectra import SearchCap
from qdist.quantum.spectra import SpectrumClass
from qdist.quantum.spectra import atomic_spectrum
from qdist.quantum.spectra import harmonic_spectrum
from qdist.quantum.spectra import lcm_of_squares
from qdist.quantum.spectra import make_spectrum
from qdist.quantum.spectra import recurrence_period
from qdist.quantum.spectra import search_window

PRIME_POWERS = {2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19}


def lcm_by_factorization(n):
  """按质因数分解计算 lcm(1², …, n²)：每个质数取不超过n的最高幂再平方"""
  rv = 1
  for q in range(2, n + 1):
    if all(q % d for d in range(2, int(q ** 0.5) + 1)):
      power = q
      while power * q <= n:
        power *= q
      rv *= power * power
  return rv


def test_harmonic_spectrum():
  s = harmonic_spectrum(3, 2.0)
  assert s.kind is SpectrumClass.HARMONIC
  assert s.frequencies == (2.0, 4.0, 6.0)
  assert s.dim == 3
  assert s.max_gap() == 4.0
  assert s.max_gap([True, True, False]) == 2.0
  assert s.max_gap([True, False, False]) == 0.0
  assert sorted(s.gaps().tolist()) == [2.0, 2.0, 4.0]


def test_atomic_spectrum():
  s = atomic_spectrum(3)
  assert s.kind is SpectrumClass.ATOMIC
  assert s.frequencies == pytest.approx((-1.0, -0.25, -1 / 9))
  assert all(a < b for a, b in zip(s.frequencies, s.frequencies[1:]))
  assert s.max_gap([True, False, True]) == pytest.approx(8 / 9)


def test_make_spectrum():
  assert make_spectrum('Harmonic', 4) == harmonic_spectrum(4)
  assert make_spectrum(SpectrumClass.ATOMIC, 4, 2.0) == atomic_spectrum(4, 2.0)
  with pytest.raises(ValueError):
    make_spectrum('hydrogen', 4)
  with pytest.raises(ValueError):
    harmonic_spectrum(1)
  with pytest.raises(ValueError):
    harmonic_spectrum(3, 0.0)


def test_lcm_of_squares():
  assert lcm_of_squares(1) == 1
  assert lcm_of_squares(2) == 4
  assert lcm_of_squares(4) == 144
  assert lcm_of_squares(5) == 3600
  for n in range(1, 21):
    assert lcm_of_squares(n) == lcm_by_factorization(n)
  # 不减，且仅在N为素数幂时严格增大
  for n in range(3, 21):
    prev, cur = lcm_of_squares(n - 1), lcm_of_squares(n)
    assert cur >= prev
    assert (cur > prev) is (n in PRIME_POWERS)
  assert lcm_of_squares(6) == lcm_of_squares(5)
  with pytest.raises(ValueError):
    lcm_of_squares(0)


def test_lcm_of_squares_exact():
  assert lcm_of_squares(20) == 232792560 ** 2
  assert str(lcm_of_squares(20)) == '54192375991353600'


def test_search_window_harmonic():
  w = search_window(harmonic_spectrum(5, 2.0))
  assert w.t_lo == 0
  assert w.t_hi == pytest.approx(math.pi)
  assert w.truncated is False


def test_search_window_atomic():
  w = search_window(atomic_spectrum(2))
  assert w.t_hi == pytest.approx(4 * math.pi)
  assert w.truncated is False
  w = search_window(atomic_spectrum(4))
  assert w.t_hi == pytest.approx(144 * math.pi)
  assert w.truncated is False
  w = search_window(atomic_spectrum(5))
  assert w.t_hi == pytest.approx(1250 * math.pi)
  assert w.truncated is True
  w = search_window(atomic_spectrum(20), SearchCap(10))
  assert w.t_hi == pytest.approx(80000 * math.pi)
  assert w.truncated is True
  w = search_window(atomic_spectrum(5), SearchCap(100))
  assert w.t_hi == pytest.approx(3600 * math.pi)
  assert w.truncated is False
  with pytest.raises(ValueError):
    SearchCap(0)


def test_recurrence_period():
  assert recurrence_period(harmonic_spectrum(3)) == pytest.approx(2 * math.pi)
  assert recurrence_period(atomic_spectrum(3)) == pytest.approx(72 * math.pi)


@pytest.mark.parametrize('kind', ['harmonic', 'atomic'])
def test_max_gap_is_outer_pair(kind):
  for n in range(2, 21):
    s = make_spectrum(kind, n)
    w = s.as_array()
    gaps = {(i, j): abs(w[j] - w[i])
            for i in range(n) for j in range(i + 1, n)}
    best = max(gaps.values())
    assert gaps[(0, n - 1)] == best
    assert [k for k, v in gaps.items() if v == best] == [(0, n - 1)]
    assert s.max_gap() == pytest.approx(best, rel=1e-15)
    assert s.gaps().max() == pytest.approx(best, rel=1e-15)


@pytest.mark.parametrize('omega', [1.0, 2.5])
def test_atomic_min_gap(omega):
  for n in range(2, 21):
    gaps = atomic_spectrum(n, omega).gaps()
    expected = omega * (1 / (n - 1) ** 2 - 1 / n ** 2)
    assert gaps.min() == pytest.approx(expected, rel=1e-12)
    assert gaps.argmin() == gaps.size - 1
