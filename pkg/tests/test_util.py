import os

import numpy as np
import pytest

from qdist.util.assertion import assert_dimension
from qdist.util.assertion import assert_dims
from qdist.util.assertion import assert_positive
from qdist.util.assertion import assert_probability_vector
from qdist.util.assertion import assert_same_length
from qdist.util.assertion import assert_unit_interval
from qdist.util.decorator import get_cores
from qdist.util.decorator import timer
from qdist.util.exception import DimensionMismatchError
from qdist.util.exception import QdistError
from qdist.util.os import OUTPUT_DIR_ENV
from qdist.util.os import default_output_dir
from qdist.util.os import ensure_dirpath_exist
from qdist.util.os import extension
from qdist.util.random import SEED_MODULUS
from qdist.util.random import SeededStream
from qdist.util.random import ensure_seed
from qdist.util.random import substream


def test_assert_dimension():
  assert_dimension(2)
  with pytest.raises(ValueError):
    assert_dimension(1)
  with pytest.raises(ValueError):
    assert_dimension(2.5)
  with pytest.raises(ValueError):
    assert_dims([2, 1])
  with pytest.raises(AssertionError):
    assert_dims([])


def test_assert_values():
  assert_positive(1e-3, 'x')
  with pytest.raises(ValueError):
    assert_positive(0, 'x')
  with pytest.raises(ValueError):
    assert_positive(np.inf, 'x')
  assert_unit_interval(0, 'eps')
  assert_unit_interval(1, 'eps')
  with pytest.raises(ValueError):
    assert_unit_interval(1.01, 'eps')


def test_assert_probability_vector():
  assert_probability_vector([0.25, 0.75])
  assert_probability_vector([1.0, 0.0])
  with pytest.raises(ValueError):
    assert_probability_vector([0.5, 0.6])
  with pytest.raises(ValueError):
    assert_probability_vector([1.5, -0.5])


def test_assert_same_length():
  assert_same_length([0.5, 0.5], (1.0, 2.0))
  with pytest.raises(DimensionMismatchError):
    assert_same_length([0.5, 0.5], (1.0, 2.0, 3.0))
  assert issubclass(DimensionMismatchError, QdistError)
  assert issubclass(DimensionMismatchError, ValueError)


def test_substream():
  a = substream(7, 0).generator().standard_normal(4)
  b = substream(7, 0).generator().standard_normal(4)
  c = substream(7, 1).generator().standard_normal(4)
  d = substream(8, 0).generator().standard_normal(4)
  np.testing.assert_array_equal(a, b)
  assert not np.array_equal(a, c)
  assert not np.array_equal(a, d)
  assert substream(7, 3) == SeededStream(7, 3)
  with pytest.raises(ValueError):
    substream(7, -1)


def test_ensure_seed():
  assert ensure_seed(5) == 5
  assert ensure_seed(-1) == SEED_MODULUS - 1
  assert ensure_seed(SEED_MODULUS + 3) == 3
  with pytest.raises(ValueError):
    ensure_seed(1.5)


def test_os(tmp_path, monkeypatch):
  assert extension('/path/a.CSV') == '.csv'
  filepath = os.path.join(str(tmp_path), 'a', 'b', 'c.csv')
  ensure_dirpath_exist(filepath)
  assert os.path.isdir(os.path.dirname(filepath))
  monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
  assert default_output_dir() == str(tmp_path)
  monkeypatch.delenv(OUTPUT_DIR_ENV)
  assert default_output_dir() == './qdist_output'


def test_decorator():
  assert get_cores() >= 1

  @timer()
  def add(a, b):
    return a + b

  assert add(1, 2) == 3
  assert add.__name__ == 'add'
