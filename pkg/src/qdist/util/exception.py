class QdistError(Exception):
  """Base class of all qdist errors."""
  pass


class DimensionMismatchError(QdistError, ValueError):
  """Raised when a probability vector and a spectrum differ in length."""
  pass


class DegenerateWindowError(QdistError, ValueError):
  """Raised when a search window has t_lo >= t_hi."""
  pass


class SampleRangeError(QdistError, ValueError):
  """Raised when a distinguishability sample falls outside [0, 1]."""
  pass


class ConfigMismatchError(QdistError, ValueError):
  """Raised when two partial aggregates of different cells are merged."""
  pass


class EmptySampleError(QdistError, ValueError):
  """Raised when statistics are requested for an empty sample."""
  pass
