import time
from functools import wraps

import psutil

from ..base import log
from ..base import second_to_desc


def get_cores() -> int:
  """默认的worker数量：逻辑核数与物理核数的均值"""
  logical = psutil.cpu_count(logical=True) or 1
  physical = psutil.cpu_count(logical=False) or logical
  return max(1, int((logical + physical) / 2))


def timer(desc=None):
  """函数运行时间统计"""

  def _timer(func):
    @wraps(func)
    def wrapper(*args, **kwargs):
      start_time = time.time()
      result = func(*args, **kwargs)
      duration = time.time() - start_time
      title = desc or func.__name__
      log(f'Costs：{duration:.2f} s ({second_to_desc(duration)})，'
          f'function: {title}')
      return result

    return wrapper

  return _timer
