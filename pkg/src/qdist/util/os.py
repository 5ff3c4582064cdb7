import os

DEFAULT_OUTPUT_DIR = './qdist_output'
OUTPUT_DIR_ENV = 'QDIST_OUTPUT_DIR'


def ensure_dirpath_exist(filepath: str):
  """确保文件所在的目录存在，不存在则创建"""
  dirpath = os.path.dirname(filepath)
  if dirpath and not os.path.exists(dirpath):
    os.makedirs(dirpath, exist_ok=True)


def extension(filepath: str) -> str:
  """获取文件扩展名（小写，含点）"""
  return os.path.splitext(filepath)[1].lower()


def default_output_dir() -> str:
  """默认输出目录，可通过环境变量QDIST_OUTPUT_DIR修改"""
  return os.environ.get(OUTPUT_DIR_ENV) or DEFAULT_OUTPUT_DIR
