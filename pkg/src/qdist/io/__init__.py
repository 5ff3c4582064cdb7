"""输出：CSV/JSON文件、运行清单、SVG图与图表复现"""
