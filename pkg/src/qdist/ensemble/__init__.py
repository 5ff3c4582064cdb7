"""蒙特卡洛实验：配置、并行调度与统计聚合"""
