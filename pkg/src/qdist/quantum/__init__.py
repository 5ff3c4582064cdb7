"""能谱、态采样、时间演化与量子速度极限"""
