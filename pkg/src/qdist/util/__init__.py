"""工具集"""
