# src/models/__init__.py

"""Data models for grids, signals, kernels, distributions and reports."""
