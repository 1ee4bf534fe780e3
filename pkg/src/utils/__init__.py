# src/utils/__init__.py

"""Utility modules for the time-frequency uncertainty laboratory."""
