# src/__init__.py

"""Time-frequency uncertainty laboratory."""
