# src/services/__init__.py

"""Numerical services: spectral transforms, distribution engine, analysis and verification."""
