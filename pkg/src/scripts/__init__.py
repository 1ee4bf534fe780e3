# src/scripts/__init__.py
