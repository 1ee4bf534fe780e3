# src/schemas/__init__.py

"""Shipped JSON schemas."""

import json
from functools import lru_cache
from importlib import resources
from typing import Any, Dict


@lru_cache(maxsize=None)
def load_report_schema() -> Dict[str, Any]:
    """The fixed JSON Schema every suite report conforms to."""
    return json.loads(resources.files(__name__).joinpath("report.schema.json").read_text(encoding="utf-8"))
