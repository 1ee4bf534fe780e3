# src/services/grid_service.py

"""Sampling lattices, sampled signals, and the inner-product and norm primitives."""

import logging
from typing import Callable, Optional, Sequence

import numpy as np
from pydantic import ValidationError as PydanticValidationError

from ..exceptions import IncompatibleGridsError, InvalidGridError, SamplingError
from ..models.grid import DomainTag, Grid, Signal
from ..utils.config import settings

logger = logging.getLogger(__name__)


def make_grid(origin: Sequence[float], spacing: Sequence[float], count: Sequence[int]) -> Grid:
    """Build a grid whose nodes tile [origin, origin + count * spacing)."""
    origin, spacing, count = np.atleast_1d(origin), np.atleast_1d(spacing), np.atleast_1d(count)
    for s in spacing:
        if not np.isfinite(s) or s <= 0:
            raise InvalidGridError(f"Grid spacing must be strictly positive, got {s}", "spacing")
    for c in count:
        if int(c) != c or c < 2:
            raise InvalidGridError(f"Grid count must be an integer of at least 2, got {c}", "count")
    try:
        return Grid(
            origin=tuple(float(o) for o in origin),
            spacing=tuple(float(s) for s in spacing),
            count=tuple(int(c) for c in count),
        )
    except PydanticValidationError as e:
        raise InvalidGridError(f"Invalid grid: {e.errors()[0]['msg']}", "grid")


def grid_from_span(count: int, lo: float, hi: float) -> Grid:
    """One-dimensional grid with ``count`` nodes covering [lo, hi)."""
    if hi <= lo:
        raise InvalidGridError(f"Grid span must be increasing, got [{lo}, {hi})", "span")
    return make_grid([lo], [(hi - lo) / count], [count])


def boundary_ratio(grid: Grid, samples: np.ndarray) -> float:
    """Largest magnitude on the outermost node layer relative to the global peak."""
    mag = np.abs(np.asarray(samples).reshape(grid.shape))
    peak = float(mag.max()) if mag.size else 0.0
    if peak == 0.0:
        return 0.0
    edge = 0.0
    for n in range(grid.dim):
        edge = max(edge, float(np.take(mag, 0, axis=n).max()), float(np.take(mag, -1, axis=n).max()))
    return edge / peak


def is_truncated(grid: Grid, samples: np.ndarray, threshold: Optional[float] = None) -> bool:
    threshold = settings.decay_threshold if threshold is None else threshold
    return boundary_ratio(grid, samples) > threshold


def sample(
    fn: Callable[..., np.ndarray], grid: Grid, domain_tag: DomainTag = DomainTag.TIME
) -> Signal:
    """
    Evaluate a closed-form function on every grid node.

    ``fn`` receives one coordinate array per axis, each shaped like the grid,
    and returns complex values of the same shape (scalars broadcast).

    Raises:
        SamplingError: If any node evaluates to a non-finite value
    """
    mesh = grid.mesh()
    with np.errstate(all="ignore"):
        values = np.broadcast_to(np.asarray(fn(*mesh), dtype=np.complex128), grid.shape).ravel()

    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        raise SamplingError(grid.node(int(bad[0])), complex(values[bad[0]]))

    truncated = is_truncated(grid, values)
    if truncated:
        logger.warning(
            f"Sampled signal does not decay at the grid boundary (edge ratio {boundary_ratio(grid, values):.3e})"
        )
    return Signal(grid=grid, samples=values, domain_tag=domain_tag, truncated=truncated)


def require_same_grid(f: Signal, g: Signal) -> None:
    if f.grid != g.grid:
        raise IncompatibleGridsError(f"Grid mismatch: {f.grid} vs {g.grid}")


def inner_product(f: Signal, g: Signal) -> complex:
    """Riemann-sum quadrature of the integral of f * conj(g)."""
    require_same_grid(f, g)
    return complex(np.vdot(g.samples, f.samples) * f.grid.weight)


def l2_norm(f: Signal) -> float:
    return float(np.sqrt(max(inner_product(f, f).real, 0.0)))
