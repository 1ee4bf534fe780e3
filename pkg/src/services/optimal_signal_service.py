# src/services/optimal_signal_service.py

"""
Extremal signals: optimal Gaussians and Gaussian-enveloped chirps with their
exact phase gradients, plus the reference and random signals the suites use.
"""

import logging
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import hermite as hermite_poly

from ..exceptions import SpanError, TfuError, UnsupportedDimensionError
from ..models.chirp import ChirpSpec
from ..models.grid import Grid, Signal
from ..models.kernel import Kernel, as_nodes
from .grid_service import boundary_ratio, sample
from .kernel_service import phase_kernel

logger = logging.getLogger(__name__)

MAX_HERMITE_ORDER = 4

PhaseField = Callable[[np.ndarray], np.ndarray]


def _require_span(f: Signal, what: str) -> Signal:
    if f.truncated:
        raise SpanError(
            f"{what} does not decay inside the grid (edge ratio {boundary_ratio(f.grid, f.samples):.3e}); "
            f"widen the grid",
            "grid",
        )
    return f


def _reference(values: Optional[Sequence[float]], dim: int, name: str) -> np.ndarray:
    ref = np.zeros(dim) if values is None else np.asarray(values, dtype=float).ravel()
    if ref.size != dim:
        raise TfuError(f"{name} must have {dim} components, got {ref.size}", name)
    return ref


def optimal_gaussian(
    zeta: float, grid: Grid, x0: Optional[Sequence[float]] = None, amp_offset: float = 0.0
) -> Signal:
    """
    exp(-||x - x0||^2 / (2 zeta) + amp_offset) sampled on ``grid``.

    Raises:
        SpanError: If the envelope has not decayed at the grid boundary
    """
    if not zeta > 0:
        raise TfuError(f"zeta must be positive, got {zeta}", "zeta")
    center = _reference(x0, grid.dim, "x0")

    def envelope(*mesh):
        r2 = sum((m - c) ** 2 for m, c in zip(mesh, center))
        return np.exp(-r2 / (2.0 * zeta) + amp_offset)

    return _require_span(sample(envelope, grid), "Optimal Gaussian")


def _eta(spec: ChirpSpec, nodes: np.ndarray) -> np.ndarray:
    """Per-axis branch sign; sgn(0) counts as +1."""
    dx = nodes - np.asarray(spec.x0)[None, :]
    kink = np.where(dx >= 0, 1.0, -1.0)
    eta = np.empty_like(dx)
    for axis in range(spec.dim):
        branch = spec.partition.branch_of(axis + 1)
        if branch == "j1":
            eta[:, axis] = 1.0
        elif branch == "j2":
            eta[:, axis] = -1.0
        elif branch == "j3":
            eta[:, axis] = kink[:, axis]
        else:
            eta[:, axis] = -kink[:, axis]
    return eta


def _orthant_offsets(spec: ChirpSpec, eta: np.ndarray) -> np.ndarray:
    if not spec.phase_offsets:
        return np.zeros(eta.shape[0])
    # Bit m of the code is set when eta on axis m is negative
    codes = ((eta < 0).astype(int) << np.arange(spec.dim)[None, :]).sum(axis=1)
    table = np.zeros(2**spec.dim)
    for key, value in spec.phase_offsets.items():
        table[sum(1 << m for m, ch in enumerate(key) if ch == "-")] = value
    return table[codes]


def chirp_phase(spec: ChirpSpec) -> PhaseField:
    """Phase in cycles, sum of eta_m (x_m - x0_m)^2 / (2 eps) + w0 . x + orthant offset."""

    def phase(t) -> np.ndarray:
        nodes = as_nodes(t)
        eta = _eta(spec, nodes)
        dx = nodes - np.asarray(spec.x0)[None, :]
        quadratic = np.sum(eta * dx**2, axis=1) / (2.0 * spec.eps)
        return quadratic + nodes @ np.asarray(spec.w0) + _orthant_offsets(spec, eta)

    return phase


def chirp_phase_gradient(spec: ChirpSpec) -> PhaseField:
    """Exact branch gradient eta_m (x_m - x0_m) / eps + w0_m, shaped (total, dim)."""

    def gradient(t) -> np.ndarray:
        nodes = as_nodes(t)
        dx = nodes - np.asarray(spec.x0)[None, :]
        return _eta(spec, nodes) * dx / spec.eps + np.asarray(spec.w0)[None, :]

    return gradient


def optimal_chirp(spec: ChirpSpec, grid: Grid) -> Tuple[Signal, np.ndarray]:
    """
    Optimal Gaussian-enveloped chirp and its phase gradient on ``grid``.

    Raises:
        PartitionError: If the partition sets overlap or miss an axis
        SpanError: If the envelope has not decayed at the grid boundary
    """
    if spec.dim != grid.dim:
        raise TfuError(f"Chirp spec has dimension {spec.dim} but the grid has {grid.dim}", "x0")
    spec.partition.check_cover(grid.dim)

    nodes = grid.nodes()
    phase = chirp_phase(spec)(nodes).reshape(grid.shape)
    envelope = optimal_gaussian(spec.zeta, grid, spec.x0, spec.amp_offset)
    f = envelope.with_samples(envelope.samples * np.exp(2j * np.pi * phase.ravel()))
    logger.debug(f"Generated chirp with partition {spec.partition.model_dump()} on {grid.total} nodes")
    return f, chirp_phase_gradient(spec)(nodes)


def chirp_kernel(spec: ChirpSpec, sign: float = 1.0) -> Kernel:
    """Time multiplier sign * exp(2 pi i phi_f) carrying the chirp's own phase."""
    return phase_kernel(chirp_phase(spec), chirp_phase_gradient(spec), sign=sign)


def gaussian_chirp(c: float, grid: Grid) -> Tuple[Signal, np.ndarray]:
    """exp(-pi ||x||^2) exp(pi i c ||x||^2) and its gradient c x."""
    f = sample(lambda *mesh: np.exp(-np.pi * (1.0 - 1j * c) * sum(m**2 for m in mesh)), grid)
    return _require_span(f, "Gaussian chirp"), c * grid.nodes()


def hermite_function(order: int, grid: Grid, x0: float = 0.0) -> Signal:
    """
    exp(-pi (x - x0)^2) H_n(sqrt(2 pi) (x - x0)) with physicists' Hermite polynomials.

    Its uncertainty product is (2n + 1)^2 / (16 pi^2).
    """
    if grid.dim != 1:
        raise UnsupportedDimensionError("hermite_function", grid.dim)
    if not 0 <= order <= MAX_HERMITE_ORDER:
        raise TfuError(f"Hermite order must be in 0..{MAX_HERMITE_ORDER}, got {order}", "order")
    coefficients = np.zeros(order + 1)
    coefficients[order] = 1.0

    def fn(x):
        u = x - x0
        return np.exp(-np.pi * u**2) * hermite_poly.hermval(np.sqrt(2.0 * np.pi) * u, coefficients)

    return _require_span(sample(fn, grid), f"Hermite function of order {order}")


def random_decaying_signal(
    grid: Grid,
    rng: np.random.Generator,
    degree: int = 2,
    zeta_range: Tuple[float, float] = (0.2, 0.4),
    center_range: Tuple[float, float] = (-1.0, 1.0),
    chirp_range: Tuple[float, float] = (-0.5, 0.5),
) -> Signal:
    """Random complex polynomial under a Gaussian envelope with a random center and a small chirp."""
    if grid.dim != 1:
        raise UnsupportedDimensionError("random_decaying_signal", grid.dim)
    coefficients = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    zeta = rng.uniform(*zeta_range)
    center = rng.uniform(*center_range)
    c = rng.uniform(*chirp_range)

    def fn(x):
        u = x - center
        return np.polyval(coefficients, u) * np.exp(-(u**2) / (2.0 * zeta) + 1j * np.pi * c * u**2)

    return _require_span(sample(fn, grid), "Random signal")
