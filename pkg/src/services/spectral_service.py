# src/services/spectral_service.py

"""
Fourier transform under the convention Ff(w) = integral of f(x) exp(-2 pi i x w) dx.

Implemented as a scaled DFT with explicit origin twiddles, so any grid origin
is handled exactly. Spectra live on a grid symmetric about 0 (fftshift layout)
with spacing 1/(M dt) per axis.
"""

import logging
from typing import Tuple

import numpy as np
from scipy import fft as sp_fft

from ..exceptions import TfuError
from ..models.grid import DomainTag, Grid, Signal
from ..utils.cache import cached_plan, plan_cache
from ..utils.config import settings
from .grid_service import boundary_ratio

logger = logging.getLogger(__name__)


def along(vec: np.ndarray, axis: int, dim: int) -> np.ndarray:
    """Reshape a 1-D vector so it broadcasts along ``axis`` of a dim-D array."""
    shape = [1] * dim
    shape[axis] = vec.size
    return vec.reshape(shape)


def reciprocal_axis(count: int, spacing: float) -> Tuple[float, float]:
    """(origin, spacing) of the centered reciprocal axis."""
    step = 1.0 / (count * spacing)
    return -(count // 2) * step, step


@cached_plan(plan_cache, key_prefix="forward_axis")
def forward_axis_plan(count: int, spacing: float, origin: float) -> Tuple[np.ndarray, np.ndarray]:
    """Pre-twiddle over sample index and post-twiddle over frequency for one axis."""
    freq_origin, step = reciprocal_axis(count, spacing)
    k = np.arange(count)
    w = freq_origin + step * k
    pre = np.exp(-2j * np.pi * k * spacing * freq_origin)
    post = spacing * np.exp(-2j * np.pi * origin * w)
    return pre, post


@cached_plan(plan_cache, key_prefix="inverse_axis")
def inverse_axis_plan(
    count: int, freq_spacing: float, freq_origin: float, time_origin: float
) -> Tuple[np.ndarray, np.ndarray]:
    """Pre-twiddle over frequency and post-twiddle over sample index for one axis."""
    dt = 1.0 / (count * freq_spacing)
    k = np.arange(count)
    w = freq_origin + freq_spacing * k
    pre = np.exp(2j * np.pi * time_origin * w)
    post = freq_spacing * count * np.exp(2j * np.pi * k * dt * freq_origin)
    return pre, post


def _twiddle(values: np.ndarray, factors) -> np.ndarray:
    out = values
    for n, factor in enumerate(factors):
        out = out * along(factor, n, values.ndim)
    return out


def fourier(f: Signal) -> Signal:
    """
    Transform a time-domain signal to its spectrum on the reciprocal grid.

    The truncation flag of ``f`` is carried forward to the result.
    """
    if f.domain_tag != DomainTag.TIME:
        raise TfuError("fourier expects a time-domain signal", "domain_tag")

    grid = f.grid
    plans = [forward_axis_plan(grid.count[n], grid.spacing[n], grid.origin[n]) for n in range(grid.dim)]
    values = _twiddle(f.shaped, [pre for pre, _ in plans])
    values = sp_fft.fftn(values, workers=settings.threads)
    values = _twiddle(values, [post for _, post in plans])

    axes = [reciprocal_axis(grid.count[n], grid.spacing[n]) for n in range(grid.dim)]
    freq_grid = Grid(
        origin=tuple(o for o, _ in axes),
        spacing=tuple(s for _, s in axes),
        count=grid.count,
    )
    if f.truncated:
        logger.warning("Transforming a signal that carries a truncation warning")
    return Signal(
        grid=freq_grid,
        samples=values.ravel(),
        domain_tag=DomainTag.FREQUENCY,
        truncated=f.truncated,
        time_origin=grid.origin,
    )


def inverse_fourier(F: Signal) -> Signal:
    """
    Transform a spectrum back to the time domain.

    The time grid starts at the origin recorded by ``fourier`` when present,
    otherwise it is centered on 0.
    """
    if F.domain_tag != DomainTag.FREQUENCY:
        raise TfuError("inverse_fourier expects a frequency-domain signal", "domain_tag")

    grid = F.grid
    spacings = [1.0 / (grid.count[n] * grid.spacing[n]) for n in range(grid.dim)]
    if F.time_origin is not None:
        origins = list(F.time_origin)
    else:
        origins = [-(grid.count[n] // 2) * spacings[n] for n in range(grid.dim)]

    plans = [
        inverse_axis_plan(grid.count[n], grid.spacing[n], grid.origin[n], origins[n]) for n in range(grid.dim)
    ]
    values = _twiddle(F.shaped, [pre for pre, _ in plans])
    values = sp_fft.ifftn(values, workers=settings.threads)
    values = _twiddle(values, [post for _, post in plans])

    time_grid = Grid(origin=tuple(origins), spacing=tuple(spacings), count=grid.count)
    return Signal(grid=time_grid, samples=values.ravel(), domain_tag=DomainTag.TIME, truncated=F.truncated)


def spectral_edge_ratio(F: Signal) -> float:
    """Peak-relative magnitude of a spectrum on the edge of its frequency grid."""
    return boundary_ratio(F.grid, F.samples)


def fourier_at(f: Signal, w: np.ndarray) -> np.ndarray:
    """Direct quadrature of Ff at arbitrary one-dimensional frequencies."""
    x = f.grid.axis(0)
    kernel = np.exp(-2j * np.pi * np.outer(np.asarray(w, dtype=float), x))
    return kernel @ f.samples * f.grid.spacing[0]
