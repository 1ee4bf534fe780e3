# src/services/engine_service.py

import logging
from typing import Optional, Tuple

import numpy as np
from scipy import fft as sp_fft

from ..exceptions import (
    KernelPreconditionError,
    NoTimeFormError,
    ResolutionLimitError,
    SpectralTruncationError,
    UnsupportedDimensionError,
)
from ..models.distribution import Distribution
from ..models.grid import Grid, Signal
from ..models.kernel import Kernel, KernelVariant
from ..utils.cache import cached_plan, plan_cache
from ..utils.config import Settings, settings as default_settings
from .grid_service import inner_product, l2_norm, require_same_grid
from .kernel_service import classify, conjugate_multiplier, joint_function
from .spectral_service import fourier, fourier_at

logger = logging.getLogger(__name__)


@cached_plan(plan_cache, key_prefix="lag_plan")
def lag_plan(count: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Signed lag per FFT column and the column twiddle for the half-sample lattice.

    Column j holds lag m = ((j + c) mod M) - c with c = M // 2, so every lag
    with |m| < M / 2 has its own column.
    """
    c = count // 2
    lags = (np.arange(count) + c) % count - c
    twiddle = np.exp(2j * np.pi * lags * c / count)
    return lags, twiddle


def distribution_freq_grid(time_grid: Grid) -> Grid:
    """Frequency lattice with spacing 1/(2 M dt), symmetric about 0."""
    count = time_grid.count[0]
    step = 1.0 / (2 * count * time_grid.spacing[0])
    return Grid(origin=(-(count // 2) * step,), spacing=(step,), count=(count,))


def spectral_tail_fraction(f: Signal) -> float:
    """Share of the spectral energy of f at |w| >= 1/(4 dt), where the even-lag lattice folds."""
    power = np.abs(fourier(f).samples) ** 2
    total = float(power.sum())
    if total == 0.0:
        return 0.0
    count = f.grid.count[0]
    # spectrum node j sits at (j - M//2) / (M dt); the edge 1/(4 dt) is M/4 nodes out
    offset = np.abs(np.arange(count) - count // 2)
    return float(power[4 * offset >= count].sum() / total)


def gaussian_chirp_wigner(x: np.ndarray, w: np.ndarray, d: float) -> np.ndarray:
    """
    Closed-form cross-Wigner distribution of exp(-pi t^2) against exp(-pi t^2) * exp(-pi i d t^2).

    This is the distribution of the optimal Gaussian under the kernel timemul:chirp(d);
    d = 0 gives sqrt(2) exp(-2 pi (x^2 + w^2)).
    """
    a = 2.0 - 1j * d
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    return 2.0 / np.sqrt(a) * np.exp(-np.pi * a * x**2) * np.exp(-4.0 * np.pi * (w + 0.5 * d * x) ** 2 / a)


def _gather(samples: np.ndarray, index: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    valid = (index >= 0) & (index < samples.size)
    return np.where(valid, samples[np.clip(index, 0, samples.size - 1)], 0.0), valid


class DistributionEngine:
    """Computes Cohen's class distributions of one-dimensional sampled signals."""

    def __init__(self, settings: Optional[Settings] = None):
        """Initialize the engine with injected settings."""
        self.settings = settings or default_settings

    # -- lattice helpers -------------------------------------------------

    def _require_1d(self, operation: str, f: Signal) -> None:
        if f.grid.dim != 1:
            raise UnsupportedDimensionError(operation, f.grid.dim)

    def _lag_transform(self, rows: np.ndarray, grid: Grid, kernel_tag: str) -> Distribution:
        """DFT over the lag columns with frequency step 1/(2 M dt), scaled by 2 dt."""
        count = grid.count[0]
        _, twiddle = lag_plan(count)
        values = sp_fft.fft(rows * twiddle[None, :], axis=1, workers=self.settings.threads)
        values *= 2.0 * grid.spacing[0]
        return Distribution(
            time_grid=grid, freq_grid=distribution_freq_grid(grid), values=values, kernel_tag=kernel_tag
        )

    def guard_bandwidth(self, f: Signal) -> None:
        """Refuse signals with spectral energy at or beyond the distribution's frequency edge 1/(4 dt)."""
        if not np.any(f.samples):
            return
        fraction = spectral_tail_fraction(f)
        if fraction > self.settings.decay_threshold:
            raise SpectralTruncationError(
                f"Spectral energy beyond the distribution edge is {fraction:.3e} of the total; refine the grid",
                fraction,
            )

    # -- distributions ---------------------------------------------------

    def cross_wigner(self, f: Signal, g: Signal, kernel_tag: str = "cross_wigner") -> Distribution:
        """
        Discrete cross-Wigner distribution.

        For each time node n, r[m] = f[n+m] * conj(g[n-m]) (zero off the grid),
        followed by a DFT over m.
        """
        require_same_grid(f, g)
        self._require_1d("cross_wigner", f)
        count = f.grid.count[0]
        lags, _ = lag_plan(count)
        n = np.arange(count)[:, None]

        fp, _ = _gather(f.samples, n + lags[None, :])
        gm, _ = _gather(g.samples, n - lags[None, :])
        return self._lag_transform(fp * np.conj(gm), f.grid, kernel_tag)

    def cctfd(self, f: Signal, k: Kernel) -> Distribution:
        """Distribution of f under kernel k, dispatched on the kernel variant."""
        self._require_1d("cctfd", f)
        self.guard_bandwidth(f)
        logger.debug(f"Computing {k.tag} distribution on {f.grid.count[0]} nodes")

        if k.variant == KernelVariant.UNIT:
            return self.cross_wigner(f, f, kernel_tag=k.tag)
        if k.variant == KernelVariant.TIME_MULTIPLIER:
            return self.cross_wigner(f, conjugate_multiplier(k, f), kernel_tag=k.tag)
        if k.variant == KernelVariant.KIRKWOOD_RIHACZEK:
            return self._kirkwood_rihaczek(f, k)
        if k.variant == KernelVariant.PAGE:
            return self._page(f, k)
        return self._tabulated(f, k)

    def _kirkwood_rihaczek(self, f: Signal, k: Kernel) -> Distribution:
        """f(x) * conj(Ff(w)) * exp(-2 pi i x w)."""
        freq_grid = distribution_freq_grid(f.grid)
        x = f.grid.axis(0)
        w = freq_grid.axis(0)
        spectrum = fourier_at(f, w)
        values = f.samples[:, None] * np.conj(spectrum)[None, :] * np.exp(-2j * np.pi * np.outer(x, w))
        return Distribution(time_grid=f.grid, freq_grid=freq_grid, values=values, kernel_tag=k.tag)

    def _page(self, f: Signal, k: Kernel) -> Distribution:
        """Sifted form: integrand f(x - |y| + y/2) * conj(f(x - |y| - y/2)) with y = 2 m dt."""
        count = f.grid.count[0]
        lags, _ = lag_plan(count)
        n = np.arange(count)[:, None]
        shift = n - 2 * np.abs(lags)[None, :]

        fp, _ = _gather(f.samples, shift + lags[None, :])
        fm, _ = _gather(f.samples, shift - lags[None, :])
        return self._lag_transform(fp * np.conj(fm), f.grid, k.tag)

    def _tabulated(self, f: Signal, k: Kernel) -> Distribution:
        """
        Direct quadrature over z and v of the general kernel form.

        The v integral runs on 4M nodes of spacing 1/(4M dt), wide enough that
        the discrete partial transform of phi never wraps across the lag range.
        """
        count = f.grid.count[0]
        limit = self.settings.tabulated_max_nodes
        if count > limit:
            raise ResolutionLimitError(count, limit)

        dt = f.grid.spacing[0]
        lags, _ = lag_plan(count)
        p = np.arange(count)[:, None]
        fp, _ = _gather(f.samples, p + lags[None, :])
        fm, _ = _gather(f.samples, p - lags[None, :])
        products = fp * np.conj(fm)

        n_v = 4 * count
        dv = 1.0 / (n_v * dt)
        v = (np.arange(n_v) - n_v // 2) * dv
        y = 2.0 * lags * dt
        phi = np.asarray(joint_function(k)(v[:, None, None], y[None, :, None]), dtype=np.complex128)

        # partial transform over v at every lag offset tau = s dt, s in [-(M-1), M-1]
        s = np.arange(-(count - 1), count)
        partial = dv * np.exp(-2j * np.pi * np.outer(s * dt, v)) @ phi

        offsets = np.arange(count)[:, None] - np.arange(count)[None, :] + (count - 1)
        rows = dt * np.einsum("pj,npj->nj", products, partial[offsets])
        return self._lag_transform(rows, f.grid, k.tag)

    def cctfd_freq(self, f: Signal, k: Kernel) -> Distribution:
        """
        Frequency-domain route for time-multiplier kernels:
        Cf(x, w) = 2 exp(-4 pi i x w) * integral of Ff(u) conj(G(2w - u)) exp(4 pi i u x) du
        with G the spectrum of f * conj(phi_t).

        Both spectra are sampled on the distribution's half lattice, 2M nodes of
        spacing 1/(2 M dt) covering [-1/(2 dt), 1/(2 dt)), so the u sum repeats
        in x with period M dt, the full time span.
        """
        self._require_1d("cctfd_freq", f)
        if not k.has_time_form:
            raise NoTimeFormError(f"Kernel {k.tag} has no time-multiplier form", "variant")
        self.guard_bandwidth(f)

        count = f.grid.count[0]
        c = count // 2
        freq_grid = distribution_freq_grid(f.grid)
        du = freq_grid.spacing[0]
        u = (np.arange(2 * count) - count) * du
        spectrum = fourier_at(f, u)
        partner = fourier_at(conjugate_multiplier(k, f), u)
        x = f.grid.axis(0)
        w = freq_grid.axis(0)

        # 2 w_k - u_j sits on half-lattice node 2k - 2c - j + 2M
        index = 2 * np.arange(count)[:, None] - 2 * c - np.arange(2 * count)[None, :] + 2 * count
        partner_conj, _ = _gather(np.conj(partner), index)

        weighted = np.exp(4j * np.pi * np.outer(x, u)) * spectrum[None, :]
        values = 2.0 * du * (weighted @ partner_conj.T) * np.exp(-4j * np.pi * np.outer(x, w))
        return Distribution(
            time_grid=f.grid, freq_grid=freq_grid, values=values, kernel_tag=f"{k.tag}[freq]"
        )

    # -- identities ------------------------------------------------------

    def require_unit_modulus(self, k: Kernel, probe: Grid) -> None:
        if not classify(k, probe).unit_modulus:
            raise KernelPreconditionError(
                f"Kernel {k.tag} is not unit modulus; the inner-product identity does not apply", "kernel"
            )

    def moyal_residual(self, f: Signal, g: Signal, k: Kernel) -> float:
        """|<Cf, Cg> - |<f, g>|^2| / (||f||^2 ||g||^2)."""
        require_same_grid(f, g)
        self.require_unit_modulus(k, f.grid)
        scale = l2_norm(f) ** 2 * l2_norm(g) ** 2
        if scale == 0.0:
            return 0.0
        lhs = self.cctfd(f, k).inner(self.cctfd(g, k))
        rhs = abs(inner_product(f, g)) ** 2
        return float(abs(lhs - rhs) / scale)

    def parseval_ratio(self, f: Signal, k: Kernel) -> float:
        """||Cf|| / ||f||^2."""
        self.require_unit_modulus(k, f.grid)
        return self.cctfd(f, k).norm() / l2_norm(f) ** 2

    def engine_deviation(self, f: Signal, k: Kernel) -> float:
        """Peak-relative node-wise deviation between the time and frequency routes."""
        time_route = self.cctfd(f, k).values
        freq_route = self.cctfd_freq(f, k).values
        peak = float(np.max(np.abs(time_route)))
        if peak == 0.0:
            return float(np.max(np.abs(freq_route)))
        return float(np.max(np.abs(time_route - freq_route)) / peak)


def time_marginal(d: Distribution) -> np.ndarray:
    """Integral of D over frequency at every time node."""
    return d.values.sum(axis=1) * d.freq_grid.weight


def frequency_marginal(d: Distribution) -> np.ndarray:
    """Integral of D over time at every frequency node."""
    return d.values.sum(axis=0) * d.time_grid.weight


# Default engine for callers that do not inject settings
engine = DistributionEngine()
