# src/services/analysis_service.py

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import KernelPreconditionError, NoTimeFormError, SpectralTruncationError, TfuError, ZeroNormError
from ..models.distribution import Distribution
from ..models.grid import Signal
from ..models.kernel import Kernel
from ..models.reports import ConversionReport, DistMomentReport, MomentReport
from ..utils.config import Settings, settings as default_settings
from .engine_service import DistributionEngine, frequency_marginal, time_marginal
from .grid_service import boundary_ratio, l2_norm
from .kernel_service import classify, conjugate_multiplier
from .spectral_service import fourier, fourier_at, spectral_edge_ratio

logger = logging.getLogger(__name__)


def real_bound(dim: int) -> float:
    """N^2 / (16 pi^2), the attainable bound for real-valued signals."""
    return dim**2 / (16.0 * np.pi**2)


def relative_residual(measured: float, target: float) -> float:
    if target == 0.0:
        return abs(measured)
    return abs(measured - target) / abs(target)


def _weighted_moments(
    coords: List[np.ndarray], weight: np.ndarray, reference: Optional[Sequence[float]] = None
) -> Tuple[List[float], float]:
    """Center (measured, or the given reference) and the second moment about it."""
    if reference is None:
        centers = [float(np.sum(c * weight)) for c in coords]
    else:
        centers = [float(r) for r in reference]
        if len(centers) != len(coords):
            raise TfuError(f"Reference point must have {len(coords)} components, got {len(centers)}", "reference")
    spread = float(sum(np.sum((c - c0) ** 2 * weight) for c, c0 in zip(coords, centers)))
    return centers, max(spread, 0.0)


def as_gradient_field(f: Signal, grad_phase) -> np.ndarray:
    """Coerce a phase gradient to shape (total, dim)."""
    grad = np.asarray(grad_phase, dtype=float)
    if grad.ndim == 1:
        grad = grad[:, None]
    if grad.shape != (f.grid.total, f.grid.dim):
        raise TfuError(
            f"Phase gradient must have shape {(f.grid.total, f.grid.dim)}, got {grad.shape}", "grad_phase"
        )
    return grad


def phase_gradient_fd(f: Signal, mask_threshold: Optional[float] = None) -> np.ndarray:
    """
    Centered finite differences of the unwrapped phase (in cycles), shaped (total, dim).

    Nodes where |f| is below ``mask_threshold`` times the peak are set to 0.
    """
    mask_threshold = default_settings.mask_threshold if mask_threshold is None else mask_threshold
    shaped = f.shaped
    magnitude = np.abs(shaped)
    peak = magnitude.max() if magnitude.size else 0.0
    components = []
    for n in range(f.grid.dim):
        phase = np.unwrap(np.angle(shaped), axis=n) / (2.0 * np.pi)
        components.append(np.gradient(phase, f.grid.spacing[n], axis=n))
    grad = np.stack([c.ravel() for c in components], axis=-1)
    grad[(magnitude <= mask_threshold * peak).ravel()] = 0.0
    return grad


def staggered_phase_gradient(f: Signal, mask_threshold: float = 1e-6) -> Tuple[np.ndarray, np.ndarray]:
    """
    Phase gradient at the midpoints between consecutive nodes of a 1-D signal.

    Exact for phases that are quadratic on every interval, including
    C1 phases with a kink in their gradient at a node.

    Returns:
        (midpoints, gradient) restricted to intervals whose both ends exceed
        ``mask_threshold`` times the peak magnitude
    """
    x = f.grid.axis(0)
    magnitude = np.abs(f.samples)
    keep = magnitude > mask_threshold * magnitude.max()
    step = np.angle(f.samples[1:] * np.conj(f.samples[:-1])) / (2.0 * np.pi * f.grid.spacing[0])
    both = keep[1:] & keep[:-1]
    return (0.5 * (x[1:] + x[:-1]))[both], step[both]


class AnalysisService:
    """Moments, spreads, covariances and the identities that relate them."""

    def __init__(self, engine: Optional[DistributionEngine] = None, settings: Optional[Settings] = None):
        """Initialize analysis service with engine and settings dependency injection."""
        self.settings = settings or default_settings
        self.engine = engine or DistributionEngine(self.settings)

    # -- Fourier-domain moments ------------------------------------------

    def _intensity(self, f: Signal) -> np.ndarray:
        power = np.abs(f.samples) ** 2
        total = power.sum()
        if total == 0.0:
            raise ZeroNormError("signal")
        return power / total

    def time_moments(self, f: Signal, x0: Optional[Sequence[float]] = None) -> Tuple[List[float], float]:
        """Center and spread of |f|^2; the spread is taken about ``x0`` when given."""
        if f.truncated:
            logger.warning("Time moments of a signal carrying a truncation warning")
        weight = self._intensity(f)
        return _weighted_moments([m.ravel() for m in f.grid.mesh()], weight, x0)

    def freq_moments(self, f: Signal, w0: Optional[Sequence[float]] = None) -> Tuple[List[float], float]:
        """
        Center and spread of |Ff|^2; the spread is taken about ``w0`` when given.

        Raises:
            SpectralTruncationError: When the spectrum edge or the time boundary
                exceeds the configured fraction of the peak
        """
        if l2_norm(f) == 0.0:
            raise ZeroNormError("signal")
        spectrum = fourier(f)
        ratio = max(spectral_edge_ratio(spectrum), boundary_ratio(f.grid, f.samples))
        if ratio > self.settings.spectral_edge_error:
            raise SpectralTruncationError(
                f"Spectrum is truncated by the grid (edge ratio {ratio:.3e}); widen or refine the grid", ratio
            )
        if ratio > self.settings.decay_threshold:
            logger.warning(f"Spectrum edge ratio {ratio:.3e} exceeds the decay threshold")
        weight = self._intensity(spectrum)
        return _weighted_moments([m.ravel() for m in spectrum.grid.mesh()], weight, w0)

    def uncertainty_product_fourier(
        self, f: Signal, x0: Optional[Sequence[float]] = None, w0: Optional[Sequence[float]] = None
    ) -> float:
        _, spread_x = self.time_moments(f, x0)
        _, spread_w = self.freq_moments(f, w0)
        return spread_x * spread_w

    # -- covariances -----------------------------------------------------

    def _covariance_terms(
        self, f: Signal, grad_phase, x0: Optional[Sequence[float]] = None, w0: Optional[Sequence[float]] = None
    ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        grad = as_gradient_field(f, grad_phase)
        weight = self._intensity(f)
        magnitude = np.abs(f.samples)
        live = magnitude > self.settings.mask_threshold * magnitude.max()
        if not np.all(np.isfinite(grad[live])):
            raise TfuError("Phase gradient must be finite wherever the signal is not negligible", "grad_phase")
        grad = np.where(live[:, None], grad, 0.0)
        weight = np.where(live, weight, 0.0)

        if x0 is None:
            x0, _ = self.time_moments(f)
        w0 = grad.T @ weight if w0 is None else np.asarray(w0, dtype=float)
        dx = f.grid.nodes() - np.asarray(x0)[None, :]
        dw = grad - w0[None, :]
        return dx, dw, weight

    def covariance(self, f: Signal, grad_phase, x0=None, w0=None) -> float:
        """<(x - x0) f, (grad phi - w0) f> / ||f||^2."""
        dx, dw, weight = self._covariance_terms(f, grad_phase, x0, w0)
        return float(np.sum(dx * dw * weight[:, None]))

    def abs_covariance(self, f: Signal, grad_phase, x0=None, w0=None) -> float:
        """<|x - x0| f, |grad phi - w0| f> / ||f||^2 with element-wise absolute values."""
        dx, dw, weight = self._covariance_terms(f, grad_phase, x0, w0)
        return float(np.sum(np.abs(dx) * np.abs(dw) * weight[:, None]))

    def moment_report(self, f: Signal, grad_phase=None, x0=None, w0=None) -> MomentReport:
        """
        Every Fourier-domain moment of f in one report.

        Spreads and covariances are taken about (x0, w0) when given, otherwise
        about the measured centroids.
        """
        if grad_phase is None:
            grad_phase = np.zeros((f.grid.total, f.grid.dim)) if f.is_real() else phase_gradient_fd(f)
        x0, spread_x = self.time_moments(f, x0)
        w0, spread_w = self.freq_moments(f, w0)
        return MomentReport(
            x0=x0,
            w0=w0,
            spread_x=spread_x,
            spread_w=spread_w,
            cov=self.covariance(f, grad_phase, x0, w0),
            abs_cov=self.abs_covariance(f, grad_phase, x0, w0),
            product=spread_x * spread_w,
        )

    # -- distribution-domain moments -------------------------------------

    def distribution_moments(self, d: Distribution) -> DistMomentReport:
        """Second moments under the weight |D(x, w)|^2 / ||D||^2."""
        power = np.abs(d.values) ** 2
        total = power.sum()
        if total == 0.0:
            raise ZeroNormError("distribution")
        weight = power / total

        x = d.time_grid.axis(0)[:, None]
        w = d.freq_grid.axis(0)[None, :]
        x0 = float(np.sum(x * weight))
        w0 = float(np.sum(w * weight))
        spread_x = float(np.sum((x - x0) ** 2 * weight))
        spread_w = float(np.sum((w - w0) ** 2 * weight))
        return DistMomentReport(
            x0_C=[x0],
            w0_C=[w0],
            spread_x_C=spread_x,
            spread_w_C=spread_w,
            product_C=spread_x * spread_w,
            weight_sum=float(weight.sum()),
        )

    def _partner(self, f: Signal, k: Kernel) -> Signal:
        if not k.has_time_form:
            raise NoTimeFormError(f"Kernel {k.tag} has no time-multiplier form", "variant")
        return conjugate_multiplier(k, f)

    def conversion_identities(self, f: Signal, k: Kernel) -> ConversionReport:
        """
        Relative residuals of the three conversions between distribution-domain
        and Fourier-domain spreads: dx_C = dx_f / 2, dw_C = (dw_f + dw_g) / 4 and
        P_C = (P_f + P_g) / 8, with g = f * conj(phi_t).
        """
        g = self._partner(f, k)
        measured = self.distribution_moments(self.engine.cctfd(f, k))

        _, sx_f = self.time_moments(f)
        _, sw_f = self.freq_moments(f)
        _, sx_g = self.time_moments(g)
        _, sw_g = self.freq_moments(g)

        target_x = sx_f / 2.0
        target_w = (sw_f + sw_g) / 4.0
        target_p = (sx_f * sw_f + sx_g * sw_g) / 8.0
        return ConversionReport(
            spread_x_C=measured.spread_x_C,
            spread_w_C=measured.spread_w_C,
            product_C=measured.product_C,
            target_spread_x=target_x,
            target_spread_w=target_w,
            target_product=target_p,
            residual_x=relative_residual(measured.spread_x_C, target_x),
            residual_w=relative_residual(measured.spread_w_C, target_w),
            residual_product=relative_residual(measured.product_C, target_p),
        )

    def moment_vector_identities(self, f: Signal, k: Kernel) -> Tuple[float, float]:
        """
        Residuals of x0_C = x0_f and w0_C = (w0_f + w0_g) / 2, each scaled by
        the corresponding Fourier-domain spread so that centred signals compare.
        """
        g = self._partner(f, k)
        measured = self.distribution_moments(self.engine.cctfd(f, k))
        x0_f, sx_f = self.time_moments(f)
        w0_f, sw_f = self.freq_moments(f)
        w0_g, _ = self.freq_moments(g)

        target_w0 = 0.5 * (np.asarray(w0_f) + np.asarray(w0_g))
        res_x = float(np.linalg.norm(np.asarray(measured.x0_C) - np.asarray(x0_f)) / np.sqrt(sx_f))
        res_w = float(np.linalg.norm(np.asarray(measured.w0_C) - target_w0) / np.sqrt(sw_f))
        return res_x, res_w

    def product_identity_residual(self, f: Signal, k: Kernel) -> float:
        """Relative residual of dx_f * dw_g = dx_g * dw_g, which holds because |g| = |f|."""
        g = self._partner(f, k)
        _, sx_f = self.time_moments(f)
        _, sx_g = self.time_moments(g)
        _, sw_g = self.freq_moments(g)
        return relative_residual(sx_f * sw_g, sx_g * sw_g)

    def marginal_residuals(self, f: Signal) -> Tuple[float, float]:
        """Peak-relative errors of the Wigner time and frequency marginals."""
        d = self.engine.cctfd(f, Kernel.unit())
        power = np.abs(f.samples) ** 2
        time_err = np.max(np.abs(time_marginal(d) - power)) / power.max()
        spectrum = np.abs(fourier_at(f, d.freq_grid.axis(0))) ** 2
        freq_err = np.max(np.abs(frequency_marginal(d) - spectrum)) / spectrum.max()
        return float(time_err), float(freq_err)

    # -- weak (first-power) functionals ---------------------------------

    def _require_marginal(self, f: Signal, k: Kernel) -> None:
        if not classify(k, f.grid).marginal:
            raise KernelPreconditionError(
                f"Kernel {k.tag} lacks the marginal property the weak functional relies on", "kernel"
            )

    def _first_power(self, d: Distribution, f: Signal, weight: np.ndarray) -> float:
        value = np.sum(weight * d.values) * d.cell / l2_norm(f) ** 2
        if abs(value.imag) > 1e-6 * max(1.0, abs(value.real)):
            raise TfuError(f"Weak functional has imaginary part {value.imag:.3e}", "imag")
        return float(value.real)

    def weak_spreads(self, d: Distribution, f: Signal, centered: bool = True) -> Tuple[float, float]:
        """First-power spreads of the signed distribution about f's moment vectors (or about 0)."""
        if centered:
            (x0,), _ = self.time_moments(f)
            (w0,), _ = self.freq_moments(f)
        else:
            x0, w0 = 0.0, 0.0
        x = d.time_grid.axis(0)[:, None]
        w = d.freq_grid.axis(0)[None, :]
        time_weight = np.broadcast_to((x - x0) ** 2, d.values.shape)
        freq_weight = np.broadcast_to((w - w0) ** 2, d.values.shape)
        return self._first_power(d, f, time_weight), self._first_power(d, f, freq_weight)

    def flandrin(self, f: Signal, k: Kernel, T: float, centered: bool = True) -> float:
        """Weak functional a / T^2 + T^2 b from the first-power spreads a and b."""
        if not T > 0:
            raise TfuError(f"T must be positive, got {T}", "T")
        self._require_marginal(f, k)
        a, b = self.weak_spreads(self.engine.cctfd(f, k), f, centered=centered)
        return a / T**2 + T**2 * b

    def flandrin_uncentered(self, f: Signal, k: Kernel, T: float) -> float:
        return self.flandrin(f, k, T, centered=False)

    def flandrin_minimum(self, f: Signal, k: Kernel) -> Tuple[float, float]:
        """(T*, minimum) with T*^4 = a / b and minimum 2 sqrt(a b)."""
        self._require_marginal(f, k)
        a, b = self.weak_spreads(self.engine.cctfd(f, k), f)
        if a <= 0 or b <= 0:
            raise TfuError(f"Weak spreads must be positive to minimize over T, got {a} and {b}", "T")
        return float((a / b) ** 0.25), float(2.0 * np.sqrt(a * b))
