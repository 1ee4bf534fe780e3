# src/services/theorem_service.py

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Union

import numpy as np

from ..exceptions import CasePreconditionError, TfuError
from ..models.grid import Signal
from ..models.kernel import Kernel
from ..models.reports import BoundReport, TheoremCase, Verdict
from ..utils.config import Settings, settings as default_settings
from .analysis_service import AnalysisService, as_gradient_field, phase_gradient_fd, real_bound
from .kernel_service import conjugate_multiplier

logger = logging.getLogger(__name__)


class TheoremVerifier:
    """Checks the distribution-domain uncertainty product against the four lower-bound cases."""

    def __init__(self, analysis: Optional[AnalysisService] = None, settings: Optional[Settings] = None):
        """Initialize the verifier with analysis service and settings dependency injection."""
        self.settings = settings or default_settings
        self.analysis = analysis or AnalysisService(settings=self.settings)

    # -- case preconditions ----------------------------------------------

    def _multiplier_is_sign(self, f: Signal, k: Kernel) -> bool:
        """phi_t is the constant +1 or the constant -1 on every node."""
        phi = k.multiplier(f.grid.nodes())
        tol = self.settings.phase_match_tol
        return bool(np.all(np.abs(phi - 1.0) <= tol) or np.all(np.abs(phi + 1.0) <= tol))

    def _multiplier_matches_phase(self, f: Signal, k: Kernel) -> bool:
        """phi_t * conj(f / |f|) is +1 everywhere or -1 everywhere where f is not negligible."""
        magnitude = np.abs(f.samples)
        live = magnitude > self.settings.mask_threshold * magnitude.max()
        ratio = k.multiplier(f.grid.nodes())[live] * np.conj(f.samples[live] / magnitude[live])
        tol = self.settings.phase_match_tol
        return bool(np.all(np.abs(ratio - 1.0) <= tol) or np.all(np.abs(ratio + 1.0) <= tol))

    def check_case(self, case: TheoremCase, f: Signal, k: Kernel) -> None:
        """
        Raises:
            CasePreconditionError: Naming the first condition the pair fails
        """
        if not k.has_time_form:
            raise CasePreconditionError(case.value, "a kernel that acts as a multiplier on time")
        real = f.is_real(self.settings.unit_modulus_tol)

        if case == TheoremCase.T1:
            if not real:
                raise CasePreconditionError(case.value, "a real-valued signal")
            if not self._multiplier_is_sign(f, k):
                raise CasePreconditionError(case.value, "the kernel phi_t = +1 or phi_t = -1")
        elif case == TheoremCase.T2:
            if real:
                raise CasePreconditionError(case.value, "a complex-valued signal")
            if self._multiplier_matches_phase(f, k):
                raise CasePreconditionError(case.value, "a kernel other than +-exp(2 pi i phase of f)")
        elif case == TheoremCase.T3:
            if not real:
                raise CasePreconditionError(case.value, "a real-valued signal")
            if self._multiplier_is_sign(f, k):
                raise CasePreconditionError(case.value, "a kernel other than +1 or -1")
        elif not self._multiplier_matches_phase(f, k):
            raise CasePreconditionError(case.value, "the kernel phi_t = +-exp(2 pi i phase of f)")

    # -- verification ----------------------------------------------------

    def _signal_gradient(self, f: Signal, grad_phase) -> np.ndarray:
        if grad_phase is not None:
            return as_gradient_field(f, grad_phase)
        if f.is_real(self.settings.unit_modulus_tol):
            return np.zeros((f.grid.total, f.grid.dim))
        logger.info("No analytic phase gradient supplied; using finite differences")
        return phase_gradient_fd(f, self.settings.mask_threshold)

    def _kernel_gradient(self, f: Signal, k: Kernel, grad_phase_phi) -> np.ndarray:
        if grad_phase_phi is not None:
            return as_gradient_field(f, grad_phase_phi)
        grad = k.gradient(f.grid.nodes())
        if grad is None:
            raise TfuError(f"Kernel {k.tag} has no analytic phase gradient; supply one", "grad_phase_phi")
        return grad

    def verify_theorem(
        self,
        case: Union[TheoremCase, str],
        f: Signal,
        k: Kernel,
        grad_phase_f=None,
        grad_phase_phi=None,
    ) -> BoundReport:
        """
        Measure product_C of the distribution of f under k and compare it with
        the lower bounds of the requested case.

        The verdict is judged against the absolute-covariance bound; slack
        within ``equality_tol`` times the bound is reported as equality.
        """
        case = TheoremCase(case)
        self.check_case(case, f, k)

        grad_f = self._signal_gradient(f, grad_phase_f)
        grad_g = grad_f - self._kernel_gradient(f, k, grad_phase_phi)
        g = conjugate_multiplier(k, f)

        analysis = self.analysis
        with ThreadPoolExecutor(max_workers=self.settings.threads) as pool:
            cov_f = pool.submit(analysis.covariance, f, grad_f)
            abscov_f = pool.submit(analysis.abs_covariance, f, grad_f)
            cov_g = pool.submit(analysis.covariance, g, grad_g)
            abscov_g = pool.submit(analysis.abs_covariance, g, grad_g)
            measured = pool.submit(lambda: analysis.distribution_moments(analysis.engine.cctfd(f, k)).product_C)

        b_real = real_bound(f.grid.dim)
        b_cov_f = b_real + cov_f.result() ** 2
        b_abscov_f = b_real + abscov_f.result() ** 2
        b_cov_g = b_real + cov_g.result() ** 2
        b_abscov_g = b_real + abscov_g.result() ** 2

        if case == TheoremCase.T1:
            bound_cov = bound_abscov = b_real / 4.0
        elif case == TheoremCase.T2:
            bound_cov = (b_cov_f + b_cov_g) / 8.0
            bound_abscov = (b_abscov_f + b_abscov_g) / 8.0
        elif case == TheoremCase.T3:
            bound_cov = (b_real + b_cov_g) / 8.0
            bound_abscov = (b_real + b_abscov_g) / 8.0
        else:
            bound_cov = (b_cov_f + b_real) / 8.0
            bound_abscov = (b_abscov_f + b_real) / 8.0

        product = measured.result()
        slack = product - bound_abscov
        tolerance = self.settings.equality_tol * bound_abscov
        if abs(slack) <= tolerance:
            verdict = Verdict.EQUALITY
        elif slack > 0:
            verdict = Verdict.PASS
        else:
            verdict = Verdict.FAIL

        logger.info(
            f"{case.value} with kernel {k.tag}: product_C={product:.6e}, bound={bound_abscov:.6e}, "
            f"verdict={verdict.value}"
        )
        return BoundReport(
            case=case,
            b_real=b_real,
            b_cov_f=b_cov_f,
            b_abscov_f=b_abscov_f,
            b_cov_fphi=b_cov_g,
            b_abscov_fphi=b_abscov_g,
            theorem_bound_cov=bound_cov,
            theorem_bound_abscov=bound_abscov,
            measured_product_C=product,
            slack=slack,
            verdict=verdict,
            tolerance=tolerance,
        )
