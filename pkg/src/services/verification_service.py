# src/services/verification_service.py

"""
Verification suites: every identity and bound the laboratory implements,
checked numerically on constructed and seeded random signals.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from functools import partial
from typing import Callable, List, Optional, Tuple

import numpy as np

from ..exceptions import CasePreconditionError, KernelPreconditionError, SpanError, TfuError
from ..models.chirp import ChirpSpec, Partition
from ..models.grid import Grid, Signal
from ..models.kernel import Kernel
from ..models.reports import BoundReport, CheckResult, SuiteReport, TheoremCase, Verdict
from ..utils.config import Settings, settings as default_settings
from .analysis_service import AnalysisService, real_bound, relative_residual, staggered_phase_gradient
from .engine_service import DistributionEngine, gaussian_chirp_wigner
from .grid_service import grid_from_span, make_grid
from .kernel_service import joint_function, parse_kernel_spec
from .optimal_signal_service import (
    chirp_kernel,
    chirp_phase_gradient,
    gaussian_chirp,
    hermite_function,
    optimal_chirp,
    optimal_gaussian,
    random_decaying_signal,
)
from .theorem_service import TheoremVerifier

logger = logging.getLogger(__name__)

SUITES = ("lemmas", "theorems", "flandrin", "all")

GAUSSIAN_ZETA = 1.0 / (2.0 * np.pi)
PRODUCT_ZETAS = (GAUSSIAN_ZETA, 1.0, 4.0)
RANDOM_PAIRS = 5
COVARIANCE_FIELDS = 100
HALVING_NODES = (100, 200)
# kernel spec and chirp rate d of the closed-form distribution it produces on the optimal Gaussian
HALVING_KERNELS = (("timemul:one", 0.0), ("timemul:chirp(1)", 1.0))
# both routes at rounding level on the coarse grid already
HALVING_FLOOR = 1e-12
COARSE_GRID = (48, -3.0, 3.0)
FLANDRIN_WIDTHS = (0.5, 1.0, 2.0)
# |f conj(phi)| = |f| node by node, so only rounding separates the two sides
PRODUCT_IDENTITY_TOL = 1e-9
ZERO_COV_TOL = 1e-4
MAX_WIDENINGS = 4

BoundTask = Callable[[], Tuple[CheckResult, Optional[BoundReport]]]


def grid_label(grid: Grid) -> str:
    lo = grid.origin[0]
    hi = lo + grid.count[0] * grid.spacing[0]
    return f"{grid.count[0]}:{lo:g}:{hi:g}"


def widened(grid: Grid) -> Grid:
    """Same spacing, twice the nodes, twice the span about the same center."""
    return make_grid(
        [o - c * s / 2.0 for o, s, c in zip(grid.origin, grid.spacing, grid.count)],
        grid.spacing,
        [2 * c for c in grid.count],
    )


def _result(name: str, identity: str, residual: float, tolerance: float, **kwargs) -> CheckResult:
    return CheckResult(
        name=name,
        identity=identity,
        residual=float(residual),
        tolerance=tolerance,
        passed=bool(residual <= tolerance),
        **kwargs,
    )


def _error_result(name: str, identity: str, tolerance: float, exc: TfuError) -> CheckResult:
    logger.warning(f"Check {name} raised {type(exc).__name__}: {exc.message}")
    return CheckResult(
        name=name,
        identity=identity,
        tolerance=tolerance,
        passed=False,
        details={"error": type(exc).__name__, "message": exc.message},
    )


class VerificationService:
    """Runs the lemmas, theorems and flandrin suites and assembles their reports."""

    def __init__(
        self,
        settings: Optional[Settings] = None,
        engine: Optional[DistributionEngine] = None,
        analysis: Optional[AnalysisService] = None,
        verifier: Optional[TheoremVerifier] = None,
    ):
        """Initialize verification service with dependency injection."""
        self.settings = settings or default_settings
        self.engine = engine or DistributionEngine(self.settings)
        self.analysis = analysis or AnalysisService(self.engine, self.settings)
        self.verifier = verifier or TheoremVerifier(self.analysis, self.settings)

    @property
    def tol(self) -> float:
        return self.settings.identity_tol

    # -- orchestration ---------------------------------------------------

    def _guarded(self, name: str, check: Callable[[], CheckResult]) -> CheckResult:
        try:
            return check()
        except TfuError as e:
            return _error_result(name, name.split("[")[0], self.tol, e)

    def _task(self, name: str, fn: Callable[..., CheckResult], *args) -> Callable[[], CheckResult]:
        """Bind a check so that a laboratory error becomes a failed check named ``name``."""
        return partial(self._guarded, name, partial(fn, *args))

    def _fan_out(self, tasks: List[Callable]) -> list:
        """Run independent tasks on the worker pool; results keep submission order."""
        with ThreadPoolExecutor(max_workers=self.settings.threads) as pool:
            futures = [pool.submit(task) for task in tasks]
            return [future.result() for future in futures]

    def run_suite(self, suite: str, grid: Optional[Grid] = None, seed: int = 0) -> SuiteReport:
        """
        Run one suite on ``grid`` (the configured default grid when omitted).

        Raises:
            TfuError: For an unknown suite name
        """
        if suite not in SUITES:
            raise TfuError(f"Unknown suite {suite!r}; expected one of {', '.join(SUITES)}", "suite")
        if grid is None:
            grid = grid_from_span(*self.settings.grid_parts)

        logger.info(f"Running suite {suite} on grid {grid_label(grid)} with seed {seed}")
        checks: List[CheckResult] = []
        bounds: List[BoundReport] = []
        if suite in ("lemmas", "all"):
            checks.extend(self.lemma_checks(grid, seed))
        if suite in ("theorems", "all"):
            theorem_checks, theorem_bounds = self.theorem_checks(grid)
            checks.extend(theorem_checks)
            bounds.extend(theorem_bounds)
        if suite in ("flandrin", "all"):
            checks.extend(self.flandrin_checks(grid))

        report = SuiteReport(
            suite=suite,
            seed=seed,
            grid=grid_label(grid),
            tolerance=self.tol,
            passed=all(check.passed for check in checks),
            checks=checks,
            bound_reports=bounds,
        )
        logger.info(f"Suite {suite}: {len(checks) - len(report.failed_checks)}/{len(checks)} checks passed")
        return report

    def run_theorem(
        self, case: TheoremCase, f: Signal, k: Kernel, grad_phase_f=None, seed: int = 0
    ) -> SuiteReport:
        """One theorem case wrapped as a suite report; the case precondition is raised, not recorded."""
        report = self.verifier.verify_theorem(case, f, k, grad_phase_f)
        check = CheckResult(
            name=f"theorem[{report.case.value},{k.tag}]",
            identity=f"{report.case.value} lower bound",
            value=report.measured_product_C,
            target=report.theorem_bound_abscov,
            residual=relative_residual(report.measured_product_C, report.theorem_bound_abscov),
            tolerance=self.settings.equality_tol,
            passed=report.verdict != Verdict.FAIL,
            details={"verdict": report.verdict.value},
        )
        return SuiteReport(
            suite=f"theorem:{report.case.value}",
            seed=seed,
            grid=grid_label(f.grid),
            tolerance=self.tol,
            passed=check.passed,
            checks=[check],
            bound_reports=[report],
        )

    # -- shared signals --------------------------------------------------

    def _gaussian(self, grid: Grid) -> Signal:
        return optimal_gaussian(GAUSSIAN_ZETA, grid)

    def _chirp(self, grid: Grid) -> Tuple[Signal, np.ndarray]:
        return gaussian_chirp(1.0, grid)

    def _kernels(self) -> List[Kernel]:
        return [Kernel.unit(), Kernel.kirkwood_rihaczek(), Kernel.page(), parse_kernel_spec("timemul:chirp(1)")]

    # -- lemmas ----------------------------------------------------------

    def _moyal(self, k: Kernel, f: Signal, g: Signal, label: str) -> CheckResult:
        residual = self.engine.moyal_residual(f, g, k)
        return _result(
            f"moyal[{k.tag},{label}]", "inner-product identity", residual, self.tol, value=residual, target=0.0
        )

    def _parseval(self, k: Kernel, f: Signal, label: str) -> CheckResult:
        ratio = self.engine.parseval_ratio(f, k)
        return _result(
            f"parseval[{k.tag},{label}]", "energy identity", abs(ratio - 1.0), self.tol, value=ratio, target=1.0
        )

    def _engine_equivalence(self, k: Kernel, f: Signal) -> CheckResult:
        deviation = self.engine.engine_deviation(f, k)
        return _result(
            f"engine_equivalence[{k.tag}]", "time route = frequency route", deviation, self.tol, value=deviation
        )

    def _oracle_error(self, k: Kernel, d: float, grid: Grid) -> float:
        """Peak-relative error of the worse engine route against the closed-form distribution."""
        f = self._gaussian(grid)
        time_route = self.engine.cctfd(f, k)
        freq_route = self.engine.cctfd_freq(f, k)
        oracle = gaussian_chirp_wigner(grid.axis(0)[:, None], time_route.freq_grid.axis(0)[None, :], d)
        worst = max(np.max(np.abs(time_route.values - oracle)), np.max(np.abs(freq_route.values - oracle)))
        return float(worst / np.max(np.abs(oracle)))

    def _halving(self, k: Kernel, d: float, lo: float, hi: float) -> CheckResult:
        coarse, fine = (self._oracle_error(k, d, grid_from_span(count, lo, hi)) for count in HALVING_NODES)
        return CheckResult(
            name=f"engine_halving[{k.tag}]",
            identity="error against the closed form halves when the node count doubles",
            value=fine,
            target=coarse / 2.0,
            tolerance=self.tol,
            passed=bool(fine <= coarse / 2.0 or fine <= HALVING_FLOOR),
            details={"nodes": list(HALVING_NODES), "errors": [coarse, fine], "floor": HALVING_FLOOR},
        )

    def _conversion(self, f: Signal, k: Kernel, label: str) -> CheckResult:
        report = self.analysis.conversion_identities(f, k)
        return _result(
            f"conversion[{label},{k.tag}]",
            "distribution spreads from Fourier spreads",
            max(report.residuals),
            self.tol,
            value=report.product_C,
            target=report.target_product,
            details=report.model_dump(),
        )

    def _moment_vectors(self, f: Signal, k: Kernel, label: str) -> CheckResult:
        res_x, res_w = self.analysis.moment_vector_identities(f, k)
        return _result(
            f"moment_vectors[{label},{k.tag}]",
            "distribution centroid from Fourier centroids",
            max(res_x, res_w),
            self.tol,
            details={"residual_x": res_x, "residual_w": res_w},
        )

    def _product_identity(self, f: Signal, k: Kernel, label: str) -> CheckResult:
        residual = self.analysis.product_identity_residual(f, k)
        return _result(
            f"product_identity[{label},{k.tag}]", "time spread of f equals that of f conj(phi)", residual,
            PRODUCT_IDENTITY_TOL,
        )

    def _marginals(self, f: Signal, label: str) -> CheckResult:
        time_err, freq_err = self.analysis.marginal_residuals(f)
        return _result(
            f"marginals[{label}]",
            "Wigner marginals",
            max(time_err, freq_err),
            self.tol,
            details={"time": time_err, "frequency": freq_err},
        )

    def _gaussian_product(self, zeta: float, grid: Grid) -> CheckResult:
        f = None
        for attempt in range(MAX_WIDENINGS + 1):
            try:
                f = optimal_gaussian(zeta, grid)
                break
            except SpanError:
                if attempt == MAX_WIDENINGS:
                    raise
                logger.debug(f"Widening grid {grid_label(grid)} for zeta={zeta:g}")
                grid = widened(grid)
        target = real_bound(1)
        product = self.analysis.uncertainty_product_fourier(f)
        return _result(
            f"gaussian_product[zeta={zeta:.6g}]",
            "optimal Gaussian attains the real bound",
            relative_residual(product, target),
            self.tol,
            value=product,
            target=target,
            details={"grid": grid_label(grid)},
        )

    def _linear_chirp_product(self, grid: Grid) -> CheckResult:
        spec = ChirpSpec(zeta=GAUSSIAN_ZETA, eps=1.0, partition=Partition(j1=[1]))
        f, grad = optimal_chirp(spec, grid)
        report = self.analysis.moment_report(f, grad)
        target = real_bound(1) + report.cov**2
        residual = max(relative_residual(report.product, target), relative_residual(report.product, 2 * real_bound(1)))
        return _result(
            "chirp_product[j1]",
            "linear-branch chirp attains the covariance bound",
            residual,
            self.tol,
            value=report.product,
            target=target,
            details=report.model_dump(),
        )

    def _kinked_chirp_product(self, grid: Grid) -> CheckResult:
        spec = ChirpSpec(zeta=GAUSSIAN_ZETA, eps=1.0, partition=Partition(j3=[1]))
        f, grad = optimal_chirp(spec, grid)
        report = self.analysis.moment_report(f, grad, x0=spec.x0, w0=spec.w0)
        target = real_bound(1) + report.abs_cov**2
        weaker = real_bound(1) + report.cov**2
        residual = relative_residual(report.product, target)
        strict = report.product - weaker > self.tol * report.product
        passed = (
            residual <= self.tol
            and abs(report.cov) <= ZERO_COV_TOL
            and relative_residual(report.abs_cov, 1.0 / (4.0 * np.pi)) <= self.tol
            and strict
        )
        return CheckResult(
            name="chirp_product[j3]",
            identity="kinked-branch chirp attains the absolute-covariance bound",
            value=report.product,
            target=target,
            residual=residual,
            tolerance=self.tol,
            passed=bool(passed),
            details={
                **report.model_dump(),
                "covariance_bound": weaker,
                "strictly_above_covariance_bound": bool(strict),
            },
        )

    def _phase_gradient(self, branch: str, grid: Grid) -> CheckResult:
        """Analytic branch gradient against midpoint phase differences of the sampled chirp."""
        spec = ChirpSpec(zeta=GAUSSIAN_ZETA, eps=1.0, partition=Partition(**{branch: [1]}))
        f, _ = optimal_chirp(spec, grid)
        midpoints, measured = staggered_phase_gradient(f)
        # an interval straddling the kink at x0 has no single quadratic phase
        half = 0.5 * grid.spacing[0]
        x0 = spec.x0[0]
        keep = (midpoints - half - x0) * (midpoints + half - x0) >= 0.0
        analytic = chirp_phase_gradient(spec)(midpoints[keep][:, None])[:, 0]
        deviation = float(np.max(np.abs(measured[keep] - analytic)) / np.max(np.abs(analytic)))
        return _result(
            f"phase_gradient[{branch}]",
            "branch gradient matches sampled phase differences",
            deviation,
            self.tol,
            value=deviation,
            details={"intervals": int(keep.sum())},
        )

    def _covariance_ordering(self, f: Signal, fields: List[np.ndarray]) -> CheckResult:
        gaps = [self.analysis.abs_covariance(f, grad) - abs(self.analysis.covariance(f, grad)) for grad in fields]
        worst = float(min(gaps))
        return CheckResult(
            name="covariance_ordering",
            identity="absolute covariance dominates |covariance|",
            value=worst,
            target=0.0,
            tolerance=PRODUCT_IDENTITY_TOL,
            passed=bool(worst >= -PRODUCT_IDENTITY_TOL),
            details={"fields": len(fields)},
        )

    def _tabulated_matches(self, k: Kernel) -> CheckResult:
        """The closed-form or sifted path of ``k`` against direct quadrature of its joint form."""
        grid = grid_from_span(*COARSE_GRID)
        f = self._gaussian(grid)
        table = Kernel.tabulated(joint_function(k), f"table:{k.tag}")
        direct = self.engine.cctfd(f, k).values
        quadrature = self.engine.cctfd(f, table).values
        deviation = float(np.max(np.abs(direct - quadrature)) / np.max(np.abs(direct)))
        return _result(
            f"tabulated_quadrature[{k.tag}]",
            "tabulated quadrature reproduces the closed-form kernel",
            deviation,
            self.tol,
            value=deviation,
            details={"grid": grid_label(grid)},
        )

    def lemma_checks(self, grid: Grid, seed: int) -> List[CheckResult]:
        rng = np.random.default_rng(seed)
        pairs = [
            (random_decaying_signal(grid, rng), random_decaying_signal(grid, rng)) for _ in range(RANDOM_PAIRS)
        ]
        gaussian = self._gaussian(grid)
        chirp, _ = self._chirp(grid)
        hermite = hermite_function(1, grid)
        fields = [rng.normal(scale=2.0, size=(grid.total, 1)) for _ in range(COVARIANCE_FIELDS)]
        lo, hi = grid.origin[0], grid.origin[0] + grid.count[0] * grid.spacing[0]

        tasks = []
        for k in self._kernels():
            for i, (f, g) in enumerate(pairs):
                tasks.append(self._task(f"moyal[{k.tag},random{i}]", self._moyal, k, f, g, f"random{i}"))
            tasks.append(self._task(f"moyal[{k.tag},orthogonal]", self._moyal, k, gaussian, hermite, "orthogonal"))
            for label, f in (("gaussian", gaussian), ("chirp", chirp)):
                tasks.append(self._task(f"parseval[{k.tag},{label}]", self._parseval, k, f, label))

        for spec in ("timemul:one", "timemul:chirp(1)", "timemul:cubic(1)"):
            k = parse_kernel_spec(spec)
            tasks.append(self._task(f"engine_equivalence[{k.tag}]", self._engine_equivalence, k, gaussian))
        for spec, d in HALVING_KERNELS:
            k = parse_kernel_spec(spec)
            tasks.append(self._task(f"engine_halving[{k.tag}]", self._halving, k, d, lo, hi))

        for label, f in (("gaussian", gaussian), ("chirp", chirp)):
            for spec in ("timemul:one", "timemul:chirp(2)"):
                k = parse_kernel_spec(spec)
                tasks.append(self._task(f"conversion[{label},{k.tag}]", self._conversion, f, k, label))
                tasks.append(self._task(f"moment_vectors[{label},{k.tag}]", self._moment_vectors, f, k, label))
                tasks.append(self._task(f"product_identity[{label},{k.tag}]", self._product_identity, f, k, label))
            tasks.append(self._task(f"marginals[{label}]", self._marginals, f, label))

        for zeta in PRODUCT_ZETAS:
            tasks.append(self._task(f"gaussian_product[zeta={zeta:.6g}]", self._gaussian_product, zeta, grid))
        tasks.append(self._task("chirp_product[j1]", self._linear_chirp_product, grid))
        tasks.append(self._task("chirp_product[j3]", self._kinked_chirp_product, grid))
        for branch in ("j1", "j3"):
            tasks.append(self._task(f"phase_gradient[{branch}]", self._phase_gradient, branch, grid))
        tasks.append(self._task("covariance_ordering", self._covariance_ordering, gaussian, fields))
        for k in (Kernel.kirkwood_rihaczek(), Kernel.page()):
            tasks.append(self._task(f"tabulated_quadrature[{k.tag}]", self._tabulated_matches, k))
        return self._fan_out(tasks)

    # -- theorems --------------------------------------------------------

    def _bound_case(
        self, name: str, case: TheoremCase, f: Signal, k: Kernel, grad_f, expected: Verdict, margin: float = 0.0
    ) -> Tuple[CheckResult, Optional[BoundReport]]:
        """A constructed case whose verdict is known, optionally with a required relative excess."""
        try:
            report = self.verifier.verify_theorem(case, f, k, grad_f)
        except TfuError as e:
            return _error_result(name, f"{case.value} lower bound", self.tol, e), None
        excess = margin == 0.0 or report.measured_product_C >= (1.0 + margin) * report.theorem_bound_abscov
        passed = report.verdict == expected and excess
        check = CheckResult(
            name=name,
            identity=f"{case.value} lower bound",
            value=report.measured_product_C,
            target=report.theorem_bound_abscov,
            residual=relative_residual(report.measured_product_C, report.theorem_bound_abscov),
            tolerance=self.settings.equality_tol,
            passed=bool(passed),
            details={"verdict": report.verdict.value, "expected": expected.value, "kernel": k.tag},
        )
        return check, report

    def _rejected_case(self, name: str, case: TheoremCase, f: Signal, k: Kernel) -> Tuple[CheckResult, None]:
        """A mismatched pair that the case dispatch must refuse."""
        try:
            self.verifier.check_case(case, f, k)
        except CasePreconditionError as e:
            return (
                CheckResult(
                    name=name,
                    identity=f"{case.value} precondition",
                    tolerance=self.tol,
                    passed=True,
                    details={"rejected": e.condition},
                ),
                None,
            )
        return (
            CheckResult(
                name=name,
                identity=f"{case.value} precondition",
                tolerance=self.tol,
                passed=False,
                details={"rejected": None},
            ),
            None,
        )

    def theorem_checks(self, grid: Grid) -> Tuple[List[CheckResult], List[BoundReport]]:
        gaussian = self._gaussian(grid)
        chirp, chirp_grad = self._chirp(grid)
        hermite = hermite_function(1, grid)
        chirp_spec = ChirpSpec(zeta=GAUSSIAN_ZETA, eps=1.0, partition=Partition(j1=[1]))
        one = parse_kernel_spec("timemul:one")
        minus_one = parse_kernel_spec("timemul:minus_one")
        chirp2 = parse_kernel_spec("timemul:chirp(2)")
        own_phase = chirp_kernel(chirp_spec)
        zero = np.zeros((grid.total, 1))

        constructed = [
            ("theorem[T1,gaussian,one]", TheoremCase.T1, gaussian, one, zero, Verdict.EQUALITY, 0.0),
            ("theorem[T1,gaussian,minus_one]", TheoremCase.T1, gaussian, minus_one, zero, Verdict.EQUALITY, 0.0),
            ("theorem[T1,hermite1,one]", TheoremCase.T1, hermite, one, zero, Verdict.PASS, 0.1),
            ("theorem[T2,chirp,chirp(2)]", TheoremCase.T2, chirp, chirp2, chirp_grad, Verdict.EQUALITY, 0.0),
            ("theorem[T3,gaussian,chirp(2)]", TheoremCase.T3, gaussian, chirp2, zero, Verdict.EQUALITY, 0.0),
            ("theorem[T4,chirp,phase_of_signal]", TheoremCase.T4, chirp, own_phase, chirp_grad, Verdict.EQUALITY, 0.0),
        ]
        mismatched = [
            ("precondition[T1,chirp,one]", TheoremCase.T1, chirp, one),
            ("precondition[T2,chirp,phase_of_signal]", TheoremCase.T2, chirp, own_phase),
            ("precondition[T3,gaussian,one]", TheoremCase.T3, gaussian, one),
            ("precondition[T4,gaussian,chirp(2)]", TheoremCase.T4, gaussian, chirp2),
        ]
        tasks: List[BoundTask] = [partial(self._bound_case, *case) for case in constructed]
        tasks.extend(partial(self._rejected_case, *case) for case in mismatched)
        results = self._fan_out(tasks)
        checks = [check for check, _ in results]
        bounds = [report for _, report in results if report is not None]
        return checks, bounds

    # -- flandrin --------------------------------------------------------

    def _flandrin_floor(self, f: Signal, label: str, T: float) -> CheckResult:
        value = self.analysis.flandrin(f, Kernel.unit(), T)
        floor = f.grid.dim / (2.0 * np.pi)
        return CheckResult(
            name=f"flandrin[{label},T={T:g}]",
            identity="weak functional lower bound",
            value=value,
            target=floor,
            residual=max(floor - value, 0.0),
            tolerance=self.tol,
            passed=bool(value >= floor - self.tol),
        )

    def _flandrin_value(self, f: Signal, label: str, T: float, target: float) -> CheckResult:
        value = self.analysis.flandrin(f, Kernel.unit(), T)
        return _result(
            f"flandrin_value[{label},T={T:g}]",
            "weak functional of the Gaussian",
            relative_residual(value, target),
            self.tol,
            value=value,
            target=target,
        )

    def _weak_spreads(self, f: Signal, k: Kernel, label: str) -> CheckResult:
        a, b = self.analysis.weak_spreads(self.engine.cctfd(f, k), f)
        _, spread_x = self.analysis.time_moments(f)
        _, spread_w = self.analysis.freq_moments(f)
        residual = max(relative_residual(a, spread_x), relative_residual(b, spread_w))
        return _result(
            f"weak_spreads[{label},{k.tag}]",
            "first-power spreads equal the Fourier spreads",
            residual,
            self.tol,
            details={"time": a, "frequency": b, "spread_x": spread_x, "spread_w": spread_w},
        )

    def _flandrin_minimum(self, f: Signal) -> CheckResult:
        T_star, minimum = self.analysis.flandrin_minimum(f, Kernel.unit())
        target = 1.0 / (2.0 * np.pi)
        residual = max(relative_residual(minimum, target), abs(T_star - 1.0))
        return _result(
            "flandrin_minimum[gaussian]",
            "closed-form minimizer over T",
            residual,
            self.tol,
            value=minimum,
            target=target,
            details={"T_star": T_star},
        )

    def _flandrin_uncentered(self, f: Signal, label: str, expect_equal: bool) -> CheckResult:
        centered = self.analysis.flandrin(f, Kernel.unit(), 1.0)
        uncentered = self.analysis.flandrin_uncentered(f, Kernel.unit(), 1.0)
        gap = relative_residual(uncentered, centered)
        if expect_equal:
            passed = gap <= self.tol
        else:
            passed = uncentered > centered * (1.0 + self.tol)
        return CheckResult(
            name=f"flandrin_uncentered[{label}]",
            identity="uncentered weak functional dominates the centered one",
            value=uncentered,
            target=centered,
            residual=gap,
            tolerance=self.tol,
            passed=bool(passed),
        )

    def _flandrin_refusal(self, f: Signal) -> CheckResult:
        k = parse_kernel_spec("timemul:chirp(1)")
        try:
            self.analysis.flandrin(f, k, 1.0)
        except KernelPreconditionError:
            refused = True
        else:
            refused = False
        return CheckResult(
            name=f"flandrin_refusal[{k.tag}]",
            identity="non-marginal kernels are refused",
            tolerance=self.tol,
            passed=refused,
        )

    def flandrin_checks(self, grid: Grid) -> List[CheckResult]:
        gaussian = self._gaussian(grid)
        chirp, _ = self._chirp(grid)
        hermite = hermite_function(1, grid)
        shifted = optimal_gaussian(GAUSSIAN_ZETA, grid, x0=[0.5])
        signals = (("gaussian", gaussian), ("chirp", chirp), ("hermite1", hermite))

        tasks = []
        for label, f in signals:
            for T in FLANDRIN_WIDTHS:
                tasks.append(self._task(f"flandrin[{label},T={T:g}]", self._flandrin_floor, f, label, T))
        for T, target in ((1.0, 1.0 / (2.0 * np.pi)), (2.0, 17.0 / (16.0 * np.pi))):
            tasks.append(
                self._task(f"flandrin_value[gaussian,T={T:g}]", self._flandrin_value, gaussian, "gaussian", T, target)
            )
        for label, f in signals[:2]:
            for k in (Kernel.unit(), Kernel.kirkwood_rihaczek(), Kernel.page()):
                tasks.append(self._task(f"weak_spreads[{label},{k.tag}]", self._weak_spreads, f, k, label))
        tasks.append(self._task("flandrin_minimum[gaussian]", self._flandrin_minimum, gaussian))
        tasks.append(
            self._task("flandrin_uncentered[gaussian]", self._flandrin_uncentered, gaussian, "gaussian", True)
        )
        tasks.append(self._task("flandrin_uncentered[shifted]", self._flandrin_uncentered, shifted, "shifted", False))
        tasks.append(self._task("flandrin_refusal[timemul:chirp(1)]", self._flandrin_refusal, gaussian))
        return self._fan_out(tasks)
