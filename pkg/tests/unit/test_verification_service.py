# tests/unit/test_verification_service.py

import numpy as np
import pytest

from src.exceptions import CasePreconditionError, SpanError, TfuError
from src.models.kernel import Kernel
from src.models.reports import BoundReport, TheoremCase, Verdict
from src.services.grid_service import grid_from_span
from src.services.verification_service import VerificationService, grid_label, widened


@pytest.fixture
def service(settings):
    return VerificationService(settings)


class TestHelpers:
    """Test suite for grid helpers"""

    def test_grid_label(self, grid):
        """Test labels use the M:lo:hi form"""
        assert grid_label(grid) == "256:-8:8"

    def test_widened_keeps_spacing_and_center(self):
        """Test widening doubles the span about the same center"""
        wide = widened(grid_from_span(4, 0.0, 1.0))
        assert wide.spacing == (0.25,)
        assert wide.count == (8,)
        assert wide.origin == (-0.5,)


class TestOrchestration:
    """Test suite for task fan-out and error capture"""

    def test_guarded_turns_errors_into_failed_checks(self, service):
        """Test a laboratory error becomes a failed check carrying the error name"""

        def boom():
            raise SpanError("grid too small", "grid")

        check = service._guarded("gaussian_product[zeta=4]", boom)
        assert not check.passed
        assert check.identity == "gaussian_product"
        assert check.details == {"error": "SpanError", "message": "grid too small"}

    def test_fan_out_keeps_submission_order(self, settings):
        """Test results come back in submission order on several threads"""
        service = VerificationService(settings.model_copy(update={"threads": 4}))
        tasks = [lambda i=i: i for i in range(20)]
        assert service._fan_out(tasks) == list(range(20))

    def test_unknown_suite(self, service, grid):
        """Test an unknown suite name is refused"""
        with pytest.raises(TfuError, match="Unknown suite"):
            service.run_suite("everything", grid)


class TestSuites:
    """Test suite for the three verification suites"""

    def test_theorems_suite(self, service, grid):
        """Test every constructed case meets its expected verdict"""
        report = service.run_suite("theorems", grid)
        assert report.passed, [check.name for check in report.failed_checks]
        assert len(report.checks) == 10
        assert [bound.case for bound in report.bound_reports] == [
            TheoremCase.T1,
            TheoremCase.T1,
            TheoremCase.T1,
            TheoremCase.T2,
            TheoremCase.T3,
            TheoremCase.T4,
        ]
        assert report.grid == "256:-8:8"

    def test_flandrin_suite(self, service, grid):
        """Test the weak functional checks all pass"""
        report = service.run_suite("flandrin", grid)
        assert report.passed, [check.name for check in report.failed_checks]
        assert report.bound_reports == []
        assert "flandrin_refusal[timemul:chirp(1)]" in {check.name for check in report.checks}

    def test_lemmas_suite(self, service, grid):
        """Test every identity holds on the default grid"""
        report = service.run_suite("lemmas", grid, seed=3)
        assert report.passed, [check.name for check in report.failed_checks]
        assert report.seed == 3
        names = {check.name for check in report.checks}
        assert "chirp_product[j3]" in names
        assert "tabulated_quadrature[krd]" in names
        assert "tabulated_quadrature[page]" in names
        assert {"phase_gradient[j1]", "phase_gradient[j3]"} <= names
        assert "engine_halving[timemul:chirp(1)]" in names

    def test_reports_are_reproducible(self, service, grid):
        """Test the same seed gives the same report"""
        first = service.run_suite("flandrin", grid, seed=11)
        second = service.run_suite("flandrin", grid, seed=11)
        assert first.model_dump() == second.model_dump()

    def test_failed_check_fails_the_suite(self, service, grid, mocker):
        """Test one failing check marks the whole report as failed"""
        mocker.patch.object(service.analysis, "flandrin_minimum", side_effect=TfuError("no minimum", "T"))
        report = service.run_suite("flandrin", grid)
        assert not report.passed
        assert [check.name for check in report.failed_checks] == ["flandrin_minimum[gaussian]"]


class TestRunTheorem:
    """Test suite for single theorem runs"""

    def test_wraps_bound_report(self, service, gaussian):
        """Test a theorem run is reported as a one-check suite"""
        report = service.run_theorem(TheoremCase.T1, gaussian, Kernel.unit(), seed=5)
        assert report.suite == "theorem:T1"
        assert report.passed
        assert report.seed == 5
        assert report.bound_reports[0].verdict == Verdict.EQUALITY
        assert report.checks[0].details == {"verdict": "equality"}

    def test_failed_verdict(self, service, gaussian, mocker):
        """Test a fail verdict fails the report"""
        bound = BoundReport(
            case=TheoremCase.T1,
            b_real=1.0,
            b_cov_f=1.0,
            b_abscov_f=1.0,
            b_cov_fphi=1.0,
            b_abscov_fphi=1.0,
            theorem_bound_cov=0.25,
            theorem_bound_abscov=0.25,
            measured_product_C=0.1,
            slack=-0.15,
            verdict=Verdict.FAIL,
            tolerance=2.5e-4,
        )
        mocker.patch.object(service.verifier, "verify_theorem", return_value=bound)
        report = service.run_theorem(TheoremCase.T1, gaussian, Kernel.unit())
        assert not report.passed
        assert report.checks[0].residual == pytest.approx(0.6)

    def test_precondition_propagates(self, service, chirp):
        """Test a mismatched pair raises instead of being recorded"""
        f, grad = chirp
        with pytest.raises(CasePreconditionError):
            service.run_theorem(TheoremCase.T1, f, Kernel.unit(), grad)
