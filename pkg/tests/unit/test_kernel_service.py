# tests/unit/test_kernel_service.py

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.exceptions import KernelSpecError, NoJointFormError, NoTimeFormError
from src.models.kernel import Kernel, KernelVariant
from src.services.grid_service import grid_from_span
from src.services.kernel_service import (
    classify,
    conjugate_multiplier,
    joint_function,
    kernel_value,
    parse_kernel_spec,
    phase_kernel,
)


class TestParseKernelSpec:
    """Test suite for kernel spec strings"""

    @pytest.mark.parametrize(
        "spec, variant",
        [
            ("unit", KernelVariant.UNIT),
            ("krd", KernelVariant.KIRKWOOD_RIHACZEK),
            ("page", KernelVariant.PAGE),
            ("timemul:chirp(1)", KernelVariant.TIME_MULTIPLIER),
            (" timemul:cubic(0.5) ", KernelVariant.TIME_MULTIPLIER),
        ],
    )
    def test_known_specs(self, spec, variant):
        """Test catalog names resolve to their variant"""
        assert parse_kernel_spec(spec).variant == variant

    def test_chirp_multiplier_values(self):
        """Test timemul:chirp(d) is exp(pi i d t^2) with gradient d t"""
        k = parse_kernel_spec("timemul:chirp(2)")
        t = np.array([-1.0, 0.0, 0.5])
        assert_allclose(k.multiplier(t), np.exp(2j * np.pi * t**2))
        assert_allclose(k.gradient(t)[:, 0], 2.0 * t)

    def test_negated_multiplier(self):
        """Test a leading minus flips the sign of the multiplier"""
        k = parse_kernel_spec("timemul:-linear(0.25)")
        t = np.array([0.0, 1.0])
        assert k.sign == -1.0
        assert k.tag == "timemul:-linear(0.25)"
        assert_allclose(k.multiplier(t), -np.exp(2j * np.pi * 0.25 * t))

    def test_minus_one(self):
        """Test timemul:minus_one is the constant -1"""
        k = parse_kernel_spec("timemul:minus_one")
        assert_allclose(k.multiplier(np.linspace(-2, 2, 5)), -np.ones(5))

    @pytest.mark.parametrize(
        "spec, message",
        [
            ("wigner", "Unknown kernel"),
            ("timemul:spiral(1)", "Unknown time multiplier"),
            ("timemul:chirp()", "takes 1 parameter"),
            ("timemul:chirp(1,2)", "takes 1 parameter"),
            ("timemul:chirp(a)", "must be numbers"),
            ("timemul:chirp(1", "Malformed"),
        ],
    )
    def test_invalid_specs(self, spec, message):
        """Test malformed or unknown specs raise KernelSpecError"""
        with pytest.raises(KernelSpecError, match=message):
            parse_kernel_spec(spec)


class TestJointForm:
    """Test suite for phi(v, y)"""

    def test_kernel_values(self):
        """Test closed-form joint values at one pair"""
        assert kernel_value(Kernel.unit(), 0.3, -2.0) == 1.0
        assert kernel_value(Kernel.kirkwood_rihaczek(), 1.0, 0.5) == pytest.approx(1j)
        assert kernel_value(Kernel.page(), 0.25, -1.0) == pytest.approx(1j)

    def test_time_multiplier_has_no_joint_form(self):
        """Test time multipliers refuse phi(v, y)"""
        with pytest.raises(NoJointFormError):
            joint_function(parse_kernel_spec("timemul:chirp(1)"))

    def test_joint_kernel_has_no_time_form(self, gaussian):
        """Test joint kernels refuse f * conj(phi_t)"""
        with pytest.raises(NoTimeFormError):
            conjugate_multiplier(Kernel.kirkwood_rihaczek(), gaussian)


class TestClassify:
    """Test suite for kernel flags"""

    @pytest.mark.parametrize("spec", ["unit", "krd", "page", "timemul:chirp(1)"])
    def test_flags_independent_of_resolution(self, spec):
        """Test catalog kernels get the same flags on a coarse and a fine grid"""
        k = parse_kernel_spec(spec)
        assert classify(k, grid_from_span(64, -8.0, 8.0)) == classify(k, grid_from_span(256, -8.0, 8.0))

    def test_unit(self, grid):
        """Test the unit kernel carries every flag"""
        flags = classify(Kernel.unit(), grid)
        assert flags.unit_modulus and flags.time_multiplier and flags.marginal and flags.energy_conserving

    @pytest.mark.parametrize("kernel", [Kernel.kirkwood_rihaczek(), Kernel.page()])
    def test_marginal_joint_kernels(self, small_grid, kernel):
        """Test KRD and Page are unit modulus, marginal and energy conserving"""
        flags = classify(kernel, small_grid)
        assert flags.unit_modulus
        assert flags.marginal
        assert flags.energy_conserving
        assert not flags.time_multiplier

    def test_time_multiplier(self, grid):
        """Test a chirp multiplier is unit modulus but not marginal"""
        flags = classify(parse_kernel_spec("timemul:chirp(1)"), grid)
        assert flags.unit_modulus and flags.time_multiplier
        assert not flags.marginal

    def test_non_unit_modulus_table(self, small_grid):
        """Test a damped joint kernel loses the unit-modulus flag"""
        damped = Kernel.tabulated(lambda v, y: np.exp(-np.sum(v**2 + y**2, axis=-1)), "table:damped")
        flags = classify(damped, small_grid)
        assert not flags.unit_modulus
        assert flags.energy_conserving


class TestConjugateMultiplier:
    """Test suite for f * conj(phi_t)"""

    def test_unit_returns_signal(self, gaussian):
        """Test the unit kernel leaves f untouched"""
        assert conjugate_multiplier(Kernel.unit(), gaussian) is gaussian

    def test_own_phase_gives_modulus(self, chirp):
        """Test multiplying by the conjugate of f's own phase leaves |f|"""
        f, _ = chirp
        k = phase_kernel(lambda t: 0.5 * t[:, 0] ** 2)
        g = conjugate_multiplier(k, f)
        assert_allclose(g.samples, np.abs(f.samples), atol=1e-14)
