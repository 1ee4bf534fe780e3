# tests/unit/test_optimal_signal_service.py

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.exceptions import PartitionError, SpanError, TfuError, UnsupportedDimensionError
from src.models.chirp import ChirpSpec, Partition
from src.services.analysis_service import AnalysisService
from src.services.grid_service import grid_from_span, inner_product, make_grid
from src.services.optimal_signal_service import (
    chirp_kernel,
    chirp_phase,
    chirp_phase_gradient,
    hermite_function,
    optimal_chirp,
    optimal_gaussian,
    random_decaying_signal,
)

ZETA = 1.0 / (2.0 * np.pi)


class TestOptimalGaussian:
    """Test suite for the optimal Gaussian"""

    def test_envelope(self, grid):
        """Test exp(-||x - x0||^2 / (2 zeta) + amp_offset)"""
        f = optimal_gaussian(0.5, grid, x0=[1.0], amp_offset=0.5)
        x = grid.axis(0)
        assert_allclose(f.samples.real, np.exp(-((x - 1.0) ** 2) + 0.5))
        assert f.is_real()

    def test_two_dimensional(self):
        """Test the envelope is radial on a 2-D grid"""
        grid = make_grid([-4.0, -4.0], [0.25, 0.25], [32, 32])
        f = optimal_gaussian(ZETA, grid)
        r2 = np.sum(grid.nodes() ** 2, axis=1)
        assert_allclose(f.samples.real, np.exp(-np.pi * r2))

    def test_span_error(self):
        """Test a Gaussian wider than its grid is refused"""
        with pytest.raises(SpanError, match="widen"):
            optimal_gaussian(1.0, grid_from_span(64, -1.0, 1.0))

    def test_zeta_must_be_positive(self, grid):
        """Test zeta <= 0 is refused"""
        with pytest.raises(TfuError, match="zeta"):
            optimal_gaussian(0.0, grid)

    def test_reference_dimension(self, grid):
        """Test x0 must match the grid dimension"""
        with pytest.raises(TfuError, match="x0"):
            optimal_gaussian(ZETA, grid, x0=[0.0, 1.0])


class TestOptimalChirp:
    """Test suite for Gaussian-enveloped chirps"""

    @pytest.mark.parametrize(
        "branch, expected",
        [
            ("j1", lambda dx: dx),
            ("j2", lambda dx: -dx),
            ("j3", lambda dx: np.abs(dx)),
            ("j4", lambda dx: -np.abs(dx)),
        ],
    )
    def test_branch_gradients(self, grid, branch, expected):
        """Test each partition set yields its own phase gradient"""
        spec = ChirpSpec(zeta=ZETA, eps=0.5, x0=[0.25], w0=[1.0], partition=Partition(**{branch: [1]}))
        _, grad = optimal_chirp(spec, grid)
        dx = grid.axis(0) - 0.25
        assert_allclose(grad[:, 0], expected(dx) / 0.5 + 1.0)

    def test_phase_matches_gradient(self, grid, kinked_spec):
        """Test the phase and its gradient describe the same branch"""
        x = np.array([-1.0, -0.5, 0.5, 1.0])
        assert_allclose(chirp_phase(kinked_spec)(x), x * np.abs(x) / 2.0)
        assert_allclose(chirp_phase_gradient(kinked_spec)(x)[:, 0], np.abs(x))

    def test_modulus_is_the_envelope(self, grid, kinked_spec):
        """Test the chirp only changes the phase"""
        f, _ = optimal_chirp(kinked_spec, grid)
        assert_allclose(np.abs(f.samples), np.exp(-np.pi * grid.axis(0) ** 2))

    def test_orthant_offsets(self, kinked_spec):
        """Test a '-' offset applies where eta is negative"""
        spec = kinked_spec.model_copy(update={"phase_offsets": {"-": 0.25}})
        x = np.array([-1.0, 1.0])
        assert_allclose(chirp_phase(spec)(x), [-0.5 + 0.25, 0.5])

    def test_default_partition_is_linear(self):
        """Test an empty partition defaults every axis to j1"""
        spec = ChirpSpec(zeta=ZETA, eps=1.0, x0=[0.0, 0.0], w0=[0.0, 0.0])
        assert spec.partition.j1 == [1, 2]

    def test_overlapping_partition(self, grid):
        """Test an axis in two sets is refused"""
        spec = ChirpSpec(zeta=ZETA, eps=1.0, partition=Partition(j1=[1], j3=[1]))
        with pytest.raises(PartitionError, match="both j1 and j3"):
            optimal_chirp(spec, grid)

    def test_partition_must_cover_grid(self, grid):
        """Test axes beyond the grid dimension are refused"""
        spec = ChirpSpec(zeta=ZETA, eps=1.0, partition=Partition(j1=[2]))
        with pytest.raises(PartitionError, match="cover"):
            optimal_chirp(spec, grid)

    def test_own_phase_kernel(self, grid, kinked_spec):
        """Test f conj(phi_t) is |f| for the chirp's own kernel"""
        f, _ = optimal_chirp(kinked_spec, grid)
        phi = chirp_kernel(kinked_spec).multiplier(grid.nodes())
        assert_allclose(f.samples * np.conj(phi), np.abs(f.samples), atol=1e-14)
        assert chirp_kernel(kinked_spec, sign=-1.0).sign == -1.0


class TestReferenceSignals:
    """Test suite for Hermite functions and random signals"""

    def test_hermite_orthogonality(self, grid):
        """Test distinct Hermite functions are orthogonal"""
        h0, h1, h2 = (hermite_function(n, grid) for n in range(3))
        assert abs(inner_product(h0, h1)) < 1e-12
        assert abs(inner_product(h0, h2)) < 1e-12

    @pytest.mark.parametrize("order", [0, 1, 2])
    def test_hermite_uncertainty_product(self, grid, order):
        """Test the product (2n + 1)^2 / (16 pi^2)"""
        product = AnalysisService().uncertainty_product_fourier(hermite_function(order, grid))
        assert product == pytest.approx((2 * order + 1) ** 2 / (16.0 * np.pi**2), rel=1e-6)

    def test_hermite_order_range(self, grid):
        """Test orders above 4 are refused"""
        with pytest.raises(TfuError, match="0..4"):
            hermite_function(5, grid)

    def test_hermite_is_one_dimensional(self):
        """Test Hermite functions need a 1-D grid"""
        grid = make_grid([-4.0, -4.0], [0.25, 0.25], [32, 32])
        with pytest.raises(UnsupportedDimensionError):
            hermite_function(1, grid)

    def test_random_signal_is_seeded(self, grid):
        """Test the same seed gives the same signal"""
        f = random_decaying_signal(grid, np.random.default_rng(7))
        g = random_decaying_signal(grid, np.random.default_rng(7))
        h = random_decaying_signal(grid, np.random.default_rng(8))
        assert_allclose(f.samples, g.samples)
        assert not np.allclose(f.samples, h.samples)
        assert not f.truncated
