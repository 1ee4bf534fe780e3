# tests/unit/test_grid_service.py

import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings, strategies as st
from numpy.testing import assert_allclose

from src.exceptions import IncompatibleGridsError, InvalidGridError, SamplingError
from src.models.grid import DomainTag, Signal
from src.services.grid_service import (
    boundary_ratio,
    grid_from_span,
    inner_product,
    is_truncated,
    l2_norm,
    make_grid,
    sample,
)


class TestMakeGrid:
    """Test suite for grid construction"""

    def test_grid_from_span(self):
        """Test nodes tile [lo, hi) with spacing (hi - lo) / M"""
        grid = grid_from_span(4, 0.0, 1.0)
        assert grid.spacing == (0.25,)
        assert_allclose(grid.axis(0), [0.0, 0.25, 0.5, 0.75])

    def test_two_dimensional_nodes_are_row_major(self):
        """Test nodes() enumerates the last axis fastest"""
        grid = make_grid([0.0, 10.0], [1.0, 2.0], [2, 3])
        assert grid.total == 6
        assert_allclose(grid.nodes()[:3], [[0.0, 10.0], [0.0, 12.0], [0.0, 14.0]])
        assert grid.node(4) == (1.0, 12.0)

    @pytest.mark.parametrize("spacing", [0.0, -0.5, float("inf")])
    def test_rejects_non_positive_spacing(self, spacing):
        """Test spacing must be strictly positive and finite"""
        with pytest.raises(InvalidGridError, match="spacing"):
            make_grid([0.0], [spacing], [8])

    def test_rejects_single_node(self):
        """Test every axis needs two nodes"""
        with pytest.raises(InvalidGridError, match="count"):
            make_grid([0.0], [0.1], [1])

    def test_rejects_reversed_span(self):
        """Test the span must be increasing"""
        with pytest.raises(InvalidGridError, match="increasing"):
            grid_from_span(8, 1.0, -1.0)

    @hyp_settings(max_examples=30, deadline=None)
    @given(
        count=st.integers(min_value=2, max_value=512),
        lo=st.floats(min_value=-50, max_value=50),
        width=st.floats(min_value=0.1, max_value=100),
    )
    def test_span_properties(self, count, lo, width):
        """Test the span grid has the requested count and ends one spacing short of hi"""
        grid = grid_from_span(count, lo, lo + width)
        assert grid.count == (count,)
        assert grid.axis(0)[-1] + grid.spacing[0] == pytest.approx(lo + width, rel=1e-9, abs=1e-9)


class TestSample:
    """Test suite for sampling closed-form functions"""

    def test_sample_gaussian(self, grid):
        """Test samples equal the function at every node"""
        f = sample(lambda x: np.exp(-np.pi * x**2), grid)
        assert f.domain_tag == DomainTag.TIME
        assert not f.truncated
        assert_allclose(f.samples.real, np.exp(-np.pi * grid.axis(0) ** 2))

    def test_non_finite_value_names_node(self, grid):
        """Test a pole on a node raises SamplingError carrying the node"""
        with pytest.raises(SamplingError) as exc_info:
            sample(lambda x: 1.0 / x, grid)
        assert exc_info.value.node == (0.0,)

    def test_non_decaying_signal_is_flagged(self, grid):
        """Test a constant signal carries the truncation flag"""
        f = sample(lambda x: np.ones_like(x), grid)
        assert f.truncated
        assert boundary_ratio(grid, f.samples) == 1.0

    def test_is_truncated_threshold(self, grid):
        """Test the threshold argument overrides the configured decay threshold"""
        values = np.exp(-(grid.axis(0) ** 2) / 8.0)
        assert is_truncated(grid, values)
        assert not is_truncated(grid, values, threshold=0.5)


class TestInnerProduct:
    """Test suite for quadrature inner products"""

    def test_norm_stable_under_refinement(self):
        """Test the norm of exp(-pi x^2) does not move when the node count doubles"""
        coarse = l2_norm(sample(lambda x: np.exp(-np.pi * x**2), grid_from_span(128, -8.0, 8.0)))
        fine = l2_norm(sample(lambda x: np.exp(-np.pi * x**2), grid_from_span(256, -8.0, 8.0)))
        assert abs(fine - coarse) < 1e-8

    def test_gaussian_norm(self, gaussian):
        """Test ||exp(-pi x^2)||^2 = 1 / sqrt(2)"""
        assert l2_norm(gaussian) ** 2 == pytest.approx(1.0 / np.sqrt(2.0), rel=1e-12)

    def test_conjugate_linear_in_second_argument(self, gaussian, chirp):
        """Test <f, g> = conj(<g, f>)"""
        f, _ = chirp
        assert inner_product(f, gaussian) == pytest.approx(np.conj(inner_product(gaussian, f)), abs=1e-14)

    def test_grid_mismatch(self, gaussian):
        """Test operands on different grids are refused"""
        other = sample(lambda x: np.exp(-np.pi * x**2), grid_from_span(128, -8.0, 8.0))
        with pytest.raises(IncompatibleGridsError):
            inner_product(gaussian, other)

    @hyp_settings(max_examples=25, deadline=None)
    @given(
        seed=st.integers(min_value=0, max_value=2**32 - 1),
        re=st.floats(min_value=-3, max_value=3),
        im=st.floats(min_value=-3, max_value=3),
    )
    def test_sesquilinear(self, seed, re, im):
        """Test linearity in the first argument and conjugate linearity in the second"""
        grid = grid_from_span(32, -2.0, 2.0)
        rng = np.random.default_rng(seed)
        f, g, h = (
            Signal(grid=grid, samples=rng.standard_normal(32) + 1j * rng.standard_normal(32)) for _ in range(3)
        )
        a = complex(re, im)
        combined = Signal(grid=grid, samples=a * f.samples + g.samples)
        expected = a * inner_product(f, h) + inner_product(g, h)
        assert inner_product(combined, h) == pytest.approx(expected, rel=1e-10, abs=1e-10)
        assert inner_product(h, combined) == pytest.approx(np.conj(expected), rel=1e-10, abs=1e-10)
