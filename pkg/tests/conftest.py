"""
Pytest configuration and fixtures for testing
"""
import numpy as np
import pytest

from src.models.chirp import ChirpSpec, Partition
from src.services.analysis_service import AnalysisService
from src.services.engine_service import DistributionEngine
from src.services.grid_service import grid_from_span
from src.services.optimal_signal_service import gaussian_chirp, optimal_gaussian
from src.utils.cache import plan_cache
from src.utils.config import Settings

GAUSSIAN_ZETA = 1.0 / (2.0 * np.pi)


@pytest.fixture
def settings():
    """Settings built from defaults, isolated from any TFU_ environment."""
    return Settings(_env_file=None)


@pytest.fixture
def grid():
    """256 nodes on [-8, 8); spacing 1/16 and spectral reach +-8."""
    return grid_from_span(256, -8.0, 8.0)


@pytest.fixture
def small_grid():
    """48 nodes on [-3, 3), inside the tabulated-kernel limit."""
    return grid_from_span(48, -3.0, 3.0)


@pytest.fixture
def engine(settings):
    return DistributionEngine(settings)


@pytest.fixture
def analysis(engine, settings):
    return AnalysisService(engine, settings)


@pytest.fixture
def gaussian(grid):
    """exp(-pi x^2), the optimal Gaussian at zeta = 1/(2 pi)."""
    return optimal_gaussian(GAUSSIAN_ZETA, grid)


@pytest.fixture
def chirp(grid):
    """exp(-pi x^2) exp(pi i x^2) with its phase gradient x."""
    return gaussian_chirp(1.0, grid)


@pytest.fixture
def kinked_spec():
    return ChirpSpec(zeta=GAUSSIAN_ZETA, eps=1.0, partition=Partition(j3=[1]))


@pytest.fixture(autouse=True)
def clear_plan_cache():
    """Start every test with an empty plan cache."""
    plan_cache.clear()
    yield
    plan_cache.clear()
