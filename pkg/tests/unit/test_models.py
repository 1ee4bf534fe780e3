# tests/unit/test_models.py

import numpy as np
import pytest
from pydantic import ValidationError

from src.models.chirp import ChirpSpec, Partition
from src.models.grid import Grid, Signal
from src.models.kernel import Kernel, KernelFlags, KernelVariant
from src.models.reports import BoundReport, CheckResult, SuiteReport, TheoremCase, Verdict
from src.models.run_config import RunConfig, Subcommand
from src.schemas import load_report_schema

sample_bound = {
    "case": "T2",
    "b_real": 0.00633,
    "b_cov_f": 0.01266,
    "b_abscov_f": 0.01266,
    "b_cov_fphi": 0.01266,
    "b_abscov_fphi": 0.01266,
    "theorem_bound_cov": 0.003166,
    "theorem_bound_abscov": 0.003166,
    "measured_product_C": 0.003166,
    "slack": 0.0,
    "verdict": "equality",
    "tolerance": 3.2e-6,
}

# --- Grid and Signal ---


def test_grid_dimension_mismatch():
    with pytest.raises(ValidationError, match="one dimension"):
        Grid(origin=(0.0, 0.0), spacing=(1.0,), count=(4,))


def test_grid_is_frozen():
    grid = Grid(origin=(0.0,), spacing=(1.0,), count=(4,))
    with pytest.raises(ValidationError):
        grid.count = (8,)


def test_signal_sample_count():
    grid = Grid(origin=(0.0,), spacing=(1.0,), count=(4,))
    with pytest.raises(ValidationError, match="4 nodes"):
        Signal(grid=grid, samples=np.ones(3))


def test_signal_rejects_non_finite():
    grid = Grid(origin=(0.0,), spacing=(1.0,), count=(2,))
    with pytest.raises(ValidationError, match="finite"):
        Signal(grid=grid, samples=[1.0, np.inf])


def test_signal_samples_are_read_only():
    grid = Grid(origin=(0.0,), spacing=(1.0,), count=(2,))
    f = Signal(grid=grid, samples=[1.0, 2.0])
    assert f.samples.dtype == np.complex128
    with pytest.raises(ValueError):
        f.samples[0] = 0.0


def test_signal_is_real_tolerance():
    grid = Grid(origin=(0.0,), spacing=(1.0,), count=(2,))
    assert Signal(grid=grid, samples=[1.0, 1.0 + 1e-12j]).is_real()
    assert not Signal(grid=grid, samples=[1.0, 1.0 + 1e-3j]).is_real()


# --- Kernels ---


def test_time_multiplier_requires_phase():
    with pytest.raises(ValidationError, match="phase function"):
        Kernel(variant=KernelVariant.TIME_MULTIPLIER, tag="timemul:none")


def test_kernel_sign_must_be_unit():
    with pytest.raises(ValidationError, match="sign"):
        Kernel.time_multiplier(lambda t: np.zeros(t.shape[0]), "timemul:half", sign=0.5)


def test_unit_kernel_gradient_is_zero():
    assert np.all(Kernel.unit().gradient(np.linspace(-1, 1, 5)) == 0.0)


def test_time_multiplier_flag_implies_unit_modulus():
    with pytest.raises(ValidationError, match="unit_modulus"):
        KernelFlags(unit_modulus=False, time_multiplier=True, marginal=False, energy_conserving=False)


# --- Chirp specs ---


def test_partition_axes_start_at_one():
    with pytest.raises(ValidationError, match="numbered from 1"):
        Partition(j1=[0])


def test_chirp_spec_vector_lengths():
    with pytest.raises(ValidationError, match="same length"):
        ChirpSpec(zeta=1.0, eps=1.0, x0=[0.0, 0.0], w0=[0.0])


@pytest.mark.parametrize("key", ["", "+x", "+-"])
def test_chirp_spec_orthant_keys(key):
    with pytest.raises(ValidationError):
        ChirpSpec(zeta=1.0, eps=1.0, phase_offsets={key: 0.5})


def test_chirp_spec_positive_parameters():
    with pytest.raises(ValidationError):
        ChirpSpec(zeta=0.0, eps=1.0)


# --- Reports ---


def test_bound_report_valid():
    report = BoundReport(**sample_bound)
    assert report.case == TheoremCase.T2
    assert report.verdict == Verdict.EQUALITY


def test_bound_report_verdict_must_match_slack():
    data = {**sample_bound, "slack": -1e-3, "verdict": "pass"}
    with pytest.raises(ValidationError, match="contradicts"):
        BoundReport(**data)


def test_bound_report_ordering():
    data = {**sample_bound, "theorem_bound_abscov": 0.001, "measured_product_C": 0.001}
    with pytest.raises(ValidationError, match="below theorem_bound_cov"):
        BoundReport(**data)


def test_suite_report_failed_checks():
    report = SuiteReport(
        suite="lemmas",
        seed=0,
        grid="256:-8:8",
        tolerance=1e-3,
        passed=False,
        checks=[
            CheckResult(name="a", identity="x", tolerance=1e-3, passed=True),
            CheckResult(name="b", identity="x", tolerance=1e-3, passed=False),
        ],
    )
    assert [check.name for check in report.failed_checks] == ["b"]


def test_report_schema_matches_models():
    schema = load_report_schema()
    assert set(schema["required"]) == set(SuiteReport.model_fields)
    assert set(schema["$defs"]["check"]["required"]) == set(CheckResult.model_fields)
    assert set(schema["$defs"]["bound_report"]["required"]) == set(BoundReport.model_fields)
    assert schema["$defs"]["bound_report"]["properties"]["verdict"]["enum"] == [v.value for v in Verdict]


# --- Run configuration ---


def test_run_config_verify_defaults_to_all():
    config = RunConfig(subcommand="verify")
    assert config.subcommand == Subcommand.VERIFY
    assert config.verify_suite == "all"
    assert config.theorem is None


@pytest.mark.parametrize(
    "data, message",
    [
        ({"subcommand": "generate"}, "requires --out"),
        ({"subcommand": "generate", "out": "x.csv", "signal": "y.csv"}, "--signal is an input"),
        ({"subcommand": "compute"}, "requires --out"),
        ({"subcommand": "report"}, "at least one report"),
        ({"subcommand": "verify", "gaussian": True, "random": True}, "at most one"),
        ({"subcommand": "verify", "grid": "8:1:0"}, "exceed"),
        ({"subcommand": "verify", "partition": "j5"}, "pattern"),
        ({"subcommand": "verify", "theorem": "T5"}, "T1"),
    ],
)
def test_run_config_validation(data, message):
    with pytest.raises(ValidationError, match=message):
        RunConfig(**data)
