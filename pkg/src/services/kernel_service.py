# src/services/kernel_service.py

"""Kernel catalog, classification predicates and the f * conj(phi_t) product."""

import logging
import re
from typing import Callable, Dict, List, Optional

import numpy as np

from ..exceptions import KernelSpecError, NoJointFormError, NoTimeFormError, TfuError
from ..models.grid import DomainTag, Grid, Signal
from ..models.kernel import Kernel, KernelFlags, KernelVariant, as_nodes
from ..utils.config import settings

logger = logging.getLogger(__name__)

# Probe pairs are evaluated on at most this many nodes per side
MAX_PROBE_NODES = 256

_SPEC_PATTERN = re.compile(r"^(?P<sign>-?)(?P<name>[a-z_]+)(?:\((?P<params>[^()]*)\))?$")


def _krd_joint(v: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.exp(1j * np.pi * np.sum(v * y, axis=-1))


def _page_joint(v: np.ndarray, y: np.ndarray) -> np.ndarray:
    # The l1 lag shift acts on every time axis at once
    return np.exp(2j * np.pi * np.sum(np.abs(y), axis=-1) * np.sum(v, axis=-1))


def joint_function(k: Kernel) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    """Vectorized phi(v, y) over arrays shaped (..., N)."""
    if k.variant == KernelVariant.UNIT:
        return lambda v, y: np.ones(np.broadcast_shapes(v.shape[:-1], y.shape[:-1]), dtype=np.complex128)
    if k.variant == KernelVariant.KIRKWOOD_RIHACZEK:
        return _krd_joint
    if k.variant == KernelVariant.PAGE:
        return _page_joint
    if k.variant == KernelVariant.TABULATED_2D:
        return k.joint
    raise NoJointFormError(
        f"Kernel {k.tag} acts as a multiplier on time and has no joint phi(v, y) form", "variant"
    )


def kernel_value(k: Kernel, v, y) -> complex:
    """phi(v, y) for one pair of vectors (scalars allowed for N = 1)."""
    v = np.atleast_1d(np.asarray(v, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if v.shape != y.shape:
        raise TfuError(f"v and y must have the same dimension, got {v.size} and {y.size}", "dim")
    return complex(np.asarray(joint_function(k)(v, y)).reshape(()))


def _probe_nodes(probe_grid: Grid) -> np.ndarray:
    nodes = probe_grid.nodes()
    stride = max(1, int(np.ceil(nodes.shape[0] / MAX_PROBE_NODES)))
    nodes = nodes[::stride]
    return np.vstack([nodes, np.zeros((1, probe_grid.dim))])


def classify(k: Kernel, probe_grid: Grid) -> KernelFlags:
    """
    Establish kernel flags by closed-form rule where one exists, otherwise by
    evaluation on the probe grid with the configured unit-modulus tolerance.
    """
    tol = settings.unit_modulus_tol

    if k.variant == KernelVariant.UNIT:
        return KernelFlags(unit_modulus=True, time_multiplier=True, marginal=True, energy_conserving=True)

    nodes = _probe_nodes(probe_grid)

    if k.variant == KernelVariant.TIME_MULTIPLIER:
        modulus = np.abs(k.multiplier(nodes))
        unit = bool(np.all(np.abs(modulus - 1.0) <= tol))
        if not unit:
            logger.warning(f"Time multiplier {k.tag} departs from unit modulus by {np.max(np.abs(modulus - 1)):.3e}")
        # phi(0, y), phi(v, 0) and phi(0, 0) are undefined for a multiplier on time
        return KernelFlags(unit_modulus=unit, time_multiplier=unit, marginal=False, energy_conserving=False)

    phi = joint_function(k)
    zeros = np.zeros_like(nodes)
    pairs = phi(nodes[:, None, :], nodes[None, :, :])
    unit = bool(np.all(np.abs(np.abs(pairs) - 1.0) <= tol))
    marginal = bool(np.all(np.abs(phi(zeros, nodes) - 1.0) <= tol) and np.all(np.abs(phi(nodes, zeros) - 1.0) <= tol))
    origin = np.zeros((1, probe_grid.dim))
    energy = bool(np.abs(phi(origin, origin)[0] - 1.0) <= tol)

    flags = KernelFlags(unit_modulus=unit, time_multiplier=False, marginal=marginal, energy_conserving=energy)
    logger.debug(f"Classified kernel {k.tag}: {flags.model_dump()}")
    return flags


def conjugate_multiplier(k: Kernel, f: Signal) -> Signal:
    """f(t) * conj(phi_t(t)) on the same grid."""
    if not k.has_time_form:
        raise NoTimeFormError(f"Kernel {k.tag} has no time-multiplier form", "variant")
    if f.domain_tag != DomainTag.TIME:
        raise TfuError("conjugate_multiplier expects a time-domain signal", "domain_tag")
    if k.variant == KernelVariant.UNIT:
        return f
    return f.with_samples(f.samples * np.conj(k.multiplier(f.grid.nodes())))


# Built-in time multipliers: name -> (phase in cycles, gradient) factories


def _one(params: List[float]) -> Kernel:
    return Kernel.time_multiplier(lambda t: np.zeros(t.shape[0]), "timemul:one", lambda t: np.zeros_like(t))


def _minus_one(params: List[float]) -> Kernel:
    return Kernel.time_multiplier(
        lambda t: np.zeros(t.shape[0]), "timemul:minus_one", lambda t: np.zeros_like(t), sign=-1.0
    )


def _chirp(params: List[float]) -> Kernel:
    d = params[0]
    return Kernel.time_multiplier(
        lambda t: 0.5 * d * np.sum(t**2, axis=-1), f"timemul:chirp({d:g})", lambda t: d * t
    )


def _cubic(params: List[float]) -> Kernel:
    a = params[0]
    return Kernel.time_multiplier(
        lambda t: a * np.sum(np.abs(t) ** 3, axis=-1) / 3.0, f"timemul:cubic({a:g})", lambda t: a * t * np.abs(t)
    )


def _linear(params: List[float]) -> Kernel:
    w = params[0]
    return Kernel.time_multiplier(
        lambda t: w * np.sum(t, axis=-1), f"timemul:linear({w:g})", lambda t: np.full_like(t, w)
    )


BUILTIN_MULTIPLIERS: Dict[str, tuple] = {
    "one": (_one, 0),
    "minus_one": (_minus_one, 0),
    "chirp": (_chirp, 1),
    "cubic": (_cubic, 1),
    "linear": (_linear, 1),
}


def _negate(k: Kernel) -> Kernel:
    return Kernel.time_multiplier(k.phase, "timemul:-" + k.tag.split(":", 1)[1], k.phase_gradient, sign=-k.sign)


def phase_kernel(
    phase: Callable[[np.ndarray], np.ndarray],
    phase_gradient: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    sign: float = 1.0,
    tag: str = "timemul:phase_of_signal",
) -> Kernel:
    """Time multiplier sign * exp(2 pi i phase(t)) built from a signal's own phase."""
    return Kernel.time_multiplier(lambda t: phase(as_nodes(t)), tag, phase_gradient, sign=sign)


def parse_kernel_spec(spec: str) -> Kernel:
    """
    Build a kernel from ``unit | krd | page | timemul:<name>(<params>) | table:<csv-path>``.

    Raises:
        KernelSpecError: For unknown names or malformed parameters
    """
    text = spec.strip()
    if text == "unit":
        return Kernel.unit()
    if text == "krd":
        return Kernel.kirkwood_rihaczek()
    if text == "page":
        return Kernel.page()
    if text.startswith("table:"):
        from ..utils.io import load_kernel_table

        return load_kernel_table(text[len("table:"):])
    if text.startswith("timemul:"):
        match = _SPEC_PATTERN.match(text[len("timemul:"):].replace(" ", ""))
        if not match:
            raise KernelSpecError(f"Malformed time-multiplier spec {spec!r}", spec)
        name = match.group("name")
        if name not in BUILTIN_MULTIPLIERS:
            known = ", ".join(sorted(BUILTIN_MULTIPLIERS))
            raise KernelSpecError(f"Unknown time multiplier {name!r}; known: {known}", spec)
        factory, arity = BUILTIN_MULTIPLIERS[name]
        raw = match.group("params")
        try:
            params = [float(p) for p in raw.split(",")] if raw else []
        except ValueError:
            raise KernelSpecError(f"Time-multiplier parameters must be numbers, got {raw!r}", spec)
        if len(params) != arity:
            raise KernelSpecError(f"Time multiplier {name} takes {arity} parameter(s), got {len(params)}", spec)
        kernel = factory(params)
        return _negate(kernel) if match.group("sign") else kernel
    raise KernelSpecError(f"Unknown kernel {spec!r}; expected unit, krd, page, timemul:... or table:...", spec)
