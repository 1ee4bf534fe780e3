# src/utils/io.py

"""
File formats: signal and distribution CSV, the binary distribution payload
with its JSON sidecar, report JSON, chirp specs and tabulated kernels.
"""

import json
import logging
from pathlib import Path
from typing import Dict, Optional, Tuple, Type, TypeVar, Union

import numpy as np
from pydantic import BaseModel, ValidationError as PydanticValidationError
from scipy.interpolate import RegularGridInterpolator

from ..exceptions import SerializationError, UnsupportedDimensionError
from ..models.chirp import ChirpSpec
from ..models.distribution import Distribution
from ..models.grid import DomainTag, Grid, Signal
from ..models.kernel import Kernel
from ..models.reports import SuiteReport

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
ModelT = TypeVar("ModelT", bound=BaseModel)

BINARY_DTYPE = "<c16"
FLOAT_FORMAT = "%.17g"


def _vector(values) -> str:
    return ",".join(FLOAT_FORMAT % v for v in values)


def _grid_tokens(grid: Grid) -> str:
    return f"origin={_vector(grid.origin)} spacing={_vector(grid.spacing)} count={','.join(map(str, grid.count))}"


def _parse_tokens(line: str, prefix: str, data_type: str) -> Dict[str, str]:
    body = line.lstrip("#").strip()
    if not body.startswith(prefix):
        raise SerializationError(f"Expected a '# {prefix}' header line, got {line.strip()!r}", data_type, prefix)
    tokens = {}
    for token in body[len(prefix):].split():
        key, sep, value = token.partition("=")
        if not sep:
            raise SerializationError(f"Malformed header token {token!r}", data_type, prefix)
        tokens[key] = value
    return tokens


def _grid_from_tokens(tokens: Dict[str, str], data_type: str, field: str) -> Grid:
    try:
        return Grid(
            origin=tuple(float(v) for v in tokens["origin"].split(",")),
            spacing=tuple(float(v) for v in tokens["spacing"].split(",")),
            count=tuple(int(v) for v in tokens["count"].split(",")),
        )
    except KeyError as e:
        raise SerializationError(f"Header is missing {e.args[0]!r}", data_type, field)
    except (ValueError, PydanticValidationError) as e:
        raise SerializationError(f"Invalid grid in header: {e}", data_type, field)


def _read_lines(path: PathLike, data_type: str) -> Tuple[list, np.ndarray]:
    """Header lines (starting with '#') and the numeric body of a CSV file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            header = []
            for line in fh:
                if not line.startswith("#"):
                    break
                header.append(line)
        body = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    except OSError as e:
        raise SerializationError(f"Cannot read {data_type} file {path}: {e.strerror}", data_type, "path")
    except ValueError as e:
        raise SerializationError(f"Non-numeric row in {data_type} file {path}: {e}", data_type, "rows")
    return header, body


# -- signals -----------------------------------------------------------


def write_signal_csv(f: Signal, path: PathLike) -> None:
    """One ``index,re,im`` row per node under a grid header."""
    header = f"grid {_grid_tokens(f.grid)} domain={f.domain_tag.value}"
    if f.time_origin is not None:
        header += f" time_origin={_vector(f.time_origin)}"
    rows = np.column_stack([np.arange(f.grid.total), f.samples.real, f.samples.imag])
    np.savetxt(path, rows, fmt=["%d", FLOAT_FORMAT, FLOAT_FORMAT], delimiter=",", header=header, comments="# ")
    logger.debug(f"Wrote signal with {f.grid.total} samples to {path}")


def read_signal_csv(path: PathLike) -> Signal:
    """
    Raises:
        SerializationError: Naming the header field or row that is invalid
    """
    header, body = _read_lines(path, "signal")
    if not header:
        raise SerializationError(f"Signal file {path} has no grid header", "signal", "grid")
    tokens = _parse_tokens(header[0], "grid", "signal")
    grid = _grid_from_tokens(tokens, "signal", "grid")

    try:
        domain = DomainTag(tokens.get("domain", DomainTag.TIME.value))
    except ValueError:
        raise SerializationError(f"Unknown domain {tokens['domain']!r}", "signal", "domain")
    time_origin = None
    if "time_origin" in tokens:
        time_origin = tuple(float(v) for v in tokens["time_origin"].split(","))

    if body.shape != (grid.total, 3):
        raise SerializationError(
            f"Signal file {path} must hold {grid.total} rows of index,re,im; got shape {body.shape}", "signal", "rows"
        )
    if not np.array_equal(body[:, 0], np.arange(grid.total)):
        raise SerializationError("Signal rows must be in node order 0..total-1", "signal", "index")
    try:
        return Signal(grid=grid, samples=body[:, 1] + 1j * body[:, 2], domain_tag=domain, time_origin=time_origin)
    except PydanticValidationError as e:
        raise SerializationError(f"Invalid signal: {e.errors()[0]['msg']}", "signal", "samples")


# -- distributions -----------------------------------------------------


def distribution_format(path: PathLike, fmt: Optional[str] = None) -> str:
    """Explicit format, else inferred from the extension (``.bin`` is binary, anything else CSV)."""
    if fmt is not None:
        if fmt not in ("csv", "bin"):
            raise SerializationError(
                f"Unknown distribution format {fmt!r}; expected csv or bin", "distribution", "format"
            )
        return fmt
    return "bin" if Path(path).suffix == ".bin" else "csv"


def _sidecar(path: PathLike) -> Path:
    return Path(f"{path}.json")


def write_distribution(d: Distribution, path: PathLike, fmt: Optional[str] = None) -> None:
    if distribution_format(path, fmt) == "bin":
        header = {
            "time_grid": d.time_grid.model_dump(mode="json"),
            "freq_grid": d.freq_grid.model_dump(mode="json"),
            "kernel_tag": d.kernel_tag,
            "dtype": BINARY_DTYPE,
            "shape": list(d.values.shape),
        }
        d.values.astype(BINARY_DTYPE).tofile(path)
        _sidecar(path).write_text(json.dumps(header, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    else:
        header = "\n".join(
            [
                f"time_grid {_grid_tokens(d.time_grid)}",
                f"freq_grid {_grid_tokens(d.freq_grid)}",
                f"kernel={d.kernel_tag}",
            ]
        )
        ix, iw = np.indices(d.values.shape)
        rows = np.column_stack([ix.ravel(), iw.ravel(), d.values.real.ravel(), d.values.imag.ravel()])
        np.savetxt(
            path, rows, fmt=["%d", "%d", FLOAT_FORMAT, FLOAT_FORMAT], delimiter=",", header=header, comments="# "
        )
    logger.debug(f"Wrote {d.kernel_tag} distribution {d.values.shape} to {path}")


def _read_distribution_bin(path: PathLike) -> Distribution:
    try:
        header = json.loads(_sidecar(path).read_text(encoding="utf-8"))
        values = np.fromfile(path, dtype=header.get("dtype", BINARY_DTYPE))
    except OSError as e:
        raise SerializationError(f"Cannot read distribution {path}: {e.strerror}", "distribution", "path")
    except json.JSONDecodeError as e:
        raise SerializationError(f"Invalid JSON sidecar for {path}: {e}", "distribution", "header")

    try:
        time_grid = Grid.model_validate(header["time_grid"])
        freq_grid = Grid.model_validate(header["freq_grid"])
        values = values.reshape(time_grid.total, freq_grid.total)
        return Distribution(time_grid=time_grid, freq_grid=freq_grid, values=values, kernel_tag=header["kernel_tag"])
    except KeyError as e:
        raise SerializationError(f"Distribution sidecar is missing {e.args[0]!r}", "distribution", e.args[0])
    except ValueError as e:
        raise SerializationError(f"Invalid distribution payload in {path}: {e}", "distribution", "values")


def _read_distribution_csv(path: PathLike) -> Distribution:
    header, body = _read_lines(path, "distribution")
    if len(header) < 3:
        raise SerializationError(f"Distribution file {path} needs three header lines", "distribution", "header")
    time_grid = _grid_from_tokens(_parse_tokens(header[0], "time_grid", "distribution"), "distribution", "time_grid")
    freq_grid = _grid_from_tokens(_parse_tokens(header[1], "freq_grid", "distribution"), "distribution", "freq_grid")
    kernel = header[2].lstrip("#").strip()
    if not kernel.startswith("kernel="):
        raise SerializationError("Third header line must be '# kernel=<tag>'", "distribution", "kernel")

    shape = (time_grid.total, freq_grid.total)
    if body.shape != (shape[0] * shape[1], 4):
        raise SerializationError(
            f"Distribution file {path} must hold {shape[0] * shape[1]} rows of ix,iw,re,im", "distribution", "rows"
        )
    values = np.zeros(shape, dtype=np.complex128)
    values[body[:, 0].astype(int), body[:, 1].astype(int)] = body[:, 2] + 1j * body[:, 3]
    try:
        return Distribution(
            time_grid=time_grid, freq_grid=freq_grid, values=values, kernel_tag=kernel[len("kernel="):]
        )
    except PydanticValidationError as e:
        raise SerializationError(f"Invalid distribution: {e.errors()[0]['msg']}", "distribution", "values")


def read_distribution(path: PathLike, fmt: Optional[str] = None) -> Distribution:
    if distribution_format(path, fmt) == "bin":
        return _read_distribution_bin(path)
    return _read_distribution_csv(path)


# -- JSON models -------------------------------------------------------


def write_report(report: BaseModel, path: PathLike) -> None:
    """Sorted keys, two-space indent and no run-variant fields, so reruns are byte-identical."""
    try:
        text = json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=2, allow_nan=False)
        Path(path).write_text(text + "\n", encoding="utf-8")
    except ValueError as e:
        raise SerializationError(f"Report holds a non-finite number: {e}", "report", "values")
    except OSError as e:
        raise SerializationError(f"Cannot write report {path}: {e.strerror}", "report", "path")
    logger.info(f"Report written to {path}")


def _load_model(path: PathLike, model: Type[ModelT], data_type: str) -> ModelT:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise SerializationError(f"Cannot read {data_type} file {path}: {e.strerror}", data_type, "path")
    try:
        return model.model_validate_json(text)
    except PydanticValidationError as e:
        error = e.errors()[0]
        field = ".".join(str(part) for part in error["loc"]) or data_type
        raise SerializationError(f"Invalid {data_type} file {path}: {field}: {error['msg']}", data_type, field)


def read_report(path: PathLike) -> SuiteReport:
    return _load_model(path, SuiteReport, "report")


def load_chirp_spec(path: PathLike) -> ChirpSpec:
    return _load_model(path, ChirpSpec, "chirp spec")


# -- tabulated kernels -------------------------------------------------


def load_kernel_table(path: PathLike) -> Kernel:
    """
    Tabulated phi(v, y) from ``v,y,re,im`` rows on a rectangular lattice,
    interpolated linearly in real and imaginary parts. Points outside the
    tabulated rectangle evaluate to 0.
    """
    try:
        body = np.loadtxt(path, delimiter=",", comments="#", ndmin=2, skiprows=_header_rows(path))
    except OSError as e:
        raise SerializationError(f"Cannot read kernel table {path}: {e.strerror}", "kernel table", "path")
    except ValueError as e:
        raise SerializationError(f"Non-numeric row in kernel table {path}: {e}", "kernel table", "rows")
    if body.shape[1] != 4:
        raise SerializationError("Kernel table rows must be v,y,re,im", "kernel table", "columns")

    v_axis, v_index = np.unique(body[:, 0], return_inverse=True)
    y_axis, y_index = np.unique(body[:, 1], return_inverse=True)
    if body.shape[0] != v_axis.size * y_axis.size or v_axis.size < 2 or y_axis.size < 2:
        raise SerializationError(
            f"Kernel table must cover a full rectangular lattice, got {body.shape[0]} rows for "
            f"{v_axis.size} x {y_axis.size} nodes",
            "kernel table",
            "rows",
        )
    table = np.zeros((v_axis.size, y_axis.size), dtype=np.complex128)
    table[v_index.ravel(), y_index.ravel()] = body[:, 2] + 1j * body[:, 3]

    real = RegularGridInterpolator((v_axis, y_axis), table.real, bounds_error=False, fill_value=0.0)
    imag = RegularGridInterpolator((v_axis, y_axis), table.imag, bounds_error=False, fill_value=0.0)

    def joint(v: np.ndarray, y: np.ndarray) -> np.ndarray:
        if np.shape(v)[-1] != 1 or np.shape(y)[-1] != 1:
            raise UnsupportedDimensionError("tabulated kernel", max(np.shape(v)[-1], np.shape(y)[-1]))
        vv, yy = np.broadcast_arrays(np.asarray(v)[..., 0], np.asarray(y)[..., 0])
        points = np.stack([vv.ravel(), yy.ravel()], axis=-1)
        return (real(points) + 1j * imag(points)).reshape(vv.shape)

    logger.info(f"Loaded kernel table {path} with {v_axis.size} x {y_axis.size} nodes")
    return Kernel.tabulated(joint, f"table:{path}")


def _header_rows(path: PathLike) -> int:
    """1 when the first line is a column header such as ``v,y,re,im``."""
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline().strip()
    try:
        [float(part) for part in first.split(",")]
    except ValueError:
        return 0 if first.startswith("#") else 1
    return 0
