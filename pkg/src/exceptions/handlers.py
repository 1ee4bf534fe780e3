# src/exceptions/handlers.py

"""Map exceptions to CLI exit codes and structured diagnostics."""

import logging
from typing import Any, Callable, Dict, Optional

from pydantic import ValidationError as PydanticValidationError

from . import (
    CasePreconditionError,
    KernelSpecError,
    SerializationError,
    SpectralTruncationError,
    TfuError,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def create_error_response(
    exit_code: int, error_type: str, message: str, details: Optional[Dict[str, Any]] = None
) -> Dict[str, Any]:
    """Create a standardized error response."""
    content: Dict[str, Any] = {"error": {"type": error_type, "message": message}, "exit_code": exit_code}

    if details:
        content["error"]["details"] = details

    return content


def kernel_spec_error_handler(exc: KernelSpecError) -> Dict[str, Any]:
    """Handle unknown or malformed kernel specs."""
    logger.warning(f"Kernel spec error: {exc.message}")

    details = {"field": exc.field}
    if exc.spec is not None:
        details["spec"] = exc.spec

    return create_error_response(EXIT_USAGE, "kernel_spec_error", exc.message, details)


def serialization_error_handler(exc: SerializationError) -> Dict[str, Any]:
    """Handle unreadable or malformed input and output files."""
    logger.error(f"Serialization error: {exc.message}")

    details = {}
    if exc.data_type:
        details["data_type"] = exc.data_type
    if exc.field:
        details["field"] = exc.field

    return create_error_response(EXIT_USAGE, "serialization_error", exc.message, details or None)


def case_precondition_error_handler(exc: CasePreconditionError) -> Dict[str, Any]:
    """Handle a theorem case that does not match its (signal, kernel) pair."""
    logger.warning(f"Case precondition failed: {exc.message}")

    return create_error_response(
        EXIT_CHECK_FAILED,
        "case_precondition_error",
        exc.message,
        {"case": exc.case, "condition": exc.condition},
    )


def spectral_truncation_error_handler(exc: SpectralTruncationError) -> Dict[str, Any]:
    """Handle spectra that are cut off by the frequency grid."""
    logger.warning(f"Spectral truncation: {exc.message}")

    return create_error_response(
        EXIT_CHECK_FAILED, "spectral_truncation", exc.message, {"edge_ratio": exc.edge_ratio}
    )


def tfu_error_handler(exc: TfuError) -> Dict[str, Any]:
    """Handle any other laboratory error as a usage problem."""
    logger.warning(f"{type(exc).__name__}: {exc.message}")

    details = {"field": exc.field} if exc.field else None
    return create_error_response(EXIT_USAGE, "input_error", exc.message, details)


def pydantic_validation_error_handler(exc: PydanticValidationError) -> Dict[str, Any]:
    """Handle Pydantic validation errors."""
    logger.warning(f"Pydantic validation error: {exc}")

    errors = []
    for error in exc.errors():
        errors.append(
            {"field": ".".join(str(loc) for loc in error["loc"]), "message": error["msg"], "type": error["type"]}
        )

    return create_error_response(
        EXIT_USAGE, "validation_error", "Input validation failed", {"validation_errors": errors}
    )


def os_error_handler(exc: OSError) -> Dict[str, Any]:
    """Handle unreadable or unwritable paths."""
    logger.error(f"I/O error: {exc}")

    details = {"path": exc.filename} if getattr(exc, "filename", None) else None
    return create_error_response(EXIT_USAGE, "io_error", str(exc), details)


def generic_exception_handler(exc: Exception) -> Dict[str, Any]:
    """Handle unexpected exceptions."""
    logger.error(f"Unexpected error: {exc}", exc_info=exc)

    return create_error_response(EXIT_USAGE, "internal_error", f"An unexpected error occurred: {exc}")


# Most specific first; handle_exception takes the first isinstance match
EXCEPTION_HANDLERS: Dict[type, Callable[[Any], Dict[str, Any]]] = {
    KernelSpecError: kernel_spec_error_handler,
    SerializationError: serialization_error_handler,
    CasePreconditionError: case_precondition_error_handler,
    SpectralTruncationError: spectral_truncation_error_handler,
    TfuError: tfu_error_handler,
    PydanticValidationError: pydantic_validation_error_handler,
    OSError: os_error_handler,
    Exception: generic_exception_handler,
}


def handle_exception(exc: Exception) -> Dict[str, Any]:
    """Dispatch an exception to its handler and return the diagnostic."""
    for exc_type, handler in EXCEPTION_HANDLERS.items():
        if isinstance(exc, exc_type):
            return handler(exc)
    return generic_exception_handler(exc)
