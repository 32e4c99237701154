"""Python interface to the approximation-aware workflow engine."""

try:
    from ._awf import (
        WorkflowParseError,
        WorkflowValidationError,
        __version__,
        dependency_graph,
        enumerate_compositions,
        extract_block,
        factor,
        interface_hash,
        interface_hashes,
        similarity,
        validate_workflow,
        wl_hash,
    )
except ImportError:  # extension built outside the package (plain CMake build)
    from _awf import (
        WorkflowParseError,
        WorkflowValidationError,
        __version__,
        dependency_graph,
        enumerate_compositions,
        extract_block,
        factor,
        interface_hash,
        interface_hashes,
        similarity,
        validate_workflow,
        wl_hash,
    )

__all__ = [
    "WorkflowParseError",
    "WorkflowValidationError",
    "__version__",
    "dependency_graph",
    "enumerate_compositions",
    "extract_block",
    "factor",
    "interface_hash",
    "interface_hashes",
    "similarity",
    "validate_workflow",
    "wl_hash",
]
