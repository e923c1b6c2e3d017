"""Backend selection for the inner loops.

The compiled extension is used when it was built; otherwise the numpy
reference in ``_kernels_py`` takes over. :func:`use_backend` switches
explicitly (tests and the benchmark run both).
"""

import numpy as np

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

HAVE_COMPILED = _compiled is not None
_active = _compiled if HAVE_COMPILED else _kernels_py


def backend() -> str:
    return "compiled" if _active is _compiled and HAVE_COMPILED else "python"


def use_backend(name: str):
    """Select ``"compiled"`` or ``"python"``; returns the previous name."""
    global _active
    prev = backend()
    if name == "compiled":
        if not HAVE_COMPILED:
            raise RuntimeError("compiled kernels are not available in this build")
        _active = _compiled
    elif name == "python":
        _active = _kernels_py
    else:
        raise ValueError(f"unknown backend {name!r}")
    return prev


def component_labels(mask) -> np.ndarray:
    mask = np.ascontiguousarray(mask, dtype=np.uint8)
    return np.asarray(_active.component_labels(mask))


def first_pure_coherent(rho, assign, coeff, rel_eps, abs_floor) -> int:
    return int(_active.first_pure_coherent(
        np.ascontiguousarray(rho, dtype=np.complex128),
        np.ascontiguousarray(assign, dtype=np.int8),
        np.ascontiguousarray(coeff, dtype=np.complex128),
        float(rel_eps), float(abs_floor),
    ))
