"""Kraus operators, incoherence predicates and post-selected application."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import DimensionMismatch, SubnormalizationViolated, ValidationError
from .linalg_core import DEFAULT_TOL, TolerancePolicy, as_matrix, operator_norm
from .states import DensityMatrix, _mat, is_incoherent_state, validate_density

__all__ = [
    "StochasticChannel",
    "Outcome",
    "is_incoherent_kraus",
    "is_strictly_incoherent_kraus",
    "validate_channel",
    "apply_single",
    "apply_stochastic",
    "is_pure_coherent_output",
]


class Outcome(NamedTuple):
    """Post-selected result. ``state`` is None on a zero-probability branch."""

    state: Optional[DensityMatrix]
    probability: float

    @property
    def zero_probability(self) -> bool:
        return self.state is None


@dataclass(frozen=True, eq=False)
class StochasticChannel:
    kraus: tuple
    incoherent: tuple
    strictly_incoherent: tuple
    max_eigenvalue: float
    trace_preserving: bool

    @property
    def in_dim(self):
        return self.kraus[0].shape[1]

    @property
    def out_dim(self):
        return self.kraus[0].shape[0]


def is_incoherent_kraus(k, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """At most one non-negligible entry per column.

    "Non-negligible" is relative to the largest entry of ``k`` so that a
    globally rescaled operator gets the same verdict.
    """
    a = np.abs(as_matrix(k))
    nz = a > tol.threshold(a.max())
    return bool(np.all(nz.sum(axis=0) <= 1))


def is_strictly_incoherent_kraus(k, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    k = as_matrix(k)
    return is_incoherent_kraus(k, tol) and is_incoherent_kraus(k.conj().T, tol)


def validate_channel(ks, tol: TolerancePolicy = DEFAULT_TOL) -> StochasticChannel:
    """Check shared dimensions and ``sum K^H K <= I``.

    Raises
    ------
    DimensionMismatch, SubnormalizationViolated
    """
    ks = [as_matrix(k) for k in ks]
    if not ks:
        raise ValidationError("a channel needs at least one Kraus operator")
    shape = ks[0].shape
    for n, k in enumerate(ks):
        if k.shape != shape:
            raise DimensionMismatch(f"Kraus operator {n + 1} has shape {k.shape}, expected {shape}")
    gram = sum(k.conj().T @ k for k in ks)
    w = np.linalg.eigvalsh(0.5 * (gram + gram.conj().T))
    if w[-1] > 1.0 + tol.rel_eps:
        raise SubnormalizationViolated(w[-1])
    frozen = []
    for k in ks:
        k = k.copy()
        k.setflags(write=False)
        frozen.append(k)
    return StochasticChannel(
        kraus=tuple(frozen),
        incoherent=tuple(is_incoherent_kraus(k, tol) for k in ks),
        strictly_incoherent=tuple(is_strictly_incoherent_kraus(k, tol) for k in ks),
        max_eigenvalue=float(w[-1]),
        trace_preserving=bool(np.linalg.norm(gram - np.eye(shape[1])) <= tol.rel_eps * np.sqrt(shape[1])),
    )


def _finish(out, tol):
    p = float(np.real(np.trace(out)))
    if p <= tol.abs_floor:
        return Outcome(None, p)
    return Outcome(validate_density(out / p, tol), p)


def apply_single(k, rho: DensityMatrix, tol: TolerancePolicy = DEFAULT_TOL) -> Outcome:
    """``K rho K^H`` renormalized, with its probability ``Tr(K rho K^H)``."""
    k = as_matrix(k)
    m = _mat(rho)
    if k.shape[1] != m.shape[0]:
        raise DimensionMismatch(f"Kraus operator has {k.shape[1]} columns, state has dimension {m.shape[0]}")
    nrm = operator_norm(k)
    if nrm > 1.0 + tol.rel_eps:
        raise SubnormalizationViolated(nrm * nrm)
    return _finish(k @ m @ k.conj().T, tol)


def apply_stochastic(ch: StochasticChannel, rho: DensityMatrix, tol: TolerancePolicy = DEFAULT_TOL) -> Outcome:
    m = _mat(rho)
    if ch.in_dim != m.shape[0]:
        raise DimensionMismatch(f"channel input dimension {ch.in_dim}, state has dimension {m.shape[0]}")
    out = sum(k @ m @ k.conj().T for k in ch.kraus)
    return _finish(out, tol)


def is_pure_coherent_output(sigma: DensityMatrix, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """Success predicate for distillation: pure and not diagonal."""
    m = _mat(sigma)
    purity = float(np.real(np.vdot(m, m)))
    return purity >= 1.0 - tol.rel_eps and not is_incoherent_state(m, tol)
