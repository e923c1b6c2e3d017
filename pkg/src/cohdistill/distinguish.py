"""Perfect discrimination of orthogonal pure states with incoherent instruments.

Under IO any orthogonal family is distinguishable, using the
rank-one operators ``K_n = |n><psi_n|``. Under SIO the measurement
effects must be diagonal projectors, so the families that can be told
apart are exactly those with pairwise disjoint coherence supports.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import is_strictly_incoherent_kraus
from .errors import DimensionMismatch, NotOrthogonal, ValidationError
from .linalg_core import DEFAULT_TOL, TolerancePolicy, kernel_basis
from .states import PureState, coherence_support, validate_pure

__all__ = [
    "DiscriminationProtocol",
    "validate_orthogonal_set",
    "io_discrimination_protocol",
    "sio_projector_protocol",
    "can_distinguish_sio",
    "verify_discrimination",
]


@dataclass(frozen=True, eq=False)
class DiscriminationProtocol:
    """Labelled effects ``M_n`` plus a residual effect that certifies nothing.

    ``measurements[n] = (label, M)`` where ``label`` is the 0-based index of
    the state the effect identifies.
    """

    measurements: tuple
    residual: np.ndarray
    kraus_realization: tuple
    strictly_incoherent: bool

    @property
    def dim(self):
        return self.residual.shape[0]

    def completeness_error(self) -> float:
        total = sum(m for _, m in self.measurements) + self.residual
        return float(np.linalg.norm(total - np.eye(self.dim)))


def _as_pure(s, tol):
    return s if isinstance(s, PureState) else validate_pure(s, tol)


def validate_orthogonal_set(states, tol: TolerancePolicy = DEFAULT_TOL) -> tuple:
    """Unit vectors of one dimension with pairwise overlaps at most ``rel_eps``.

    Raises
    ------
    NotOrthogonal
        Names the first offending pair.
    """
    states = [_as_pure(s, tol) for s in states]
    if not states:
        raise ValidationError("need at least one state")
    d = states[0].dim
    for n, s in enumerate(states):
        if s.dim != d:
            raise DimensionMismatch(f"state {n + 1} has dimension {s.dim}, expected {d}")
    for i in range(len(states)):
        for j in range(i + 1, len(states)):
            ov = abs(np.vdot(states[i].amplitudes, states[j].amplitudes))
            if ov > tol.rel_eps:
                raise NotOrthogonal(i, j, ov)
    return tuple(states)


def _ket(d, n):
    e = np.zeros((d, 1), dtype=np.complex128)
    e[n, 0] = 1.0
    return e


def io_discrimination_protocol(states, tol: TolerancePolicy = DEFAULT_TOL) -> DiscriminationProtocol:
    """``M_n = |psi_n><psi_n|`` realized by ``K_n = |n><psi_n|``.

    The residual ``I - sum M_n`` is realized by one element ``|1><chi_r|``
    per vector of an orthonormal basis of its range, so every Kraus element
    has a single nonzero row and the whole instrument stays incoherent.
    """
    states = validate_orthogonal_set(states, tol)
    d = states[0].dim
    meas, kraus = [], []
    for n, s in enumerate(states):
        bra = s.amplitudes.conj()[None, :]
        kraus.append(_ket(d, n) @ bra)
        meas.append((n, s.projector()))
    total = sum(m for _, m in meas)
    residual = np.eye(d) - total
    residual = 0.5 * (residual + residual.conj().T)
    for chi in kernel_basis(total, tol):
        kraus.append(_ket(d, 0) @ chi.conj()[None, :])
    strict = all(is_strictly_incoherent_kraus(k, tol) for k in kraus)
    return DiscriminationProtocol(tuple(meas), residual, tuple(kraus), strict)


def sio_projector_protocol(states, tol: TolerancePolicy = DEFAULT_TOL) -> DiscriminationProtocol:
    """Diagonal support projectors; only meaningful when supports are disjoint."""
    states = validate_orthogonal_set(states, tol)
    d = states[0].dim
    used = np.zeros(d, dtype=bool)
    meas, kraus = [], []
    for n, s in enumerate(states):
        diag = np.zeros(d)
        diag[list(coherence_support(s, tol).indices)] = 1.0
        used |= diag > 0
        proj = np.diag(diag).astype(np.complex128)
        meas.append((n, proj))
        kraus.append(proj)
    residual = np.diag((~used).astype(float)).astype(np.complex128)
    if (~used).any():
        kraus.append(residual)
    return DiscriminationProtocol(tuple(meas), residual, tuple(kraus), True)


def _supports_disjoint(states, tol):
    supports = [coherence_support(s, tol) for s in states]
    for i in range(len(supports)):
        for j in range(i + 1, len(supports)):
            if not supports[i].isdisjoint(supports[j]):
                return False
    return True


def can_distinguish_sio(states, tol: TolerancePolicy = DEFAULT_TOL):
    """Verdict plus the projector protocol when the supports are pairwise disjoint."""
    states = validate_orthogonal_set(states, tol)
    if not _supports_disjoint(states, tol):
        return False, None
    return True, sio_projector_protocol(states, tol)


def verify_discrimination(protocol: DiscriminationProtocol, states, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """Every state has an effect that fires on it with certainty and never on the others.

    The residual effect is not eligible.
    """
    states = [_as_pure(s, tol) for s in states]
    if any(s.dim != protocol.dim for s in states):
        return False
    vals = np.array([[np.vdot(s.amplitudes, m @ s.amplitudes).real for s in states]
                     for _, m in protocol.measurements])
    if vals.size == 0:
        return False
    for i in range(len(states)):
        others = np.delete(vals, i, axis=1)
        fires = (vals[:, i] >= 1.0 - tol.rel_eps) & np.all(others <= tol.rel_eps, axis=1)
        if not fires.any():
            return False
    return True
