"""Quantum states in a fixed reference basis.

Indices are 0-based throughout the library; the file/CLI layer converts
to the 1-based labels |1>, ..., |d> on output.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotNormalized, NotPSD, TraceNotOne, ValidationError
from .linalg_core import (
    DEFAULT_TOL,
    TolerancePolicy,
    as_matrix,
    as_vector,
    hermitian_eig,
    numerical_rank,
)

__all__ = [
    "DensityMatrix",
    "PureState",
    "CoherenceSupport",
    "validate_density",
    "validate_pure",
    "is_incoherent_state",
    "off_diagonal_threshold",
    "coherence_support",
    "dephase",
    "von_neumann_entropy",
    "distillable_coherence_asymptotic",
    "maximally_coherent",
    "random_density",
    "random_block_state",
]


def _frozen(a):
    a = np.array(a, dtype=np.complex128, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated density matrix. Build through :func:`validate_density`."""

    mat: np.ndarray

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def purity(self) -> float:
        return float(np.real(np.trace(self.mat @ self.mat)))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.mat, dtype=dtype)


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def density(self) -> DensityMatrix:
        return DensityMatrix(_frozen(self.projector()))


@dataclass(frozen=True)
class CoherenceSupport:
    """Sorted 0-based indices with non-negligible amplitude."""

    indices: tuple

    def one_based(self):
        return [i + 1 for i in self.indices]

    def __len__(self):
        return len(self.indices)

    def isdisjoint(self, other) -> bool:
        return set(self.indices).isdisjoint(other.indices)


def validate_density(raw, tol: TolerancePolicy = DEFAULT_TOL) -> DensityMatrix:
    """Check Hermiticity, positivity and unit trace.

    Raises
    ------
    NotSquare, NotHermitian, NotPSD, TraceNotOne
    """
    a = as_matrix(raw)
    w, _ = hermitian_eig(a, tol)
    if w[0] < -tol.rel_eps:
        raise NotPSD(w[0])
    tr = np.trace(a)
    if abs(tr - 1.0) > tol.rel_eps:
        raise TraceNotOne(tr.real)
    return DensityMatrix(_frozen(0.5 * (a + a.conj().T)))


def validate_pure(amplitudes, tol: TolerancePolicy = DEFAULT_TOL) -> PureState:
    v = as_vector(amplitudes)
    n = np.linalg.norm(v)
    if abs(n - 1.0) > tol.rel_eps:
        raise NotNormalized(f"state vector has norm {n!r}, expected 1")
    return PureState(_frozen(v))


def _mat(rho):
    return rho.mat if isinstance(rho, DensityMatrix) else as_matrix(rho)


def off_diagonal_threshold(m, tol: TolerancePolicy = DEFAULT_TOL) -> float:
    """Cutoff below which an entry of ``m`` is treated as zero."""
    return tol.threshold(np.abs(m).max())


def is_incoherent_state(rho, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    m = _mat(rho)
    off = np.abs(m - np.diag(np.diag(m)))
    return bool(off.max(initial=0.0) <= off_diagonal_threshold(m, tol))


def coherence_support(psi, tol: TolerancePolicy = DEFAULT_TOL) -> CoherenceSupport:
    amps = psi.amplitudes if isinstance(psi, PureState) else as_vector(psi)
    cut = max(tol.rel_eps, tol.abs_floor)
    return CoherenceSupport(tuple(int(i) for i in np.flatnonzero(np.abs(amps) > cut)))


def dephase(rho: DensityMatrix) -> DensityMatrix:
    """Completely dephasing channel: keep the diagonal, zero the rest."""
    m = _mat(rho)
    return DensityMatrix(_frozen(np.diag(np.diag(m))))


def von_neumann_entropy(rho, tol: TolerancePolicy = DEFAULT_TOL) -> float:
    """Entropy in bits. Eigenvalues are clamped to [0, 1]; those below
    ``abs_floor`` contribute nothing."""
    w = np.linalg.eigvalsh(_mat(rho))
    w = np.clip(w, 0.0, 1.0)
    w = w[w > tol.abs_floor]
    return float(-np.sum(w * np.log2(w)))


def distillable_coherence_asymptotic(rho, tol: TolerancePolicy = DEFAULT_TOL) -> float:
    """``S(dephase(rho)) - S(rho)`` in bits."""
    m = _mat(rho)
    diag = np.clip(np.real(np.diag(m)), 0.0, 1.0)
    diag = diag[diag > tol.abs_floor]
    s_dephased = float(-np.sum(diag * np.log2(diag)))
    return s_dephased - von_neumann_entropy(m, tol)


def maximally_coherent(d: int) -> PureState:
    if d < 1:
        raise ValidationError(f"dimension must be >= 1, got {d}")
    return PureState(_frozen(np.full(d, 1.0 / np.sqrt(d))))


def _gaussian(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_density(dim: int, rank: int, seed, tol: TolerancePolicy = DEFAULT_TOL) -> DensityMatrix:
    """Random state ``A A^H / Tr(A A^H)`` with ``A`` a ``dim x rank`` complex Gaussian.

    Draws whose numerical rank falls short of ``rank`` are discarded and
    redrawn from the same generator, so the output rank is exact.
    """
    if dim < 1 or not (1 <= rank <= dim):
        raise ValidationError(f"need 1 <= rank <= dim, got dim={dim}, rank={rank}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    while True:
        a = _gaussian(rng, (dim, rank))
        m = a @ a.conj().T
        m = m / np.trace(m).real
        m = 0.5 * (m + m.conj().T)
        if numerical_rank(m, tol) == rank:
            return DensityMatrix(_frozen(m))


def random_block_state(block_dims, block_ranks, seed, tol: TolerancePolicy = DEFAULT_TOL) -> DensityMatrix:
    """Direct sum of irreducible random blocks with random positive weights.

    Blocks are laid out contiguously in the order given. A block whose
    coherence graph is disconnected is redrawn.
    """
    from .blocks import coherence_graph_components  # circular at import time

    block_dims = list(block_dims)
    block_ranks = list(block_ranks)
    if not block_dims or len(block_dims) != len(block_ranks):
        raise ValidationError("block_dims and block_ranks must be non-empty and of equal length")
    for d, r in zip(block_dims, block_ranks):
        if d < 1 or not (1 <= r <= d):
            raise ValidationError(f"invalid block (dim={d}, rank={r})")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    weights = rng.uniform(0.2, 1.0, size=len(block_dims))
    weights /= weights.sum()
    total = sum(block_dims)
    out = np.zeros((total, total), dtype=np.complex128)
    start = 0
    for d, r, w in zip(block_dims, block_ranks, weights):
        while True:
            blk = random_density(d, r, rng, tol).mat
            if d == 1 or len(coherence_graph_components(blk, tol)) == 1:
                break
        out[start:start + d, start:start + d] = w * blk
        start += d
    return validate_density(out, tol)
