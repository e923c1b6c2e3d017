"""Dense complex linear algebra with an explicit tolerance policy.

All numerical judgments (rank, kernel, "is this entry zero") go through
the helpers here so that the whole package shares one threshold rule:
a magnitude counts as nonzero iff it exceeds ``max(rel_eps * scale, abs_floor)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import NonFinite, NotHermitian, NotSquare, ValidationError

__all__ = [
    "TolerancePolicy",
    "DEFAULT_TOL",
    "as_matrix",
    "as_vector",
    "hermitian_eig",
    "numerical_rank",
    "kernel_basis",
    "tensor_product",
    "tensor_power",
    "operator_norm",
]


@dataclass(frozen=True)
class TolerancePolicy:
    """Relative threshold plus an absolute floor.

    Parameters
    ----------
    rel_eps : float
        Relative threshold, ``0 < rel_eps < 1``.
    abs_floor : float
        Absolute floor, ``0 <= abs_floor < 1``.
    """

    rel_eps: float = 1e-9
    abs_floor: float = 1e-12

    def __post_init__(self):
        if not (0.0 < self.rel_eps < 1.0):
            raise ValidationError(f"rel_eps must lie in (0, 1), got {self.rel_eps!r}")
        if not (0.0 <= self.abs_floor < 1.0):
            raise ValidationError(f"abs_floor must lie in [0, 1), got {self.abs_floor!r}")

    def threshold(self, scale):
        """Cutoff for magnitudes measured against ``scale``."""
        return max(self.rel_eps * float(scale), self.abs_floor)

    def to_dict(self):
        return {"rel_eps": self.rel_eps, "abs_floor": self.abs_floor}

    def for_tensor_power(self, n: int, dim: int) -> "TolerancePolicy":
        """Policy for judging an ``n``-fold tensor power of a ``dim``-dimensional matrix.

        Singular-value ratios of ``A^{(x)n}`` are ``n``-th powers of those of
        ``A``, so the relative threshold becomes ``rel_eps**n``. It is floored
        at the SVD roundoff level of the ``dim**n`` matrix so exact zeros
        still read as zero.
        """
        big = dim ** n
        noise = 100.0 * big * np.finfo(float).eps
        return TolerancePolicy(min(max(self.rel_eps ** n, noise), self.rel_eps), self.abs_floor ** n)


DEFAULT_TOL = TolerancePolicy()


def as_matrix(m) -> np.ndarray:
    """Coerce to a finite 2-D complex128 array with at least one row and column."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValidationError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFinite("matrix contains NaN or Inf entries")
    return a


def as_vector(v) -> np.ndarray:
    a = np.asarray(v, dtype=np.complex128)
    if a.ndim != 1 or a.shape[0] < 1:
        raise ValidationError(f"expected a non-empty vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFinite("vector contains NaN or Inf entries")
    return a


def _require_square(a):
    if a.shape[0] != a.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {a.shape}")


def _require_hermitian(a, tol):
    dev = np.linalg.norm(a - a.conj().T)
    if dev > tol.rel_eps * np.linalg.norm(a):
        raise NotHermitian(dev)


def hermitian_eig(m, tol: TolerancePolicy = DEFAULT_TOL):
    """Spectral decomposition of a Hermitian matrix.

    Returns
    -------
    eigenvalues : ndarray of float, ascending
    eigenvectors : ndarray, columns orthonormal

    Raises
    ------
    NotSquare, NotHermitian
    """
    a = as_matrix(m)
    _require_square(a)
    _require_hermitian(a, tol)
    w, v = np.linalg.eigh(0.5 * (a + a.conj().T))
    return w, v


def _singular_values(a):
    return np.linalg.svd(a, compute_uv=False)


def numerical_rank(m, tol: TolerancePolicy = DEFAULT_TOL) -> int:
    """Number of singular values above ``max(rel_eps * sigma_max, abs_floor)``."""
    s = _singular_values(as_matrix(m))
    if s.size == 0:
        return 0
    return int(np.count_nonzero(s > tol.threshold(s[0])))


def kernel_basis(m, tol: TolerancePolicy = DEFAULT_TOL) -> list[np.ndarray]:
    """Orthonormal basis of the numerical null space of a Hermitian PSD matrix.

    The basis is canonical: it depends only on the null space, not on
    which orthonormal frame the SVD happens to return. Coordinates are
    scanned from the last index down and a coordinate becomes "free" when
    the null space is still independent on it; the vector dual to each free
    coordinate (value 1 there, 0 on the other free coordinates) is then
    orthonormalized in ascending free-index order. For a matrix whose
    kernel is ``{x : x_1 + x_2 + x_3 = 0}`` the first vector is
    ``(1, -1, 0)/sqrt 2``.

    Each vector is phased so that its largest-magnitude entry (lowest
    index on ties) is real and positive.
    """
    a = as_matrix(m)
    _require_square(a)
    _require_hermitian(a, tol)
    d = a.shape[0]
    _, s, vh = np.linalg.svd(0.5 * (a + a.conj().T))
    cut = tol.threshold(s[0])
    null = vh[s <= cut].conj().T  # d x k, orthonormal columns
    k = null.shape[1]
    if k == 0:
        return []

    # Greedy selection of free coordinates, last index first.
    free = []
    picked = np.zeros((0, k), dtype=np.complex128)
    for c in range(d - 1, -1, -1):
        row = null[c]
        if picked.shape[0]:
            row = row - (row @ picked.conj().T) @ picked
        nrm = np.linalg.norm(row)
        if nrm > 1e-6:
            picked = np.vstack([picked, row / nrm])
            free.append(c)
            if len(free) == k:
                break
    free.sort()
    dual = null @ np.linalg.inv(null[free, :])  # columns: e_f on free coords

    q, _ = np.linalg.qr(dual)
    # Second pass keeps the columns inside span(null) and orthonormal to roundoff.
    q = null @ (null.conj().T @ q)
    q, _ = np.linalg.qr(q)
    out = []
    for j in range(k):
        v = q[:, j]
        mags = np.abs(v)
        top = int(np.flatnonzero(mags >= mags.max() * (1.0 - 1e-9))[0])
        v = v * (np.conj(v[top]) / mags[top])
        out.append(v / np.linalg.norm(v))
    return out


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product; composite index ``(i, j) -> i * dim(B) + j``."""
    return np.kron(as_matrix(a), as_matrix(b))


def tensor_power(a, n: int) -> np.ndarray:
    if n < 1:
        raise ValidationError(f"tensor power needs n >= 1, got {n}")
    a = as_matrix(a)
    return reduce(np.kron, [a] * n)


def operator_norm(m) -> float:
    """Largest singular value."""
    s = _singular_values(as_matrix(m))
    return float(s[0]) if s.size else 0.0
