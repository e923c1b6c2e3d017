"""Irreducible direct-sum decomposition of a density matrix.

Two basis indices are linked when the off-diagonal entry between them is
above the shared zero threshold; the connected components of that graph
are exactly the finest blocks reachable by permuting the basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .linalg_core import DEFAULT_TOL, TolerancePolicy
from .states import DensityMatrix, _frozen, _mat, off_diagonal_threshold, validate_density

__all__ = [
    "CoherenceGraph",
    "Block",
    "BlockDecomposition",
    "coherence_graph",
    "coherence_graph_components",
    "irreducible_blocks",
    "is_irreducible",
    "near_threshold_entries",
]


@dataclass(frozen=True)
class CoherenceGraph:
    dim: int
    edges: frozenset  # of (i, j) with i < j, 0-based


@dataclass(frozen=True, eq=False)
class Block:
    indices: tuple
    weight: float
    state: DensityMatrix
    placeholder: bool = False  # weight below abs_floor; state is [1]

    @property
    def dim(self):
        return len(self.indices)


@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    blocks: tuple
    permutation: tuple  # new position k holds old index permutation[k]
    dim: int = field(default=0)

    def assembled(self) -> np.ndarray:
        """``sum_mu p_mu rho_mu`` laid out in permuted (block-contiguous) order."""
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        start = 0
        for b in self.blocks:
            n = b.dim
            if not b.placeholder:
                out[start:start + n, start:start + n] = b.weight * b.state.mat
            start += n
        return out

    def permute(self, m) -> np.ndarray:
        p = list(self.permutation)
        return np.asarray(m)[np.ix_(p, p)]


def _edge_mask(m, tol):
    mask = np.abs(m) > off_diagonal_threshold(m, tol)
    np.fill_diagonal(mask, False)
    return mask


def coherence_graph(rho, tol: TolerancePolicy = DEFAULT_TOL) -> CoherenceGraph:
    m = _mat(rho)
    ii, jj = np.nonzero(np.triu(_edge_mask(m, tol), 1))
    return CoherenceGraph(m.shape[0], frozenset(zip(ii.tolist(), jj.tolist())))


def coherence_graph_components(rho, tol: TolerancePolicy = DEFAULT_TOL) -> list[tuple]:
    """Connected components as sorted index tuples, ordered by smallest member."""
    m = _mat(rho)
    labels = kernels.component_labels(_edge_mask(m, tol))
    groups = {}
    for i, lab in enumerate(labels.tolist()):
        groups.setdefault(lab, []).append(i)
    return [tuple(groups[k]) for k in sorted(groups)]


def irreducible_blocks(rho: DensityMatrix, tol: TolerancePolicy = DEFAULT_TOL) -> BlockDecomposition:
    m = _mat(rho)
    blocks = []
    for comp in coherence_graph_components(m, tol):
        sub = m[np.ix_(comp, comp)]
        w = float(np.trace(sub).real)
        if w <= tol.abs_floor:
            blocks.append(Block(comp, 0.0, DensityMatrix(_frozen(np.eye(1))), placeholder=True))
            continue
        blocks.append(Block(comp, w, validate_density(sub / w, tol)))
    perm = tuple(i for b in blocks for i in b.indices)
    return BlockDecomposition(tuple(blocks), perm, m.shape[0])


def is_irreducible(rho: DensityMatrix, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    dec = irreducible_blocks(rho, tol)
    return len(dec.blocks) == 1 and dec.blocks[0].weight > tol.abs_floor and dec.blocks[0].dim == rho.dim


def near_threshold_entries(rho, tol: TolerancePolicy = DEFAULT_TOL, factor: float = 10.0) -> list[tuple]:
    """Off-diagonal positions whose magnitude is within ``factor`` of the edge threshold.

    Exact zeros are never reported.
    """
    m = _mat(rho)
    thr = off_diagonal_threshold(m, tol)
    a = np.abs(m)
    close = (a > 0) & (a >= thr / factor) & (a <= thr * factor)
    np.fill_diagonal(close, False)
    ii, jj = np.nonzero(np.triu(close, 1))
    return list(zip(ii.tolist(), jj.tolist()))
