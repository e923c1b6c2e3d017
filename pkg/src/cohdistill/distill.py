"""Distillability under stochastic incoherent operations.

A state is distillable to a pure coherent state under sIO exactly when one
of its irreducible direct-sum blocks is rank deficient. The same set is
distillable under sMIO. Under sSIO the stronger condition is a coherent,
rank-one 2 x 2 principal submatrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .blocks import BlockDecomposition, irreducible_blocks, near_threshold_entries
from .channels import apply_single, is_incoherent_kraus, is_pure_coherent_output
from .errors import DimensionTooLarge, NotDistillable, ValidationError, WitnessVerificationFailed
from .linalg_core import DEFAULT_TOL, TolerancePolicy, kernel_basis, numerical_rank, operator_norm, tensor_power
from .states import DensityMatrix, PureState, _frozen, _mat, off_diagonal_threshold, validate_density

__all__ = [
    "BlockEvidence",
    "DistillabilityReport",
    "DistillationWitness",
    "is_distillable_sio",
    "is_distillable_smio",
    "is_distillable_ssio",
    "construct_witness",
    "is_n_distillable",
    "falsification_search",
    "MAX_TENSOR_DIM",
    "FALSIFY_CHUNK",
]

MAX_TENSOR_DIM = 4096
FALSIFY_CHUNK = 1024


@dataclass(frozen=True)
class BlockEvidence:
    dim: int
    rank: int
    full_rank: bool


@dataclass(frozen=True, eq=False)
class DistillabilityReport:
    sio: bool
    ssio: bool
    smio: bool
    blocks: BlockDecomposition
    per_block: tuple
    rank_one_pairs: tuple
    warnings: tuple = field(default=())


@dataclass(frozen=True, eq=False)
class DistillationWitness:
    K: np.ndarray
    source_block: tuple
    kernel_vector: PureState
    c1_index: int
    probability: float
    output: DensityMatrix
    unscaled_probability: float
    scale: float  # K = scale * (unrescaled operator)
    checks: dict


def _block_evidence(dec: BlockDecomposition, tol):
    out = []
    for b in dec.blocks:
        # Placeholders stand in for zero-weight components and never count as deficient.
        r = b.dim if b.placeholder else numerical_rank(b.state.mat, tol)
        out.append(BlockEvidence(b.dim, r, r == b.dim))
    return tuple(out)


def is_distillable_ssio(rho, tol: TolerancePolicy = DEFAULT_TOL):
    """Pairs ``(i, j)`` whose 2 x 2 principal submatrix is rank one with a nonzero off-diagonal.

    Returns
    -------
    verdict : bool
    pairs : list of (i, j), 0-based, i < j
    """
    m = _mat(rho)
    a = np.abs(m)
    big = a.max()
    thr = off_diagonal_threshold(m, tol)
    diag = np.real(np.diag(m))
    pairs = []
    d = m.shape[0]
    for i in range(d):
        for j in range(i + 1, d):
            if a[i, j] > thr and a[i, j] ** 2 >= diag[i] * diag[j] - tol.rel_eps * big * big:
                pairs.append((i, j))
    return bool(pairs), pairs


def is_distillable_sio(rho: DensityMatrix, tol: TolerancePolicy = DEFAULT_TOL) -> DistillabilityReport:
    """Block decomposition plus per-block rank evidence and all three verdicts."""
    dec = irreducible_blocks(rho, tol)
    evidence = _block_evidence(dec, tol)
    sio = any(not e.full_rank for e in evidence)
    ssio, pairs = is_distillable_ssio(rho, tol)
    warnings = []
    near = near_threshold_entries(rho, tol)
    if near:
        shown = ", ".join(f"({i + 1},{j + 1})" for i, j in near[:8])
        warnings.append(f"{len(near)} off-diagonal entries within a factor 10 of the zero threshold: {shown}")
    if ssio and not sio:
        warnings.append("sSIO pair found in a full-rank block; verdict is tolerance sensitive")
    return DistillabilityReport(
        sio=sio,
        ssio=ssio,
        smio=sio,  # identical sets; share the verdict
        blocks=dec,
        per_block=evidence,
        rank_one_pairs=tuple(pairs),
        warnings=tuple(warnings),
    )


def is_distillable_smio(rho: DensityMatrix, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    return is_distillable_sio(rho, tol).smio


def _witness_checks(k, out, p, tol):
    m = out.mat
    slack = 10 * tol.rel_eps
    return {
        "incoherent_kraus": is_incoherent_kraus(k, tol),
        "operator_norm_le_1": operator_norm(k) <= 1.0 + tol.rel_eps,
        "probability_positive": p > tol.abs_floor,
        "output_pure": out.purity() >= 1.0 - slack,
        "output_coherent": is_pure_coherent_output(out, tol),
        "matches_phi2": bool(
            abs(m[0, 0].real - 0.5) <= slack
            and abs(m[1, 1].real - 0.5) <= slack
            and abs(abs(m[0, 1]) - 0.5) <= slack
        ),
    }


def construct_witness(rho: DensityMatrix, tol: TolerancePolicy = DEFAULT_TOL, report=None) -> DistillationWitness:
    """Explicit incoherent 2 x d Kraus operator mapping ``rho`` to |phi_2>.

    Takes the first rank-deficient block, a kernel vector ``psi`` of it,
    and its dominant amplitude ``c1`` at index ``i1``; then
    ``K = -c1 |1><i1| + |2><psi_1|`` where ``psi_1`` is ``psi`` with the
    ``i1`` amplitude removed. Every eigenvector of the block is orthogonal
    to ``psi``, which forces ``K`` to send it onto the ``-c1|1> + c1*|2>``
    direction. ``K`` is finally divided by its operator norm.

    Raises
    ------
    NotDistillable
        No block is rank deficient.
    WitnessVerificationFailed
        The constructed operator failed its own checks.
    """
    if report is None:
        report = is_distillable_sio(rho, tol)
    if not report.sio:
        raise NotDistillable("every irreducible block has full rank")
    idx = next(n for n, e in enumerate(report.per_block) if not e.full_rank)
    block = report.blocks.blocks[idx]
    local = kernel_basis(block.state.mat, tol)[0]

    d = rho.dim
    psi = np.zeros(d, dtype=np.complex128)
    psi[list(block.indices)] = local
    mags = np.abs(psi)
    i1 = int(np.flatnonzero(mags >= mags.max() * (1.0 - tol.rel_eps))[0])
    c1 = psi[i1]
    psi1 = psi.copy()
    psi1[i1] = 0.0

    k = np.zeros((2, d), dtype=np.complex128)
    k[0, i1] = -c1
    k[1, :] = psi1.conj()
    unscaled = float(np.real(np.trace(k @ rho.mat @ k.conj().T)))
    scale = 1.0 / operator_norm(k)
    k = k * scale
    k.setflags(write=False)

    res = apply_single(k, rho, tol)
    if res.zero_probability:
        raise WitnessVerificationFailed(f"witness from block {block.indices} has zero probability")
    checks = _witness_checks(k, res.state, res.probability, tol)
    if not all(checks.values()):
        failed = [name for name, ok in checks.items() if not ok]
        raise WitnessVerificationFailed(f"witness checks failed: {failed}")
    return DistillationWitness(
        K=k,
        source_block=block.indices,
        kernel_vector=PureState(_frozen(psi)),
        c1_index=i1,
        probability=res.probability,
        output=res.state,
        unscaled_probability=unscaled,
        scale=scale,
        checks=checks,
    )


def is_n_distillable(rho: DensityMatrix, n: int, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """sIO verdict on ``rho`` tensored ``n`` times.

    The product state is judged with ``tol.for_tensor_power(n, dim)``; a
    fixed relative threshold would call ``rho^{(x)n}`` rank deficient as
    soon as ``(lambda_min / lambda_max)**n`` drops below ``rel_eps``.
    """
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if rho.dim ** n > MAX_TENSOR_DIM:
        raise DimensionTooLarge(f"dim^n = {rho.dim ** n} exceeds {MAX_TENSOR_DIM}")
    tol_n = tol.for_tensor_power(n, rho.dim)
    big = validate_density(tensor_power(rho.mat, n), tol)
    return is_distillable_sio(big, tol_n).sio


def _trial_chunk(rng, d):
    assign = rng.integers(0, 3, size=(FALSIFY_CHUNK, d), dtype=np.int8)
    coeff = (rng.standard_normal((FALSIFY_CHUNK, d)) + 1j * rng.standard_normal((FALSIFY_CHUNK, d))) / np.sqrt(2.0)
    return assign, coeff


def _trial_operator(assign_row, coeff_row):
    d = assign_row.shape[0]
    k = np.zeros((2, d), dtype=np.complex128)
    for i in range(d):
        if assign_row[i] < 2:
            k[assign_row[i], i] = coeff_row[i]
    nrm = operator_norm(k)
    return k / nrm if nrm > 0 else k


def falsification_search(rho: DensityMatrix, trials: int, seed, tol: TolerancePolicy = DEFAULT_TOL):
    """Random search for an incoherent 2 x d operator that distills ``rho``.

    Each trial sends every input column to output row 1, row 2, or drops
    it (uniformly), with standard complex Gaussian coefficients, and
    rescales to unit operator norm. Randomness is drawn in fixed chunks of
    ``FALSIFY_CHUNK`` trials, so trial ``t`` is the same operator for any
    ``trials > t``.

    Returns
    -------
    (K, p) for the first successful trial, or None.
    """
    if trials < 0:
        raise ValidationError("trials must be non-negative")
    m = _mat(rho)
    d = m.shape[0]
    rng = np.random.default_rng(seed)
    done = 0
    while done < trials:
        assign, coeff = _trial_chunk(rng, d)
        n = min(FALSIFY_CHUNK, trials - done)
        assign, coeff = assign[:n], coeff[:n]
        start = 0
        while start < n:
            hit = kernels.first_pure_coherent(m, assign[start:], coeff[start:], tol.rel_eps, tol.abs_floor)
            if hit < 0:
                break
            t = start + hit
            k = _trial_operator(assign[t], coeff[t])
            res = apply_single(k, rho, tol)
            # The kernel screens; the routed predicates decide.
            if not res.zero_probability and res.probability > tol.abs_floor and is_pure_coherent_output(res.state, tol):
                return k, res.probability
            start = t + 1
        done += n
    return None
