import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cohdistill import kernels
from cohdistill.blocks import (
    coherence_graph,
    irreducible_blocks,
    is_irreducible,
    near_threshold_entries,
)
from cohdistill.states import maximally_coherent, random_block_state, validate_density


def _plus_block_state():
    m = np.zeros((3, 3), dtype=complex)
    m[:2, :2] = 0.25
    m[2, 2] = 0.5
    return validate_density(m)


def _random_partition(rng, dmax=8):
    total = int(rng.integers(2, dmax + 1))
    dims = []
    while sum(dims) < total:
        dims.append(int(rng.integers(1, total - sum(dims) + 1)))
    ranks = [int(rng.integers(1, d + 1)) for d in dims]
    return dims, ranks


def test_coherence_graph_examples(tridiag):
    assert coherence_graph(validate_density(np.diag([0.2, 0.3, 0.5]))).edges == frozenset()
    assert coherence_graph(maximally_coherent(3).density()).edges == {(0, 1), (0, 2), (1, 2)}
    assert coherence_graph(validate_density(tridiag)).edges == {(0, 1), (1, 2)}


def test_irreducible_blocks_examples(tridiag):
    dec = irreducible_blocks(_plus_block_state())
    assert [b.indices for b in dec.blocks] == [(0, 1), (2,)]
    assert [b.weight for b in dec.blocks] == pytest.approx([0.5, 0.5])
    assert np.allclose(dec.blocks[0].state.mat, np.full((2, 2), 0.5))
    assert np.allclose(dec.blocks[1].state.mat, [[1]])

    dec = irreducible_blocks(validate_density(np.eye(2) / 2))
    assert [(b.indices, b.weight) for b in dec.blocks] == [((0,), 0.5), ((1,), 0.5)]

    dec = irreducible_blocks(validate_density(tridiag))
    assert len(dec.blocks) == 1 and dec.blocks[0].indices == (0, 1, 2) and dec.blocks[0].weight == pytest.approx(1)


def test_zero_weight_component_is_placeholder():
    dec = irreducible_blocks(validate_density(np.diag([0.5, 0.0, 0.5])))
    assert dec.blocks[1].placeholder and dec.blocks[1].weight == 0.0
    assert np.array_equal(dec.blocks[1].state.mat, [[1]])


def test_is_irreducible_examples():
    assert is_irreducible(validate_density(np.full((2, 2), 0.5)))
    assert not is_irreducible(validate_density(np.diag([0.25, 0.75])))
    assert is_irreducible(maximally_coherent(4).density())


def test_ordering_by_smallest_index():
    # blocks {1,3} and {2}, interleaved
    m = np.zeros((3, 3), dtype=complex)
    m[np.ix_([0, 2], [0, 2])] = 0.3
    m[1, 1] = 0.4
    dec = irreducible_blocks(validate_density(m))
    assert [b.indices for b in dec.blocks] == [(0, 2), (1,)]
    assert dec.permutation == (0, 2, 1)


def test_near_threshold_warning_entries():
    m = np.eye(2, dtype=complex) / 2
    m[0, 1] = m[1, 0] = 2e-9 * 0.5
    assert near_threshold_entries(validate_density(m)) == [(0, 1)]
    assert near_threshold_entries(validate_density(np.eye(2) / 2)) == []


@pytest.mark.parametrize("backend", ["python", "compiled"])
def test_backends_agree_on_components(backend):
    if backend == "compiled" and not kernels.HAVE_COMPILED:
        pytest.skip("extension not built")
    prev = kernels.use_backend(backend)
    try:
        rng = np.random.default_rng(0)
        for _ in range(200):
            d = int(rng.integers(1, 12))
            mask = rng.random((d, d)) < 0.15
            mask = mask | mask.T
            labels = kernels.component_labels(mask)
            # brute force: transitive closure
            reach = mask | np.eye(d, dtype=bool)
            for _ in range(d):
                reach = reach | ((reach.astype(int) @ reach.astype(int)) > 0)
            expected = np.array([np.flatnonzero(reach[i]).min() for i in range(d)])
            assert np.array_equal(labels, expected)
    finally:
        kernels.use_backend(prev)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_decomposition_properties(seed):
    rng = np.random.default_rng(seed)
    dims, ranks = _random_partition(rng)
    rho = random_block_state(dims, ranks, rng)
    p = rng.permutation(rho.dim)
    shuffled = validate_density(rho.mat[np.ix_(p, p)])
    for state in (rho, shuffled):
        dec = irreducible_blocks(state)
        assert sorted(i for b in dec.blocks for i in b.indices) == list(range(state.dim))
        assert sum(b.weight for b in dec.blocks) == pytest.approx(1, abs=1e-9)
        diff = dec.permute(state.mat) - dec.assembled()
        assert np.linalg.norm(diff) <= 10 * 1e-9 * np.linalg.norm(state.mat)
        for b in dec.blocks:
            assert is_irreducible(b.state)
    key = lambda dec: sorted((round(b.weight, 12), tuple(np.round(np.linalg.eigvalsh(b.state.mat), 10))) for b in dec.blocks)
    assert key(irreducible_blocks(rho)) == key(irreducible_blocks(shuffled))


def test_block_count_500_seeds():
    rng = np.random.default_rng(77)
    for s in range(500):
        dims, ranks = _random_partition(rng)
        rho = random_block_state(dims, ranks, s)
        assert len(irreducible_blocks(rho).blocks) == len(dims)
