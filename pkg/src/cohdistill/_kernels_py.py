"""Reference implementations of the compiled kernels (numpy / pure Python)."""

import numpy as np


def component_labels(mask):
    d = mask.shape[0]
    parent = list(range(d))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(d):
        for j in range(i + 1, d):
            if mask[i, j] or mask[j, i]:
                ri, rj = find(i), find(j)
                if ri != rj:
                    lo, hi = min(ri, rj), max(ri, rj)
                    parent[hi] = lo
    return np.array([find(i) for i in range(d)], dtype=np.intp)


def first_pure_coherent(rho, assign, coeff, rel_eps, abs_floor):
    k1 = np.where(assign == 0, coeff, 0.0)
    k2 = np.where(assign == 1, coeff, 0.0)
    m11 = np.einsum("ti,ij,tj->t", k1, rho, k1.conj()).real
    m22 = np.einsum("ti,ij,tj->t", k2, rho, k2.conj()).real
    m12 = np.einsum("ti,ij,tj->t", k1, rho, k2.conj())
    n1 = np.sum(np.abs(k1) ** 2, axis=1)
    n2 = np.sum(np.abs(k2) ** 2, axis=1)
    nrm2 = np.maximum(n1, n2)
    tr = m11 + m22
    with np.errstate(divide="ignore", invalid="ignore"):
        p = tr / nrm2
        s11, s22 = m11 / tr, m22 / tr
        a12 = np.abs(m12) / tr
        purity = s11 * s11 + s22 * s22 + 2.0 * a12 * a12
        thr = np.maximum(rel_eps * np.maximum(np.maximum(s11, s22), a12), abs_floor)
        ok = (nrm2 > 0) & (p > abs_floor) & (purity >= 1.0 - rel_eps) & (a12 > thr)
    hits = np.flatnonzero(ok)
    return int(hits[0]) if hits.size else -1
