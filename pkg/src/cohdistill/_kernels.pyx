# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Must agree bit-for-bit in verdicts with _kernels_py."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


cdef Py_ssize_t _find(Py_ssize_t[::1] parent, Py_ssize_t i) noexcept nogil:
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


def component_labels(const cnp.uint8_t[:, ::1] mask):
    """Union-find over the symmetric pattern ``mask``; label = smallest member index."""
    cdef Py_ssize_t d = mask.shape[0]
    cdef Py_ssize_t i, j, ri, rj
    parent_arr = np.arange(d, dtype=np.intp)
    cdef Py_ssize_t[::1] parent = parent_arr
    with nogil:
        for i in range(d):
            for j in range(i + 1, d):
                if mask[i, j] or mask[j, i]:
                    ri = _find(parent, i)
                    rj = _find(parent, j)
                    if ri < rj:
                        parent[rj] = ri
                    elif rj < ri:
                        parent[ri] = rj
        for i in range(d):
            parent[i] = _find(parent, i)
    return parent_arr


cdef Py_ssize_t _first_hit(const cnp.complex128_t[:, ::1] rho,
                           const cnp.int8_t[:, ::1] assign,
                           const cnp.complex128_t[:, ::1] coeff,
                           double rel_eps, double abs_floor) noexcept nogil:
    cdef Py_ssize_t T = assign.shape[0]
    cdef Py_ssize_t d = assign.shape[1]
    cdef Py_ssize_t t, i, j
    cdef int ai, aj
    cdef double complex term, m12
    cdef double m11, m22, n1, n2, nrm2, p, tr, purity, a12, thr, big, s11, s22
    for t in range(T):
        m11 = 0.0
        m22 = 0.0
        m12 = 0.0
        n1 = 0.0
        n2 = 0.0
        for i in range(d):
            ai = assign[t, i]
            if ai == 2:
                continue
            if ai == 0:
                n1 = n1 + coeff[t, i].real * coeff[t, i].real + coeff[t, i].imag * coeff[t, i].imag
            else:
                n2 = n2 + coeff[t, i].real * coeff[t, i].real + coeff[t, i].imag * coeff[t, i].imag
            for j in range(d):
                aj = assign[t, j]
                if aj == 2:
                    continue
                term = coeff[t, i] * rho[i, j] * coeff[t, j].conjugate()
                if ai == 0 and aj == 0:
                    m11 = m11 + term.real
                elif ai == 1 and aj == 1:
                    m22 = m22 + term.real
                elif ai == 0 and aj == 1:
                    m12 = m12 + term
        nrm2 = n1 if n1 > n2 else n2
        if nrm2 <= 0.0:
            continue
        tr = m11 + m22
        p = tr / nrm2
        if not (p > abs_floor):
            continue
        s11 = m11 / tr
        s22 = m22 / tr
        a12 = sqrt(m12.real * m12.real + m12.imag * m12.imag) / tr
        purity = s11 * s11 + s22 * s22 + 2.0 * a12 * a12
        if purity < 1.0 - rel_eps:
            continue
        big = s11
        if s22 > big:
            big = s22
        if a12 > big:
            big = a12
        thr = rel_eps * big
        if abs_floor > thr:
            thr = abs_floor
        if a12 > thr:
            return t
    return -1


def first_pure_coherent(const cnp.complex128_t[:, ::1] rho,
                        const cnp.int8_t[:, ::1] assign,
                        const cnp.complex128_t[:, ::1] coeff,
                        double rel_eps, double abs_floor):
    """Index of the first trial whose 2 x d incoherent operator yields a pure
    coherent output with probability above ``abs_floor``; -1 if none.

    Trial ``t`` sends input column ``i`` to output row ``assign[t, i]``
    (0 or 1; 2 drops the column) with coefficient ``coeff[t, i]``.
    """
    cdef Py_ssize_t hit
    with nogil:
        hit = _first_hit(rho, assign, coeff, rel_eps, abs_floor)
    return hit
