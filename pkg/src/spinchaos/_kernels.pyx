# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: Gray-code table fill and Metropolis sweeps.

Mirrors the semantics of ``spinchaos._kernels_py`` exactly (same update
order, same uniform-number consumption), so the two backends are
interchangeable up to floating-point associativity.
"""

from libc.math cimport exp

import numpy as np

BACKEND = "cython"


def gray_energy_table(int n,
                      long long[::1] indptr,
                      long long[::1] indices,
                      double[::1] weights,
                      double[::1] m0,
                      double e0,
                      double[::1] out):
    cdef double[::1] m = m0
    cdef double e = e0
    cdef unsigned long long i, g = 0, total = 1ULL << n
    cdef long long k, j, lo, hi
    cdef double acc
    out[0] = e
    for i in range(1, total):
        k = 0
        while not (i >> k) & 1:
            k += 1
        lo = indptr[k]
        hi = indptr[k + 1]
        acc = 0.0
        for j in range(lo, hi):
            m[indices[j]] = -m[indices[j]]
            acc += weights[indices[j]] * m[indices[j]]
        e += 2.0 * acc
        g ^= 1ULL << k
        out[g] = e
    return np.asarray(out)


def run_metropolis(signed char[::1] spins,
                   double[::1] m,
                   long long[::1] indptr,
                   long long[::1] indices,
                   double[::1] weights,
                   double scale,
                   double[:, ::1] uniforms,
                   double energy):
    cdef long long n = spins.shape[0]
    cdef long long sweeps = uniforms.shape[0]
    cdef long long s, k, j, lo, hi
    cdef long long accepts = 0
    cdef double dh, x
    for s in range(sweeps):
        for k in range(n):
            lo = indptr[k]
            hi = indptr[k + 1]
            dh = 0.0
            for j in range(lo, hi):
                dh += weights[indices[j]] * m[indices[j]]
            dh = -2.0 * dh
            x = scale * dh
            if x >= 0.0 or uniforms[s, k] < exp(x):
                spins[k] = -spins[k]
                for j in range(lo, hi):
                    m[indices[j]] = -m[indices[j]]
                energy += dh
                accepts += 1
    return energy, accepts
