# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled twins of the kernels in ``_pykernels``."""

import numpy as np
from libc.math cimport pow


def sq_distances(const double[:, ::1] X, const double[:, ::1] centers):
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1], c = centers.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double acc, t
    out = np.empty((c, n))
    cdef double[:, ::1] D = out
    with nogil:
        for i in range(c):
            for j in range(n):
                acc = 0.0
                for k in range(d):
                    t = centers[i, k] - X[j, k]
                    acc = acc + t * t
                D[i, j] = acc
    return out


def memberships(const double[:, ::1] dissim, double m, double floor):
    cdef Py_ssize_t c = dissim.shape[0], n = dissim.shape[1]
    cdef Py_ssize_t i, j
    cdef double p = 1.0 / (m - 1.0)
    cdef double dmin, v, total
    cdef int hits
    out = np.empty((c, n))
    cdef double[:, ::1] U = out
    with nogil:
        for j in range(n):
            hits = 0
            dmin = dissim[0, j]
            for i in range(c):
                v = dissim[i, j]
                if v < floor:
                    hits += 1
                if v < dmin:
                    dmin = v
            if hits > 0:
                for i in range(c):
                    U[i, j] = (1.0 / hits) if dissim[i, j] < floor else 0.0
                continue
            total = 0.0
            for i in range(c):
                v = dmin / dissim[i, j]
                if p != 1.0:
                    v = pow(v, p)
                U[i, j] = v
                total = total + v
            for i in range(c):
                U[i, j] = U[i, j] / total
    return out


def weighted_means(const double[:, ::1] X, const double[:, ::1] W):
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1], c = W.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double w
    means_arr = np.zeros((c, d))
    total_arr = np.zeros(c)
    cdef double[:, ::1] M = means_arr
    cdef double[::1] T = total_arr
    with nogil:
        for j in range(n):
            for i in range(c):
                w = W[i, j]
                T[i] = T[i] + w
                for k in range(d):
                    M[i, k] = M[i, k] + w * X[j, k]
        for i in range(c):
            # zero totals are reported through T; the caller raises
            if T[i] != 0.0:
                for k in range(d):
                    M[i, k] = M[i, k] / T[i]
    return means_arr, total_arr


def weighted_objective(const double[:, ::1] U, const double[:, ::1] dissim, double m):
    cdef Py_ssize_t c = U.shape[0], n = U.shape[1]
    cdef Py_ssize_t i, j
    cdef double acc = 0.0
    cdef double u
    with nogil:
        for i in range(c):
            for j in range(n):
                u = U[i, j]
                acc = acc + (u * u if m == 2.0 else pow(u, m)) * dissim[i, j]
    return acc
