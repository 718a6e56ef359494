# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. Must stay numerically interchangeable with _fallback."""

import numpy as np
from libc.math cimport cos, sin, M_PI

cdef extern from "complex.h":
    double complex cexp(double complex) nogil


def trapezoid_moment(long k, double complex a, long nodes):
    cdef long l
    cdef long e = ((k + 1) % nodes + nodes) % nodes
    cdef double ang, ange
    cdef double complex acc = 0, z, ze
    with nogil:
        for l in range(nodes):
            ang = 2.0 * M_PI * l / nodes
            ange = 2.0 * M_PI * ((l * e) % nodes) / nodes
            z = cos(ang) + 1j * sin(ang)
            ze = cos(ange) + 1j * sin(ange)
            acc = acc + ze / (z - a)
    return complex(acc / nodes)


def chamber_products(h):
    cdef double complex[:, ::1] hv = np.ascontiguousarray(h, dtype=complex)
    cdef Py_ssize_t S = hv.shape[0], N = hv.shape[1], s, k
    out = np.empty(S, dtype=complex)
    cdef double complex[::1] ov = out
    cdef double complex prod
    with nogil:
        for s in range(S):
            prod = 1
            for k in range(1, N - 1):
                prod = prod * (1 - hv[s, 0] / hv[s, k]) * (1 - hv[s, k] / hv[s, N - 1])
            ov[s] = prod
    return out


def omega_sum(logs, left, right, double a, double b):
    cdef double complex[::1] L = np.ascontiguousarray(logs, dtype=complex)
    cdef long[::1] lv = np.ascontiguousarray(left, dtype=np.int64)
    cdef long[::1] rv = np.ascontiguousarray(right, dtype=np.int64)
    cdef Py_ssize_t N = L.shape[0], x, y, k
    cdef long i, j
    h_arr = np.empty(N, dtype=complex)
    p_arr = np.empty(N, dtype=complex)
    cdef double complex[::1] h = h_arr
    cdef double complex[::1] rowprod = p_arr
    cdef double complex total = 0, acc = 0, num
    with nogil:
        for k in range(N):
            h[k] = cexp(L[k])
            total = total + L[k]
        for x in range(N):
            rowprod[x] = 1
            for k in range(N):
                if k != x:
                    rowprod[x] = rowprod[x] * (h[x] - h[k])
        for x in range(lv.shape[0]):
            i = lv[x]
            for y in range(rv.shape[0]):
                j = rv[y]
                if i == j:
                    continue
                num = cexp(total + (a - 1.0) * L[i] + (b - 1.0) * L[j])
                acc = acc + num * (h[j] - h[i]) / (rowprod[i] * rowprod[j])
    return complex(acc)
