# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled scalar kernels mirroring _pykernels."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

BACKEND = "cython"

cdef extern from "complex.h" nogil:
    double cabs(double complex)
    double complex cpow(double complex, double complex)


cdef inline double complex _ipow(double complex q, int n) nogil:
    cdef double complex out = 1.0
    cdef double complex base = q
    cdef int m = n if n >= 0 else -n
    while m:
        if m & 1:
            out *= base
        base *= base
        m >>= 1
    if n < 0:
        return 1.0 / out
    return out


def qpoch(double complex a, double complex q, int n):
    cdef double complex out = 1.0
    cdef double complex qk = 1.0
    cdef int i
    for i in range(n):
        out *= 1.0 - a * qk
        qk *= q
    return out


def qpoch_inf(double complex a, double complex q, double eps, int max_terms):
    cdef double complex out = 1.0
    cdef double complex t = a
    cdef int i
    for i in range(max_terms):
        if t.real * t.real + t.imag * t.imag < eps * eps:
            return out
        out *= 1.0 - t
        t *= q
    return out


cdef double complex _qsum(double complex* up, int nu, double complex* lo, int nl,
                          double complex q, double complex z, int n) nogil:
    cdef int i, j, k
    cdef double complex f, r, head, total
    cdef double complex[64] suffix
    cdef double complex[65] qpow
    qpow[0] = 1.0
    for i in range(1, n + 1):
        qpow[i] = qpow[i - 1] * q
    suffix[n] = 1.0
    for i in range(n - 1, -1, -1):
        f = 1.0
        for j in range(nl):
            f *= 1.0 - lo[j] * qpow[i]
        suffix[i] = suffix[i + 1] * f
    total = 0.0
    head = 1.0
    for k in range(n + 1):
        total += head * suffix[k]
        if k == n:
            break
        r = z / (1.0 - qpow[k + 1])
        for j in range(nu):
            r *= 1.0 - up[j] * qpow[k]
        head *= r
        if head == 0:
            break
    return total


def qsum_divfree(upper, lower, double complex q, double complex z, int n):
    if n > 63:
        raise ValueError("degree too large for compiled kernel")
    cdef double complex[::1] up = np.ascontiguousarray(upper, dtype=complex)
    cdef double complex[::1] lo = np.ascontiguousarray(lower, dtype=complex)
    return _qsum(&up[0] if up.shape[0] else NULL, up.shape[0],
                 &lo[0] if lo.shape[0] else NULL, lo.shape[0], q, z, n)


def sum_divfree(upper, lower, double complex z, int n):
    if n > 63:
        raise ValueError("degree too large for compiled kernel")
    cdef double complex[:] up = np.asarray(upper, dtype=complex)
    cdef double complex[:] lo = np.asarray(lower, dtype=complex)
    cdef int nu = up.shape[0]
    cdef int nl = lo.shape[0]
    cdef int i, j, k
    cdef double complex f, r, head, total
    cdef double complex[64] suffix
    suffix[n] = 1.0
    for i in range(n - 1, -1, -1):
        f = 1.0
        for j in range(nl):
            f *= lo[j] + i
        suffix[i] = suffix[i + 1] * f
    total = 0.0
    head = 1.0
    for k in range(n + 1):
        total += head * suffix[k]
        if k == n:
            break
        r = z / (k + 1.0)
        for j in range(nu):
            r *= up[j] + k
        head *= r
        if head == 0:
            break
    return total


cdef double complex _aw(int n, double complex z, double complex a, double complex b,
                        double complex c, double complex d, double complex q) nogil:
    cdef double complex up[4]
    cdef double complex lo[3]
    up[0] = _ipow(q, -n)
    up[1] = a * b * c * d * _ipow(q, n - 1)
    up[2] = a * z
    up[3] = a / z
    lo[0] = a * b
    lo[1] = a * c
    lo[2] = a * d
    return _qsum(up, 4, lo, 3, q, q, n) / _ipow(a, n)


def aw_poly(int n, double complex z, double complex a, double complex b,
            double complex c, double complex d, double complex q):
    if n > 63:
        raise ValueError("degree too large for compiled kernel")
    return _aw(n, z, a, b, c, d, q)


def aw_poly_array(int n, z, double complex a, double complex b, double complex c,
                  double complex d, double complex q):
    if n > 63:
        raise ValueError("degree too large for compiled kernel")
    zarr = np.ascontiguousarray(z, dtype=complex)
    flat = zarr.reshape(-1)
    out = np.empty_like(flat)
    cdef double complex[:] zv = flat
    cdef double complex[:] ov = out
    cdef Py_ssize_t i
    cdef int k
    cdef double complex[65] qpow
    cdef double complex[64] suffix
    cdef double complex[64] ratio
    cdef double complex f, head, total, az, a_z, c0, c1, an
    # z-independent pieces are shared by all points
    qpow[0] = 1.0
    for k in range(1, n + 1):
        qpow[k] = qpow[k - 1] * q
    suffix[n] = 1.0
    for k in range(n - 1, -1, -1):
        f = (1.0 - a * b * qpow[k]) * (1.0 - a * c * qpow[k]) * (1.0 - a * d * qpow[k])
        suffix[k] = suffix[k + 1] * f
    c0 = _ipow(q, -n)
    c1 = a * b * c * d * _ipow(q, n - 1)
    for k in range(n):
        ratio[k] = q / (1.0 - qpow[k + 1]) * (1.0 - c0 * qpow[k]) * (1.0 - c1 * qpow[k])
    an = _ipow(a, n)
    for i in range(zv.shape[0]):
        az = a * zv[i]
        a_z = a / zv[i]
        total = 0.0
        head = 1.0
        for k in range(n + 1):
            total += head * suffix[k]
            if k == n:
                break
            head *= ratio[k] * (1.0 - az * qpow[k]) * (1.0 - a_z * qpow[k])
        ov[i] = total / an
    return out.reshape(zarr.shape)


def qpoch_inf_array(a, double complex q, double eps, int max_terms):
    aarr = np.ascontiguousarray(a, dtype=complex)
    flat = aarr.reshape(-1)
    out = np.empty_like(flat)
    cdef double complex[:] av = flat
    cdef double complex[:] ov = out
    cdef Py_ssize_t i
    cdef int k
    cdef double complex t, acc
    for i in range(av.shape[0]):
        acc = 1.0
        t = av[i]
        for k in range(max_terms):
            if t.real * t.real + t.imag * t.imag < eps * eps:
                break
            acc *= 1.0 - t
            t *= q
        ov[i] = acc
    return out.reshape(aarr.shape)
