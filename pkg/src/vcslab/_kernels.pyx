# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled accumulation kernels (Neumaier-compensated sums)."""
import numpy as np

from libc.math cimport fabs


cdef inline void _neumaier(double* s, double* c, double x) noexcept nogil:
    cdef double t = s[0] + x
    if fabs(s[0]) >= fabs(x):
        c[0] += (s[0] - t) + x
    else:
        c[0] += (x - t) + s[0]
    s[0] = t


def weighted_sum(const double[::1] re, const double[::1] im, const double[::1] w):
    """Compensated sum of (re + i im) * w; returns (real, imag)."""
    cdef Py_ssize_t i, n = w.shape[0]
    cdef double sr = 0.0, cr = 0.0, si = 0.0, ci = 0.0
    if re.shape[0] != n or im.shape[0] != n:
        raise ValueError("length mismatch")
    with nogil:
        for i in range(n):
            _neumaier(&sr, &cr, re[i] * w[i])
            _neumaier(&si, &ci, im[i] * w[i])
    return sr + cr, si + ci


def frame_accumulate(const double complex[:, :, ::1] g, const double[::1] w):
    """Compensated sum over nodes of w * G G^H for G of shape (nodes, D, Q).

    Only the upper triangle is accumulated; the lower one is its conjugate.
    """
    cdef Py_ssize_t nodes = g.shape[0], d = g.shape[1], nq = g.shape[2]
    cdef Py_ssize_t k, i, j, q
    cdef double complex x, y
    cdef double xr, xi, wk
    if w.shape[0] != nodes:
        raise ValueError("weight length mismatch")
    sr_np = np.zeros((d, d))
    cr_np = np.zeros((d, d))
    si_np = np.zeros((d, d))
    ci_np = np.zeros((d, d))
    cdef double[:, ::1] sr = sr_np, cr = cr_np, si = si_np, ci = ci_np
    with nogil:
        for k in range(nodes):
            wk = w[k]
            for i in range(d):
                for j in range(i, d):
                    xr = 0.0
                    xi = 0.0
                    for q in range(nq):
                        x = g[k, i, q]
                        y = g[k, j, q]
                        # x * conj(y)
                        xr = xr + x.real * y.real + x.imag * y.imag
                        xi = xi + x.imag * y.real - x.real * y.imag
                    _neumaier(&sr[i, j], &cr[i, j], wk * xr)
                    _neumaier(&si[i, j], &ci[i, j], wk * xi)
    out = (sr_np + cr_np) + 1j * (si_np + ci_np)
    upper = np.triu(out)
    return upper + np.triu(out, 1).conj().T
