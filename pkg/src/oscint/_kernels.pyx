# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for oscillatory sums.

Both kernels accumulate over the quadrature axis strictly in index order, so
every output entry is a function of its own inputs only. Chunking the output
across threads therefore cannot change a single bit.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos

cnp.import_array()


def separable_sum(const double[:, ::1] a_re, const double[:, ::1] a_im,
                  const double[:, ::1] b_re, const double[:, ::1] b_im):
    """out[i, j] = sum_k a[i, k] * b[k, j] with a fixed k-order."""
    cdef Py_ssize_t nx = a_re.shape[0], nk = a_re.shape[1], ny = b_re.shape[1]
    if b_re.shape[0] != nk:
        raise ValueError("inner dimensions differ")
    out_re_arr = np.zeros((nx, ny), dtype=np.float64)
    out_im_arr = np.zeros((nx, ny), dtype=np.float64)
    cdef double[:, ::1] out_re = out_re_arr
    cdef double[:, ::1] out_im = out_im_arr
    cdef Py_ssize_t i, j, k
    cdef double ar, ai, br, bi
    with nogil:
        for i in range(nx):
            for k in range(nk):
                ar = a_re[i, k]
                ai = a_im[i, k]
                for j in range(ny):
                    br = b_re[k, j]
                    bi = b_im[k, j]
                    out_re[i, j] += ar * br - ai * bi
                    out_im[i, j] += ar * bi + ai * br
    return out_re_arr, out_im_arr


def phase_sum(const double[::1] lin, const double[::1] quad,
              const double[::1] t, const double[::1] c_re, const double[::1] c_im):
    """out[n] = sum_k c[k] * exp(i * (lin[n] * t[k] + quad[n] * t[k]**2))."""
    cdef Py_ssize_t n_pts = lin.shape[0], nk = t.shape[0]
    out_re_arr = np.zeros(n_pts, dtype=np.float64)
    out_im_arr = np.zeros(n_pts, dtype=np.float64)
    cdef double[::1] out_re = out_re_arr
    cdef double[::1] out_im = out_im_arr
    cdef Py_ssize_t n, k
    cdef double th, cs, sn, sr, si, tk
    with nogil:
        for n in range(n_pts):
            sr = 0.0
            si = 0.0
            for k in range(nk):
                tk = t[k]
                th = lin[n] * tk + quad[n] * tk * tk
                cs = cos(th)
                sn = sin(th)
                sr = sr + (c_re[k] * cs - c_im[k] * sn)
                si = si + (c_re[k] * sn + c_im[k] * cs)
            out_re[n] = sr
            out_im[n] = si
    return out_re_arr, out_im_arr
