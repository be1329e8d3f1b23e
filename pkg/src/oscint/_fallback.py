"""Pure numpy versions of the compiled kernels.

Same signatures and the same k-ordered accumulation as ``_kernels.pyx``, so
results are chunk-independent here too.
"""
import numpy as np


def separable_sum(a_re, a_im, b_re, b_im):
    nx, nk = a_re.shape
    if b_re.shape[0] != nk:
        raise ValueError("inner dimensions differ")
    ny = b_re.shape[1]
    out_re = np.zeros((nx, ny))
    out_im = np.zeros((nx, ny))
    for k in range(nk):
        ar = a_re[:, k, None]
        ai = a_im[:, k, None]
        br = b_re[k]
        bi = b_im[k]
        out_re += ar * br - ai * bi
        out_im += ar * bi + ai * br
    return out_re, out_im


def phase_sum(lin, quad, t, c_re, c_im):
    out_re = np.zeros(lin.shape[0])
    out_im = np.zeros(lin.shape[0])
    for k in range(t.shape[0]):
        tk = t[k]
        th = lin * tk + quad * tk * tk
        cs = np.cos(th)
        sn = np.sin(th)
        out_re += c_re[k] * cs - c_im[k] * sn
        out_im += c_re[k] * sn + c_im[k] * cs
    return out_re, out_im
