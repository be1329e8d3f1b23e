"""Backend selection and the chunked, threaded driver for the hot kernels.

The compiled extension is used when importable; ``OSCINT_BACKEND=python``
forces the numpy fallback. Work is cut into chunks of a fixed size that does
not depend on the thread count, and each chunk writes to its own slot, so the
output is bit-identical for any number of threads.
"""
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _fallback

try:
    from . import _kernels as _compiled
except ImportError:  # pragma: no cover - depends on the build
    _compiled = None

ROW_CHUNK = 16
POINT_CHUNK = 256

_threads = None


def _pick_backend(name=None):
    name = name or os.environ.get("OSCINT_BACKEND", "auto")
    if name == "python" or _compiled is None:
        return "python", _fallback
    if name not in ("auto", "compiled"):
        raise ValueError(f"unknown backend {name!r}")
    return "compiled", _compiled


BACKEND, _impl = _pick_backend()


def use_backend(name):
    """Switch backend at runtime ('compiled', 'python' or 'auto')."""
    global BACKEND, _impl
    if name == "compiled" and _compiled is None:
        raise RuntimeError("compiled extension is not built")
    BACKEND, _impl = _pick_backend(name)
    return BACKEND


def has_compiled():
    return _compiled is not None


def set_threads(n):
    global _threads
    if n is not None and n < 1:
        raise ValueError("thread count must be >= 1")
    _threads = n


def get_threads():
    if _threads is not None:
        return _threads
    env = os.environ.get("OSCINT_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _run_chunks(fn, n_chunks):
    threads = min(get_threads(), n_chunks)
    if threads <= 1:
        return [fn(c) for c in range(n_chunks)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(n_chunks)))


def separable_sum(a, b):
    """Complex ``a @ b`` with k-ordered accumulation; a is (nx, N), b is (N, ny)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    nx = a.shape[0]
    b_re = np.ascontiguousarray(b.real)
    b_im = np.ascontiguousarray(b.imag)
    out = np.empty((nx, b.shape[1]), dtype=complex)
    n_chunks = max(1, -(-nx // ROW_CHUNK))

    def work(c):
        sl = slice(c * ROW_CHUNK, min(nx, (c + 1) * ROW_CHUNK))
        re, im = _impl.separable_sum(
            np.ascontiguousarray(a[sl].real), np.ascontiguousarray(a[sl].imag), b_re, b_im
        )
        out[sl] = re + 1j * im

    if nx:
        _run_chunks(work, n_chunks)
    return out


def phase_sum(lin, quad, t, c):
    """sum_k c[k] exp(i (lin t_k + quad t_k^2)) for every entry of lin/quad."""
    lin = np.asarray(lin, dtype=float)
    shape = lin.shape
    lin = np.ascontiguousarray(lin.ravel())
    quad = np.ascontiguousarray(np.broadcast_to(np.asarray(quad, dtype=float), shape).ravel())
    t = np.ascontiguousarray(t, dtype=float)
    c = np.asarray(c, dtype=complex)
    c_re = np.ascontiguousarray(c.real)
    c_im = np.ascontiguousarray(c.imag)
    n = lin.shape[0]
    out = np.empty(n, dtype=complex)
    n_chunks = max(1, -(-n // POINT_CHUNK))

    def work(ci):
        sl = slice(ci * POINT_CHUNK, min(n, (ci + 1) * POINT_CHUNK))
        re, im = _impl.phase_sum(lin[sl], quad[sl], t, c_re, c_im)
        out[sl] = re + 1j * im

    if n:
        _run_chunks(work, n_chunks)
    return out.reshape(shape)
