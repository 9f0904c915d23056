"""Numpy implementations of the hot kernels.

Semantics are identical to ``_kernels.pyx``; this module is used when the
compiled extension is unavailable or ``EXTREMALDEP_BACKEND=python`` is set.
"""
import numpy as np


def bootstrap_statistics(r, theta, idx, k, a, b):
    """D, T and T(g) for every resample row of ``idx``.

    Parameters
    ----------
    r, theta : ndarray, shape (n,)
        Source sample in polar form.
    idx : ndarray of int64, shape (B, m)
        Row ``i`` holds the draw indices of resample ``i`` in draw order.
    k : int
        Number of upper order statistics used inside each resample.
    a, b : float
        Cone used by the D statistic.

    Returns
    -------
    d, t, tg : ndarray, shape (B,)
    t_ok : ndarray of bool, shape (B,)
        False where the identity-weighted T has a zero denominator; ``t`` is
        NaN there.
    """
    rr = r[idx]
    tt = theta[idx]
    order = np.argsort(-rr, axis=1, kind="stable")[:, :k]
    top_r = np.take_along_axis(rr, order, axis=1)
    top_t = np.take_along_axis(tt, order, axis=1)
    rk = top_r[:, -1:]
    logs = np.log(top_r / rk)

    if b > 0:
        upper = np.maximum(top_t / b - 1.0, 0.0)
    else:
        upper = np.where(top_t > 0, np.inf, 0.0)
    if a > 0:
        lower = np.maximum(1.0 - top_t / a, 0.0)
    else:
        lower = 0.0
    dist = top_r * (upper + lower)
    with np.errstate(invalid="ignore"):
        d = np.sum(np.where(logs > 0, (1.0 + dist / rk) * logs, 0.0), axis=1) / k

    wsum = np.sum(top_t, axis=1)
    t_ok = wsum > 0
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(t_ok, np.sum(top_t * logs, axis=1) / wsum, np.nan)

    g = np.where(top_t < 0.5, 1.0 - 2.0 * top_t, 3.0 - 2.0 * top_t)
    tg = np.sum(g * logs, axis=1) / np.sum(g, axis=1)
    return d, t, tg, t_ok


def _ks_one(radii, k):
    tail = radii[:k]
    ratio = tail / tail[-1]
    h = np.sum(np.log(ratio)) / k
    if not h > 0:
        return 1.0
    fitted = 1.0 - ratio ** (-1.0 / h)
    i = np.arange(1, k + 1)
    lo = np.abs((k - i) / k - fitted)
    hi = np.abs((k - i + 1) / k - fitted)
    return float(max(lo.max(), hi.max()))


def ks_scan(radii, k_min, k_max):
    """KS distance between each candidate tail and its fitted Pareto law.

    ``radii`` must be sorted in non-increasing order. Entry ``j`` of the
    result belongs to ``k = k_min + j``.
    """
    radii = np.ascontiguousarray(radii, dtype=np.float64)
    return np.array([_ks_one(radii, k) for k in range(k_min, k_max + 1)])
