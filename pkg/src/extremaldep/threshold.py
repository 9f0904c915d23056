"""Choosing the number of upper order statistics.

The raw choice minimises a Kolmogorov-Smirnov distance between the top-k
sample and a Pareto law fitted by Hill; the capped choice then pins it into
a band suited to samples of roughly 800 observations.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .core import OrderedTail, ParameterError, top_order_statistics

CAP_BASE = 80
CAP_SPAN = 40
DEFAULT_K_MIN = 10


@dataclass(frozen=True)
class ThresholdSelection:
    k_star: int
    k_used: int
    ks_distance_at_star: float


def ks_distance(tail, alpha: float | None = None) -> float:
    """KS distance of a tail to its fitted Pareto law.

    With ``F(x) = 1 - (x / R_(k)) ** -alpha`` the distance is the largest
    gap between ``F(R_(i))`` and either step height ``(k-i)/k`` or
    ``(k-i+1)/k`` of the empirical tail CDF. ``alpha`` defaults to the Hill
    estimate on the same tail. A tail whose radii are all equal gets 1.
    """
    radii = tail.radii if isinstance(tail, OrderedTail) else np.asarray(tail, dtype=np.float64)
    k = radii.shape[0]
    if k < 2:
        raise ParameterError("ks_distance needs k >= 2")
    ratio = radii / radii[-1]
    if alpha is None:
        h = float(np.mean(np.log(ratio)))
        if not h > 0:
            return 1.0
        alpha = 1.0 / h
    fitted = 1.0 - ratio ** (-alpha)
    i = np.arange(1, k + 1)
    gaps = np.maximum(np.abs((k - i) / k - fitted), np.abs((k - i + 1) / k - fitted))
    return float(gaps.max())


def ks_profile(values, k_min: int, k_max: int) -> np.ndarray:
    """KS distances for every ``k`` in ``[k_min, k_max]`` on a positive sample."""
    v = np.asarray(values, dtype=np.float64)
    if not 2 <= k_min <= k_max <= v.shape[0]:
        raise ParameterError(
            f"need 2 <= k_min <= k_max <= n, got k_min={k_min}, k_max={k_max}, n={v.shape[0]}"
        )
    radii = top_order_statistics(v, k_max)
    return _backend.ks_scan(radii, k_min, k_max)


def min_distance_k(values, k_min: int = DEFAULT_K_MIN, k_max: int | None = None) -> tuple[int, float]:
    """Minimum-distance choice ``(k_star, distance)``; ties go to the smaller k."""
    v = np.asarray(values, dtype=np.float64)
    if k_max is None:
        k_max = v.shape[0] // 2
    dist = ks_profile(v, k_min, k_max)
    j = int(np.argmin(dist))  # first minimum, i.e. smallest k
    return k_min + j, float(dist[j])


def capped_k(k_star: int, base: int = CAP_BASE, span: int = CAP_SPAN) -> int:
    """``base + min(span, max(k_star - base, 0))``."""
    if k_star < 1:
        raise ParameterError("k_star must be positive")
    return base + min(span, max(k_star - base, 0))


def select_threshold(
    values,
    k_min: int = DEFAULT_K_MIN,
    k_max: int | None = None,
    base: int = CAP_BASE,
    span: int = CAP_SPAN,
) -> ThresholdSelection:
    """Minimum-distance k followed by the cap.

    Only strictly positive values enter (zero returns carry no tail
    information). The capped value is clipped to the sample size so tiny
    samples still produce a usable k.
    """
    v = np.asarray(values, dtype=np.float64)
    v = v[v > 0]
    n = v.shape[0]
    if k_max is None:
        k_max = n // 2
    k_max = min(k_max, n)
    k_min = min(k_min, k_max)
    k_star, dist = min_distance_k(v, k_min, k_max)
    k_used = min(capped_k(k_star, base, span), n)
    return ThresholdSelection(k_star, k_used, dist)
