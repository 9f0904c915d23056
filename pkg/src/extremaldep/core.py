"""Polar coordinates, order statistics and the Hill estimator.

Everything here is a pure function of its arguments. Samples are carried as
numpy arrays; the small record types exist so that the scalar operations
have an obvious return value and so downstream code can pass a tail around
as one object.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class ParameterError(ValueError):
    """An argument is outside the domain an operation accepts."""


class DegenerateTailError(ArithmeticError):
    """The tail carries no spread (all radii equal), so no index can be fitted."""


class BivariateObservation(NamedTuple):
    x: float
    y: float


class PolarObservation(NamedTuple):
    r: float
    theta: float


class Degenerate(NamedTuple):
    """Marker for a zero-radius observation; its angle is undefined."""

    r: float = 0.0


@dataclass(frozen=True)
class Cone:
    """Angular interval ``[a, b]`` inside ``[0, 1]``."""

    a: float
    b: float

    def __post_init__(self):
        if not (0.0 <= self.a <= self.b <= 1.0):
            raise ParameterError(f"cone needs 0 <= a <= b <= 1, got [{self.a}, {self.b}]")

    @property
    def width(self) -> float:
        return self.b - self.a


FULL_QUADRANT = Cone(0.0, 1.0)


@dataclass(frozen=True)
class PolarSample:
    """Radii and angles of a bivariate sample, zero radii already removed."""

    r: np.ndarray
    theta: np.ndarray

    def __len__(self):
        return self.r.shape[0]

    def scaled(self, c: float) -> "PolarSample":
        return PolarSample(self.r * c, self.theta)


@dataclass(frozen=True)
class OrderedTail:
    """The ``k`` largest radii (descending) with their angular concomitants."""

    radii: np.ndarray
    concomitants: np.ndarray
    n: int

    @property
    def k(self) -> int:
        return self.radii.shape[0]

    def log_ratios(self) -> np.ndarray:
        return np.log(self.radii / self.radii[-1])


@dataclass(frozen=True)
class TailIndexEstimate:
    alpha_hat: float
    k_used: int

    @property
    def inv_alpha_hat(self) -> float:
        return 1.0 / self.alpha_hat


def to_polar(obs) -> PolarObservation | Degenerate:
    """L1 polar transform of one nonnegative pair.

    Returns ``Degenerate()`` when both coordinates are zero.
    """
    x, y = float(obs[0]), float(obs[1])
    if not (np.isfinite(x) and np.isfinite(y)) or x < 0 or y < 0:
        raise ParameterError(f"observation must be finite and nonnegative, got ({x}, {y})")
    r = x + y
    if r == 0.0:
        return Degenerate()
    return PolarObservation(r, x / r)


def polar_transform(x, y) -> PolarSample:
    """Vectorised :func:`to_polar`; zero-radius rows are dropped."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ParameterError("x and y must be 1-d arrays of equal length")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ParameterError("observations must be finite")
    if np.any(x < 0) or np.any(y < 0):
        raise ParameterError("observations must be nonnegative")
    r = x + y
    keep = r > 0
    x, r = x[keep], r[keep]
    return PolarSample(r, x / r)


def g_transform(theta):
    """Tent map sending the axes ``theta in {0, 1}`` to 1; range ``(0, 2]``."""
    t = np.asarray(theta, dtype=np.float64)
    if np.any((t < 0) | (t > 1)) or np.any(np.isnan(t)):
        raise ParameterError("theta must lie in [0, 1]")
    out = np.where(t < 0.5, 1.0 - 2.0 * t, 3.0 - 2.0 * t)
    return float(out) if out.ndim == 0 else out


def cone_distance(r, theta, cone: Cone):
    """Distance of polar points to the cone ``{a <= theta <= b}``.

    ``r * ((theta/b - 1)_+ + (1 - theta/a)_+)``. The second term is 0 when
    ``a == 0``. For ``b == 0`` the first term is ``+inf`` unless ``theta == 0``.
    Accepts scalars or arrays.
    """
    r = np.asarray(r, dtype=np.float64)
    theta = np.asarray(theta, dtype=np.float64)
    a, b = cone.a, cone.b
    with np.errstate(over="ignore"):
        if b > 0:
            upper = np.maximum(theta / b - 1.0, 0.0)
        else:
            upper = np.where(theta > 0, np.inf, 0.0)
        if a > 0:
            lower = np.maximum(1.0 - theta / a, 0.0)
        else:
            lower = np.zeros_like(theta)
        out = r * (upper + lower)
    return float(out) if out.ndim == 0 else out


def cone_distance_cartesian(x, y, cone: Cone):
    """Same distance evaluated directly on ``(x, y)``; needs ``b > 0``."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    a, b = cone.a, cone.b
    if b <= 0:
        raise ParameterError("cartesian form needs b > 0")
    upper = np.maximum((1.0 / b - 1.0) * x - y, 0.0)
    if a > 0:
        lower = np.maximum(y - (1.0 / a - 1.0) * x, 0.0)
    else:
        lower = np.zeros_like(x)
    out = upper + lower
    return float(out) if out.ndim == 0 else out


def order_tail(sample: PolarSample, k: int) -> OrderedTail:
    """Select the ``k`` largest radii with their concomitant angles.

    Equal radii keep their original sample order, so concomitant assignment
    is reproducible.
    """
    n = len(sample)
    if not 1 <= k <= n:
        raise ParameterError(f"k must be in [1, {n}], got {k}")
    order = np.argsort(-sample.r, kind="stable")[:k]
    return OrderedTail(sample.r[order], sample.theta[order], n)


def top_order_statistics(values, k: int) -> np.ndarray:
    """The ``k`` largest entries of ``values`` in non-increasing order."""
    v = np.asarray(values, dtype=np.float64)
    if not 1 <= k <= v.shape[0]:
        raise ParameterError(f"k must be in [1, {v.shape[0]}], got {k}")
    return -np.sort(-v, kind="stable")[:k]


def hill_log_mean(tail) -> float:
    """Mean log-excess ``(1/k) sum log(R_(i) / R_(k))`` over the tail.

    ``tail`` is an :class:`OrderedTail` or an array of radii already sorted
    in non-increasing order.
    """
    radii = tail.radii if isinstance(tail, OrderedTail) else np.asarray(tail, dtype=np.float64)
    if radii.shape[0] < 1 or radii[-1] <= 0:
        raise ParameterError("tail needs at least one positive radius")
    return float(np.mean(np.log(radii / radii[-1])))


def hill_alpha(tail) -> float:
    """Hill estimate of the tail index (reciprocal of :func:`hill_log_mean`)."""
    h = hill_log_mean(tail)
    if h <= 0:
        raise DegenerateTailError("all tail radii are equal")
    return 1.0 / h


def hill_estimate(values, k: int) -> TailIndexEstimate:
    """Hill tail index of a positive sample using its ``k`` largest values."""
    return TailIndexEstimate(hill_alpha(top_order_statistics(values, k)), k)


def power_transform(series, alpha_source: float, alpha_target: float) -> np.ndarray:
    """Map ``x -> x ** (alpha_source / alpha_target)``.

    A series with tail index ``alpha_source`` comes out with tail index
    ``alpha_target``.
    """
    if not (alpha_source > 0 and alpha_target > 0):
        raise ParameterError("tail indices must be positive")
    x = np.asarray(series, dtype=np.float64)
    if np.any(x < 0):
        raise ParameterError("series must be nonnegative")
    if alpha_source == alpha_target:
        return x.copy()
    return x ** (alpha_source / alpha_target)
