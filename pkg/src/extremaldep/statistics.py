"""Tail statistics on an ordered tail and the penalised cone fit."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Cone, OrderedTail, ParameterError, cone_distance, g_transform

DEFAULT_LAMBDA = 4.0
DEFAULT_GRID_STEP = 0.01


class DegenerateWeightsError(ArithmeticError):
    """The weights of a T statistic sum to zero."""


@dataclass(frozen=True)
class ConeFit:
    cone: Cone
    objective: float
    lam: float
    grid_step: float
    k: int

    @property
    def width(self) -> float:
        return self.cone.b - self.cone.a


def d_stat(tail: OrderedTail, cone: Cone) -> float:
    """Hill mean with each log-excess inflated by the point's distance to the cone.

    ``(1/k) sum (1 + d(Z*_i, C) / R_(k)) log(R_(i) / R_(k))``.
    """
    logs = tail.log_ratios()
    dist = cone_distance(tail.radii, tail.concomitants, cone)
    # a zero log-excess zeroes its term even at infinite distance (b = 0 cone)
    with np.errstate(invalid="ignore"):
        terms = np.where(logs > 0, (1.0 + dist / tail.radii[-1]) * logs, 0.0)
    return float(np.mean(terms))


def t_stat(tail: OrderedTail, weight: str = "identity") -> float:
    """Angle-weighted mean log-excess.

    ``weight="identity"`` weights by the angle itself, ``weight="g"`` by
    the tent transform of the angle.
    """
    if weight == "identity":
        w = tail.concomitants
    elif weight == "g":
        w = g_transform(tail.concomitants)
    else:
        raise ParameterError(f"unknown weight {weight!r}")
    total = float(np.sum(w))
    if not total > 0:
        raise DegenerateWeightsError("T statistic weights sum to zero")
    return float(np.sum(w * tail.log_ratios()) / total)


def cone_grid(grid_step: float) -> np.ndarray:
    """Grid ``{step, 2 step, ..., 1}`` used for both cone endpoints."""
    if not 0 < grid_step <= 1:
        raise ParameterError("grid_step must be in (0, 1]")
    n = 1.0 / grid_step
    if abs(n - round(n)) < 1e-9:
        n = int(round(n))
        return np.arange(1, n + 1) / n
    grid = np.arange(1, int(math.floor(n)) + 1) * grid_step
    return np.append(grid, 1.0)


def cone_objective(tail: OrderedTail, cone: Cone, inv_alpha_hat: float, lam: float) -> float:
    """Width plus ``lam * sqrt(k) * |D - 1/alpha_hat|`` at one cone."""
    return (cone.b - cone.a) + lam * math.sqrt(tail.k) * abs(d_stat(tail, cone) - inv_alpha_hat)


def fit_cone(
    tail: OrderedTail,
    inv_alpha_hat: float,
    lam: float = DEFAULT_LAMBDA,
    grid_step: float = DEFAULT_GRID_STEP,
) -> ConeFit:
    """Exhaustive grid search for the penalised cone ``(a_hat, b_hat)``.

    D splits into a part depending only on ``b`` (points above the cone)
    and one depending only on ``a`` (points below it), so the whole grid is
    evaluated from two ``len(grid) x k`` tables. Ties go to the narrower
    cone, then to the smaller ``a``.
    """
    if lam < 0:
        raise ParameterError("lambda must be nonnegative")
    grid = cone_grid(grid_step)
    logs = tail.log_ratios()
    k = tail.k
    weights = (tail.radii / tail.radii[-1]) * logs
    th = tail.concomitants[None, :]
    above = np.maximum(th / grid[:, None] - 1.0, 0.0) @ weights / k
    below = np.maximum(1.0 - th / grid[:, None], 0.0) @ weights / k
    hill = float(np.mean(logs))

    excess = hill + below[:, None] + above[None, :] - inv_alpha_hat
    width = grid[None, :] - grid[:, None]
    obj = width + lam * math.sqrt(k) * np.abs(excess)
    ia, ib = np.indices(obj.shape)
    obj[ib < ia] = np.inf

    best = obj.min()
    cand_a, cand_b = np.nonzero(obj == best)
    pick = np.lexsort((cand_a, np.round(grid[cand_b] - grid[cand_a], 12)))[0]
    cone = Cone(float(grid[cand_a[pick]]), float(grid[cand_b[pick]]))
    return ConeFit(cone, cone_objective(tail, cone, inv_alpha_hat, lam), lam, grid_step, k)
