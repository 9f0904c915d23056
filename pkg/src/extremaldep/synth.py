"""Heavy-tailed bivariate samples with a known extremal dependence class."""
from __future__ import annotations

import datetime as dt
from dataclasses import dataclass

import numpy as np

from .classifier import DependenceClass
from .core import ParameterError

CLASS_NAMES = {
    "full": DependenceClass.FULL,
    "strong": DependenceClass.STRONG,
    "weak": DependenceClass.WEAK,
    "indep": DependenceClass.INDEPENDENCE,
}


@dataclass(frozen=True)
class ClassSpec:
    """Generator settings.

    ``theta0`` is used by the full class, ``interval`` by the strong class
    and ``angular`` (``"uniform"`` or ``"beta22"``) by the weak class.
    """

    dep_class: DependenceClass
    alpha: float = 1.0
    theta0: float = 0.5
    interval: tuple[float, float] = (0.3, 0.7)
    angular: str = "uniform"

    def __post_init__(self):
        if not self.alpha > 0:
            raise ParameterError("alpha must be positive")
        if self.dep_class is DependenceClass.FULL and not 0 < self.theta0 < 1:
            raise ParameterError("theta0 must lie in (0, 1)")
        if self.dep_class is DependenceClass.STRONG:
            a, b = self.interval
            if not (0 < a <= b < 1 and b - a < 0.85):
                raise ParameterError("strong class needs 0 < a <= b < 1 and b - a < 0.85")
        if self.angular not in ("uniform", "beta22"):
            raise ParameterError(f"unknown angular law {self.angular!r}")


def pareto_from_uniform(u, alpha: float):
    """Inverse transform ``u ** (-1/alpha)``; ``u`` in (0, 1]."""
    return np.asarray(u, dtype=np.float64) ** (-1.0 / alpha)


def gen_pareto(alpha: float, n: int, stream: np.random.Generator) -> np.ndarray:
    """iid draws with survival function ``x ** -alpha`` on ``[1, inf)``."""
    if not alpha > 0 or n < 1:
        raise ParameterError("need alpha > 0 and n >= 1")
    return pareto_from_uniform(1.0 - stream.random(n), alpha)


def gen_class_sample(spec: ClassSpec, n: int, stream: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(x, y)`` arrays of length ``n`` realising ``spec``."""
    c = spec.dep_class
    if c is DependenceClass.INDEPENDENCE:
        return gen_pareto(spec.alpha, n, stream), gen_pareto(spec.alpha, n, stream)
    r = gen_pareto(spec.alpha, n, stream)
    if c is DependenceClass.FULL:
        theta = np.full(n, spec.theta0)
    elif c is DependenceClass.STRONG:
        a, b = spec.interval
        theta = a + (b - a) * stream.random(n)
    elif spec.angular == "beta22":
        theta = stream.beta(2.0, 2.0, n)
    else:
        theta = stream.random(n)
    return r * theta, r * (1.0 - theta)


def trading_days(start: dt.date, count: int) -> list[dt.date]:
    """``count`` consecutive weekdays starting at ``start``."""
    days = []
    d = start
    while len(days) < count:
        if d.weekday() < 5:
            days.append(d)
        d += dt.timedelta(days=1)
    return days


def prices_from_returns(abs_returns, stream, start_price=100.0, noise=0.002):
    """Daily price path whose even-indexed days reproduce ``abs_returns``.

    The sign of every retained log return is random; each odd day sits
    between its neighbours with a little extra noise, so subsampling at
    offset 0 recovers the magnitudes exactly (up to float rounding).
    """
    a = np.asarray(abs_returns, dtype=np.float64)
    signs = np.where(stream.random(a.shape[0]) < 0.5, -1.0, 1.0)
    log_p = np.log(start_price) + np.concatenate([[0.0], np.cumsum(signs * a)])
    mid = 0.5 * (log_p[:-1] + log_p[1:]) + noise * stream.standard_normal(a.shape[0])
    daily = np.empty(2 * a.shape[0] + 1)
    daily[0::2] = log_p
    daily[1::2] = mid
    return np.exp(daily)


def fixture_panel(n_returns: int = 822, seed: int = 7, scale: float = 0.01, alpha: float = 2.0):
    """Six-asset synthetic price panel with engineered pairwise structure.

    FA1/FA2 share one radius on the diagonal ray (full dependence), SB1/SB2
    split a common radius by an angle uniform on [0.3, 0.7] (strong
    dependence), IC1/IC2 are independent. Radii are Pareto shifted to start
    at 0, which keeps independent extremes close to the axes at this sample
    size. Returns a list of ``(asset_id, market, sector, dates, prices)``.
    """
    stream = np.random.Generator(np.random.Philox(seed))

    def radius():
        return gen_pareto(alpha, n_returns, stream) - 1.0

    r_full = radius()
    r_str = radius()
    theta = 0.3 + 0.4 * stream.random(n_returns)
    layout = [
        ("FA1", "SYN", "Alpha", 0.5 * r_full),
        ("FA2", "SYN", "Alpha", 0.5 * r_full),
        ("SB1", "SYN", "Beta", theta * r_str),
        ("SB2", "SYN", "Beta", (1.0 - theta) * r_str),
        ("IC1", "SYN", "Gamma", radius()),
        ("IC2", "SYN", "Gamma", radius()),
    ]
    days = trading_days(dt.date(2016, 1, 4), 2 * n_returns + 1)
    return [
        (asset, market, sector, days, prices_from_returns(scale * ret, stream))
        for asset, market, sector, ret in layout
    ]
