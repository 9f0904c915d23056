"""m-out-of-n bootstrap of the tail statistics and the three decision rules.

Random numbers come from Philox, a counter-based generator. A resample's
draws are the Philox outputs in the counter block reserved for it, so each
resample depends only on ``(seed, resample index)`` and the results do not
change with execution order or worker count.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _backend
from .core import FULL_QUADRANT, Cone, ParameterError, PolarSample
from .special import chi2_quantile, normal_quantile

DEFAULT_B = 200
DEFAULT_Z = 1.96
DEFAULT_CHI2_LEVEL = 0.95
DEFAULT_REJECT_FRACTION = 0.05
BONFERRONI_ALPHA = 0.025
MAX_FAILED_FRACTION = 0.1

KINDS = ("D", "T", "T_g")


class InvalidRunError(RuntimeError):
    """Too many resamples were unusable for the requested statistic."""


def derive_seed(*keys: int) -> int:
    """Stable 64-bit seed from a sequence of nonnegative integers."""
    return int(np.random.SeedSequence([int(k) for k in keys]).generate_state(1, np.uint64)[0])


def make_stream(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))


def bootstrap_size(n: int, k: int) -> int:
    """Resample size ``ceil(6 n / k)``, never larger than ``n``."""
    if not 1 <= k <= n:
        raise ParameterError(f"need 1 <= k <= n, got k={k}, n={n}")
    return min(-(-6 * n // k), n)


def bootstrap_tail_size(m: int) -> int:
    """Tail size inside a resample, ``ceil(2 m ** 0.4)``, never larger than ``m``."""
    if m < 1:
        raise ParameterError("m must be positive")
    return min(math.ceil(2.0 * m**0.4), m)


@dataclass(frozen=True)
class BootstrapConfig:
    """Resampling and test settings for one bootstrap run.

    ``seed`` keys the Philox stream; everything else is fixed by the sample
    size and the chosen tail size (see :meth:`for_sample`).
    """

    B: int
    m: int
    k_m: int
    z_crit: float = DEFAULT_Z
    chi2_level: float = DEFAULT_CHI2_LEVEL
    reject_fraction: float = DEFAULT_REJECT_FRACTION
    seed: int = 0

    def __post_init__(self):
        if self.B < 2:
            raise ParameterError("B must be at least 2")
        if not 1 <= self.k_m <= self.m:
            raise ParameterError(f"need 1 <= k_m <= m, got k_m={self.k_m}, m={self.m}")
        if not 0 < self.chi2_level < 1 or not 0 < self.reject_fraction < 1:
            raise ParameterError("levels must lie in (0, 1)")

    @classmethod
    def for_sample(cls, n, k, B=DEFAULT_B, seed=0, bonferroni=False, **overrides):
        """Defaults for a sample of size ``n`` whose tail uses ``k`` points.

        ``bonferroni=True`` runs both the band test and the variance tests
        at level 0.025 instead of the default 0.05.
        """
        m = bootstrap_size(n, k)
        kw = dict(B=B, m=m, k_m=bootstrap_tail_size(m), seed=seed)
        if bonferroni:
            kw.update(
                z_crit=normal_quantile(1.0 - BONFERRONI_ALPHA / 2.0),
                chi2_level=1.0 - BONFERRONI_ALPHA,
            )
        kw.update(overrides)
        return cls(**kw)

    def with_seed(self, seed: int) -> "BootstrapConfig":
        return BootstrapConfig(
            self.B, self.m, self.k_m, self.z_crit, self.chi2_level, self.reject_fraction, seed
        )


@dataclass(frozen=True)
class BootstrapDraws:
    values: np.ndarray
    kind: str
    failed: int = 0

    @property
    def B(self) -> int:
        return self.values.shape[0] + self.failed


@dataclass(frozen=True)
class BootstrapBatch:
    """All three statistics computed on one common set of ``B`` resamples."""

    d: np.ndarray
    t: np.ndarray
    tg: np.ndarray
    t_ok: np.ndarray

    def draws(self, kind: str) -> BootstrapDraws:
        if kind == "D":
            return BootstrapDraws(self.d, "D")
        if kind == "T_g":
            return BootstrapDraws(self.tg, "T_g")
        if kind != "T":
            raise ParameterError(f"unknown statistic {kind!r}")
        failed = int(np.count_nonzero(~self.t_ok))
        if failed > MAX_FAILED_FRACTION * self.t.shape[0]:
            raise InvalidRunError(
                f"{failed} of {self.t.shape[0]} resamples had zero T weights"
            )
        return BootstrapDraws(self.t[self.t_ok], "T", failed)


def resample_indices(n: int, m: int, B: int, stream: np.random.Generator) -> np.ndarray:
    """``(B, m)`` uniform draw indices into a sample of size ``n``.

    Each index uses exactly one 64-bit output of the stream, so row ``i``
    occupies a fixed block of the counter sequence.
    """
    u = stream.random((B, m))
    return np.minimum((u * n).astype(np.int64), n - 1)


def resample(sample: PolarSample, m: int, stream: np.random.Generator) -> PolarSample:
    """Draw ``m`` observations uniformly with replacement, in draw order."""
    n = len(sample)
    if n == 0:
        raise ParameterError("cannot resample an empty sample")
    idx = resample_indices(n, m, 1, stream)[0]
    return PolarSample(sample.r[idx], sample.theta[idx])


def bootstrap_batch(sample: PolarSample, cfg: BootstrapConfig, cone: Cone = FULL_QUADRANT) -> BootstrapBatch:
    """Draw ``cfg.B`` resamples and evaluate D (for ``cone``), T and T(g) on each."""
    n = len(sample)
    if n == 0:
        raise ParameterError("empty sample")
    if cfg.m > n:
        raise ParameterError(f"resample size m={cfg.m} exceeds sample size {n}")
    idx = resample_indices(n, cfg.m, cfg.B, make_stream(cfg.seed))
    r = np.ascontiguousarray(sample.r, dtype=np.float64)
    th = np.ascontiguousarray(sample.theta, dtype=np.float64)
    d, t, tg, ok = _backend.bootstrap_statistics(r, th, idx, cfg.k_m, cone.a, cone.b)
    return BootstrapBatch(d, t, tg, ok)


def bootstrap_draws(sample: PolarSample, cfg: BootstrapConfig, cone: Cone | None, kind: str) -> BootstrapDraws:
    """Bootstrap distribution of one statistic.

    ``cone`` is required for ``kind="D"`` and ignored otherwise. Calls with
    the same config share their resamples, as the decision cascade expects.
    """
    if kind not in KINDS:
        raise ParameterError(f"unknown statistic {kind!r}")
    if kind == "D" and cone is None:
        raise ParameterError("the D statistic needs a cone")
    return bootstrap_batch(sample, cfg, cone or FULL_QUADRANT).draws(kind)


def band_half_width(inv_alpha_hat: float, cfg: BootstrapConfig) -> float:
    return cfg.z_crit * inv_alpha_hat / math.sqrt(cfg.k_m)


def exceedance_count(draws: BootstrapDraws, inv_alpha_hat: float, cfg: BootstrapConfig) -> int:
    return int(np.count_nonzero(np.abs(draws.values - inv_alpha_hat) > band_half_width(inv_alpha_hat, cfg)))


def decide_strong(draws: BootstrapDraws, inv_alpha_hat: float, cfg: BootstrapConfig) -> bool:
    """Band test for ``S([a_hat, b_hat]) = 1``; True means reject.

    Rejects when at least ``reject_fraction * B`` bootstrap D values fall
    outside ``1/alpha_hat +- z * (1/alpha_hat) / sqrt(k_m)``.
    """
    if draws.kind != "D":
        raise ParameterError("decide_strong needs D draws")
    needed = math.ceil(cfg.reject_fraction * cfg.B - 1e-9)
    return exceedance_count(draws, inv_alpha_hat, cfg) >= needed


@lru_cache(maxsize=64)
def variance_threshold(level: float, df: int) -> float:
    return chi2_quantile(level, df) / df


def variance_ratio(draws: BootstrapDraws, inv_alpha_hat: float, cfg: BootstrapConfig) -> float:
    """``k_m * S^2 / (1/alpha_hat)^2`` with ``S^2`` the unbiased variance."""
    if draws.values.shape[0] < 2:
        raise InvalidRunError("need at least two bootstrap values")
    return cfg.k_m * float(np.var(draws.values, ddof=1)) / inv_alpha_hat**2


def decide_variance(draws: BootstrapDraws, inv_alpha_hat: float, cfg: BootstrapConfig) -> bool:
    """Chi-square variance test on T or T(g) draws; True means reject."""
    if draws.kind not in ("T", "T_g"):
        raise ParameterError("decide_variance needs T or T_g draws")
    ratio = variance_ratio(draws, inv_alpha_hat, cfg)
    return ratio > variance_threshold(cfg.chi2_level, draws.values.shape[0] - 1)
