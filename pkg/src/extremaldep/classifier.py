"""Test cascade assigning one of four extremal dependence classes to a pair."""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field

import numpy as np

from .bootstrap import (
    DEFAULT_B,
    BootstrapConfig,
    InvalidRunError,
    bootstrap_batch,
    decide_strong,
    decide_variance,
    derive_seed,
)
from .core import ParameterError, PolarSample, TailIndexEstimate, hill_alpha, order_tail
from .statistics import DEFAULT_GRID_STEP, DEFAULT_LAMBDA, ConeFit, fit_cone

logger = logging.getLogger(__name__)

DEFAULT_PRECHECK = 0.85
DEFAULT_REPETITIONS = 50
MAX_FAILED_REPETITIONS = 0.2


class DependenceClass(enum.IntEnum):
    INDEPENDENCE = 0
    WEAK = 1
    STRONG = 2
    FULL = 3

    @property
    def label(self) -> str:
        return self.name.lower()


@dataclass(frozen=True)
class ClassifierSettings:
    lam: float = DEFAULT_LAMBDA
    grid_step: float = DEFAULT_GRID_STEP
    precheck_width: float = DEFAULT_PRECHECK
    B: int = DEFAULT_B
    repetitions: int = DEFAULT_REPETITIONS
    bonferroni: bool = False

    def __post_init__(self):
        if self.repetitions < 1:
            raise ParameterError("repetitions must be positive")


@dataclass(frozen=True)
class RepetitionOutcome:
    """One pass through the cascade.

    ``h1``/``h2``/``h3`` hold True for a rejected null, False for an accepted
    one and None when the test was not run.
    """

    dep_class: DependenceClass
    h1: bool | None
    h2: bool | None
    h3: bool | None
    precheck: bool


@dataclass(frozen=True)
class DependenceVector:
    """Frequencies of the four classes over the successful repetitions."""

    weights: np.ndarray
    repetitions: int
    failed: int = 0

    @classmethod
    def from_classes(cls, classes, failed=0):
        counts = np.bincount([int(c) for c in classes], minlength=4).astype(np.float64)
        n = len(classes)
        weights = counts / n if n else counts
        return cls(weights, n, failed)

    @property
    def unclassified(self) -> bool:
        total = self.repetitions + self.failed
        return self.repetitions == 0 or self.failed > MAX_FAILED_REPETITIONS * total

    def majority(self) -> DependenceClass:
        # ties resolve toward the stronger class
        best = self.weights.max()
        return DependenceClass(int(np.flatnonzero(self.weights == best)[-1]))

    def as_list(self) -> list[float]:
        return [float(w) for w in self.weights]


@dataclass
class ClassificationDiagnostics:
    alpha: TailIndexEstimate
    cone_fit: ConeFit
    k_n: int
    m: int
    k_m: int
    per_repetition: list = field(default_factory=list)


def classify_once(
    sample: PolarSample,
    cfg: BootstrapConfig,
    fit: ConeFit,
    inv_alpha_hat: float,
    precheck_width: float = DEFAULT_PRECHECK,
) -> RepetitionOutcome:
    """Run the cascade once on ``cfg.B`` fresh resamples keyed by ``cfg.seed``.

    A fitted cone at least ``precheck_width`` wide skips straight to the
    independence-vs-weak test. Otherwise the band test on D decides between
    the full/strong branch (variance test on T) and the independence/weak
    branch (variance test on T(g)).
    """
    batch = bootstrap_batch(sample, cfg, fit.cone)
    # grid endpoints are multiples of the step; round away representation noise
    precheck = round(fit.width, 9) >= precheck_width
    if precheck:
        h3 = decide_variance(batch.draws("T_g"), inv_alpha_hat, cfg)
        cls = DependenceClass.WEAK if h3 else DependenceClass.INDEPENDENCE
        return RepetitionOutcome(cls, None, None, h3, True)

    h1 = decide_strong(batch.draws("D"), inv_alpha_hat, cfg)
    if not h1:
        h2 = decide_variance(batch.draws("T"), inv_alpha_hat, cfg)
        cls = DependenceClass.STRONG if h2 else DependenceClass.FULL
        return RepetitionOutcome(cls, False, h2, None, False)
    h3 = decide_variance(batch.draws("T_g"), inv_alpha_hat, cfg)
    cls = DependenceClass.WEAK if h3 else DependenceClass.INDEPENDENCE
    return RepetitionOutcome(cls, True, None, h3, False)


def classify_repeated(
    sample: PolarSample,
    k: int,
    settings: ClassifierSettings = ClassifierSettings(),
    seed: int = 0,
) -> tuple[DependenceVector, ClassificationDiagnostics]:
    """Estimate the tail index and cone once, then repeat the cascade.

    Repetition ``j`` draws its resamples from a stream keyed by
    ``(seed, j)``. Repetitions whose bootstrap run is invalid are counted
    as failed; see :attr:`DependenceVector.unclassified`.
    """
    n = len(sample)
    tail = order_tail(sample, k)
    alpha = TailIndexEstimate(hill_alpha(tail), k)
    inv_alpha = alpha.inv_alpha_hat
    fit = fit_cone(tail, inv_alpha, settings.lam, settings.grid_step)
    base = BootstrapConfig.for_sample(n, k, B=settings.B, bonferroni=settings.bonferroni)
    diag = ClassificationDiagnostics(alpha, fit, k, base.m, base.k_m)

    classes = []
    failed = 0
    for rep in range(settings.repetitions):
        cfg = base.with_seed(derive_seed(seed, rep))
        try:
            outcome = classify_once(sample, cfg, fit, inv_alpha, settings.precheck_width)
        except InvalidRunError as exc:
            logger.warning("repetition %d failed: %s", rep, exc)
            failed += 1
            diag.per_repetition.append(None)
            continue
        classes.append(outcome.dep_class)
        diag.per_repetition.append(outcome)
    return DependenceVector.from_classes(classes, failed), diag
