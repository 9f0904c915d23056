"""Pairwise classification over a collection of return series."""
from __future__ import annotations

import csv
import hashlib
import itertools
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from ..classifier import ClassifierSettings, DependenceVector, classify_repeated
from ..core import DegenerateTailError, ParameterError, hill_estimate, polar_transform, power_transform
from ..threshold import CAP_BASE, CAP_SPAN, DEFAULT_K_MIN, select_threshold
from .io import EmptyJoinError, ReturnSeries, align_pair

logger = logging.getLogger(__name__)

THREADS_ENV = "EXTREMALDEP_THREADS"
CLASS_ORDER = ("independence", "weak", "strong", "full")


@dataclass(frozen=True)
class RunConfig:
    settings: ClassifierSettings = field(default_factory=ClassifierSettings)
    seed: int = 0
    k_min: int = DEFAULT_K_MIN
    k_max: int | None = None
    cap_base: int = CAP_BASE
    cap_span: int = CAP_SPAN
    offset: int = 0
    threads: int | None = None

    def to_dict(self):
        d = asdict(self)
        d.pop("threads")
        return d


@dataclass(frozen=True)
class AssetTail:
    asset_id: str
    k_star: int
    k_used: int
    alpha: float


@dataclass(frozen=True)
class PairResult:
    asset_a: str
    asset_b: str
    alpha_a: float
    alpha_b: float
    status: str
    n: int = 0
    k: int = 0
    a_hat: float | None = None
    b_hat: float | None = None
    alpha_pair: float | None = None
    weights: tuple = (0.0, 0.0, 0.0, 0.0)
    repetitions: int = 0
    failed: int = 0
    message: str = ""

    @property
    def alpha_bar(self) -> float:
        return 0.5 * (self.alpha_a + self.alpha_b)

    @property
    def vector(self) -> DependenceVector:
        return DependenceVector(np.array(self.weights), self.repetitions, self.failed)

    def to_record(self) -> dict:
        return {
            "asset_a": self.asset_a,
            "asset_b": self.asset_b,
            "alpha_a": self.alpha_a,
            "alpha_b": self.alpha_b,
            "alpha_bar": self.alpha_bar,
            "a_hat": self.a_hat,
            "b_hat": self.b_hat,
            "weights": list(self.weights),
            "status": self.status,
            "n": self.n,
            "k": self.k,
            "alpha_pair": self.alpha_pair,
            "repetitions": self.repetitions,
            "failed": self.failed,
            "message": self.message,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "PairResult":
        keys = {f for f in cls.__dataclass_fields__}
        kw = {k: v for k, v in rec.items() if k in keys}
        kw["weights"] = tuple(kw.get("weights", (0.0,) * 4))
        return cls(**kw)


@dataclass
class DependenceMatrix:
    assets: list
    results: dict  # frozenset({a, b}) -> PairResult
    meta: dict = field(default_factory=dict)
    tails: dict = field(default_factory=dict)

    def get(self, a, b) -> PairResult | None:
        return self.results.get(frozenset((a, b)))

    def pairs(self) -> list[PairResult]:
        return sorted(self.results.values(), key=lambda p: (p.asset_a, p.asset_b))


def pair_seed(seed: int, a: str, b: str) -> int:
    """Seed keyed on the unordered pair so (a, b) and (b, a) agree."""
    lo, hi = sorted((a, b))
    digest = hashlib.blake2b(f"{int(seed)}\x1f{lo}\x1f{hi}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def worker_count(requested: int | None = None) -> int:
    if requested:
        return max(1, int(requested))
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def asset_tail(series: ReturnSeries, cfg: RunConfig) -> AssetTail:
    """Minimum-distance threshold and Hill index of one asset's magnitudes."""
    v = series.values[series.values > 0]
    sel = select_threshold(v, cfg.k_min, cfg.k_max, cfg.cap_base, cfg.cap_span)
    est = hill_estimate(v, sel.k_used)
    return AssetTail(series.asset_id, sel.k_star, sel.k_used, est.alpha_hat)


def classify_pair(a: ReturnSeries, b: ReturnSeries, tail_a: AssetTail, tail_b: AssetTail, cfg: RunConfig) -> PairResult:
    """Standardise, align and classify one pair; failures become ``unclassified``.

    The pair is oriented so the angle is the share of the asset with the
    lexicographically smaller id.
    """
    if b.asset_id < a.asset_id:
        a, b, tail_a, tail_b = b, a, tail_b, tail_a
    base = dict(asset_a=a.asset_id, asset_b=b.asset_id, alpha_a=tail_a.alpha, alpha_b=tail_b.alpha)
    alpha_bar = 0.5 * (tail_a.alpha + tail_b.alpha)
    try:
        _, xa, xb = align_pair(a, b)
        x = power_transform(xa, tail_a.alpha, alpha_bar)
        y = power_transform(xb, tail_b.alpha, alpha_bar)
        sample = polar_transform(x, y)
        n = len(sample)
        sel = select_threshold(sample.r, cfg.k_min, cfg.k_max, cfg.cap_base, cfg.cap_span)
        vec, diag = classify_repeated(sample, sel.k_used, cfg.settings, pair_seed(cfg.seed, a.asset_id, b.asset_id))
    except (EmptyJoinError, ParameterError, DegenerateTailError) as exc:
        logger.warning("pair %s/%s unclassified: %s", a.asset_id, b.asset_id, exc)
        return PairResult(status="unclassified", message=str(exc), **base)
    return PairResult(
        status="unclassified" if vec.unclassified else "ok",
        n=n,
        k=sel.k_used,
        a_hat=diag.cone_fit.cone.a,
        b_hat=diag.cone_fit.cone.b,
        alpha_pair=diag.alpha.alpha_hat,
        weights=tuple(vec.as_list()),
        repetitions=vec.repetitions,
        failed=vec.failed,
        **base,
    )


def _pair_job(args):
    return classify_pair(*args)


def run_matrix(assets: list[ReturnSeries], cfg: RunConfig = RunConfig()) -> DependenceMatrix:
    """Classify every unordered pair of ``assets``.

    Pair jobs run in a process pool sized by ``cfg.threads`` or the
    ``EXTREMALDEP_THREADS`` variable. Every job's randomness is keyed on its
    pair, so the result does not depend on scheduling.
    """
    if len(assets) < 2:
        raise ParameterError("need at least two assets")
    assets = sorted(assets, key=lambda s: s.asset_id)
    ids = [s.asset_id for s in assets]
    if len(set(ids)) != len(ids):
        raise ParameterError("duplicate asset ids")
    tails = {s.asset_id: asset_tail(s, cfg) for s in assets}
    jobs = [(a, b, tails[a.asset_id], tails[b.asset_id], cfg) for a, b in itertools.combinations(assets, 2)]

    workers = min(worker_count(cfg.threads), len(jobs))
    if workers <= 1:
        results = [_pair_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_pair_job, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    meta = {s.asset_id: (s.market, s.sector) for s in assets}
    return DependenceMatrix(ids, {frozenset((r.asset_a, r.asset_b)): r for r in results}, meta, tails)


def matrix_to_json(matrix: DependenceMatrix, cfg: RunConfig | None = None) -> str:
    doc = {
        "assets": list(matrix.assets),
        "classes": list(CLASS_ORDER),
        "meta": {a: {"market": m, "sector": s} for a, (m, s) in sorted(matrix.meta.items())},
        "tails": {a: asdict(t) for a, t in sorted(matrix.tails.items())},
        "pairs": [p.to_record() for p in matrix.pairs()],
    }
    if cfg is not None:
        doc["config"] = cfg.to_dict()
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def save_matrix(matrix: DependenceMatrix, out_dir, cfg: RunConfig | None = None) -> dict:
    """Write ``matrix.json`` and ``matrix.csv`` into ``out_dir``; returns their paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    json_path = out / "matrix.json"
    json_path.write_text(matrix_to_json(matrix, cfg), encoding="utf-8")
    csv_path = out / "matrix.csv"
    with csv_path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["asset_a", "asset_b", "alpha_a", "alpha_b", "a_hat", "b_hat", *CLASS_ORDER, "status"])
        for p in matrix.pairs():
            w.writerow([
                p.asset_a, p.asset_b, repr(p.alpha_a), repr(p.alpha_b),
                "" if p.a_hat is None else repr(p.a_hat),
                "" if p.b_hat is None else repr(p.b_hat),
                *(repr(float(x)) for x in p.weights), p.status,
            ])
    return {"json": json_path, "csv": csv_path}


def load_matrix(path) -> DependenceMatrix:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    results = {}
    for rec in doc["pairs"]:
        p = PairResult.from_record(rec)
        results[frozenset((p.asset_a, p.asset_b))] = p
    meta = {a: (m["market"], m["sector"]) for a, m in doc.get("meta", {}).items()}
    return DependenceMatrix(list(doc["assets"]), results, meta)
