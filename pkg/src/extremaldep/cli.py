"""Command-line entry point: ``extremaldep <subcommand> ...``."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from .bootstrap import DEFAULT_B, make_stream
from .classifier import DEFAULT_PRECHECK, DEFAULT_REPETITIONS, ClassifierSettings, classify_repeated
from .core import polar_transform
from .pipeline import (
    RunConfig,
    asset_tail,
    classify_pair,
    load_matrix,
    load_metadata,
    load_prices,
    render_heatmap,
    returns_from_prices,
    run_matrix,
    save_matrix,
)
from .statistics import DEFAULT_GRID_STEP, DEFAULT_LAMBDA
from .synth import CLASS_NAMES, ClassSpec, gen_class_sample
from .threshold import CAP_BASE, CAP_SPAN, DEFAULT_K_MIN, select_threshold

log = logging.getLogger("extremaldep")


def _cap(text):
    try:
        base, span = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected BASE,SPAN, e.g. 80,40") from None
    return base, span


def _interval(text):
    try:
        a, b = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected a,b, e.g. 0.3,0.7") from None
    return a, b


def _kmax(text):
    return None if text == "auto" else int(text)


def _add_threshold_flags(p):
    p.add_argument("--kmin", type=int, default=DEFAULT_K_MIN)
    p.add_argument("--kmax", type=_kmax, default=None, help="largest candidate k, or 'auto' for n/2")
    p.add_argument("--cap", type=_cap, default=(CAP_BASE, CAP_SPAN), help="cap constants BASE,SPAN")


def _add_test_flags(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lambda", dest="lam", type=float, default=DEFAULT_LAMBDA)
    p.add_argument("--grid-step", type=float, default=DEFAULT_GRID_STEP)
    p.add_argument("--B", dest="B", type=int, default=DEFAULT_B)
    p.add_argument("--reps", type=int, default=DEFAULT_REPETITIONS)
    p.add_argument("--precheck", type=float, default=DEFAULT_PRECHECK)
    p.add_argument("--bonferroni", action="store_true", help="run every test at level 0.025")
    p.add_argument("--offset", type=int, choices=(0, 1), default=0, help="every-other-day phase")
    p.add_argument("--threads", type=int, default=None)
    _add_threshold_flags(p)


def _run_config(args) -> RunConfig:
    settings = ClassifierSettings(
        lam=args.lam,
        grid_step=args.grid_step,
        precheck_width=args.precheck,
        B=args.B,
        repetitions=args.reps,
        bonferroni=args.bonferroni,
    )
    return RunConfig(
        settings=settings,
        seed=args.seed,
        k_min=args.kmin,
        k_max=args.kmax,
        cap_base=args.cap[0],
        cap_span=args.cap[1],
        offset=args.offset,
        threads=args.threads,
    )


def _single_asset(path, offset):
    series = returns_from_prices(load_prices(path), offset)
    if len(series) != 1:
        raise SystemExit(f"{path}: expected exactly one asset, found {len(series)}")
    return series[0]


def cmd_classify_pair(args):
    cfg = _run_config(args)
    if args.xy:
        with open(args.xy, newline="") as fh:
            rows = list(csv.DictReader(fh))
        sample = polar_transform([float(r["x"]) for r in rows], [float(r["y"]) for r in rows])
        sel = select_threshold(sample.r, cfg.k_min, cfg.k_max, cfg.cap_base, cfg.cap_span)
        vec, diag = classify_repeated(sample, sel.k_used, cfg.settings, cfg.seed)
        doc = {
            "n": len(sample),
            "k": sel.k_used,
            "alpha_hat": diag.alpha.alpha_hat,
            "a_hat": diag.cone_fit.cone.a,
            "b_hat": diag.cone_fit.cone.b,
            "m": diag.m,
            "k_m": diag.k_m,
            "weights": vec.as_list(),
            "majority": vec.majority().label,
            "status": "unclassified" if vec.unclassified else "ok",
        }
    else:
        if not (args.a and args.b):
            raise SystemExit("classify-pair needs --a and --b, or --xy")
        a = _single_asset(args.a, cfg.offset)
        b = _single_asset(args.b, cfg.offset)
        res = classify_pair(a, b, asset_tail(a, cfg), asset_tail(b, cfg), cfg)
        doc = res.to_record()
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def cmd_classify_matrix(args):
    cfg = _run_config(args)
    prices = load_prices(args.input)
    series = returns_from_prices(prices, cfg.offset)
    matrix = run_matrix(series, cfg)
    paths = save_matrix(matrix, args.out, cfg)
    svg = render_heatmap(matrix, matrix.meta)
    svg_path = Path(args.out) / "heatmap.svg"
    svg_path.write_text(svg, encoding="utf-8")
    n_bad = sum(p.status != "ok" for p in matrix.pairs())
    log.info("wrote %s, %s, %s (%d pairs, %d unclassified)",
             paths["json"], paths["csv"], svg_path, len(matrix.results), n_bad)
    return 0


def cmd_threshold(args):
    series = returns_from_prices(load_prices(args.input), args.offset)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["asset_id", "n", "k_star", "k_used", "ks_distance", "alpha_hat"])
    cfg = RunConfig(k_min=args.kmin, k_max=args.kmax, cap_base=args.cap[0], cap_span=args.cap[1])
    for s in series:
        v = s.values[s.values > 0]
        sel = select_threshold(v, cfg.k_min, cfg.k_max, cfg.cap_base, cfg.cap_span)
        tail = asset_tail(s, cfg)
        w.writerow([s.asset_id, v.shape[0], sel.k_star, sel.k_used,
                    f"{sel.ks_distance_at_star:.6f}", f"{tail.alpha:.6f}"])
    return 0


def cmd_simulate(args):
    dep_class = CLASS_NAMES[args.dep_class]
    kw = {}
    if args.theta0 is not None:
        kw["theta0"] = args.theta0
    if args.interval is not None:
        kw["interval"] = args.interval
    spec = ClassSpec(dep_class, args.alpha, angular=args.angular, **kw)
    x, y = gen_class_sample(spec, args.n, make_stream(args.seed))
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "y"])
        for xi, yi in zip(x, y):
            w.writerow([repr(float(xi)), repr(float(yi))])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def cmd_render(args):
    matrix = load_matrix(args.matrix)
    meta = load_metadata(args.meta)
    Path(args.out).write_text(render_heatmap(matrix, meta, title=args.title), encoding="utf-8")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="extremaldep", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify-pair", help="classify one pair of assets")
    p.add_argument("--a", help="price file holding the first asset")
    p.add_argument("--b", help="price file holding the second asset")
    p.add_argument("--xy", help="CSV with columns x,y (e.g. from 'simulate') instead of prices")
    _add_test_flags(p)
    p.set_defaults(func=cmd_classify_pair)

    p = sub.add_parser("classify-matrix", help="classify every pair in a price file")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True, help="output directory")
    _add_test_flags(p)
    p.set_defaults(func=cmd_classify_matrix)

    p = sub.add_parser("threshold", help="per-asset threshold and Hill index")
    p.add_argument("--input", required=True)
    p.add_argument("--offset", type=int, choices=(0, 1), default=0)
    _add_threshold_flags(p)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("simulate", help="generate a bivariate sample of a known class")
    p.add_argument("--class", dest="dep_class", choices=sorted(CLASS_NAMES), required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--theta0", type=float)
    p.add_argument("--interval", type=_interval)
    p.add_argument("--angular", choices=("uniform", "beta22"), default="uniform")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("render", help="draw heatmap.svg from matrix.json")
    p.add_argument("--matrix", required=True)
    p.add_argument("--meta", required=True, help="CSV asset_id,market,sector (a price file also works)")
    p.add_argument("--out", required=True)
    p.add_argument("--title", default="")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
