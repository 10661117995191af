"""
Command-line entry point.

    ricean-mimo {terms,scaling,cdf,saturation,gram} --config cfg.json --out out.csv

Exit codes: 0 success, 2 invalid configuration, 3 non-finite numerical
result, 4 failed ``--check``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from ..errors import ConfigError, NumericalError
from .config import load_config, parse_config
from .experiments import (
    run_cdf_experiment,
    run_gram_experiment,
    run_saturation_sweep,
    run_scaling_experiment,
    run_term_validation,
)
from .output import render_csv

log = logging.getLogger("ricean_mimo")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_CHECK = 0, 2, 3, 4


def _terms(cfg, threads):
    res = run_term_validation(cfg, threads)
    rows = [(p.k, p.l, *p.terms, p.total, p.mc_mean, p.mc_se, p.z) for p in res]
    worst = max(abs(p.z) for p in res)
    return rows, [f"max_abs_z={worst!r}"], worst <= 4.0


def _scaling(cfg, threads):
    rep = run_scaling_experiment(cfg, threads)
    rows = [(int(m), a, b, c) for m, a, b, c in zip(rep.m_values, rep.c1, rep.c2, rep.c3)]
    cls = rep.classification()
    notes = [f"slope_{n}={s!r} class_{n}={cls[n]}" for n, s in zip(("c1", "c2", "c3"), rep.slopes)]
    if cfg.scenario is None:
        ok = all(v == "vanishing" for v in cls.values())
    else:
        ok = any(v == "non-vanishing" for v in cls.values())
    return rows, notes, ok


def _cdf(cfg, threads):
    ens = run_cdf_experiment(cfg, threads)
    x, p = ens.cdf_grid
    rel = float(np.std(ens.per_trial_values) / ens.mean) if ens.mean > 0 else np.inf
    notes = [f"mean={ens.mean!r} std_error={ens.std_error!r} p05={ens.percentile(5)!r} std_over_mean={rel!r}"]
    return list(zip(x, p)), notes, rel < 0.1


def _saturation(cfg, threads):
    res = run_saturation_sweep(cfg, threads)
    rows = [(r.m, r.mean_se, r.se_stderr) for r in res]
    gain = res[-1].mean_se - res[-2].mean_se if len(res) > 1 else np.nan
    ok = gain < 0.1 if cfg.scenario is not None else gain > 0.5
    return rows, [f"last_doubling_gain={gain!r}"], bool(ok)


def _gram(cfg, threads):
    res = run_gram_experiment(cfg, threads)
    rows = [(r.m, r.max_entry_msd, r.s1_var, r.s2_var, r.s3_var) for r in res]
    ok = all(abs(r.pair_msd - (r.s1_var + r.s2_var + r.s3_var)) <= 4 * r.pair_se for r in res)
    notes = [f"M={r.m} pair_msd={r.pair_msd!r} pair_se={r.pair_se!r}" for r in res]
    return rows, notes, ok


RUNNERS = {"terms": _terms, "scaling": _scaling, "cdf": _cdf, "saturation": _saturation, "gram": _gram}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ricean-mimo", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in RUNNERS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON experiment configuration")
        p.add_argument("--out", required=True, help="output CSV path ('-' for stdout)")
        p.add_argument("--seed", type=int, help="override the configured seed")
        p.add_argument("--trials", type=int, help="override the configured trial count")
        p.add_argument("--threads", type=int, default=1, help="worker threads (default 1)")
        p.add_argument("--check", action="store_true", help="exit with 4 if the built-in check fails")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        with open(args.config) as fh:
            doc = json.load(fh)
        if isinstance(doc, dict):
            doc.setdefault("experiment", args.command)
        cfg = parse_config(doc)
        if cfg.experiment != args.command:
            raise ConfigError(f"field 'experiment': config is for '{cfg.experiment}', command is '{args.command}'")
        cfg = cfg.with_overrides(seed=args.seed, trials=args.trials)
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
    except (ConfigError, json.JSONDecodeError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (TypeError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    log.info("running %s with config hash %s", cfg.experiment, cfg.config_hash())
    try:
        rows, notes, ok = RUNNERS[cfg.experiment](cfg, args.threads)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    flat = [v for row in rows for v in row if isinstance(v, float)]
    if not np.all(np.isfinite(flat)):
        print("numerical failure: non-finite value in results", file=sys.stderr)
        return EXIT_NUMERICAL

    text = render_csv(cfg, rows, notes + [f"check={'pass' if ok else 'fail'}"])
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    if args.check and not ok:
        print(f"check failed for {cfg.experiment}", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
