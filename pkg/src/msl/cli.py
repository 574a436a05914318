"""``msl`` command line: ``run <config>``, ``ledger``, ``eval``.

Exit codes: 0 ok, 2 config parse error, 3 validation error, 4 a bound or
ledger check failed.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

from . import experiments
from .algorithms import from_spec
from .errors import MatroidError, ResourceLimitError, UnsupportedModeError
from .fileformat import load_matroid
from .harness import EvalReport, evaluate_exact, evaluate_monte_carlo

EXIT_PARSE, EXIT_VALIDATION, EXIT_VIOLATION = 2, 3, 4

EXPERIMENTS = ("rb_sweep", "pav_sweep", "uni_sweep", "ledger", "eval")
KNOWN_KEYS = {"experiment", "seed", "trials", "n_values", "r_values", "gamma", "hyperplanes",
              "weights", "workers", "output_csv", "output_json", "matroid", "alg", "exact"}


class ConfigError(ValueError):
    pass


def parse_config(text: str) -> dict:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    cfg = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in cfg:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        cfg[key] = value
    if "experiment" not in cfg:
        raise ConfigError("missing experiment")
    if cfg["experiment"] not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {cfg['experiment']!r}")
    if "seed" not in cfg:
        raise ConfigError("seed is mandatory")
    try:
        cfg["seed"] = int(cfg["seed"])
        cfg["trials"] = int(cfg.get("trials", 10_000))
        cfg["workers"] = int(cfg.get("workers", 1))
        for key in ("n_values", "r_values"):
            if key in cfg:
                cfg[key] = [int(v) for v in cfg[key].replace(",", " ").split()]
        if "gamma" in cfg:
            cfg["gamma"] = float(cfg["gamma"])
        if "hyperplanes" in cfg:
            cfg["hyperplanes"] = int(cfg["hyperplanes"])
        cfg["exact"] = cfg.get("exact", "false").lower() in ("1", "true", "yes")
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if cfg["trials"] < 1:
        raise ConfigError("trials must be >= 1")
    return cfg


def _clean(value):
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def write_outputs(rows, columns, csv_path=None, json_path=None) -> None:
    if csv_path:
        with open(csv_path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow(row.csv_row())
    if json_path:
        payload = [_clean(row.to_dict() if hasattr(row, "to_dict") else row.csv_row())
                   for row in rows]
        Path(json_path).write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n")


def _summary(row) -> str:
    d = row.csv_row()
    flag = d.get("satisfied")
    parts = [f"{k}={d[k]:.4g}" if isinstance(d[k], float) else f"{k}={d[k]}"
             for k in d if k != "satisfied"]
    tag = "" if flag is None else ("PASS " if flag else "FAIL ")
    return tag + " ".join(parts)


def _eval(cfg) -> tuple[list, tuple]:
    if "matroid" not in cfg or "alg" not in cfg:
        raise ConfigError("eval needs matroid and alg")
    path = Path(cfg["matroid"])
    if not path.exists():
        raise MatroidError(f"matroid file {path} not found")
    M = load_matroid(path)
    alg = from_spec(cfg["alg"], M)
    import numpy as np

    rng = np.random.default_rng(cfg["seed"])
    w = experiments.make_weights(cfg.get("weights", "uniform"), len(M), rng)
    if cfg["exact"]:
        rep = evaluate_exact(alg, M, w)
    else:
        rep = evaluate_monte_carlo(alg, M, w, cfg["trials"], cfg["seed"], cfg["workers"])
    return [rep], EvalReport.CSV_COLUMNS


def run(cfg: dict, out=None) -> int:
    """Dispatch one experiment; returns the exit code."""
    out = out or sys.stdout
    name = cfg["experiment"]
    common = dict(seed=cfg["seed"], trials=cfg["trials"])
    try:
        if name == "rb_sweep":
            kw = dict(common, weights=cfg.get("weights", "uniform"), workers=cfg["workers"])
            if "n_values" in cfg:
                kw["n_values"] = cfg["n_values"]
            if "gamma" in cfg:
                kw["gamma"] = cfg["gamma"]
            if "hyperplanes" in cfg:
                kw["hyperplanes"] = cfg["hyperplanes"]
            rows, cols = experiments.rb_sweep(**kw), experiments.SweepRow.COLUMNS
        elif name in ("pav_sweep", "uni_sweep"):
            kw = dict(common, weights=cfg.get("weights", "uniform"), workers=cfg["workers"])
            if "r_values" in cfg:
                kw["r_values"] = cfg["r_values"]
            if name == "pav_sweep" and "hyperplanes" in cfg:
                kw["hyperplanes"] = cfg["hyperplanes"]
            fn = experiments.pav_sweep if name == "pav_sweep" else experiments.uni_sweep
            rows, cols = fn(**kw), experiments.SweepRow.COLUMNS
        elif name == "ledger":
            rows, cols = experiments.ledger_verify(**common), experiments.LedgerRow.COLUMNS
        else:
            rows, cols = _eval(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (MatroidError, ResourceLimitError, UnsupportedModeError, OSError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    for row in rows:
        print(_summary(row), file=out)
    write_outputs(rows, cols, cfg.get("output_csv"), cfg.get("output_json"))
    bad = [r for r in rows if getattr(r, "satisfied", True) is False
           or getattr(r, "violations", 0)]
    return EXIT_VIOLATION if bad else 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="msl", description="matroid secretary experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run an experiment described by a key=value config file")
    p_run.add_argument("config")
    p_led = sub.add_parser("ledger", help="verify the wrapper ratio ledger on built-in fixtures")
    p_led.add_argument("--seed", type=int, required=True)
    p_led.add_argument("--trials", type=int, default=10_000)
    p_led.add_argument("--csv")
    p_led.add_argument("--json")
    p_eval = sub.add_parser("eval", help="evaluate one algorithm on one matroid file")
    p_eval.add_argument("--matroid", required=True)
    p_eval.add_argument("--alg", required=True)
    p_eval.add_argument("--trials", type=int, default=10_000)
    p_eval.add_argument("--seed", type=int, required=True)
    p_eval.add_argument("--weights", default="uniform")
    p_eval.add_argument("--exact", action="store_true")
    p_eval.add_argument("--csv")
    p_eval.add_argument("--json")
    args = parser.parse_args(argv)

    if args.command == "run":
        try:
            cfg = parse_config(Path(args.config).read_text())
        except OSError as exc:
            print(f"cannot read config: {exc}", file=sys.stderr)
            return EXIT_PARSE
        except ConfigError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return EXIT_PARSE
    elif args.command == "ledger":
        cfg = {"experiment": "ledger", "seed": args.seed, "trials": args.trials,
               "workers": 1, "output_csv": args.csv, "output_json": args.json}
    else:
        cfg = {"experiment": "eval", "seed": args.seed, "trials": args.trials, "workers": 1,
               "matroid": args.matroid, "alg": args.alg, "weights": args.weights,
               "exact": args.exact, "output_csv": args.csv, "output_json": args.json}
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
