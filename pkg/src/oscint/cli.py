"""Command-line front end.

    oscint eval | decay | extremizer | verify {rescale,jacobian,broadnarrow,capbound}
           | recursion | bench   [--config FILE] [--out DIR] [--threads N] ...

Options come from built-in defaults, then an optional key=value config file,
then flags (flags win). Exit status: 0 ok, 1 verification failure, 2 bad
configuration.
"""
import argparse
import csv
import json
import logging
import math
import os
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import kernels
from .amplitude import Characteristic, Chirp, GaussBump, One, SmoothBump, TrigPoly, load_test_function
from .operator import Grid, OperatorSpec, evaluate_field, lp_norm
from .phase import Phase

log = logging.getLogger("oscint")


class ConfigError(Exception):
    pass


@dataclass
class ExperimentConfig:
    lambda_min: float = 64.0
    lambda_max: float = 1024.0
    lam: float = 256.0
    K: int = 8
    alpha: float = 1e-4
    grid: int = 64
    x_range: str = "-1,1"
    y_range: str = "-1,1"
    c1: float = 0.125
    c2: float = 0.125
    f: str = "chi"
    phase: str = "canonical"
    cutoff: str = "bump"
    seed: int = 7
    nodes: int = 20
    out: str = "out"
    threads: int = 0
    backend: str = "auto"

    def validate(self, command):
        if self.lambda_min > self.lambda_max:
            raise ConfigError("lambda_min must not exceed lambda_max")
        for name in ("lambda_min", "lambda_max"):
            v = getattr(self, name)
            if v <= 0 or math.log2(v) != int(math.log2(v)):
                raise ConfigError(f"{name}={v} is not a power of two")
        if command == "decay" and math.log2(self.lambda_max) - math.log2(self.lambda_min) < 2:
            raise ConfigError("decay fit needs at least 3 dyadic lambdas")
        if not self.lam > 0:
            raise ConfigError("lambda must be positive")
        if self.K < 1:
            raise ConfigError("K must be >= 1")
        if not 0 < self.alpha < 1:
            raise ConfigError("alpha must lie in (0, 1)")
        if self.grid < 2:
            raise ConfigError("grid must be >= 2")
        if self.threads < 0:
            raise ConfigError("threads must be >= 0")

    def public(self):
        """Config as written to the summary; execution-only knobs are dropped."""
        d = asdict(self)
        for key in ("threads", "backend", "out"):
            d.pop(key)
        return d


# flag -> (dest, type)
OPTIONS = {
    "--lmin": ("lambda_min", float), "--lambda-min": ("lambda_min", float),
    "--lmax": ("lambda_max", float), "--lambda-max": ("lambda_max", float),
    "--lambda": ("lam", float), "--K": ("K", int), "--alpha": ("alpha", float),
    "--grid": ("grid", int), "--x-range": ("x_range", str), "--y-range": ("y_range", str),
    "--c1": ("c1", float), "--c2": ("c2", float), "--f": ("f", str),
    "--phase": ("phase", str), "--cutoff": ("cutoff", str), "--seed": ("seed", int),
    "--nodes": ("nodes", int), "--out": ("out", str), "--threads": ("threads", int),
    "--backend": ("backend", str),
}
FIELD_TYPES = {dest: typ for dest, typ in OPTIONS.values()}
ALIASES = {"lambda": "lam", "lmin": "lambda_min", "lmax": "lambda_max"}


def read_config_file(path):
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, val = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            key = ALIASES.get(key, key)
            if key not in FIELD_TYPES:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                values[key] = FIELD_TYPES[key](val)
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: {exc}") from None
    return values


def _add_common(p):
    p.add_argument("--config", default=argparse.SUPPRESS, help="key=value file; flags override it")
    for dest, typ in FIELD_TYPES.items():
        flags = [f for f, (d, _) in OPTIONS.items() if d == dest]
        p.add_argument(*flags, dest=dest, type=typ, default=argparse.SUPPRESS)


def build_parser():
    parser = argparse.ArgumentParser(prog="oscint", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("eval", "evaluate T f on a grid and dump CSV"),
        ("decay", "lambda sweep of Q4 lower bounds with log-log fit"),
        ("extremizer", "box lower-bound sweep for chi_[0,1]"),
        ("recursion", "recursion diagnostic across lambda_max octaves"),
        ("bench", "quadrature strategy and backend timings"),
    ]:
        _add_common(sub.add_parser(name, help=help_))
    v = sub.add_parser("verify", help="run a decomposition check suite")
    v.add_argument("check", choices=["rescale", "jacobian", "broadnarrow", "capbound"])
    _add_common(v)
    return parser


def resolve_config(args):
    given = {k: v for k, v in vars(args).items() if k not in ("command", "check", "config")}
    values = {}
    if hasattr(args, "config"):
        values.update(read_config_file(args.config))
    values.update(given)
    cfg = ExperimentConfig(**values)
    cfg.validate(args.command)
    return cfg


# --- output helpers -----------------------------------------------------------

def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return repr(v) if math.isfinite(v) else str(v)
    return str(v)


def write_csv(path, rows, columns):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(r[c]) for c in columns])


def _clean(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item"):
        return _clean(obj.item())
    return obj


def write_summary(out, command, cfg, results, passed):
    doc = {"command": command, "config": cfg.public() if cfg else None,
           "results": results, "pass": passed}
    with open(os.path.join(out, "summary.json"), "w") as fh:
        json.dump(_clean(doc), fh, indent=2, sort_keys=True)
        fh.write("\n")


# --- builders -------------------------------------------------------------------

def _range(text):
    lo, hi = (float(v) for v in text.split(","))
    return lo, hi


def _test_function(cfg):
    name = cfg.f
    if name == "chi":
        return Characteristic(0.0, 1.0)
    if name == "trig":
        return TrigPoly(seed=cfg.seed)
    if name.startswith("gauss:"):
        c, w = (float(v) for v in name[6:].split(","))
        return GaussBump(c, w)
    if name.startswith("chirp:"):
        return Chirp(float(name[6:]))
    if name.startswith("file:"):
        return load_test_function(name[5:])
    raise ConfigError(f"unknown test function {name!r}")


def _phase(cfg):
    if cfg.phase == "canonical":
        return Phase.canonical()
    if cfg.phase.startswith("general:"):
        return Phase.general(*(float(v) for v in cfg.phase[8:].split(",")))
    raise ConfigError(f"unknown phase {cfg.phase!r}")


def _cutoff(cfg):
    if cfg.cutoff == "bump":
        return SmoothBump(0.5, 1.0)
    if cfg.cutoff == "one":
        return One()
    raise ConfigError(f"unknown cutoff {cfg.cutoff!r}")


# --- commands -----------------------------------------------------------------

def cmd_eval(cfg, out):
    spec = OperatorSpec(cfg.lam, _phase(cfg), _cutoff(cfg), _test_function(cfg))
    grid = Grid(_range(cfg.x_range), _range(cfg.y_range), cfg.grid, cfg.grid)
    fld = evaluate_field(spec, grid)
    fld.to_csv(os.path.join(out, "field.csv"))
    return {"l4_norm": lp_norm(fld, 4), "max_abs": float(abs(fld.values).max())}, True


def cmd_decay(cfg, out):
    from .suites import run_decay
    rows, fits, ok = run_decay(cfg.lambda_min, cfg.lambda_max, cfg.seed, cfg.c1, cfg.c2)
    write_csv(os.path.join(out, "decay.csv"), rows,
              ["lambda", "q4_lower", "extremizer_lb", "slope_running"])
    return fits, ok


def cmd_extremizer(cfg, out):
    from .suites import run_extremizer
    rows, fit, ok = run_extremizer(cfg.lambda_min, cfg.lambda_max, cfg.c1, cfg.c2)
    write_csv(os.path.join(out, "extremizer.csv"), rows,
              ["lambda", "extremizer_lb", "normalized", "slope_running"])
    return fit.as_dict(), ok


def cmd_recursion(cfg, out):
    from .analytics import dyadic
    from .suites import run_recursion
    rows, ok = run_recursion(dyadic(cfg.lambda_min, cfg.lambda_max), cfg.K, cfg.seed)
    write_csv(os.path.join(out, "recursion.csv"), rows,
              ["lambda", "K", "q_hi", "q_lo", "denominator", "ratio"])
    return {"rows": rows}, ok


def cmd_verify(cfg, out, check):
    from . import suites
    f = _test_function(cfg)
    if check == "rescale":
        rows, ok = suites.run_rescale(cfg.K, cfg.lam, cfg.grid, f)
        cols = ["lambda", "K", "j", "max_left", "rel_dev", "pass"]
    elif check == "jacobian":
        rows, ok = suites.run_jacobian(cfg.K, cfg.lam, cfg.seed, cfg.nodes, f)
        cols = ["lambda", "K", "j", "k", "max_rel_dev", "pass"]
    elif check == "capbound":
        rows, ok = suites.run_capbound(cfg.K, f)
        cols = ["K", "j", "k", "F_norm_sq", "bound", "ratio", "pass"]
    else:
        rows, ok = suites.run_broadnarrow(cfg.lam, cfg.K, cfg.alpha, cfg.grid, f)
        cols = ["lambda", "K", "alpha", "nodes", "n_broad", "pointwise_excess",
                "domination_violations", "reconstruction_err", "pass"]
        from .analytics import dyadic
        report, _ = suites.run_broad_report(dyadic(cfg.lambda_min, cfg.lambda_max),
                                            cfg.K, cfg.alpha, cfg.grid, f)
        write_csv(os.path.join(out, "broad_report.csv"), report,
                  ["lambda", "K", "alpha", "lhs", "rhs_core", "ratio"])
    write_csv(os.path.join(out, f"verify_{check}.csv"), rows, cols)
    failed = [r for r in rows if not r["pass"]]
    return {"check": check, "items": len(rows), "failures": failed}, ok


def cmd_bench(cfg, out):
    from .bench import kernel_backends, quadrature_strategies, speedup
    rows, timings = quadrature_strategies()
    krows, ktimings = kernel_backends(cfg.lam, cfg.grid)
    write_csv(os.path.join(out, "bench.csv"), rows + krows,
              ["strategy", "lambda", "nodes", "re", "im", "abs_err"])
    timings += ktimings
    print(f"{'strategy':<18}{'lambda':>10}{'seconds':>12}")
    for t in timings:
        print(f"{t['strategy']:<18}{t['lambda']:>10.0f}{t['seconds']:>12.4f}")
    return {"timings": timings, "backend_speedup": speedup(timings)}, True


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    command = args.command
    cfg = None
    prev_threads, prev_backend = kernels._threads, kernels.BACKEND
    try:
        cfg = resolve_config(args)
        if cfg.threads:
            kernels.set_threads(cfg.threads)
        if cfg.backend != "auto":
            kernels.use_backend(cfg.backend)
        os.makedirs(cfg.out, exist_ok=True)
        if command == "verify":
            results, ok = cmd_verify(cfg, cfg.out, args.check)
            command = f"verify {args.check}"
        else:
            results, ok = {
                "eval": cmd_eval, "decay": cmd_decay, "extremizer": cmd_extremizer,
                "recursion": cmd_recursion, "bench": cmd_bench,
            }[command](cfg, cfg.out)
    except (ConfigError, ValueError, OSError, RuntimeError) as exc:
        log.error("configuration error: %s", exc)
        if cfg is not None and os.path.isdir(cfg.out):
            write_summary(cfg.out, command, cfg, {"error": str(exc)}, False)
        return 2
    finally:
        kernels.set_threads(prev_threads)
        kernels.use_backend(prev_backend)
    write_summary(cfg.out, command, cfg, results, ok)
    log.info("%s: %s", command, "pass" if ok else "FAIL")
    return 0 if ok else 1


def main(argv=None):
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
