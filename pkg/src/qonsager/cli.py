"""Command-line driver: run verification suites and write JSON / CSV reports.

Exit status: 0 when every check passes, 1 when a check fails, 2 on a
configuration or degeneracy error.
"""

from __future__ import annotations

import argparse
import copy
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .errors import ConfigError, QonsagerError
from .kernels import BACKEND
from .reports import SuiteResult, write_report
from .suites import DEFAULTS, RUNNERS, SUITES

TOP_KEYS = {"seed", "workers", "out", "tol_rel", "tol_abs", "csv", "timing", "suites"}
ABS_TOL_CUTOFF = 1e-12


def parse_complex(text: str) -> list[float]:
    try:
        z = complex(text.replace(" ", ""))
    except ValueError as exc:
        raise ConfigError(f"cannot read {text!r} as a number") from exc
    return [z.real, z.imag]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qonsager", description=__doc__.splitlines()[0])
    p.add_argument("command", nargs="?", choices=SUITES + ["all"], help="suite to run ('all' runs every suite)")
    p.add_argument("--suite", action="append", default=[], choices=SUITES + ["all"], help="add a suite (repeatable)")
    p.add_argument("--config", type=Path, help="JSON configuration file")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, help="process pool size (default: $QONSAGER_WORKERS or 1)")
    p.add_argument("--out", type=Path, help="report directory (default: reports)")
    p.add_argument("--tol-rel", type=float, help="replace the tolerance of every relative-residual check")
    p.add_argument("--tol-abs", type=float, help="replace the tolerance of every exact-zero check")
    p.add_argument("--csv", action="store_true", default=None, help="also write CSV tables")
    p.add_argument("--no-timing", dest="timing", action="store_false", default=None,
                   help="write wall_time as null so repeated runs are byte-identical")
    g = p.add_argument_group("parameter overrides")
    g.add_argument("--q", type=float)
    g.add_argument("--alpha", help="comma-separated parameters alpha_0..alpha_{N+2} for ortho-check")
    g.add_argument("--spins", help="comma-separated spins, e.g. 1,1/2")
    g.add_argument("--beta")
    g.add_argument("--beta-star")
    g.add_argument("--omega0")
    g.add_argument("--omega1")
    g.add_argument("--g-plus")
    g.add_argument("--g-minus")
    g.add_argument("--points", type=int, help="random sample points per case")
    return p


def load_config(path: Path | None) -> dict:
    if path is None:
        return {}
    try:
        cfg = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(cfg) - TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return cfg


def suite_params(name: str, cfg_suites: dict, args) -> dict:
    params = copy.deepcopy(DEFAULTS[name])
    given = cfg_suites.get(name) or {}
    unknown = set(given) - set(params)
    if unknown:
        raise ConfigError(f"unknown parameters for {name}: {sorted(unknown)}")
    params.update(copy.deepcopy(given))
    if args.q is not None and "q" in params:
        params["q"] = [args.q] if isinstance(params["q"], list) else args.q
    for flag, key in (("beta", "beta"), ("beta_star", "beta_star"), ("omega0", "omega0"),
                      ("omega1", "omega1"), ("g_plus", "g_plus"), ("g_minus", "g_minus")):
        v = getattr(args, flag)
        if v is not None and key in params:
            params[key] = parse_complex(v)
    if args.spins is not None:
        spins = [s.strip() for s in args.spins.split(",") if s.strip()]
        if "spins" in params:
            params["spins"] = spins
        if "modules" in params:
            params["modules"] = [{"spins": spins}]
    if args.alpha is not None and name == "ortho-check":
        al = [parse_complex(a) for a in args.alpha.split(",")]
        N = len(al) - 3
        if N not in (1, 2):
            raise ConfigError("--alpha needs N + 3 entries with N = 1 or 2")
        params[f"alpha_N{N}"] = al
        params[f"nodes_N{3 - N}"] = 0
    if args.points is not None:
        for key in ("points", "krawtchouk_points"):
            if key in params:
                params[key] = args.points
    return params


def select_suites(args, cfg: dict) -> list[str]:
    chosen = list(args.suite)
    if args.command:
        chosen.insert(0, args.command)
    cs = cfg.get("suites")
    if not chosen and cs:
        chosen = list(cs) if isinstance(cs, (list, dict)) else []
    if "all" in chosen:
        return list(SUITES)
    unknown = [s for s in chosen if s not in RUNNERS]
    if unknown:
        raise ConfigError(f"unknown suites: {unknown}")
    return list(dict.fromkeys(chosen))


def run_suite(name: str, params: dict, seed: int, timing: bool) -> SuiteResult:
    """Run one suite with a generator derived only from (seed, suite), so worker count never matters."""
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(SUITES.index(name),)))
    t0 = time.perf_counter()
    checks, tables = RUNNERS[name](params, rng)
    wall = time.perf_counter() - t0 if timing else None
    return SuiteResult(name, params, checks, seed, BACKEND, wall, tables)


def apply_tolerances(result: SuiteResult, tol_rel, tol_abs) -> None:
    for c in result.checks:
        if c.mode != "below":
            continue
        if c.tol <= ABS_TOL_CUTOFF:
            if tol_abs is not None:
                c.tol = tol_abs
        elif tol_rel is not None:
            c.tol = tol_rel


def _resolve_workers(args, cfg) -> int:
    w = args.workers if args.workers is not None else cfg.get("workers")
    if w is None:
        env = os.environ.get("QONSAGER_WORKERS")
        try:
            w = int(env) if env else 1
        except ValueError as exc:
            raise ConfigError(f"QONSAGER_WORKERS must be an integer, got {env!r}") from exc
    if int(w) < 1:
        raise ConfigError("workers must be >= 1")
    return int(w)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        names = select_suites(args, cfg)
        if not names:
            parser.print_usage(sys.stderr)
            print("qonsager: error: no suite selected", file=sys.stderr)
            return 2
        cfg_suites = cfg.get("suites") if isinstance(cfg.get("suites"), dict) else {}
        params = {n: suite_params(n, cfg_suites, args) for n in names}
        seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
        if seed < 0:
            raise ConfigError("seed must be non-negative")
        out = args.out or Path(cfg.get("out", "reports"))
        csv_tables = args.csv if args.csv is not None else bool(cfg.get("csv", False))
        timing = args.timing if args.timing is not None else bool(cfg.get("timing", True))
        tol_rel = args.tol_rel if args.tol_rel is not None else cfg.get("tol_rel")
        tol_abs = args.tol_abs if args.tol_abs is not None else cfg.get("tol_abs")
        workers = _resolve_workers(args, cfg)
        if workers > 1 and len(names) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futs = [pool.submit(run_suite, n, params[n], seed, timing) for n in names]
                results = [f.result() for f in futs]
        else:
            results = [run_suite(n, params[n], seed, timing) for n in names]
    except (ConfigError, QonsagerError) as exc:
        print(f"qonsager: error: {exc}", file=sys.stderr)
        return 2
    status = 0
    for r in results:
        apply_tolerances(r, tol_rel, tol_abs)
        paths = write_report(r, out, csv_tables)
        print(f"{'PASS' if r.passed else 'FAIL'} {r.suite}: {sum(c.passed for c in r.checks)}/{len(r.checks)} checks -> {paths[0]}")
        for c in r.checks:
            if not c.passed:
                print(f"  failed: {c.name}: value={c.value} tol={c.tol} witness={c.witness}")
                status = 1
    return status


if __name__ == "__main__":
    sys.exit(main())
