"""Command-line front end.

    kinrelax run <config-file> [key=value ...]
    kinrelax stability-table [--output DIR]
    kinrelax convergence <case> --orders 1,2,4 --grids 10..320 [--output DIR]

A config file holds one ``key = value`` option per line; ``#`` starts a
comment. Exit status is 0 on success, 1 on a numerical failure and 2 on a
configuration error.
"""

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from . import harness
from .stability import stability_table
from .systems import AdmissibilityError
from .timeint import default_cfl

EXIT_OK, EXIT_NUMERICAL, EXIT_CONFIG = 0, 1, 2

CASES = harness.CASES + ("stability_table",)
DEFAULT_N = {
    "gaussian_a": (10, 20, 40, 80, 160),
    "gaussian_b": (10, 20, 40, 80, 160),
    "gaussian_c": (10, 20, 40, 80, 160),
    "couette_iso": (8,),
    "couette_adiab": (16,),
}
SNAPSHOT_COLUMNS = ("x", "y", "rho", "u", "v", "P", "T")


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


@dataclass(frozen=True)
class RunConfig:
    case: str
    N: tuple = ()
    nx: int | None = None
    ny: int | None = None
    order: int = 4
    iterations: int | None = None
    cfl: float | None = None
    a: float | str | None = None
    t_end: float | None = None
    output: str = "out"
    snapshot_every: float | None = None
    threads: int | None = None
    re: float = 200.0
    init: str = "equilibrium"
    study: str = "convergence"
    a_multipliers: tuple = (2.1, 4.2, 8.4, 16.8)
    steady_tol: float = 1e-12


def parse_grid_list(text):
    """``"10,20,40"`` or the dyadic range ``"10..320"``."""
    text = text.strip()
    if ".." in text:
        lo, hi = (int(x) for x in text.split(".."))
        if lo < 1 or hi < lo:
            raise ConfigError(f"bad grid range {text!r}")
        out = [lo]
        while out[-1] * 2 <= hi:
            out.append(out[-1] * 2)
        return tuple(out)
    values = tuple(int(x) for x in text.split(",") if x.strip())
    if not values or min(values) < 1:
        raise ConfigError(f"bad grid list {text!r}")
    return values


def _float_list(text):
    return tuple(float(x) for x in text.split(",") if x.strip())


def _speed(text):
    return "dynamic" if text.strip() == "dynamic" else float(text)


_PARSERS = {
    "case": str,
    "N": parse_grid_list,
    "nx": int,
    "ny": int,
    "order": int,
    "iterations": int,
    "cfl": float,
    "a": _speed,
    "t_end": float,
    "output": str,
    "snapshot_every": float,
    "threads": int,
    "re": float,
    "init": str,
    "study": str,
    "a_multipliers": _float_list,
    "steady_tol": float,
}


def _pairs(text):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        yield key, value


def parse_config(text, overrides=()):
    """Validated :class:`RunConfig` from ``key = value`` text plus overrides."""
    raw = {}
    for key, value in list(_pairs(text)) + [tuple(s.strip() for s in o.split("=", 1))
                                            for o in overrides]:
        if key not in _PARSERS:
            raise ConfigError(f"unknown key {key!r}")
        try:
            raw[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {value!r} ({exc})") from None
    if "case" not in raw:
        raise ConfigError("missing required key 'case'")
    if raw["case"] not in CASES:
        raise ConfigError(f"unknown case {raw['case']!r}; choose from {', '.join(CASES)}")
    if "N" in raw and ("nx" in raw or "ny" in raw):
        raise ConfigError("give either N or nx/ny, not both")
    cfg = RunConfig(**raw)
    return _fill_defaults(cfg)


def _fill_defaults(cfg):
    if cfg.order not in (1, 2, 4):
        raise ConfigError(f"order must be 1, 2 or 4, got {cfg.order}")
    if cfg.iterations is not None and cfg.iterations < 1:
        raise ConfigError("iterations must be positive")
    if cfg.cfl is not None and not cfg.cfl > 0:
        raise ConfigError("cfl must be positive")
    if isinstance(cfg.a, float) and not cfg.a > 0:
        raise ConfigError("kinetic speed a must be positive")
    if not cfg.steady_tol > 0:
        raise ConfigError("steady_tol must be positive")
    if cfg.threads is not None and cfg.threads < 1:
        raise ConfigError("threads must be positive")
    if cfg.init not in ("equilibrium", "chapman_enskog"):
        raise ConfigError(f"init must be equilibrium or chapman_enskog, got {cfg.init!r}")
    if cfg.study not in ("convergence", "knudsen"):
        raise ConfigError(f"study must be convergence or knudsen, got {cfg.study!r}")
    if (cfg.nx is not None or cfg.ny is not None) and cfg.case != "shock_bl":
        raise ConfigError("nx/ny apply only to shock_bl; use N")
    updates = {
        "iterations": cfg.iterations or cfg.order,
        "cfl": cfg.cfl if cfg.cfl is not None else default_cfl(cfg.order),
    }
    if not cfg.N and cfg.case in DEFAULT_N:
        updates["N"] = DEFAULT_N[cfg.case]
    if cfg.case == "shock_bl":
        updates["nx"] = cfg.nx or 250
        updates["ny"] = cfg.ny or (updates["nx"] // 2)
        updates["t_end"] = 0.6 if cfg.t_end is None else cfg.t_end
    elif cfg.case.startswith("gaussian"):
        updates["t_end"] = harness.GAUSS_T if cfg.t_end is None else cfg.t_end
    return replace(cfg, **updates)


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):
        return f"{x:.10e}"
    return str(x)


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _print_table(header, rows):
    print("  ".join(f"{h:>14}" for h in header))
    for row in rows:
        print("  ".join(f"{_fmt(v):>14}" for v in row))


def _report_rows(reports):
    return [(r.case, r.order, r.N, r.error, r.slope, r.mass_drift, r.steps) for r in reports]


REPORT_HEADER = ("case", "order", "N", "error", "slope", "mass_drift", "steps")


def _ledger_entry(r):
    return {"case": r.case, "order": r.order, "N": r.N, "error": r.error,
            "mass_drift": r.mass_drift, "steps": r.steps, "wall_clock": r.wall_clock}


def write_snapshot(path, grid, system, U):
    """Plain-text structured-grid table with columns x, y, rho, u, v, P, T."""
    X, Y = grid.centers()
    rho, vx, vy, P = system.primitives(U[0])
    cols = [X, Y, rho, vx, vy, P, P / rho]
    data = np.column_stack([c.ravel() for c in cols])
    np.savetxt(path, data, fmt="%.10e", header=" ".join(SNAPSHOT_COLUMNS), comments="# ")


def run_stability(out):
    start = time.perf_counter()
    rows = stability_table()
    header = ("time_order", "spatial", "iterations", "lambda_star")
    _write_csv(out / "stability_table.csv", header, rows)
    _print_table(header, rows)
    return [{"case": "stability_table", "rows": len(rows),
             "wall_clock": time.perf_counter() - start}]


def run_gaussian(cfg, out):
    kw = {"iterations": cfg.iterations, "cfl": cfg.cfl, "t_end": cfg.t_end, "init": cfg.init}
    if cfg.study == "knudsen":
        if len(cfg.N) != 1:
            raise ConfigError("a Knudsen study takes a single N")
        reports = harness.knudsen_study(cfg.a_multipliers, N=cfg.N[0], order=cfg.order,
                                        case=cfg.case, **kw)
        rows = [(r.case, r.order, r.N, r.extra["a"], r.extra["knudsen"], r.error, r.slope)
                for r in reports]
        header = ("case", "order", "N", "a", "knudsen", "error", "slope")
        _write_csv(out / f"{cfg.case}_knudsen.csv", header, rows)
        _print_table(header, rows)
        return [_ledger_entry(r) for r in reports]
    if cfg.a is not None:
        kw["a"] = cfg.a
    reports = harness.log2_slopes([harness.gaussian_run(cfg.case, N, cfg.order, **kw)
                                   for N in cfg.N])
    _write_csv(out / f"{cfg.case}_order{cfg.order}.csv", REPORT_HEADER, _report_rows(reports))
    _print_table(REPORT_HEADER, _report_rows(reports))
    return [_ledger_entry(r) for r in reports]


def run_couette(cfg, out):
    reports = []
    for N in cfg.N:
        r = harness.couette_case(cfg.case, N, cfg.order, cfg.iterations, cfg.cfl,
                                  tol=cfg.steady_tol)
        kind = harness.COUETTE_CASES[cfg.case]
        exact = harness.CouetteSetup().exact_temperature(kind, r.extra["x"])
        _write_csv(out / f"{cfg.case}_order{cfg.order}_N{N}_profile.csv", ("x", "T", "T_exact"),
                   zip(r.extra["x"], r.extra["T"], exact))
        print(f"{cfg.case} order {cfg.order} N {N}: max|T - T_exact| = {r.error:.6e} "
              f"after {r.steps} steps")
        reports.append(r)
    harness.log2_slopes(reports)
    _write_csv(out / f"{cfg.case}_order{cfg.order}.csv", REPORT_HEADER, _report_rows(reports))
    return [_ledger_entry(r) for r in reports]


def run_shock(cfg, out):
    system, grid = harness.shock_bl_setup(cfg.re, cfg.nx, cfg.ny)
    marks = []
    if cfg.snapshot_every:
        n = int(math.floor(cfg.t_end / cfg.snapshot_every + 1e-9))
        marks = [round(k * cfg.snapshot_every, 12) for k in range(1, n + 1)]

    def on_snapshot(t, U):
        write_snapshot(out / f"shock_bl_t{t:.4f}.txt", grid, system, U)

    def progress(t, steps):
        if steps % 50 == 0:
            print(f"  step {steps}  t = {t:.5f}", file=sys.stderr, flush=True)

    res = harness.shock_bl_case(cfg.re, cfg.nx, cfg.ny, cfg.t_end, cfg.order, cfg.iterations,
                                cfg.cfl, snapshot_times=marks, on_snapshot=on_snapshot,
                                progress=progress)
    write_snapshot(out / "shock_bl_final.txt", grid, system, res.U)
    print(f"shock_bl Re={cfg.re:g} {cfg.nx}x{cfg.ny}: t={res.t:.6f} steps={res.steps} "
          f"mass={res.mass:.12g} drift={res.mass_drift:.3e} min rho={res.min_rho:.4g} "
          f"min P={res.min_P:.4g} T in [{res.T_range[0]:.4f}, {res.T_range[1]:.4f}]")
    _write_csv(out / "shock_bl.csv",
               ("re", "nx", "ny", "t", "steps", "mass0", "mass", "mass_drift",
                "min_rho", "min_P", "T_min", "T_max"),
               [(cfg.re, cfg.nx, cfg.ny, res.t, res.steps, res.mass0, res.mass, res.mass_drift,
                 res.min_rho, res.min_P, res.T_range[0], res.T_range[1])])
    return [{"case": "shock_bl", "order": cfg.order, "nx": cfg.nx, "ny": cfg.ny,
             "mass_drift": res.mass_drift, "steps": res.steps, "wall_clock": res.wall_clock}]


def _dispatch(cfg, out):
    if cfg.case == "stability_table":
        return run_stability(out)
    if cfg.case.startswith("gaussian"):
        return run_gaussian(cfg, out)
    if cfg.case.startswith("couette"):
        return run_couette(cfg, out)
    return run_shock(cfg, out)


def run(cfg):
    """Execute a validated config; returns the process exit status."""
    out = Path(cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    try:
        if cfg.threads is not None:
            from threadpoolctl import threadpool_limits
            with threadpool_limits(limits=cfg.threads):
                ledger = _dispatch(cfg, out)
        else:
            ledger = _dispatch(cfg, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (AdmissibilityError, FloatingPointError, RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    with open(out / f"{cfg.case}_ledger.json", "w") as fh:
        json.dump({"config": asdict(cfg), "runs": ledger}, fh, indent=2, default=str)
    return EXIT_OK


def _orders(text):
    try:
        orders = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad order list {text!r}") from None
    return orders


def build_parser():
    parser = argparse.ArgumentParser(prog="kinrelax", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a case from a config file")
    p_run.add_argument("config", help="config file, or '-' for standard input")
    p_run.add_argument("overrides", nargs="*", metavar="key=value")

    p_tab = sub.add_parser("stability-table", help="critical CFL numbers of every pairing")
    p_tab.add_argument("--output", default="out")

    p_conv = sub.add_parser("convergence", help="error and observed order over a grid list")
    p_conv.add_argument("case", choices=[c for c in harness.CASES if c != "shock_bl"])
    p_conv.add_argument("--orders", type=_orders, default=(1, 2, 4))
    p_conv.add_argument("--grids", default=None, help="'10,20,40' or the dyadic range '10..320'")
    p_conv.add_argument("--output", default="out")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        if args.command == "run":
            text = sys.stdin.read() if args.config == "-" else Path(args.config).read_text()
            configs = [parse_config(text, args.overrides)]
        elif args.command == "stability-table":
            configs = [parse_config(f"case = stability_table\noutput = {args.output}")]
        else:
            lines = [f"case = {args.case}", f"output = {args.output}"]
            if args.grids:
                lines.append(f"N = {args.grids}")
            configs = [parse_config("\n".join(lines + [f"order = {o}"])) for o in args.orders]
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    status = EXIT_OK
    for cfg in configs:
        status = max(status, run(cfg))
    return status


if __name__ == "__main__":
    sys.exit(main())
