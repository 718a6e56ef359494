"""charlift command line: eval, table, verify, chambers.

Exit codes: 0 success, 2 invalid or singular input, 3 verification failure,
4 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .cartan import CoveredTorusPoint, chamber_id, format_chamber
from .characters import CharacterSpec, theta_lift_unn1, theta_upq
from .errors import CharliftError
from .oracles import QuadratureParams

EXIT_OK, EXIT_INPUT, EXIT_FAIL, EXIT_TIMEOUT = 0, 2, 3, 4
SUITES = ("contour", "upq", "lift", "chambers", "invariants", "all")


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    group: str = "upq"
    p: int | None = None
    q: int | None = None
    n: int | None = None
    m: int | None = None
    t: int | None = None
    coords: dict[str, float] = field(default_factory=dict)
    sweeps: list[tuple[str, float, float, int]] = field(default_factory=list)
    out: str | None = None
    fmt: str = "json"
    tol: float | None = None
    nodes: int = 4096
    seed: int = 0
    threads: int = 1
    suite: str = "all"
    samples: int = 1000
    points: int = 3
    budget: float = 300.0

    @property
    def dim(self) -> int:
        if self.group == "lift":
            return 2 * self.n + 1
        return self.p + self.q

    def coord_names(self) -> list[str]:
        return [f"X{k}" for k in range(1, self.dim + 1)]

    def group_label(self) -> str:
        if self.group == "lift":
            return f"lift(n={self.n})"
        return f"upq(p={self.p},q={self.q})"


def resolve_threads(flag: int | None) -> int:
    if flag:
        return max(1, flag)
    env = os.environ.get("CHARLIFT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InputError(f"CHARLIFT_THREADS must be an integer, got {env!r}")
    return os.cpu_count() or 1


def parse_bindings(text: str | None) -> dict[str, float]:
    out: dict[str, float] = {}
    if not text:
        return out
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise InputError(f"coordinate binding {item!r} is not of the form k=v")
        key, value = item.split("=", 1)
        try:
            out[key.strip()] = float(value)
        except ValueError:
            raise InputError(f"coordinate {key!r} has non-numeric value {value!r}")
    return out


def parse_sweep(text: str) -> tuple[str, float, float, int]:
    try:
        key, rng = text.split("=", 1)
        a, b, steps = rng.split(":")
        return key.strip(), float(a), float(b), int(steps)
    except ValueError:
        raise InputError(f"sweep {text!r} is not of the form k=a:b:steps")


def build_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        command=args.command,
        group=getattr(args, "group", "upq") or "upq",
        p=args.p, q=args.q, n=args.n, m=args.m, t=args.t,
        coords=parse_bindings(getattr(args, "coords", None)),
        sweeps=[parse_sweep(s) for s in (getattr(args, "sweep", None) or [])],
        out=args.out, fmt=args.format, tol=args.tol, nodes=args.nodes, seed=args.seed,
        threads=resolve_threads(args.threads),
        suite=getattr(args, "suite", "all"),
        samples=getattr(args, "samples", 1000),
        points=getattr(args, "points", 3),
        budget=getattr(args, "budget", 300.0),
    )
    for _, _, _, steps in cfg.sweeps:
        if steps < 1:
            raise InputError("sweep steps must be >= 1")
    if len(cfg.sweeps) > 3:
        raise InputError("at most 3 swept coordinates")
    return cfg


def _require_spec_fields(cfg: RunConfig) -> None:
    missing = [name for name in ("m", "t") if getattr(cfg, name) is None]
    if cfg.group == "lift":
        missing += ["n"] if cfg.n is None else []
    else:
        missing += [name for name in ("p", "q") if getattr(cfg, name) is None]
    if missing:
        raise InputError("missing " + ", ".join("--" + name for name in missing))


def make_point(cfg: RunConfig, values: dict[str, float]) -> CoveredTorusPoint:
    names = cfg.coord_names()
    unknown = set(values) - set(names)
    if unknown:
        raise InputError(f"unknown coordinates {sorted(unknown)}; expected {names}")
    missing = [k for k in names if k not in values]
    if missing:
        raise InputError(f"unbound coordinates {missing}")
    coords = [values[k] for k in names]
    if cfg.group == "lift":
        return CoveredTorusPoint.unn1(cfg.n, cfg.t, coords)
    return CoveredTorusPoint.upq(cfg.p, cfg.q, cfg.t, coords)


def evaluate(cfg: RunConfig, point: CoveredTorusPoint) -> tuple[complex, str, str]:
    if cfg.group == "lift":
        res = theta_lift_unn1(CharacterSpec.unn1(cfg.n, cfg.m, cfg.t), point)
    else:
        res = theta_upq(CharacterSpec.upq(cfg.p, cfg.q, cfg.m, cfg.t), point)
    return res.value, res.normalization, format_chamber(chamber_id(point))


def _num(x: float) -> str:
    return repr(float(x))


def record(cfg: RunConfig, values: dict[str, float], value, tag, chamber, status=None) -> dict:
    rec = {
        "group": cfg.group_label(),
        "m": cfg.m,
        "t": cfg.t,
        "coords": {k: values[k] for k in cfg.coord_names()},
        "value_re": None if value is None else value.real,
        "value_im": None if value is None else value.imag,
        "normalization_tag": tag,
        "chamber_id": chamber,
    }
    if status is not None:
        rec["status"] = status
    return rec


class Writer:
    """Serializes records as CSV (header first) or JSON lines."""

    def __init__(self, stream, fmt: str, coord_names: list[str], with_status: bool):
        self.stream = stream
        self.fmt = fmt
        self.coord_names = coord_names
        self.with_status = with_status
        if fmt == "csv":
            self.csv = csv.writer(stream, lineterminator="\n")
            header = ["group", "m", "t", *coord_names, "re", "im", "normalization_tag", "chamber_id"]
            self.csv.writerow(header + (["status"] if with_status else []))

    def write(self, rec: dict) -> None:
        if self.fmt == "json":
            self.stream.write(json.dumps(rec, separators=(",", ":")) + "\n")
            return
        fmt = lambda v: "" if v is None else _num(v)
        row = [rec["group"], rec["m"], rec["t"], *(_num(rec["coords"][k]) for k in self.coord_names),
               fmt(rec["value_re"]), fmt(rec["value_im"]), rec["normalization_tag"], rec["chamber_id"]]
        if self.with_status:
            row.append(rec.get("status", ""))
        self.csv.writerow(row)


def _open_out(path: str | None):
    if path is None:
        return sys.stdout, False
    try:
        return open(path, "w", newline="", encoding="utf-8"), True
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}")


def run_eval(cfg: RunConfig) -> int:
    _require_spec_fields(cfg)
    point = make_point(cfg, cfg.coords)
    value, tag, chamber = evaluate(cfg, point)
    stream, close = _open_out(cfg.out)
    try:
        Writer(stream, cfg.fmt, cfg.coord_names(), False).write(record(cfg, cfg.coords, value, tag, chamber))
    finally:
        if close:
            stream.close()
    return EXIT_OK


def sweep_grid(cfg: RunConfig) -> list[dict[str, float]]:
    axes = []
    for key, a, b, steps in cfg.sweeps:
        if key in cfg.coords:
            raise InputError(f"{key} is both fixed and swept")
        axes.append([(key, float(v)) for v in np.linspace(a, b, steps)])
    rows = []
    for combo in itertools.product(*axes):
        values = dict(cfg.coords)
        values.update(combo)
        rows.append(values)
    return rows


def _table_row(cfg: RunConfig, values: dict[str, float]) -> dict:
    point = make_point(cfg, values)
    try:
        value, tag, chamber = evaluate(cfg, point)
    except CharliftError:
        return record(cfg, values, None, "up_to_global_constant", "", "singular")
    return record(cfg, values, value, tag, chamber, "ok")


def run_table(cfg: RunConfig) -> int:
    _require_spec_fields(cfg)
    grid = sweep_grid(cfg)
    make_point(cfg, grid[0])  # validate bindings before spinning up workers
    if cfg.threads == 1:
        rows = [_table_row(cfg, v) for v in grid]
    else:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            rows = list(pool.map(lambda v: _table_row(cfg, v), grid, chunksize=64))
    stream, close = _open_out(cfg.out)
    try:
        writer = Writer(stream, cfg.fmt, cfg.coord_names(), True)
        for rec in rows:
            writer.write(rec)
    finally:
        if close:
            stream.close()
    return EXIT_OK


# --- verify ------------------------------------------------------------------


def _verify_cases(cfg: RunConfig) -> list[tuple[str, str, object]]:
    """(suite, case name, thunk returning (error, tolerance, detail))."""
    from . import suites

    params = QuadratureParams(nodes=cfg.nodes)
    wanted = SUITES[:-1] if cfg.suite == "all" else (cfg.suite,)
    cases = []
    for suite in wanted:
        for name, thunk in suites.build(suite, cfg, params):
            cases.append((suite, name, thunk))
    return cases


def run_verify(cfg: RunConfig) -> int:
    start = time.monotonic()
    stream, close = _open_out(cfg.out)
    worst = EXIT_OK
    try:
        for suite, name, thunk in _verify_cases(cfg):
            rec = {"suite": suite, "case": name}
            if time.monotonic() - start > cfg.budget:
                rec.update(status="timeout")
                worst = max(worst, EXIT_TIMEOUT)
            else:
                try:
                    err, tol, detail = thunk()
                except CharliftError as exc:
                    err, tol, detail = math.inf, 0.0, f"error: {exc}"
                if cfg.tol is not None:
                    tol = cfg.tol
                ok = err <= tol
                rec.update(status="pass" if ok else "fail", error=err, tolerance=tol, detail=detail)
                if not ok:
                    worst = max(worst, EXIT_FAIL)
            stream.write(json.dumps(rec, separators=(",", ":")) + "\n")
            stream.flush()
    finally:
        if close:
            stream.close()
    return worst


def run_chambers(cfg: RunConfig) -> int:
    from .oracles import chamber_sign_scan

    if cfg.n is None or cfg.t is None:
        raise InputError("chambers needs --n and --t")
    reports = chamber_sign_scan(cfg.n, cfg.t, cfg.samples, cfg.seed)
    stream, close = _open_out(cfg.out)
    try:
        if cfg.fmt == "csv":
            w = csv.writer(stream, lineterminator="\n")
            w.writerow(["chamber", "samples", "resampled", "sign", "max_imag_ratio", "violations", "passed"])
            for r in reports:
                w.writerow([r.chamber, r.samples, r.resampled, r.sign, _num(r.max_imag_ratio), r.violations, r.passed])
        else:
            for r in reports:
                stream.write(json.dumps(r.to_dict(), separators=(",", ":")) + "\n")
    finally:
        if close:
            stream.close()
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


# --- argument parsing ------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", choices=("upq", "lift"), default="upq")
    for name in ("p", "q", "n", "m", "t"):
        common.add_argument(f"--{name}", type=int)
    common.add_argument("--out")
    common.add_argument("--format", choices=("csv", "json"), default="json")
    common.add_argument("--tol", type=float)
    common.add_argument("--nodes", type=int, default=4096)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int)

    parser = argparse.ArgumentParser(prog="charlift", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", parents=[common], help="evaluate one character value")
    ev.add_argument("--coords", required=True)

    tb = sub.add_parser("table", parents=[common], help="sweep coordinates on a grid")
    tb.add_argument("--coords")
    tb.add_argument("--sweep", action="append", required=True)

    vf = sub.add_parser("verify", parents=[common], help="run verification suites")
    vf.add_argument("suite", nargs="?", choices=SUITES, default="all")
    vf.add_argument("--points", type=int, default=3, help="random points per oracle case")
    vf.add_argument("--samples", type=int, default=1000, help="samples per chamber")
    vf.add_argument("--budget", type=float, default=300.0, help="wall-clock seconds before remaining cases time out")

    ch = sub.add_parser("chambers", parents=[common], help="scan chamber signs of the boundary denominator")
    ch.add_argument("--samples", type=int, default=1000)
    return parser


COMMANDS = {"eval": run_eval, "table": run_table, "verify": run_verify, "chambers": run_chambers}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        return COMMANDS[cfg.command](cfg)
    except (InputError, CharliftError) as exc:
        print(f"charlift: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
