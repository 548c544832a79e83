"""Command-line interface: ``specidx <subcommand> [options]``.

Exit codes: 0 success, 1 a validation criterion failed, 2 bad configuration,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import SCHEMA_VERSION, RunConfig
from .errors import ConfigError, SpecIdxError, UnderResolved

EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

CONFIG_FLAGS = {
    "potential": str, "lam_min": float, "lam_max": float, "npoints": int, "nquad": int,
    "ode_tol": float, "tol_sing": float, "theta": float, "output": str, "seed": int,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _fmt(x) -> str:
    return format(float(x), ".17e")


def _write_csv(path: Path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _write_json(path: Path, payload: dict):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _paths(cfg: RunConfig):
    base = Path(cfg.output)
    if base.suffix in (".csv", ".json"):
        base = base.with_suffix("")
    base.parent.mkdir(parents=True, exist_ok=True)
    return base.with_suffix(".csv"), base.with_suffix(".json")


def _sidecar(cfg: RunConfig, command: str, **extra) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, "config": cfg.to_dict(),
            **extra}


# ----------------------------------------------------------------------------
# subcommands

def cmd_xi_curve(cfg: RunConfig) -> int:
    from .xindex import is_defined, xi_curve

    V = cfg.build_potential()
    curve = xi_curve(V, lam_grid=cfg.lam_grid(), nquad=cfg.nquad, width=cfg.bracket_width,
                     tol=cfg.tol_sing)
    csv_path, json_path = _paths(cfg)
    rows = [[_fmt(lam), str(x) if is_defined(x) else "undefined", int(bool(flag)), _fmt(sv)]
            for lam, x, flag, sv in zip(curve.lambdas, curve.xi, curve.fredholm_flags,
                                        curve.min_singvals)]
    _write_csv(csv_path, ["lambda", "xi", "fredholm", "min_singval"], rows)
    jumps = [{"lo": j.lo, "hi": j.hi, "before": int(j.before), "after": int(j.after),
              "size": int(j.size), "min_singval": j.min_singval} for j in curve.jumps]
    _write_json(json_path, _sidecar(cfg, "xi-curve", jumps=jumps))
    return EXIT_OK


def cmd_flow(cfg: RunConfig) -> int:
    from .scatter1d import build_flow_trace

    V = cfg.build_potential()
    lams = cfg.lam_grid()
    trace = build_flow_trace(V, float(lams[0]), include=lams, ode_tol=cfg.ode_tol)
    steps = trace.step_flow(cfg.theta)
    running = np.concatenate([[0], np.cumsum(steps)])
    rows = []
    for lam in lams:
        i = trace.index_of(float(lam))
        ph = np.sort(trace.phases[i])
        rows.append([_fmt(lam), _fmt(ph[0]), _fmt(ph[1]), int(running[i])])
    csv_path, json_path = _paths(cfg)
    _write_csv(csv_path, ["lambda", "phase_1", "phase_2", "crossings_so_far"], rows)
    mu = -int(trace.suffix_flow(cfg.theta)[0])
    crossings = [{"lo": lo, "hi": hi if math.isfinite(hi) else None, "sign": int(s)}
                 for (lo, hi), _, s in trace.crossings(cfg.theta)]
    _write_json(json_path, _sidecar(cfg, "flow", theta=cfg.theta, lam0=float(lams[0]), mu=mu,
                                    crossings=crossings, trace_points=int(len(trace.lambdas)),
                                    max_motion=trace.max_motion))
    return EXIT_OK


def cmd_bs_spectrum(cfg: RunConfig) -> int:
    from .bsop import a0_b0_1d

    V = cfg.build_potential()
    rows = []
    for lam in cfg.lam_grid():
        op = a0_b0_1d(float(lam), V, cfg.nquad)
        for kind, mat in (("a0", op.a0), ("b0", op.b0)):
            for j, ev in enumerate(np.linalg.eigvalsh(mat)):
                rows.append([_fmt(lam), kind, j, _fmt(ev)])
    csv_path, json_path = _paths(cfg)
    _write_csv(csv_path, ["lambda", "operator", "index", "eigenvalue"], rows)
    _write_json(json_path, _sidecar(cfg, "bs-spectrum", rows=len(rows)))
    return EXIT_OK


def cmd_krein_demo(cfg: RunConfig) -> int:
    from .krein import krein_eval

    if not (0 < cfg.lam_min and cfg.lam_max < 1):
        raise ConfigError("krein-demo needs 0 < lam-min < lam-max < 1")
    evals = [krein_eval(float(lam)) for lam in cfg.lam_grid()]
    rows = [[_fmt(e.lam), _fmt(e.t0_numeric.real), _fmt(e.t0_numeric.imag),
             _fmt(e.t0_closed.real), _fmt(e.t0_closed.imag), _fmt(e.abs_err)] for e in evals]
    csv_path, json_path = _paths(cfg)
    _write_csv(csv_path, ["lambda", "re_numeric", "im_numeric", "re_closed", "im_closed",
                          "abs_err"], rows)
    worst = max(abs(1 + e.t0_numeric.real) for e in evals)
    _write_json(json_path, _sidecar(cfg, "krein-demo", max_abs_1_plus_a0=worst,
                                    max_abs_err=max(e.abs_err for e in evals)))
    return EXIT_OK


def cmd_validate(cfg: RunConfig, criteria=None, corrupt_resolvent: bool = False) -> int:
    from .acceptance import run_all

    results = run_all(criteria, seed=cfg.seed, corrupt_resolvent=corrupt_resolvent,
                      log=lambda s: print(s, flush=True))
    _, json_path = _paths(cfg)
    report = {"schema_version": SCHEMA_VERSION, "seed": cfg.seed,
              "corrupt_resolvent": corrupt_resolvent,
              "passed": all(r.passed for r in results),
              "criteria": [r.to_dict() for r in results]}
    _write_json(json_path, report)
    failed = [r for r in results if not r.passed]
    if failed:
        first = failed[0]
        print(f"first failing criterion: {first.number} ({first.name})", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


COMMANDS = {
    "xi-curve": cmd_xi_curve,
    "flow": cmd_flow,
    "bs-spectrum": cmd_bs_spectrum,
    "krein-demo": cmd_krein_demo,
    "validate": cmd_validate,
}


# ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--config", help="JSON file with RunConfig fields")
    common.add_argument("--potential", help="built-in potential name")
    common.add_argument("--params", help="JSON object of potential parameters")
    common.add_argument("--lam-min", type=float)
    common.add_argument("--lam-max", type=float)
    common.add_argument("--npoints", type=int)
    common.add_argument("--nquad", type=int)
    common.add_argument("--ode-tol", type=float)
    common.add_argument("--tol-sing", type=float)
    common.add_argument("--theta", type=float, help="unit-circle angle in (0, 2 pi)")
    common.add_argument("--output", help="output path prefix (.csv and .json are written)")
    common.add_argument("--seed", type=int)

    p = _Parser(prog="specidx", allow_abbrev=False,
                description="Spectral index of Schrodinger pairs on the essential spectrum.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "xi-curve": "index along an energy grid with jump brackets",
        "flow": "eigenphases of the scattering matrix and crossings of -1",
        "bs-spectrum": "eigenvalues of A0 and B0 per energy",
        "krein-demo": "rank-one example with a degenerate singular set",
        "validate": "run the acceptance suite",
    }
    for name, text in helps.items():
        sp = sub.add_parser(name, parents=[common], help=text, allow_abbrev=False)
        if name == "validate":
            sp.add_argument("--criteria", help="comma-separated criterion numbers (default all)")
            sp.add_argument("--corrupt-resolvent", action="store_true",
                            help="negative control: perturb the resolvent identity check")
    return p


def config_from_args(args) -> RunConfig:
    data = {}
    if args.config:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        data = RunConfig.from_json(text).to_dict()
    if args.command == "krein-demo":
        data.setdefault("lam_min", 0.05)
        data.setdefault("lam_max", 0.95)
        data.setdefault("npoints", 20)
    for name in CONFIG_FLAGS:
        value = getattr(args, name, None)
        if value is not None:
            data[name] = value
    if args.params is not None:
        try:
            params = json.loads(args.params)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"--params is not valid JSON: {exc}") from None
        if not isinstance(params, dict):
            raise ConfigError("--params must be a JSON object")
        data["params"] = params
    return RunConfig.from_dict(data)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = config_from_args(args)
        cfg.build_potential()
        if args.command == "validate":
            crit = None
            if args.criteria:
                try:
                    crit = [int(c) for c in args.criteria.split(",")]
                except ValueError:
                    raise ConfigError("--criteria must be comma-separated integers") from None
                if any(not 1 <= c <= 11 for c in crit):
                    raise ConfigError("criteria are numbered 1 to 11")
            return cmd_validate(cfg, crit, args.corrupt_resolvent)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"specidx: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except UnderResolved as exc:
        print(f"specidx: numerical failure: {exc} (grid size attempted: {exc.npoints})",
              file=sys.stderr)
        return EXIT_NUMERIC
    except SpecIdxError as exc:
        print(f"specidx: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
