"""Command-line front end: certification, verification, transport, solving.

Every subcommand reads JSON (inline or ``@file``), writes a JSON report
(stdout by default, ``--output`` to a file) stamped ``"schema": 1``, and
exits with

* 0 -- the requested check passed (or the command has no pass/fail),
* 1 -- a certification or verification ran and failed,
* 2 -- configuration/schema problems (bad names, bad JSON, side-condition
  violations, malformed configs),
* 3 -- numeric domain problems (singular sets, precision loss, sampling
  starvation, solver instability or blow-up).

Field dumps are CSV with header ``t,x,y,u,v,w`` at 14 significant
digits.  The sampling seed defaults to 42; the environment variable
``DLV_SEED`` overrides that default (explicit ``--seed`` wins over
both).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from dlvlab import figures as figmod
from dlvlab.errors import (DlvLabError, DomainError, IntegrationError,
                           ParameterError, PrecisionError, SamplingError,
                           SchemaError, SolverError)
from dlvlab.numerics import SampleSpec
from dlvlab.solutions import catalog_names, make_solution, to_lab_frame
from dlvlab.solver import convergence_study, solve_planar, solve_radial
from dlvlab.streams import CASES as STREAM_CASES
from dlvlab.streams import example_stream, make_stream
from dlvlab.symmetry import case_generators, verify_all_cases, verify_case
from dlvlab.systems import KINDS, certify
from dlvlab.transport import lift_rotating, transport

_FMT = "%.14g"
_CSV_HEADER = "t,x,y,u,v,w"


# --------------------------------------------------------------------------
# small plumbing
# --------------------------------------------------------------------------


def _default_seed() -> int:
    raw = os.environ.get("DLV_SEED", "42")
    try:
        return int(raw)
    except ValueError as exc:
        raise SchemaError(f"DLV_SEED must be an integer, got {raw!r}") \
            from exc


def _load_json(text: str, what: str):
    """Parse inline JSON, or read a file when the value starts with '@'."""
    if text.startswith("@"):
        path = Path(text[1:])
        if not path.exists():
            raise SchemaError(f"{what}: no such file {str(path)!r}")
        text = path.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{what}: invalid JSON ({exc})") from exc


def _emit(report: dict, output: str | None) -> None:
    blob = json.dumps(report, indent=2, sort_keys=False)
    if output:
        Path(output).write_text(blob + "\n")
    else:
        print(blob)


def _constants(args) -> dict:
    raw = getattr(args, "constants", None)
    if not raw:
        return {}
    data = _load_json(raw, "--constants")
    if not isinstance(data, dict):
        raise SchemaError("--constants must be a JSON object")
    return data


def _write_field_csv(path, rows: np.ndarray) -> None:
    np.savetxt(path, rows, fmt=_FMT, delimiter=",", header=_CSV_HEADER,
               comments="")


def _final_frame_rows(res) -> np.ndarray:
    """Final solver state as (t,x,y,u,v,w) rows; radial runs put r in x."""
    if res.kind == "pde_radial":
        r = np.asarray(res.axes[0], dtype=float)
        cols = [np.full_like(r, res.t_final), r, np.zeros_like(r)]
        cols += [np.asarray(f, dtype=float) for f in res.fields]
        return np.column_stack(cols)
    x, y = res.axes
    X, Y = np.meshgrid(np.asarray(x, float), np.asarray(y, float),
                       indexing="xy")
    cols = [np.full(X.size, res.t_final), X.ravel(), Y.ravel()]
    cols += [np.asarray(f, dtype=float).ravel() for f in res.fields]
    return np.column_stack(cols)


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_catalog(args) -> int:
    listing = {
        "schema": 1,
        "command": "catalog",
        "solutions": {name: make_solution(name).to_json()
                      for name in catalog_names()},
        "systems": {kind: {"fields": list(info.field_names),
                           "needs_stream": info.needs_stream,
                           "extras": list(info.extras),
                           "unit_k_only": info.unit_k_only,
                           "description": info.description}
                    for kind, info in sorted(KINDS.items())},
        "stream_cases": {case: example_stream(case).to_json()
                         for case in STREAM_CASES},
    }
    _emit(listing, args.output)
    return 0


def cmd_certify(args) -> int:
    sol = make_solution(args.solution, **_constants(args))
    kind = sol.target_system().kind
    if args.kind is not None and args.kind != kind:
        raise ParameterError(
            f"{args.solution} certifies against its own target system "
            f"{kind!r}; cannot certify against {args.kind!r}")
    sample = SampleSpec(seed=args.seed, count=args.samples,
                        box=sol.default_box)
    report = certify(sol, tol=args.tol, sample=sample)
    _emit({"schema": 1, "command": "certify", "passed": report.passed,
           "report": report.to_json()}, args.output)
    return 0 if report.passed else 1


def cmd_verify_classification(args) -> int:
    if args.case == "all":
        if args.params:
            raise SchemaError("--params applies to a single case, not 'all'")
        reports = verify_all_cases(tol=args.tol, count=args.samples,
                                   seed=args.seed)
    else:
        params = (_load_json(args.params, "--params")
                  if args.params else None)
        reports = [verify_case(args.case, params=params, tol=args.tol,
                               count=args.samples, seed=args.seed)]
    passed = all(r.passed for r in reports)
    _emit({"schema": 1, "command": "verify-classification",
           "passed": passed, "cases": [r.to_json() for r in reports]},
          args.output)
    return 0 if passed else 1


def cmd_flow(args) -> int:
    sol = make_solution(args.solution, **_constants(args))
    kind = sol.target_system().kind
    if kind == "pde_radial":
        sol = to_lab_frame(sol)
    elif kind == "pde_rotated_free":
        sol = lift_rotating(sol)
    spec = sol.target_system()
    if spec.kind != "pde_full":
        raise ParameterError(
            f"flow transport needs a planar-liftable solution; "
            f"{args.solution} targets {kind!r}")
    gens = {g.name: g
            for g in case_generators(spec.stream, sys_params=spec.params)}
    if args.generator not in gens:
        raise ParameterError(
            f"unknown generator {args.generator!r} for this solution's "
            f"stream; available: " + ", ".join(sorted(gens)))
    moved = transport(sol, gens[args.generator], args.eps)
    sample = SampleSpec(seed=args.seed, count=args.samples,
                        box=moved.default_box)
    report = certify(moved, tol=args.tol, sample=sample)
    _emit({"schema": 1, "command": "flow", "generator": args.generator,
           "eps": args.eps, "passed": report.passed,
           "report": report.to_json()}, args.output)
    return 0 if report.passed else 1


_SIM_KEYS = {"solution", "constants", "box", "nx", "ny", "nr", "cfl",
             "scheme", "integrator", "csv"}
_CONV_KEYS = {"solution", "constants", "box", "resolutions", "cfl",
              "scheme", "integrator", "csv"}


def _check_config(cfg: dict, allowed: set, what: str) -> None:
    if not isinstance(cfg, dict):
        raise SchemaError(f"{what} config must be a JSON object")
    if "solution" not in cfg:
        raise SchemaError(f"{what} config is missing the 'solution' field")
    unknown = set(cfg) - allowed
    if unknown:
        raise SchemaError(f"{what} config has unknown fields: "
                          + ", ".join(sorted(unknown)))


def _config_solution(cfg: dict):
    constants = cfg.get("constants", {})
    if not isinstance(constants, dict):
        raise SchemaError("'constants' must be a JSON object")
    return make_solution(cfg["solution"], **constants)


def _config_box(cfg: dict, kind: str):
    box = cfg.get("box")
    if box is None:
        return None
    want = 2 if kind == "pde_radial" else 3
    try:
        parsed = tuple((float(lo), float(hi)) for lo, hi in box)
    except (TypeError, ValueError) as exc:
        raise SchemaError("'box' must be a list of [lo, hi] pairs") from exc
    if len(parsed) != want:
        raise SchemaError(f"'box' needs {want} [lo, hi] pairs for {kind}")
    return parsed


def cmd_simulate(args) -> int:
    cfg = _load_json(args.config, "--config")
    _check_config(cfg, _SIM_KEYS, "simulate")
    sol = _config_solution(cfg)
    kind = sol.target_system().kind
    box = _config_box(cfg, kind)
    common = {"box": box, "cfl": float(cfg.get("cfl", 0.4)),
              "scheme": cfg.get("scheme", "central"),
              "integrator": cfg.get("integrator", "rk4")}
    if kind == "pde_radial":
        if "nx" in cfg or "ny" in cfg:
            raise SchemaError("radial simulate takes 'nr', not 'nx'/'ny'")
        res = solve_radial(sol, nr=int(cfg.get("nr", 65)), **common)
    elif kind == "pde_full":
        if "nr" in cfg:
            raise SchemaError("planar simulate takes 'nx'/'ny', not 'nr'")
        ny = cfg.get("ny")
        res = solve_planar(sol, nx=int(cfg.get("nx", 65)),
                           ny=None if ny is None else int(ny), **common)
    else:
        raise ParameterError(
            f"simulate needs a pde_full or pde_radial solution, got {kind}")
    files = []
    if cfg.get("csv"):
        _write_field_csv(cfg["csv"], _final_frame_rows(res))
        files.append(cfg["csv"])
    _emit({"schema": 1, "command": "simulate", "files": files,
           "report": res.to_json()}, args.output)
    return 0


def cmd_convergence(args) -> int:
    cfg = _load_json(args.config, "--config")
    _check_config(cfg, _CONV_KEYS, "convergence")
    sol = _config_solution(cfg)
    kind = sol.target_system().kind
    if kind not in ("pde_full", "pde_radial"):
        raise ParameterError(
            f"convergence needs a pde_full or pde_radial solution, "
            f"got {kind}")
    resolutions = tuple(int(n) for n in cfg.get("resolutions",
                                                (33, 65, 129)))
    rep = convergence_study(sol, resolutions=resolutions,
                            box=_config_box(cfg, kind),
                            cfl=float(cfg.get("cfl", 0.4)),
                            scheme=cfg.get("scheme", "central"),
                            integrator=cfg.get("integrator", "rk4"))
    files = []
    if cfg.get("csv"):
        if kind == "pde_radial":
            res = solve_radial(sol, box=_config_box(cfg, kind),
                               nr=resolutions[-1],
                               cfl=float(cfg.get("cfl", 0.4)),
                               scheme=cfg.get("scheme", "central"),
                               integrator=cfg.get("integrator", "rk4"))
        else:
            res = solve_planar(sol, box=_config_box(cfg, kind),
                               nx=resolutions[-1],
                               cfl=float(cfg.get("cfl", 0.4)),
                               scheme=cfg.get("scheme", "central"),
                               integrator=cfg.get("integrator", "rk4"))
        _write_field_csv(cfg["csv"], _final_frame_rows(res))
        files.append(cfg["csv"])
    _emit({"schema": 1, "command": "convergence", "files": files,
           "report": rep.to_json()}, args.output)
    return 0


def cmd_figure(args) -> int:
    out_dir = args.out_dir or f"{args.figure}_data"
    report = figmod.write_figure(args.figure, out_dir, nx=args.nx)
    blob = report.to_json()
    blob["command"] = "figure"
    blob["out_dir"] = str(out_dir)
    _emit(blob, args.output)
    return 0


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def _build_parser(seed_default: int) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dlvlab",
        description="verification laboratory for the advected "
                    "three-component bilinear reaction-diffusion system")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_output(p):
        p.add_argument("--output", help="write the JSON report here "
                                        "instead of stdout")

    p = sub.add_parser("catalog", help="list solutions, systems, streams")
    add_output(p)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("certify", help="residual-certify a catalog solution")
    p.add_argument("solution", help="catalog name, see `dlvlab catalog`")
    p.add_argument("--constants", help="JSON object (or @file) of parameter "
                                       "overrides")
    p.add_argument("--kind", help="expected target system kind (checked "
                                  "against the solution's own)")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=seed_default)
    p.add_argument("--tol", type=float, default=1e-9)
    add_output(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify-classification",
                       help="verify the symmetry classification table")
    p.add_argument("case", help="case1..case11 or 'all'")
    p.add_argument("--params", help="JSON object (or @file) of stream "
                                    "parameters (single case only)")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=seed_default)
    p.add_argument("--tol", type=float, default=1e-10)
    add_output(p)
    p.set_defaults(func=cmd_verify_classification)

    p = sub.add_parser("flow", help="transport a solution along a symmetry "
                                    "generator, then certify it")
    p.add_argument("generator", help="generator name for the solution's "
                                     "stream family (e.g. dilation)")
    p.add_argument("solution", help="catalog name; radial entries are "
                                    "lifted to the plane first")
    p.add_argument("--eps", type=float, default=0.1,
                   help="group parameter (default 0.1)")
    p.add_argument("--constants", help="JSON object (or @file) of parameter "
                                       "overrides")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=seed_default)
    p.add_argument("--tol", type=float, default=1e-7)
    add_output(p)
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("simulate", help="finite-difference march against "
                                        "exact data")
    p.add_argument("--config", required=True,
                   help="JSON object (or @file): solution, constants, box, "
                        "nx/ny or nr, cfl, scheme, integrator, csv")
    add_output(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("convergence", help="grid refinement study")
    p.add_argument("--config", required=True,
                   help="JSON object (or @file): solution, constants, box, "
                        "resolutions, cfl, scheme, integrator, csv")
    add_output(p)
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("figure", help="export reference figure data")
    p.add_argument("figure", choices=sorted(figmod.FIGURES))
    p.add_argument("--out-dir", help="directory for CSV frames and the "
                                     "gnuplot script (default FIG_data)")
    p.add_argument("--nx", type=int, default=101,
                   help="grid points per axis (default 101)")
    add_output(p)
    p.set_defaults(func=cmd_figure)

    return parser


def main(argv=None) -> int:
    try:
        parser = _build_parser(_default_seed())
        args = parser.parse_args(argv)
        return args.func(args)
    except (ParameterError, SchemaError) as exc:
        print(json.dumps({"schema": 1, "error": str(exc),
                          "error_type": type(exc).__name__}),
              file=sys.stderr)
        return 2
    except (DomainError, PrecisionError, SamplingError, IntegrationError,
            SolverError) as exc:
        print(json.dumps({"schema": 1, "error": str(exc),
                          "error_type": type(exc).__name__}),
              file=sys.stderr)
        return 3
    except DlvLabError as exc:   # pragma: no cover - future error kinds
        print(json.dumps({"schema": 1, "error": str(exc),
                          "error_type": type(exc).__name__}),
              file=sys.stderr)
        return 3


if __name__ == "__main__":       # pragma: no cover
    sys.exit(main())
