"""Command-line driver.

    toda2 algebra build sl3 [--out spec.json]
    toda2 algebra validate <name-or-path>
    toda2 check {mcybe,jacobi,involutivity,casimir,morphism,independence,
                 rank,rais,quadratic-relations,toda,all} --algebra sl2 …
    toda2 flow run --algebra sl2 --field t --dt 1e-3 --T 1.0 [--csv out.csv]
    toda2 flow commutation --algebra sl2

Exit codes: 0 all checks pass, 1 at least one check failed, 2 usage or
configuration error.  Reports are deterministic for fixed flags.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from .algebra import (
    AlgebraError,
    AlgebraSpec,
    build_gl,
    build_sl,
    load_spec,
    save_spec,
    spec_to_document,
    validate_spec,
)
from .checks import BATTERY_NAMES, run_battery
from .flows import (
    FlowConfig,
    flow_commutation,
    integrate,
    pencil_eigenvalue_drift,
    trajectory_to_csv,
)
from .poisson import CapabilityError, PreconditionError, phase_tp
from .reports import CheckReport, all_pass, emit_report

_BUILTIN = re.compile(r"^(sl|gl)([2-9]\d*)$")


def resolve_algebra(token: str) -> AlgebraSpec:
    """A builtin name like sl3/gl2, or a path to a saved spec document."""
    m = _BUILTIN.match(token)
    if m:
        kind, n = m.group(1), int(m.group(2))
        return build_sl(n) if kind == "sl" else build_gl(n)
    if Path(token).exists():
        return load_spec(token)
    raise AlgebraError(
        f"unknown algebra {token!r}: expected sl<n>, gl<n>, or a spec file path"
    )


def _emit(reports: list[CheckReport], args) -> int:
    text = emit_report(reports, fmt=args.format)
    if getattr(args, "out", None):
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return 0 if all_pass(reports) else 1


def _cmd_algebra_build(args) -> int:
    alg = resolve_algebra(args.name)
    if args.out:
        save_spec(alg, args.out)
        print(f"wrote {args.out}")
    else:
        print(json.dumps(spec_to_document(alg), indent=2, sort_keys=True))
    return 0


def _cmd_algebra_validate(args) -> int:
    alg = resolve_algebra(args.algebra)
    violations = validate_spec(alg)
    if not violations:
        print(f"{alg.name}: all structural invariants hold "
              f"(dim={alg.dim}, rank={alg.rank})")
        return 0
    for v in violations:
        print(f"violated: {v['invariant']}  residual={v['residual']:.3e}  "
              f"indices={v['indices']}")
    return 1


def _cmd_check(args) -> int:
    reports: list[CheckReport] = []
    for token in args.algebra:
        alg = resolve_algebra(token)
        reports.extend(
            run_battery(args.name, alg, samples=args.samples, seed=args.seed,
                        tol=args.tol)
        )
    return _emit(reports, args)


def _cmd_flow_run(args) -> int:
    alg = resolve_algebra(args.algebra)
    cfg = FlowConfig(field=args.field, dt=args.dt, T=args.T, i=args.i,
                     lam=args.lam)
    ps = phase_tp(alg)
    m0 = ps.sample_points(args.seed, 1)[0]
    traj = integrate(cfg, m0)
    drift = float(traj.conservation_drift().max())
    tang = traj.tangency_drift(ps)
    reports = [
        CheckReport(
            check="flow-conservation", anchor="flow-preserves-family",
            algebra=alg.name,
            params={"field": args.field, "dt": args.dt, "T": args.T,
                    "seed": args.seed, "tol": args.tol},
            measured=drift, expected=f"< {args.tol:g}",
            verdict=(not traj.truncated) and drift < args.tol,
            detail=traj.note,
        ),
        CheckReport(
            check="flow-tangency", anchor="flow-tangent-to-phase-space",
            algebra=alg.name,
            params={"field": args.field, "dt": args.dt, "T": args.T,
                    "seed": args.seed, "tol": 1e-7},
            measured=tang, expected="< 1e-07", verdict=tang < 1e-7,
        ),
    ]
    if args.field in ("t", "s"):
        for lam0 in (0.0, 1.0, 2.0):
            d = pencil_eigenvalue_drift(traj, lam0)
            reports.append(CheckReport(
                check=f"flow-isospectral-l{lam0:g}",
                anchor="pencil-eigenvalues-conserved", algebra=alg.name,
                params={"field": args.field, "lambda0": lam0, "tol": args.tol},
                measured=d, expected=f"< {args.tol:g}", verdict=d < args.tol,
            ))
    if args.csv:
        trajectory_to_csv(traj, args.csv)
        print(f"wrote {args.csv}", file=sys.stderr)
    return _emit(reports, args)


def _cmd_flow_commutation(args) -> int:
    alg = resolve_algebra(args.algebra)
    ps = phase_tp(alg)
    m0 = ps.sample_points(args.seed, 1)[0]
    defect = flow_commutation(m0, dt=args.dt, n_steps=args.steps)
    reports = [CheckReport(
        check="flow-commutation", anchor="t-s-flows-commute", algebra=alg.name,
        params={"dt": args.dt, "steps": args.steps, "seed": args.seed,
                "tol": args.tol},
        measured=defect, expected=f"< {args.tol:g}", verdict=defect < args.tol,
    )]
    return _emit(reports, args)


def _add_report_flags(p: argparse.ArgumentParser, tol: float | None) -> None:
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", help="write the report to this file instead of stdout")
    p.add_argument("--tol", type=float, default=tol,
                   help="override the default tolerance of the check")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="toda2",
        description="R-matrix laboratory for the 2-Toda lattice on graded Lie algebras",
    )
    sub = p.add_subparsers(dest="command", required=True)

    ap = sub.add_parser("algebra", help="build or validate algebra specs")
    asub = ap.add_subparsers(dest="subcommand", required=True)
    b = asub.add_parser("build", help="emit the spec document of a builtin algebra")
    b.add_argument("name", help="builtin algebra name, e.g. sl3 or gl2")
    b.add_argument("--out", help="write JSON here instead of stdout")
    b.set_defaults(fn=_cmd_algebra_build)
    v = asub.add_parser("validate", help="check every structural invariant")
    v.add_argument("algebra", help="builtin name or spec file path")
    v.set_defaults(fn=_cmd_algebra_validate)

    c = sub.add_parser("check", help="run a named check battery")
    c.add_argument("name", choices=sorted(BATTERY_NAMES) + ["all"])
    c.add_argument("--algebra", action="append", default=None,
                   help="builtin name or spec path; repeatable (default sl2)")
    c.add_argument("--samples", type=int, default=20)
    _add_report_flags(c, tol=None)
    c.set_defaults(fn=_cmd_check)

    f = sub.add_parser("flow", help="integrate Lax flows")
    fsub = f.add_subparsers(dest="subcommand", required=True)
    r = fsub.add_parser("run", help="integrate one flow and report drifts")
    r.add_argument("--algebra", default="sl2")
    r.add_argument("--field", choices=("t", "s", "quadratic", "linear"),
                   default="t")
    r.add_argument("--i", type=int, default=None,
                   help="generator index for quadratic/linear pencil fields")
    r.add_argument("--lam", type=float, default=None,
                   help="pencil parameter for quadratic/linear pencil fields")
    r.add_argument("--dt", type=float, default=1e-3)
    r.add_argument("--T", type=float, default=1.0)
    r.add_argument("--csv", help="write the trajectory as CSV to this path")
    _add_report_flags(r, tol=1e-6)
    r.set_defaults(fn=_cmd_flow_run)
    fc = fsub.add_parser("commutation", help="t/s flow commutation defect")
    fc.add_argument("--algebra", default="sl2")
    fc.add_argument("--dt", type=float, default=1e-3)
    fc.add_argument("--steps", type=int, default=100)
    _add_report_flags(fc, tol=1e-6)
    fc.set_defaults(fn=_cmd_flow_commutation)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "algebra", None) is None and args.command == "check":
        args.algebra = ["sl2"]
    try:
        return args.fn(args)
    except (AlgebraError, CapabilityError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
