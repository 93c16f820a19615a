"""Command-line front end.

Exit codes: 0 success, 1 failed verification, 2 schema error, 3 semantic
spec error, 4 numeric non-convergence, 5 precondition violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import acceptance
from . import bounds as B
from .asymptotics import DiscConfig, PathSpec, check_theorem, generate_path, rows_to_csv, sweep
from .domain import (
    DEFAULT_TOL,
    ReinhardtDomainSpec,
    completeness_profile,
    d_abs,
    load_spec,
    membership,
    rationalize_halfspace,
    supporting_halfspace,
)
from .errors import KobayashiError, NonConvergenceError, PreconditionError, SpecSchemaError


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise PreconditionError(f"cannot parse {text!r} as a comma-separated list of numbers") from exc


def _point(spec: ReinhardtDomainSpec, text: str, name: str) -> np.ndarray:
    p = np.array(_floats(text))
    if p.size != spec.n:
        raise PreconditionError(f"--{name} has {p.size} coordinates, the domain has {spec.n}")
    return p


def _load(args) -> ReinhardtDomainSpec:
    if not args.domain:
        raise PreconditionError("--domain is required")
    path = Path(args.domain)
    if not path.is_file():
        raise SpecSchemaError(f"{path}: no such file")
    return load_spec(path)


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _fmt(x: float) -> str:
    return f"{x:.12g}"


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args) -> int:
    spec = _load(args)
    prof = completeness_profile(spec)
    print(f"OK {args.domain}: '{spec.name}', n = {spec.n}, {len(spec.constraints)} constraints")
    if not prof.fu_satisfied:
        print("note: the Fu condition fails (a coordinate hyperplane meets the boundary but not the domain)")
    return 0


def cmd_profile(args) -> int:
    spec = _load(args)
    prof = completeness_profile(spec).as_dict()
    if args.json:
        _emit(args, json.dumps(prof, indent=2) + "\n")
        return 0
    lines = [
        f"domain: {spec.name} (n = {spec.n})",
        f"complete directions: {prof['complete_dirs']}",
        f"boundary meets axis:  {prof['axis_boundary_met']}",
        f"axis included:        {prof['axis_included']}",
        f"Fu condition:         {'satisfied' if prof['fu_satisfied'] else 'violated'}",
        f"relatively complete:  {prof['relatively_complete']}",
    ]
    _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_dist(args) -> int:
    spec = _load(args)
    z = _point(spec, args.point, "point")
    cls = membership(spec, z, tol=args.tol)
    sol = d_abs(spec, z)
    text = (
        f"membership: {cls.value}\n"
        f"d: {_fmt(sol.distance)}\n"
        f"witness: {','.join(_fmt(v) for v in sol.witness)}\n"
        f"converged: {sol.converged}\n"
    )
    _emit(args, text)
    if not sol.converged:
        raise NonConvergenceError("nearest-boundary search did not converge")
    return 0


def _default_halfspaces(spec: ReinhardtDomainSpec) -> list[tuple[tuple[int, ...], float]]:
    out = []
    for c in spec.constraints:
        if c.is_affine:
            h = rationalize_halfspace(c.A[0], -float(c.b[0]), 64, spec=spec)
            if h.certified:
                out.append((h.A, h.logC))
    return out


def _bound_results(args, spec) -> list[B.BoundResult]:
    z0 = _point(spec, args.base, "base")
    z = _point(spec, args.target, "target")
    zeta0 = _point(spec, args.zeta0, "zeta0") if args.zeta0 else None
    wanted = [c.strip() for c in args.constructions.split(",") if c.strip()]
    results = []
    for name in wanted:
        if name == "par":
            if zeta0 is None:
                raise PreconditionError("par needs --zeta0")
            results.append(B.parallelepiped_upper(spec, zeta0, z, base=z0))
        elif name == "int":
            results.append(B.interval_upper(spec, z0, z))
        elif name == "pp":
            if zeta0 is None:
                raise PreconditionError("pp needs --zeta0")
            results.append(B.punctured_polydisc_upper(spec, zeta0, z0, z))
        elif name == "mono":
            if args.halfspace:
                A_text, logC_text = args.halfspace.split(";")
                cands = [(tuple(int(round(v)) for v in _floats(A_text)), float(logC_text))]
            elif zeta0 is not None:
                alpha, logc = supporting_halfspace(spec, np.log(zeta0))
                h = rationalize_halfspace(alpha, logc, 64, spec=spec)
                cands = [(h.A, h.logC)]
            else:
                cands = _default_halfspaces(spec)
            if not cands:
                raise PreconditionError("mono needs --halfspace or --zeta0 on this domain")
            results.append(max((B.monomial_lower(spec, A, lc, z0, z) for A, lc in cands), key=lambda r: r.value))
        elif name == "torus":
            thetas = _floats(args.thetas) if args.thetas else [0.0] * spec.n
            results.append(B.torus_correction(spec, z0, thetas))
        elif name == "disc":
            if not args.disc:
                raise PreconditionError("disc needs --disc 'c1,..;m1,..;s'")
            c_text, m_text, s_text = args.disc.split(";")
            c, m = _floats(c_text), [int(round(v)) for v in _floats(m_text)]
            k = next((j for j, mj in enumerate(m) if mj > 0), None)
            if k is None:
                raise PreconditionError("the disc needs a positive exponent")
            cfg = DiscConfig(tuple(c), tuple(m), float(s_text), 0j, k)
            lam0, lam1 = cfg.lam(z0), cfg.lam(z)
            for p, lam in ((z0, lam0), (z, lam1)):
                if not np.allclose(B.disc_image(c, m, lam), p, rtol=1e-12, atol=0.0):
                    raise PreconditionError(f"{p} is not on the analytic disc")
            results.append(B.analytic_disc_upper(spec, c, m, cfg.s, lam0, lam1))
        else:
            raise PreconditionError(f"unknown construction {name!r}")
    return results


def cmd_bound(args) -> int:
    spec = _load(args)
    results = _bound_results(args, spec)
    if args.json:
        _emit(args, json.dumps([r.as_dict() for r in results], indent=2, default=float) + "\n")
        return 0
    lines = [f"{'construction':<20}{'direction':<11}value"]
    for r in results:
        lines.append(f"{r.construction:<20}{r.direction:<11}{_fmt(r.value)}")
    _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_sweep(args) -> int:
    spec = _load(args)
    zeta0 = _point(spec, args.zeta0, "zeta0")
    start = _point(spec, args.start, "start") if args.start else None
    ps = PathSpec(args.kind, tuple(zeta0), start=None if start is None else tuple(start),
                  t0=args.t0, ratio=args.ratio, count=args.count, angle=args.angle)
    path = generate_path(spec, ps)
    if args.base:
        z0 = _point(spec, args.base, "base")
    elif start is not None:
        z0 = start
    else:
        raise PreconditionError("sweep needs --base (or --start)")
    cons = [c.strip() for c in args.constructions.split(",") if c.strip()]
    disc = None
    if "disc" in cons:
        if not args.disc:
            raise PreconditionError("disc needs --disc 'c1,..;m1,..;s'")
        c_text, m_text, s_text = args.disc.split(";")
        m = [int(round(v)) for v in _floats(m_text)]
        k = next(j for j, mj in enumerate(m) if mj > 0)
        disc = DiscConfig(tuple(_floats(c_text)), tuple(m), float(s_text), 0j, k)
        disc.lam0 = disc.lam(z0)
    rows = sweep(spec, z0, path, cons, zeta0=zeta0, disc=disc)
    _emit(args, rows_to_csv(rows, spec.n))
    if args.check:
        v = check_theorem(spec, rows, args.check, path_kind=args.kind, zeta0=zeta0,
                          slope_tol=args.slope_tol, window_tol=args.window_tol)
        print(v.summary(), file=sys.stderr)
        return 0 if v.passed else 1
    return 0


def cmd_verify(args) -> int:
    if args.suite == "all":
        numbers = None
    else:
        numbers = [int(v) for v in args.suite.split(",")]
        unknown = [k for k in numbers if k not in acceptance.CRITERIA]
        if unknown:
            raise PreconditionError(f"unknown criteria {unknown}")
    results = acceptance.run_suite(numbers, echo=print)
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed" + (f"; failed: {failed}" if failed else ""))
    return 1 if failed else 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--domain", help="domain spec (JSON)")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="boundary classification tolerance")
    common.add_argument("--out", help="write output here instead of stdout")

    p = argparse.ArgumentParser(prog="reinhardt-kobayashi", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("validate", parents=[common], help="check a domain spec").set_defaults(func=cmd_validate)

    sp = sub.add_parser("profile", parents=[common], help="completeness and Fu report")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_profile)

    sp = sub.add_parser("dist", parents=[common], help="distance to the boundary")
    sp.add_argument("--point", required=True, help="moduli, comma-separated")
    sp.set_defaults(func=cmd_dist)

    sp = sub.add_parser("bound", parents=[common], help="bounds on the Kobayashi distance")
    sp.add_argument("--base", required=True)
    sp.add_argument("--target", required=True)
    sp.add_argument("--constructions", default="int,mono", help="par,int,pp,mono,torus,disc")
    sp.add_argument("--zeta0", help="boundary target for par, pp and mono")
    sp.add_argument("--halfspace", help="'A1,..,An;logC' for mono")
    sp.add_argument("--thetas", help="angles for torus")
    sp.add_argument("--disc", help="'c1,..;m1,..;s' for disc")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("sweep", parents=[common], help="bounds along a boundary-approach path (CSV)")
    sp.add_argument("--zeta0", required=True)
    sp.add_argument("--start")
    sp.add_argument("--base", help="fixed point z0 (default: --start)")
    sp.add_argument("--kind", choices=("radial", "normal", "cone"), default="radial")
    sp.add_argument("--angle", type=float, default=0.0)
    sp.add_argument("--t0", type=float, default=0.1)
    sp.add_argument("--ratio", type=float, default=0.5)
    sp.add_argument("--count", type=int, default=20)
    sp.add_argument("--constructions", default="", help="comma-separated subset of par,int,pp,mono,disc")
    sp.add_argument("--disc", help="'c1,..;m1,..;s' for disc")
    sp.add_argument("--check", choices=("T1", "T1star", "T9", "T3"), help="print a verdict to stderr")
    sp.add_argument("--slope-tol", type=float, default=0.05)
    sp.add_argument("--window-tol", type=float, default=2.0)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    sp.add_argument("--suite", default="all", help="'all' or comma-separated criterion numbers")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.tol is not None and not args.tol > 0:
        print("error: --tol must be positive", file=sys.stderr)
        return PreconditionError.exit_code
    try:
        return args.func(args)
    except KobayashiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, StopIteration) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return PreconditionError.exit_code


if __name__ == "__main__":
    sys.exit(main())
