"""The acceptance suite, shared by the test-suite and ``reinhardt-kobayashi verify``.

Each criterion returns a pass flag and a one-line detail.  Randomised parts
use fixed seeds, so repeated runs are identical.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import bounds as B
from . import geometry as G
from .asymptotics import DiscConfig, PathSpec, check_theorem, fit_slope, generate_path, sweep
from .domain import ReinhardtDomainSpec, d_abs, log_membership, moduli_margin, shipped_spec

METRIC_TOL = 1e-9
SLACK = -1e-9


@dataclass
class CertLedger:
    """Collects the certification records of every bound computed."""

    records: list[dict] = field(default_factory=list)

    def add(self, result: B.BoundResult) -> B.BoundResult:
        for c in result.certification:
            self.records.append({"construction": result.construction, **c})
        return result

    def add_rows(self, rows) -> None:
        for r in rows:
            for res in r.details.values():
                self.add(res)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float
    budget: float | None

    def line(self) -> str:
        state = "PASS" if self.passed else "FAIL"
        budget = f"/{self.budget:.0f}s" if self.budget else ""
        return f"[{state}] criterion {self.number:2d} {self.title} ({self.seconds:.1f}s{budget}): {self.detail}"


def _disc_points(rng: np.random.Generator, count: int, rmax: float = 0.95) -> np.ndarray:
    r = rmax * np.sqrt(rng.uniform(0, 1, count))
    return r * np.exp(2j * np.pi * rng.uniform(0, 1, count))


# ---------------------------------------------------------------------------
# 1, 2: one-dimensional models


def criterion_1(ledger: CertLedger) -> tuple[bool, str]:
    rng = np.random.default_rng(1)
    a, b, c = (_disc_points(rng, 1000) for _ in range(3))
    worst_sym = worst_tri = worst_mob = 0.0
    for x, y, w in zip(a, b, c):
        dxy, dyx = G.poincare_distance(x, y), G.poincare_distance(y, x)
        worst_sym = max(worst_sym, abs(dxy - dyx), G.poincare_distance(x, x))
        worst_tri = max(worst_tri, dxy - G.poincare_distance(x, w) - G.poincare_distance(w, y))
    centers = _disc_points(rng, 1000, 0.9)
    angles = rng.uniform(0, 2 * np.pi, 1000)
    for x, y, w, th in zip(a, b, centers, angles):
        phi = lambda p: cmath.exp(1j * th) * (p - w) / (1 - w.conjugate() * p)
        worst_mob = max(worst_mob, abs(G.poincare_distance(phi(x), phi(y)) - G.poincare_distance(x, y)))
    worst_strip = 0.0
    for _ in range(500):
        lo = rng.uniform(-3, 3)
        hi = lo + rng.uniform(0.2, 4)
        p, q = (complex(rng.uniform(lo, hi), rng.uniform(-3, 3)) for _ in range(2))
        chart = lambda z: cmath.exp(1j * math.pi * (z - lo) / (hi - lo))
        direct = G.halfplane_distance(chart(p), chart(q))
        worst_strip = max(worst_strip, abs(G.strip_distance(p, q, lo, hi) - direct))
    ok = worst_sym <= METRIC_TOL and worst_tri <= METRIC_TOL and worst_mob <= METRIC_TOL and worst_strip <= METRIC_TOL
    return ok, (
        f"symmetry/identity {worst_sym:.1e}, triangle excess {worst_tri:.1e}, "
        f"Moebius {worst_mob:.1e}, strip vs chart {worst_strip:.1e}"
    )


def criterion_2(ledger: CertLedger) -> tuple[bool, str]:
    rng = np.random.default_rng(2)
    deficit, unstable = 0.0, 0
    for _ in range(500):
        radius = rng.uniform(0.5, 2.0)
        x, y = (radius * p for p in _disc_points(rng, 2, 0.97))
        pd = G.punctured_disc_distance(x, y, radius)
        deficit = max(deficit, G.disc_distance(x, y, 0, radius) - pd)
        obj = G._punctured_objective(x, y, radius)
        v1, m1 = G.deck_scan(obj, 8)
        v2, m2 = G.deck_scan(obj, 16)
        if m1 != m2 or v1 != v2 or abs(pd - v1) > 1e-12 * max(1.0, v1):
            unstable += 1
    ok = deficit <= METRIC_TOL and unstable == 0
    return ok, f"max(disc - punctured) = {deficit:.1e}; {unstable} of 500 minimisers moved when the window doubled"


# ---------------------------------------------------------------------------
# 3: d_abs against a brute-force boundary


def _exit_radii(spec: ReinhardtDomainSpec, w: np.ndarray, psi: np.ndarray, rmax: float = 60.0) -> np.ndarray:
    """Exit distance of log-space rays from the witness; inf if none by rmax.
    The log image is convex, so each ray crosses the boundary once."""
    U = np.stack([np.cos(psi), np.sin(psi)], axis=1)
    far = log_membership(spec, w + rmax * U) >= 0
    lo, hi = np.zeros(psi.size), np.full(psi.size, rmax)
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        out = log_membership(spec, w + mid[:, None] * U) >= 0
        hi = np.where(out, mid, hi)
        lo = np.where(out, lo, mid)
    return np.where(far, hi, np.inf)


def boundary_polyline(spec: ReinhardtDomainSpec, box: float, spacing: float = 1e-4) -> tuple[np.ndarray, np.ndarray]:
    """Segments (S, 2, 2) and isolated points (P, 2) covering the moduli
    boundary of a 2-D spec inside [0, box]^2 with the given spacing.

    The curved part is the image of the log boundary, parametrised by the
    angle around the witness and subdivided until consecutive moduli points
    are ``spacing`` apart.  Faces on excluded axes and the end points on
    included axes come from a scan of the axis itself.
    """
    w = np.asarray(spec.witness, dtype=float)
    psi = np.linspace(-np.pi, np.pi, 4097)
    for _ in range(40):
        rho = _exit_radii(spec, w, psi)
        X = w + rho[:, None] * np.stack([np.cos(psi), np.sin(psi)], axis=1)
        with np.errstate(over="ignore", invalid="ignore"):
            P = np.exp(X)
        fin = np.isfinite(rho)
        inside = fin & np.all(P <= box, axis=1)
        with np.errstate(invalid="ignore"):
            gap = np.linalg.norm(P[1:] - P[:-1], axis=1)
        need = inside[1:] & inside[:-1] & (gap > spacing) & (np.diff(psi) > 1e-13)
        # also split where the curve leaves to infinity, to pin down its ends
        need |= (fin[1:] != fin[:-1]) & (np.diff(psi) > 1e-9)
        if not need.any():
            break
        psi = np.sort(np.concatenate([psi, 0.5 * (psi[1:] + psi[:-1])[need]]))
    seg_ok = inside[1:] & inside[:-1]
    segs = np.stack([P[:-1][seg_ok], P[1:][seg_ok]], axis=1)
    pts = [P[inside]]
    axis_grid = np.arange(0.0, box + spacing, spacing)
    for j in range(2):
        k = 1 - j
        R = np.zeros((axis_grid.size, 2))
        R[:, k] = axis_grid
        m = moduli_margin(spec, R)
        if not spec.axis_included[j]:
            pts.append(R[m <= 0])
        else:
            flips = np.flatnonzero((m[:-1] < 0) != (m[1:] < 0))
            for i in flips:
                lo, hi = axis_grid[i], axis_grid[i + 1]
                for _ in range(60):
                    mid = 0.5 * (lo + hi)
                    q = np.zeros(2)
                    q[k] = mid
                    if (moduli_margin(spec, q) < 0) == (m[i] < 0):
                        lo = mid
                    else:
                        hi = mid
                q = np.zeros(2)
                q[k] = 0.5 * (lo + hi)
                pts.append(q[None, :])
    return segs, np.concatenate(pts)


def polyline_distance(z: np.ndarray, segs: np.ndarray, pts: np.ndarray) -> float:
    a, b = segs[:, 0], segs[:, 1]
    ab = b - a
    L2 = np.einsum("ij,ij->i", ab, ab)
    t = np.clip(np.einsum("ij,ij->i", z - a, ab) / np.where(L2 > 0, L2, 1.0), 0.0, 1.0)
    seg_d = np.linalg.norm(a + t[:, None] * ab - z, axis=1)
    best = float(seg_d.min()) if seg_d.size else math.inf
    if pts.size:
        best = min(best, float(np.linalg.norm(pts - z, axis=1).min()))
    return best


ORACLE_SPECS = (("disc_punctured_disc", 1.0), ("product_lt_one", 2.5), ("d_beta_half", 1.0), ("remark_polyhedral", 2.0))


def criterion_3(ledger: CertLedger) -> tuple[bool, str]:
    rng = np.random.default_rng(3)
    worst, worst_at, failures = 0.0, "", 0
    for name, box in ORACLE_SPECS:
        spec = shipped_spec(name)
        segs, pts = boundary_polyline(spec, box + 1.5)
        done = 0
        while done < 50:
            z = rng.uniform(0, box, 2)
            if not moduli_margin(spec, z) < 0:
                continue
            done += 1
            sol = d_abs(spec, z)
            ref = polyline_distance(z, segs, pts)
            rel = abs(sol.distance - ref) / ref
            if not sol.converged:
                failures += 1
            if rel > worst:
                worst, worst_at = rel, f"{name} at {np.round(z, 4).tolist()}"
    ok = worst <= 1e-3 and failures == 0
    return ok, f"max relative error {worst:.2e} ({worst_at}); {failures} non-converged"


# ---------------------------------------------------------------------------
# 4: sandwich on domains with known distances


def _exact_bidisc(z0, z) -> float:
    return max(G.poincare_distance(z0[j], z[j]) for j in range(2))


def _exact_disc_punctured(z0, z) -> float:
    return max(G.poincare_distance(z0[0], z[0]), G.punctured_disc_distance(z0[1], z[1], 1.0))


SANDWICH = (
    ("bidisc", _exact_bidisc, (1.0, 1.0), (0.5, 0.5)),
    ("disc_punctured_disc", _exact_disc_punctured, (1.0, 0.0), (0.5, 0.0)),
)


def criterion_4(ledger: CertLedger) -> tuple[bool, str]:
    rng = np.random.default_rng(4)
    worst = math.inf
    counts = {"par": 0, "int": 0, "pp": 0, "mono": 0}
    for name, exact_fn, zeta_par, zeta_pp in SANDWICH:
        spec = shipped_spec(name)
        for _ in range(200):
            z0, z = rng.uniform(0.02, 0.98, 2), rng.uniform(0.02, 0.98, 2)
            exact = exact_fn(z0, z)
            lowers = [ledger.add(B.monomial_lower(spec, A, 0.0, z0, z)).value for A in ((1, 0), (0, 1))]
            counts["mono"] += 2
            uppers = [
                ledger.add(B.parallelepiped_upper(spec, zeta_par, z, base=z0)).value,
                ledger.add(B.interval_upper(spec, z0, z)).value,
            ]
            counts["par"] += 1
            counts["int"] += 1
            r = 0.5
            in_pp = all(
                (p[j] < r) if zeta_pp[j] == 0 else abs(p[j] - zeta_pp[j]) < r for p in (z0, z) for j in range(2)
            )
            if in_pp:
                uppers.append(ledger.add(B.punctured_polydisc_upper(spec, zeta_pp, z0, z)).value)
                counts["pp"] += 1
            slack = min([exact - lo for lo in lowers] + [up - exact for up in uppers])
            worst = min(worst, slack)
    ok = worst >= SLACK
    return ok, f"min slack {worst:.2e} over 400 pairs; bounds evaluated {counts}"


# ---------------------------------------------------------------------------
# 5-9: boundary rates


def beta_path(t0: float = 0.1, ratio: float = 0.75, count: int = 20) -> PathSpec:
    """Curved approach to (1, 0) inside the cusp of D_beta: z(t) = (1 - t, t^2 / 16).

    Straight lines towards (1, 0) with a positive second coordinate leave
    the domain, whose boundary there is r_2 ~ (1 - r_1)^2 / 4."""
    ts = t0 * ratio ** np.arange(count)
    return PathSpec("custom", (1.0, 0.0), t0=t0, ratio=ratio, points=tuple((1 - t, t * t / 16) for t in ts))


def criterion_5(ledger: CertLedger) -> tuple[bool, str]:
    spec = shipped_spec("d_beta_half")
    rows = sweep(spec, (0.1, 0.01), generate_path(spec, beta_path()), {"par"}, zeta0=(1.0, 0.0))
    ledger.add_rows(rows)
    v = check_theorem(spec, rows, "T1")
    return v.passed, f"{v.summary()}; min d = {rows[-1].d:.2e}"


def _product_rows(kind: str, angle: float = 0.0):
    spec = shipped_spec("product_lt_one")
    ps = PathSpec(kind, (1.0, 1.0), start=(0.5, 0.5) if kind == "radial" else None, angle=angle)
    return spec, sweep(spec, (0.5, 0.5), generate_path(spec, ps), {"int", "mono"})


def criterion_6(ledger: CertLedger) -> tuple[bool, str]:
    spec, rows = _product_rows("radial")
    ledger.add_rows(rows)
    v = check_theorem(spec, rows, "T1star")
    return v.passed, f"{v.summary()}; min d = {rows[-1].d:.2e}"


def criterion_7(ledger: CertLedger) -> tuple[bool, str]:
    spec = shipped_spec("disc_punctured_disc")
    zeta0 = (0.5, 0.0)
    rows = sweep(spec, (0.5, 0.2), generate_path(spec, PathSpec("radial", zeta0, start=(0.5, 0.2))), {"pp"})
    ledger.add_rows(rows)
    v = check_theorem(spec, rows, "T9", slope_tol=0.1, zeta0=zeta0)
    return v.passed, f"{v.summary()}; min d = {rows[-1].d:.2e}"


def criterion_8(ledger: CertLedger) -> tuple[bool, str]:
    parts, ok = [], True
    for kind, angle in (("normal", 0.0), ("cone", math.pi / 6)):
        spec, rows = _product_rows(kind, angle)
        ledger.add_rows(rows)
        lower = check_theorem(spec, rows, "T3", path_kind=kind)
        upper = check_theorem(spec, rows, "T1star")
        ordered = all(r.bounds["mono"] <= r.bounds["int"] + 1e-9 for r in rows)
        ok &= lower.passed and upper.passed and ordered
        parts.append(f"{kind}: lower {lower.fit.slope:+.4f}, upper {upper.fit.slope:+.4f}, ordered={ordered}")
    return ok, "; ".join(parts)


def criterion_9(ledger: CertLedger) -> tuple[bool, str]:
    spec = shipped_spec("d_beta_half")
    ps = PathSpec("radial", (1.0, 0.0), start=(0.0, 0.0), t0=0.1, ratio=0.7, count=20)
    disc = DiscConfig(c=(1.0, 0.0), m=(1, 0), s=1.0, lam0=0j, coordinate=0)
    rows = sweep(spec, (0.0, 0.0), generate_path(spec, ps), {"disc"}, disc=disc)
    ledger.add_rows(rows)
    if any("disc" not in r.bounds for r in rows):
        return False, "analytic-disc bound missing on some rows"
    fit = fit_slope([-r.logd for r in rows], [r.bounds["disc"] for r in rows])
    return abs(fit.slope - 0.25) <= 0.02, f"slope {fit.slope:.4f} (target 0.25 +- 0.02); min d = {rows[-1].d:.2e}"


def criterion_10(ledger: CertLedger) -> tuple[bool, str]:
    if not ledger.records:
        # standalone run: certify a few bounds of our own
        for name, _, zeta_par, _ in SANDWICH:
            spec = shipped_spec(name)
            rng = np.random.default_rng(10)
            for _ in range(10):
                z0, z = rng.uniform(0.02, 0.98, 2), rng.uniform(0.02, 0.98, 2)
                ledger.add(B.parallelepiped_upper(spec, zeta_par, z, base=z0))
                ledger.add(B.interval_upper(spec, z0, z))
    sampled = [r for r in ledger.records if "samples" in r]
    par = [r for r in sampled if r["construction"] == "parallelepiped"]
    itv = [r for r in sampled if r["construction"] == "interval"]
    violations = sum(r["violations"] for r in ledger.records)
    sizes_ok = all(r["samples"] == B.PAR_SAMPLES for r in par) and all(r["samples"] == B.INT_SAMPLES for r in itv)
    ok = violations == 0 and sizes_ok and par and itv
    return bool(ok), (
        f"{violations} violations across {len(par)} parallelepiped ({B.PAR_SAMPLES} samples each) "
        f"and {len(itv)} interval ({B.INT_SAMPLES} each) certifications, "
        f"{len(ledger.records) - len(sampled)} exact checks"
    )


CRITERIA: dict[int, tuple[str, float | None, Callable[[CertLedger], tuple[bool, str]]]] = {
    1: ("hyperbolic core", 5.0, criterion_1),
    2: ("covering exactness", 5.0, criterion_2),
    3: ("d_abs oracle", 60.0, criterion_3),
    4: ("sandwich on exact domains", 30.0, criterion_4),
    5: ("parallelepiped rate", 30.0, criterion_5),
    6: ("interval rate", None, criterion_6),
    7: ("punctured-polydisc rate", None, criterion_7),
    8: ("monomial rate", None, criterion_8),
    9: ("analytic-disc slope", None, criterion_9),
    10: ("certification soundness", None, criterion_10),
}


def run_criterion(number: int, ledger: CertLedger | None = None) -> CriterionResult:
    title, budget, fn = CRITERIA[number]
    ledger = CertLedger() if ledger is None else ledger
    start = time.perf_counter()
    try:
        ok, detail = fn(ledger)
    except Exception as exc:  # a crash is a failed criterion, not a crashed suite
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    seconds = time.perf_counter() - start
    if budget is not None and seconds > budget:
        ok, detail = False, f"over the {budget:.0f}s budget; {detail}"
    return CriterionResult(number, title, bool(ok), detail, seconds, budget)


def run_suite(numbers=None, echo: Callable[[str], None] | None = None) -> list[CriterionResult]:
    ledger = CertLedger()
    out = []
    for k in numbers or sorted(CRITERIA):
        res = run_criterion(k, ledger)
        if echo:
            echo(res.line())
        out.append(res)
    return out
