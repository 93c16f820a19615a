"""Boundary-approach experiments: paths, bound sweeps, slope fits, verdicts."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, TextIO

import numpy as np

from . import bounds as B
from .domain import (
    Membership,
    ReinhardtDomainSpec,
    d_abs,
    membership,
    normal_vector_moduli,
    rationalize_halfspace,
    supporting_halfspace,
)
from .errors import KobayashiError, PathGenerationError, PreconditionError

PATH_KINDS = ("radial", "normal", "cone", "custom")
CONSTRUCTIONS = ("par", "int", "pp", "mono", "disc")
BOUND_COLUMNS = {"par": "U_par", "int": "U_int", "pp": "U_pp", "mono": "L_mono", "disc": "U_disc"}
UPPER = ("par", "int", "pp", "disc")


@dataclass(frozen=True)
class PathSpec:
    kind: str
    zeta0: tuple[float, ...]
    start: tuple[float, ...] | None = None
    t0: float = 0.1
    ratio: float = 0.5
    count: int = 20
    angle: float = 0.0
    points: tuple[tuple[float, ...], ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "zeta0", tuple(float(v) for v in self.zeta0))
        if self.start is not None:
            object.__setattr__(self, "start", tuple(float(v) for v in self.start))
        if self.points is not None:
            object.__setattr__(self, "points", tuple(tuple(float(v) for v in p) for p in self.points))
        if self.kind not in PATH_KINDS:
            raise PathGenerationError(f"unknown path kind {self.kind!r}")
        if not (0.0 < self.ratio < 1.0):
            raise PathGenerationError("ratio must lie in (0, 1)")
        if not self.t0 > 0 or self.count < 1:
            raise PathGenerationError("t0 must be positive and count at least 1")
        if self.kind == "cone" and not (0.0 <= self.angle < math.pi / 2):
            raise PathGenerationError(f"cone angle must lie in [0, pi/2), got {self.angle}")
        if self.kind == "radial" and self.start is None:
            raise PathGenerationError("a radial path needs a start point")
        if self.kind == "custom" and not self.points:
            raise PathGenerationError("a custom path needs points")

    def schedule(self) -> np.ndarray:
        count = len(self.points) if self.kind == "custom" else self.count
        return self.t0 * self.ratio ** np.arange(count)


@dataclass
class GeneratedPath:
    kind: str
    zeta0: np.ndarray
    ts: list[float]
    points: list[np.ndarray]
    dropped: list[float] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def flags(self) -> list[str]:
        return [f"dropped {len(self.dropped)} non-interior points"] if self.dropped else []


def _tilt_direction(nu: np.ndarray) -> np.ndarray:
    # lowest-index coordinate direction with a component orthogonal to nu
    for k in range(nu.size):
        e = np.zeros(nu.size)
        e[k] = 1.0
        w = e - (e @ nu) * nu
        norm = float(np.linalg.norm(w))
        if norm > 1e-12:
            return w / norm
    raise PathGenerationError("no direction orthogonal to the normal (n = 1); use angle 0")


def generate_path(spec: ReinhardtDomainSpec, p: PathSpec) -> GeneratedPath:
    zeta0 = np.asarray(p.zeta0, dtype=float)
    if zeta0.size != spec.n:
        raise PathGenerationError(f"zeta0 must have {spec.n} coordinates")
    ts = p.schedule()
    if p.kind == "custom":
        raw = [np.asarray(q, dtype=float) for q in p.points]
    else:
        if membership(spec, zeta0) is not Membership.BOUNDARY:
            raise PathGenerationError(f"zeta0 = {zeta0} is not a boundary point")
        if p.kind == "radial":
            start = np.asarray(p.start, dtype=float)
            raw = [zeta0 + t * (start - zeta0) for t in ts]
        else:
            nu = normal_vector_moduli(spec, zeta0)
            u = -nu
            if p.kind == "cone" and p.angle != 0.0:
                u = math.cos(p.angle) * u + math.sin(p.angle) * _tilt_direction(nu)
            raw = [zeta0 + t * u for t in ts]
    kept_t, kept, dropped = [], [], []
    for t, z in zip(ts, raw):
        ok = z.size == spec.n and np.all(z >= 0) and membership(spec, z, tol=0.0) is Membership.INTERIOR
        if ok:
            kept_t.append(float(t))
            kept.append(z)
        else:
            dropped.append(float(t))
    if not kept:
        raise PathGenerationError("no path point survived interior certification")
    return GeneratedPath(p.kind, zeta0, kept_t, kept, dropped)


@dataclass
class DiscConfig:
    """Analytic disc F(lam) = (c_j lam^{m_j}) and the coordinate used to read
    lam back from a path point: lam = (z_k / c_k)^(1 / m_k)."""

    c: tuple[float, ...]
    m: tuple[int, ...]
    s: float
    lam0: complex
    coordinate: int

    def lam(self, z: np.ndarray) -> float:
        k = self.coordinate
        return float((z[k] / self.c[k]) ** (1.0 / self.m[k]))


@dataclass
class SweepRow:
    t: float
    z: np.ndarray
    d: float
    logd: float
    bounds: dict[str, float] = field(default_factory=dict)
    flags: list[str] = field(default_factory=list)
    details: dict[str, B.BoundResult] = field(default_factory=dict)


def _monomial_halfspace(spec: ReinhardtDomainSpec, zeta0: np.ndarray, qmax: int) -> tuple[tuple[int, ...], float, bool]:
    if np.any(zeta0 <= 0):
        raise PreconditionError("the monomial construction needs zeta0 with positive moduli")
    alpha, logc = supporting_halfspace(spec, np.log(zeta0))
    h = rationalize_halfspace(alpha, logc, qmax, spec=spec)
    return h.A, h.logC, h.certified


def sweep(
    spec: ReinhardtDomainSpec,
    z0,
    path: GeneratedPath | Sequence,
    constructions: Iterable[str],
    *,
    zeta0=None,
    disc: DiscConfig | None = None,
    halfspace: tuple[Sequence[int], float] | None = None,
    qmax: int = 64,
) -> list[SweepRow]:
    """Evaluate d_D and the requested bounds at every path point.

    Errors in one bound are recorded as row flags; the sweep always returns
    one row per path point.
    """
    cons = set(constructions)
    unknown = cons - set(CONSTRUCTIONS)
    if unknown:
        raise PreconditionError(f"unknown constructions {sorted(unknown)}")
    z0 = np.asarray(z0, dtype=float)
    if isinstance(path, GeneratedPath):
        ts, points = path.ts, path.points
        if zeta0 is None:
            zeta0 = path.zeta0
    else:
        points = [np.asarray(q, dtype=float) for q in path]
        ts = [float("nan")] * len(points)
    zeta0 = None if zeta0 is None else np.asarray(zeta0, dtype=float)
    if cons & {"par", "pp", "mono"} and zeta0 is None:
        raise PreconditionError("par, pp and mono need the boundary target zeta0")
    if "disc" in cons and disc is None:
        raise PreconditionError("the disc construction needs a DiscConfig")

    mono_error = None
    if "mono" in cons:
        try:
            if halfspace is not None:
                A, logC = halfspace
                vouched = False
            else:
                A, logC, vouched = _monomial_halfspace(spec, zeta0, qmax)
        except KobayashiError as exc:
            mono_error = type(exc).__name__

    calls: dict[str, Callable[[np.ndarray], B.BoundResult]] = {
        "par": lambda z: B.parallelepiped_upper(spec, zeta0, z, base=z0),
        "int": lambda z: B.interval_upper(spec, z0, z),
        "pp": lambda z: B.punctured_polydisc_upper(spec, zeta0, z0, z),
        "mono": lambda z: B.monomial_lower(spec, A, logC, z0, z, certified=vouched),
        "disc": lambda z: B.analytic_disc_upper(spec, disc.c, disc.m, disc.s, disc.lam0, disc.lam(z)),
    }

    rows = []
    for t, z in zip(ts, points):
        flags: list[str] = []
        try:
            sol = d_abs(spec, z)
            d = sol.distance
            if not sol.converged:
                flags.append("d:nonconverged")
        except KobayashiError as exc:
            d = float("nan")
            flags.append(f"d:{type(exc).__name__}")
        row = SweepRow(float(t), z, d, math.log(d) if d > 0 else float("nan"), flags=flags)
        for name in CONSTRUCTIONS:
            if name not in cons:
                continue
            if name == "mono" and mono_error:
                row.flags.append(f"mono:{mono_error}")
                continue
            if name == "disc":
                image = B.disc_image(disc.c, disc.m, disc.lam(z))
                if not np.allclose(image, z, rtol=1e-12, atol=0.0):
                    row.flags.append("disc:point not on disc")
                    continue
            try:
                res = calls[name](z)
            except KobayashiError as exc:
                row.flags.append(f"{name}:{type(exc).__name__}")
                continue
            row.bounds[name] = res.value
            row.details[name] = res
        if "mono" in row.bounds:
            for u in UPPER:
                if u in row.bounds and row.bounds[u] < row.bounds["mono"] - 1e-9:
                    row.flags.append(f"order:{u}<mono")
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# fits and verdicts


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r2: float
    window_width: float
    samples: int


def fit_slope(xs: Sequence[float], ys: Sequence[float]) -> FitResult:
    """Least-squares line through the tail half of the samples (the ones
    closest to the boundary, i.e. the end of the sequence)."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.size != y.size or x.size < 8:
        raise PreconditionError("fit_slope needs at least 8 paired samples")
    dx = np.diff(x)
    if not (np.all(dx > 0) or np.all(dx < 0)):
        raise PreconditionError("xs must be strictly monotone")
    h = x.size // 2
    xt, yt = x[h:], y[h:]
    if np.ptp(xt) == 0:
        raise PreconditionError("degenerate xs")
    slope, intercept = np.polyfit(xt, yt, 1)
    resid = yt - (slope * xt + intercept)
    ss_res = float(resid @ resid)
    ss_tot = float(((yt - yt.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0 else min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return FitResult(float(slope), float(intercept), r2, float(np.ptp(resid)), int(xt.size))


THEOREMS = {
    # functional(bound, d) and regressor(d)
    "T1": ("par", lambda u, d: u + math.log(d), lambda d: -math.log(d)),
    "T1star": ("int", lambda u, d: u + 0.5 * math.log(d), lambda d: -math.log(d)),
    "T9": ("pp", lambda u, d: u - 0.5 * math.log(-math.log(d)), lambda d: math.log(-math.log(d))),
    "T3": ("mono", lambda u, d: u + 0.5 * math.log(d), lambda d: -math.log(d)),
}


@dataclass
class Verdict:
    theorem: str
    passed: bool
    fit: FitResult
    slope_tol: float
    window_tol: float
    failures: list[str] = field(default_factory=list)

    def summary(self) -> str:
        state = "PASS" if self.passed else "FAIL"
        text = (
            f"{self.theorem}: {state} slope={self.fit.slope:+.4f} (tol {self.slope_tol}) "
            f"window={self.fit.window_width:.4f} (tol {self.window_tol})"
        )
        return text + ("; " + "; ".join(self.failures) if self.failures else "")


def check_theorem(
    spec: ReinhardtDomainSpec,
    rows: Sequence[SweepRow],
    theorem: str,
    *,
    slope_tol: float = 0.05,
    window_tol: float = 2.0,
    path_kind: str | None = None,
    zeta0=None,
) -> Verdict:
    if theorem not in THEOREMS:
        raise PreconditionError(f"unknown theorem {theorem!r}")
    key, functional, regressor = THEOREMS[theorem]
    if theorem == "T3" and path_kind not in ("normal", "cone"):
        raise PreconditionError("T3 needs a normal or cone path")
    missing = [i for i, r in enumerate(rows) if key not in r.bounds or not r.d > 0]
    if missing:
        raise PreconditionError(f"rows {missing} lack {BOUND_COLUMNS[key]} or d")
    xs = [regressor(r.d) for r in rows]
    ys = [functional(r.bounds[key], r.d) for r in rows]
    fit = fit_slope(xs, ys)
    failures = []
    if abs(fit.slope) > slope_tol:
        failures.append(f"|slope| {abs(fit.slope):.4f} > {slope_tol}")
    if fit.window_width > window_tol:
        failures.append(f"window {fit.window_width:.4f} > {window_tol}")
    if theorem == "T9":
        if zeta0 is None:
            raise PreconditionError("T9 needs zeta0 to know the zero coordinates")
        J = [j for j, v in enumerate(zeta0) if v == 0]
        if not J:
            raise PreconditionError("T9 needs zeta0 with a zero coordinate")
        bad = [i for i, r in enumerate(rows) if r.d > min(r.z[j] for j in J)]
        if bad:
            failures.append(f"rows {bad} have d > min zeroed coordinate")
    return Verdict(theorem, not failures, fit, slope_tol, window_tol, failures)


# ---------------------------------------------------------------------------
# CSV


def csv_header(n: int) -> list[str]:
    return ["t", "d", "logd"] + [f"z_{j + 1}" for j in range(n)] + list(BOUND_COLUMNS.values()) + ["flags"]


def write_csv(rows: Sequence[SweepRow], n: int, out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(csv_header(n))
    for r in rows:
        w.writerow(
            [repr(r.t), repr(r.d), repr(r.logd)]
            + [repr(float(v)) for v in r.z]
            + [repr(r.bounds[k]) if k in r.bounds else "" for k in BOUND_COLUMNS]
            + [";".join(r.flags)]
        )


def rows_to_csv(rows: Sequence[SweepRow], n: int) -> str:
    buf = io.StringIO()
    write_csv(rows, n, buf)
    return buf.getvalue()
