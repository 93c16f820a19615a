"""Pseudoconvex Reinhardt domains described by their logarithmic image.

A domain is stored as a finite list of log-sum-exp constraints

    g(x) = log sum_k exp(<alpha_k, x> + b_k) < 0,      x = log|z|,

together with explicit flags saying which coordinate hyperplanes {z_j = 0}
meet the domain.  Each g is convex, so the log image is convex by
construction; the sign rule enforced at validation (an included axis j needs
alpha_kj >= 0 in every term) makes the domain relatively complete, and the
two together make it pseudoconvex.

Points are passed either as moduli vectors r = |z| (zeros allowed) or as log
points x with finite entries.  Internally a zero modulus becomes log 0 = -inf,
and a term then vanishes (alpha_j > 0), is unaffected (alpha_j = 0) or blows
up (alpha_j < 0).
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache, reduce
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from jsonschema import Draft202012Validator
from scipy.optimize import linprog

from . import _raysearch
from .errors import (
    AmbiguousSupportError,
    NonConvergenceError,
    PreconditionError,
    SpecSchemaError,
    SpecValidationError,
)

WITNESS_MARGIN = -1e-9
DEFAULT_TOL = 1e-7
ACTIVE_TOL = 1e-6
SUPPORT_BOUNDARY_TOL = 1e-7

DATA_DIR = Path(__file__).parent / "data"


@dataclass(frozen=True)
class LogTerm:
    alpha: tuple[float, ...]
    b: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        object.__setattr__(self, "b", float(self.b))
        if not all(math.isfinite(a) for a in self.alpha) or not math.isfinite(self.b):
            raise SpecValidationError(f"non-finite term data {self}")


@dataclass(frozen=True)
class LogConstraint:
    terms: tuple[LogTerm, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise SpecValidationError("a constraint needs at least one term")

    @cached_property
    def A(self) -> np.ndarray:
        return np.array([t.alpha for t in self.terms], dtype=float)

    @cached_property
    def b(self) -> np.ndarray:
        return np.array([t.b for t in self.terms], dtype=float)

    @property
    def is_affine(self) -> bool:
        return len(self.terms) == 1


@dataclass(frozen=True)
class ReinhardtDomainSpec:
    name: str
    constraints: tuple[LogConstraint, ...]
    axis_included: tuple[bool, ...]
    witness: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "axis_included", tuple(bool(a) for a in self.axis_included))
        object.__setattr__(self, "witness", tuple(float(w) for w in self.witness))
        n = len(self.witness)
        if n < 1 or len(self.axis_included) != n:
            raise SpecValidationError("witness and axis_included must have the common dimension n >= 1")
        for c in self.constraints:
            for t in c.terms:
                if len(t.alpha) != n:
                    raise SpecValidationError(f"term {t} does not have {n} exponents")
        for j, inc in enumerate(self.axis_included):
            if inc and any(t.alpha[j] < 0 for c in self.constraints for t in c.terms):
                raise SpecValidationError(
                    f"axis {j + 1} is marked included but a term has a negative exponent there"
                )
        if not all(math.isfinite(w) for w in self.witness):
            raise SpecValidationError("witness must be finite")
        margin = log_membership(self, np.array(self.witness))
        if not margin < WITNESS_MARGIN:
            raise SpecValidationError(f"witness is not strictly interior (margin {margin:.3g})")

    @property
    def n(self) -> int:
        return len(self.witness)


class Membership(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


@dataclass(frozen=True)
class CompletenessProfile:
    complete_dirs: frozenset[int]
    axis_boundary_met: tuple[bool, ...]
    axis_included: tuple[bool, ...]
    fu_satisfied: bool
    relatively_complete: bool

    def as_dict(self) -> dict:
        return {
            "complete_dirs": sorted(j + 1 for j in self.complete_dirs),
            "axis_boundary_met": list(self.axis_boundary_met),
            "axis_included": list(self.axis_included),
            "fu_satisfied": self.fu_satisfied,
            "relatively_complete": self.relatively_complete,
        }


@dataclass
class BoundarySolution:
    distance: float
    witness: np.ndarray
    converged: bool
    details: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# margins


def _term_exponents(c: LogConstraint, X: np.ndarray) -> np.ndarray:
    """<alpha_k, x> + b_k for X of shape (..., n); entries of X may be -inf."""
    X = np.asarray(X, dtype=float)
    neg_inf = np.isneginf(X)
    if not neg_inf.any():
        return X @ c.A.T + c.b
    E = np.where(neg_inf, 0.0, X) @ c.A.T + c.b
    vanish = neg_inf.astype(float) @ (c.A.T > 0).astype(float) > 0
    blow = neg_inf.astype(float) @ (c.A.T < 0).astype(float) > 0
    E = np.where(vanish, -np.inf, E)
    return np.where(blow, np.inf, E)


def _lse(E: np.ndarray) -> np.ndarray:
    m = np.max(E, axis=-1)
    finite = np.isfinite(m)
    shift = np.where(finite, m, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.sum(np.exp(E - shift[..., None]), axis=-1)
        out = shift + np.log(s)
    return np.where(finite, out, m)


def lse_margin(c: LogConstraint, x: Sequence[float] | np.ndarray) -> float | np.ndarray:
    """Max-shifted log-sum-exp value of one constraint; negative inside."""
    out = _lse(_term_exponents(c, np.asarray(x, dtype=float)))
    return float(out) if np.ndim(out) == 0 else out


def log_membership(spec: ReinhardtDomainSpec, x: Sequence[float] | np.ndarray) -> float | np.ndarray:
    """Largest constraint margin at x; x lies in the log image iff this is < 0."""
    X = np.asarray(x, dtype=float)
    if not spec.constraints:
        out = np.full(X.shape[:-1], -np.inf)
    else:
        out = reduce(np.maximum, (_lse(_term_exponents(c, X)) for c in spec.constraints))
    return float(out) if np.ndim(out) == 0 else out


def _scalar_margin(spec: ReinhardtDomainSpec, x: Sequence[float]) -> float:
    """log_membership for one log point in plain Python floats.

    Root finders call the margin thousands of times on single points, where
    numpy's per-call overhead dominates.
    """
    worst = -math.inf
    for c in spec.constraints:
        exps = []
        for t in c.terms:
            e = t.b
            for a, xi in zip(t.alpha, x):
                if a == 0.0:
                    continue
                if xi == -math.inf:
                    e = -math.inf if a > 0 else math.inf
                    if e == math.inf:
                        break
                    continue
                e += a * xi
            if e == math.inf:
                return math.inf
            exps.append(e)
        m = max(exps)
        g = m if m == -math.inf else m + math.log(math.fsum(math.exp(e - m) for e in exps))
        worst = max(worst, g)
    return worst


def _scalar_moduli_margin(spec: ReinhardtDomainSpec, y: np.ndarray) -> float:
    return _scalar_margin(spec, [math.log(abs(v)) if v != 0 else -math.inf for v in y.tolist()])


def _log_moduli(r: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(np.abs(r))


def moduli_margin(spec: ReinhardtDomainSpec, R: np.ndarray) -> np.ndarray:
    """Margin at the moduli |R| (any real R, zeros allowed)."""
    return log_membership(spec, _log_moduli(np.asarray(R, dtype=float)))


def _as_moduli(spec: ReinhardtDomainSpec, z) -> np.ndarray:
    r = np.asarray(z, dtype=float).reshape(-1)
    if r.size != spec.n:
        raise PreconditionError(f"point has {r.size} coordinates, domain has {spec.n}")
    if not np.all(np.isfinite(r)) or np.any(r < 0):
        raise PreconditionError(f"moduli must be finite and nonnegative, got {r}")
    return r


def membership(spec: ReinhardtDomainSpec, z, tol: float = DEFAULT_TOL) -> Membership:
    """Classify a moduli point; zero coordinates are handled through the
    limiting behaviour of each term."""
    r = _as_moduli(spec, z)
    margin = float(moduli_margin(spec, r))
    zeros = np.flatnonzero(r == 0)
    if all(spec.axis_included[j] for j in zeros):
        if margin < -tol:
            return Membership.INTERIOR
        return Membership.BOUNDARY if margin <= tol else Membership.EXTERIOR
    # a zero on an excluded axis is never in D, at best in its closure
    return Membership.BOUNDARY if margin <= tol else Membership.EXTERIOR


# ---------------------------------------------------------------------------
# completeness


def _recession_with_drop(spec: ReinhardtDomainSpec, j: int) -> bool:
    """Is there a recession direction d <= 0 with d_j < 0?

    Such a direction exists iff the closure of D meets {z_j = 0} (the log
    image is sandwiched between two polyhedra with a common recession cone).
    """
    n = spec.n
    if not spec.constraints:
        return True
    A = np.vstack([c.A for c in spec.constraints])
    bounds = [(None, 0.0)] * n
    bounds[j] = (-1.0, -1.0)
    res = linprog(np.zeros(n), A_ub=A, b_ub=np.zeros(len(A)), bounds=bounds, method="highs")
    return res.status == 0


def completeness_profile(spec: ReinhardtDomainSpec) -> CompletenessProfile:
    complete = frozenset(
        j for j in range(spec.n) if all(t.alpha[j] >= 0 for c in spec.constraints for t in c.terms)
    )
    met = tuple(_recession_with_drop(spec, j) for j in range(spec.n))
    fu = all(inc or not m for m, inc in zip(met, spec.axis_included))
    rel = all(j in complete for j in range(spec.n) if spec.axis_included[j])
    return CompletenessProfile(complete, met, spec.axis_included, fu, rel)


# ---------------------------------------------------------------------------
# boundary distances


def d_log(spec: ReinhardtDomainSpec, x) -> BoundarySolution:
    """Euclidean distance from x to the complement of the log image.

    The complement of an intersection is the union of complements, so this
    is the minimum over constraints.  Affine constraints are exact; a
    log-sum-exp constraint is handled by minimising the first-exit time of
    rays from x, which for a convex sublevel set is a single root per ray.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != spec.n or not np.all(np.isfinite(x)):
        raise PreconditionError("d_log needs a finite log point of the domain's dimension")
    sol = _d_log_cached(spec, tuple(x.tolist()))
    return BoundarySolution(sol.distance, sol.witness.copy(), sol.converged, dict(sol.details))


@lru_cache(maxsize=512)
def _d_log_cached(spec: ReinhardtDomainSpec, key: tuple[float, ...]) -> BoundarySolution:
    # sweeps ask for the same base point over and over
    x = np.array(key)
    margin = log_membership(spec, x)
    if not margin < 0:
        raise PreconditionError(f"log point is not interior (margin {margin:.3g})")
    best = BoundarySolution(math.inf, np.full(spec.n, np.nan), True, {"constraint": None})
    scale = max(1.0, float(np.linalg.norm(x)))
    for i, c in enumerate(spec.constraints):
        if c.is_affine:
            a = c.A[0]
            na = float(np.linalg.norm(a))
            if na == 0.0:
                continue
            dist = -float(a @ x + c.b[0]) / na
            sol = BoundarySolution(dist, x + dist * a / na, True, {"constraint": i})
        else:
            phi = lambda Y, c=c: _lse(_term_exponents(c, Y))
            single = ReinhardtDomainSpec.__new__(ReinhardtDomainSpec)
            object.__setattr__(single, "constraints", (c,))
            phi1 = lambda y, s=single: _scalar_margin(s, y.tolist())
            res = _raysearch.nearest_exit(phi, x, 1e-14 * scale, 1e8 * scale, phi1=phi1)
            if not math.isfinite(res.distance):
                continue
            ok = abs(lse_margin(c, res.point)) <= 1e-7
            sol = BoundarySolution(res.distance, res.point, ok, {"constraint": i, "starts": res.refined})
        if sol.distance < best.distance:
            best = sol
    return best


@lru_cache(maxsize=64)
def _polydisc_radii(spec: ReinhardtDomainSpec) -> np.ndarray | None:
    """Radii R with D = {|z_j| < R_j} when every constraint bounds one modulus."""
    radii = np.full(spec.n, np.inf)
    for c in spec.constraints:
        if not c.is_affine:
            return None
        a = c.A[0]
        nz = np.flatnonzero(a)
        if nz.size != 1 or a[nz[0]] <= 0:
            return None
        j = int(nz[0])
        radii[j] = min(radii[j], math.exp(-c.b[0] / a[j]))
    return radii


def d_abs(spec: ReinhardtDomainSpec, z, *, strict: bool = False) -> BoundarySolution:
    """Euclidean distance from a moduli point to the boundary of D.

    The nearest boundary point of a Reinhardt domain to a point of the closed
    nonnegative orthant can be taken in that orthant, so the search runs over
    the reflected moduli set {y : |y| in D}.  Reaching a zero on an excluded
    axis ends a ray exactly at that time.
    """
    r = _as_moduli(spec, z)
    if membership(spec, r, tol=0.0) is not Membership.INTERIOR:
        raise PreconditionError(f"{r} is not an interior point")
    excluded = np.array([not inc for inc in spec.axis_included])
    radii = _polydisc_radii(spec)
    if radii is not None:
        # product of discs and punctured discs: the nearest boundary point
        # moves one coordinate to its circle or to the puncture
        gaps = np.concatenate([radii - r, np.where(excluded, r, np.inf)])
        k = int(np.argmin(gaps))
        witness = r.copy()
        witness[k % spec.n] = radii[k] if k < spec.n else 0.0
        return BoundarySolution(float(gaps[k]), witness, True, {"closed_form": "polydisc"})

    def cap(origin: np.ndarray, U: np.ndarray) -> np.ndarray:
        out = np.full(len(U), np.inf)
        if not excluded.any():
            return out
        with np.errstate(divide="ignore", invalid="ignore"):
            t = -origin[None, :] / U
        t = np.where((U * origin[None, :] < 0) & excluded[None, :], t, np.inf)
        return np.minimum(out, t.min(axis=1))

    phi = lambda Y: moduli_margin(spec, Y)
    phi1 = lambda y: _scalar_moduli_margin(spec, y)
    scale = max(1.0, float(np.linalg.norm(r)))
    res = _raysearch.nearest_exit(phi, r, 1e-14 * scale, 1e8 * scale, cap=cap, phi1=phi1)
    if not math.isfinite(res.distance):
        return BoundarySolution(math.inf, np.full(spec.n, np.nan), True, {})
    sol = BoundarySolution(res.distance, np.abs(res.point), res.converged, {"starts": res.refined})
    if strict and not sol.converged:
        raise NonConvergenceError(f"d_abs did not converge at {r}: starts {res.refined}")
    return sol


# ---------------------------------------------------------------------------
# supporting halfspaces and normals


def supporting_halfspace(spec: ReinhardtDomainSpec, x0, index: int | None = None) -> tuple[np.ndarray, float]:
    """Gradient halfspace <alpha, x> < logc of the active constraint at x0.

    ``logc`` is <alpha, x0> - g(x0), the tangent plane of the active
    constraint; on the boundary g(x0) = 0 and this is <alpha, x0>.  By
    convexity g(x) >= g(x0) + <alpha, x - x0>, so the log image lies in the
    open halfspace.
    """
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    margins = np.array([lse_margin(c, x0) for c in spec.constraints])
    if margins.size == 0:
        raise AmbiguousSupportError("domain has no constraints")
    if index is None:
        top = float(margins.max())
        if abs(top) > SUPPORT_BOUNDARY_TOL:
            raise AmbiguousSupportError(f"x0 is not on the boundary (margin {top:.3g})")
        active = np.flatnonzero(margins >= top - ACTIVE_TOL)
        if len(active) != 1:
            raise AmbiguousSupportError(f"{len(active)} active constraints at {x0}; pass an index")
        index = int(active[0])
    c = spec.constraints[index]
    E = _term_exponents(c, x0)
    w = np.exp(E - E.max())
    w /= w.sum()
    alpha = w @ c.A
    return alpha, float(alpha @ x0 - margins[index])


def _best_denominator(v: np.ndarray, qmax: int) -> int:
    best_q, best_err = 1, math.inf
    for q in range(1, qmax + 1):
        err = float(np.max(np.abs(q * v - np.round(q * v)))) / q
        if err < best_err - 1e-12:
            best_q, best_err = q, err
    return best_q


@dataclass(frozen=True)
class IntegerHalfspace:
    A: tuple[int, ...]
    logC: float
    certified: bool
    scale: float


def rationalize_halfspace(
    alpha,
    logc: float,
    qmax: int,
    samples: Iterable[Sequence[float]] = (),
    spec: ReinhardtDomainSpec | None = None,
) -> IntegerHalfspace:
    """Integer exponent vector A ~ s * alpha and an offset logC.

    The direction is normalised by its smallest nonzero entry, approximated
    simultaneously with denominators up to ``qmax`` and reduced by the gcd.
    ``logC`` is s * logc raised by the worst sampled violation.  The result
    is certified only when every constraint of ``spec`` is affine and A is a
    nonnegative multiple of one of them, in which case logC is the exact
    offset of that constraint.
    """
    if qmax < 1:
        raise PreconditionError("qmax must be at least 1")
    alpha = np.asarray(alpha, dtype=float).reshape(-1)
    nz = np.abs(alpha[alpha != 0])
    if nz.size == 0:
        raise PreconditionError("alpha must be nonzero")
    ref = float(nz.min())
    v = alpha / ref
    q = _best_denominator(v, qmax)
    A = np.round(q * v).astype(int)
    g = reduce(math.gcd, (abs(int(a)) for a in A))
    A = A // g
    s = q / (g * ref)
    pts = [np.asarray(p, dtype=float) for p in samples]
    margin = max([float(A @ p) - s * logc for p in pts], default=0.0)
    logC = s * logc + max(margin, 0.0)
    certified = False
    if spec is not None and spec.constraints and all(c.is_affine for c in spec.constraints):
        for c in spec.constraints:
            a = c.A[0]
            k = np.flatnonzero(a)
            if k.size == 0:
                continue
            lam = A[k[0]] / a[k[0]]
            if lam > 0 and np.allclose(A, lam * a, rtol=0, atol=1e-12 * max(1.0, abs(lam))):
                certified = True
                logC = -lam * float(c.b[0])
                break
    return IntegerHalfspace(tuple(int(a) for a in A), float(logC), certified, float(s))


def halfspace_is_exact(spec: ReinhardtDomainSpec, A, logC: float) -> bool:
    """True when {<A, x> < logC} provably contains the log image: A is a
    positive multiple of an affine constraint's exponent and logC is at
    least the matching offset."""
    A = np.asarray(A, dtype=float)
    for c in spec.constraints:
        if not c.is_affine:
            continue
        a = c.A[0]
        k = np.flatnonzero(a)
        if k.size == 0:
            continue
        lam = A[k[0]] / a[k[0]]
        if lam > 0 and np.allclose(A, lam * a, rtol=0, atol=1e-12 * max(1.0, abs(lam))):
            if logC >= -lam * float(c.b[0]) - 1e-12:
                return True
    return False


def normal_vector_moduli(spec: ReinhardtDomainSpec, r0) -> np.ndarray:
    """Outward unit normal at a boundary point with positive moduli."""
    r0 = _as_moduli(spec, r0)
    if np.any(r0 <= 0):
        raise PreconditionError("normal_vector_moduli needs all moduli positive")
    alpha, _ = supporting_halfspace(spec, np.log(r0))
    grad = alpha / r0
    return grad / np.linalg.norm(grad)


# ---------------------------------------------------------------------------
# transformations


def rescale(spec: ReinhardtDomainSpec, a) -> ReinhardtDomainSpec:
    """Image of the domain under z -> (a_1 z_1, ..., a_n z_n).

    The log image is translated by log a, so every offset becomes
    b - <alpha, log a>.
    """
    a = np.asarray(a, dtype=float).reshape(-1)
    if a.size != spec.n or np.any(~(a > 0)):
        raise PreconditionError(f"scales must be {spec.n} positive numbers, got {a}")
    la = np.log(a)
    cons = tuple(
        LogConstraint(tuple(LogTerm(t.alpha, t.b - float(np.dot(t.alpha, la))) for t in c.terms))
        for c in spec.constraints
    )
    return ReinhardtDomainSpec(spec.name, cons, spec.axis_included, tuple(np.array(spec.witness) + la))


def restrict_to_axes(spec: ReinhardtDomainSpec, keep: Iterable[int]) -> ReinhardtDomainSpec:
    """The slice D ∩ {z_j = 0 for j not kept}, as a domain in the kept
    coordinates.  Terms with a positive exponent on a dropped axis vanish on
    the slice; a constraint left without terms is dropped."""
    keep = sorted(set(int(k) for k in keep))
    if not keep or keep[0] < 0 or keep[-1] >= spec.n:
        raise PreconditionError(f"invalid index set {keep}")
    dropped = [j for j in range(spec.n) if j not in keep]
    for j in dropped:
        if not spec.axis_included[j]:
            raise PreconditionError(f"axis {j + 1} is excluded; the slice is empty")
    cons = []
    for c in spec.constraints:
        terms = tuple(
            LogTerm(tuple(t.alpha[k] for k in keep), t.b)
            for t in c.terms
            if all(t.alpha[j] == 0 for j in dropped)
        )
        if terms:
            cons.append(LogConstraint(terms))
    return ReinhardtDomainSpec(
        spec.name,
        tuple(cons),
        tuple(spec.axis_included[k] for k in keep),
        tuple(spec.witness[k] for k in keep),
    )


def permute(spec: ReinhardtDomainSpec, perm: Sequence[int]) -> ReinhardtDomainSpec:
    """Relabel coordinates: new coordinate i is old coordinate perm[i]."""
    perm = list(perm)
    cons = tuple(
        LogConstraint(tuple(LogTerm(tuple(t.alpha[p] for p in perm), t.b) for t in c.terms))
        for c in spec.constraints
    )
    return ReinhardtDomainSpec(
        spec.name,
        cons,
        tuple(spec.axis_included[p] for p in perm),
        tuple(spec.witness[p] for p in perm),
    )


# ---------------------------------------------------------------------------
# JSON

SPEC_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["name", "dim", "constraints", "axis_included", "witness_log"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "dim": {"type": "integer", "minimum": 1},
        "constraints": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["terms"],
                "additionalProperties": False,
                "properties": {
                    "terms": {
                        "type": "array",
                        "minItems": 1,
                        "items": {
                            "type": "object",
                            "required": ["alpha", "b"],
                            "additionalProperties": False,
                            "properties": {
                                "alpha": {"type": "array", "items": {"type": "number"}},
                                "b": {"type": "number"},
                            },
                        },
                    }
                },
            },
        },
        "axis_included": {"type": "array", "items": {"type": "boolean"}},
        "witness_log": {"type": "array", "items": {"type": "number"}},
    },
}


def spec_from_dict(data: dict) -> ReinhardtDomainSpec:
    """Build a validated spec; shape problems raise SpecSchemaError, violated
    domain invariants raise SpecValidationError."""
    errors = sorted(Draft202012Validator(SPEC_SCHEMA).iter_errors(data), key=lambda e: list(e.path))
    if errors:
        msg = "; ".join(f"{'/'.join(map(str, e.path)) or '<root>'}: {e.message}" for e in errors[:10])
        raise SpecSchemaError(msg)
    n = data["dim"]
    if len(data["axis_included"]) != n or len(data["witness_log"]) != n:
        raise SpecSchemaError(f"axis_included and witness_log must have dim = {n} entries")
    for i, c in enumerate(data["constraints"]):
        for k, t in enumerate(c["terms"]):
            if len(t["alpha"]) != n:
                raise SpecSchemaError(f"constraints/{i}/terms/{k}/alpha must have {n} entries")
    cons = tuple(LogConstraint(tuple(LogTerm(t["alpha"], t["b"]) for t in c["terms"])) for c in data["constraints"])
    return ReinhardtDomainSpec(data["name"], cons, tuple(data["axis_included"]), tuple(data["witness_log"]))


def spec_to_dict(spec: ReinhardtDomainSpec) -> dict:
    return {
        "name": spec.name,
        "dim": spec.n,
        "constraints": [{"terms": [{"alpha": list(t.alpha), "b": t.b} for t in c.terms]} for c in spec.constraints],
        "axis_included": list(spec.axis_included),
        "witness_log": list(spec.witness),
    }


def load_spec(path: str | Path) -> ReinhardtDomainSpec:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SpecSchemaError(f"{path}: not valid JSON ({exc})") from exc
    return spec_from_dict(data)


def shipped_spec_path(name: str) -> Path:
    return DATA_DIR / f"{name}.json"


def shipped_spec(name: str) -> ReinhardtDomainSpec:
    return load_spec(shipped_spec_path(name))


SHIPPED = ("bidisc", "disc_punctured_disc", "product_lt_one", "d_beta_half", "remark_polyhedral")


def affine_spec(name: str, rows: Sequence[tuple[Sequence[float], float]], axis_included, witness) -> ReinhardtDomainSpec:
    """Spec whose constraints are single-term halfspaces <alpha, x> + b < 0."""
    return ReinhardtDomainSpec(
        name,
        tuple(LogConstraint((LogTerm(a, b),)) for a, b in rows),
        tuple(axis_included),
        tuple(witness),
    )
