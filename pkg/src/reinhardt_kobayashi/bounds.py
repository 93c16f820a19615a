"""Certified bounds on the Kobayashi distance of a Reinhardt domain.

Every upper bound here comes from a holomorphic map of a model domain (strip,
disc, punctured disc, annulus, or a product of them) into D, so it is the model
distance of two preimages; every lower bound comes from a holomorphic map of D
into the unit disc.  Each construction checks its own inclusion before it
returns a value.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import geometry
from .domain import (
    Membership,
    ReinhardtDomainSpec,
    _lse,
    _term_exponents,
    d_abs,
    d_log,
    halfspace_is_exact,
    log_membership,
    membership,
    rescale,
)
from .errors import (
    CertificationError,
    DegenerateInputError,
    InclusionError,
    NonConvergenceError,
    PreconditionError,
    ZeroRadiusError,
)

EPS_PRIME = 0.4
PAR_SAMPLES = 1000
INT_SAMPLES = 64
INCLUSION_TOL = 1e-12
DEFAULT_SEED = 0


@dataclass
class BoundResult:
    value: float
    direction: str
    construction: str
    tilde_d: float | None = None
    strip: tuple[float, float] | None = None
    certification: list[dict] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)

    @property
    def violations(self) -> int:
        return sum(int(c.get("violations", 0)) for c in self.certification)

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "direction": self.direction,
            "construction": self.construction,
            "tilde_d": self.tilde_d,
            "strip": list(self.strip) if self.strip is not None else None,
            "certification": self.certification,
            "flags": self.flags,
        }


def _moduli(spec: ReinhardtDomainSpec, z, name: str, positive: bool = False) -> np.ndarray:
    r = np.asarray(z, dtype=float).reshape(-1)
    if r.size != spec.n:
        raise PreconditionError(f"{name} has {r.size} coordinates, domain has {spec.n}")
    if not np.all(np.isfinite(r)) or np.any(r < 0) or (positive and np.any(r <= 0)):
        raise PreconditionError(f"{name} must have finite {'positive' if positive else 'nonnegative'} moduli, got {r}")
    return r


def _interior(spec: ReinhardtDomainSpec, r: np.ndarray, name: str) -> None:
    if membership(spec, r, tol=0.0) is not Membership.INTERIOR:
        raise PreconditionError(f"{name} = {r} is not an interior point")


def _converged_d_log(spec, x, what: str) -> float:
    sol = d_log(spec, x)
    if not sol.converged:
        raise NonConvergenceError(f"d_log did not converge at {what}")
    return sol.distance


def _converged_d_abs(spec, r, what: str) -> float:
    sol = d_abs(spec, r)
    if not sol.converged:
        raise NonConvergenceError(f"d_abs did not converge at {what}: {sol.details}")
    return sol.distance


# ---------------------------------------------------------------------------
# strips and parallelepipeds


def _parallelepiped_samples(
    logz: np.ndarray, j: int, tilde_d: float, count: int, rng: np.random.Generator
) -> np.ndarray:
    """Random points of the log image of the comparison domain for index j:
    x_j = s with s in (min(0, log z_j) - d~, max(0, log z_j) + d~) and
    x_i = s log z_i / log z_j + v_i with |v_i| < d~."""
    n = logz.size
    lo, hi = min(0.0, logz[j]) - tilde_d, max(0.0, logz[j]) + tilde_d
    s = rng.uniform(lo, hi, size=count)
    q = logz / logz[j]
    X = s[:, None] * q[None, :] + rng.uniform(-tilde_d, tilde_d, size=(count, n))
    X[:, j] = s
    return X


def parallelepiped_upper(
    spec: ReinhardtDomainSpec,
    zeta0,
    z,
    *,
    base=None,
    samples: int = PAR_SAMPLES,
    seed: int = DEFAULT_SEED,
) -> BoundResult:
    """Upper bound on k_D(1, z) through a strip times annuli.

    For an index j with log z_j != 0 the map
    (lam, mu) -> (exp(lam log z_i / log z_j + mu_i))_i, lam in a strip around
    [min(0, log z_j), max(0, log z_j)] and mu_i in an annulus, sends 0 to the
    all-ones point and log z_j to z.  The strip is widened by an inset d~ on
    each side; the inset shrinks with d_D(z), which is what produces the
    -log d_D(z) growth.

    ``base`` moves the base point from all-ones to an arbitrary positive
    point by rescaling first; ``zeta0`` and ``z`` are given in the original
    coordinates either way.
    """
    if base is not None:
        a = _moduli(spec, base, "base", positive=True)
        spec = rescale(spec, 1.0 / a)
        zeta0 = _moduli(spec, zeta0, "zeta0") / a
        z = _moduli(spec, z, "z") / a
    zeta0 = _moduli(spec, zeta0, "zeta0")
    z = _moduli(spec, z, "z", positive=True)
    n = spec.n
    origin = np.zeros(n)
    if not log_membership(spec, origin) < 0:
        raise PreconditionError("the all-ones point is not interior; rescale to an interior base first")
    _interior(spec, z, "z")
    logz = np.log(z)
    indices = [j for j in range(n) if logz[j] != 0.0]
    if not indices:
        raise DegenerateInputError("z equals the base point; no strip index is available")

    d = _converged_d_abs(spec, z, "z")
    d_log0 = _converged_d_log(spec, origin, "the base point")
    d_logz = _converged_d_log(spec, logz, "log z")
    norm_zeta0 = float(np.linalg.norm(zeta0))
    if norm_zeta0 > 0:
        eps = 1.0 / (3.0 * (norm_zeta0 + 1.0))
        raw = eps * d
        policy = {"policy": "zeta0 != 0", "eps": eps}
    else:
        eps2 = EPS_PRIME * d_log0
        raw = eps2 * d / float(np.linalg.norm(z))
        policy = {"policy": "zeta0 = 0", "eps_prime": EPS_PRIME, "eps_double_prime": eps2}
    rho = min(d_log0, d_logz)

    best = None
    for j in indices:
        q = np.delete(logz, j) / logz[j]
        K = 1.0 + math.sqrt(n - 1) + float(np.linalg.norm(q))
        tilde_d = min(raw, rho / K)
        lo, hi = min(0.0, logz[j]) - tilde_d, max(0.0, logz[j]) + tilde_d
        value = geometry.strip_distance(0.0, complex(logz[j]), lo, hi)
        if best is None or value < best[0]:
            best = (value, j, tilde_d, (lo, hi), K)
    value, j, tilde_d, strip, K = best
    if not tilde_d > 0:
        raise DegenerateInputError("inset collapsed to zero")

    rng = np.random.default_rng(seed)
    X = _parallelepiped_samples(logz, j, tilde_d, samples, rng)
    margins = log_membership(spec, X)
    violations = int(np.count_nonzero(~(margins < 0)))
    cert = {
        "check": "parallelepiped log image inside log D",
        "index": j + 1,
        "samples": samples,
        "violations": violations,
        "max_margin": float(np.max(margins)),
        "d": d,
        "raw_inset": raw,
        "rho": rho,
        "K": K,
        **policy,
    }
    if violations:
        raise CertificationError(f"{violations} of {samples} parallelepiped samples left the domain")
    return BoundResult(value, "upper", "parallelepiped", tilde_d, strip, [cert])


def interval_upper(spec: ReinhardtDomainSpec, z0, z, *, samples: int = INT_SAMPLES) -> BoundResult:
    """Upper bound on k_D(z0, z) for positive points through one strip.

    lam -> exp(log z0 + lam (log z - log z0)) maps the strip
    {-eps < Re lam < 1 + delta} into D when the overshoots eps M and
    delta M stay within half of the distances to the complement at the ends.
    """
    z0 = _moduli(spec, z0, "z0", positive=True)
    z = _moduli(spec, z, "z", positive=True)
    _interior(spec, z0, "z0")
    _interior(spec, z, "z")
    x0, x1 = np.log(z0), np.log(z)
    step = x1 - x0
    M = float(np.linalg.norm(step))
    flags = []
    if M == 0.0:
        cert = {"check": "z0 = z", "violations": 0, "M": 0.0}
        return BoundResult(0.0, "upper", "interval", None, None, [cert], ["degenerate"])
    eps = _converged_d_log(spec, x0, "log z0") / (2.0 * M)
    delta = _converged_d_log(spec, x1, "log z") / (2.0 * M)
    ts = -eps + (1.0 + eps + delta) * (np.arange(samples) + 0.5) / samples
    margins = log_membership(spec, x0[None, :] + ts[:, None] * step[None, :])
    violations = int(np.count_nonzero(~(margins < 0)))
    cert = {
        "check": "extended segment inside log D",
        "samples": samples,
        "violations": violations,
        "max_margin": float(np.max(margins)),
        "M": M,
        "eps": eps,
        "delta": delta,
    }
    if violations:
        raise CertificationError(f"{violations} of {samples} segment samples left the domain")
    value = geometry.strip_distance(0.0, 1.0, -eps, 1.0 + delta)
    return BoundResult(value, "upper", "interval", None, (-eps, 1.0 + delta), [cert], flags)


def torus_correction(spec: ReinhardtDomainSpec, z0, thetas: Sequence[float]) -> BoundResult:
    """Upper bound on k_D(z0, z0 e^{i theta}) through a product of annuli.

    The log image of the annuli product is a cube of half-side
    d_log(log z0) / sqrt(n) around log z0, which fits in the ball of radius
    d_log(log z0).
    """
    z0 = _moduli(spec, z0, "z0", positive=True)
    thetas = np.asarray(thetas, dtype=float).reshape(-1)
    if thetas.size != spec.n:
        raise PreconditionError(f"expected {spec.n} angles")
    _interior(spec, z0, "z0")
    dl = _converged_d_log(spec, np.log(z0), "log z0")
    r = dl / math.sqrt(spec.n)
    vals = [
        geometry.annulus_distance(z0[j], z0[j] * complex(math.cos(th), math.sin(th)), z0[j] * math.exp(-r), z0[j] * math.exp(r))
        for j, th in enumerate(thetas)
    ]
    cert = {"check": "annuli cube inside d_log ball", "half_side": r, "d_log": dl, "violations": 0}
    return BoundResult(max(vals, default=0.0), "upper", "torus", None, None, [cert])


# ---------------------------------------------------------------------------
# punctured polydiscs


def _box_sup(spec: ReinhardtDomainSpec, lows: np.ndarray, highs: np.ndarray) -> float:
    """Exact supremum of the domain margin over the box prod (lows_j, highs_j)
    in log coordinates; lows may be -inf.  Each constraint is convex, so its
    supremum over a box is attained at (or in the limit towards) a vertex."""
    V = np.array(list(itertools.product(*zip(lows, highs))), dtype=float)
    if not spec.constraints:
        return -math.inf
    return float(max(np.max(_lse(_term_exponents(c, V))) for c in spec.constraints))


def _polydisc_box(zeta0: np.ndarray, r: float) -> tuple[np.ndarray, np.ndarray]:
    with np.errstate(divide="ignore", invalid="ignore"):
        lows = np.where(zeta0 - r > 0, np.log(np.maximum(zeta0 - r, 0.0)), -np.inf)
    highs = np.log(zeta0 + r)
    return lows, highs


def polydisc_inclusion_radius(
    spec: ReinhardtDomainSpec, zeta0, rmax: float, *, tol: float = 1e-12
) -> float:
    """Largest r (to within ``tol`` relative) with P(zeta0, r) ∩ C*^n ⊂ D.

    The moduli of the punctured polydisc fill, per coordinate, the interval
    (max(zeta0_j - r, 0), zeta0_j + r); its log image is a box, and the
    inclusion test is the exact box supremum of the margins.
    """
    zeta0 = _moduli(spec, zeta0, "zeta0")
    if not rmax > 0:
        raise PreconditionError("rmax must be positive")
    ok = lambda r: _box_sup(spec, *_polydisc_box(zeta0, r)) < 0
    if ok(rmax):
        return float(rmax)
    lo, hi = 0.0, float(rmax)
    probe = hi
    for _ in range(200):
        probe *= 0.5
        if ok(probe):
            lo = probe
            break
        hi = probe
    else:
        raise ZeroRadiusError(f"no punctured polydisc around {zeta0} fits in the domain")
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def punctured_polydisc_upper(
    spec: ReinhardtDomainSpec, zeta0, z0, z, *, rmax: float | None = None
) -> BoundResult:
    """Product bound through P(zeta0, r) ∩ C*^n.

    Coordinates where zeta0 vanishes contribute a punctured-disc distance,
    the others a disc distance.  The disc radius is kept at most zeta0_j for
    the non-vanishing coordinates so those factors are genuine discs.
    """
    zeta0 = _moduli(spec, zeta0, "zeta0")
    z0 = _moduli(spec, z0, "z0", positive=True)
    z = _moduli(spec, z, "z", positive=True)
    J = [j for j in range(spec.n) if zeta0[j] == 0.0]
    bad = [j + 1 for j in J if spec.axis_included[j]]
    if bad:
        raise PreconditionError(f"zeta0 vanishes on included axes {bad}")
    if rmax is None:
        rmax = 2.0 * (1.0 + float(np.max(zeta0)))
    r_incl = polydisc_inclusion_radius(spec, zeta0, rmax)
    others = [j for j in range(spec.n) if j not in J]
    r = min([r_incl] + [float(zeta0[j]) for j in others])
    for name, p in (("z0", z0), ("z", z)):
        for j in range(spec.n):
            inside = p[j] < r if j in J else abs(p[j] - zeta0[j]) < r
            if not inside:
                raise PreconditionError(f"{name} = {p} is outside the punctured polydisc of radius {r}")
    vals = [geometry.disc_distance(z[j], z0[j], zeta0[j], r) for j in others]
    vals += [geometry.punctured_disc_distance(z0[j], z[j], r) for j in J]
    cert = {
        "check": "box supremum of margins over the polydisc log image",
        "radius": r,
        "inclusion_radius": r_incl,
        "zero_set": [j + 1 for j in J],
        "violations": 0,
    }
    return BoundResult(max(vals), "upper", "punctured_polydisc", None, None, [cert])


# ---------------------------------------------------------------------------
# lower bound


def monomial_lower(
    spec: ReinhardtDomainSpec, A, logC: float, z0, z, *, certified: bool = False
) -> BoundResult:
    """Lower bound p(z0^A / C, z^A / C).

    z -> z^A / C maps D into the unit disc when D lies in {|z^A| < C}.  That
    inclusion is accepted when it is exact for the spec (A a positive
    multiple of an affine constraint with a large enough C) or when the
    caller vouches for it with ``certified``.
    """
    A_arr = np.asarray(A)
    if A_arr.size != spec.n or not np.all(np.equal(np.round(A_arr), A_arr)):
        raise CertificationError(f"A must be {spec.n} integers, got {A}")
    A_arr = np.round(A_arr).astype(int)
    if not np.any(A_arr):
        raise CertificationError("A must be nonzero")
    conflict = [j + 1 for j in range(spec.n) if A_arr[j] < 0 and spec.axis_included[j]]
    if conflict:
        raise CertificationError(f"negative exponents on included axes {conflict}")
    exact = halfspace_is_exact(spec, A_arr, logC)
    if not (exact or certified):
        raise CertificationError("the halfspace is not known to contain the domain")
    z0 = _moduli(spec, z0, "z0")
    z = _moduli(spec, z, "z")
    _interior(spec, z0, "z0")
    _interior(spec, z, "z")

    def image(r: np.ndarray) -> float:
        with np.errstate(divide="ignore"):
            lr = np.log(r)
        terms = [a * x for a, x in zip(A_arr, lr) if a != 0]
        if any(t == math.inf for t in terms):
            raise CertificationError("monomial undefined at a point with a zero coordinate")
        return math.exp(sum(terms) - logC)

    u0, u = image(z0), image(z)
    if not (u0 < 1.0 and u < 1.0):
        raise CertificationError(f"monomial image ({u0}, {u}) leaves the unit disc")
    cert = {
        "check": "exact halfspace" if exact else "caller-certified halfspace",
        "A": [int(a) for a in A_arr],
        "logC": float(logC),
        "u0": u0,
        "u": u,
        "violations": 0,
    }
    return BoundResult(geometry.poincare_distance(u0, u), "lower", "monomial", None, None, [cert])


# ---------------------------------------------------------------------------
# analytic discs


def analytic_disc_upper(
    spec: ReinhardtDomainSpec, c, m, s: float, lam0: complex, lam1: complex
) -> BoundResult:
    """Upper bound through F(lam) = (c_j lam^{m_j})_j on the disc |lam| < s.

    A zero coefficient freezes that coordinate at 0.  Along |lam| = e^tau the
    log image of F is an affine ray in tau, so each constraint is a convex,
    nondecreasing function of tau once every term has <alpha_k, m> >= 0;
    the disc then lies in D iff the value at tau = log s is <= 0 and the
    limit at tau -> -inf is < 0.
    """
    c = np.asarray(c, dtype=float).reshape(-1)
    m = np.asarray(m).reshape(-1)
    if c.size != spec.n or m.size != spec.n:
        raise PreconditionError(f"c and m need {spec.n} entries")
    if np.any(c < 0) or not np.all(np.isfinite(c)):
        raise PreconditionError("coefficients must be finite and nonnegative")
    if not np.all(np.equal(np.round(m), m)) or np.any(m < 0):
        raise PreconditionError("exponents must be nonnegative integers")
    m = np.round(m).astype(int)
    if not s > 0:
        raise PreconditionError("disc radius must be positive")
    lam0, lam1 = complex(lam0), complex(lam1)
    if not (abs(lam0) < s and abs(lam1) < s):
        raise PreconditionError("disc parameters must lie inside the disc")
    for j in range(spec.n):
        vanishes = c[j] == 0 or m[j] > 0
        if vanishes and not spec.axis_included[j]:
            raise InclusionError(f"the disc meets {{z_{j + 1} = 0}} but that axis is excluded")

    frozen = c == 0
    with np.errstate(divide="ignore"):
        logc = np.where(frozen, -np.inf, np.log(np.where(frozen, 1.0, c)))
    checks = []
    for i, con in enumerate(spec.constraints):
        slopes = con.A @ m
        # exponents at tau = log s; frozen coordinates enter as -inf
        E = _term_exponents(con, (logc + math.log(s) * np.where(frozen, 0.0, m))[None, :])[0]
        live = np.isfinite(E) | (E == np.inf)
        if np.any(E == np.inf):
            raise InclusionError(f"constraint {i + 1}: a term blows up on a frozen coordinate")
        if np.any(live & (slopes < 0)):
            raise InclusionError(f"constraint {i + 1}: a term grows as lam -> 0")
        edge = float(_lse(E))
        flat = E[live & (slopes == 0)]
        limit = float(_lse(flat)) if flat.size else -math.inf
        checks.append({"constraint": i + 1, "edge_margin": edge, "center_limit": limit})
        if edge > 0 or limit >= 0:
            raise InclusionError(f"constraint {i + 1}: disc leaves the domain (edge margin {edge:.3g})")
    cert = {"check": "exact disc inclusion", "constraints": checks, "violations": 0}
    value = geometry.disc_distance(lam0, lam1, 0.0, s)
    return BoundResult(value, "upper", "analytic_disc", None, None, [cert])


def disc_image(c, m, lam: complex) -> np.ndarray:
    """Moduli of F(lam) = (c_j lam^{m_j})_j."""
    c = np.asarray(c, dtype=float)
    m = np.asarray(m, dtype=int)
    return c * abs(complex(lam)) ** m
