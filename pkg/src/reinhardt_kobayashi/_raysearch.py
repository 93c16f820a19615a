"""Nearest boundary point of an open set as the shortest first-exit ray.

For an open set and an interior origin, the distance to the boundary equals
the minimum over unit directions of the first exit time along the ray, since
the segment to a nearest boundary point stays inside.  This holds without
convexity, which is what lets one routine serve both the convex log image
and the (generally non-convex) set of moduli.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq, minimize, minimize_scalar

# phi(Y) -> margins, negative inside; Y has shape (..., n)
Margin = Callable[[np.ndarray], np.ndarray]
# phi1(y) -> margin of a single point, as a Python float
Margin1 = Callable[[np.ndarray], float]
# cap(origin, U) -> extra exit times per direction (inf when none)
Cap = Callable[[np.ndarray, np.ndarray], np.ndarray]

GRID_RATIO = 1.03
COARSE_RATIO = 1.1
N_CIRCLE = 512
N_SPHERE = 2048
N_STARTS = 4
BISECT_STEPS = 24
REFINE_FLOOR = 1e-3


@dataclass
class RaySearchResult:
    distance: float
    direction: np.ndarray
    point: np.ndarray
    converged: bool
    refined: list[float]


def sphere_directions(n: int) -> np.ndarray:
    if n == 1:
        return np.array([[1.0], [-1.0]])
    if n == 2:
        th = 2.0 * np.pi * np.arange(N_CIRCLE) / N_CIRCLE
        return np.stack([np.cos(th), np.sin(th)], axis=1)
    eye = np.eye(n)
    rng = np.random.default_rng(20240607)
    g = rng.standard_normal((N_SPHERE, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return np.concatenate([eye, -eye, g])


def _grid(t_lo: float, t_hi: float, ratio: float = GRID_RATIO) -> np.ndarray:
    count = int(math.ceil(math.log(t_hi / t_lo) / math.log(ratio))) + 1
    return t_lo * ratio ** np.arange(count)


def _safe(phi: Margin, Y: np.ndarray) -> np.ndarray:
    with np.errstate(all="ignore"):
        v = phi(Y)
    v = np.where(np.isnan(v), np.inf, v)
    return np.clip(v, -1e300, 1e300)


def _safe1(phi1: Margin1, y: np.ndarray) -> float:
    v = phi1(y)
    if v != v:
        return 1e300
    return min(max(v, -1e300), 1e300)


def first_exits(
    phi: Margin,
    origin: np.ndarray,
    dirs: np.ndarray,
    t_lo: float,
    t_hi: float,
    cap: Cap | None = None,
    refine: bool = False,
    phi1: Margin1 | None = None,
    ratio: float = GRID_RATIO,
) -> np.ndarray:
    """First exit time along each direction; inf if the ray never leaves
    before ``t_hi``.  Without ``refine`` the time is located by a fixed number
    of bisection steps (relative resolution about 2e-9); with it, each
    bracket is solved by Brent's method to machine precision."""
    ts = _grid(t_lo, t_hi, ratio)
    Y = origin[None, None, :] + ts[None, :, None] * dirs[:, None, :]
    vals = _safe(phi, Y)
    outside = vals >= 0.0
    hit = outside.any(axis=1)
    idx = np.argmax(outside, axis=1)
    exits = np.where(hit, ts[idx], np.inf)
    # vectorised bisection inside each bracketing cell
    k = np.flatnonzero(hit & (idx > 0))
    if k.size and not refine:
        lo, hi, U = ts[idx[k] - 1], ts[idx[k]], dirs[k]
        for _ in range(BISECT_STEPS):
            mid = 0.5 * (lo + hi)
            out = _safe(phi, origin[None, :] + mid[:, None] * U) >= 0.0
            hi = np.where(out, mid, hi)
            lo = np.where(out, lo, mid)
        exits[k] = hi
    if refine:
        for k in np.flatnonzero(hit):
            i = idx[k]
            if i == 0:
                continue
            u = dirs[k]
            if phi1 is None:
                f = lambda t: float(_safe(phi, (origin + t * u)[None, :])[0])
            else:
                f = lambda t: _safe1(phi1, origin + t * u)
            a, b = ts[i - 1], ts[i]
            if f(b) <= 0.0 or f(a) >= 0.0:
                continue
            exits[k] = brentq(f, a, b, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=200)
    if cap is not None:
        exits = np.minimum(exits, cap(origin, dirs))
    return exits


def _tangent_basis(u: np.ndarray) -> np.ndarray:
    # columns orthonormal and orthogonal to u
    q, _ = np.linalg.qr(np.column_stack([u, np.eye(len(u))]))
    return q[:, 1 : len(u)]


def nearest_exit(
    phi: Margin,
    origin: np.ndarray,
    t_lo: float,
    t_hi: float,
    cap: Cap | None = None,
    agree_tol: float = 1e-7,
    phi1: Margin1 | None = None,
) -> RaySearchResult:
    """Minimise the first exit time over the unit sphere.

    A coarse scan over a fixed direction set picks starts (the two best
    directions of the best valley plus the best direction of each other
    valley); each start is refined locally.  ``converged`` requires the two
    starts from the best valley to refine to the same time within
    ``agree_tol`` relative.
    """
    origin = np.asarray(origin, dtype=float)
    n = origin.size
    dirs = sphere_directions(n)
    coarse = first_exits(phi, origin, dirs, t_lo, t_hi, cap, ratio=COARSE_RATIO)
    if not np.isfinite(coarse).any():
        return RaySearchResult(math.inf, dirs[0], np.full(n, np.nan), True, [])

    starts = _pick_starts(coarse, dirs)

    # Refinement only perturbs directions that already exit near the coarse
    # minimum, so its scans can start well above t_lo.
    lo_ref = max(t_lo, REFINE_FLOOR * float(np.min(coarse)))

    def exit_along(u: np.ndarray, hi: float) -> float:
        u = u / np.linalg.norm(u)
        return float(first_exits(phi, origin, u[None, :], lo_ref, hi, cap, refine=True, phi1=phi1)[0])

    refined: list[tuple[float, np.ndarray]] = []
    for k in starts:
        u0 = dirs[k]
        hi = min(t_hi, 4.0 * coarse[k])
        if n == 1:
            refined.append((exit_along(u0, t_hi), u0))
            continue
        if n == 2:
            th0 = math.atan2(u0[1], u0[0])
            step = 2.0 * math.pi / N_CIRCLE
            res = minimize_scalar(
                lambda th: exit_along(np.array([math.cos(th), math.sin(th)]), hi),
                bounds=(th0 - 2 * step, th0 + 2 * step),
                method="bounded",
                options={"xatol": 1e-12},
            )
            th = float(res.x)
            u = np.array([math.cos(th), math.sin(th)])
            refined.append((exit_along(u, hi), u))
            continue
        basis = _tangent_basis(u0)
        scale = coarse[k]
        obj = lambda v: exit_along(u0 + basis @ v, hi) / scale
        simplex = np.vstack([np.zeros(n - 1), 0.05 * np.eye(n - 1)])
        res = minimize(
            obj,
            np.zeros(n - 1),
            method="Nelder-Mead",
            options={"initial_simplex": simplex, "xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000},
        )
        u = u0 + basis @ res.x
        u /= np.linalg.norm(u)
        refined.append((exit_along(u, hi), u))

    if n == 1 or len(refined) == 1:
        converged = True
    else:
        a, b = refined[0][0], refined[1][0]
        converged = abs(a - b) <= agree_tol * max(min(a, b), 1e-300)
    best_t, best_u = min(refined, key=lambda r: r[0])
    return RaySearchResult(best_t, best_u, origin + best_t * best_u, bool(converged), [r[0] for r in refined])


def _pick_starts(exits: np.ndarray, dirs: np.ndarray) -> list[int]:
    m = len(exits)
    if m <= N_STARTS:
        return [int(k) for k in np.argsort(exits)]
    if dirs.shape[1] == 2:
        left, right = np.roll(exits, 1), np.roll(exits, -1)
        minima = np.flatnonzero((exits <= left) & (exits <= right) & np.isfinite(exits))
    else:
        minima = np.argsort(exits)[: 8 * N_STARTS]
    minima = sorted(minima, key=lambda k: exits[k])
    best = minima[0]
    starts = [int(best)]
    # second start inside the best valley
    if dirs.shape[1] == 2:
        nb = [(best - 1) % m, (best + 1) % m]
        starts.append(int(min(nb, key=lambda k: exits[k])))
    else:
        near = np.argsort(-(dirs @ dirs[best]))[1]
        starts.append(int(near))
    for k in minima[1:]:
        if len(starts) >= N_STARTS:
            break
        if dirs.shape[1] > 2 and max(float(dirs[k] @ dirs[s]) for s in starts) > 0.9:
            continue
        if k not in starts:
            starts.append(int(k))
    return starts
