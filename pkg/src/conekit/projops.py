"""Closed-form Euclidean projectors and Dykstra's alternating scheme.

These are the primitives behind every non-polyhedral solve in the package:
projection onto an intersection of simple closed convex sets is computed by
Dykstra's algorithm, which converges to the exact projection (not merely a
feasible point) whenever the intersection is nonempty.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

Projector = Callable[[np.ndarray], np.ndarray]

__all__ = [
    "project_orthant",
    "project_soc",
    "project_halfspace",
    "affine_projector",
    "project_l2_ball",
    "project_group_l1_ball",
    "dykstra",
    "DykstraResult",
]


def project_orthant(z: np.ndarray) -> np.ndarray:
    return np.maximum(z, 0.0)


def project_soc(z: np.ndarray) -> np.ndarray:
    """Projection onto {(t, y) : ||y||_2 <= t}.  Scalar coordinate first."""
    z = np.asarray(z, dtype=float)
    t, y = z[0], z[1:]
    s = np.linalg.norm(y)
    if s <= t:
        return z.copy()
    if s <= -t:
        return np.zeros_like(z)
    # boundary point along (1, y/s), scaled so residual is orthogonal
    a = 0.5 * (t + s)
    out = np.empty_like(z)
    out[0] = a
    out[1:] = (a / s) * y
    return out


def project_halfspace(a: np.ndarray, b: float) -> Projector:
    """Projector onto {z : <a, z> >= b}."""
    a = np.asarray(a, dtype=float)
    nn = float(a @ a)
    if nn == 0.0:
        raise ValueError("halfspace normal must be nonzero")

    def proj(z: np.ndarray) -> np.ndarray:
        r = float(a @ z) - b
        if r >= 0.0:
            return z
        return z - (r / nn) * a

    return proj


def affine_projector(A: np.ndarray, b: np.ndarray) -> Projector:
    """Projector onto {z : A z = b}, with the factorization cached.

    Uses the pseudoinverse so rank-deficient (consistent) systems behave.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float)
    pinv = np.linalg.pinv(A, rcond=1e-13)

    def proj(z: np.ndarray) -> np.ndarray:
        return z - pinv @ (A @ z - b)

    return proj


def project_l2_ball(radius: float, block: slice | None = None) -> Projector:
    if radius < 0:
        raise ValueError("radius must be nonnegative")

    def proj(z: np.ndarray) -> np.ndarray:
        seg = z if block is None else z[block]
        n = np.linalg.norm(seg)
        if n <= radius:
            return z
        out = z.copy()
        scaled = seg * (radius / n)
        if block is None:
            return scaled
        out[block] = scaled
        return out

    return proj


def project_group_l1_ball(blocks: Sequence[tuple[int, int]], radius: float) -> Projector:
    """Projector onto {z : sum_b ||z[b]||_2 <= radius}.

    Lagrangian form: each block shrinks by a common threshold lam chosen so
    the shrunk block norms sum to the radius; lam is the root of a piecewise
    linear decreasing function of the sorted block norms, found exactly.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    blocks = [tuple(b) for b in blocks]

    def proj(z: np.ndarray) -> np.ndarray:
        norms = np.array([np.linalg.norm(z[a:b]) for a, b in blocks])
        if norms.sum() <= radius:
            return z
        # find lam > 0 with sum max(norms - lam, 0) = radius
        s = np.sort(norms)[::-1]
        csum = np.cumsum(s)
        lam = None
        for k in range(1, len(s) + 1):
            cand = (csum[k - 1] - radius) / k
            if cand >= (s[k] if k < len(s) else 0.0) - 1e-15 and cand <= s[k - 1] + 1e-15:
                lam = cand
                break
        if lam is None:
            lam = (csum[-1] - radius) / len(s)
        out = z.copy()
        for (a, b), n in zip(blocks, norms):
            if n <= lam:
                out[a:b] = 0.0
            else:
                out[a:b] *= (n - lam) / n
        return out

    return proj


@dataclass
class DykstraResult:
    point: np.ndarray
    iterations: int
    max_violation: float
    converged: bool


def dykstra(
    projectors: Sequence[Projector],
    z0: np.ndarray,
    violation: Callable[[np.ndarray], float],
    tol: float = 1e-11,
    maxiter: int = 20000,
) -> DykstraResult:
    """Dykstra's cyclic projection scheme started at z0.

    Converges to the projection of z0 onto the intersection when it is
    nonempty.  ``violation`` measures distance-like infeasibility of an
    iterate against all sets; iteration stops once both the iterate movement
    and the violation are below tol.  On an empty intersection the movement
    stalls while the violation stays bounded away from zero, which callers
    use as an infeasibility verdict.
    """
    m = len(projectors)
    z = np.asarray(z0, dtype=float).copy()
    increments = [np.zeros_like(z) for _ in range(m)]
    it = 0
    for it in range(1, maxiter + 1):
        z_prev = z.copy()
        for i, proj in enumerate(projectors):
            w = z + increments[i]
            z = proj(w)
            increments[i] = w - z
        move = np.linalg.norm(z - z_prev)
        if move <= tol:
            v = violation(z)
            if v <= 10 * tol:
                return DykstraResult(z, it, v, True)
            if move <= tol * 1e-3:
                # stalled while infeasible
                return DykstraResult(z, it, v, False)
    return DykstraResult(z, it, violation(z), violation(z) <= 10 * tol)
