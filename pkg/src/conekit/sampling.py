"""Deterministic direction sampling on unit spheres.

Openness constants are suprema of convex positively homogeneous functions
over a unit sphere.  For polyhedral norms the supremum is attained at a ball
vertex, so the vertex set is an exact search grid.  Euclidean spheres get a
seeded quasi-uniform sample plus local refinement around the incumbent.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .norms import BlockNorm, NormTag

__all__ = ["SamplerConfig", "ball_vertices", "sphere_directions", "refine_on_sphere",
           "covering_radius"]


@dataclass(frozen=True)
class SamplerConfig:
    """Knobs for sphere sampling; identical seeds give identical grids.

    ``directions`` sizes coverage grids (surjectivity probes); optimization
    searches use the cheaper ``search_directions`` grid plus refinement.
    """

    directions: int = 2048
    search_directions: int = 192
    seed: int = 0
    refine_steps: int = 48
    vertex_cap: int = 4096  # largest sign-vector enumeration we attempt

    def search(self) -> "SamplerConfig":
        return SamplerConfig(self.search_directions, self.search_directions,
                             self.seed, self.refine_steps, self.vertex_cap)


def ball_vertices(dim: int, tag: NormTag, cap: int = 4096) -> np.ndarray | None:
    """Extreme points of the unit ball, or None when not enumerable.

    l1 balls have the 2*dim signed axes, linf balls the 2**dim sign vectors.
    Euclidean balls have no finite vertex set.
    """
    if tag is NormTag.L1:
        eye = np.eye(dim)
        return np.vstack([eye, -eye])
    if tag is NormTag.LINF:
        if 2**dim > cap:
            return None
        grid = np.array(np.meshgrid(*([[-1.0, 1.0]] * dim), indexing="ij"))
        return grid.reshape(dim, -1).T.copy()
    return None


def sphere_directions(dim: int, tag: NormTag, config: SamplerConfig | None = None) -> np.ndarray:
    """Directions of unit ``tag``-norm covering the sphere.

    Polyhedral tags return the exact vertex grid when small enough.  The
    Euclidean case uses an angle grid in the plane and a seeded Gaussian
    sample (plus the axes) in higher dimension.
    """
    config = config or SamplerConfig()
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if tag.is_polyhedral:
        verts = ball_vertices(dim, tag, cap=config.vertex_cap)
        if verts is not None:
            return verts
    if dim == 2:
        theta = np.linspace(0.0, 2.0 * math.pi, config.directions, endpoint=False)
        pts = np.column_stack([np.cos(theta), np.sin(theta)])
    else:
        rng = np.random.default_rng(config.seed)
        pts = rng.standard_normal((config.directions, dim))
        eye = np.eye(dim)
        pts = np.vstack([pts, eye, -eye])
        pts = pts[np.linalg.norm(pts, axis=1) > 1e-12]
    norms = np.array([tag.of(p) for p in pts])
    return pts / norms[:, None]


def refine_on_sphere(f, x0: np.ndarray, tag: NormTag, steps: int = 48) -> tuple[np.ndarray, float]:
    """Local maximization of f on the unit ``tag``-sphere from x0.

    In the plane this is a golden-section sweep on the angle; otherwise a
    shrinking coordinate pattern search with renormalization.  f is assumed
    continuous; only local improvement is attempted.
    """
    dim = x0.shape[0]
    x0 = x0 / tag.of(x0)
    if dim == 2 and tag is NormTag.L2:
        return _golden_angle(f, x0, steps)
    best_x = x0.copy()
    best_v = f(best_x)
    h = 0.5
    for _ in range(steps):
        improved = False
        for j in range(dim):
            for sgn in (1.0, -1.0):
                cand = best_x.copy()
                cand[j] += sgn * h
                nv = tag.of(cand)
                if nv <= 1e-12:
                    continue
                cand /= nv
                val = f(cand)
                if val > best_v + 1e-15:
                    best_x, best_v = cand, val
                    improved = True
        if not improved:
            h *= 0.35
            if h < 1e-10:
                break
    return best_x, best_v


def covering_radius(points: np.ndarray, tag: NormTag, config: SamplerConfig | None = None) -> float:
    """How far a unit-sphere point can be from the grid, in the tag norm.

    Drives the sampled upper end of constant brackets: a convex positively
    homogeneous m with m <= 1 + K d(u, grid) pointwise satisfies
    K <= max_grid / (1 - delta) once delta < 1.  The planar Euclidean value
    is exact (half the largest angular gap, as a chord); other cases probe a
    five-times-denser grid and pad by half, which is an estimate rather than
    a certificate.  Polyhedral vertex grids never need this: their suprema
    are attained on the grid itself.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    n, dim = pts.shape
    if n == 0:
        return math.inf
    if dim == 1:
        return 0.0 if n >= 2 else 2.0
    if dim == 2 and tag is NormTag.L2:
        ang = np.sort(np.arctan2(pts[:, 1], pts[:, 0]))
        gaps = np.diff(np.concatenate([ang, [ang[0] + 2.0 * math.pi]]))
        return 2.0 * math.sin(float(np.max(gaps)) / 4.0)
    probe_cfg = SamplerConfig(directions=5 * n, seed=(config.seed if config else 0) + 1)
    probes = sphere_directions(dim, tag, probe_cfg)
    worst = 0.0
    for chunk in np.array_split(probes, max(1, len(probes) // 256)):
        diffs = chunk[:, None, :] - pts[None, :, :]
        if tag is NormTag.L2:
            dists = np.linalg.norm(diffs, axis=2)
        elif tag is NormTag.L1:
            dists = np.sum(np.abs(diffs), axis=2)
        else:
            dists = np.max(np.abs(diffs), axis=2)
        worst = max(worst, float(np.max(np.min(dists, axis=1))))
    return 1.5 * worst


def _golden_angle(f, x0, steps):
    theta0 = math.atan2(x0[1], x0[0])
    width = 0.05 * math.pi

    def g(t):
        return f(np.array([math.cos(t), math.sin(t)]))

    a, b = theta0 - width, theta0 + width
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc, fd = g(c), g(d)
    for _ in range(steps):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = g(c)
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = g(d)
    t = 0.5 * (a + b)
    x = np.array([math.cos(t), math.sin(t)])
    val = f(x)
    if val >= max(fc, fd):
        return x, val
    t = c if fc >= fd else d
    x = np.array([math.cos(t), math.sin(t)])
    return x, g(t)
