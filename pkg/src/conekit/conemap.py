"""Linear maps restricted to cones, and how open they are.

A ConeMap is a matrix T together with a closed convex cone C in its domain.
The object of interest is the restriction T|_C and the quantities that
control surjectivity of T(C) onto the codomain:

    m(x)  = min { |c|_Y : T c = x, c in C }        preimage gauge
    K     = sup { m(x) : |x|_X = 1 }               openness constant
    r     = sup { t : t B_X subset of T(C ∩ B_Y) } interior radius

m is convex and positively homogeneous, finite everywhere exactly when T
maps C onto the codomain, and then K < inf with r K = 1.  The symmetrized
gauge max(m(x), m(-x)) is an equivalent norm on the codomain sandwiched
between |x|/M and K |x|, where M bounds the operator norm of T.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import cones as _cones
from . import solver as _solver
from .norms import BlockNorm, NormTag, operator_norm_upper
from .sampling import SamplerConfig, ball_vertices, refine_on_sphere, sphere_directions

__all__ = ["ConeMap", "SurjectivityReport"]


@dataclass
class SurjectivityReport:
    surjective: bool
    method: str  # "dual-cone" | "sampled"
    functional: np.ndarray | None = None  # y with <y, T c> >= 0 on C when not surjective
    unreachable: np.ndarray | None = None  # a point missed by T(C)
    note: str = ""


@dataclass(frozen=True, eq=False)
class ConeMap:
    """T : Y -> X restricted to a cone C in Y.

    codomain_norm tags the norm on X used by all openness measurements;
    domain_norm defaults to the matching block norm on Y (per summand for a
    direct-sum domain, flat otherwise).
    """

    matrix: np.ndarray
    cone: _cones.Cone
    codomain_norm: NormTag = NormTag.L2
    domain_norm: BlockNorm | None = None

    def __post_init__(self):
        T = np.atleast_2d(np.asarray(self.matrix, dtype=float))
        if T.shape[1] != self.cone.ambient_dim:
            raise ValueError(
                f"matrix has {T.shape[1]} columns but the cone lives in dimension "
                f"{self.cone.ambient_dim}"
            )
        object.__setattr__(self, "matrix", T)
        dn = self.domain_norm
        if dn is None:
            dn = _cones.space_norm(self.cone, NormTag.L2)
        elif isinstance(dn, NormTag):
            dn = _cones.space_norm(self.cone, dn)
        if dn.dim != T.shape[1]:
            raise ValueError("domain norm dimension does not match the matrix")
        object.__setattr__(self, "domain_norm", dn)

    @property
    def codomain_dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def domain_dim(self) -> int:
        return self.matrix.shape[1]

    def apply(self, c: np.ndarray, strict: bool = True) -> np.ndarray:
        """T c, refusing points outside the cone when strict."""
        c = np.asarray(c, dtype=float)
        if strict and not _cones.contains(self.cone, c, tol=1e-9 * max(1.0, float(np.linalg.norm(c)))):
            raise ValueError("point lies outside the domain cone")
        return self.matrix @ c

    # -- preimage gauge ----------------------------------------------------

    @cached_property
    def _sweep(self) -> _solver.MinNormSweep:
        return _solver.MinNormSweep(self.matrix, self.cone, self.domain_norm)

    def min_preimage(self, x: np.ndarray, tol: _solver.Tolerances = _solver.DEFAULT_TOL) -> _solver.Solution:
        """Smallest-norm cone point mapped to x, with certificate if none."""
        problem = _solver.MinNormProblem(self.matrix, x, self.cone, self.domain_norm)
        return _solver.solve_min_norm(problem, tol)

    def preimage_gauge(self, x: np.ndarray) -> float:
        """m(x): inf over preimages in the cone, inf when x is unreachable."""
        return self._sweep.value(np.asarray(x, dtype=float))

    def gauge_norm(self, x: np.ndarray) -> float:
        """max(m(x), m(-x)), the symmetrized preimage gauge."""
        x = np.asarray(x, dtype=float)
        return max(self._sweep.value(x), self._sweep.value(-x))

    def operator_norm_bound(self) -> float:
        """Upper bound M with |T c|_X <= M |c|_Y; exact for these norm pairs."""
        return operator_norm_upper(self.matrix, self.domain_norm, self.codomain_norm)

    def norm_equivalence(self, config: SamplerConfig | None = None) -> tuple[float, float]:
        """(lo, hi) with lo |x| <= gauge_norm(x) <= hi |x| on the codomain."""
        M = self.operator_norm_bound()
        K = self.openness_constant(config)
        return 1.0 / M, K

    # -- surjectivity ------------------------------------------------------

    def is_surjective(self, method: str = "auto", config: SamplerConfig | None = None) -> SurjectivityReport:
        """Does T map the cone onto the whole codomain?

        The dual-cone method is exact for polyhedral cones: T(C) fills the
        codomain iff the only y with T^T y in dual(C) is zero, which reduces
        to 2 d bounded linear programs.  Non-polyhedral cones are probed by
        sampled feasibility, honest about being a sample.
        """
        set_cone = _solver._set_level(self.cone)
        if method == "auto":
            method = "exact" if _cones.is_polyhedral(set_cone) else "sampled"
        if method == "exact":
            if not _cones.is_polyhedral(set_cone):
                raise ValueError("exact surjectivity test needs a polyhedral cone")
            return self._surjective_dual(set_cone)
        if method == "sampled":
            return self._surjective_sampled(config or SamplerConfig())
        raise ValueError(f"unknown method {method!r}")

    def _surjective_dual(self, set_cone: _cones.Cone) -> SurjectivityReport:
        d = self.codomain_dim
        lp = _solver.LinearProgram()
        yidx = lp.add_vars(d, nonneg=False)
        for i in range(d):
            e = np.zeros(d)
            e[i] = 1.0
            lp.add_row(e, "<=", 1.0, at=yidx)
            lp.add_row(-e, "<=", 1.0, at=yidx)
        _solver._encode_dual_membership(lp, set_cone, self.matrix.T, yidx)
        witnesses = []
        for i in range(d):
            for sgn in (-1.0, 1.0):
                lp.set_objective({yidx[i]: sgn})  # sgn=-1 maximizes y_i
                status, z, value, _ = lp.solve()
                if status is not _solver.SolveStatus.OPTIMAL:
                    raise ArithmeticError("surjectivity LP did not converge")
                # y = 0 is always feasible, so a nonzero extreme shows up as a
                # strictly negative optimum of sgn * y_i
                if value < -1e-8 and z is not None:
                    witnesses.append(z[:d].copy())
        if not witnesses:
            return SurjectivityReport(True, "dual-cone")
        agg = np.sum(witnesses, axis=0)
        if np.linalg.norm(agg) <= 1e-9:
            agg = witnesses[0]
        agg = agg / np.max(np.abs(agg))
        return SurjectivityReport(
            False,
            "dual-cone",
            functional=agg,
            unreachable=-agg,
            note="functional is nonnegative on the image; its negative is unreachable",
        )

    def _surjective_sampled(self, config: SamplerConfig) -> SurjectivityReport:
        dirs = sphere_directions(self.codomain_dim, self.codomain_norm, config)
        for x in dirs:
            if not self._sweep.feasible(x):
                report = _solver.check_feasible(self.matrix, x, self.cone)
                y = report.certificate.y if report.certificate is not None else None
                return SurjectivityReport(False, "sampled", functional=y, unreachable=x.copy(),
                                          note=f"direction outside the image among {len(dirs)} samples")
        return SurjectivityReport(True, "sampled", note=f"all {len(dirs)} sampled directions reachable")

    # -- openness constant and interior radius ------------------------------

    def _search_directions(self, config: SamplerConfig) -> tuple[np.ndarray, bool]:
        """(directions, exact) where exact means vertices of the codomain ball."""
        d = self.codomain_dim
        if self.codomain_norm.is_polyhedral:
            verts = ball_vertices(d, self.codomain_norm, cap=config.vertex_cap)
            if verts is not None:
                return verts, True
        return sphere_directions(d, self.codomain_norm, config.search()), False

    def openness_constant(self, config: SamplerConfig | None = None) -> float:
        """K = sup of m over the unit sphere of the codomain norm.

        m is convex, so over a polyhedral ball the supremum sits at a vertex
        and the vertex grid is exact.  Euclidean spheres are sampled and the
        incumbent refined locally; inf signals an unreachable direction.
        """
        config = config or SamplerConfig()
        dirs, exact = self._search_directions(config)
        vals = np.array([self._sweep.value(x) for x in dirs])
        if np.any(np.isinf(vals)):
            return math.inf
        best = int(np.argmax(vals))
        if exact:
            return float(vals[best])
        _, refined = refine_on_sphere(self._sweep.value, dirs[best], self.codomain_norm,
                                      steps=config.refine_steps)
        return float(max(refined, vals[best]))

    def interior_radius(self, config: SamplerConfig | None = None) -> float:
        """Largest t with t B_X inside T(C ∩ B_Y), measured independently.

        Works direction by direction: the reachability of t x from the unit
        ball of the cone is monotone in t, so each direction has a critical
        scale found by bisection on ball-constrained feasibility.  The radius
        is the smallest critical scale.  Directions already reachable at the
        running minimum are skipped after a single feasibility check.
        """
        config = config or SamplerConfig()
        dirs, exact = self._search_directions(config)
        ball = _solver.BallConstraint(np.eye(self.domain_dim), self.domain_norm, 1.0)
        sweep = _solver.MinNormSweep(self.matrix, self.cone, self.domain_norm, balls=(ball,))

        def critical(x, hi_guess: float) -> float:
            if not self._sweep.feasible(x):
                return 0.0  # the whole ray misses the image
            lo, hi = 0.0, max(hi_guess, 1e-8)
            if sweep.feasible(hi * x):
                for _ in range(60):
                    hi *= 2.0
                    if not sweep.feasible(hi * x):
                        lo = hi / 2.0
                        break
                else:
                    return math.inf
            for _ in range(80):
                if hi - lo <= 1e-9 * max(hi, 1e-6):
                    break
                mid = 0.5 * (lo + hi)
                if sweep.feasible(mid * x):
                    lo = mid
                else:
                    hi = mid
            return 0.5 * (lo + hi)

        running = math.inf
        argmin_dir = None
        for x in dirs:
            if math.isfinite(running) and sweep.feasible(running * x):
                continue  # critical scale of x exceeds the running minimum
            running = critical(x, running if math.isfinite(running) else 1.0)
            argmin_dir = x
            if running <= 0.0:
                return 0.0
        if not exact and argmin_dir is not None and math.isfinite(running):
            # polish: minimizing the critical scale = maximizing m over the sphere
            _, worst_m = refine_on_sphere(self._sweep.value, argmin_dir, self.codomain_norm,
                                          steps=config.refine_steps)
            if worst_m > 0 and math.isfinite(worst_m):
                running = min(running, 1.0 / worst_m)
        return float(running)
