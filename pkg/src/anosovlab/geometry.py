"""Regularity geometry: affine charts adapted to a flag pair, the
Hölder-exponent regression, tangency verification, the Hilbert metric on
the positive-definite cone, and the eigenvalue-gap inequality audit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .boundary import FlagSample, LimitCloud
from .functors import Representation
from .groups import enumerate_ball
from .linalg import (Subspace, direct_sum_margin,
                     point_subspace_distance, proj_distance,
                     subspace_intersection)
from .spectra import _jordan_logs, linefit

__all__ = [
    "ChartFrame",
    "build_chart",
    "chart_coords",
    "hoelder_regression",
    "tangency_check",
    "hilbert_distance_psd",
    "eigen_gap_inequality_check",
    "RegressionReport",
    "TangencyReport",
    "GapInequalityReport",
]

DISTANCE_FLOOR = 1e-14


@dataclass(frozen=True)
class ChartFrame:
    """Basis change adapted to a transverse flag pair (x, y):
    in the new basis xi^(1)(x) = [e1], xi^(m)(x) = span{e1..em},
    xi^(d-m)(y) = span{e(m+1)..ed} and xi^(d-1)(y) = span{e2..ed}."""

    basis_change: np.ndarray
    inverse: np.ndarray
    m: int

    @property
    def dim(self) -> int:
        return self.basis_change.shape[0]


def build_chart(sx: FlagSample, sy: FlagSample,
                margin_tol: float = 1e-8) -> ChartFrame:
    """Affine chart adapted to the flags of x (plus data of sx) and y
    (minus data of sy).

    Columns: the line of x, then a basis of xi^(m)(x) inside the
    hyperplane of y, then a basis of xi^(d-m)(y).  Requires the four
    compatibility conditions (nesting of each flag pair, transversality
    of line/hyperplane and of m/(d-m)); fails naming the violated one.
    """
    x1, xm = sx.xi1_plus, sx.xim_plus
    y_dm, y_d1 = sy.xi_dm_minus, sy.xi_d1_minus
    d, m = x1.ambient_dim, xm.rank
    checks = [
        ("xi1(x) inside xim(x)", xm.contains(x1, margin_tol)),
        ("xi_dm(y) inside xi_d1(y)", y_d1.contains(y_dm, margin_tol)),
        ("xi1(x) + xi_d1(y)", direct_sum_margin([x1, y_d1]) > margin_tol),
        ("xim(x) + xi_dm(y)", direct_sum_margin([xm, y_dm]) > margin_tol),
    ]
    for name, ok in checks:
        if not ok:
            raise ValueError(f"chart compatibility failed: {name}")
    cols = [x1.frame]
    if m > 1:
        inter = subspace_intersection(xm, y_d1)
        if inter.rank != m - 1:
            raise ValueError("chart compatibility failed: xim(x) meets "
                             f"xi_d1(y) in rank {inter.rank}, expected {m - 1}")
        cols.append(inter.frame)
    cols.append(y_dm.frame)
    B = np.column_stack(cols)
    if B.shape != (d, d):
        raise ValueError("flag ranks do not assemble a full basis")
    if abs(np.linalg.det(B)) < margin_tol:
        raise ValueError("chart compatibility failed: assembled basis singular")
    return ChartFrame(basis_change=B, inverse=np.linalg.inv(B), m=m)


def chart_coords(frame: ChartFrame, p) -> tuple[np.ndarray, np.ndarray]:
    """Affine coordinates [1 : u : w] of a projective point in the chart.

    u are the m-1 tangent coordinates, w the d-m transverse ones; points
    in the hyperplane at infinity (first coordinate ~ 0) are rejected.
    """
    v = p.vector() if isinstance(p, Subspace) else np.asarray(p, dtype=float)
    c = frame.inverse @ (v / np.linalg.norm(v))
    if abs(c[0]) < 1e-12 * np.linalg.norm(c):
        raise ValueError("point lies in the hyperplane at infinity of the chart")
    c = c / c[0]
    return c[1:frame.m], c[frame.m:]


REGRESSION_CAVEAT = ("slope estimates the regularity exponent only where "
                     "the sampled points actually fill the graph over the "
                     "tangent flag; the underlying bound is one-sided")


@dataclass(frozen=True)
class RegressionReport:
    slope: float
    intercept: float
    r_squared: float
    n_points: int
    n_floored: int
    window: tuple[float, float]
    metric: str
    caveat: str = REGRESSION_CAVEAT


def _pair_distances(cloud: LimitCloud, anchor: FlagSample, metric: str):
    """(distance to anchor point, distance to anchor tangent flag) per
    cloud point, in the requested metric variant."""
    x1, xm = anchor.xi1_plus, anchor.xim_plus
    out = []
    for s in cloud.samples:
        p = s.xi1_plus
        dp = proj_distance(p, x1)
        dt = point_subspace_distance(p, xm)
        if metric == "chord":
            dp = math.sqrt(2.0 - 2.0 * math.sqrt(max(0.0, 1.0 - dp * dp)))
            dt = math.sqrt(2.0 - 2.0 * math.sqrt(max(0.0, 1.0 - dt * dt)))
        out.append((dp, dt))
    return out


def hoelder_regression(cloud: LimitCloud, anchor: FlagSample,
                       window: tuple[float, float] = (1e-5, 1e-1),
                       metric: str = "sin",
                       min_points: int = 20) -> RegressionReport:
    """Least-squares slope of log(distance to the anchor's tangent flag)
    against log(distance to the anchor point), over cloud points whose
    anchor distance lies in ``window``.

    The slope estimates the Hölder exponent of the limit set at the
    anchor where the graph-equality hypothesis holds; points numerically
    on the tangent flag (distance below 1e-14) are excluded and counted.
    """
    if metric not in ("sin", "chord"):
        raise ValueError("metric must be 'sin' or 'chord'")
    lo, hi = window
    xs, ys = [], []
    floored = 0
    for dp, dt in _pair_distances(cloud, anchor, metric):
        if not lo < dp < hi:
            continue
        if dt <= DISTANCE_FLOOR:
            floored += 1
            continue
        xs.append(math.log(dp))
        ys.append(math.log(dt))
    if len(xs) < min_points:
        raise ValueError(
            f"too few cloud points in window ({len(xs)} < {min_points}); "
            "increase the ball radius or widen the window")
    slope, intercept, r2 = linefit(xs, ys)
    return RegressionReport(slope=slope, intercept=intercept, r_squared=r2,
                            n_points=len(xs), n_floored=floored,
                            window=(lo, hi), metric=metric)


@dataclass(frozen=True)
class TangencyReport:
    distances: np.ndarray
    angles: np.ndarray

    def max_angle_nearest(self, n: int) -> float:
        return float(self.angles[:n].max())


def tangency_check(cloud: LimitCloud, anchor: FlagSample,
                   n_points: int = 20, delta_max: float = 0.5) -> TangencyReport:
    """Angles between secant directions from the anchor and the anchor's
    tangent flag, for the nearest cloud points sorted by distance.

    The angles must decrease toward zero as the secant point approaches
    the anchor when the tangent flag is correct.
    """
    x1 = anchor.xi1_plus.vector()
    xm = anchor.xim_plus.frame
    rows = []
    for s in cloud.samples:
        p = s.xi1_plus.vector()
        dp = proj_distance(anchor.xi1_plus, s.xi1_plus)
        if dp < 1e-13 or dp > delta_max:
            continue
        # secant direction: component of p transverse to the anchor line
        sec = p - x1 * (x1 @ p)
        sec = sec / np.linalg.norm(sec)
        resid = sec - xm @ (xm.T @ sec)
        rows.append((dp, math.asin(min(1.0, float(np.linalg.norm(resid))))))
    if len(rows) < 5:
        raise ValueError("need at least 5 cloud points near the anchor")
    rows.sort()
    rows = rows[:n_points]
    return TangencyReport(distances=np.array([r[0] for r in rows]),
                          angles=np.array([r[1] for r in rows]))


def hilbert_distance_psd(X, Y, pd_tol: float = 1e-10) -> float:
    """Hilbert distance between positive-definite symmetric matrices in
    the projectivized PD cone.

    Computed as log(kappa_max / kappa_min) over the generalized
    eigenvalues of the pencil (Y, X); this equals the cross-ratio along
    the projective line through [X] and [Y] with the cone boundary points
    where det(X + tY) = 0.
    """
    A = np.asarray(X, dtype=float)
    B = np.asarray(Y, dtype=float)
    for name, M in (("X", A), ("Y", B)):
        if not np.allclose(M, M.T, atol=1e-10):
            raise ValueError(f"{name} is not symmetric")
        if np.linalg.eigvalsh(M).min() <= pd_tol:
            raise ValueError(f"{name} is not positive definite")
    kappa = sla.eigvalsh(B, A)
    return float(np.log(kappa[-1] / kappa[0]))


@dataclass(frozen=True)
class GapInequalityReport:
    passed: bool
    worst_margin: float
    worst_witness: str
    alpha: float
    m: int


def eigen_gap_inequality_check(rep: Representation, m: int, alpha: float,
                               radius: int, tol: float = 1e-9,
                               ball=None) -> GapInequalityReport:
    """Audits lam_(m+1)/lam_m <= (lam_2/lam_1)^(alpha-1) over the ball.

    In log form the margin is log(lam_m/lam_(m+1)) -
    (alpha-1) log(lam_1/lam_2); the check passes when the smallest margin
    stays above ``-tol``.  A claimed regularity exponent alpha for the
    limit set forces this inequality for every element.
    """
    if alpha <= 1:
        raise ValueError("alpha must exceed 1")
    d = rep.dim
    if not 2 <= m <= d - 1:
        raise ValueError(f"index m={m} out of range for dimension {d}")
    if ball is None:
        ball = enumerate_ball(rep.generators, radius)
    worst = math.inf
    witness = ""
    for g in ball:
        if not g.length:
            continue
        lam = _jordan_logs(rep.generators, g.word)
        margin = (lam[m - 1] - lam[m]) - (alpha - 1.0) * (lam[0] - lam[1])
        if margin < worst:
            worst = margin
            witness = g.word
    return GapInequalityReport(passed=bool(worst >= -tol), worst_margin=worst,
                               worst_witness=witness, alpha=alpha, m=m)
