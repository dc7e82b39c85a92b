"""Sampling limit sets and flag maps from attracting data of ball
elements, and testing the boundary axioms: transversality, the
controlled-set condition, hyperconvexity, and an irreducibility proxy.

A :class:`FlagSample` is a witness element together with the flags of its
two fixed boundary points: attracting data of the element at the plus
point, attracting data of its inverse at the minus point (the repelling
flags of the element itself, computed stably from the inverse).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .functors import Representation
from .groups import (GroupElement, enumerate_ball, inverse_word,
                     is_infinite_order_proxy)
from .linalg import (SpectralData, SpectralGapError, Subspace,
                     direct_sum_margin, eigen_moduli, orthonormalize,
                     point_subspace_distance, proj_distance,
                     top_invariant_subspace)
from .spectra import cartan_jordan, gap_profile

__all__ = [
    "FlagSample",
    "LimitCloud",
    "limit_samples",
    "transversality_scan",
    "hyperconvexity_scan",
    "controlled_set_check",
    "irreducibility_proxy",
    "TransversalityReport",
    "HyperconvexityReport",
    "ControlledSetReport",
    "IrreducibilityReport",
]

DEFAULT_FLAG_DEDUP_TOL = 1e-7


@dataclass(frozen=True)
class FlagSample:
    """Flags attached to the fixed points of one witness element."""

    witness: GroupElement
    xi1_plus: Subspace       # attracting line of the witness
    xim_plus: Subspace       # attracting m-subspace of the witness
    xi_dm_minus: Subspace    # attracting (d-m)-subspace of the inverse
    xi_d1_minus: Subspace    # attracting hyperplane of the inverse
    xi1_minus: Subspace      # attracting line of the inverse (minus point)
    spectral: SpectralData


@dataclass(frozen=True)
class LimitCloud:
    samples: tuple[FlagSample, ...]
    m: int
    rep_recipe: dict

    def __len__(self) -> int:
        return len(self.samples)

    def points(self) -> np.ndarray:
        """Unit representatives of the sampled limit-set points, stacked."""
        return np.array([s.xi1_plus.vector() for s in self.samples])

    def coverage_stats(self) -> dict:
        """Nearest-neighbour spacing of the sampled points: how densely
        the cloud covers the limit set at this radius.  Descriptive only;
        there is no theoretical coverage guarantee."""
        pts = self.points()
        if len(pts) < 2:
            return {"n": len(pts), "nn_max": math.nan, "nn_mean": math.nan,
                    "nn_min": math.nan}
        gram = np.clip(np.abs(pts @ pts.T), 0.0, 1.0)
        np.fill_diagonal(gram, 0.0)
        nn = np.sqrt(1.0 - gram.max(axis=1) ** 2)
        return {"n": len(pts), "nn_max": float(nn.max()),
                "nn_mean": float(nn.mean()), "nn_min": float(nn.min())}


def limit_samples(rep: Representation, m: int, radius: int,
                  gap_tol: float = 1e-6,
                  dedup_tol: float = DEFAULT_FLAG_DEDUP_TOL,
                  ball=None, check_gaps: bool = True) -> LimitCloud:
    """Flags of the attracting fixed points of all proximal ball elements.

    Elements need eigenvalue-modulus gaps at indices 1 and m (the same
    gaps serve the inverse element at d-1 and d-m).  Samples whose limit
    points agree within ``dedup_tol`` are merged, keeping the shortest
    witness, so ``dedup_tol`` acts as the spatial resolution of the cloud.
    """
    d = rep.dim
    if not 1 <= m <= d - 1:
        raise ValueError(f"flag index m={m} out of range for dimension {d}")
    if ball is None:
        ball = enumerate_ball(rep.generators, radius)
    if check_gaps:
        for k in sorted({1, m}):
            profile = gap_profile(rep, k, radius, ball=ball)
            if not profile.linear:
                warnings.warn(
                    f"gap profile at k={k} is not certified linear "
                    f"({profile.verdict}); limit samples may be unreliable",
                    stacklevel=2)
    samples: list[FlagSample] = []
    kept_points: list[np.ndarray] = []
    cos_thresh = math.sqrt(max(0.0, 1.0 - dedup_tol ** 2))
    for g in ball:
        if not g.length or not is_infinite_order_proxy(g):
            continue
        lam = eigen_moduli(g.matrix)
        if lam[0] / lam[1] <= 1.0 + gap_tol:
            continue
        if lam[m - 1] / lam[m] <= 1.0 + gap_tol:
            continue
        M = g.matrix
        Minv = g.gens.matrix_of_word(inverse_word(g.word))
        try:
            xi1 = top_invariant_subspace(M, 1, gap_tol)
            xim = xi1 if m == 1 else top_invariant_subspace(M, m, gap_tol)
            xi1_m = top_invariant_subspace(Minv, 1, gap_tol)
            xi_dm = top_invariant_subspace(Minv, d - m, gap_tol)
            xi_d1 = top_invariant_subspace(Minv, d - 1, gap_tol)
        except SpectralGapError:
            continue
        v = xi1.vector()
        if kept_points and float(
                np.max(np.abs(np.array(kept_points) @ v))) > cos_thresh:
            continue
        kept_points.append(v)
        samples.append(FlagSample(witness=g, xi1_plus=xi1, xim_plus=xim,
                                  xi_dm_minus=xi_dm, xi_d1_minus=xi_d1,
                                  xi1_minus=xi1_m, spectral=cartan_jordan(g)))
    if not samples:
        raise ValueError("no proximal elements found in the ball")
    return LimitCloud(samples=tuple(samples), m=m, rep_recipe=rep.recipe)


@dataclass(frozen=True)
class TransversalityReport:
    min_margin_m: float
    worst_pair_m: tuple[str, str]
    min_margin_1: float
    worst_pair_1: tuple[str, str]
    n_pairs: int


def transversality_scan(cloud: LimitCloud,
                        sep_tol: float = 1e-3) -> TransversalityReport:
    """Minimum direct-sum margins over ordered pairs of distinct samples:
    xi^(m)(x) against xi^(d-m)(y), and xi^(1)(x) against xi^(d-1)(y).

    The y-flags live at the minus point of y's witness.  Pairs of
    boundary points closer than ``sep_tol`` are skipped: transversality
    is a condition on distinct points, and the margin degenerates
    continuously (quadratically, at a tangency) as they collide."""
    if len(cloud) < 2:
        raise ValueError("need at least 2 samples")
    best_m, best_1 = math.inf, math.inf
    pair_m = pair_1 = ("", "")
    n = 0
    for sx in cloud.samples:
        for sy in cloud.samples:
            if proj_distance(sx.xi1_plus, sy.xi1_minus) < sep_tol:
                continue  # numerically coincident boundary points
            n += 1
            marg_m = direct_sum_margin([sx.xim_plus, sy.xi_dm_minus])
            marg_1 = direct_sum_margin([sx.xi1_plus, sy.xi_d1_minus])
            if marg_m < best_m:
                best_m, pair_m = marg_m, (sx.witness.word, sy.witness.word)
            if marg_1 < best_1:
                best_1, pair_1 = marg_1, (sx.witness.word, sy.witness.word)
    return TransversalityReport(min_margin_m=best_m, worst_pair_m=pair_m,
                                min_margin_1=best_1, worst_pair_1=pair_1,
                                n_pairs=n)


@dataclass(frozen=True)
class HyperconvexityReport:
    min_margin: float
    worst_triple: tuple[str, str, str]
    margins: np.ndarray
    n_evaluated: int


def hyperconvexity_scan(cloud: LimitCloud, m: int | None = None,
                        n_triples: int = 500, seed: int = 0,
                        sep_tol: float = 1e-3) -> HyperconvexityReport:
    """Minimum of direct_sum_margin(xi^(1)(x), xi^(1)(z), xi^(d-m)(y))
    over seeded random triples of pairwise-distinct boundary points.

    x and z are plus points of two samples, y the minus point of a third;
    triples with any pairwise distance below ``sep_tol`` are resampled
    (the margin degenerates continuously as points collide).
    """
    if m is None:
        m = cloud.m
    if m != cloud.m:
        raise ValueError(f"cloud was sampled for m={cloud.m}, not m={m}")
    if m < 2:
        raise ValueError("hyperconvexity scan requires m >= 2")
    if len(cloud) < 3:
        raise ValueError("need at least 3 samples")
    rng = np.random.default_rng(seed)
    n = len(cloud)
    margins = np.empty(n_triples)
    best = math.inf
    worst = ("", "", "")
    count = 0
    tries = 0
    max_tries = 2000 * n_triples
    while count < n_triples:
        tries += 1
        if tries > max_tries:
            raise ValueError(
                f"cannot find {n_triples} separated triples "
                f"(sep_tol={sep_tol}); got {count}")
        i, j, k = rng.integers(0, n, 3)
        if i == j or j == k or i == k:
            continue
        sx, sz, sy = cloud.samples[i], cloud.samples[j], cloud.samples[k]
        x1, z1, y1 = sx.xi1_plus, sz.xi1_plus, sy.xi1_minus
        if (proj_distance(x1, z1) < sep_tol
                or proj_distance(x1, y1) < sep_tol
                or proj_distance(z1, y1) < sep_tol):
            continue
        marg = direct_sum_margin([x1, z1, sy.xi_dm_minus])
        margins[count] = marg
        count += 1
        if marg < best:
            best = marg
            worst = (sx.witness.word, sz.witness.word, sy.witness.word)
    return HyperconvexityReport(min_margin=best, worst_triple=worst,
                                margins=margins, n_evaluated=count)


@dataclass(frozen=True)
class ControlledSetReport:
    min_margin: float
    worst_pair: tuple[str, str]
    violations: tuple[tuple[str, str], ...]
    n_pairs: int


def controlled_set_check(cloud: LimitCloud, sep_tol: float = 1e-3,
                         violation_tol: float = 1e-10) -> ControlledSetReport:
    """Checks that sampled limit points meet each hyperplane flag only at
    its own boundary point: for p != xi^(1)(y) the distance from p to
    xi^(d-1)(y) must be positive.

    Points within ``sep_tol`` of the hyperplane's own boundary point are
    skipped (the distance vanishes quadratically at the tangency)."""
    if len(cloud) < 2:
        raise ValueError("need at least 2 samples")
    best = math.inf
    worst = ("", "")
    violations = []
    n = 0
    for sp in cloud.samples:
        p = sp.xi1_plus
        for sy in cloud.samples:
            if proj_distance(p, sy.xi1_minus) < sep_tol:
                continue  # numerically the hyperplane's own boundary point
            n += 1
            marg = point_subspace_distance(p, sy.xi_d1_minus)
            if marg < best:
                best, worst = marg, (sp.witness.word, sy.witness.word)
            if marg <= violation_tol:
                violations.append((sp.witness.word, sy.witness.word))
    return ControlledSetReport(min_margin=best, worst_pair=worst,
                               violations=tuple(violations), n_pairs=n)


@dataclass(frozen=True)
class IrreducibilityReport:
    irreducible: bool
    xi1_rank: int
    dim: int
    min_invariant_dim: int


def _invariant_closure_dim(seed: np.ndarray, gen_mats: list[np.ndarray],
                           rtol: float = 1e-10) -> int:
    """Dimension of the smallest subspace containing ``seed`` that is
    invariant under all generators (Krylov-style closure)."""
    V = orthonormalize(seed)
    d = V.shape[0]
    while V.shape[1] < d:
        images = [V] + [A @ V for A in gen_mats]
        W = orthonormalize(np.column_stack(images), rtol=rtol)
        if W.shape[1] == V.shape[1]:
            break
        V = W
    return V.shape[1]


def irreducibility_proxy(rep: Representation, radius: int,
                         ball=None, rank_rtol: float = 1e-8) -> IrreducibilityReport:
    """Numerical proxy for irreducibility.

    Positive iff (a) the sampled limit points span R^d and (b) no proper
    invariant subspace is found by closing up eigenvector seeds of the
    generators under the whole generating set.  Any invariant subspace
    must contain an eigenvector (or conjugate eigen-plane) of each
    generator, so a proper closure certifies reducibility; the converse
    direction is heuristic.
    """
    d = rep.dim
    if ball is None:
        ball = enumerate_ball(rep.generators, radius)
    points = []
    for g in ball:
        if not g.length or not is_infinite_order_proxy(g):
            continue
        lam = eigen_moduli(g.matrix)
        if lam[0] / lam[1] <= 1.0 + 1e-6:
            continue
        try:
            points.append(top_invariant_subspace(g.matrix, 1).vector())
        except SpectralGapError:
            continue
    xi1_rank = 0
    if points:
        s = np.linalg.svd(np.array(points).T, compute_uv=False)
        xi1_rank = int((s > rank_rtol * s[0]).sum())

    gen_mats = [rep.generators.matrices[l].mat
                for l in rep.generators.positive_labels]
    min_dim = d
    for A in gen_mats:
        w, vecs = np.linalg.eig(A)
        seen = set()
        for idx in range(d):
            if idx in seen:
                continue
            if abs(w[idx].imag) < 1e-12:
                seed = vecs[:, idx].real.reshape(-1, 1)
            else:
                conj = np.argmin(np.abs(w - w[idx].conjugate()))
                seen.add(int(conj))
                seed = np.column_stack([vecs[:, idx].real, vecs[:, idx].imag])
            min_dim = min(min_dim, _invariant_closure_dim(seed, gen_mats))
            if min_dim < d:
                break
        if min_dim < d:
            break
    return IrreducibilityReport(
        irreducible=(xi1_rank == d and min_dim == d),
        xi1_rank=xi1_rank, dim=d, min_invariant_dim=min_dim)
