"""Representation constructors and induced maps on flags: the standard
irreducible SL2 representations, exterior powers, the symmetric square,
direct sums, a 9-dimensional SU(2,1) example, and the exterior-power flag
maps for Hitchin-type data.

A :class:`Representation` is a symmetric generator set plus a replayable
recipe (base matrices and a functor chain), so configurations can be
serialized and rebuilt bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .groups import GeneratorSet
from .linalg import MatrixD, Subspace, normalize_lift

__all__ = [
    "Representation",
    "tau_d",
    "wedge_power",
    "sym_square",
    "veronese_point",
    "veronese_hyperplane",
    "flag_wedge",
    "direct_sum_rep",
    "build_su21_rep",
    "hitchin_zeta",
    "perturb_rep",
    "tau_representation",
    "wedge_representation",
    "sym_square_representation",
    "su21_representation",
    "representation_from_matrices",
    "build_representation",
    "wedge_indices",
]

SU21_FORM = np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]], dtype=complex)


@dataclass(frozen=True)
class Representation:
    generators: GeneratorSet
    recipe: dict

    @property
    def dim(self) -> int:
        return self.generators.dim


def representation_from_matrices(gens: dict, name: str = "") -> Representation:
    gs = GeneratorSet.from_matrices(gens)
    recipe = {
        "kind": "matrices",
        "dim": gs.dim,
        "generators": {l: gs.matrices[l].mat.tolist() for l in gs.positive_labels},
    }
    if name:
        recipe["name"] = name
    return Representation(generators=gs, recipe=recipe)


# ---------------------------------------------------------------------------
# matrix-level functors


def _as_unit(g) -> MatrixD:
    return g if isinstance(g, MatrixD) else normalize_lift(g)


def tau_d(g, d: int) -> MatrixD:
    """Standard irreducible representation of a 2x2 matrix in dimension d.

    Acts on degree-(d-1) homogeneous polynomials in X, Y by precomposing
    with the inverse, in the monomial basis X^(d-i) Y^(i-1).  The input is
    normalized to unit determinant modulus first; its inverse is then the
    (exact) adjugate up to sign, and the image has unit determinant by
    the determinant character identity, with no output rescaling.
    """
    if d < 2:
        raise ValueError("tau_d requires d >= 2")
    M = _as_unit(g)
    if M.dim != 2:
        raise ValueError("tau_d expects a 2x2 matrix")
    A = M.mat
    h = np.array([[A[1, 1], -A[0, 1]], [-A[1, 0], A[0, 0]]]) * M.det_sign
    n = d - 1
    cols = []
    for j in range(d):
        # (h00 X + h01 Y)^(n-j) * (h10 X + h11 Y)^j, coefficients by Y-degree
        p1 = np.array([math.comb(n - j, t) * h[0, 0] ** (n - j - t) * h[0, 1] ** t
                       for t in range(n - j + 1)])
        p2 = np.array([math.comb(j, t) * h[1, 0] ** (j - t) * h[1, 1] ** t
                       for t in range(j + 1)])
        cols.append(np.convolve(p1, p2))
    sign = M.det_sign if (d * (d - 1) // 2) % 2 else 1
    return MatrixD(np.ascontiguousarray(np.array(cols).T), sign)


def wedge_indices(d: int, k: int) -> list[tuple[int, ...]]:
    """Lexicographically ordered k-element index tuples for the wedge basis."""
    return list(combinations(range(d), k))


def _wedge_coordinates(frame: np.ndarray, idx: list[tuple[int, ...]]) -> np.ndarray:
    """Pluecker coordinates of a d x k frame: k x k minors in basis order."""
    return np.array([np.linalg.det(frame[list(rows), :]) for rows in idx])


def wedge_power(M, k: int) -> MatrixD:
    """k-th exterior power in the lexicographic wedge basis.

    Columns are the wedge coordinates of the images of the basis wedges;
    eigenvalue and singular-value moduli of the result are the k-fold
    products of those of M.  The input is normalized first; the image of
    a unit-determinant matrix has unit determinant exactly.
    """
    Mu = _as_unit(M)
    A, d = Mu.mat, Mu.dim
    if not 1 <= k <= d - 1:
        raise ValueError(f"wedge index k={k} out of range for dimension {d}")
    idx = wedge_indices(d, k)
    W = np.empty((len(idx), len(idx)))
    for col, cols_idx in enumerate(idx):
        W[:, col] = _wedge_coordinates(A[:, list(cols_idx)], idx)
    sign = Mu.det_sign if math.comb(d - 1, k - 1) % 2 else 1
    return MatrixD(np.ascontiguousarray(W), sign)


def _sym_pairs(d: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(d) for j in range(i, d)]


def sym_square(M) -> MatrixD:
    """Symmetric square acting on Sym2(R^d), dimension D = d(d+1)/2.

    Basis {e_i . e_j : i <= j} with off-diagonal elements scaled by
    sqrt(2), so the standard inner product pulls back correctly and the
    singular-value identities hold exactly (S of an orthogonal matrix is
    orthogonal).
    """
    Mu = _as_unit(M)
    A, d = Mu.mat, Mu.dim
    pairs = _sym_pairs(d)
    rt2 = np.sqrt(2.0)
    S = np.empty((len(pairs), len(pairs)))
    for col, (i, j) in enumerate(pairs):
        B = np.outer(A[:, i], A[:, j])
        X = B + B.T if i != j else 2.0 * B
        X *= 0.5 * rt2 if i != j else 0.5
        # X = M B_ij M^T; read off its coordinates in the weighted basis
        for row, (kk, ll) in enumerate(pairs):
            S[row, col] = X[kk, ll] if kk == ll else rt2 * X[kk, ll]
    sign = Mu.det_sign if (d + 1) % 2 else 1
    return MatrixD(np.ascontiguousarray(S), sign)


def veronese_point(v) -> Subspace:
    """The point [v (x) v] in P(Sym2(R^d)), in the same weighted basis
    as :func:`sym_square`; lands in the closure of the positive cone."""
    u = v.vector() if isinstance(v, Subspace) else np.asarray(v, dtype=float)
    u = u / np.linalg.norm(u)
    d = u.size
    rt2 = np.sqrt(2.0)
    coords = np.array([u[i] * u[j] * (1.0 if i == j else rt2)
                       for (i, j) in _sym_pairs(d)])
    return Subspace.line(coords)


def veronese_hyperplane(W) -> Subspace:
    """Image of a hyperplane under the dual symmetric-square embedding:
    span{v (x) w + w (x) v : w in W, v in R^d}, a hyperplane in
    Sym2(R^d).  Signs are quotiented projectively, so any frame of W
    gives the same subspace."""
    F = W.frame if isinstance(W, Subspace) else np.asarray(W, dtype=float)
    d = F.shape[0]
    pairs = _sym_pairs(d)
    rt2 = np.sqrt(2.0)
    span = []
    for w in F.T:
        for v in np.eye(d):
            X = np.outer(v, w) + np.outer(w, v)
            span.append([X[i, j] * (1.0 if i == j else rt2)
                         for (i, j) in pairs])
    return Subspace.from_spanning(np.array(span).T)


def flag_wedge(V: Subspace) -> Subspace:
    """The line [v_1 ^ ... ^ v_m] in the wedge space, for any frame of V;
    independent of the frame choice up to sign."""
    frame = V.frame if isinstance(V, Subspace) else np.asarray(V, dtype=float)
    d, m = frame.shape
    coords = _wedge_coordinates(frame, wedge_indices(d, m))
    return Subspace.line(coords)


def direct_sum_rep(r1: Representation, r2: Representation) -> Representation:
    """Block-diagonal sum of two representations over the same labels."""
    l1, l2 = r1.generators.positive_labels, r2.generators.positive_labels
    if l1 != l2:
        raise ValueError(f"generator label mismatch: {l1} vs {l2}")
    d1, d2 = r1.dim, r2.dim

    def block(label):
        blk = np.zeros((d1 + d2, d1 + d2))
        blk[:d1, :d1] = r1.generators.matrices[label].mat
        blk[d1:, d1:] = r2.generators.matrices[label].mat
        return blk

    gens = {label: block(label) for label in l1}
    invs = {label: block(label.upper()) for label in l1}
    return Representation(
        generators=GeneratorSet.from_matrices(gens, inverses=invs),
        recipe={"kind": "direct_sum", "left": r1.recipe, "right": r2.recipe},
    )


# ---------------------------------------------------------------------------
# the 9-dimensional SU(2,1) example

def _complex_to_real6(g: np.ndarray) -> np.ndarray:
    """R-linear action of a complex 3x3 matrix on R^6 with coordinates
    (Re z1, Im z1, Re z2, Im z2, Re z3, Im z3)."""
    out = np.zeros((6, 6))
    for i in range(3):
        for j in range(3):
            x, y = g[i, j].real, g[i, j].imag
            out[2 * i:2 * i + 2, 2 * j:2 * j + 2] = [[x, -y], [y, x]]
    return out


def _su21_fixed_basis() -> np.ndarray:
    """The 15 x 9 matrix of the fixed space of wedge^2 of multiplication
    by i, in the lexicographic wedge basis of wedge^2 R^6."""
    idx = wedge_indices(6, 2)
    e = np.eye(6)

    def wv(u, v):
        frame = np.column_stack([u, v])
        return _wedge_coordinates(frame, idx)

    cols = [
        wv(e[0], e[1]),
        wv(e[1], e[2]) - wv(e[0], e[3]),
        wv(e[0], e[2]) + wv(e[1], e[3]),
        wv(e[2], e[3]),
        wv(e[1], e[4]) - wv(e[0], e[5]),
        wv(e[0], e[4]) + wv(e[1], e[5]),
        wv(e[2], e[4]) + wv(e[3], e[5]),
        wv(e[3], e[4]) - wv(e[2], e[5]),
        wv(e[4], e[5]),
    ]
    return np.column_stack(cols)


_SU21_BASIS = _su21_fixed_basis()


def build_su21_rep(g, form_tol: float = 1e-8) -> MatrixD:
    """9x9 real matrix of an SU(2,1) element acting on the invariant
    9-dimensional subspace of wedge^2 R^6.

    The input must preserve the antidiagonal Hermitian form; for an
    element with eigenvalue moduli (w, 1, 1/w) the output moduli are
    (w^2, w, w, 1, 1, 1, 1/w, 1/w, 1/w^2).
    """
    g = np.asarray(g, dtype=complex)
    if g.shape != (3, 3):
        raise ValueError("expected a 3x3 complex matrix")
    if np.abs(g.conj().T @ SU21_FORM @ g - SU21_FORM).max() > form_tol:
        raise ValueError("not in SU(2,1): Hermitian form not preserved")
    A6 = _complex_to_real6(g)
    idx = wedge_indices(6, 2)
    W = np.empty((15, 15))
    for col, cols_idx in enumerate(idx):
        W[:, col] = _wedge_coordinates(A6[:, list(cols_idx)], idx)
    image = W @ _SU21_BASIS
    coef, *_ = np.linalg.lstsq(_SU21_BASIS, image, rcond=None)
    resid = np.abs(_SU21_BASIS @ coef - image).max()
    if resid > 1e-8:
        raise ValueError(f"fixed space not preserved (residual {resid:.2e})")
    return normalize_lift(coef)


# ---------------------------------------------------------------------------
# exterior-power flag maps

def hitchin_zeta(flag_km1, flag_k, flag_kp1, flag_dkm1, flag_dk, flag_dkp1,
                 level, nesting_tol: float = 1e-8) -> Subspace:
    """Flag maps of the k-th exterior power from nested flags at a point.

    Levels (D = C(d, k)):
      ``1``    -> wedge^k of the k-flag, a line,
      ``2``    -> (wedge^(k-1) of the (k-1)-flag) ^ (k+1)-flag, rank 2,
      ``"D-2"``-> (d-k-1)-flag ^ wedge^(k-1) R^d
                  + (d-k)-flag ^ (d-k+1)-flag ^ wedge^(k-2) R^d,
      ``"D-1"``-> (d-k)-flag ^ wedge^(k-1) R^d.
    """
    k = flag_k.rank
    d = flag_k.ambient_dim
    if flag_km1 is None:
        flag_km1 = Subspace(np.zeros((d, 0)))
    if flag_dkp1 is None:
        flag_dkp1 = Subspace(np.eye(d))
    for lo, hi, name in [(flag_km1, flag_k, "k-1 in k"),
                         (flag_k, flag_kp1, "k in k+1"),
                         (flag_dkm1, flag_dk, "d-k-1 in d-k"),
                         (flag_dk, flag_dkp1, "d-k in d-k+1")]:
        if not hi.contains(lo, nesting_tol):
            raise ValueError(f"flags not nested: {name}")

    idx = wedge_indices(d, k)
    lvl = str(level)
    if lvl == "1":
        return flag_wedge(flag_k)
    if lvl == "2":
        span = []
        for u in flag_kp1.frame.T:
            full = np.column_stack([flag_km1.frame, u])
            span.append(_wedge_coordinates(full, idx))
        return Subspace.from_spanning(np.column_stack(span))
    if lvl in ("D-1", "d-1"):
        span = []
        for u in flag_dk.frame.T:
            for J in combinations(range(d), k - 1):
                full = np.column_stack([u.reshape(-1, 1), np.eye(d)[:, list(J)]])
                span.append(_wedge_coordinates(full, idx))
        return Subspace.from_spanning(np.column_stack(span))
    if lvl in ("D-2", "d-2"):
        span = []
        for u in flag_dkm1.frame.T:
            for J in combinations(range(d), k - 1):
                full = np.column_stack([u.reshape(-1, 1), np.eye(d)[:, list(J)]])
                span.append(_wedge_coordinates(full, idx))
        if k >= 2:
            for u in flag_dk.frame.T:
                for w in flag_dkp1.frame.T:
                    for J in combinations(range(d), k - 2):
                        full = np.column_stack(
                            [u.reshape(-1, 1), w.reshape(-1, 1),
                             np.eye(d)[:, list(J)]])
                        span.append(_wedge_coordinates(full, idx))
        return Subspace.from_spanning(np.column_stack(span))
    raise ValueError(f"unknown zeta level {level!r}")


# ---------------------------------------------------------------------------
# representation-level constructors

def _map_generators(rep: Representation, fn, recipe: dict) -> Representation:
    # map the stored inverses through the functor too: inverting the
    # image numerically would lose the small spectrum for stiff inputs
    gens, invs = {}, {}
    for label in rep.generators.positive_labels:
        gens[label] = fn(rep.generators.matrices[label]).mat
        invs[label] = fn(rep.generators.matrices[label.upper()]).mat
    return Representation(
        generators=GeneratorSet.from_matrices(gens, inverses=invs),
        recipe=recipe)


def tau_representation(rep: Representation, d: int) -> Representation:
    if rep.dim != 2:
        raise ValueError("tau requires a 2-dimensional base representation")
    return _map_generators(rep, lambda M: tau_d(M, d),
                           {"kind": "tau", "d": d, "base": rep.recipe})


def wedge_representation(rep: Representation, k: int) -> Representation:
    return _map_generators(rep, lambda M: wedge_power(M, k),
                           {"kind": "wedge", "k": k, "base": rep.recipe})


def sym_square_representation(rep: Representation) -> Representation:
    return _map_generators(rep, sym_square,
                           {"kind": "sym2", "base": rep.recipe})


def su21_representation(gens: dict) -> Representation:
    """Representation from complex 3x3 SU(2,1) generators (label -> matrix)."""
    real_gens = {}
    real_invs = {}
    recipe_gens = {}
    for label in sorted(gens):
        g = np.asarray(gens[label], dtype=complex)
        real_gens[label] = build_su21_rep(g).mat
        # form-preserving inverse in closed form: g^-1 = J g* J
        ginv = SU21_FORM @ g.conj().T @ SU21_FORM
        real_invs[label] = build_su21_rep(ginv).mat
        recipe_gens[label] = [[[z.real, z.imag] for z in row] for row in g]
    return Representation(
        generators=GeneratorSet.from_matrices(real_gens, inverses=real_invs),
        recipe={"kind": "su21", "generators": recipe_gens},
    )


def perturb_rep(rep: Representation, eps: float, seed: int) -> Representation:
    """Add i.i.d. uniform [-eps, eps] noise to each positive generator,
    renormalize, and rebuild inverses exactly.  Deterministic given seed."""
    if eps < 0:
        raise ValueError("eps must be non-negative")
    rng = np.random.default_rng(seed)
    gens = {}
    for label in rep.generators.positive_labels:
        M = rep.generators.matrices[label].mat
        noise = rng.uniform(-eps, eps, size=M.shape) if eps > 0 else 0.0
        P = M + noise
        if abs(np.linalg.det(P)) < 1e-12:
            raise ValueError(f"perturbed generator {label!r} is singular")
        gens[label] = P
    return Representation(
        generators=GeneratorSet.from_matrices(gens),
        recipe={"kind": "perturb", "eps": eps, "seed": seed, "base": rep.recipe},
    )


def build_representation(recipe: dict) -> Representation:
    """Replay a recipe; rebuilding reproduces generator matrices."""
    kind = recipe.get("kind")
    if kind == "matrices":
        gens = {l: np.array(m, dtype=float)
                for l, m in recipe["generators"].items()}
        rep = representation_from_matrices(gens, name=recipe.get("name", ""))
        return rep
    if kind == "su21":
        gens = {}
        for label, rows in recipe["generators"].items():
            gens[label] = np.array(
                [[complex(re, im) for re, im in row] for row in rows])
        return su21_representation(gens)
    if kind == "tau":
        return tau_representation(build_representation(recipe["base"]),
                                  recipe["d"])
    if kind == "wedge":
        return wedge_representation(build_representation(recipe["base"]),
                                    recipe["k"])
    if kind == "sym2":
        return sym_square_representation(build_representation(recipe["base"]))
    if kind == "direct_sum":
        return direct_sum_rep(build_representation(recipe["left"]),
                              build_representation(recipe["right"]))
    if kind == "perturb":
        return perturb_rep(build_representation(recipe["base"]),
                           recipe["eps"], recipe["seed"])
    raise ValueError(f"unknown recipe kind {kind!r}")
