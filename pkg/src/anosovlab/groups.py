"""Word-hyperbolic group inputs: symmetric generator sets with matrix
values, reduced-word enumeration of word-metric balls, and matrix-value
deduplication.

Generators are labelled by lowercase letters; the formal inverse of a
label is its uppercase counterpart (``a`` <-> ``A``), so a word is just a
string like ``"abAB"``.  Relations are never handled symbolically: words
whose matrices agree (as elements of PGL, i.e. up to sign) are merged.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .linalg import MatrixD, eigen_moduli, normalize_lift

__all__ = [
    "GeneratorSet",
    "GroupElement",
    "BallTooLargeError",
    "enumerate_ball",
    "is_infinite_order_proxy",
    "inverse_word",
    "free_reduce",
    "cyclic_reduce",
]

DEFAULT_DEDUP_TOL = 1e-8
DEFAULT_BALL_CAP = 5_000_000


class BallTooLargeError(RuntimeError):
    pass


def inverse_label(label: str) -> str:
    return label.swapcase()


def inverse_word(word: str) -> str:
    return "".join(inverse_label(ch) for ch in reversed(word))


def free_reduce(word: str) -> str:
    out: list[str] = []
    for ch in word:
        if out and out[-1] == inverse_label(ch):
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def cyclic_reduce(word: str) -> str:
    """Cyclically reduced core of a freely reduced word."""
    w = free_reduce(word)
    while len(w) >= 2 and w[0] == inverse_label(w[-1]):
        w = w[1:-1]
    return w


def canonical_cyclic(word: str) -> str:
    """Lexicographically smallest rotation of the cyclically reduced core.

    Conjugate elements share this key, so conjugation-invariant data
    (eigenvalue moduli) can be cached under it.
    """
    w = cyclic_reduce(word)
    if not w:
        return w
    return min(w[i:] + w[:i] for i in range(len(w)))


@dataclass(frozen=True)
class GeneratorSet:
    """Symmetric generating set: for each label the inverse label is
    present and the matrices are mutual inverses."""

    labels: tuple[str, ...]
    matrices: dict[str, MatrixD] = field(compare=False)
    dim: int
    # conjugation-invariant spectral data cached by conjugacy class
    jordan_cache: dict = field(default_factory=dict, repr=False,
                               compare=False)

    @classmethod
    def from_matrices(cls, gens: dict,
                      inverses: dict | None = None) -> "GeneratorSet":
        """Build the symmetric set from {label: matrix} over the positive
        (lowercase) generators.

        Inverses are inverted numerically unless passed explicitly;
        callers that know the inverse in closed form (functor images of a
        base inverse) should pass it, since numerical inversion loses the
        small spectrum of badly conditioned generators.
        """
        if not gens:
            raise ValueError("at least one generator required")
        mats: dict[str, MatrixD] = {}
        labels: list[str] = []
        dim = None
        for label in sorted(gens):
            if not (len(label) == 1 and label.isalpha() and label.islower()):
                raise ValueError(
                    f"generator label {label!r} must be a single lowercase letter")
            M = normalize_lift(gens[label])
            if dim is None:
                dim = M.dim
            elif M.dim != dim:
                raise ValueError("generators have mismatched dimensions")
            if inverses is not None and label in inverses:
                Minv = normalize_lift(inverses[label])
                resid = np.abs(M.mat @ Minv.mat - np.eye(dim)).max()
                if resid > 1e-8 * max(1.0, np.abs(M.mat).max()):
                    raise ValueError(
                        f"matrix for {label!r} and its inverse are not "
                        f"mutual inverses (residual {resid:.2e})")
            else:
                Minv = M.inv()
            mats[label] = M
            mats[inverse_label(label)] = Minv
            labels += [label, inverse_label(label)]
        return cls(labels=tuple(labels), matrices=mats, dim=dim)

    @property
    def positive_labels(self) -> tuple[str, ...]:
        return tuple(l for l in self.labels if l.islower())

    def matrix_of_word(self, word: str) -> MatrixD:
        M = MatrixD(np.eye(self.dim), 1)
        for ch in word:
            M = M @ self.matrices[ch]
        return M

    def element(self, word: str) -> "GroupElement":
        word = free_reduce(word)
        return GroupElement(word=word, matrix=self.matrix_of_word(word),
                            gens=self)


@dataclass(frozen=True)
class GroupElement:
    """A freely reduced word together with its matrix value."""

    word: str
    matrix: MatrixD
    gens: GeneratorSet = field(repr=False, compare=False)

    @property
    def length(self) -> int:
        return len(self.word)

    def inverse(self) -> "GroupElement":
        return self.gens.element(inverse_word(self.word))


def _predicted_ball_size(n_letters: int, radius: int) -> int:
    # free-group count: 1 + sum_{n=1..R} 2k (2k-1)^(n-1)
    if n_letters == 0:
        return 1
    total = 1
    layer = n_letters
    for _ in range(radius):
        total += layer
        layer *= n_letters - 1
    return total


def enumerate_ball(gens: GeneratorSet, radius: int,
                   dedup_tol: float = DEFAULT_DEDUP_TOL,
                   max_elements: int = DEFAULT_BALL_CAP) -> list[GroupElement]:
    """All freely reduced words of length <= radius with their matrices.

    Elements whose matrices agree within ``dedup_tol`` (max-entry
    difference, up to the PGL sign) are merged, keeping the shortest word
    (ties: lexicographic).  The result is sorted by (length, word) and is
    independent of enumeration order.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    n_letters = len(gens.labels)
    predicted = _predicted_ball_size(n_letters, radius)
    if predicted > max_elements:
        raise BallTooLargeError(
            f"ball too large: {predicted} words exceed cap {max_elements}")

    words: list[str] = [""]
    mats: list[np.ndarray] = [np.eye(gens.dim)]
    frontier = [("", mats[0])]
    order = sorted(gens.labels)
    for _ in range(radius):
        nxt = []
        for w, M in frontier:
            for label in order:
                if w and w[-1] == inverse_label(label):
                    continue
                prod = M @ gens.matrices[label].mat
                nxt.append((w + label, prod))
        frontier = nxt
        for w, M in nxt:
            words.append(w)
            mats.append(M)

    keep = _dedup_indices(words, mats, dedup_tol)
    det_signs = {label: gens.matrices[label].det_sign for label in gens.labels}
    out = []
    for i in keep:
        sign = 1
        for ch in words[i]:
            sign *= det_signs[ch]
        out.append(GroupElement(word=words[i],
                                matrix=MatrixD(mats[i].copy(), sign),
                                gens=gens))
    out.sort(key=lambda g: (g.length, g.word))
    return out


def _dedup_indices(words, mats, tol) -> list[int]:
    """Merge indices whose matrices agree up to sign within ``tol``
    (Chebyshev metric on entries), keeping the (length, word)-smallest."""
    n = len(words)
    flat = np.array([M.ravel() for M in mats])
    # both lifts of each PGL element, so sign never needs normalizing
    tree = cKDTree(np.vstack([flat, -flat]))
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in tree.query_pairs(tol, p=np.inf):
        i %= n
        j %= n
        if i == j:
            continue
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    best: dict[int, int] = {}
    for i in range(n):
        r = find(i)
        cur = best.get(r)
        if cur is None or (len(words[i]), words[i]) < (len(words[cur]), words[cur]):
            best[r] = i
    return sorted(best.values(), key=lambda i: (len(words[i]), words[i]))


def is_infinite_order_proxy(g: GroupElement, tol: float = 1e-9) -> bool:
    """True iff the top-to-bottom eigenvalue modulus ratio exceeds 1 + tol.

    Elliptic and finite-order elements (all moduli 1) return False; this
    is a numerical proxy, not an order computation.
    """
    lam = eigen_moduli(g.matrix)
    return bool(lam[0] / lam[-1] > 1.0 + tol)
