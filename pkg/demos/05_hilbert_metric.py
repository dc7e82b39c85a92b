"""The Hilbert metric on the projectivized positive-definite cone.

The cone of positive-definite symmetric matrices is a properly convex
domain in the projectivization of the symmetric square, and the
symmetric-square image of any invertible map acts on it by isometries.
The Hilbert distance between two interior points equals the log-ratio of
the extreme generalized eigenvalues; the script verifies this against
the defining cross-ratio along the projective line through the points,
and demonstrates the isometry property and the Veronese boundary map.
"""

import numpy as np

from anosovlab import hilbert_distance_psd, sym_square, veronese_point
from anosovlab.linalg import proj_distance, Subspace


def cross_ratio_distance(X, Y):
    d = X.shape[0]
    scale = np.trace(X) / np.trace(Y)
    ts = -np.linspace(0.05, 2.5, d + 1) * scale
    vals = [np.linalg.det(X + t * Y) for t in ts]
    coeffs = np.polynomial.polynomial.polyfit(ts, vals, d)
    roots = np.polynomial.polynomial.polyroots(coeffs)
    roots = np.real(roots[np.abs(roots.imag) < 1e-8 * scale])
    t_near = roots[np.argmin(np.abs(roots))]
    t_far = roots[np.argmax(np.abs(roots))]

    def chart(M):
        return (M / np.trace(M)).ravel()

    a, b, x, y = (chart(X + t_near * Y), chart(X + t_far * Y),
                  chart(X), chart(Y))
    return np.log(np.linalg.norm(a - y) * np.linalg.norm(b - x)
                  / (np.linalg.norm(a - x) * np.linalg.norm(b - y)))


def main():
    print("closed case: d(I, diag(2,1)) =",
          hilbert_distance_psd(np.eye(2), np.diag([2.0, 1.0])),
          "= log 2 =", np.log(2.0))

    rng = np.random.default_rng(7)
    print("\neigenvalue route vs cross-ratio route on random PD pairs:")
    for dim in (2, 3, 4, 5):
        A = rng.normal(size=(dim, dim))
        X = A @ A.T + 0.3 * np.eye(dim)
        B = rng.normal(size=(dim, dim))
        Y = B @ B.T + 0.3 * np.eye(dim)
        d1 = hilbert_distance_psd(X, Y)
        d2 = cross_ratio_distance(X, Y)
        print(f"  dim {dim}: {d1:.12f}  vs  {d2:.12f}"
              f"   (diff {abs(d1 - d2):.2e})")

    print("\nsymmetric-square images act by isometries:")
    g = rng.normal(size=(3, 3))
    A = rng.normal(size=(3, 3))
    X = A @ A.T + 0.3 * np.eye(3)
    B = rng.normal(size=(3, 3))
    Y = B @ B.T + 0.3 * np.eye(3)
    before = hilbert_distance_psd(X, Y)
    after = hilbert_distance_psd(g.T @ X @ g, g.T @ Y @ g)
    print(f"  d(X, Y) = {before:.12f},  after congruence {after:.12f}")

    print("\nthe squared-vector boundary map is equivariant:")
    v = rng.normal(size=3)
    lhs = Subspace.line(sym_square(g).mat @ veronese_point(v).vector())
    rhs = veronese_point(np.asarray(g) @ v / np.linalg.norm(g @ v))
    print(f"  distance between S(g).[v (x) v] and [(gv) (x) (gv)]:"
          f" {proj_distance(lhs, rhs):.2e}")


if __name__ == "__main__":
    main()
