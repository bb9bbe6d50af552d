"""Finite-dimensional local representations built from triangle blocks.

A triangle representation in standard form sends the three generators to
``y_s B_s`` where the ``B_s`` are the fixed q-commuting N x N matrices below.
A local representation of a triangulated surface is a tuple of triangle
blocks, one per face; its generator images come from the splitting embedding
(tensor over the faces, with the extra q^-1 on self-folded edges handled by
the Weyl ordering).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Context, NCPolynomial, q_root
from .errors import NotLocallyEquivalent, NotScalar
from .surfaces import BOUNDARY, SELF_FOLDED, DualGraph, IdealTriangulation

SCALAR_TOL = 1e-8


def standard_matrices(N: int):
    """The triple (B1, B2, B3): diagonal q-powers, the cyclic ladder, and the
    q-weighted ladder with q^-1 B1 B2 B3 = 1."""
    q = q_root(N)
    B1 = np.diag([q ** (2 * k) for k in range(N)]).astype(complex)
    B2 = np.zeros((N, N), dtype=complex)
    for k in range(N):
        B2[(k + 1) % N, k] = 1.0
    B3 = np.zeros((N, N), dtype=complex)
    for k in range(1, N):
        B3[k - 1, k] = q ** (1 - 2 * k)
    B3[N - 1, 0] = q
    return B1, B2, B3


@dataclass(frozen=True)
class TriangleRep:
    """Irreducible triangle block in standard form: generator s maps to
    y[s] * B_{s+1}."""

    N: int
    y: tuple

    def __post_init__(self):
        if len(self.y) != 3 or any(v == 0 for v in self.y):
            raise ValueError("need three nonzero roots")
        object.__setattr__(self, "y", tuple(complex(v) for v in self.y))

    @property
    def h(self) -> complex:
        return self.y[0] * self.y[1] * self.y[2]

    @property
    def x(self) -> tuple:
        return tuple(v**self.N for v in self.y)

    def matrices(self):
        B = standard_matrices(self.N)
        return tuple(self.y[s] * B[s] for s in range(3))

    def scaled(self, factors) -> "TriangleRep":
        return TriangleRep(self.N, tuple(v * f for v, f in zip(self.y, factors)))

    @classmethod
    def random(cls, N: int, rng) -> "TriangleRep":
        mod = np.exp(rng.uniform(-0.4, 0.4, size=3))
        arg = rng.uniform(0, 2 * np.pi, size=3)
        return cls(N, tuple(mod * np.exp(1j * arg)))


def triangle_rep_random(N, rng):
    return TriangleRep.random(N, rng)


class MatrixRep:
    """Generator images of a representation over a fixed context."""

    def __init__(self, context: Context, images):
        self.context = context
        self.images = [np.asarray(M, dtype=complex) for M in images]
        if len(self.images) != context.n:
            raise ValueError("one image per generator required")
        self.dim = self.images[0].shape[0]

    def image(self, i):
        return self.images[i]

    def evaluate(self, expr):
        return expr.evaluate(self.images)

    def relation_error(self) -> float:
        """Largest relative Frobenius defect of X_i X_j = q^(2 sigma_ij) X_j X_i."""
        q = self.context.q
        worst = 0.0
        for i in range(self.context.n):
            for j in range(self.context.n):
                lhs = self.images[i] @ self.images[j]
                rhs = q ** (2 * int(self.context.sigma[i, j])) * (
                    self.images[j] @ self.images[i]
                )
                err = np.linalg.norm(lhs - rhs) / max(np.linalg.norm(lhs), 1e-300)
                worst = max(worst, err)
        return worst


def scalar_part(M, tol=SCALAR_TOL) -> complex:
    """The scalar lambda with M = lambda * I, or NotScalar."""
    lam = np.trace(M) / M.shape[0]
    defect = np.linalg.norm(M - lam * np.eye(M.shape[0]))
    if defect > tol * max(np.linalg.norm(M), 1e-300):
        raise NotScalar(f"matrix deviates from scalar by {defect:.3g}")
    return complex(lam)


class LocalRep:
    """A representative of a local representation: one standard-form triangle
    block per face of the triangulation."""

    def __init__(self, tri: IdealTriangulation, parts):
        parts = list(parts)
        if len(parts) != tri.m:
            raise ValueError("one triangle block per face required")
        if len({p.N for p in parts}) > 1:
            raise ValueError("mixed dimensions")
        self.tri = tri
        self.parts = parts
        self.N = parts[0].N

    @classmethod
    def random(cls, tri, N, rng):
        return cls(tri, [TriangleRep.random(N, rng) for _ in range(tri.m)])

    @property
    def dim(self):
        return self.N**self.tri.m

    def side_value(self, t, s) -> complex:
        return self.parts[t].y[s]

    def central_load(self) -> complex:
        out = 1.0 + 0j
        for p in self.parts:
            out *= p.h
        return complex(out)

    def edge_invariant(self, e) -> complex:
        out = 1.0 + 0j
        for t, s, _ in self.tri.occurrences[e]:
            out *= self.side_value(t, s) ** self.N
        return complex(out)

    def invariant_vector(self) -> np.ndarray:
        return np.array([self.edge_invariant(e) for e in range(self.tri.n)])

    def slot_matrix(self, t, M) -> np.ndarray:
        """Embed a per-triangle matrix (or a matrix on a set of slots) into
        the full tensor product."""
        out = np.eye(1, dtype=complex)
        for u in range(self.tri.m):
            out = np.kron(out, M if u == t else np.eye(self.N, dtype=complex))
        return out

    def generator_image(self, e) -> np.ndarray:
        """Image of the generator of edge ``e`` under the fused representation."""
        occ = self.tri.occurrences[e]
        q = q_root(self.N)
        B = standard_matrices(self.N)
        if len(occ) == 1:
            t, s, _ = occ[0]
            return self.slot_matrix(t, self.side_value(t, s) * B[s])
        (t1, s1, _), (t2, s2, _) = occ
        if self.tri.edge_kind[e] == SELF_FOLDED:
            # both sides in triangle t1; left of the common corner comes first
            left, right = (s1, s2) if (s1 + 1) % 3 == s2 else (s2, s1)
            M = (
                q**-1
                * (self.side_value(t1, left) * B[left])
                @ (self.side_value(t1, right) * B[right])
            )
            return self.slot_matrix(t1, M)
        M1 = self.slot_matrix(t1, self.side_value(t1, s1) * B[s1])
        M2 = self.slot_matrix(t2, self.side_value(t2, s2) * B[s2])
        return M1 @ M2

    def matrix_rep(self, context: Context | None = None) -> MatrixRep:
        ctx = context if context is not None else Context.from_triangulation(self.tri, self.N)
        return MatrixRep(ctx, [self.generator_image(e) for e in range(self.tri.n)])

    def __eq__(self, other):
        return (
            isinstance(other, LocalRep)
            and self.tri.triangles == other.tri.triangles
            and self.N == other.N
            and all(
                np.allclose(p.y, r.y, rtol=1e-12, atol=0)
                for p, r in zip(self.parts, other.parts)
            )
        )

    def __repr__(self):
        return f"LocalRep(N={self.N}, m={self.tri.m})"


@dataclass
class RepInvariants:
    x: np.ndarray
    h: complex

    def load_defect(self, N) -> float:
        prod = np.prod(self.x)
        return abs(self.h**N - prod) / max(abs(prod), 1e-300)


def invariants(rep: MatrixRep, tol=SCALAR_TOL) -> RepInvariants:
    """Edge invariants and central load read off a matrix representation.

    The image of each X_i^N and of the central monomial must be scalar; a
    deviation beyond ``tol`` raises NotScalar.
    """
    ctx = rep.context
    N = ctx.N
    xs = []
    for i in range(ctx.n):
        xs.append(scalar_part(np.linalg.matrix_power(rep.image(i), N), tol))
    h_poly = NCPolynomial.weyl(ctx, (1,) * ctx.n)
    h = scalar_part(rep.evaluate(h_poly), tol)
    return RepInvariants(np.array(xs), h)


# -- transition constants and the cycle action -----------------------------------


def transition_constants(a: LocalRep, b: LocalRep, tol=1e-9):
    """Per-edge constants carrying representative ``a`` to representative ``b``.

    Boundary edges must match exactly; each internal edge contributes one
    constant, read off the side the edge direction agrees with and checked on
    the other side.
    """
    if a.tri.triangles != b.tri.triangles or a.N != b.N:
        raise NotLocallyEquivalent("different triangulations or dimensions")
    tri = a.tri
    alphas = {}
    for e in range(tri.n):
        occ = tri.occurrences[e]
        if tri.edge_kind[e] == BOUNDARY:
            t, s, _ = occ[0]
            if abs(b.side_value(t, s) - a.side_value(t, s)) > tol * abs(a.side_value(t, s)):
                raise NotLocallyEquivalent(f"boundary edge {e} differs")
            continue
        (t1, s1, f1), (t2, s2, f2) = occ
        plus_side = (t1, s1) if f1 == 1 else (t2, s2)
        minus_side = (t2, s2) if f1 == 1 else (t1, s1)
        alpha = b.side_value(*plus_side) / a.side_value(*plus_side)
        other = b.side_value(*minus_side) / a.side_value(*minus_side)
        if abs(other - 1 / alpha) > tol * abs(1 / alpha):
            raise NotLocallyEquivalent(f"edge {e}: sides scale inconsistently")
        alphas[e] = alpha
    return alphas


def homology_act(coeffs, rep: LocalRep, N: int | None = None) -> LocalRep:
    """Act by a cycle: every side occurrence of edge ``e`` is scaled by
    q^(2 c_e flag)."""
    N = rep.N if N is None else N
    q = q_root(N)
    graph = DualGraph(rep.tri)
    if not graph.is_cycle(coeffs, N):
        raise ValueError("coefficients do not satisfy the cycle condition")
    factors = [[1.0 + 0j] * 3 for _ in range(rep.tri.m)]
    for e in range(rep.tri.n):
        c = int(coeffs[e]) % N
        if c == 0:
            continue
        for t, s, f in rep.tri.occurrences[e]:
            factors[t][s] *= q ** (2 * c * f)
    return LocalRep(rep.tri, [p.scaled(fs) for p, fs in zip(rep.parts, factors)])


# -- elementary automorphisms and tensor-split witnesses --------------------------


def elementary_automorphisms(N: int):
    """The three standard-block automorphisms; conjugating by the s-th one
    fixes generator s and scales its neighbours by q^{+-2}."""
    return standard_matrices(N)


def b_power_word(N: int, k1: int, k2: int, k3: int) -> np.ndarray:
    """A product of standard blocks whose conjugation scales the triangle
    roots by (q^2k1, q^2k2, q^2k3); requires k1 + k2 + k3 = 0 mod N."""
    if (k1 + k2 + k3) % N != 0:
        raise ValueError("exponents must sum to zero mod N")
    B1, B2, _ = standard_matrices(N)
    u = k2 % N
    v = (-k1) % N
    return np.linalg.matrix_power(B1, u) @ np.linalg.matrix_power(B2, v)


def rep_iso_witness(a: LocalRep, b: LocalRep, tol=1e-9):
    """Tensor-split matrix W with W a(X) W^-1 = b(X), or None.

    Solved triangle by triangle via the nullspace of the three conjugation
    constraints; each factor is normalized to its largest entry.
    """
    from ._linalg import nullspace, normalize_projective

    if a.tri.triangles != b.tri.triangles or a.N != b.N:
        return None
    out = np.eye(1, dtype=complex)
    for pa, pb in zip(a.parts, b.parts):
        rows = []
        eye = np.eye(a.N, dtype=complex)
        for Ma, Mb in zip(pa.matrices(), pb.matrices()):
            # W Ma - Mb W = 0, vec column-major
            rows.append(np.kron(Ma.T, eye) - np.kron(eye, Mb))
        basis, _ = nullspace(np.vstack(rows))
        if basis.shape[1] == 0:
            return None
        W = normalize_projective(basis[:, 0].reshape(a.N, a.N, order="F"))
        out = np.kron(out, W)
    return out


def commutant_dimension(rep: MatrixRep, rtol=1e-10) -> int:
    """Dimension of the joint commutant of the generator images."""
    from ._linalg import nullspace

    d = rep.dim
    eye = np.eye(d, dtype=complex)
    rows = []
    for M in rep.images:
        rows.append(np.kron(M.T, eye) - np.kron(eye, M))
    basis, _ = nullspace(np.vstack(rows), rtol=rtol)
    return basis.shape[1]


def nonquantum_shadow(rep: MatrixRep, tol=SCALAR_TOL) -> np.ndarray:
    """The commutative shadow: the vector of N-th power invariants."""
    return invariants(rep, tol).x
