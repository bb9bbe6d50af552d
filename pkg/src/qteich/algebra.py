"""The quantum shear-coordinate algebra of a triangulation.

Elements are stored in the Weyl-ordered basis: a polynomial is a finite map
from exponent vectors ``alpha`` to scalars, each term standing for the
reordering-invariant monomial

    W^alpha = q^(-sum_{i<j} alpha_i alpha_j sigma_ij) X_1^a1 ... X_n^an.

In this basis multiplication is just ``W^a W^b = q^sigma(a,b) W^(a+b)``, and
the fusion embeddings become exponent-vector pushforwards.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import (
    ContextMismatch,
    NotElementary,
    SelfFoldedFlip,
    SingularDenominator,
)
from .surfaces import BOUNDARY, SELF_FOLDED, IdealTriangulation, sigma_form

COND_LIMIT = 1e12


def q_root(N: int) -> complex:
    """The working root of unity: exp(i pi (N+1)/N), a primitive N-th root of
    (-1)^(N+1) whose square has multiplicative order N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return cmath.exp(1j * cmath.pi * (N + 1) / N)


class Context:
    """Shared data of one algebra: the skew form, the dimension N and q."""

    def __init__(self, sigma, N: int):
        self.sigma = np.asarray(sigma, dtype=np.int64)
        if self.sigma.ndim != 2 or self.sigma.shape[0] != self.sigma.shape[1]:
            raise ValueError("sigma must be square")
        if not np.array_equal(self.sigma, -self.sigma.T):
            raise ValueError("sigma must be antisymmetric")
        self.n = self.sigma.shape[0]
        self.N = N
        self.q = q_root(N)

    @classmethod
    def from_triangulation(cls, tri: IdealTriangulation, N: int) -> "Context":
        ctx = cls(sigma_form(tri), N)
        ctx.triangulation = tri
        return ctx

    def pair(self, alpha, beta) -> int:
        a = np.asarray(alpha, dtype=np.int64)
        b = np.asarray(beta, dtype=np.int64)
        return int(a @ self.sigma @ b)

    def compatible(self, other: "Context") -> bool:
        return (
            self.n == other.n
            and self.N == other.N
            and np.array_equal(self.sigma, other.sigma)
        )

    def __repr__(self):
        return f"Context(n={self.n}, N={self.N})"


def _check_same(a: "NCPolynomial", b: "NCPolynomial"):
    if not a.context.compatible(b.context):
        raise ContextMismatch("operands live over different contexts")


class NCPolynomial:
    """Finite sum of Weyl-ordered monomials over a fixed context.

    ``terms`` maps exponent tuples to ``(coefficient, q_exponent)`` pairs;
    the value of a term is ``coefficient * q**q_exponent``.  Keeping the
    q-exponent separate keeps powers of q exact through products.
    """

    __slots__ = ("context", "terms")

    def __init__(self, context: Context, terms=None):
        self.context = context
        self.terms = {}
        if terms:
            for alpha, (c, e) in terms.items():
                self._add_term(tuple(int(x) for x in alpha), complex(c), int(e))

    def _add_term(self, alpha, coeff, qexp):
        if coeff == 0:
            return
        if alpha in self.terms:
            c0, e0 = self.terms[alpha]
            if e0 == qexp:
                c, e = c0 + coeff, e0
            else:
                c, e = c0 * self.context.q**e0 + coeff * self.context.q**qexp, 0
            if abs(c) == 0:
                del self.terms[alpha]
            else:
                self.terms[alpha] = (c, e)
        else:
            self.terms[alpha] = (coeff, qexp)

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, context):
        return cls(context)

    @classmethod
    def one(cls, context):
        return cls.weyl(context, (0,) * context.n)

    @classmethod
    def weyl(cls, context, alpha, coeff=1.0, qexp=0):
        """The Weyl-ordered monomial W^alpha (times an optional scalar)."""
        p = cls(context)
        p._add_term(tuple(int(x) for x in alpha), complex(coeff), int(qexp))
        return p

    @classmethod
    def generator(cls, context, i, power=1):
        alpha = [0] * context.n
        alpha[i] = power
        return cls.weyl(context, alpha)

    @classmethod
    def written_monomial(cls, context, alpha, coeff=1.0, qexp=0):
        """The plain written product X_1^a1 ... X_n^an (not Weyl-ordered)."""
        alpha = tuple(int(x) for x in alpha)
        shift = sum(
            alpha[i] * alpha[j] * context.sigma[i, j]
            for i in range(context.n)
            for j in range(i + 1, context.n)
        )
        return cls.weyl(context, alpha, coeff, qexp + int(shift))

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = NCPolynomial.weyl(self.context, (0,) * self.context.n, other)
        _check_same(self, other)
        out = NCPolynomial(self.context, self.terms)
        for alpha, (c, e) in other.terms.items():
            out._add_term(alpha, c, e)
        return out

    __radd__ = __add__

    def __neg__(self):
        return NCPolynomial(
            self.context, {a: (-c, e) for a, (c, e) in self.terms.items()}
        )

    def __sub__(self, other):
        return self + (-other if isinstance(other, NCPolynomial) else -complex(other))

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return NCPolynomial(
                self.context, {a: (c * other, e) for a, (c, e) in self.terms.items()}
            )
        _check_same(self, other)
        ctx = self.context
        out = NCPolynomial(ctx)
        for a, (ca, ea) in self.terms.items():
            for b, (cb, eb) in other.terms.items():
                gamma = tuple(x + y for x, y in zip(a, b))
                out._add_term(gamma, ca * cb, ea + eb + ctx.pair(a, b))
        return out

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self * other
        return NotImplemented

    def scale_q(self, qexp):
        return NCPolynomial(
            self.context, {a: (c, e + int(qexp)) for a, (c, e) in self.terms.items()}
        )

    def conjugated_by_generator(self, k):
        """X_k^{-1} * self * X_k, computed termwise (scales W^a by
        q^(2 sigma(a, e_k)))."""
        ctx = self.context
        ek = np.zeros(ctx.n, dtype=np.int64)
        ek[k] = 1
        out = NCPolynomial(ctx)
        for a, (c, e) in self.terms.items():
            out._add_term(a, c, e + 2 * ctx.pair(a, ek))
        return out

    def is_zero(self):
        return not self.terms

    def coefficient(self, alpha) -> complex:
        c, e = self.terms.get(tuple(alpha), (0.0, 0))
        return complex(c) * self.context.q**e

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for a, (c, e) in sorted(self.terms.items()):
            bits.append(f"({c:.4g} q^{e}) W{list(a)}")
        return " + ".join(bits)

    # -- evaluation ------------------------------------------------------------

    def evaluate(self, images) -> np.ndarray:
        """Value under a generator assignment.

        ``images`` is a sequence of invertible square matrices, one per
        generator; each Weyl term is evaluated in written order with its
        stored q-prefactor.
        """
        ctx = self.context
        if len(images) != ctx.n:
            raise ContextMismatch("wrong number of generator images")
        dim = images[0].shape[0]
        acc = np.zeros((dim, dim), dtype=complex)
        inverses = {}
        for alpha, (c, e) in self.terms.items():
            weyl_shift = -sum(
                alpha[i] * alpha[j] * ctx.sigma[i, j]
                for i in range(ctx.n)
                for j in range(i + 1, ctx.n)
            )
            term = np.eye(dim, dtype=complex)
            for i, p in enumerate(alpha):
                if p == 0:
                    continue
                if p > 0:
                    term = term @ np.linalg.matrix_power(images[i], p)
                else:
                    if i not in inverses:
                        inverses[i] = np.linalg.inv(images[i])
                    term = term @ np.linalg.matrix_power(inverses[i], -p)
            acc += complex(c) * ctx.q ** (e + weyl_shift) * term
        return acc


@dataclass
class RationalExpr:
    """Right fraction P * Q^{-1} of two polynomials over one context."""

    num: NCPolynomial
    den: NCPolynomial

    def __post_init__(self):
        _check_same(self.num, self.den)
        if self.den.is_zero():
            raise ZeroDivisionError("zero denominator")

    @classmethod
    def polynomial(cls, p: NCPolynomial) -> "RationalExpr":
        return cls(p, NCPolynomial.one(p.context))

    @property
    def context(self):
        return self.num.context

    def evaluate(self, images) -> np.ndarray:
        nmat = self.num.evaluate(images)
        if _is_one(self.den):
            return nmat
        dmat = self.den.evaluate(images)
        if not np.isfinite(dmat).all():
            raise SingularDenominator("denominator image is not finite")
        cond = np.linalg.cond(dmat)
        if not np.isfinite(cond) or cond > COND_LIMIT:
            raise SingularDenominator(
                f"denominator image has condition number {cond:.3g}"
            )
        return nmat @ np.linalg.inv(dmat)


def _is_one(p: NCPolynomial) -> bool:
    if len(p.terms) != 1:
        return False
    (alpha, (c, e)), = p.terms.items()
    return all(x == 0 for x in alpha) and abs(complex(c) * p.context.q**e - 1) < 1e-15


def evaluate(expr, images) -> np.ndarray:
    """Evaluate an NCPolynomial or RationalExpr under generator images."""
    return expr.evaluate(images)


# -- fusion embedding -----------------------------------------------------------


def iota_embed(p: NCPolynomial, fusion, split_context: Context) -> NCPolynomial:
    """Push a polynomial through the splitting map of a fusion.

    ``fusion`` is the FusionMap returned by ``split_along``; the result lives
    over the split surface's context.  On Weyl monomials this is exponent
    pushforward, so it is automatically an injective algebra map whenever the
    fusion is skew-form compatible.
    """
    if fusion.matrix.shape[1] != p.context.n:
        raise ContextMismatch("fusion does not match the polynomial's context")
    if fusion.matrix.shape[0] != split_context.n:
        raise ContextMismatch("fusion does not match the split context")
    out = NCPolynomial(split_context)
    for alpha, (c, e) in p.terms.items():
        out._add_term(fusion.push_exponent(alpha), c, e)
    return out


# -- coordinate-change maps ------------------------------------------------------


@dataclass
class PhiMap:
    """Generator images of the coordinate change between two triangulations
    one elementary move apart.  ``images[i]`` is the image of the i-th
    generator of the source (new) triangulation inside the target (old)
    algebra."""

    source: IdealTriangulation  # the primed triangulation
    target: IdealTriangulation
    context: Context  # context of the target algebra
    images: dict

    def image(self, i) -> RationalExpr:
        return self.images[i]

    def evaluate_generator(self, i, images) -> np.ndarray:
        return self.images[i].evaluate(images)


def _flip_roles(tri: IdealTriangulation, i: int):
    """Square side roles around diagonal ``i``: positions (a, b, c, d) with
    b, d picking up the (1 + q X_i) factor and a, c its inverse partner."""
    _, _, _, _, a, b, c, d = tri.square_at(i)
    return a, b, c, d


def glue_pattern(tri: IdealTriangulation, i: int) -> frozenset:
    """Which square sides around diagonal ``i`` are identified in the surface.

    Returns a frozenset of role pairs among {"ab", "ad", "bc", "bd", "ac",
    "cd"}; empty for an embedded square.
    """
    a, b, c, d = _flip_roles(tri, i)
    names = {"a": a, "b": b, "c": c, "d": d}
    pairs = []
    for x, y in (("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")):
        if names[x] == names[y]:
            pairs.append(x + y)
    return frozenset(pairs)


def phi_flip(tri: IdealTriangulation, i: int, N: int, context: Context | None = None) -> PhiMap:
    """Coordinate change for the diagonal exchange at edge ``i``.

    Covers the embedded square and all eight side-identification patterns of
    a square sitting non-trivially in the surface.
    """
    if tri.edge_kind[i] == SELF_FOLDED:
        raise SelfFoldedFlip(f"edge {i} is self-folded")
    if tri.edge_kind[i] == BOUNDARY:
        raise NotElementary(f"edge {i} is a boundary edge")
    ctx = context if context is not None else Context.from_triangulation(tri, N)
    a, b, c, d = _flip_roles(tri, i)
    flipped = tri.flip(i)

    one = NCPolynomial.one(ctx)
    Xi = NCPolynomial.generator(ctx, i)
    Xi_inv = NCPolynomial.generator(ctx, i, -1)

    def plus(power):  # 1 + q^power X_i
        return one + Xi.scale_q(power)

    def plus_inv(power):  # 1 + q^power X_i^{-1}
        return one + Xi_inv.scale_q(power)

    images = {}
    images[i] = RationalExpr.polynomial(Xi_inv)
    pattern = glue_pattern(tri, i)

    def numerator_image(edge, double):
        gen = NCPolynomial.generator(ctx, edge)
        poly = (plus(1) * plus(3) if double else plus(1)) * gen
        return RationalExpr.polynomial(poly)

    def denominator_image(edge, double):
        gen = NCPolynomial.generator(ctx, edge)
        den = plus_inv(1).conjugated_by_generator(edge)
        if double:
            den = den * plus_inv(3).conjugated_by_generator(edge)
        return RationalExpr(gen, den)

    def product_image(edge):
        return RationalExpr.polynomial(Xi * NCPolynomial.generator(ctx, edge))

    # Roles around the diagonal: b, d carry (1 + q X_i); a, c carry the
    # inverse factor.  An identification of a numerator side with a
    # denominator side collapses to X_i X_edge; same-role identifications
    # double the factor.
    mixed = {"ab", "ad", "bc", "cd"}
    if pattern == frozenset():
        images[b] = numerator_image(b, False)
        images[d] = numerator_image(d, False)
        images[a] = denominator_image(a, False)
        images[c] = denominator_image(c, False)
    elif pattern == {"bd", "ac"}:
        images[b] = numerator_image(b, True)
        images[c] = denominator_image(c, True)
    elif pattern == {"bd"}:
        images[b] = numerator_image(b, True)
        images[a] = denominator_image(a, False)
        images[c] = denominator_image(c, False)
    elif pattern == {"ac"}:
        images[c] = denominator_image(c, True)
        images[b] = numerator_image(b, False)
        images[d] = numerator_image(d, False)
    elif pattern and pattern <= mixed:
        roles = {"a": a, "b": b, "c": c, "d": d}
        glued = set("".join(sorted(pattern)))
        for pair in pattern:
            images[roles[pair[0]]] = product_image(roles[pair[0]])
        for role in "abcd":
            if role in glued:
                continue
            if role in ("b", "d"):
                images[roles[role]] = numerator_image(roles[role], False)
            else:
                images[roles[role]] = denominator_image(roles[role], False)
    else:
        raise NotElementary(f"unrecognized square identification pattern {set(pattern)}")

    for e in range(tri.n):
        if e not in images:
            images[e] = RationalExpr.polynomial(NCPolynomial.generator(ctx, e))
    return PhiMap(source=flipped, target=tri, context=ctx, images=images)


def phi_reindex(tri: IdealTriangulation, tau, N: int, context: Context | None = None) -> PhiMap:
    """Coordinate change for a relabeling: the i-th new generator maps to
    generator tau[i] of the old algebra."""
    ctx = context if context is not None else Context.from_triangulation(tri, N)
    tau = list(tau)
    images = {
        i: RationalExpr.polynomial(NCPolynomial.generator(ctx, tau[i]))
        for i in range(tri.n)
    }
    return PhiMap(source=tri.reindex(tau), target=tri, context=ctx, images=images)


def phi_elementary(tri: IdealTriangulation, other: IdealTriangulation, N: int) -> PhiMap:
    """Detect the elementary move from ``tri`` to ``other`` and return its
    coordinate change (images of ``other``'s generators in ``tri``'s algebra)."""
    for i in tri.internal_edges():
        if tri.edge_kind[i] == SELF_FOLDED:
            continue
        if tri.flip(i) == other:
            return phi_flip(tri, i, N)
    # try to detect a pure relabeling
    perm = _match_reindex(tri, other)
    if perm is not None:
        return phi_reindex(tri, perm, N)
    raise NotElementary("triangulations are not one elementary move apart")


def _match_reindex(tri, other):
    """A permutation tau with other == tri.reindex(tau), if one exists."""
    if tri.n != other.n or tri.m != other.m:
        return None
    import itertools

    if tri.n > 8:  # brute-force detection only meant for desk-scale examples
        return None
    for tau in itertools.permutations(range(tri.n)):
        if tri.reindex(tau) == other:
            return list(tau)
    return None
