"""Ideal triangulations of punctured surfaces and their combinatorics.

A triangulation is stored as a list of triangles, each an ordered triple of
sides.  Side order is clockwise with respect to the surface orientation, so
consecutive sides share a corner with the earlier side on the left.  A side
is a pair ``(edge, flag)``: ``edge`` indexes the 1-cell and ``flag`` is +1
when the boundary traversal of that side agrees with the chosen direction of
the edge.  On an oriented surface the two occurrences of an internal edge
always traverse it in opposite directions, so their flags are opposite.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import BoundaryEdge, NonTriangulable, SearchBudgetExceeded

BOUNDARY = "boundary"
INTERNAL = "internal"
SELF_FOLDED = "self-folded"


@dataclass(frozen=True)
class SurfaceSig:
    """Topological type: genus, punctures, boundary components, boundary punctures.

    ``components`` > 1 describes a disjoint union (as produced by cutting);
    ``genus`` is then the total genus.
    """

    genus: int
    punctures: int
    boundary: int = 0
    boundary_punctures: int = 0
    components: int = 1

    def __post_init__(self):
        g, p, b, pb = self.genus, self.punctures, self.boundary, self.boundary_punctures
        if g < 0 or b < 0 or pb < 0 or self.components < 1:
            raise NonTriangulable("negative entries in surface signature")
        if p < self.components:
            raise NonTriangulable("need at least one puncture per component")
        if pb > p:
            raise NonTriangulable("more boundary punctures than punctures")
        if b > pb:
            raise NonTriangulable("every boundary component needs a puncture")
        if self.components == 1 and 2 * self.euler() > pb - 1:
            raise NonTriangulable("surface admits no ideal triangulation")

    def euler(self) -> int:
        # Euler characteristic of the surface with interior punctures removed.
        return (
            2 * self.components
            - 2 * self.genus
            - self.boundary
            - (self.punctures - self.boundary_punctures)
        )

    def edge_count(self) -> int:
        return -3 * self.euler() + 2 * self.boundary_punctures

    def triangle_count(self) -> int:
        return -2 * self.euler() + self.boundary_punctures


def _normalize_side(side):
    if isinstance(side, dict):
        edge = int(side["edge"])
        flag = side.get("flip", None)
        if flag is not None:
            flag = -1 if (flag is True or flag == -1) else 1
        return edge, flag
    if isinstance(side, (tuple, list)):
        edge, flag = side
        return int(edge), (None if flag is None else (1 if flag >= 0 else -1))
    return int(side), None


class IdealTriangulation:
    """An indexed ideal triangulation of a punctured surface.

    ``triangles[t][s]`` is the ``(edge, flag)`` pair of side ``s`` of triangle
    ``t``.  Equality and hashing go through :meth:`canonical_key`, which
    forgets triangle order, the rotation of each side triple and the chosen
    edge directions; that is combinatorial isomorphism with matching edge
    indexing.
    """

    def __init__(self, sig: SurfaceSig, triangles, validate: bool = True):
        tris = []
        for tri in triangles:
            if len(tri) != 3:
                raise NonTriangulable("each triangle needs exactly three sides")
            tris.append(tuple(_normalize_side(s) for s in tri))
        self.sig = sig
        self.triangles = self._assign_flags(tris)
        self.m = len(self.triangles)
        edges = sorted({e for tri in self.triangles for e, _ in tri})
        if edges != list(range(len(edges))):
            raise NonTriangulable("edge indices must be 0..n-1 without gaps")
        self.n = len(edges)
        self.occurrences = {e: [] for e in range(self.n)}
        for t, tri in enumerate(self.triangles):
            for s, (e, f) in enumerate(tri):
                self.occurrences[e].append((t, s, f))
        self.edge_kind = [self._kind(e) for e in range(self.n)]
        if validate:
            self._validate()

    # -- construction -----------------------------------------------------

    @staticmethod
    def _assign_flags(tris):
        seen = {}
        out = []
        for t, tri in enumerate(tris):
            row = []
            for s, (e, f) in enumerate(tri):
                if e not in seen:
                    row.append((e, 1 if f is None else f))
                    seen[e] = row[-1][1]
                else:
                    row.append((e, -seen[e] if f is None else f))
            out.append(tuple(row))
        return tuple(out)

    def _kind(self, e):
        occ = self.occurrences[e]
        if len(occ) == 1:
            return BOUNDARY
        if occ[0][0] == occ[1][0]:
            return SELF_FOLDED
        return INTERNAL

    def _validate(self):
        for e, occ in self.occurrences.items():
            if len(occ) > 2:
                raise NonTriangulable(f"edge {e} glued to {len(occ)} sides")
            if len(occ) == 2 and occ[0][2] == occ[1][2]:
                raise NonTriangulable(
                    f"edge {e}: both sides traverse it the same way "
                    "(orientation-reversing gluing)"
                )
        sig = self.sig
        if self.n != sig.edge_count() or self.m != sig.triangle_count():
            raise NonTriangulable(
                f"counts n={self.n}, m={self.m} do not match the declared surface "
                f"(expected n={sig.edge_count()}, m={sig.triangle_count()})"
            )
        cycles, chains = self._corner_orbits()
        if cycles + chains != sig.punctures or chains != sig.boundary_punctures:
            raise NonTriangulable(
                f"gluing has {cycles + chains} punctures ({chains} on the boundary), "
                f"declared {sig.punctures} ({sig.boundary_punctures})"
            )

    def _corner_orbits(self):
        """Count punctures by walking corners around each vertex.

        Corner ``(t, s)`` sits between sides ``s`` and ``s+1`` of triangle
        ``t``; rotating around the vertex crosses side ``s+1`` into the other
        triangle carrying that edge.
        """
        succ = {}
        starts = set()
        for t, tri in enumerate(self.triangles):
            for s in range(3):
                right = (s + 1) % 3
                e = tri[right][0]
                occ = self.occurrences[e]
                if len(occ) == 1:
                    succ[(t, s)] = None
                    continue
                other = occ[1] if occ[0][:2] == (t, right) else occ[0]
                if occ[0][:2] == (t, right) and occ[1][:2] == (t, right):
                    # cannot happen: occurrences are distinct (t, s) pairs
                    raise NonTriangulable("degenerate gluing")
                succ[(t, s)] = (other[0], other[1])
        preds = set(v for v in succ.values() if v is not None)
        cycles = 0
        chains = 0
        unvisited = set(succ)
        # chains start at corners with no predecessor
        for c in sorted(set(succ) - preds):
            chains += 1
            while c is not None and c in unvisited:
                unvisited.discard(c)
                c = succ[c]
        while unvisited:
            cycles += 1
            c = min(unvisited)
            while c in unvisited:
                unvisited.discard(c)
                c = succ[c]
        return cycles, chains

    # -- equality ----------------------------------------------------------

    def canonical_key(self):
        tris = []
        for tri in self.triangles:
            rots = [tuple(tri[(s + r) % 3][0] for s in range(3)) for r in range(3)]
            tris.append(min(rots))
        return (self.n, tuple(sorted(tris)))

    def __eq__(self, other):
        return isinstance(other, IdealTriangulation) and self.canonical_key() == other.canonical_key()

    def __hash__(self):
        return hash(self.canonical_key())

    def __repr__(self):
        tris = ", ".join("(" + ",".join(str(e) for e, _ in tri) + ")" for tri in self.triangles)
        return f"IdealTriangulation(n={self.n}, m={self.m}, triangles=[{tris}])"

    # -- basic queries ------------------------------------------------------

    def internal_edges(self):
        return [e for e in range((self.n)) if self.edge_kind[e] != BOUNDARY]

    def flag_of(self, t, s):
        return self.triangles[t][s][1]

    def edge_at(self, t, s):
        return self.triangles[t][s][0]

    def square_at(self, i):
        """The two triangles adjacent to internal edge ``i`` and the four
        surrounding edge roles.

        Returns ``(t1, s1, t2, s2, a, b, c, d)`` where ``a, b`` follow the
        diagonal clockwise in the first triangle and ``c, d`` in the second.
        """
        if self.edge_kind[i] == BOUNDARY:
            raise BoundaryEdge(f"edge {i} is a boundary edge")
        if self.edge_kind[i] == SELF_FOLDED:
            raise BoundaryEdge(f"edge {i} is self-folded; it spans no square")
        (t1, s1, _), (t2, s2, _) = self.occurrences[i]
        a = self.edge_at(t1, (s1 + 1) % 3)
        b = self.edge_at(t1, (s1 + 2) % 3)
        c = self.edge_at(t2, (s2 + 1) % 3)
        d = self.edge_at(t2, (s2 + 2) % 3)
        return t1, s1, t2, s2, a, b, c, d

    # -- moves ---------------------------------------------------------------

    def flip(self, i: int) -> "IdealTriangulation":
        """Replace the diagonal ``i`` of its square by the other diagonal.

        Self-folded edges are returned unchanged; boundary edges are an error.
        """
        if self.edge_kind[i] == BOUNDARY:
            raise BoundaryEdge(f"cannot flip boundary edge {i}")
        if self.edge_kind[i] == SELF_FOLDED:
            return self
        (t1, s1, _), (t2, s2, _) = self.occurrences[i]
        tri1, tri2 = self.triangles[t1], self.triangles[t2]
        a, b = tri1[(s1 + 1) % 3], tri1[(s1 + 2) % 3]
        c, d = tri2[(s2 + 1) % 3], tri2[(s2 + 2) % 3]
        new = [list(tri) for tri in self.triangles]
        new[t1] = [b, c, (i, 1)]
        new[t2] = [a, (i, -1), d]
        return IdealTriangulation(self.sig, new, validate=False)

    def reindex(self, tau) -> "IdealTriangulation":
        """Relabel edges so that new edge ``i`` is old edge ``tau[i]``."""
        tau = list(tau)
        if sorted(tau) != list(range(self.n)):
            raise NonTriangulable("tau is not a permutation of the edges")
        inv = [0] * self.n
        for i, e in enumerate(tau):
            inv[e] = i
        new = [[(inv[e], f) for e, f in tri] for tri in self.triangles]
        return IdealTriangulation(self.sig, new, validate=False)

    def to_spec(self):
        return {
            "surface": {
                "g": self.sig.genus,
                "p": self.sig.punctures,
                "b": self.sig.boundary,
                "p_boundary": self.sig.boundary_punctures,
            },
            "triangles": [
                [{"edge": e, "flip": f == -1} for e, f in tri] for tri in self.triangles
            ],
        }


def build_triangulation(spec) -> IdealTriangulation:
    """Build and validate a triangulation from a gluing description.

    ``spec`` is a dict ``{"surface": {g, p, b, p_boundary}, "triangles": [...]}``
    (or a JSON string of one); each triangle lists three sides, either bare
    edge indices or ``{"edge": i, "flip": bool}`` records.  Omitting the
    ``surface`` block infers the topological type from the gluing.
    """
    if isinstance(spec, str):
        spec = json.loads(spec)
    if "surface" not in spec or spec["surface"] is None:
        return triangulation_from_gluing(spec["triangles"])
    surf = spec["surface"]
    sig = SurfaceSig(
        genus=int(surf.get("g", 0)),
        punctures=int(surf["p"]),
        boundary=int(surf.get("b", 0)),
        boundary_punctures=int(surf.get("p_boundary", 0)),
        components=int(surf.get("components", 1)),
    )
    return IdealTriangulation(sig, spec["triangles"])


def infer_signature(triangles) -> SurfaceSig:
    """Topological type of the surface a gluing describes."""
    probe = IdealTriangulation(SurfaceSig(0, 3, 1, 3), triangles, validate=False)
    for e, occ in probe.occurrences.items():
        if len(occ) > 2:
            raise NonTriangulable(f"edge {e} glued to {len(occ)} sides")
    cycles, chains = probe._corner_orbits()
    p, pb = cycles + chains, chains
    chi = probe.n - 2 * probe.m
    b = _boundary_components(probe)
    ncomp, _ = DualGraph(probe).components()
    g2 = 2 * ncomp - b - (p - pb) - chi
    if g2 % 2 != 0 or g2 < 0:
        raise NonTriangulable("gluing describes a non-orientable or inconsistent surface")
    return SurfaceSig(g2 // 2, p, b, pb, components=ncomp)


def triangulation_from_gluing(triangles) -> IdealTriangulation:
    """Build a triangulation inferring the surface from the gluing alone."""
    return IdealTriangulation(infer_signature(triangles), triangles)


# -- stock examples ----------------------------------------------------------


def ideal_triangle() -> IdealTriangulation:
    return IdealTriangulation(SurfaceSig(0, 3, 1, 3), [[0, 1, 2]])


def ideal_square() -> IdealTriangulation:
    """Square with diagonal 0; boundary j=1, k=2, l=3, m=4 as in the standard
    flip picture: triangles (j, i, m) and (i, k, l)."""
    return IdealTriangulation(SurfaceSig(0, 4, 1, 4), [[1, 0, 4], [0, 2, 3]])


def ideal_polygon(p: int) -> IdealTriangulation:
    """Fan triangulation of the ideal p-gon: boundary edges 0..p-1, diagonals
    p..2p-4."""
    if p < 3:
        raise NonTriangulable("polygon needs at least 3 punctures")
    sig = SurfaceSig(0, p, 1, p)
    if p == 3:
        return ideal_triangle()
    tris = []
    # fan from vertex 0: triangle t spans boundary edge t+1 with diagonals
    diag = lambda k: p + k  # diagonal k cuts off boundary edges 1..k+1
    for t in range(p - 2):
        left = 0 if t == 0 else diag(t - 1)
        right = (p - 1) if t == p - 3 else diag(t)
        tris.append([left, t + 1, right])
    return IdealTriangulation(sig, tris)


def once_punctured_torus() -> IdealTriangulation:
    return IdealTriangulation(SurfaceSig(1, 1, 0, 0), [[0, 1, 2], [0, 1, 2]])


# -- skew form ----------------------------------------------------------------


def sigma_form(tri: IdealTriangulation) -> np.ndarray:
    """Antisymmetric corner-count pairing on edges.

    Each corner of each triangle, taken clockwise, has the earlier side on its
    left; a corner with edge ``i`` left and ``j`` right adds +1 to ``a[i, j]``
    and the form is ``a - a.T``.
    """
    a = np.zeros((tri.n, tri.n), dtype=np.int64)
    for t in range(tri.m):
        for s in range(3):
            i = tri.edge_at(t, s)
            j = tri.edge_at(t, (s + 1) % 3)
            a[i, j] += 1
    return a - a.T


# -- dual graph and homology ---------------------------------------------------


class DualGraph:
    """Dual graph of a triangulation: one vertex per triangle, one oriented
    edge per internal 1-cell (a loop when the 1-cell is self-folded).

    The dual edge of ``a`` points at the triangle that sees edge ``a`` with
    flag +1 (the triangle on its left); ``epsilon(a, b)`` is 0 whenever ``a``
    is boundary or self-folded.
    """

    def __init__(self, tri: IdealTriangulation):
        self.tri = tri
        self.n = tri.n
        self.m = tri.m
        self.head = [None] * tri.n
        self.tail = [None] * tri.n
        self.is_loop = [False] * tri.n
        for e in range(tri.n):
            kind = tri.edge_kind[e]
            if kind == BOUNDARY:
                continue
            (t1, _, f1), (t2, _, _) = tri.occurrences[e]
            if kind == SELF_FOLDED:
                self.head[e] = self.tail[e] = t1
                self.is_loop[e] = True
            else:
                self.head[e] = t1 if f1 == 1 else t2
                self.tail[e] = t2 if f1 == 1 else t1

    def edges(self):
        return [e for e in range(self.n) if self.head[e] is not None]

    def epsilon(self, a, b) -> int:
        if self.head[a] is None or self.is_loop[a]:
            return 0
        return (1 if self.head[a] == b else 0) - (1 if self.tail[a] == b else 0)

    def valence(self, t) -> int:
        v = 0
        for e in self.edges():
            if self.head[e] == t:
                v += 1
            if self.tail[e] == t:
                v += 1
        return v

    def components(self):
        comp = [None] * self.m
        c = 0
        for start in range(self.m):
            if comp[start] is not None:
                continue
            queue = deque([start])
            comp[start] = c
            while queue:
                u = queue.popleft()
                for e in self.edges():
                    if self.is_loop[e]:
                        continue
                    for v in (self.head[e], self.tail[e]):
                        if u in (self.head[e], self.tail[e]) and comp[v] is None:
                            comp[v] = c
                            queue.append(v)
            c += 1
        return c, comp

    def betti(self) -> int:
        ncomp, _ = self.components()
        return len(self.edges()) - self.m + ncomp

    def spanning_tree(self):
        """Tree edges of a spanning forest (loops never enter the tree)."""
        parent = {}
        tree = set()
        for start in range(self.m):
            if start in parent:
                continue
            parent[start] = (None, None)
            queue = deque([start])
            while queue:
                u = queue.popleft()
                for e in self.edges():
                    if self.is_loop[e] or e in tree:
                        continue
                    if self.head[e] == u and self.tail[e] not in parent:
                        parent[self.tail[e]] = (u, e)
                        tree.add(e)
                        queue.append(self.tail[e])
                    elif self.tail[e] == u and self.head[e] not in parent:
                        parent[self.head[e]] = (u, e)
                        tree.add(e)
                        queue.append(self.head[e])
        return tree, parent

    def cycle_basis(self):
        """Integer vectors spanning the kernel of the boundary map.

        One fundamental cycle per non-tree edge; entries are in {-1, 0, 1}.
        """
        tree, parent = self.spanning_tree()
        basis = []
        for e in self.edges():
            if e in tree:
                continue
            vec = np.zeros(self.n, dtype=np.int64)
            vec[e] = 1
            if not self.is_loop[e]:
                # tree path from head back to tail cancels the boundary
                path_h = self._root_path(parent, self.head[e])
                path_t = self._root_path(parent, self.tail[e])
                common = 0
                while (
                    common < min(len(path_h), len(path_t))
                    and path_h[len(path_h) - 1 - common] == path_t[len(path_t) - 1 - common]
                ):
                    common += 1
                hop = path_h[: len(path_h) - common + 1]
                top = path_t[: len(path_t) - common + 1]
                # walk head -> ... -> meet -> ... -> tail
                walk = hop + top[-2::-1] if len(top) > 1 else hop
                for u, v in zip(walk, walk[1:]):
                    te = self._tree_edge_between(parent, tree, u, v)
                    vec[te] += 1 if self.head[te] == v else -1
            basis.append(vec)
        return basis

    def _root_path(self, parent, v):
        path = [v]
        while parent[v][0] is not None:
            v = parent[v][0]
            path.append(v)
        return path

    def _tree_edge_between(self, parent, tree, u, v):
        for w, other in ((u, v), (v, u)):
            p, e = parent[w]
            if p == other:
                return e
        raise AssertionError("not adjacent in tree")

    # -- homology over Z_N ---------------------------------------------------

    def is_cycle(self, coeffs, N: int) -> bool:
        coeffs = np.asarray(coeffs, dtype=np.int64)
        for e in range(self.n):
            if self.head[e] is None and coeffs[e] % N != 0:
                return False
        for b in range(self.m):
            tot = sum(self.epsilon(a, b) * int(coeffs[a]) for a in range(self.n))
            if tot % N != 0:
                return False
        return True

    def homology_generators(self, N: int):
        """Generators of the cycle group over Z_N (the full group has order
        N**betti)."""
        if N < 1:
            raise ValueError("modulus must be >= 1")
        return [vec % N for vec in self.cycle_basis()]

    def homology_classes(self, N: int):
        """Every class, as a sorted list of coefficient tuples (N**betti many)."""
        gens = self.homology_generators(N)
        classes = set()
        for combo in np.ndindex(*([N] * len(gens))):
            vec = np.zeros(self.n, dtype=np.int64)
            for k, g in zip(combo, gens):
                vec = (vec + k * g) % N
            classes.add(tuple(int(x) for x in vec))
        return sorted(classes)


def dual_graph(tri: IdealTriangulation) -> DualGraph:
    return DualGraph(tri)


def homology_cycles(graph: DualGraph, N: int):
    return graph.homology_generators(N)


# -- splitting / fusion --------------------------------------------------------


class FusionMap:
    """Exponent-lattice inclusion induced by regluing split edges.

    ``matrix`` is the s-by-n 0/1 matrix whose column ``i`` marks the split
    edges fusing into edge ``i``; columns have one or two entries and pairwise
    disjoint supports.
    """

    def __init__(self, source: IdealTriangulation, target: IdealTriangulation, matrix):
        self.source = source  # the split (cut-open) triangulation
        self.target = target
        self.matrix = np.asarray(matrix, dtype=np.int64)

    def push_exponent(self, alpha):
        return tuple(int(x) for x in self.matrix @ np.asarray(alpha, dtype=np.int64))

    def check_sigma_compatibility(self) -> bool:
        sig_t = sigma_form(self.target)
        sig_s = sigma_form(self.source)
        for i in range(self.target.n):
            for j in range(self.target.n):
                vi, vj = self.matrix[:, i], self.matrix[:, j]
                if sig_t[i, j] != vi @ sig_s @ vj:
                    return False
        return True


def split_along(tri: IdealTriangulation, edges) -> tuple[IdealTriangulation, FusionMap]:
    """Cut the surface along the given internal edges.

    Each cut edge becomes two boundary edges of the result.  New edges are
    indexed by (old edge, occurrence) in lexicographic order, so splitting
    along nothing is the identity.
    """
    edges = set(edges)
    for e in edges:
        if tri.edge_kind[e] == BOUNDARY:
            raise BoundaryEdge(f"cannot split along boundary edge {e}")
    # new edge id per (t, s) side
    new_ids = {}
    cols = []  # list of (old_edge,) supports in order
    next_id = 0
    for e in range(tri.n):
        occ = tri.occurrences[e]
        if e in edges:
            for t, s, _ in occ:
                new_ids[(t, s)] = next_id
                next_id += 1
            cols.append((e, len(occ)))
        else:
            for t, s, _ in occ:
                new_ids[(t, s)] = next_id
            cols.append((e, 1))
            next_id += 1
    new_tris = []
    for t, tri_t in enumerate(tri.triangles):
        row = []
        for s, (e, f) in enumerate(tri_t):
            row.append((new_ids[(t, s)], f))
        new_tris.append(row)
    # declared signature of the cut surface: recompute from counts
    s_edges = next_id
    sig = _split_signature(tri, edges, s_edges)
    split = IdealTriangulation(sig, new_tris, validate=True)
    matrix = np.zeros((s_edges, tri.n), dtype=np.int64)
    for t, tri_t in enumerate(tri.triangles):
        for s, (e, _) in enumerate(tri_t):
            matrix[new_ids[(t, s)], e] = 1
    return split, FusionMap(split, tri, matrix)


def _split_signature(tri, edges, n_new):
    """Signature of the surface cut along ``edges`` (counts derived by a
    corner walk on the cut gluing)."""
    # Build an unvalidated triangulation first, then count its punctures.
    probe_sides = {}
    next_id = 0
    for e in range(tri.n):
        occ = tri.occurrences[e]
        if e in edges:
            for t, s, _ in occ:
                probe_sides[(t, s)] = next_id
                next_id += 1
        else:
            for t, s, _ in occ:
                probe_sides[(t, s)] = next_id
            next_id += 1
    tris = [
        [(probe_sides[(t, s)], f) for s, (e, f) in enumerate(tri.triangles[t])]
        for t in range(tri.m)
    ]
    probe = IdealTriangulation(SurfaceSig(0, 3, 1, 3), tris, validate=False)
    cycles, chains = probe._corner_orbits()
    p = cycles + chains
    pb = chains
    # n = -3chi + 2 pb and m = -2chi + pb give chi = n - 2m
    chi = n_new - 2 * tri.m
    b = _boundary_components(probe)
    ncomp, _ = DualGraph(probe).components()
    g2 = 2 * ncomp - b - (p - pb) - chi
    if g2 % 2 != 0 or g2 < 0:
        raise NonTriangulable("split surface has inconsistent counts")
    return SurfaceSig(g2 // 2, p, b, pb, components=ncomp)


def _boundary_components(tri: IdealTriangulation) -> int:
    """Count boundary circles by walking boundary sides around the border."""
    boundary_sides = [
        occ[0][:2] for e, occ in tri.occurrences.items() if len(occ) == 1
    ]
    if not boundary_sides:
        return 0
    boundary = set(boundary_sides)
    # successor: walk to the next boundary side counterclockwise around the
    # border: from side (t, s) move to the corner at its end and fan through
    # internal edges until hitting a boundary side.
    succ = {}
    for (t, s) in boundary:
        ct, cs = t, s  # corner between sides s and s+1
        while True:
            e = tri.edge_at(ct, (cs + 1) % 3)
            occ = tri.occurrences[e]
            if len(occ) == 1:
                succ[(t, s)] = (ct, (cs + 1) % 3)
                break
            other = occ[1] if occ[0][:2] == (ct, (cs + 1) % 3) else occ[0]
            ct, cs = other[0], other[1]
    comps = 0
    unvisited = set(boundary)
    while unvisited:
        comps += 1
        c = min(unvisited)
        while c in unvisited:
            unvisited.discard(c)
            c = succ[c]
    return comps


# -- flip-graph search ---------------------------------------------------------


def flip_path(start: IdealTriangulation, goal: IdealTriangulation, budget: int = 100_000):
    """Breadth-first flip sequence from ``start`` to ``goal``.

    Returns a list of ``("flip", edge)`` moves; triangulations are compared by
    canonical form.  Raises SearchBudgetExceeded past ``budget`` states.
    """
    if start.n != goal.n or start.sig != goal.sig:
        raise NonTriangulable("triangulations live on different surfaces")
    target = goal.canonical_key()
    seen = {start.canonical_key(): None}
    queue = deque([(start, [])])
    if start.canonical_key() == target:
        return []
    visited = 0
    while queue:
        tri, path = queue.popleft()
        visited += 1
        if visited > budget:
            raise SearchBudgetExceeded(f"no flip path within {budget} states")
        for e in tri.internal_edges():
            if tri.edge_kind[e] == SELF_FOLDED:
                continue
            nxt = tri.flip(e)
            key = nxt.canonical_key()
            if key in seen:
                continue
            seen[key] = None
            moves = path + [("flip", e)]
            if key == target:
                return moves
            queue.append((nxt, moves))
    raise SearchBudgetExceeded("flip graph exhausted without reaching the goal")


def apply_moves(tri: IdealTriangulation, moves) -> IdealTriangulation:
    """Apply a list of ("flip", i) / ("reindex", tau) moves."""
    for kind, arg in moves:
        if kind == "flip":
            tri = tri.flip(arg)
        elif kind == "reindex":
            tri = tri.reindex(arg)
        else:
            raise ValueError(f"unknown move {kind!r}")
    return tri
