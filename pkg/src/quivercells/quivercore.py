"""Quivers, dimension vectors, the Euler form, labeled/coefficient quivers,
tree detection, and finite windows of the universal abelian cover."""

from __future__ import annotations

import itertools
from typing import Dict, List, Optional, Sequence, Tuple


class Quiver:
    """A finite directed multigraph with stable vertex and arrow order.

    Loops and parallel arrows are allowed. Vertex and arrow ids are strings
    and must be unique.
    """

    def __init__(self, vertices: Sequence[str], arrows: Sequence[Tuple[str, str, str]]):
        self.vertices = [str(v) for v in vertices]
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        self.arrows = [(str(a), str(s), str(t)) for (a, s, t) in arrows]
        ids = [a for a, _, _ in self.arrows]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate arrow ids")
        vset = set(self.vertices)
        for a, s, t in self.arrows:
            if s not in vset or t not in vset:
                raise ValueError(f"arrow {a}: endpoint not a vertex")
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}
        self.arrow_index = {a: i for i, (a, _, _) in enumerate(self.arrows)}
        self.src = {a: s for a, s, t in self.arrows}
        self.tgt = {a: t for a, s, t in self.arrows}

    @property
    def arrow_ids(self) -> List[str]:
        return [a for a, _, _ in self.arrows]

    def arrows_into(self, v: str) -> List[str]:
        return [a for a, s, t in self.arrows if t == v]

    def arrows_out_of(self, v: str) -> List[str]:
        return [a for a, s, t in self.arrows if s == v]

    def is_acyclic(self) -> bool:
        order = self.topological_order()
        return order is not None

    def topological_order(self) -> Optional[List[str]]:
        indeg = {v: 0 for v in self.vertices}
        for a, s, t in self.arrows:
            indeg[t] += 1
        queue = [v for v in self.vertices if indeg[v] == 0]
        out = []
        while queue:
            v = queue.pop(0)
            out.append(v)
            for a, s, t in self.arrows:
                if s == v:
                    indeg[t] -= 1
                    if indeg[t] == 0:
                        queue.append(t)
        return out if len(out) == len(self.vertices) else None

    def __eq__(self, other):
        return (isinstance(other, Quiver) and self.vertices == other.vertices
                and self.arrows == other.arrows)

    def __hash__(self):
        return hash((tuple(self.vertices), tuple(self.arrows)))

    def __repr__(self):
        return f"Quiver({self.vertices}, {self.arrows})"


def kronecker(n: int) -> Quiver:
    """The generalized Kronecker quiver with n parallel arrows 0 -> 1."""
    names = ["a", "b", "c", "d", "e", "f", "g", "h"]
    ids = [names[i] if i < len(names) else f"a{i+1}" for i in range(n)]
    return Quiver(["0", "1"], [(ids[i], "0", "1") for i in range(n)])


def subspace_quiver(n: int) -> Quiver:
    """The n-subspace quiver: arrows a_i from q_i into the sink q0."""
    return Quiver(["q0"] + [f"q{i}" for i in range(1, n + 1)],
                  [(f"a{i}", f"q{i}", "q0") for i in range(1, n + 1)])


# DimVector: plain mapping vertex id -> nonnegative int.
DimVector = Dict[str, int]


def check_dimvector(q: Quiver, alpha: DimVector) -> None:
    for v, d in alpha.items():
        if v not in q.vertex_index:
            raise ValueError(f"dimension vector mentions unknown vertex {v!r}")
        if d < 0:
            raise ValueError("dimension vector entries must be nonnegative")


def dim_at(alpha: DimVector, v: str) -> int:
    return alpha.get(v, 0)


def total_dim(alpha: DimVector) -> int:
    return sum(alpha.values())


def add_dimvectors(a: DimVector, b: DimVector) -> DimVector:
    keys = set(a) | set(b)
    return {k: a.get(k, 0) + b.get(k, 0) for k in keys}


def euler_form(q: Quiver, a: DimVector, b: DimVector) -> int:
    """The (non-symmetric) Euler form of two dimension vectors."""
    check_dimvector(q, a)
    check_dimvector(q, b)
    val = sum(dim_at(a, v) * dim_at(b, v) for v in q.vertices)
    val -= sum(dim_at(a, s) * dim_at(b, t) for _, s, t in q.arrows)
    return val


class LabeledQuiver:
    """A quiver together with a structure map to a base quiver.

    Labels must commute with source and target, and two arrows with the same
    label between the same ordered pair of vertices are forbidden.
    """

    def __init__(self, carrier: Quiver, base: Quiver,
                 vertex_labels: Dict[str, str], arrow_labels: Dict[str, str]):
        self.carrier = carrier
        self.base = base
        self.vertex_labels = dict(vertex_labels)
        self.arrow_labels = dict(arrow_labels)
        seen = set()
        for a, s, t in carrier.arrows:
            lab = self.arrow_labels.get(a)
            if lab is None or lab not in base.arrow_index:
                raise ValueError(f"carrier arrow {a} lacks a valid base label")
            if (self.vertex_labels.get(s) != base.src[lab]
                    or self.vertex_labels.get(t) != base.tgt[lab]):
                raise ValueError(f"labels of arrow {a} do not commute with src/tgt")
            key = (s, t, lab)
            if key in seen:
                raise ValueError(f"two arrows labeled {lab} between {s} and {t}")
            seen.add(key)
        for v in carrier.vertices:
            if self.vertex_labels.get(v) not in base.vertex_index:
                raise ValueError(f"carrier vertex {v} lacks a valid base label")

    def edge_count(self) -> int:
        return len(self.carrier.arrows)

    def vertex_count(self) -> int:
        return len(self.carrier.vertices)


def is_connected(vertices: Sequence[str], edges: Sequence[Tuple[str, str]]) -> bool:
    if not vertices:
        return True
    adj = {v: [] for v in vertices}
    for s, t in edges:
        adj[s].append(t)
        adj[t].append(s)
    seen = {vertices[0]}
    stack = [vertices[0]]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vertices)


def is_tree(lq: LabeledQuiver) -> bool:
    """True iff the carrier's underlying graph is connected with |E|=|V|-1."""
    verts = lq.carrier.vertices
    edges = [(s, t) for _, s, t in lq.carrier.arrows]
    return is_connected(verts, edges) and len(edges) == len(verts) - 1


def coefficient_quiver(rep, basis: Optional[Dict[str, List[str]]] = None) -> LabeledQuiver:
    """Coefficient quiver of a representation w.r.t. a homogeneous basis.

    The default basis is the standard one; vertex ``q``'s i-th basis vector
    becomes the carrier vertex ``"q.i"``. A labeled arrow b' -> b is drawn for
    every nonzero structure coefficient.
    """
    q = rep.quiver
    names: Dict[Tuple[str, int], str] = {}
    for v in q.vertices:
        d = rep.dims.get(v, 0)
        labels = basis.get(v) if basis else None
        if labels is not None and len(labels) != d:
            raise ValueError(f"basis at {v} has wrong size")
        for i in range(d):
            names[(v, i)] = labels[i] if labels else f"{v}.{i}"
    carrier_vertices = [names[(v, i)] for v in q.vertices for i in range(rep.dims.get(v, 0))]
    vertex_labels = {names[(v, i)]: v for (v, i) in names}
    carrier_arrows = []
    arrow_labels = {}
    for a, s, t in q.arrows:
        mat = rep.matrices[a]
        for j in range(mat.cols):
            for i in range(mat.rows):
                if mat.at(i, j) != rep.field.zero():
                    aid = f"{a}:{names[(s, j)]}->{names[(t, i)]}"
                    carrier_arrows.append((aid, names[(s, j)], names[(t, i)]))
                    arrow_labels[aid] = a
    carrier = Quiver(carrier_vertices, carrier_arrows)
    return LabeledQuiver(carrier, q, vertex_labels, arrow_labels)


# ---------------------------------------------------------------------------
# Universal abelian cover, truncated to a finite window
# ---------------------------------------------------------------------------

Character = Tuple[int, ...]  # indexed by base arrows, in base arrow order


class CoverWindow:
    """A finite subquiver of the universal abelian cover of a base quiver.

    Vertices are pairs (base vertex, character chi); the window contains all
    vertices within undirected graph distance `radius` of the chi = 0 shell,
    together with all induced arrows (a, chi): (s(a), chi) -> (t(a), chi+e_a).
    """

    def __init__(self, base: Quiver, radius: int, vertices: List[Tuple[str, Character]]):
        self.base = base
        self.radius = radius
        self.vertices = sorted(vertices, key=lambda vc: (base.vertex_index[vc[0]], vc[1]))
        self.vset = set(self.vertices)
        self.arrows: List[Tuple[Tuple[str, Character], Tuple[str, Character], Tuple[str, Character]]] = []
        for (v, chi) in self.vertices:
            for a in base.arrows_out_of(v):
                tgt = (base.tgt[a], chi_shift(chi, base.arrow_index[a], +1))
                if tgt in self.vset:
                    self.arrows.append(((a, chi), (v, chi), tgt))

    def vertex_id(self, v: str, chi: Character) -> str:
        return f"{v}@{','.join(str(c) for c in chi)}"

    def arrow_id(self, a: str, chi: Character) -> str:
        return f"{a}@{','.join(str(c) for c in chi)}"

    def as_quiver(self) -> Quiver:
        verts = [self.vertex_id(v, chi) for (v, chi) in self.vertices]
        arrows = [(self.arrow_id(a, chi), self.vertex_id(*s), self.vertex_id(*t))
                  for ((a, chi), s, t) in self.arrows]
        return Quiver(verts, arrows)

    def contains(self, v: str, chi: Character) -> bool:
        return (v, chi) in self.vset


def chi_shift(chi: Character, arrow_idx: int, delta: int) -> Character:
    out = list(chi)
    out[arrow_idx] += delta
    return tuple(out)


def cover_window(q: Quiver, radius: int) -> CoverWindow:
    """BFS window of the universal abelian cover around the chi = 0 shell."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    zero = tuple([0] * len(q.arrows))
    frontier = [(v, zero) for v in q.vertices]
    seen = set(frontier)
    for _ in range(radius):
        new = []
        for (v, chi) in frontier:
            for a in q.arrows_out_of(v):
                w = (q.tgt[a], chi_shift(chi, q.arrow_index[a], +1))
                if w not in seen:
                    seen.add(w)
                    new.append(w)
            for a in q.arrows_into(v):
                w = (q.src[a], chi_shift(chi, q.arrow_index[a], -1))
                if w not in seen:
                    seen.add(w)
                    new.append(w)
        frontier = new
    return CoverWindow(q, radius, sorted(seen))


def pushdown(cr) -> "Representation":
    """Push a cover representation down to the base quiver.

    The vertex space at q is the direct sum over fibers (q, chi), in the
    basis order recorded on the cover representation; each base arrow matrix
    is the block matrix placing the cover matrices per the arrow rule.
    """
    from .repspace import Representation
    from .exactfield import ExactMatrix

    base = cr.window.base
    field = cr.field
    order = cr.fiber_order()  # dict base vertex -> list of (chi, dim, offset)
    dims = {v: sum(d for (_, d, _) in order[v]) for v in base.vertices}
    offsets = {v: {chi: off for (chi, _, off) in order[v]} for v in base.vertices}
    fdim = {v: {chi: d for (chi, d, _) in order[v]} for v in base.vertices}
    mats = {}
    for a, s, t in base.arrows:
        mat = ExactMatrix.zeros(field, dims[t], dims[s])
        for (chi, d_s, off_s) in order[s]:
            tchi = chi_shift(chi, base.arrow_index[a], +1)
            if tchi in offsets[t]:
                blk = cr.matrix(a, chi)
                if blk is None:
                    continue
                off_t = offsets[t][tchi]
                for i in range(blk.rows):
                    for j in range(blk.cols):
                        mat.put(off_t + i, off_s + j, blk.at(i, j))
        mats[a] = mat
    return Representation(base, field, dims, mats)


# ---------------------------------------------------------------------------
# Compatible dimension vectors up to translation
# ---------------------------------------------------------------------------


def canonical_translate(placement: Dict[Tuple[str, Character], int],
                        base: Quiver) -> Tuple[Tuple[Tuple[int, Character, int], ...], Character]:
    """Canonical form of a cover dimension vector under character translation.

    Returns (key, eta) where key is the lexicographically least sorted tuple
    of (vertex index, translated chi, dim) over all translates eta that move
    some support character to zero.
    """
    support = list(placement.items())
    best = None
    best_eta = None
    for ((_, chi0), _) in support:
        key = tuple(sorted((base.vertex_index[v], tuple(c - e for c, e in zip(chi, chi0)), d)
                           for ((v, chi), d) in support))
        if best is None or key < best:
            best = key
            best_eta = chi0
    return best, best_eta


def compatible_dimvectors(w: CoverWindow, alpha: DimVector,
                          budget: int = 10 ** 6) -> List[Dict[Tuple[str, Character], int]]:
    """All cover dimension vectors with fiber sums alpha, one per translation class.

    Enumerates every distribution of alpha over the window's fibers (this is
    only feasible for small windows; the fixed-point search uses a connected
    growth enumeration instead). Emptiness is relative to the window: a class
    is reported only if some translate of it fits inside.
    """
    base = w.base
    check_dimvector(base, alpha)
    fibers = {v: [chi for (u, chi) in w.vertices if u == v] for v in base.vertices}
    counts = []
    total = 1
    for v in base.vertices:
        d = alpha.get(v, 0)
        n = len(fibers[v])
        if d > 0 and n == 0:
            return []
        c = _n_compositions(d, n)
        total *= max(c, 1)
        if total > budget:
            raise BudgetExceeded(f"window admits more than {budget} raw distributions")
        counts.append(c)
    seen = {}
    per_vertex = []
    for v in base.vertices:
        d = alpha.get(v, 0)
        per_vertex.append(list(_compositions(d, len(fibers[v]))))
    for combo in itertools.product(*per_vertex):
        placement = {}
        for v, comp in zip(base.vertices, combo):
            for chi, d in zip(fibers[v], comp):
                if d:
                    placement[(v, chi)] = d
        if not placement:
            if total_dim(alpha) == 0:
                return [dict()]
            continue
        key, eta = canonical_translate(placement, base)
        if key not in seen:
            canon = {(v, tuple(c - e for c, e in zip(chi, eta))): d
                     for ((v, chi), d) in placement.items()}
            seen[key] = canon
    return [seen[k] for k in sorted(seen)]


def _n_compositions(d: int, n: int) -> int:
    if d == 0:
        return 1
    if n == 0:
        return 0
    from math import comb
    return comb(d + n - 1, n - 1)


def _compositions(d: int, n: int):
    """All ways to write d as an ordered sum of n nonnegative integers."""
    if n == 0:
        if d == 0:
            yield ()
        return
    if n == 1:
        yield (d,)
        return
    for first in range(d + 1):
        for rest in _compositions(d - first, n - 1):
            yield (first,) + rest


class BudgetExceeded(Exception):
    """Raised when an enumeration would exceed its operation budget."""
