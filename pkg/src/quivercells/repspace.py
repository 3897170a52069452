"""Representations, the spaces R(N,M), the defect map d_{N,M} and its
canonical coset reduction, representing (tree-shaped) bases, extensions and
deformations.

Conventions. Matrices act on column vectors: the matrix of an arrow a has
dims(target) rows and dims(source) columns. An element f of R(N,M) collects
one block per arrow, f_a : N_{s(a)} -> M_{t(a)}, flattened in canonical
(arrow, row, col) order. The short exact sequence attached to f has middle
term with vertex spaces M_q (+) N_q, M first.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .exactfield import Echelon, ExactMatrix, FieldSpec, kernel_basis, select_independent_mod
from .quivercore import DimVector, Quiver, check_dimvector, euler_form


class Representation:
    """A quiver representation: one exact matrix per arrow."""

    def __init__(self, quiver: Quiver, field: FieldSpec, dims: DimVector,
                 matrices: Dict[str, ExactMatrix]):
        check_dimvector(quiver, dims)
        self.quiver = quiver
        self.field = field
        self.dims = {v: dims.get(v, 0) for v in quiver.vertices}
        self.matrices = {}
        for a, s, t in quiver.arrows:
            m = matrices.get(a)
            if m is None:
                m = ExactMatrix.zeros(field, self.dims[t], self.dims[s])
            if m.rows != self.dims[t] or m.cols != self.dims[s]:
                raise ValueError(f"matrix for arrow {a} has shape {m.rows}x{m.cols}, "
                                 f"expected {self.dims[t]}x{self.dims[s]}")
            if m.field != field:
                raise ValueError(f"matrix for arrow {a} lies over the wrong field")
            self.matrices[a] = m

    @classmethod
    def from_entries(cls, quiver: Quiver, field: FieldSpec, dims: DimVector,
                     entries: Dict[str, Sequence[Sequence]]) -> "Representation":
        mats = {a: ExactMatrix.from_rows(field, rows) for a, rows in entries.items()}
        return cls(quiver, field, dims, mats)

    @classmethod
    def zero(cls, quiver: Quiver, field: FieldSpec, dims: DimVector) -> "Representation":
        return cls(quiver, field, dims, {})

    @classmethod
    def simple(cls, quiver: Quiver, field: FieldSpec, vertex: str) -> "Representation":
        return cls.zero(quiver, field, {vertex: 1})

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def support(self) -> List[str]:
        return [v for v in self.quiver.vertices if self.dims[v] > 0]

    def key(self) -> tuple:
        """Hashable structural key (used for orbit canonical forms)."""
        return tuple((a, tuple(self.matrices[a].entries)) for a in self.quiver.arrow_ids)

    def __eq__(self, other):
        return (isinstance(other, Representation) and self.quiver == other.quiver
                and self.field == other.field and self.dims == other.dims
                and all(self.matrices[a] == other.matrices[a] for a in self.quiver.arrow_ids))

    def __repr__(self):
        dims = ",".join(str(self.dims[v]) for v in self.quiver.vertices)
        return f"Representation(dims=({dims}) over {self.field})"


class RElement:
    """An element of R(N,M): one block per arrow, N the source, M the target."""

    def __init__(self, quiver: Quiver, field: FieldSpec,
                 source_dims: DimVector, target_dims: DimVector,
                 blocks: Optional[Dict[str, ExactMatrix]] = None):
        self.quiver = quiver
        self.field = field
        self.source_dims = {v: source_dims.get(v, 0) for v in quiver.vertices}
        self.target_dims = {v: target_dims.get(v, 0) for v in quiver.vertices}
        self.blocks = {}
        blocks = blocks or {}
        for a, s, t in quiver.arrows:
            blk = blocks.get(a)
            r, c = self.target_dims[t], self.source_dims[s]
            if blk is None:
                blk = ExactMatrix.zeros(field, r, c)
            if blk.rows != r or blk.cols != c:
                raise ValueError(f"block for arrow {a} has shape {blk.rows}x{blk.cols}, "
                                 f"expected {r}x{c}")
            self.blocks[a] = blk

    # -- shapes ----------------------------------------------------------------

    @classmethod
    def space_of(cls, n: Representation, m: Representation) -> "RElement":
        """The zero element of R(N,M) for two representations."""
        _check_compatible(n, m)
        return cls(n.quiver, n.field, n.dims, m.dims)

    def same_space(self, other: "RElement") -> bool:
        return (self.quiver == other.quiver and self.field == other.field
                and self.source_dims == other.source_dims
                and self.target_dims == other.target_dims)

    def coords(self) -> List[Tuple[str, int, int]]:
        """Flat coordinate labels in canonical (arrow, row, col) order."""
        out = []
        for a, s, t in self.quiver.arrows:
            for i in range(self.target_dims[t]):
                for j in range(self.source_dims[s]):
                    out.append((a, i, j))
        return out

    def dim(self) -> int:
        return sum(self.target_dims[t] * self.source_dims[s] for _, s, t in self.quiver.arrows)

    # -- vector structure --------------------------------------------------------

    def flatten(self) -> List:
        out = []
        for a, _, _ in self.quiver.arrows:
            out.extend(self.blocks[a].entries)
        return out

    def with_flat(self, vec: Sequence) -> "RElement":
        out = RElement(self.quiver, self.field, self.source_dims, self.target_dims)
        pos = 0
        for a, _, _ in self.quiver.arrows:
            blk = out.blocks[a]
            n = blk.rows * blk.cols
            blk.entries = [self.field.of(x) for x in vec[pos:pos + n]]
            pos += n
        return out

    def add(self, other: "RElement") -> "RElement":
        if not self.same_space(other):
            raise ValueError("RElement shape mismatch")
        return self.with_flat([self.field.add(a, b)
                               for a, b in zip(self.flatten(), other.flatten())])

    def scale(self, c) -> "RElement":
        c = self.field.of(c)
        return self.with_flat([self.field.mul(c, a) for a in self.flatten()])

    def is_zero(self) -> bool:
        z = self.field.zero()
        return all(x == z for x in self.flatten())

    @classmethod
    def standard_vector(cls, n: Representation, m: Representation,
                        arrow: str, row: int, col: int) -> "RElement":
        out = cls.space_of(n, m)
        out.blocks[arrow] = ExactMatrix.unit(n.field, out.blocks[arrow].rows,
                                             out.blocks[arrow].cols, row, col)
        return out

    @classmethod
    def standard_basis(cls, n: Representation, m: Representation) -> List["RElement"]:
        zero = cls.space_of(n, m)
        out = []
        for (a, i, j) in zero.coords():
            out.append(cls.standard_vector(n, m, a, i, j))
        return out

    def __eq__(self, other):
        return isinstance(other, RElement) and self.same_space(other) \
            and self.flatten() == other.flatten()

    def __hash__(self):
        return hash((tuple(self.flatten()),))

    def __repr__(self):
        nz = [(a, i, j, self.blocks[a].at(i, j)) for (a, i, j) in self.coords()
              if self.blocks[a].at(i, j) != self.field.zero()]
        return f"RElement({nz})"


def _check_compatible(n: Representation, m: Representation):
    if n.quiver != m.quiver:
        raise ValueError("representations live over different quivers")
    if n.field != m.field:
        raise ValueError("representations live over different fields")


# ---------------------------------------------------------------------------
# The defect map d_{N,M} and Ext presentations
# ---------------------------------------------------------------------------


class ExtPresentation:
    """Assembled data of the map d_{N,M} with a fixed reduction realizing the
    projection of R(N,M) onto Ext(N,M).

    The image of d is stored echelonized; `pi_reduce` zeroes the coordinates
    of an element at the image pivots, producing the unique canonical coset
    representative. Coordinates of Ext classes are read off at the non-pivot
    positions.
    """

    def __init__(self, source: Representation, target: Representation):
        _check_compatible(source, target)
        self.source = source
        self.target = target
        self.quiver = source.quiver
        self.field = source.field
        self._zero = RElement.space_of(source, target)
        self.d_matrix = self._assemble()
        self._image = Echelon(self.field, self._zero.dim())
        for j in range(self.d_matrix.cols):
            self._image.add([self.d_matrix.at(i, j) for i in range(self.d_matrix.rows)])
        self.image_pivots = self._image.pivots()
        rank = self._image.rank
        self.hom_dim = self.d_matrix.cols - rank
        self.ext_dim = self.d_matrix.rows - rank
        expected = euler_form(self.quiver, source.dims, target.dims)
        if self.hom_dim - self.ext_dim != expected:
            raise AssertionError("Euler form identity violated: internal error")
        self.free_positions = [j for j in range(self._zero.dim()) if j not in set(self.image_pivots)]

    def _assemble(self) -> ExactMatrix:
        n, m = self.source, self.target
        cols = []
        for q in self.quiver.vertices:
            dn, dm = n.dims[q], m.dims[q]
            for i in range(dm):
                for j in range(dn):
                    img = {}
                    for a in self.quiver.arrow_ids:
                        s, t = self.quiver.src[a], self.quiver.tgt[a]
                        blk = ExactMatrix.zeros(self.field, m.dims[t], n.dims[s])
                        if t == q:
                            # (f_q N_a) block: row i picks up row j of N_a
                            for c in range(n.dims[s]):
                                blk.put(i, c, n.matrices[a].at(j, c))
                        if s == q:
                            # -(M_a f_q): column j picks up -column i of M_a
                            for r in range(m.dims[t]):
                                blk.put(r, j, self.field.sub(blk.at(r, j),
                                                             m.matrices[a].at(r, i)))
                        img[a] = blk
                    cols.append(RElement(self.quiver, self.field, n.dims, m.dims, img).flatten())
        rows = self._zero.dim()
        out = ExactMatrix.zeros(self.field, rows, len(cols))
        for j, col in enumerate(cols):
            for i, x in enumerate(col):
                out.put(i, j, x)
        return out

    def hom_column_labels(self) -> List[Tuple[str, int, int]]:
        out = []
        for q in self.quiver.vertices:
            for i in range(self.target.dims[q]):
                for j in range(self.source.dims[q]):
                    out.append((q, i, j))
        return out

    def pi_reduce(self, f: RElement) -> RElement:
        """Canonical representative of f modulo im(d): image pivots zeroed."""
        if not f.same_space(self._zero):
            raise ValueError("element lies in a different R(N,M)")
        return f.with_flat(self._image.reduce(f.flatten()))

    def ext_coords(self, f: RElement) -> Tuple:
        """Coordinates of the Ext class of f, read at the free positions."""
        reduced = self._image.reduce(f.flatten())
        return tuple(reduced[j] for j in self.free_positions)

    def image_subspace_rows(self) -> List[List]:
        return self._image.rows_sorted()


def assemble_d(n: Representation, m: Representation) -> ExtPresentation:
    """Build the presentation of Hom(N,M) and Ext(N,M) from the defect map."""
    return ExtPresentation(n, m)


def hom_basis(n: Representation, m: Representation) -> List[Dict[str, ExactMatrix]]:
    """A basis of the morphism space, as per-vertex matrix tuples."""
    ep = assemble_d(n, m)
    labels = ep.hom_column_labels()
    out = []
    for vec in kernel_basis(ep.d_matrix):
        comps = {q: ExactMatrix.zeros(n.field, m.dims[q], n.dims[q]) for q in n.quiver.vertices}
        for (q, i, j), x in zip(labels, vec):
            comps[q].put(i, j, x)
        out.append(comps)
    return out


def hom_dim(n: Representation, m: Representation) -> int:
    return assemble_d(n, m).hom_dim


class RepresentedBasis:
    """Result of a greedy representing-basis selection."""

    def __init__(self, indices: List[int], elements: List[RElement], complete: bool,
                 ext_dim: int):
        self.indices = indices
        self.elements = elements
        self.complete = complete
        self.ext_dim = ext_dim

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)


def represents_subspace(ep: ExtPresentation, basis: List[RElement]) -> bool:
    """Whether the span of the given elements injects into the Ext quotient.

    True iff the elements are independent and their span meets the image of
    the defect map trivially, i.e. the projection restricted to the span is a
    bijection onto its image. This is the pointwise universality check: a
    subspace is universal for a family of deformations when this holds for
    every parameter pair.
    """
    ech = Echelon(ep.field, ep._zero.dim())
    for row in ep.image_subspace_rows():
        ech.add(row)
    return all(ech.add(el.flatten()) for el in basis)


def represent_basis(ep: ExtPresentation, candidates: Optional[List[RElement]] = None
                    ) -> RepresentedBasis:
    """Greedily select candidates whose classes form a basis of Ext(N,M).

    With the default candidates (all standard basis vectors in (arrow, row,
    col) order) and homogeneous tree bases, the selection is a tree-shaped
    basis whenever one exists among standard vectors.
    """
    if candidates is None:
        candidates = RElement.standard_basis(ep.source, ep.target)
    vectors = [c.flatten() for c in candidates]
    chosen = select_independent_mod(vectors, ep.image_subspace_rows(), ep.field)
    complete = len(chosen) == ep.ext_dim
    return RepresentedBasis(chosen, [candidates[i] for i in chosen], complete, ep.ext_dim)


# ---------------------------------------------------------------------------
# Extensions and deformations
# ---------------------------------------------------------------------------


def deform(m: Representation, lam: RElement) -> Representation:
    """The deformation of m by a self-parameter: entrywise sum per arrow."""
    if lam.source_dims != m.dims or lam.target_dims != m.dims:
        raise ValueError("deformation parameter does not lie in R(M,M)")
    mats = {a: m.matrices[a].add(lam.blocks[a]) for a in m.quiver.arrow_ids}
    return Representation(m.quiver, m.field, m.dims, mats)


def middle_term(m: Representation, n: Representation, tau: RElement,
                lam: Optional[RElement] = None, mu: Optional[RElement] = None
                ) -> Representation:
    """Middle term of the sequence attached to (tau, lambda, mu).

    Block upper-triangular: the sub is the deformation of m, the quotient the
    deformation of n, and tau sits in the connecting block.
    """
    _check_compatible(m, n)
    if lam is None:
        lam = RElement.space_of(m, m)
    if mu is None:
        mu = RElement.space_of(n, n)
    if tau.source_dims != n.dims or tau.target_dims != m.dims:
        raise ValueError("tau must lie in R(N,M)")
    m_def = deform(m, lam)
    n_def = deform(n, mu)
    dims = {v: m.dims[v] + n.dims[v] for v in m.quiver.vertices}
    mats = {}
    for a, s, t in m.quiver.arrows:
        zero_low = ExactMatrix.zeros(m.field, n.dims[t], m.dims[s])
        mats[a] = ExactMatrix.block(m.field, [[m_def.matrices[a], tau.blocks[a]],
                                              [zero_low, n_def.matrices[a]]])
    return Representation(m.quiver, m.field, dims, mats)


def canonical_maps(m: Representation, n: Representation, b: Representation):
    """Inclusion of the sub and projection onto the quotient of a middle term.

    Returned as per-vertex matrix dicts (validated morphisms are built by
    homalg.Morphism on demand).
    """
    incl = {}
    proj = {}
    for q in m.quiver.vertices:
        dm, dn = m.dims[q], n.dims[q]
        inc = ExactMatrix.zeros(m.field, dm + dn, dm)
        for i in range(dm):
            inc.put(i, i, m.field.one())
        pr = ExactMatrix.zeros(m.field, dn, dm + dn)
        for i in range(dn):
            pr.put(i, dm + i, m.field.one())
        incl[q] = inc
        proj[q] = pr
    return incl, proj


def direct_sum(a: Representation, b: Representation) -> Representation:
    _check_compatible(a, b)
    dims = {v: a.dims[v] + b.dims[v] for v in a.quiver.vertices}
    mats = {}
    for ar, s, t in a.quiver.arrows:
        z1 = ExactMatrix.zeros(a.field, a.dims[t], b.dims[s])
        z2 = ExactMatrix.zeros(a.field, b.dims[t], a.dims[s])
        mats[ar] = ExactMatrix.block(a.field, [[a.matrices[ar], z1], [z2, b.matrices[ar]]])
    return Representation(a.quiver, a.field, dims, mats)


def direct_power(m: Representation, d: int) -> Representation:
    out = Representation.zero(m.quiver, m.field, {v: 0 for v in m.quiver.vertices})
    for _ in range(d):
        out = direct_sum(out, m)
    return out


def restrict(m: Representation, sub: Sequence[str]) -> Representation:
    """Restriction to the full subquiver on a vertex subset (zero elsewhere)."""
    keep = set(sub)
    dims = {v: (m.dims[v] if v in keep else 0) for v in m.quiver.vertices}
    mats = {}
    for a, s, t in m.quiver.arrows:
        if s in keep and t in keep:
            mats[a] = m.matrices[a]
    return Representation(m.quiver, m.field, dims, mats)


# ---------------------------------------------------------------------------
# Block embeddings along a middle-term decomposition
# ---------------------------------------------------------------------------


def embed_relement(f: RElement, m_dims: DimVector, n_dims: DimVector,
                   src_part: str, tgt_part: str,
                   target_is_b: bool = True, source_is_b: bool = True) -> RElement:
    """Embed f in R(X,Y) into R(B,B') where B decomposes as [M | N] per vertex.

    src_part / tgt_part name which summand ('M' or 'N') X and Y are; setting
    target_is_b / source_is_b to False leaves that side undecomposed (used for
    embeddings into R(B,N) and R(B,M)).
    """
    q = f.quiver
    fld = f.field
    b_dims = {v: m_dims.get(v, 0) + n_dims.get(v, 0) for v in q.vertices}
    sdims = b_dims if source_is_b else f.source_dims
    tdims = b_dims if target_is_b else f.target_dims
    out = RElement(q, fld, sdims, tdims)
    for a, s, t in q.arrows:
        blk = f.blocks[a]
        roff = 0
        if target_is_b and tgt_part == "N":
            roff = m_dims.get(t, 0)
        coff = 0
        if source_is_b and src_part == "N":
            coff = m_dims.get(s, 0)
        dest = out.blocks[a]
        for i in range(blk.rows):
            for j in range(blk.cols):
                dest.put(roff + i, coff + j, blk.at(i, j))
    return out


def random_representation(quiver: Quiver, field: FieldSpec, dims: DimVector,
                          rng) -> Representation:
    """A random representation with entries sampled uniformly at desk scale."""
    mats = {}
    for a, s, t in quiver.arrows:
        r, c = dims.get(t, 0), dims.get(s, 0)
        if field.is_prime_field:
            entries = [rng.randrange(field.p) for _ in range(r * c)]
        else:
            entries = [field.of(rng.randint(-3, 3)) for _ in range(r * c)]
        mats[a] = ExactMatrix(field, r, c, [field.of(x) for x in entries])
    return Representation(quiver, field, dims, mats)


def all_points(quiver: Quiver, dims: DimVector, field: FieldSpec,
               start: int = 0, step: int = 1):
    """Iterate representations of a fixed dimension vector over F_q.

    Points are indexed by an odometer over matrix entries in canonical
    (arrow, row, col) order; `start`/`step` give resumable sharding with a
    deterministic, partition-independent union.
    """
    if not field.is_prime_field:
        raise ValueError("point enumeration needs a finite field")
    shapes = [(a, dims.get(t, 0), dims.get(s, 0)) for a, s, t in quiver.arrows]
    n_entries = sum(r * c for _, r, c in shapes)
    total = field.p ** n_entries
    idx = start
    while idx < total:
        digits = []
        rem = idx
        for _ in range(n_entries):
            digits.append(rem % field.p)
            rem //= field.p
        mats = {}
        pos = 0
        for a, r, c in shapes:
            mats[a] = ExactMatrix(field, r, c, digits[pos:pos + r * c])
            pos += r * c
        yield Representation(quiver, field, dims, mats)
        idx += step


def point_count(quiver: Quiver, dims: DimVector, field: FieldSpec) -> int:
    n_entries = sum(dims.get(t, 0) * dims.get(s, 0) for _, s, t in quiver.arrows)
    return field.p ** n_entries
