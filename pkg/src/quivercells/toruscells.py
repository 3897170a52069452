"""Slope stability, HN filtrations, Schur level, and the torus-action
machinery: weights from cover lifts, attracting cells, unipotent
straightening sections, and fixed-point enumeration.

Weight conventions. A one-parameter scaling assigns the integer gamma_a to
each arrow; a basis vector sitting over the cover vertex (q, chi) has weight
sum(gamma_a * chi_a). The attracting cell of a lift T fixes the tree entries,
freezes every coordinate whose weight difference falls below the arrow
weight, and leaves the rest as free deformation directions.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .exactfield import Echelon, ExactMatrix, FieldSpec, inverse
from .quivercore import (BudgetExceeded, Character, CoverWindow, DimVector, Quiver,
                         canonical_translate, chi_shift, cover_window, pushdown,
                         total_dim)
from .repspace import (RElement, Representation, all_points, assemble_d, deform,
                       hom_dim, point_count)
from .homalg import DEFAULT_BUDGET, UndecidedError, end_scan

StabilityWeights = Dict[str, int]


class GenericityError(Exception):
    """The scaling vector is too special for this lift; regenerate gamma so
    that no two distinct characters in play share a weight."""


class SectionError(Exception):
    """The straightening found no canonical section for some unipotent
    direction; the attracting cell is reported without a section."""


def slope(theta: StabilityWeights, alpha: DimVector) -> Fraction:
    d = total_dim(alpha)
    if d <= 0:
        raise ValueError("slope needs a nonzero dimension vector")
    num = sum(theta.get(v, 0) * k for v, k in alpha.items())
    return Fraction(num, d)


# ---------------------------------------------------------------------------
# Subrepresentation enumeration and stability
# ---------------------------------------------------------------------------


def _all_subspaces(field: FieldSpec, d: int) -> List[List[List]]:
    """Bases (lists of coordinate vectors) for all subspaces of F_q^d."""
    if not field.is_prime_field:
        raise ValueError("subspace enumeration needs a finite field")
    out = [[]]
    for r in range(1, d + 1):
        for pivots in itertools.combinations(range(d), r):
            free_cols = [[c for c in range(p + 1, d) if c not in pivots] for p in pivots]
            slots = sum(len(f) for f in free_cols)
            for values in itertools.product(range(field.p), repeat=slots):
                basis = []
                pos = 0
                for i, p in enumerate(pivots):
                    v = [field.zero()] * d
                    v[p] = field.one()
                    for c in free_cols[i]:
                        v[c] = values[pos]
                        pos += 1
                    basis.append(v)
                out.append(basis)
    return out


def _subspaces_containing(field: FieldSpec, d: int, forced: List[List]) -> List[List[List]]:
    """Bases of subspaces of F_q^d containing span(forced)."""
    ech = Echelon(field, d)
    for v in forced:
        ech.add(v)
    base_rows = ech.rows_sorted()
    w = len(base_rows)
    if w == d:
        return [base_rows]
    pivots = ech.pivots()
    free = [j for j in range(d) if j not in pivots]
    lifts = []
    for j in free:
        v = [field.zero()] * d
        v[j] = field.one()
        lifts.append(ech.reduce(v))
    out = []
    for quot_basis in _all_subspaces(field, len(free)):
        basis = list(base_rows)
        for qv in quot_basis:
            acc = [field.zero()] * d
            for c, lift in zip(qv, lifts):
                if c:
                    acc = [field.add(x, field.mul(c, y)) for x, y in zip(acc, lift)]
            basis.append(acc)
        out.append(basis)
    return out


def enumerate_subreps(m: Representation, budget: int = DEFAULT_BUDGET,
                      sink_dims_only: bool = False):
    """Yield subrepresentations as (dims, theta-independent data).

    Each item is (dimvector, bases) where bases maps vertex -> list of basis
    vectors; with sink_dims_only the bases at sinks are omitted and only the
    dimension is reported there (sound for slope scans when the weight at
    every sink is zero).
    """
    q = m.quiver
    order = q.topological_order()
    if order is None:
        yield from _enumerate_subreps_cyclic(m, budget)
        return
    sinks = {v for v in q.vertices if not q.arrows_out_of(v)}
    field = m.field

    state_basis: Dict[str, List[List]] = {}
    state_dims: Dict[str, int] = {}
    counter = {"ops": 0}

    def rec(idx: int):
        if idx == len(order):
            yield ({v: state_dims.get(v, 0) for v in q.vertices}, dict(state_basis))
            return
        v = order[idx]
        d = m.dims[v]
        forced = []
        for a in q.arrows_into(v):
            s = q.src[a]
            for b in state_basis.get(s, []):
                forced.append(m.matrices[a].mul_vector(b))
        if d == 0:
            state_basis[v] = []
            state_dims[v] = 0
            yield from rec(idx + 1)
            del state_basis[v], state_dims[v]
            return
        ech = Echelon(field, d)
        for x in forced:
            ech.add(x)
        if sink_dims_only and v in sinks:
            for extra in range(d - ech.rank + 1):
                state_basis[v] = []  # never consumed downstream
                state_dims[v] = ech.rank + extra
                counter["ops"] += 1
                if counter["ops"] > budget:
                    raise BudgetExceeded("subrepresentation scan exceeded budget")
                yield from rec(idx + 1)
                del state_basis[v], state_dims[v]
            return
        for basis in _subspaces_containing(field, d, forced):
            state_basis[v] = basis
            state_dims[v] = len(basis)
            counter["ops"] += 1
            if counter["ops"] > budget:
                raise BudgetExceeded("subrepresentation scan exceeded budget")
            yield from rec(idx + 1)
            del state_basis[v], state_dims[v]

    yield from rec(0)


def _enumerate_subreps_cyclic(m: Representation, budget: int):
    """Closure-filtered product enumeration; only for tiny cyclic quivers."""
    q = m.quiver
    field = m.field
    per_vertex = []
    total = 1
    for v in q.vertices:
        subs = _all_subspaces(field, m.dims[v])
        total *= len(subs)
        if total > budget:
            raise BudgetExceeded("subspace product exceeds budget")
        per_vertex.append(subs)
    for combo in itertools.product(*per_vertex):
        bases = {v: combo[i] for i, v in enumerate(q.vertices)}
        echs = {v: Echelon(field, m.dims[v]) for v in q.vertices}
        for v in q.vertices:
            for b in bases[v]:
                echs[v].add(b)
        ok = True
        for a, s, t in q.arrows:
            for b in bases[s]:
                img = m.matrices[a].mul_vector(b)
                if any(x != field.zero() for x in echs[t].reduce(img)):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield ({v: len(bases[v]) for v in q.vertices}, bases)


def is_stable(m: Representation, theta: StabilityWeights,
              budget: int = DEFAULT_BUDGET, sink_dims_only: bool = False) -> str:
    """Classify m as 'stable', 'semistable-only', or 'unstable'.

    Enumerates subrepresentations over the (finite) ground field and compares
    slopes; proper nonzero subrepresentations must lose strictly for
    stability, weakly for semistability.
    """
    if m.total_dim() == 0:
        raise ValueError("the zero representation has no slope")
    mu = slope(theta, m.dims)
    if sink_dims_only:
        q = m.quiver
        sinks = [v for v in q.vertices if not q.arrows_out_of(v)]
        if any(theta.get(v, 0) != 0 for v in sinks) or mu <= 0:
            sink_dims_only = False
    semistable = True
    stable = True
    for dims, _ in enumerate_subreps(m, budget, sink_dims_only=sink_dims_only):
        d = total_dim(dims)
        if d == 0 or d == m.total_dim():
            continue
        s = slope(theta, dims)
        if s > mu:
            return "unstable"
        if s == mu:
            stable = False
    return "stable" if stable else "semistable-only"


class HNData:
    """Harder-Narasimhan data: subquotients, slopes, cumulative dimensions."""

    def __init__(self, filtration: List[Representation], subquotients: List[Representation],
                 slopes: List[Fraction], cumulative_dims: List[DimVector]):
        self.filtration = filtration
        self.subquotients = subquotients
        self.slopes = slopes
        self.cumulative_dims = cumulative_dims
        self.length = len(subquotients)

    def __repr__(self):
        return f"HNData(length={self.length}, slopes={self.slopes})"


def _subrep_representation(m: Representation, bases: Dict[str, List[List]]) -> Representation:
    """The abstract representation carried by a closed family of subspaces."""
    from .exactfield import solve
    field = m.field
    dims = {v: len(bases.get(v, [])) for v in m.quiver.vertices}
    mats = {}
    for a, s, t in m.quiver.arrows:
        cols = []
        tmat = _basis_matrix(field, m.dims[t], bases.get(t, []))
        for b in bases.get(s, []):
            img = m.matrices[a].mul_vector(b)
            x = solve(tmat, img)
            if x is None:
                raise ValueError("subspaces are not closed under the arrow maps")
            cols.append(x)
        mat = ExactMatrix.zeros(field, dims[t], dims[s])
        for j, col in enumerate(cols):
            for i, x in enumerate(col):
                mat.put(i, j, x)
        mats[a] = mat
    return Representation(m.quiver, field, dims, mats)


def _basis_matrix(field: FieldSpec, ambient: int, basis: List[List]) -> ExactMatrix:
    out = ExactMatrix.zeros(field, ambient, len(basis))
    for j, b in enumerate(basis):
        for i, x in enumerate(b):
            out.put(i, j, x)
    return out


def _quotient_representation(m: Representation, bases: Dict[str, List[List]]
                             ) -> Tuple[Representation, Dict[str, List[List]]]:
    """Quotient by a subrepresentation, plus a lift of the quotient basis."""
    from .exactfield import solve
    field = m.field
    comp: Dict[str, List[List]] = {}
    full: Dict[str, ExactMatrix] = {}
    for v in m.quiver.vertices:
        d = m.dims[v]
        ech = Echelon(field, d)
        for b in bases.get(v, []):
            ech.add(b)
        lifts = []
        for j in range(d):
            e = [field.zero()] * d
            e[j] = field.one()
            if ech.add(e):
                lifts.append(e)
        comp[v] = lifts
        full[v] = _basis_matrix(field, d, bases.get(v, []) + lifts)
    dims = {v: len(comp[v]) for v in m.quiver.vertices}
    mats = {}
    for a, s, t in m.quiver.arrows:
        k = len(bases.get(t, []))
        mat = ExactMatrix.zeros(field, dims[t], dims[s])
        for j, b in enumerate(comp[s]):
            img = m.matrices[a].mul_vector(b)
            x = solve(full[t], img)
            for i in range(dims[t]):
                mat.put(i, j, x[k + i])
        mats[a] = mat
    return Representation(m.quiver, field, dims, mats), comp


def scss_and_hn(m: Representation, theta: StabilityWeights,
                budget: int = DEFAULT_BUDGET) -> HNData:
    """Iteratively extract the maximal-slope, maximal-dimension subrepresentation.

    Asserts at each stage that the extracted piece admits no morphisms into
    the quotient, and that the subquotient slopes strictly decrease.
    """
    field = m.field
    subquotients: List[Representation] = []
    slopes: List[Fraction] = []
    cumulative: List[DimVector] = []
    filtration: List[Representation] = []
    lift: Dict[str, List[List]] = {v: [] for v in m.quiver.vertices}
    current = m
    embed: Dict[str, List[List]] = {v: [[field.one() if i == j else field.zero()
                                         for i in range(m.dims[v])]
                                        for j in range(m.dims[v])]
                                    for v in m.quiver.vertices}
    while current.total_dim() > 0:
        best = None
        best_count = 0
        for dims, bases in enumerate_subreps(current, budget):
            d = total_dim(dims)
            if d == 0:
                continue
            s = slope(theta, dims)
            key = (s, d)
            if best is None or key > best[0]:
                best = (key, dims, bases)
                best_count = 1
            elif key == best[0]:
                best_count += 1
        if best_count != 1:
            raise AssertionError("maximal destabilizing subrepresentation is not unique")
        (_, dims, bases) = best
        piece = _subrep_representation(current, bases)
        quot, comp = _quotient_representation(current, bases)
        if quot.total_dim() > 0 and hom_dim(piece, quot) != 0:
            raise AssertionError("maximal destabilizing piece maps into its quotient")
        for v in m.quiver.vertices:
            for b in bases.get(v, []):
                acc = [field.zero()] * m.dims[v]
                for c, emb in zip(b, embed[v]):
                    if c != field.zero():
                        acc = [field.add(x, field.mul(c, y)) for x, y in zip(acc, emb)]
                lift[v].append(acc)
        subquotients.append(piece)
        slopes.append(slope(theta, dims))
        cumulative.append({v: len(lift[v]) for v in m.quiver.vertices})
        filtration.append(_subrep_representation(m, {v: list(lift[v]) for v in m.quiver.vertices}))
        embed = _compose_embeddings(m, embed, comp, field)
        current = quot
    for a, b in zip(slopes, slopes[1:]):
        if not a > b:
            raise AssertionError("HN slopes fail to decrease strictly")
    return HNData(filtration, subquotients, slopes, cumulative)


def _compose_embeddings(m, embed, comp, field):
    """Express quotient-complement coordinates in the ambient coordinates."""
    out = {}
    for v in m.quiver.vertices:
        rows = []
        for c_vec in comp[v]:
            acc = [field.zero()] * m.dims[v]
            for c, emb_vec in zip(c_vec, embed[v]):
                if c != field.zero():
                    acc = [field.add(x, field.mul(c, y)) for x, y in zip(acc, emb_vec)]
            rows.append(acc)
        out[v] = rows
    return out


def schur_level(q: Quiver, alpha: DimVector, p: int,
                budget: int = DEFAULT_BUDGET) -> int:
    """Max endomorphism dimension over indecomposable points of the root at F_p."""
    field = FieldSpec.prime(p)
    if point_count(q, alpha, field) > budget:
        raise UndecidedError("point enumeration exceeds budget")
    best = 0
    for rep in all_points(q, alpha, field):
        indec, _, _ = end_scan(rep, budget)
        if indec:
            best = max(best, assemble_d(rep, rep).hom_dim)
    return best


# ---------------------------------------------------------------------------
# Cover representations and weights
# ---------------------------------------------------------------------------

BASIS_ORDERS = ("weight_asc", "weight_desc", "chi_lex")


class CoverRepresentation:
    """A representation of a cover window with a one-parameter scaling.

    `fibers` maps (base vertex, chi) to a positive dimension; matrices are
    keyed by cover arrows (arrow, chi) and default to zero. The basis order
    within each base vertex is a display choice and defaults to ascending
    weight.
    """

    def __init__(self, window: CoverWindow, field: FieldSpec,
                 fibers: Dict[Tuple[str, Character], int],
                 matrices: Dict[Tuple[str, Character], ExactMatrix],
                 gamma: Dict[str, int], basis_order: str = "weight_asc"):
        if basis_order not in BASIS_ORDERS:
            raise ValueError(f"unknown basis order {basis_order!r}")
        self.window = window
        self.field = field
        self.fibers = {k: v for k, v in fibers.items() if v > 0}
        for (v, chi) in self.fibers:
            if not window.contains(v, chi):
                raise ValueError(f"fiber ({v},{chi}) lies outside the window")
        self.gamma = dict(gamma)
        self.basis_order = basis_order
        self.mats = {}
        base = window.base
        for (a, chi), mat in matrices.items():
            s = (base.src[a], chi)
            t = (base.tgt[a], chi_shift(chi, base.arrow_index[a], +1))
            if s not in self.fibers or t not in self.fibers:
                raise ValueError(f"cover arrow ({a},{chi}) misses the support")
            if mat.rows != self.fibers[t] or mat.cols != self.fibers[s]:
                raise ValueError(f"cover matrix ({a},{chi}) has the wrong shape")
            self.mats[(a, chi)] = mat

    def weight(self, chi: Character) -> int:
        base = self.window.base
        return sum(self.gamma[a] * chi[base.arrow_index[a]] for a in base.arrow_ids)

    def fiber_order(self) -> Dict[str, List[Tuple[Character, int, int]]]:
        """Per base vertex: (chi, dim, offset) triples in basis order."""
        base = self.window.base
        out: Dict[str, List[Tuple[Character, int, int]]] = {}
        for v in base.vertices:
            items = [(chi, d) for (u, chi), d in self.fibers.items() if u == v]
            if self.basis_order == "weight_asc":
                items.sort(key=lambda cd: (self.weight(cd[0]), cd[0]))
            elif self.basis_order == "weight_desc":
                items.sort(key=lambda cd: (-self.weight(cd[0]), cd[0]))
            else:
                items.sort(key=lambda cd: cd[0])
            triples = []
            off = 0
            for chi, d in items:
                triples.append((chi, d, off))
                off += d
            out[v] = triples
        return out

    def matrix(self, a: str, chi: Character) -> Optional[ExactMatrix]:
        return self.mats.get((a, chi))

    def support_quiver(self) -> Tuple[Quiver, Dict[str, Tuple[str, Character]]]:
        """The full subquiver of the cover on the support, with decoding map."""
        base = self.window.base
        verts = sorted(self.fibers, key=lambda vc: (base.vertex_index[vc[0]], vc[1]))
        vid = {vc: self.window.vertex_id(*vc) for vc in verts}
        arrows = []
        for (v, chi) in verts:
            for a in base.arrows_out_of(v):
                t = (base.tgt[a], chi_shift(chi, base.arrow_index[a], +1))
                if t in self.fibers:
                    arrows.append((self.window.arrow_id(a, chi), vid[(v, chi)], vid[t]))
        q = Quiver([vid[vc] for vc in verts], arrows)
        decode = {vid[vc]: vc for vc in verts}
        return q, decode

    def support_representation(self, field: Optional[FieldSpec] = None) -> Representation:
        """The cover representation as an honest representation of the support."""
        field = field or self.field
        q, decode = self.support_quiver()
        dims = {v: self.fibers[decode[v]] for v in q.vertices}
        mats = {}
        base = self.window.base
        for aid, s, t in q.arrows:
            a, chi_str = aid.split("@")
            chi = tuple(int(x) for x in chi_str.split(","))
            blk = self.mats.get((a, chi))
            if blk is not None:
                if field != self.field:
                    blk = ExactMatrix(field, blk.rows, blk.cols,
                                      [field.of(x) for x in blk.entries])
                mats[aid] = blk
        return Representation(q, field, dims, mats)

    def pushdown(self) -> Representation:
        return pushdown(self)


def weights_from_cover(cr: CoverRepresentation) -> Dict[str, List[int]]:
    """Per-basis-vector weights of the pushed-down representation."""
    out: Dict[str, List[int]] = {}
    for v, triples in cr.fiber_order().items():
        ws: List[int] = []
        for chi, d, _ in triples:
            ws.extend([cr.weight(chi)] * d)
        out[v] = ws
    return out


def basis_characters(cr: CoverRepresentation) -> Dict[str, List[Character]]:
    out: Dict[str, List[Character]] = {}
    for v, triples in cr.fiber_order().items():
        cs: List[Character] = []
        for chi, d, _ in triples:
            cs.extend([chi] * d)
        out[v] = cs
    return out


# ---------------------------------------------------------------------------
# Attracting cells
# ---------------------------------------------------------------------------


class AttractorData:
    """The lifted attracting cell of a torus fixed point.

    `v_coords` are the free deformation coordinates (arrow, row, col);
    `u_generators` the strictly weight-decreasing unipotent directions
    (vertex, row, col); the section, when present, is the subset of free
    coordinates surviving the straightening.
    """

    def __init__(self, cover: CoverRepresentation, lift: Representation,
                 weights: Dict[str, List[int]], v_coords: List[Tuple[str, int, int]],
                 u_generators: List[Tuple[str, int, int]],
                 section_coords: Optional[List[Tuple[str, int, int]]] = None):
        self.cover = cover
        self.lift = lift
        self.weights = weights
        self.v_coords = v_coords
        self.u_generators = u_generators
        self.u_psi_dim = len(u_generators)
        self.section_coords = section_coords

    @property
    def cell_dim(self) -> int:
        return len(self.v_coords) - self.u_psi_dim

    def v_basis(self) -> List[RElement]:
        return [RElement.standard_vector(self.lift, self.lift, a, i, j)
                for (a, i, j) in self.v_coords]

    def section_basis(self) -> List[RElement]:
        if self.section_coords is None:
            raise SectionError("no section has been computed")
        return [RElement.standard_vector(self.lift, self.lift, a, i, j)
                for (a, i, j) in self.section_coords]

    # -- display masks -------------------------------------------------------

    def _mask(self, free: Iterable[Tuple[str, int, int]]) -> Dict[str, List[List[str]]]:
        free = set(free)
        out = {}
        for a in self.lift.quiver.arrow_ids:
            mat = self.lift.matrices[a]
            rows = []
            for i in range(mat.rows):
                row = []
                for j in range(mat.cols):
                    if (a, i, j) in free:
                        row.append("*")
                    else:
                        row.append(str(mat.at(i, j)))
                rows.append(row)
            out[a] = rows
        return out

    def attracting_pattern(self) -> Dict[str, List[List[str]]]:
        return self._mask(self.v_coords)

    def section_pattern(self) -> Dict[str, List[List[str]]]:
        if self.section_coords is None:
            raise SectionError("no section has been computed")
        return self._mask(self.section_coords)

    def unipotent_pattern(self) -> Dict[str, List[List[str]]]:
        gens = set(self.u_generators)
        out = {}
        for v in self.lift.quiver.vertices:
            d = self.lift.dims[v]
            rows = []
            for i in range(d):
                rows.append(["*" if (v, i, j) in gens else ("1" if i == j else "0")
                             for j in range(d)])
            out[v] = rows
        return out

    def __repr__(self):
        return (f"AttractorData(|V|={len(self.v_coords)}, U_psi={self.u_psi_dim}, "
                f"cell_dim={self.cell_dim})")


def attracting_space(cr: CoverRepresentation) -> AttractorData:
    """Compute the lifted attracting cell of a fixed-point lift.

    A coordinate is free iff its weight difference strictly exceeds the arrow
    weight; coincidences at non-tree positions are legitimate only within a
    single fiber, otherwise the scaling is too special and must be
    regenerated.
    """
    lift = cr.pushdown()
    weights = weights_from_cover(cr)
    chis = basis_characters(cr)
    base = cr.window.base
    v_coords = []
    for a, s, t in base.arrows:
        mat = lift.matrices[a]
        ga = cr.gamma[a]
        aidx = base.arrow_index[a]
        for i in range(mat.rows):
            for j in range(mat.cols):
                delta = weights[t][i] - weights[s][j]
                entry = mat.at(i, j)
                if entry != cr.field.zero():
                    if delta != ga:
                        raise ValueError("lift is inconsistent with its own weights")
                    continue
                if delta > ga:
                    v_coords.append((a, i, j))
                elif delta == ga:
                    if chi_shift(chis[s][j], aidx, +1) != chis[t][i]:
                        raise GenericityError(
                            f"weight coincidence at arrow {a} ({i},{j}); "
                            "regenerate gamma with distinct character weights")
    u_generators = []
    for v in base.vertices:
        ws = weights[v]
        cs = chis[v]
        for i in range(len(ws)):
            for j in range(len(ws)):
                if i == j:
                    continue
                if ws[i] > ws[j]:
                    u_generators.append((v, i, j))
                elif ws[i] == ws[j] and cs[i] != cs[j]:
                    raise GenericityError(
                        f"two fibers over {v} share weight {ws[i]}; regenerate gamma")
    return AttractorData(cr, lift, weights, v_coords, u_generators)


def cell_section(ad: AttractorData) -> AttractorData:
    """Straighten the unipotent action into a canonical orbit section.

    Every unipotent generator must eliminate one free coordinate that it
    moves with an invertible coefficient at the base point. Generators are
    processed in decreasing weight and prefer the least coordinate by
    (row, col, arrow); later generators may displace earlier designations
    along augmenting paths. The unmatched free coordinates form the section.
    """
    lift = ad.lift
    base_q = lift.quiver
    arrow_pos = {a: k for k, a in enumerate(base_q.arrow_ids)}
    free = set(ad.v_coords)

    def gen_weight(gen):
        v, i, j = gen
        return ad.weights[v][i] - ad.weights[v][j]

    gens = sorted(ad.u_generators,
                  key=lambda g: (-gen_weight(g), base_q.vertex_index[g[0]], g[1], g[2]))
    moved_by = {}
    for (v, i, j) in gens:
        moved = []
        for a in base_q.arrows_into(v):
            mat = lift.matrices[a]
            for l in range(mat.cols):
                if mat.at(j, l) != lift.field.zero() and (a, i, l) in free:
                    moved.append((a, i, l))
        for a in base_q.arrows_out_of(v):
            mat = lift.matrices[a]
            for k in range(mat.rows):
                if mat.at(k, i) != lift.field.zero() and (a, k, j) in free:
                    moved.append((a, k, j))
        moved.sort(key=lambda c: (c[1], c[2], arrow_pos[c[0]]))
        moved_by[(v, i, j)] = moved

    assigned: dict = {}  # coordinate -> generator

    def augment(gen, banned):
        for coord in moved_by[gen]:
            if coord in banned:
                continue
            holder = assigned.get(coord)
            if holder is None or augment(holder, banned | {coord}):
                assigned[coord] = gen
                return True
        return False

    for gen in gens:
        if not augment(gen, frozenset()):
            raise SectionError(f"no canonical section: unipotent direction {gen} "
                               "cannot be matched to a free coordinate")
    section = [c for c in ad.v_coords if c not in assigned]
    return AttractorData(ad.cover, lift, ad.weights, ad.v_coords, ad.u_generators,
                         section_coords=section)


# ---------------------------------------------------------------------------
# Exhaustive section verification over a finite field
# ---------------------------------------------------------------------------


def _unipotent_elements(ad: AttractorData, field: FieldSpec):
    """All F_q points of the unipotent group, as per-vertex matrix dicts."""
    lift = ad.lift
    gens = ad.u_generators
    for coeffs in itertools.product(range(field.p), repeat=len(gens)):
        comps = {v: ExactMatrix.identity(field, lift.dims[v]) for v in lift.quiver.vertices}
        for c, (v, i, j) in zip(coeffs, gens):
            if c:
                comps[v].put(i, j, field.of(c))
        yield comps


def _att_points(ad: AttractorData, field: FieldSpec, coords) -> Iterable[Representation]:
    from .cellkit import _cast_rep
    base = _cast_rep(ad.lift, field)
    coords = list(coords)
    for values in itertools.product(range(field.p), repeat=len(coords)):
        lam = RElement.space_of(base, base)
        for c, (a, i, j) in zip(values, coords):
            if c:
                lam.blocks[a].put(i, j, field.of(c))
        yield deform(base, lam)


def verify_section(ad: AttractorData, q: int) -> bool:
    """Check over F_q that the unipotent orbits of the section tile the cell.

    Enumerates the full attracting space and the product of the unipotent
    group with the section; the two must agree as sets with no collisions.
    """
    if ad.section_coords is None:
        raise SectionError("compute a section first")
    field = FieldSpec.prime(q)
    att_keys = {tuple(tuple(r.matrices[a].entries) for a in r.quiver.arrow_ids)
                for r in _att_points(ad, field, ad.v_coords)}
    seen = set()
    for sec_point in _att_points(ad, field, ad.section_coords):
        for u in _unipotent_elements(ad, field):
            uinv = {v: inverse(u[v]) for v in sec_point.quiver.vertices}
            mats = {}
            for a, s, t in sec_point.quiver.arrows:
                mats[a] = u[t].mul(sec_point.matrices[a]).mul(uinv[s])
            key = tuple(tuple(mats[a].entries) for a in sec_point.quiver.arrow_ids)
            if key in seen:
                return False
            seen.add(key)
    return seen == att_keys


# ---------------------------------------------------------------------------
# Fixed-point enumeration
# ---------------------------------------------------------------------------


class FixedPointReport:
    def __init__(self, points: List[CoverRepresentation], radius: int,
                 skipped: List[str]):
        self.points = points
        self.radius = radius
        self.skipped = skipped

    def __len__(self):
        return len(self.points)


def _connected_placements(q: Quiver, alpha: DimVector, radius: int,
                          budget: int = DEFAULT_BUDGET):
    """Connected cover dimension vectors with fiber sums alpha, up to translation."""
    zero = tuple([0] * len(q.arrows))
    target = total_dim(alpha)
    seeds = set()
    for v in q.vertices:
        if alpha.get(v, 0) > 0:
            placement = {(v, zero): 1}
            key, eta = canonical_translate(placement, q)
            seeds.add(key)
    frontier = {s: _placement_from_key(s, q) for s in seeds}
    visited = set(seeds)
    results = []
    size = 1
    while frontier and size <= target:
        new_frontier = {}
        for key, placement in frontier.items():
            if size == target:
                fiber_sums = {}
                for (v, chi), d in placement.items():
                    fiber_sums[v] = fiber_sums.get(v, 0) + d
                if all(fiber_sums.get(v, 0) == alpha.get(v, 0) for v in q.vertices):
                    results.append(placement)
                continue
            for nxt in _grow(placement, q, alpha, radius):
                nkey, eta = canonical_translate(nxt, q)
                if nkey not in visited:
                    visited.add(nkey)
                    if len(visited) > budget:
                        raise BudgetExceeded("connected placement search exceeded budget")
                    canon = {(v, tuple(c - e for c, e in zip(chi, eta))): d
                             for ((v, chi), d) in nxt.items()}
                    new_frontier[nkey] = canon
        frontier = new_frontier
        size += 1
    return sorted(results, key=lambda pl: canonical_translate(pl, q)[0])


def _placement_from_key(key, q: Quiver):
    return {(q.vertices[vi], chi): d for (vi, chi, d) in key}


def _grow(placement, q: Quiver, alpha: DimVector, radius: int):
    fiber_sums: Dict[str, int] = {}
    for (v, chi), d in placement.items():
        fiber_sums[v] = fiber_sums.get(v, 0) + d
    for (v, chi), d in placement.items():
        if fiber_sums[v] < alpha.get(v, 0):
            out = dict(placement)
            out[(v, chi)] = d + 1
            yield out
    neighbors = set()
    for (v, chi) in placement:
        for a in q.arrows_out_of(v):
            neighbors.add((q.tgt[a], chi_shift(chi, q.arrow_index[a], +1)))
        for a in q.arrows_into(v):
            neighbors.add((q.src[a], chi_shift(chi, q.arrow_index[a], -1)))
    for (v, chi) in neighbors:
        if (v, chi) in placement:
            continue
        if fiber_sums.get(v, 0) >= alpha.get(v, 0):
            continue
        if sum(abs(c) for c in chi) > radius + total_dim(alpha):
            continue
        out = dict(placement)
        out[(v, chi)] = 1
        yield out


def _euler_hat(placement, q: Quiver) -> int:
    val = sum(d * d for d in placement.values())
    for (v, chi), d in placement.items():
        for a in q.arrows_out_of(v):
            t = (q.tgt[a], chi_shift(chi, q.arrow_index[a], +1))
            if t in placement:
                val -= d * placement[t]
    return val


def _support_edges(placement, q: Quiver):
    edges = []
    for (v, chi) in placement:
        for a in q.arrows_out_of(v):
            t = (q.tgt[a], chi_shift(chi, q.arrow_index[a], +1))
            if t in placement:
                edges.append(((a, chi), (v, chi), t))
    return edges


class _Unsupported(Exception):
    pass


def _exceptional_matrices(placement, q: Quiver, field: FieldSpec):
    """0/1 matrices of the unique indecomposable on a tree support.

    Vertices of dimension one get unit entries; a vertex of dimension m >= 2
    must be a local star with m+1 one-dimensional neighbors all on the same
    side, which receive the m unit columns (rows) and one all-ones column
    (row), in arrow order.
    """
    edges = _support_edges(placement, q)
    mats: Dict[Tuple[str, Character], ExactMatrix] = {}
    for ((a, chi), s, t) in edges:
        ds, dt = placement[s], placement[t]
        if ds == 1 and dt == 1:
            mats[(a, chi)] = ExactMatrix.from_rows(field, [[1]])
        elif ds > 1 and dt > 1:
            raise _Unsupported("adjacent higher-dimensional fibers")
    for center, m in placement.items():
        if m < 2:
            continue
        incoming = [e for e in edges if e[2] == center]
        outgoing = [e for e in edges if e[1] == center]
        if incoming and outgoing:
            raise _Unsupported("mixed-direction star center")
        side = incoming if incoming else outgoing
        if len(side) != m + 1:
            raise _Unsupported("star center valence differs from dim + 1")
        side.sort(key=lambda e: (q.arrow_index[e[0][0]], e[0][1]))
        for k, ((a, chi), s, t) in enumerate(side):
            if k < m:
                col = [[field.one() if i == k else field.zero()] for i in range(m)]
            else:
                col = [[field.one()] for _ in range(m)]
            mat = ExactMatrix(field, m, 1, [r[0] for r in col])
            mats[(a, chi)] = mat if incoming else mat.transpose()
    return mats


def fixed_points(q: Quiver, alpha: DimVector, theta: StabilityWeights,
                 gamma: Dict[str, int], radius: Optional[int] = None,
                 stability_prime: int = 101, field: Optional[FieldSpec] = None,
                 basis_order: str = "weight_asc",
                 budget: int = DEFAULT_BUDGET) -> FixedPointReport:
    """Enumerate torus fixed points of the stable locus as cover lifts.

    Candidates are connected cover dimension vectors compatible with the
    root; those with self-pairing one and tree support get their unique
    unit-entry representative, which is kept when it is Schurian and its
    stability verifies over a large prime field. Results are complete within
    the stated radius only.
    """
    import random as _random

    field = field or FieldSpec.rationals()
    if radius is None:
        radius = total_dim(alpha)
    fp = FieldSpec.prime(stability_prime)
    rng = _random.Random(20240 + stability_prime)
    skipped: List[str] = []
    points: List[CoverRepresentation] = []
    for placement in _connected_placements(q, alpha, radius, budget):
        if _euler_hat(placement, q) != 1:
            continue
        edges = _support_edges(placement, q)
        if len(edges) != len(placement) - 1:
            skipped.append(f"{placement}: exceptional class on a non-tree support "
                           "is unsupported")
            continue
        max_norm = max(sum(abs(c) for c in chi) for (_, chi) in placement)
        window = cover_window(q, max(radius, max_norm))
        try:
            mats = _exceptional_matrices(placement, q, field)
            cr = CoverRepresentation(window, field, placement, mats, gamma,
                                     basis_order=basis_order)
            support = cr.support_representation()
            if assemble_d(support, support).hom_dim != 1:
                continue
            support_p = cr.support_representation(fp)
        except _Unsupported:
            # no sparse representative; a Schurian generic sample over F_p is
            # isomorphic to the unique indecomposable of this real root
            cr, support_p = _generic_representative(placement, q, window, gamma,
                                                    basis_order, fp, rng)
            if cr is None:
                skipped.append(f"{placement}: generic samples non-Schurian; excluded")
                continue
        _, decode = cr.support_quiver()
        theta_hat = {v: theta.get(decode[v][0], 0) for v in support_p.quiver.vertices}
        try:
            status = is_stable(support_p, theta_hat, budget=budget, sink_dims_only=True)
        except BudgetExceeded:
            skipped.append(f"{placement}: stability check over budget")
            continue
        if status != "stable":
            continue
        points.append(cr)
    return FixedPointReport(points, radius, skipped)


def _generic_representative(placement, q: Quiver, window, gamma, basis_order,
                            fp: FieldSpec, rng, samples: int = 4):
    """A random Schurian representative of a real root on a cover support."""
    edges = _support_edges(placement, q)
    for _ in range(samples):
        mats = {}
        for ((a, chi), s, t) in edges:
            ds, dt = placement[s], placement[t]
            mats[(a, chi)] = ExactMatrix(fp, dt, ds,
                                         [rng.randrange(fp.p) for _ in range(dt * ds)])
        cr = CoverRepresentation(window, fp, placement, mats, gamma,
                                 basis_order=basis_order)
        support_p = cr.support_representation()
        if assemble_d(support_p, support_p).hom_dim == 1:
            return cr, support_p
    return None, None


def poincare(cells: Sequence) -> List[int]:
    """Coefficient list of the Poincare polynomial: one q^{2 dim} per cell."""
    dims = []
    for c in cells:
        dims.append(c.cell_dim if isinstance(c, AttractorData) else int(c))
    if not dims:
        return [0]
    out = [0] * (2 * max(dims) + 1)
    for d in dims:
        out[2 * d] += 1
    return out
