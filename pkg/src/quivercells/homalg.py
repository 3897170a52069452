"""Morphism calculus: interface maps between extensions, connecting
homomorphisms, self-extension basis assembly for a middle term, and the
finite-field oracles for isomorphism, (absolute) indecomposability and
automorphism counts.

Indecomposability over a finite field is decided by exhaustive endomorphism
analysis: every element of a local endomorphism ring is a unit or nilpotent,
and the only idempotents are 0 and 1. This is slow but provably correct at
desk scale, which is the point.
"""

from __future__ import annotations

import itertools
from typing import Dict, List, Optional, Tuple

from .exactfield import Echelon, ExactMatrix, invertible, select_independent_mod
from .repspace import (ExtPresentation, RElement, Representation, assemble_d,
                       canonical_maps, embed_relement, hom_basis, middle_term,
                       represent_basis)

DEFAULT_BUDGET = 10 ** 7


class UndecidedError(Exception):
    """An oracle ran out of budget; the result is unknown, never wrong."""


class Morphism:
    """A morphism of representations: per-vertex matrices commuting with arrows."""

    def __init__(self, source: Representation, target: Representation,
                 components: Dict[str, ExactMatrix], check: bool = True):
        self.source = source
        self.target = target
        self.components = components
        if check:
            for q in source.quiver.vertices:
                comp = components[q]
                if comp.rows != target.dims[q] or comp.cols != source.dims[q]:
                    raise ValueError(f"component at {q} has the wrong shape")
            for a, s, t in source.quiver.arrows:
                lhs = components[t].mul(source.matrices[a])
                rhs = target.matrices[a].mul(components[s])
                if lhs != rhs:
                    raise ValueError(f"components do not commute with arrow {a}")

    @classmethod
    def identity(cls, rep: Representation) -> "Morphism":
        comps = {q: ExactMatrix.identity(rep.field, rep.dims[q]) for q in rep.quiver.vertices}
        return cls(rep, rep, comps, check=False)

    def compose(self, inner: "Morphism") -> "Morphism":
        """self after inner."""
        comps = {q: self.components[q].mul(inner.components[q])
                 for q in self.source.quiver.vertices}
        return Morphism(inner.source, self.target, comps, check=False)

    def is_iso(self) -> bool:
        return all(invertible(self.components[q]) for q in self.source.quiver.vertices)

    def flatten(self) -> List:
        out = []
        for q in self.source.quiver.vertices:
            out.extend(self.components[q].entries)
        return out


def inclusion_of_sub(m: Representation, n: Representation, b: Representation) -> Morphism:
    incl, _ = canonical_maps(m, n, b)
    return Morphism(m, b, incl)


def projection_onto_quotient(m: Representation, n: Representation, b: Representation) -> Morphism:
    _, proj = canonical_maps(m, n, b)
    return Morphism(b, n, proj)


def hom_basis_morphisms(n: Representation, m: Representation) -> List[Morphism]:
    return [Morphism(n, m, comps, check=False) for comps in hom_basis(n, m)]


# ---------------------------------------------------------------------------
# Interface map of a pair of extensions
# ---------------------------------------------------------------------------


def theta_map(b: Representation, b2: Representation, incl: Morphism, proj: Morphism
              ) -> ExactMatrix:
    """Matrix of Hom(B,B') -> Hom(sub, quotient'), phi -> proj . phi . incl.

    Columns run over a basis of Hom(B,B'); rows over the flattened coordinate
    space of vertexwise maps sub_q -> quotient'_q. The map is zero iff the
    matrix is zero.
    """
    if incl.target is not b and incl.target != b:
        raise ValueError("inclusion must land in the first middle term")
    if proj.source is not b2 and proj.source != b2:
        raise ValueError("projection must start at the second middle term")
    basis = hom_basis_morphisms(b, b2)
    sub, quot = incl.source, proj.target
    rows = sum(quot.dims[q] * sub.dims[q] for q in b.quiver.vertices)
    out = ExactMatrix.zeros(b.field, rows, len(basis))
    for j, phi in enumerate(basis):
        comp = proj.compose(phi).compose(incl)
        for i, x in enumerate(comp.flatten()):
            out.put(i, j, x)
    return out


# ---------------------------------------------------------------------------
# Connecting homomorphisms
# ---------------------------------------------------------------------------


def connecting_hom(l: Representation, n: Representation, seq_f: RElement,
                   ep_lm: ExtPresentation) -> ExactMatrix:
    """Matrix of Hom(L,N) -> Ext(L,M) for the sequence with class seq_f in R(N,M).

    The map is postcomposition with the defining tuple followed by the
    canonical projection; columns are hom_basis(L,N) in order, rows are the
    canonical Ext coordinates of ExtPresentation(L,M).
    """
    if ep_lm.source is not l and ep_lm.source != l:
        raise ValueError("ext presentation must have source L")
    m = ep_lm.target
    basis = hom_basis(l, n)
    cols = []
    for g in basis:
        blocks = {}
        for a, s, t in l.quiver.arrows:
            blocks[a] = seq_f.blocks[a].mul(g[s])
        img = RElement(l.quiver, l.field, l.dims, m.dims, blocks)
        cols.append(ep_lm.ext_coords(img))
    out = ExactMatrix.zeros(l.field, ep_lm.ext_dim, len(cols))
    for j, col in enumerate(cols):
        for i, x in enumerate(col):
            out.put(i, j, x)
    return out


def connecting_hom_dual(l: Representation, m: Representation, seq_f: RElement,
                        ep_nl: ExtPresentation) -> ExactMatrix:
    """Matrix of Hom(M,L) -> Ext(N,L): precomposition with the defining tuple."""
    n_dims = seq_f.source_dims
    if ep_nl.source.dims != n_dims:
        raise ValueError("ext presentation must have source N")
    basis = hom_basis(m, l)
    cols = []
    for g in basis:
        blocks = {}
        for a, s, t in l.quiver.arrows:
            blocks[a] = g[t].mul(seq_f.blocks[a])
        img = RElement(l.quiver, l.field, n_dims, l.dims, blocks)
        cols.append(ep_nl.ext_coords(img))
    out = ExactMatrix.zeros(l.field, ep_nl.ext_dim, len(cols))
    for j, col in enumerate(cols):
        for i, x in enumerate(col):
            out.put(i, j, x)
    return out


def pullback_class(l: Representation, n: Representation, m: Representation,
                   seq_f: RElement, g: Morphism, ep_lm: ExtPresentation) -> RElement:
    """Independent oracle for the connecting homomorphism.

    Constructs the pullback C of the middle term B along g: L -> N explicitly
    as a subrepresentation of B (+) L, block-triangularizes it against the
    canonical sub/quotient identifications, and returns the canonical reduced
    representative of the resulting class in R(L,M).
    """
    from .exactfield import kernel_basis as _kernel

    b = middle_term(m, n, seq_f)
    field = l.field
    quiver = l.quiver
    # pointwise: C_q = ker [pi_q  -g_q] inside B_q (+) L_q
    _, proj = canonical_maps(m, n, b)
    basis_at = {}
    for q in quiver.vertices:
        db, dl = b.dims[q], l.dims[q]
        mat = ExactMatrix.zeros(field, n.dims[q], db + dl)
        for i in range(n.dims[q]):
            for j in range(db):
                mat.put(i, j, proj[q].at(i, j))
            for j in range(dl):
                mat.put(i, db + j, field.neg(g.components[q].at(i, j)))
        cols = _kernel(mat)
        expected = m.dims[q] + l.dims[q]
        if len(cols) != expected:
            raise AssertionError("pullback has unexpected dimension")
        # choose a basis adapted to the sub/quotient splitting:
        # M-part: (iota(m), 0); complement: any lift of the L-quotient basis.
        adapted = []
        for i in range(m.dims[q]):
            v = [field.zero()] * (db + dl)
            v[i] = field.one()
            adapted.append(v)
        ech = Echelon(field, db + dl)
        for v in adapted:
            ech.add(v)
        lifts = []
        for v in cols:
            if ech.add(v):
                lifts.append(v)
        # normalize each lift so its L-coordinates are a standard basis vector
        lift_mat = ExactMatrix.zeros(field, dl, len(lifts))
        for j, v in enumerate(lifts):
            for i in range(dl):
                lift_mat.put(i, j, v[db + i])
        from .exactfield import inverse as _inv
        inv = _inv(lift_mat) if dl else lift_mat
        normalized = []
        for i in range(dl):
            acc = [field.zero()] * (db + dl)
            for j, v in enumerate(lifts):
                c = inv.at(j, i)
                if c != field.zero():
                    acc = [field.add(x, field.mul(c, y)) for x, y in zip(acc, v)]
            normalized.append(acc)
        basis_at[q] = adapted + normalized
    # the connecting block: image of the lifted L-basis under C_a, expressed
    # against the adapted basis at the target; its M-part is the class.
    blocks = {}
    for a, s, t in quiver.arrows:
        db_s, db_t = b.dims[s], b.dims[t]
        dl_s, dl_t = l.dims[s], l.dims[t]
        blk = ExactMatrix.zeros(field, m.dims[t], dl_s)
        # target-side change of basis: solve adapted_basis * x = image
        tmat = ExactMatrix.zeros(field, db_t + dl_t, m.dims[t] + dl_t)
        for j, v in enumerate(basis_at[t]):
            for i, x in enumerate(v):
                tmat.put(i, j, x)
        for j in range(dl_s):
            v = basis_at[s][m.dims[s] + j]
            img_b = b.matrices[a].mul_vector(v[:db_s])
            img_l = l.matrices[a].mul_vector(v[db_s:])
            img = img_b + img_l
            from .exactfield import solve as _solve
            x = _solve(tmat, img)
            if x is None:
                raise AssertionError("pullback image escapes the subrepresentation")
            for i in range(m.dims[t]):
                blk.put(i, j, x[i])
        blocks[a] = blk
    h = RElement(quiver, field, l.dims, m.dims, blocks)
    return ep_lm.pi_reduce(h)


# ---------------------------------------------------------------------------
# Self-extension basis of a middle term
# ---------------------------------------------------------------------------


class ExtBases:
    """Represented bases of the four Ext spaces attached to a pair (M, N)."""

    def __init__(self, r_m: List[RElement], r_n: List[RElement],
                 r_nm: List[RElement], r_mn: List[RElement]):
        self.r_m = list(r_m)
        self.r_n = list(r_n)
        self.r_nm = list(r_nm)
        self.r_mn = list(r_mn)


def default_ext_bases(m: Representation, n: Representation) -> ExtBases:
    """Tree-shaped bases of the four Ext spaces from standard candidates."""

    def basis(src, tgt):
        rb = represent_basis(assemble_d(src, tgt))
        if not rb.complete:
            raise ValueError("standard vectors do not represent a basis")
        return rb.elements

    return ExtBases(basis(m, m), basis(n, n), basis(n, m), basis(m, n))


def ext_basis_of_extension(m: Representation, n: Representation, e: RElement,
                           bases: ExtBases) -> List[RElement]:
    """Assemble a represented basis of Ext(B,B) for the middle term B of e.

    Follows the long-exact-sequence bookkeeping: first a basis of Ext(B, N)
    from the N- and (M,N)-bases, then a basis of Ext(B, M) from the (N,M)-
    and M-bases, then reduction modulo the image of the connecting map from
    Hom(B, N). Input bases that fail to represent bases are rejected.
    """
    _validate_bases(m, n, bases)
    b = middle_term(m, n, e)
    md, nd = m.dims, n.dims

    # Ext(B, N): candidates [R_N, R_{M,N}] embedded along B = [M | N]
    ep_bn = assemble_d(b, n)
    cands_bn = ([embed_relement(x, md, nd, "N", "N", target_is_b=False) for x in bases.r_n]
                + [embed_relement(x, md, nd, "M", "N", target_is_b=False) for x in bases.r_mn])
    sel_bn = select_independent_mod([ep_bn.ext_coords(c) for c in cands_bn],
                                    [], b.field)
    if len(sel_bn) != ep_bn.ext_dim:
        raise ValueError("candidate classes do not span Ext(B,N)")
    keep_n = [i for i in sel_bn if i < len(bases.r_n)]
    keep_mn = [i - len(bases.r_n) for i in sel_bn if i >= len(bases.r_n)]

    # Ext(B, M): candidates [R_{N,M}, R_M]
    ep_bm = assemble_d(b, m)
    cands_bm = ([embed_relement(x, md, nd, "N", "M", target_is_b=False) for x in bases.r_nm]
                + [embed_relement(x, md, nd, "M", "M", target_is_b=False) for x in bases.r_m])
    sel_bm = select_independent_mod([ep_bm.ext_coords(c) for c in cands_bm],
                                    [], b.field)
    if len(sel_bm) != ep_bm.ext_dim:
        raise ValueError("candidate classes do not span Ext(B,M)")

    # mod out the image of Hom(B,N) -> Ext(B,M), postcomposition with e
    delta_images = []
    for g in hom_basis(b, n):
        blocks = {a: e.blocks[a].mul(g[b.quiver.src[a]]) for a in b.quiver.arrow_ids}
        img = RElement(b.quiver, b.field, b.dims, md, blocks)
        delta_images.append(ep_bm.ext_coords(img))
    sel_final = select_independent_mod([ep_bm.ext_coords(cands_bm[i]) for i in sel_bm],
                                       delta_images, b.field)
    final_bm = [sel_bm[i] for i in sel_final]
    keep_nm = [i for i in final_bm if i < len(bases.r_nm)]
    keep_m = [i - len(bases.r_nm) for i in final_bm if i >= len(bases.r_nm)]

    result = ([embed_relement(bases.r_n[i], md, nd, "N", "N") for i in keep_n]
              + [embed_relement(bases.r_mn[i], md, nd, "M", "N") for i in keep_mn]
              + [embed_relement(bases.r_nm[i], md, nd, "N", "M") for i in keep_nm]
              + [embed_relement(bases.r_m[i], md, nd, "M", "M") for i in keep_m])

    ep_bb = assemble_d(b, b)
    if len(result) != ep_bb.ext_dim:
        raise AssertionError("assembled set has the wrong size for Ext(B,B)")
    check = select_independent_mod([ep_bb.ext_coords(x) for x in result], [], b.field)
    if len(check) != len(result):
        raise AssertionError("assembled classes are not independent in Ext(B,B)")
    return result


def _validate_bases(m: Representation, n: Representation, bases: ExtBases):
    for elems, (src, tgt) in [(bases.r_m, (m, m)), (bases.r_n, (n, n)),
                              (bases.r_nm, (n, m)), (bases.r_mn, (m, n))]:
        ep = assemble_d(src, tgt)
        coords = [ep.ext_coords(x) for x in elems]
        sel = select_independent_mod(coords, [], src.field)
        if len(sel) != len(elems) or len(elems) != ep.ext_dim:
            raise ValueError("a supplied subset does not represent a basis")


# ---------------------------------------------------------------------------
# Isomorphism oracle
# ---------------------------------------------------------------------------


def is_isomorphic(a: Representation, b: Representation,
                  budget: int = DEFAULT_BUDGET, seed: int = 0) -> bool:
    """Exact isomorphism test.

    Finite field: exhaustive scan of the morphism space for an invertible
    member. Characteristic zero: random search for a certificate, then a
    degree-bounded grid scan of the determinant polynomial for a sound "no".
    Raises UndecidedError when the budget does not cover the scan.
    """
    if a.quiver != b.quiver or a.field != b.field:
        return False
    if a.dims != b.dims:
        return False
    if a.total_dim() == 0:
        return True
    basis = hom_basis_morphisms(a, b)
    h = len(basis)
    if h == 0:
        return False
    verts = [q for q in a.quiver.vertices if a.dims[q] > 0]

    def combo_is_iso(coeffs) -> bool:
        for q in verts:
            acc = ExactMatrix.zeros(a.field, a.dims[q], a.dims[q])
            for c, phi in zip(coeffs, basis):
                if c:
                    acc = acc.add(phi.components[q].scale(c))
            if not invertible(acc):
                return False
        return True

    if a.field.is_prime_field:
        p = a.field.p
        if p ** h > budget:
            raise UndecidedError(f"morphism space has {p}^{h} points, budget {budget}")
        for coeffs in itertools.product(range(p), repeat=h):
            if combo_is_iso(coeffs):
                return True
        return False

    import random
    rng = random.Random(seed)
    total = sum(a.dims.values())
    for _ in range(32):
        coeffs = [rng.randint(-total - 1, total + 1) for _ in range(h)]
        if combo_is_iso(coeffs):
            return True
    grid = range(0, total + 1)
    if (total + 1) ** h > budget:
        raise UndecidedError("characteristic-zero grid exceeds budget")
    for coeffs in itertools.product(grid, repeat=h):
        if combo_is_iso(coeffs):
            return True
    return False


# ---------------------------------------------------------------------------
# Endomorphism analysis
# ---------------------------------------------------------------------------


class EndoAnalysis:
    """Full classification of End(M) over a finite field."""

    def __init__(self, rep: Representation, end_dim: int, nilpotent_span_dim: Optional[int],
                 is_local: bool, is_absolutely_indec: bool, unit_count: Optional[int]):
        self.rep = rep
        self.end_dim = end_dim
        self.nilpotent_span_dim = nilpotent_span_dim
        self.is_local = is_local
        self.is_absolutely_indec = is_absolutely_indec
        self.unit_count = unit_count


def _classify_endo(rep: Representation, comps: Dict[str, ExactMatrix]) -> str:
    for q in rep.quiver.vertices:
        d = rep.dims[q]
        if d and not invertible(comps[q]):
            break
    else:
        return "unit"
    for q in rep.quiver.vertices:
        d = rep.dims[q]
        if d and not comps[q].power(d).is_zero():
            return "other"
    return "nilpotent"


def analyze_end(m: Representation, budget: int = DEFAULT_BUDGET) -> EndoAnalysis:
    """Enumerate End(M) and classify every element.

    The representation is indecomposable iff the ring is local (every element
    a unit or nilpotent); absolutely indecomposable iff moreover the radical
    has codimension one. The Schurian fast path works over any field.
    """
    basis = hom_basis(m, m)
    e_dim = len(basis)
    if e_dim == 1:
        q = m.field.p if m.field.is_prime_field else None
        return EndoAnalysis(m, 1, 0, True, True, (q - 1) if q else None)
    if not m.field.is_prime_field:
        raise UndecidedError("full endomorphism analysis requires a finite field")
    p = m.field.p
    if p ** e_dim > budget:
        raise UndecidedError(f"endomorphism ring has {p}^{e_dim} points, budget {budget}")
    verts = [q for q in m.quiver.vertices if m.dims[q] > 0]
    units = 0
    nilpotents = 0
    local = True
    for coeffs in itertools.product(range(p), repeat=e_dim):
        comps = {}
        for q in verts:
            acc = ExactMatrix.zeros(m.field, m.dims[q], m.dims[q])
            for c, g in zip(coeffs, basis):
                if c:
                    acc = acc.add(g[q].scale(c))
            comps[q] = acc
        kind = _classify_endo(m, comps)
        if kind == "unit":
            units += 1
        elif kind == "nilpotent":
            nilpotents += 1
        else:
            local = False
    nil_span = None
    abs_indec = False
    if local:
        # radical is a linear subspace; its size is a power of p
        k = 0
        size = 1
        while size < nilpotents:
            size *= p
            k += 1
        if size != nilpotents:
            raise AssertionError("nilpotent count is not a p-power despite locality")
        nil_span = k
        abs_indec = (k == e_dim - 1)
    return EndoAnalysis(m, e_dim, nil_span, local, abs_indec, units)


def is_indecomposable(m: Representation, budget: int = DEFAULT_BUDGET) -> bool:
    """Locality of End(M); scans with early exit on a non-unit non-nilpotent."""
    basis = hom_basis(m, m)
    e_dim = len(basis)
    if m.total_dim() == 0:
        return False
    if e_dim == 1:
        return True
    if not m.field.is_prime_field:
        raise UndecidedError("indecomposability oracle requires a finite field "
                             "(only the Schurian sufficient test works over Q)")
    p = m.field.p
    if p ** e_dim > budget:
        raise UndecidedError(f"endomorphism ring has {p}^{e_dim} points, budget {budget}")
    verts = [q for q in m.quiver.vertices if m.dims[q] > 0]
    for coeffs in itertools.product(range(p), repeat=e_dim):
        comps = {}
        for q in verts:
            acc = ExactMatrix.zeros(m.field, m.dims[q], m.dims[q])
            for c, g in zip(coeffs, basis):
                if c:
                    acc = acc.add(g[q].scale(c))
            comps[q] = acc
        if _classify_endo(m, comps) == "other":
            return False
    return True


def is_schurian(m: Representation) -> bool:
    return assemble_d(m, m).hom_dim == 1


def aut_count(m: Representation, budget: int = DEFAULT_BUDGET) -> int:
    analysis = analyze_end(m, budget)
    if analysis.unit_count is None:
        raise UndecidedError("automorphism counting requires a finite field")
    return analysis.unit_count


def end_scan(m: Representation, budget: int = DEFAULT_BUDGET
             ) -> Tuple[bool, bool, Optional[int]]:
    """(indecomposable, absolutely indecomposable, unit count) in one pass.

    Aborts early (returning unit count None) once the ring is seen to be
    non-local, which is the common case during point enumerations.
    """
    basis = hom_basis(m, m)
    e_dim = len(basis)
    if m.total_dim() == 0:
        return False, False, None
    p = m.field.p
    if e_dim == 1:
        return True, True, p - 1
    if p ** e_dim > budget:
        raise UndecidedError(f"endomorphism ring has {p}^{e_dim} points, budget {budget}")
    verts = [q for q in m.quiver.vertices if m.dims[q] > 0]
    units = 0
    nilpotents = 0
    for coeffs in itertools.product(range(p), repeat=e_dim):
        comps = {}
        for q in verts:
            acc = ExactMatrix.zeros(m.field, m.dims[q], m.dims[q])
            for c, g in zip(coeffs, basis):
                if c:
                    acc = acc.add(g[q].scale(c))
            comps[q] = acc
        kind = _classify_endo(m, comps)
        if kind == "unit":
            units += 1
        elif kind == "nilpotent":
            nilpotents += 1
        else:
            return False, False, None
    k = 0
    size = 1
    while size < nilpotents:
        size *= p
        k += 1
    return True, k == e_dim - 1, units
