"""Cells and mosaics of indecomposables: constructors and verifiers.

A cell is a base representation T with a basis of a parameter subspace
U of R(T,T); its deformations T(lambda) are meant to be indecomposable
(strong) and pairwise nonisomorphic (separating). Flags distinguish
theorem-certified constructions from exhaustively verified ones; the two
notions are kept apart on purpose.
"""

from __future__ import annotations

import itertools
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .exactfield import Echelon, ExactMatrix, FieldSpec, invertible, inverse
from .quivercore import (DimVector, Quiver, coefficient_quiver, is_tree,
                         subspace_quiver)
from .repspace import (RElement, Representation, all_points, assemble_d, deform,
                       direct_power, embed_relement, hom_dim, middle_term, point_count)
from .homalg import (DEFAULT_BUDGET, UndecidedError, end_scan, inclusion_of_sub,
                     is_schurian, projection_onto_quotient, theta_map)

CERTIFIED = "certified"
VERIFIED = "verified"
UNKNOWN = "unknown"
FAILED = "failed"


class Cell:
    """A base representation with a basis of its deformation parameter space."""

    def __init__(self, base: Representation, params: Sequence[RElement],
                 flags: Optional[Dict[str, str]] = None, provenance: Optional[dict] = None):
        self.base = base
        self.params = list(params)
        for lam in self.params:
            if lam.source_dims != base.dims or lam.target_dims != base.dims:
                raise ValueError("cell parameter does not lie in R(T,T)")
        ech = Echelon(base.field, RElement.space_of(base, base).dim())
        for lam in self.params:
            if not ech.add(lam.flatten()):
                raise ValueError("cell parameters are linearly dependent")
        self.flags = {"strong": UNKNOWN, "separating": UNKNOWN, "schurian": UNKNOWN}
        if flags:
            self.flags.update(flags)
        self.provenance = provenance or {}

    @property
    def dim(self) -> int:
        return len(self.params)

    def points(self, field: Optional[FieldSpec] = None) -> Iterable[Representation]:
        """All deformations T(lambda) for lambda over a finite field."""
        field = field or self.base.field
        if not field.is_prime_field:
            raise ValueError("cell point enumeration needs a finite field")
        for coeffs in itertools.product(range(field.p), repeat=self.dim):
            lam = RElement.space_of(self.base, self.base)
            for c, par in zip(coeffs, self.params):
                if c:
                    lam = lam.add(par.scale(c))
            yield deform(self.base, lam)

    def __repr__(self):
        return f"Cell(dim={self.dim}, flags={self.flags})"


class Mosaic:
    """Cells of one dimension vector, intended to be pairwise non-overlapping."""

    def __init__(self, dimvector: DimVector, cells: Sequence[Cell],
                 provenance: Optional[List[dict]] = None):
        self.dimvector = dict(dimvector)
        self.cells = list(cells)
        for c in self.cells:
            if c.base.dims != {v: self.dimvector.get(v, 0) for v in c.base.quiver.vertices}:
                raise ValueError("cell has the wrong dimension vector")
        self.provenance = provenance or [c.provenance for c in self.cells]
        self.disjoint = UNKNOWN

    def dims_histogram(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for c in self.cells:
            out[c.dim] = out.get(c.dim, 0) + 1
        return out

    def __repr__(self):
        return f"Mosaic({len(self.cells)} cells, dims={sorted(c.dim for c in self.cells)})"


class TNFReport:
    """Coverage of the absolutely indecomposable classes of a root over F_q.

    Classes are those that stay indecomposable under scalar extension; these
    are what affine cells parametrize and what the class-count polynomials
    count. A cell point that fails to be such a class at all is counted in
    invalid_cell_points and fails the verification outright.
    """

    def __init__(self, mosaic: Mosaic, q: int, covered: int, total_indec_classes: int,
                 multiply_covered: int, invalid_cell_points: int = 0):
        self.mosaic = mosaic
        self.q = q
        self.covered = covered
        self.total_indec_classes = total_indec_classes
        self.multiply_covered = multiply_covered
        self.invalid_cell_points = invalid_cell_points

    @property
    def cellular_tnf_verified(self) -> bool:
        return (self.covered == self.total_indec_classes
                and self.multiply_covered == 0 and self.invalid_cell_points == 0)

    def __repr__(self):
        extra = f", invalid={self.invalid_cell_points}" if self.invalid_cell_points else ""
        return (f"TNFReport(q={self.q}, covered={self.covered}/"
                f"{self.total_indec_classes}, multiple={self.multiply_covered}{extra})")


class Certificate:
    """Outcome of a hypothesis check: what held, how it was checked."""

    def __init__(self, ok: bool, mode: str, checks: List[str],
                 witness: Optional[object] = None):
        self.ok = ok
        self.mode = mode  # symbolic | exhaustive | sampled
        self.checks = checks
        self.witness = witness

    def __bool__(self):
        return self.ok

    def __repr__(self):
        state = "ok" if self.ok else f"FAILED (witness={self.witness})"
        return f"Certificate({state}, {self.mode}: {'; '.join(self.checks)})"


# ---------------------------------------------------------------------------
# Hypothesis checks for the recursive constructions
# ---------------------------------------------------------------------------


def supports_disjoint(m: Representation, n: Representation) -> bool:
    return not (set(m.support()) & set(n.support()))


def _cell_points_or_samples(cell: Cell, rng=None, count: int = 4) -> List[Representation]:
    """Deformations used by sampled checks: all F_q points, or integer probes."""
    base = cell.base
    if base.field.is_prime_field and base.field.p ** cell.dim <= 1024:
        return list(cell.points())
    import random
    rng = rng or random.Random(7)
    out = [base]
    for k in range(count):
        lam = RElement.space_of(base, base)
        for i, par in enumerate(cell.params):
            lam = lam.add(par.scale(base.field.of((k + 2) * (i + 3) + 1)))
        out.append(deform(base, lam))
    return out


def check_strong_hypotheses(m: Representation, n: Representation, e: RElement,
                            triples: Optional[List[Tuple[RElement, RElement, RElement]]] = None,
                            u_m: Optional[Cell] = None, u_n: Optional[Cell] = None
                            ) -> Certificate:
    """Check the hypotheses that make (e,0,0)+W a strong subset of R(B,B).

    Requirements per triple (tau, lambda, mu): the class of e+tau in
    Ext(N(mu), M(lambda)) is nonzero, and the interface map of the middle
    term into itself vanishes. Disjoint supports certify the vanishing
    symbolically; otherwise the supplied triples are checked one by one.
    """
    checks = []
    disjoint = supports_disjoint(m, n)
    if disjoint:
        checks.append("supports disjoint: interface maps vanish identically")
    triples = triples or [(RElement.space_of(n, m), RElement.space_of(m, m),
                           RElement.space_of(n, n))]
    for (tau, lam, mu) in triples:
        m_def = deform(m, lam)
        n_def = deform(n, mu)
        ep = assemble_d(n_def, m_def)
        cls = ep.pi_reduce(e.add(tau))
        if cls.is_zero():
            return Certificate(False, "exhaustive", checks,
                               witness=("split sequence", tau, lam, mu))
        if not disjoint:
            b = middle_term(m, n, e.add(tau), lam, mu)
            incl = inclusion_of_sub(m_def, n_def, b)
            proj = projection_onto_quotient(m_def, n_def, b)
            tm = theta_map(b, b, incl, proj)
            if not tm.is_zero():
                return Certificate(False, "exhaustive", checks,
                                   witness=("interface map nonzero", tau, lam, mu))
    checks.append(f"nonsplit and interface-zero on {len(triples)} triples")
    mode = "symbolic" if disjoint else "exhaustive"
    return Certificate(True, mode, checks)


def check_separating(m: Representation, n: Representation, e: RElement,
                     cell_m: Cell, cell_n: Cell, u_nm: Sequence[RElement]
                     ) -> Certificate:
    """Check the separating-cell hypotheses for (e + <u_nm>) x U_M x U_N.

    Part (a) needs the interface maps to vanish for all pairs (sampled, or
    symbolically for disjoint supports). Part (b) additionally needs Schurian
    deformations on both sides, e outside the span of u_nm, and the affine
    translate e + <u_nm> to inject into every Ext(N(mu), M(lambda)).
    """
    checks = []
    disjoint = supports_disjoint(m, n)
    m_samples = _cell_points_or_samples(cell_m)
    n_samples = _cell_points_or_samples(cell_n)
    if disjoint:
        checks.append("supports disjoint: interface maps vanish identically")
    else:
        for md in m_samples:
            for nd in n_samples:
                if hom_dim(md, nd) != 0:
                    return Certificate(False, "sampled", checks,
                                       witness=("Hom(M(lam),N(mu)) != 0", md, nd))
        checks.append(f"Hom(M(lam),N(mu))=0 on {len(m_samples)}x{len(n_samples)} samples")
    for md in m_samples:
        if not is_schurian(md):
            return Certificate(False, "sampled", checks, witness=("M(lam) not Schurian", md))
    for nd in n_samples:
        if not is_schurian(nd):
            return Certificate(False, "sampled", checks, witness=("N(mu) not Schurian", nd))
    checks.append("deformations Schurian on samples")
    ech = Echelon(m.field, e.dim())
    for w in u_nm:
        ech.add(w.flatten())
    if not any(x != m.field.zero() for x in ech.reduce(e.flatten())):
        return Certificate(False, "exhaustive", checks, witness=("e in span(U_NM)",))
    checks.append("e independent of the connecting parameter space")
    for md in m_samples:
        for nd in n_samples:
            ep = assemble_d(nd, md)
            sub = Echelon(m.field, e.dim())
            for row in ep.image_subspace_rows():
                sub.add(row)
            for w in u_nm:
                if not sub.add(w.flatten()):
                    return Certificate(False, "sampled", checks,
                                       witness=("universality failure", md, nd))
    checks.append("connecting parameters universal on samples")
    return Certificate(True, "symbolic" if disjoint else "sampled", checks)


def check_grassmann_hypotheses(cell_m: Cell, cell_n: Cell, u_nm: Sequence[RElement]
                               ) -> Certificate:
    """Hypotheses of the Grassmannian cell construction.

    Needs Schurian deformations on both cells, vanishing Hom(M(lambda),
    N(mu)) on sampled pairs, and the span of the connecting basis to inject
    into Ext(N(mu), M(lambda)) for every sampled pair.
    """
    m, n = cell_m.base, cell_n.base
    checks = []
    disjoint = supports_disjoint(m, n)
    m_samples = _cell_points_or_samples(cell_m)
    n_samples = _cell_points_or_samples(cell_n)
    if disjoint:
        checks.append("supports disjoint")
    else:
        for md in m_samples:
            for nd in n_samples:
                if hom_dim(md, nd) != 0:
                    return Certificate(False, "sampled", checks,
                                       witness=("Hom(M(lam),N(mu)) != 0", md, nd))
        checks.append(f"Hom(M(lam),N(mu))=0 on {len(m_samples)}x{len(n_samples)} samples")
    for rep in m_samples + n_samples:
        if not is_schurian(rep):
            return Certificate(False, "sampled", checks, witness=("not Schurian", rep))
    checks.append("deformations Schurian on samples")
    for md in m_samples:
        for nd in n_samples:
            ep = assemble_d(nd, md)
            sub = Echelon(m.field, u_nm[0].dim())
            for row in ep.image_subspace_rows():
                sub.add(row)
            for w in u_nm:
                if not sub.add(w.flatten()):
                    return Certificate(False, "sampled", checks,
                                       witness=("connecting basis not universal", md, nd))
    checks.append("connecting basis universal on samples")
    return Certificate(True, "symbolic" if disjoint else "sampled", checks)


# ---------------------------------------------------------------------------
# Schubert cells
# ---------------------------------------------------------------------------


class SchubertCell:
    """The affine cell of the Grassmannian attached to a pivot sequence."""

    def __init__(self, pivots: Sequence[int], n: int, d: int):
        pivots = list(pivots)
        if len(pivots) != d or any(p < 1 or p > n for p in pivots) \
                or any(a >= b for a, b in zip(pivots, pivots[1:])):
            raise ValueError("pivot sequence must be strictly increasing in 1..n")
        self.pivots = pivots
        self.n = n
        self.d = d
        self.free_positions = [(j, k) for j in range(d) for k in range(pivots[j] - 1)
                               if (k + 1) not in pivots]
        self.dim = len(self.free_positions)

    def base_matrix(self, field: FieldSpec) -> ExactMatrix:
        out = ExactMatrix.zeros(field, self.d, self.n)
        for j, p in enumerate(self.pivots):
            out.put(j, p - 1, field.one())
        return out

    def pattern(self) -> List[List[str]]:
        rows = []
        for j in range(self.d):
            row = []
            for k in range(self.n):
                if k == self.pivots[j] - 1:
                    row.append("1")
                elif (j, k) in set(self.free_positions):
                    row.append("*")
                else:
                    row.append("0")
            rows.append(row)
        return rows

    def point(self, field: FieldSpec, coeffs: Sequence) -> ExactMatrix:
        out = self.base_matrix(field)
        for (j, k), c in zip(self.free_positions, coeffs):
            out.put(j, k, field.of(c))
        return out


def schubert_cell(pivots: Sequence[int], n: int, d: int) -> SchubertCell:
    return SchubertCell(pivots, n, d)


def schubert_cells(n: int, d: int) -> List[SchubertCell]:
    return [SchubertCell(list(I), n, d)
            for I in itertools.combinations(range(1, n + 1), d)]


# ---------------------------------------------------------------------------
# Grassmannian extension machinery
# ---------------------------------------------------------------------------


def _tensor_into_power(e: RElement, m: Representation, d: int, copy: int) -> RElement:
    """Place e in R(N, M) into the copy-th summand of R(N, M^d)."""
    md = direct_power(m, d)
    out = RElement(e.quiver, e.field, e.source_dims, md.dims)
    for a, s, t in e.quiver.arrows:
        blk = e.blocks[a]
        off = copy * m.dims[t]
        for i in range(blk.rows):
            for j in range(blk.cols):
                out.blocks[a].put(off + i, j, blk.at(i, j))
    return out


def gamma_extension(m: Representation, n: Representation, basis_e: Sequence[RElement],
                    a_matrix: ExactMatrix) -> Representation:
    """Middle term of the extension of N by M^d with class determined by A.

    Column i of A weighs basis element e_i; the result is indecomposable iff
    A has full rank d, and two parameter matrices give isomorphic middle
    terms iff they lie in the same GL_d orbit.
    """
    d, ncols = a_matrix.rows, a_matrix.cols
    if ncols != len(basis_e):
        raise ValueError("A must have one column per basis element")
    tau = RElement(m.quiver, m.field, n.dims, direct_power(m, d).dims)
    for i, e in enumerate(basis_e):
        for j in range(d):
            c = a_matrix.at(j, i)
            if c != m.field.zero():
                tau = tau.add(_tensor_into_power(e, m, d, j).scale(c))
    return middle_term(direct_power(m, d), n, tau)


def _diagonal_power_param(lam: RElement, m: Representation, d: int) -> RElement:
    """lam (x) identity: the diagonal self-parameter of M^d induced by lam."""
    md = direct_power(m, d)
    out = RElement(m.quiver, m.field, md.dims, md.dims)
    for a, s, t in m.quiver.arrows:
        blk = lam.blocks[a]
        for copy in range(d):
            roff, coff = copy * m.dims[t], copy * m.dims[s]
            for i in range(blk.rows):
                for j in range(blk.cols):
                    out.blocks[a].put(roff + i, coff + j, blk.at(i, j))
    return out


def grassmann_mosaic(cell_m: Cell, cell_n: Cell, u_nm: Sequence[RElement], d: int,
                     check: bool = True) -> Mosaic:
    """One cell per pivot sequence: the Schubert decomposition carried over
    to extensions of N(mu) by M(lambda)^d.

    Cell I has base the middle term of the class sum over the pivot columns
    and parameters the free Schubert coordinates plus the diagonal U_M and
    the U_N directions; its dimension is dim U_M + dim U_N + dim A_I.
    """
    m, n = cell_m.base, cell_n.base
    nn = len(u_nm)
    if not 1 <= d <= nn:
        raise ValueError("need 1 <= d <= number of basis elements")
    cert = None
    if check:
        cert = check_grassmann_hypotheses(cell_m, cell_n, u_nm)
        if not cert.ok:
            raise ValueError(f"grassmann mosaic hypotheses failed: {cert!r}")
    md_rep = direct_power(m, d)
    m_dims_d = md_rep.dims
    cells = []
    for sc in schubert_cells(nn, d):
        a0 = sc.base_matrix(m.field)
        base = gamma_extension(m, n, list(u_nm), a0)
        params: List[RElement] = []
        for (j, k) in sc.free_positions:
            emb = _tensor_into_power(u_nm[k], m, d, j)
            params.append(embed_relement(emb, m_dims_d, n.dims, "N", "M"))
        for lam in cell_m.params:
            diag = _diagonal_power_param(lam, m, d)
            params.append(embed_relement(diag, m_dims_d, n.dims, "M", "M"))
        for mu in cell_n.params:
            params.append(embed_relement(mu, m_dims_d, n.dims, "N", "N"))
        status = CERTIFIED if (not check or cert.ok) else UNKNOWN
        flags = {"strong": status, "separating": status,
                 "schurian": cell_m.flags.get("schurian", UNKNOWN)}
        cells.append(Cell(base, params, flags,
                          provenance={"kind": "grassmann", "pivots": sc.pivots,
                                      "schubert_dim": sc.dim}))
    dimvec = {v: d * m.dims[v] + n.dims[v] for v in m.quiver.vertices}
    return Mosaic(dimvec, cells)


def tree_cell_recursion(cell_s: Cell, cell_t: Cell, treebasis: Sequence[RElement],
                        check: bool = True) -> Mosaic:
    """Tree-module specialization of the Grassmannian construction at d = 1.

    The middle terms of the classes of the tree-shaped basis elements are
    again tree modules (each adds one labeled arrow joining the two
    coefficient quivers); cell i carries the first i-1 basis directions.
    """
    s, t = cell_s.base, cell_t.base
    mosaic = grassmann_mosaic(cell_t, cell_s, treebasis, 1, check=check)
    for cell in mosaic.cells:
        cq = coefficient_quiver(cell.base)
        if not is_tree(cq):
            raise ValueError("middle term of a tree-shaped class is not a tree module")
        cell.provenance["kind"] = "tree-recursion"
    return mosaic


# ---------------------------------------------------------------------------
# Subspace quiver cellular tree normal form
# ---------------------------------------------------------------------------


def _subspace_base_cell(n: int, field: FieldSpec) -> Cell:
    q = subspace_quiver(n)
    dims = {"q0": 2, "q1": 1, "q2": 1, "q3": 1}
    mats = {"a1": ExactMatrix.from_rows(field, [[1], [0]]),
            "a2": ExactMatrix.from_rows(field, [[0], [1]]),
            "a3": ExactMatrix.from_rows(field, [[1], [1]])}
    base = Representation(q, field, dims, mats)
    return Cell(base, [], flags={"strong": CERTIFIED, "separating": CERTIFIED,
                                 "schurian": CERTIFIED},
                provenance={"kind": "exceptional-base", "level": 3})


def _partition_cells(n: int, level: int, field: FieldSpec) -> List[Cell]:
    """Dimension-zero cells for indecomposables whose restriction decomposes.

    One cell per unordered nontrivial partition of 1..level-1; unit columns
    per block and an all-ones column on the last active arrow.
    """
    q = subspace_quiver(n)
    out = []
    ground = list(range(2, level))
    for r in range(1, len(ground) + 1):
        for j_set in itertools.combinations(ground, r):
            dims = {"q0": 2}
            for i in range(1, level + 1):
                dims[f"q{i}"] = 1
            mats = {}
            for i in range(1, level):
                col = [[0], [1]] if i in j_set else [[1], [0]]
                mats[f"a{i}"] = ExactMatrix.from_rows(field, col)
            mats[f"a{level}"] = ExactMatrix.from_rows(field, [[1], [1]])
            base = Representation(q, field, dims, mats)
            out.append(Cell(base, [], flags={"strong": CERTIFIED, "separating": CERTIFIED,
                                             "schurian": VERIFIED if is_schurian(base) else FAILED},
                            provenance={"kind": "partition", "level": level,
                                        "second_block": list(j_set)}))
    return out


def subspace_tnf(n: int, field: Optional[FieldSpec] = None) -> Mosaic:
    """Cellular tree normal form for the subspace-quiver root with a
    two-dimensional sink: recursive middle-term cells plus partition cells."""
    if n < 3:
        raise ValueError("the construction starts at n = 3")
    field = field or FieldSpec.rationals()
    q = subspace_quiver(n)
    cells = [_subspace_base_cell(n, field)]
    for level in range(4, n + 1):
        new_cells: List[Cell] = []
        simple = Representation.simple(q, field, f"q{level}")
        cell_simple = Cell(simple, [], flags={"strong": CERTIFIED, "separating": CERTIFIED,
                                              "schurian": CERTIFIED},
                           provenance={"kind": "simple", "vertex": f"q{level}"})
        for cell in cells:
            e1 = RElement.standard_vector(simple, cell.base, f"a{level}", 0, 0)
            e2 = RElement.standard_vector(simple, cell.base, f"a{level}", 1, 0)
            mosaic = tree_cell_recursion(cell_simple, cell, [e1, e2], check=True)
            new_cells.extend(mosaic.cells)
        new_cells.extend(_partition_cells(n, level, field))
        cells = new_cells
    dimvec = {"q0": 2}
    for i in range(1, n + 1):
        dimvec[f"q{i}"] = 1
    for c in cells:
        c.provenance.setdefault("kind", "recursion")
    return Mosaic(dimvec, cells)


# ---------------------------------------------------------------------------
# Exhaustive verification over a finite field
# ---------------------------------------------------------------------------


def _gl_elements(field: FieldSpec, d: int) -> List[Tuple[ExactMatrix, ExactMatrix]]:
    out = []
    for entries in itertools.product(range(field.p), repeat=d * d):
        g = ExactMatrix(field, d, d, list(entries))
        if invertible(g):
            out.append((g, inverse(g)))
    return out


def gl_order(field: FieldSpec, dims: DimVector) -> int:
    total = 1
    for d in dims.values():
        for i in range(d):
            total *= field.p ** d - field.p ** i
    return total


class OrbitCanonicalizer:
    """Canonical forms of F_q representation points under base change."""

    def __init__(self, quiver: Quiver, dims: DimVector, field: FieldSpec,
                 budget: int = DEFAULT_BUDGET):
        self.quiver = quiver
        self.dims = dims
        self.field = field
        if gl_order(field, dims) > budget:
            raise UndecidedError("base-change group too large for orbit canonicalization")
        self.groups = {v: _gl_elements(field, dims.get(v, 0)) for v in quiver.vertices}

    def canonical(self, rep: Representation) -> tuple:
        best = None
        verts = self.quiver.vertices
        for combo in itertools.product(*(self.groups[v] for v in verts)):
            g = {v: combo[i][0] for i, v in enumerate(verts)}
            ginv = {v: combo[i][1] for i, v in enumerate(verts)}
            key = tuple(tuple(g[t].mul(rep.matrices[a]).mul(ginv[s]).entries)
                        for a, s, t in self.quiver.arrows)
            if best is None or key < best:
                best = key
        return best


def verify_cell(cell: Cell, q: int, budget: int = DEFAULT_BUDGET) -> Certificate:
    """Exhaustively check one cell over F_q: strong and separating.

    Every deformation point must be indecomposable and the points pairwise
    nonisomorphic. On success the cell's flags are upgraded to verified;
    a failure downgrades them and carries the witness.
    """
    from .homalg import is_indecomposable, is_isomorphic
    field = FieldSpec.prime(q)
    cell_q = Cell(_cast_rep(cell.base, field),
                  [_cast_relement(p, field) for p in cell.params])
    pts = list(cell_q.points())
    for p in pts:
        if not is_indecomposable(p, budget):
            cell.flags["strong"] = FAILED
            return Certificate(False, "exhaustive", [f"q={q}"],
                               witness=("decomposable point", p))
    if cell.flags.get("strong") != CERTIFIED:
        cell.flags["strong"] = VERIFIED
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if is_isomorphic(pts[i], pts[j], budget):
                cell.flags["separating"] = FAILED
                return Certificate(False, "exhaustive", [f"q={q}"],
                                   witness=("isomorphic points", pts[i], pts[j]))
    if cell.flags.get("separating") != CERTIFIED:
        cell.flags["separating"] = VERIFIED
    return Certificate(True, "exhaustive",
                       [f"all {len(pts)} points indecomposable and pairwise "
                        f"nonisomorphic over F_{q}"])


def verify_mosaic(mosaic: Mosaic, q: int, budget: int = DEFAULT_BUDGET) -> TNFReport:
    """Enumerate all points of the root over F_q, classify indecomposables
    into isomorphism classes, and match every cell deformation against them.

    Coverage counts how many classes are hit at least once; a class hit by
    two different (cell, parameter) pairs counts as multiply covered.
    """
    field = FieldSpec.prime(q)
    quiver = mosaic.cells[0].base.quiver
    dims = {v: mosaic.dimvector.get(v, 0) for v in quiver.vertices}
    if point_count(quiver, dims, field) > budget:
        raise UndecidedError("point enumeration exceeds budget")
    canon = OrbitCanonicalizer(quiver, dims, field, budget)
    classes: Dict[tuple, int] = {}
    for rep in all_points(quiver, dims, field):
        _, absolutely, _ = end_scan(rep, budget)
        if absolutely:
            key = canon.canonical(rep)
            classes.setdefault(key, 0)
    hit_counts: Dict[tuple, int] = {k: 0 for k in classes}
    invalid = 0
    for cell in mosaic.cells:
        base_q = _cast_rep(cell.base, field)
        params_q = [_cast_relement(p, field) for p in cell.params]
        for coeffs in itertools.product(range(q), repeat=len(params_q)):
            lam = RElement.space_of(base_q, base_q)
            for c, par in zip(coeffs, params_q):
                if c:
                    lam = lam.add(par.scale(c))
            point = deform(base_q, lam)
            key = canon.canonical(point)
            if key in hit_counts:
                hit_counts[key] += 1
            else:
                invalid += 1  # not an absolutely indecomposable point of the root
    covered = sum(1 for v in hit_counts.values() if v >= 1)
    multiple = sum(1 for v in hit_counts.values() if v >= 2)
    mosaic.disjoint = VERIFIED if (multiple == 0 and invalid == 0) else FAILED
    return TNFReport(mosaic, q, covered, len(classes), multiple, invalid)


def _cast_rep(rep: Representation, field: FieldSpec) -> Representation:
    if rep.field == field:
        return rep
    mats = {a: ExactMatrix(field, m.rows, m.cols, [field.of(x) for x in m.entries])
            for a, m in rep.matrices.items()}
    return Representation(rep.quiver, field, rep.dims, mats)


def _cast_relement(el: RElement, field: FieldSpec) -> RElement:
    if el.field == field:
        return el
    out = RElement(el.quiver, field, el.source_dims, el.target_dims)
    for a, blk in el.blocks.items():
        out.blocks[a] = ExactMatrix(field, blk.rows, blk.cols,
                                    [field.of(x) for x in blk.entries])
    return out
