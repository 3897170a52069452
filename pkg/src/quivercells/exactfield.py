"""Exact scalar arithmetic (rationals and prime fields) and dense exact matrices.

Everything downstream works over one of two kinds of coefficients:

* arbitrary-precision rationals, stored as ``fractions.Fraction`` (always
  reduced, positive denominator, so equality is bit-comparable), and
* prime fields F_p, stored as canonical residues ``int`` in ``[0, p)``.

No floating point appears anywhere; every matrix identity below is an exact
equality.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple


class FieldSpec:
    """The ground field: either the rationals or F_p for a prime p."""

    RATIONALS = "Rationals"
    PRIME = "PrimeField"

    _rationals_singleton = None
    _prime_cache: dict = {}

    def __init__(self, kind: str, p: Optional[int] = None):
        if kind == self.PRIME:
            if p is None or p < 2 or not _is_prime(p):
                raise ValueError(f"p must be a prime >= 2, got {p!r}")
        elif kind == self.RATIONALS:
            if p is not None:
                raise ValueError("rationals carry no characteristic parameter")
        else:
            raise ValueError(f"unknown field kind {kind!r}")
        self.kind = kind
        self.p = p

    # -- constructors ------------------------------------------------------

    @classmethod
    def rationals(cls) -> "FieldSpec":
        if cls._rationals_singleton is None:
            cls._rationals_singleton = cls(cls.RATIONALS)
        return cls._rationals_singleton

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        if p not in cls._prime_cache:
            cls._prime_cache[p] = cls(cls.PRIME, p)
        return cls._prime_cache[p]

    # -- predicates --------------------------------------------------------

    @property
    def is_prime_field(self) -> bool:
        return self.kind == self.PRIME

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self.kind == other.kind and self.p == other.p

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return "Q" if not self.is_prime_field else f"F{self.p}"

    # -- element arithmetic -------------------------------------------------

    def zero(self):
        return 0 if self.is_prime_field else Fraction(0)

    def one(self):
        return 1 if self.is_prime_field else Fraction(1)

    def of(self, x):
        """Coerce an int, Fraction or string ("7", "3/4", "5") into the field."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.is_prime_field:
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise ZeroDivisionError(f"denominator of {x} vanishes mod {self.p}")
                return (x.numerator * pow(x.denominator, self.p - 2, self.p)) % self.p
            return int(x) % self.p
        return Fraction(x)

    def add(self, a, b):
        return (a + b) % self.p if self.is_prime_field else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.is_prime_field else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.is_prime_field else a * b

    def neg(self, a):
        return (-a) % self.p if self.is_prime_field else -a

    def inv(self, a):
        if self.is_prime_field:
            a %= self.p
            if a == 0:
                raise ZeroDivisionError("inverse of zero")
            return pow(a, self.p - 2, self.p)
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def elements(self) -> Iterable:
        """All field elements; only available for prime fields."""
        if not self.is_prime_field:
            raise ValueError("cannot enumerate the rationals")
        return range(self.p)

    def to_str(self, a) -> str:
        return str(a)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class ExactMatrix:
    """A dense matrix with entries in a FieldSpec, stored row-major."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: FieldSpec, rows: int, cols: int, entries: Sequence):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix dimensions")
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        self.field = field
        self.rows = rows
        self.cols = cols
        self.entries = list(entries)

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rows(cls, field: FieldSpec, rowdata: Sequence[Sequence]) -> "ExactMatrix":
        rows = len(rowdata)
        cols = len(rowdata[0]) if rows else 0
        flat = []
        for r in rowdata:
            if len(r) != cols:
                raise ValueError("ragged rows")
            flat.extend(field.of(x) for x in r)
        return cls(field, rows, cols, flat)

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "ExactMatrix":
        z = field.zero()
        return cls(field, rows, cols, [z] * (rows * cols))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "ExactMatrix":
        m = cls.zeros(field, n, n)
        one = field.one()
        for i in range(n):
            m.entries[i * n + i] = one
        return m

    @classmethod
    def unit(cls, field: FieldSpec, rows: int, cols: int, i: int, j: int) -> "ExactMatrix":
        m = cls.zeros(field, rows, cols)
        m.entries[i * cols + j] = field.one()
        return m

    # -- access ------------------------------------------------------------

    def at(self, i: int, j: int):
        return self.entries[i * self.cols + j]

    def put(self, i: int, j: int, v):
        self.entries[i * self.cols + j] = v

    def row(self, i: int) -> List:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> List[List]:
        return [self.row(i) for i in range(self.rows)]

    def copy(self) -> "ExactMatrix":
        return ExactMatrix(self.field, self.rows, self.cols, list(self.entries))

    # -- algebra -----------------------------------------------------------

    def add(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same_shape(other)
        f = self.field
        return ExactMatrix(f, self.rows, self.cols,
                           [f.add(a, b) for a, b in zip(self.entries, other.entries)])

    def sub(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same_shape(other)
        f = self.field
        return ExactMatrix(f, self.rows, self.cols,
                           [f.sub(a, b) for a, b in zip(self.entries, other.entries)])

    def neg(self) -> "ExactMatrix":
        f = self.field
        return ExactMatrix(f, self.rows, self.cols, [f.neg(a) for a in self.entries])

    def scale(self, c) -> "ExactMatrix":
        f = self.field
        c = f.of(c)
        return ExactMatrix(f, self.rows, self.cols, [f.mul(c, a) for a in self.entries])

    def mul(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        f = self.field
        n, k, m = self.rows, self.cols, other.cols
        out = ExactMatrix.zeros(f, n, m)
        se, oe, re = self.entries, other.entries, out.entries
        if f.is_prime_field:
            p = f.p
            for i in range(n):
                for l in range(k):
                    a = se[i * k + l]
                    if a:
                        base = l * m
                        rbase = i * m
                        for j in range(m):
                            re[rbase + j] = (re[rbase + j] + a * oe[base + j]) % p
        else:
            for i in range(n):
                for l in range(k):
                    a = se[i * k + l]
                    if a:
                        base = l * m
                        rbase = i * m
                        for j in range(m):
                            re[rbase + j] = re[rbase + j] + a * oe[base + j]
        return out

    def mul_vector(self, vec: Sequence) -> List:
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        f = self.field
        out = []
        for i in range(self.rows):
            acc = f.zero()
            base = i * self.cols
            for j, v in enumerate(vec):
                acc = f.add(acc, f.mul(self.entries[base + j], v))
            out.append(acc)
        return out

    def transpose(self) -> "ExactMatrix":
        out = ExactMatrix.zeros(self.field, self.cols, self.rows)
        for i in range(self.rows):
            for j in range(self.cols):
                out.entries[j * self.rows + i] = self.entries[i * self.cols + j]
        return out

    def is_zero(self) -> bool:
        z = self.field.zero()
        return all(e == z for e in self.entries)

    def power(self, k: int) -> "ExactMatrix":
        if self.rows != self.cols:
            raise ValueError("power of non-square matrix")
        acc = ExactMatrix.identity(self.field, self.rows)
        base = self
        while k:
            if k & 1:
                acc = acc.mul(base)
            k >>= 1
            if k:
                base = base.mul(base)
        return acc

    @classmethod
    def block(cls, field: FieldSpec, grid: Sequence[Sequence["ExactMatrix"]]) -> "ExactMatrix":
        """Assemble a matrix from a 2d grid of blocks with consistent shapes."""
        row_heights = [g[0].rows for g in grid]
        col_widths = [b.cols for b in grid[0]] if grid else []
        total_r, total_c = sum(row_heights), sum(col_widths)
        out = cls.zeros(field, total_r, total_c)
        r_off = 0
        for bi, blockrow in enumerate(grid):
            c_off = 0
            for bj, blk in enumerate(blockrow):
                if blk.rows != row_heights[bi] or blk.cols != col_widths[bj]:
                    raise ValueError("inconsistent block shapes")
                for i in range(blk.rows):
                    out.entries[(r_off + i) * total_c + c_off:
                                (r_off + i) * total_c + c_off + blk.cols] = blk.row(i)
                c_off += blk.cols
            r_off += row_heights[bi]
        return out

    def _check_same_shape(self, other: "ExactMatrix"):
        if self.rows != other.rows or self.cols != other.cols or self.field != other.field:
            raise ValueError("matrix shape or field mismatch")

    # -- comparison / display ------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, ExactMatrix) and self.field == other.field
                and self.rows == other.rows and self.cols == other.cols
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.field, self.rows, self.cols, tuple(self.entries)))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))
        return f"[{body}]({self.rows}x{self.cols} over {self.field})"


# ---------------------------------------------------------------------------
# Echelon machinery
# ---------------------------------------------------------------------------


class Echelon:
    """Incremental reduced row echelon of a growing list of vectors.

    Rows are kept normalized (pivot 1) and fully reduced against each other,
    so `reduce` returns the canonical representative of a vector modulo the
    current row space: all pivot coordinates zeroed.
    """

    def __init__(self, field: FieldSpec, width: int):
        self.field = field
        self.width = width
        self.pivot_rows: dict = {}  # pivot column -> normalized row (list)

    def reduce(self, vec: Sequence) -> List:
        f = self.field
        v = list(vec)
        for piv, row in self.pivot_rows.items():
            c = v[piv]
            if c != 0:
                v = [f.sub(a, f.mul(c, b)) for a, b in zip(v, row)]
        return v

    def add(self, vec: Sequence) -> bool:
        """Reduce and absorb `vec`; return True if it enlarged the span."""
        f = self.field
        v = self.reduce(vec)
        piv = next((j for j, x in enumerate(v) if x != 0), None)
        if piv is None:
            return False
        c = f.inv(v[piv])
        v = [f.mul(c, x) for x in v]
        # back-substitute into existing rows to stay fully reduced
        for other_piv in list(self.pivot_rows):
            row = self.pivot_rows[other_piv]
            coeff = row[piv]
            if coeff != 0:
                self.pivot_rows[other_piv] = [f.sub(a, f.mul(coeff, b)) for a, b in zip(row, v)]
        self.pivot_rows[piv] = v
        return True

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def pivots(self) -> List[int]:
        return sorted(self.pivot_rows)

    def rows_sorted(self) -> List[List]:
        return [self.pivot_rows[p] for p in sorted(self.pivot_rows)]


def rref(m: ExactMatrix) -> Tuple[ExactMatrix, List[int], int]:
    """Reduced row echelon form: returns (reduced, pivot columns, rank)."""
    ech = Echelon(m.field, m.cols)
    for i in range(m.rows):
        ech.add(m.row(i))
    pivots = ech.pivots()
    rows = ech.rows_sorted()
    z = m.field.zero()
    flat = []
    for r in rows:
        flat.extend(r)
    flat.extend([z] * ((m.rows - len(rows)) * m.cols))
    return ExactMatrix(m.field, m.rows, m.cols, flat), pivots, len(pivots)


def rank(m: ExactMatrix) -> int:
    return rref(m)[2]


def kernel_basis(m: ExactMatrix) -> List[List]:
    """Independent column vectors spanning ker(m); count = cols - rank."""
    reduced, pivots, rk = rref(m)
    f = m.field
    free = [j for j in range(m.cols) if j not in pivots]
    basis = []
    for j in free:
        v = [f.zero()] * m.cols
        v[j] = f.one()
        for r_idx, p in enumerate(pivots):
            v[p] = f.neg(reduced.at(r_idx, j))
        basis.append(v)
    return basis


def solve(m: ExactMatrix, rhs: Sequence) -> Optional[List]:
    """Some exact solution x of m x = rhs, or None if inconsistent."""
    if len(rhs) != m.rows:
        raise ValueError("rhs length must equal row count")
    f = m.field
    aug = ExactMatrix(f, m.rows, m.cols + 1,
                      [x for i in range(m.rows) for x in (m.row(i) + [f.of(rhs[i])])])
    reduced, pivots, rk = rref(aug)
    if m.cols in pivots:
        return None
    x = [f.zero()] * m.cols
    for r_idx, p in enumerate(pivots):
        x[p] = reduced.at(r_idx, m.cols)
    return x


def invertible(m: ExactMatrix) -> bool:
    if m.rows != m.cols:
        return False
    return rank(m) == m.rows


def inverse(m: ExactMatrix) -> ExactMatrix:
    if m.rows != m.cols:
        raise ValueError("inverse of non-square matrix")
    f = m.field
    n = m.rows
    aug = ExactMatrix.block(f, [[m, ExactMatrix.identity(f, n)]])
    reduced, pivots, rk = rref(aug)
    if rk != n or pivots[:n] != list(range(n)):
        raise ValueError("matrix not invertible")
    out = ExactMatrix.zeros(f, n, n)
    for i in range(n):
        out.entries[i * n:(i + 1) * n] = reduced.row(i)[n:]
    return out


def select_independent_mod(candidates: Sequence[Sequence], subspace: Sequence[Sequence],
                           field: FieldSpec) -> List[int]:
    """Greedy indices of candidates independent modulo span(subspace).

    Candidates are scanned in input order; each one that enlarges the span of
    (subspace + already selected candidates) is kept. The result is the
    maximal greedy set.
    """
    widths = {len(v) for v in list(candidates) + list(subspace)}
    if len(widths) > 1:
        raise ValueError("all vectors must have the same length")
    width = widths.pop() if widths else 0
    ech = Echelon(field, width)
    for v in subspace:
        ech.add(v)
    chosen = []
    for idx, v in enumerate(candidates):
        if ech.add(v):
            chosen.append(idx)
    return chosen
