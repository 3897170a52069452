"""Brute-force counting of (absolutely) indecomposable classes over prime
fields, exact polynomial interpolation, and mosaic crosschecks.

Class counts accumulate orbit weights exactly: every point contributes the
reciprocal of its orbit size, i.e. its automorphism count divided by the
order of the base change group. The accumulated total must land on an
integer, which is asserted, never rounded.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .exactfield import FieldSpec
from .quivercore import DimVector, Quiver, euler_form
from .repspace import all_points, point_count
from .homalg import DEFAULT_BUDGET, UndecidedError, end_scan
from .cellkit import Mosaic, gl_order


class KacSample:
    """Counts of indecomposable classes of one root at one prime."""

    def __init__(self, q: int, alpha: DimVector, indec_classes: int,
                 abs_indec_classes: int, point_count: int):
        self.q = q
        self.alpha = dict(alpha)
        self.indec_classes = indec_classes
        self.abs_indec_classes = abs_indec_classes
        self.point_count = point_count

    def __repr__(self):
        return (f"KacSample(q={self.q}, indec={self.indec_classes}, "
                f"abs={self.abs_indec_classes})")


class KacReport:
    def __init__(self, samples: List[KacSample], polynomial: Optional[List[int]],
                 degree_bound_used: int, conjecture2_nonneg: Optional[bool],
                 trusted: bool, cells_crosscheck: Optional[dict] = None):
        self.samples = samples
        self.polynomial = polynomial
        self.degree_bound_used = degree_bound_used
        self.conjecture2_nonneg = conjecture2_nonneg
        self.trusted = trusted
        self.cells_crosscheck = cells_crosscheck

    def evaluate(self, q: int) -> int:
        if self.polynomial is None:
            raise ValueError("no interpolated polynomial available")
        return sum(c * q ** i for i, c in enumerate(self.polynomial))

    def __repr__(self):
        return f"KacReport(poly={self.polynomial}, trusted={self.trusted})"


def count_classes(q: Quiver, alpha: DimVector, p: int,
                  budget: int = DEFAULT_BUDGET, shards: int = 1) -> KacSample:
    """Count indecomposable and absolutely indecomposable classes over F_p.

    Iterates every point of the representation space; shards partition the
    odometer and their exact partial sums are merged, so the result is
    independent of the shard count.
    """
    field = FieldSpec.prime(p)
    n_points = point_count(q, alpha, field)
    if n_points > budget:
        raise UndecidedError(f"{n_points} points exceed the budget {budget}")
    group = gl_order(field, {v: alpha.get(v, 0) for v in q.vertices})
    indec_total = Fraction(0)
    abs_total = Fraction(0)
    for shard in range(shards):
        indec_part = Fraction(0)
        abs_part = Fraction(0)
        for rep in all_points(q, alpha, field, start=shard, step=shards):
            indec, absolutely, units = end_scan(rep, budget)
            if indec:
                w = Fraction(units, group)
                indec_part += w
                if absolutely:
                    abs_part += w
        indec_total += indec_part
        abs_total += abs_part
    if indec_total.denominator != 1 or abs_total.denominator != 1:
        raise AssertionError("orbit-weight accumulation did not reach an integer")
    return KacSample(p, alpha, int(indec_total), int(abs_total), n_points)


def count_all_classes(q: Quiver, alpha: DimVector, p: int,
                      budget: int = DEFAULT_BUDGET) -> int:
    """Total isomorphism class count (not only indecomposables), for
    Burnside-style consistency checks."""
    field = FieldSpec.prime(p)
    if point_count(q, alpha, field) > budget:
        raise UndecidedError("point enumeration exceeds budget")
    group = gl_order(field, {v: alpha.get(v, 0) for v in q.vertices})
    from .homalg import analyze_end
    total = Fraction(0)
    for rep in all_points(q, alpha, field):
        analysis = analyze_end(rep, budget)
        total += Fraction(analysis.unit_count, group)
    if total.denominator != 1:
        raise AssertionError("orbit-weight accumulation did not reach an integer")
    return int(total)


def default_degree_bound(q: Quiver, alpha: DimVector) -> int:
    return max(0, 1 - euler_form(q, alpha, alpha))


def _lagrange(points: Sequence[tuple]) -> List[Fraction]:
    """Exact interpolation through (x, y) pairs; coefficients low to high."""
    n = len(points)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            new = [Fraction(0)] * (len(basis) + 1)
            for k, c in enumerate(basis):
                new[k] -= c * xj
                new[k + 1] += c
            basis = new
            denom *= xi - xj
        scale = Fraction(yi) / denom
        for k, c in enumerate(basis):
            coeffs[k] += scale * c
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def interpolate(samples: Sequence[KacSample], degree_bound: int) -> KacReport:
    """Fit the absolutely-indecomposable counts by an integer polynomial.

    Interpolates on degree_bound + 1 samples and verifies every remaining
    sample exactly; a report is trusted only when overdetermined. Integrality
    failures flag the report instead of raising.
    """
    samples = sorted(samples, key=lambda s: s.q)
    qs = [s.q for s in samples]
    if len(set(qs)) != len(qs):
        raise ValueError("samples must have distinct primes")
    if len(samples) < degree_bound + 1:
        raise ValueError("need at least degree_bound + 1 samples")
    pts = [(s.q, s.abs_indec_classes) for s in samples[:degree_bound + 1]]
    coeffs = _lagrange(pts)
    ok = all(c.denominator == 1 for c in coeffs)
    poly = [int(c) for c in coeffs] if ok else None
    if poly is not None:
        for s in samples[degree_bound + 1:]:
            if sum(c * s.q ** i for i, c in enumerate(poly)) != s.abs_indec_classes:
                ok = False
                poly = None
                break
    nonneg = all(c >= 0 for c in poly) if poly is not None else None
    trusted = ok and len(samples) > degree_bound + 1
    return KacReport(list(samples), poly, degree_bound, nonneg, trusted)


def crosscheck_cells(report: KacReport, mosaic: Mosaic) -> dict:
    """Compare polynomial coefficients against the mosaic's cell dimensions.

    The value at one must be the total cell count, and each coefficient the
    number of cells of that dimension. Mismatches are reported as findings,
    not raised.
    """
    if report.polynomial is None:
        raise ValueError("report carries no polynomial")
    hist = mosaic.dims_histogram()
    coeff_ok: Dict[int, bool] = {}
    degree = max(len(report.polynomial) - 1, max(hist, default=0))
    for i in range(degree + 1):
        c = report.polynomial[i] if i < len(report.polynomial) else 0
        coeff_ok[i] = (c == hist.get(i, 0))
    total_ok = (sum(report.polynomial) == len(mosaic.cells))
    verdict = {
        "value_at_one": sum(report.polynomial),
        "cell_count": len(mosaic.cells),
        "total_match": total_ok,
        "per_coefficient": coeff_ok,
        "all_match": total_ok and all(coeff_ok.values()),
    }
    report.cells_crosscheck = verdict
    return verdict
