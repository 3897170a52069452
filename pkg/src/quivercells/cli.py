"""Command-line surface: reproducible experiment runs over document files.

Exit codes: 0 success, 2 input error, 3 budget exceeded or oracle undecided,
4 verification failure (coverage gap, overlap, or crosscheck mismatch).
Reports embed a hash of their inputs, so runs are self-describing.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from . import __version__
from .quivercore import BudgetExceeded
from .repspace import assemble_d, deform, middle_term, represent_basis
from .homalg import (DEFAULT_BUDGET, UndecidedError, analyze_end, is_isomorphic)
from .cellkit import Cell, subspace_tnf, tree_cell_recursion, grassmann_mosaic, verify_mosaic
from .toruscells import (GenericityError, SectionError, attracting_space,
                         cell_section, fixed_points, is_stable, poincare, schur_level,
                         scss_and_hn, verify_section)
from .kaccount import count_classes, crosscheck_cells, default_degree_bound, interpolate
from . import docio
from .docio import DocumentError, load_path, parse_field_flag

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_VERIFY = 4

_inputs_read: List[str] = []


def _read(path: str, expect: str):
    _inputs_read.append(path)
    return load_path(path, expect)


def _parse_map(text: str, keys: List[str], what: str):
    parts = text.split(",")
    if len(parts) != len(keys):
        raise DocumentError(f"{what} needs {len(keys)} comma-separated integers, got {text!r}")
    return {k: int(v) for k, v in zip(keys, parts)}


def _provenance(paths: List[str]) -> str:
    texts = []
    for p in paths:
        with open(p, "r", encoding="utf-8") as fh:
            texts.append(fh.read())
    return docio.content_hash(__version__, *texts)


def _emit(args, report: dict, lines: List[str]):
    for line in lines:
        print(line)
    if getattr(args, "out", None):
        report = dict(report)
        report.setdefault("version", __version__)
        if _inputs_read:
            report.setdefault("inputs", _provenance(_inputs_read))
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(docio.dumps(report))


def _print_pattern(label: str, pattern) -> List[str]:
    lines = [f"{label}:"]
    for key in pattern:
        lines.append(f"  {key}:")
        for row in pattern[key]:
            lines.append("    [ " + " ".join(row) + " ]")
    return lines


# -- subcommand implementations ----------------------------------------------


def cmd_hom(args):
    a = _read(args.rep_a, "representation")
    b = _read(args.rep_b, "representation")
    ep = assemble_d(a, b)
    lines = [f"hom_dim {ep.hom_dim}", f"ext_dim {ep.ext_dim}",
             f"inputs {_provenance([args.rep_a, args.rep_b])}"]
    _emit(args, {"hom_dim": ep.hom_dim, "ext_dim": ep.ext_dim}, lines)
    return EXIT_OK


def cmd_ext_basis(args):
    n = _read(args.rep_n, "representation")
    m = _read(args.rep_m, "representation")
    ep = assemble_d(n, m)
    rb = represent_basis(ep)
    lines = [f"ext_dim {ep.ext_dim}", f"selected {len(rb)} standard vectors"]
    coords = []
    for el in rb.elements:
        for (a, i, j) in el.coords():
            if el.blocks[a].at(i, j) != el.field.zero():
                coords.append({"arrow": a, "row": i, "col": j})
                lines.append(f"  {a}: source {j} -> target {i}")
    if not rb.complete:
        lines.append("WARNING: candidates do not span; partial basis")
    _emit(args, {"ext_dim": ep.ext_dim, "selected": coords, "complete": rb.complete}, lines)
    return EXIT_OK if rb.complete else EXIT_VERIFY


def cmd_middle_term(args):
    m = _read(args.rep_m, "representation")
    n = _read(args.rep_n, "representation")
    tau = _read(args.tau, "relement")
    lam = _read(args.lam, "relement") if args.lam else None
    mu = _read(args.mu, "relement") if args.mu else None
    b = middle_term(m, n, tau, lam, mu)
    text = docio.dumps(b)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text)
    return EXIT_OK


def cmd_deform(args):
    rep = _read(args.rep, "representation")
    lam = _read(args.lam, "relement")
    out = deform(rep, lam)
    text = docio.dumps(out)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text)
    return EXIT_OK


def cmd_indec(args):
    rep = _read(args.rep, "representation")
    analysis = analyze_end(rep, budget=args.budget)
    lines = [f"end_dim {analysis.end_dim}",
             f"indecomposable {analysis.is_local}",
             f"absolutely_indecomposable {analysis.is_absolutely_indec}"]
    if analysis.unit_count is not None:
        lines.append(f"aut_count {analysis.unit_count}")
    _emit(args, {"end_dim": analysis.end_dim, "indecomposable": analysis.is_local,
                 "absolutely_indecomposable": analysis.is_absolutely_indec,
                 "aut_count": analysis.unit_count}, lines)
    return EXIT_OK


def cmd_iso(args):
    a = _read(args.rep_a, "representation")
    b = _read(args.rep_b, "representation")
    ans = is_isomorphic(a, b, budget=args.budget, seed=args.seed)
    _emit(args, {"isomorphic": ans}, [f"isomorphic {ans}"])
    return EXIT_OK


def cmd_stable(args):
    rep = _read(args.rep, "representation")
    theta = _parse_map(args.theta, rep.quiver.vertices, "--theta")
    status = is_stable(rep, theta, budget=args.budget)
    _emit(args, {"status": status}, [f"stability {status}"])
    return EXIT_OK


def cmd_hn(args):
    rep = _read(args.rep, "representation")
    theta = _parse_map(args.theta, rep.quiver.vertices, "--theta")
    hn = scss_and_hn(rep, theta, budget=args.budget)
    lines = [f"hn_length {hn.length}"]
    for i, (dims, s) in enumerate(zip(hn.cumulative_dims, hn.slopes)):
        dstr = ",".join(str(dims.get(v, 0)) for v in rep.quiver.vertices)
        lines.append(f"  step {i + 1}: dims ({dstr}) slope {s}")
    _emit(args, {"length": hn.length,
                 "slopes": [str(s) for s in hn.slopes],
                 "cumulative_dims": hn.cumulative_dims}, lines)
    return EXIT_OK


def cmd_schur_level(args):
    quiver = _read(args.quiver, "quiver")
    alpha = _parse_map(args.alpha, quiver.vertices, "--alpha")
    level = schur_level(quiver, alpha, args.q, budget=args.budget)
    _emit(args, {"schur_level": level}, [f"schur_level {level}"])
    return EXIT_OK


def cmd_schubert_mosaic(args):
    from .quivercore import kronecker
    from .repspace import Representation
    field = parse_field_flag(args.field)
    q = kronecker(args.n)
    s0 = Representation.simple(q, field, "0")
    s1 = Representation.simple(q, field, "1")
    cell_m = Cell(s1, [], flags={"strong": "certified", "separating": "certified",
                                 "schurian": "certified"})
    cell_n = Cell(s0, [], flags={"strong": "certified", "separating": "certified",
                                 "schurian": "certified"})
    basis = represent_basis(assemble_d(s0, s1)).elements
    mosaic = grassmann_mosaic(cell_m, cell_n, basis, args.d)
    lines = [f"cells {len(mosaic.cells)}",
             f"dims {sorted(c.dim for c in mosaic.cells)}"]
    text = docio.dumps(mosaic)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        lines.append(text)
    for line in lines:
        print(line)
    return EXIT_OK


def cmd_tree_cells(args):
    cell_s = _read(args.cell_s, "cell")
    cell_t = _read(args.cell_t, "cell")
    basis = represent_basis(assemble_d(cell_s.base, cell_t.base)).elements
    mosaic = tree_cell_recursion(cell_s, cell_t, basis)
    print(f"cells {len(mosaic.cells)}")
    print(f"dims {sorted(c.dim for c in mosaic.cells)}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(docio.dumps(mosaic))
    return EXIT_OK


def cmd_subspace_tnf(args):
    field = parse_field_flag(args.field)
    mosaic = subspace_tnf(args.n, field)
    hist = mosaic.dims_histogram()
    lines = [f"cells {len(mosaic.cells)}",
             "dims " + " ".join(f"{d}:{hist[d]}" for d in sorted(hist))]
    for line in lines:
        print(line)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(docio.dumps(mosaic))
    return EXIT_OK


def cmd_mosaic_verify(args):
    mosaic = _read(args.mosaic, "mosaic")
    report = verify_mosaic(mosaic, args.q, budget=args.budget)
    lines = [f"covered {report.covered}",
             f"total {report.total_indec_classes}",
             f"multiply_covered {report.multiply_covered}",
             f"cellular_tnf {report.cellular_tnf_verified}"]
    _emit(args, {"q": args.q, "covered": report.covered,
                 "total": report.total_indec_classes,
                 "multiply_covered": report.multiply_covered,
                 "cellular_tnf": report.cellular_tnf_verified,
                 "inputs": _provenance([args.mosaic])}, lines)
    return EXIT_OK if report.cellular_tnf_verified else EXIT_VERIFY


def _fixed_points_from_args(args):
    quiver = _read(args.quiver, "quiver")
    alpha = _parse_map(args.alpha, quiver.vertices, "--alpha")
    theta = _parse_map(args.theta, quiver.vertices, "--theta")
    gamma = _parse_map(args.gamma, quiver.arrow_ids, "--gamma")
    report = fixed_points(quiver, alpha, theta, gamma, radius=args.window,
                          basis_order=args.basis_order, budget=args.budget)
    return report


def cmd_fixed_points(args):
    report = _fixed_points_from_args(args)
    lines = [f"fixed_points {len(report.points)} (complete within radius {report.radius})"]
    dims = []
    for cr in report.points:
        ad = cell_section(attracting_space(cr))
        dims.append(ad.cell_dim)
        lines.append(f"  cell_dim {ad.cell_dim}: fibers "
                     + " ".join(f"{v}@({','.join(map(str, chi))})x{d}"
                                for (v, chi), d in sorted(cr.fibers.items())))
    for w in report.skipped:
        lines.append(f"  skipped: {w}")
    _emit(args, {"count": len(report.points), "cell_dims": sorted(dims),
                 "radius": report.radius}, lines)
    return EXIT_OK


def cmd_att_cell(args):
    cr = _read(args.cover, "cover_rep")
    ad = attracting_space(cr)
    lines = []
    lines += _print_pattern("attracting_space", ad.attracting_pattern())
    lines += _print_pattern("unipotent_group", ad.unipotent_pattern())
    try:
        ad = cell_section(ad)
        lines += _print_pattern("section", ad.section_pattern())
        lines.append(f"cell_dim {ad.cell_dim}")
        if args.q:
            ok = verify_section(ad, args.q)
            lines.append(f"section_verified_q{args.q} {ok}")
            if not ok:
                for line in lines:
                    print(line)
                return EXIT_VERIFY
    except SectionError as exc:  # the attractor data stays useful without one
        lines.append(f"section unavailable: {exc}")
    _emit(args, {"cell_dim": ad.cell_dim,
                 "attracting": ad.attracting_pattern(),
                 "unipotent": ad.unipotent_pattern(),
                 "inputs": _provenance([args.cover])}, lines)
    return EXIT_OK


def cmd_poincare(args):
    report = _fixed_points_from_args(args)
    cells = [attracting_space(cr) for cr in report.points]
    coeffs = poincare(cells)
    lines = [f"poincare {coeffs}"]
    _emit(args, {"coefficients": coeffs}, lines)
    return EXIT_OK


def cmd_kac_count(args):
    quiver = _read(args.quiver, "quiver")
    alpha = _parse_map(args.alpha, quiver.vertices, "--alpha")
    sample = count_classes(quiver, alpha, args.q, budget=args.budget, shards=args.shards)
    lines = [f"q {sample.q}", f"points {sample.point_count}",
             f"indec_classes {sample.indec_classes}",
             f"abs_indec_classes {sample.abs_indec_classes}"]
    _emit(args, {"q": sample.q, "indec": sample.indec_classes,
                 "abs_indec": sample.abs_indec_classes,
                 "points": sample.point_count,
                 "inputs": _provenance([args.quiver])}, lines)
    return EXIT_OK


def cmd_kac_poly(args):
    quiver = _read(args.quiver, "quiver")
    alpha = _parse_map(args.alpha, quiver.vertices, "--alpha")
    primes = [int(x) for x in args.primes.split(",")]
    samples = [count_classes(quiver, alpha, p, budget=args.budget, shards=args.shards)
               for p in primes]
    bound = args.degree_bound if args.degree_bound is not None \
        else default_degree_bound(quiver, alpha)
    report = interpolate(samples, bound)
    lines = [f"polynomial {report.polynomial}",
             f"degree_bound {report.degree_bound_used}",
             f"conjecture2_nonneg {report.conjecture2_nonneg}",
             f"trusted {report.trusted}"]
    _emit(args, {"polynomial": report.polynomial, "trusted": report.trusted,
                 "nonneg": report.conjecture2_nonneg}, lines)
    return EXIT_OK if report.polynomial is not None else EXIT_VERIFY


def cmd_crosscheck(args):
    mosaic = _read(args.mosaic, "mosaic")
    quiver = _read(args.quiver, "quiver")
    alpha = _parse_map(args.alpha, quiver.vertices, "--alpha")
    primes = [int(x) for x in args.primes.split(",")]
    samples = [count_classes(quiver, alpha, p, budget=args.budget) for p in primes]
    bound = args.degree_bound if args.degree_bound is not None \
        else default_degree_bound(quiver, alpha)
    report = interpolate(samples, bound)
    if report.polynomial is None:
        print("interpolation failed")
        return EXIT_VERIFY
    verdict = crosscheck_cells(report, mosaic)
    lines = [f"polynomial {report.polynomial}",
             f"cells {verdict['cell_count']} value_at_one {verdict['value_at_one']}",
             f"per_coefficient " + " ".join(f"c{i}:{'ok' if ok else 'MISMATCH'}"
                                            for i, ok in sorted(verdict["per_coefficient"].items())),
             f"all_match {verdict['all_match']}"]
    _emit(args, verdict, lines)
    return EXIT_OK if verdict["all_match"] else EXIT_VERIFY


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quivercells",
                                description="exact quiver representation toolkit")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out=True):
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--shards", type=int, default=1)
        if out:
            sp.add_argument("--out", default=None)

    sp = sub.add_parser("hom", help="Hom/Ext dimensions of a pair")
    sp.add_argument("--rep-a", required=True)
    sp.add_argument("--rep-b", required=True)
    common(sp)
    sp.set_defaults(func=cmd_hom)

    sp = sub.add_parser("ext-basis", help="tree-shaped basis selection for Ext(N,M)")
    sp.add_argument("--rep-n", required=True)
    sp.add_argument("--rep-m", required=True)
    common(sp)
    sp.set_defaults(func=cmd_ext_basis)

    sp = sub.add_parser("middle-term", help="middle term of a parameter triple")
    sp.add_argument("--rep-m", required=True)
    sp.add_argument("--rep-n", required=True)
    sp.add_argument("--tau", required=True)
    sp.add_argument("--lam", default=None)
    sp.add_argument("--mu", default=None)
    common(sp)
    sp.set_defaults(func=cmd_middle_term)

    sp = sub.add_parser("deform", help="deform a representation by a self-parameter")
    sp.add_argument("--rep", required=True)
    sp.add_argument("--lam", required=True)
    common(sp)
    sp.set_defaults(func=cmd_deform)

    sp = sub.add_parser("indec", help="endomorphism analysis / indecomposability")
    sp.add_argument("--rep", required=True)
    common(sp)
    sp.set_defaults(func=cmd_indec)

    sp = sub.add_parser("iso", help="isomorphism oracle")
    sp.add_argument("--rep-a", required=True)
    sp.add_argument("--rep-b", required=True)
    common(sp)
    sp.set_defaults(func=cmd_iso)

    sp = sub.add_parser("stable", help="slope stability of a representation")
    sp.add_argument("--rep", required=True)
    sp.add_argument("--theta", required=True)
    common(sp)
    sp.set_defaults(func=cmd_stable)

    sp = sub.add_parser("hn", help="Harder-Narasimhan filtration")
    sp.add_argument("--rep", required=True)
    sp.add_argument("--theta", required=True)
    common(sp)
    sp.set_defaults(func=cmd_hn)

    sp = sub.add_parser("schur-level", help="max End dimension over indecomposables")
    sp.add_argument("--quiver", required=True)
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--q", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_schur_level)

    sp = sub.add_parser("schubert-mosaic", help="Grassmannian mosaic from simples")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--field", default="Q")
    common(sp)
    sp.set_defaults(func=cmd_schubert_mosaic)

    sp = sub.add_parser("tree-cells", help="tree-module cell recursion")
    sp.add_argument("--cell-s", required=True)
    sp.add_argument("--cell-t", required=True)
    common(sp)
    sp.set_defaults(func=cmd_tree_cells)

    sp = sub.add_parser("subspace-tnf", help="subspace-quiver cellular tree normal form")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--field", default="Q")
    common(sp)
    sp.set_defaults(func=cmd_subspace_tnf)

    sp = sub.add_parser("mosaic-verify", help="exhaustive mosaic coverage over F_q")
    sp.add_argument("--mosaic", required=True)
    sp.add_argument("--q", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_mosaic_verify)

    for name, fn in (("fixed-points", cmd_fixed_points), ("poincare", cmd_poincare)):
        sp = sub.add_parser(name)
        sp.add_argument("--quiver", required=True)
        sp.add_argument("--alpha", required=True)
        sp.add_argument("--theta", required=True)
        sp.add_argument("--gamma", required=True)
        sp.add_argument("--window", type=int, default=None)
        sp.add_argument("--basis-order", default="weight_asc")
        common(sp)
        sp.set_defaults(func=fn)

    sp = sub.add_parser("att-cell", help="attracting cell patterns of a cover lift")
    sp.add_argument("--cover", required=True)
    sp.add_argument("--q", type=int, default=None)
    common(sp)
    sp.set_defaults(func=cmd_att_cell)

    sp = sub.add_parser("kac-count", help="indecomposable class counts at one prime")
    sp.add_argument("--quiver", required=True)
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--q", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_kac_count)

    sp = sub.add_parser("kac-poly", help="interpolated class-count polynomial")
    sp.add_argument("--quiver", required=True)
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--q", dest="primes", required=True,
                    help="comma-separated primes")
    sp.add_argument("--degree-bound", type=int, default=None)
    common(sp)
    sp.set_defaults(func=cmd_kac_poly)

    sp = sub.add_parser("crosscheck", help="polynomial coefficients vs cell dimensions")
    sp.add_argument("--mosaic", required=True)
    sp.add_argument("--quiver", required=True)
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--q", dest="primes", required=True)
    sp.add_argument("--degree-bound", type=int, default=None)
    common(sp)
    sp.set_defaults(func=cmd_crosscheck)

    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _inputs_read.clear()
    try:
        return args.func(args)
    except (DocumentError, ValueError, FileNotFoundError, GenericityError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (UndecidedError, BudgetExceeded) as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
