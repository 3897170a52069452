import pytest

from quivercells import (ExactMatrix, Quiver, coefficient_quiver, euler_form,
                         is_tree, kronecker)
from quivercells.quivercore import (canonical_translate, compatible_dimvectors,
                                    cover_window, pushdown)
from quivercells.repspace import Representation, middle_term, RElement
from quivercells.toruscells import CoverRepresentation

from conftest import QQ, k21_quiver, rep_T_i, worked_example_pair


def test_quiver_validation():
    with pytest.raises(ValueError):
        Quiver(["0", "0"], [])
    with pytest.raises(ValueError):
        Quiver(["0"], [("a", "0", "1")])
    q = Quiver(["0"], [("a", "0", "0")])  # loops allowed
    assert q.arrows_into("0") == ["a"] and q.arrows_out_of("0") == ["a"]


def test_euler_form_kronecker():
    k3 = kronecker(3)
    one = {"0": 1, "1": 1}
    assert euler_form(k3, one, one) == -1


def test_euler_form_extended_kronecker_moduli_dimension():
    # dimension of the stable moduli space for (n,n,1) equals n
    q = k21_quiver()
    for n in (1, 2, 3):
        alpha = {"0": n, "1": n, "2": 1}
        assert 1 - euler_form(q, alpha, alpha) == n


def test_euler_form_zero_vector():
    k3 = kronecker(3)
    assert euler_form(k3, {}, {"0": 2, "1": 1}) == 0


def test_coefficient_quiver_single_arrow_module():
    k3 = kronecker(3)
    t = rep_T_i(k3, QQ, 0)
    cq = coefficient_quiver(t)
    assert cq.vertex_count() == 2 and cq.edge_count() == 1
    (aid, s, tgt) = cq.carrier.arrows[0]
    assert cq.arrow_labels[aid] == "a"
    assert is_tree(cq)


def test_coefficient_quiver_semisimple_has_no_arrows():
    k3 = kronecker(3)
    rep = Representation.zero(k3, QQ, {"0": 1, "1": 1})
    cq = coefficient_quiver(rep)
    assert cq.edge_count() == 0
    assert not is_tree(cq)  # two isolated vertices


def test_coefficient_quiver_of_worked_example_middle_term():
    k3, t1, t2 = worked_example_pair()
    e = RElement.standard_vector(t1, t2, "c", 0, 0)
    b = middle_term(t2, t1, e)
    cq = coefficient_quiver(b)
    assert cq.vertex_count() == 5 and cq.edge_count() == 4
    assert is_tree(cq)
    labels = sorted(cq.arrow_labels.values())
    assert labels == ["a", "a", "b", "c"]


def test_is_tree_invariant_under_vertex_relabeling():
    k3, t1, t2 = worked_example_pair()
    e = RElement.standard_vector(t1, t2, "c", 0, 0)
    b = middle_term(t2, t1, e)
    basis = {"0": ["x", "y"], "1": ["u", "v", "w"]}
    assert is_tree(coefficient_quiver(b, basis))


def test_single_vertex_tree():
    q = Quiver(["0"], [])
    rep = Representation.zero(q, QQ, {"0": 1})
    assert is_tree(coefficient_quiver(rep))


def test_cover_window_radius_zero_and_one():
    k2 = kronecker(2)
    w0 = cover_window(k2, 0)
    assert w0.vertices == [("0", (0, 0)), ("1", (0, 0))]
    assert w0.arrows == []
    w1 = cover_window(k2, 1)
    assert set(w1.vertices) == {("0", (0, 0)), ("1", (0, 0)), ("1", (1, 0)),
                                ("1", (0, 1)), ("0", (-1, 0)), ("0", (0, -1))}
    assert len(w1.arrows) == 4


def test_cover_window_contains_tree_lift_support():
    # a window of radius >= diameter contains the support of a fixed tree lift
    k3, t1, t2 = worked_example_pair()
    w = cover_window(k3, 4)
    assert w.contains("0", (0, 0, 0))
    assert w.contains("1", (0, -1, 2))


def test_pushdown_simple_and_single_arrow():
    k2 = kronecker(2)
    w = cover_window(k2, 1)
    cr = CoverRepresentation(w, QQ, {("0", (0, 0)): 1}, {}, {"a": 1, "b": 0})
    s0 = pushdown(cr)
    assert s0.dims == {"0": 1, "1": 0}
    one = ExactMatrix.from_rows(QQ, [[1]])
    cr2 = CoverRepresentation(w, QQ, {("0", (0, 0)): 1, ("1", (1, 0)): 1},
                              {("a", (0, 0)): one}, {"a": 1, "b": 0})
    t = pushdown(cr2)
    assert t == rep_T_i(k2, QQ, 0)


def test_pushdown_of_worked_cover_lift_matches_displayed_matrices():
    from conftest import k3_cover_lift
    cr = k3_cover_lift()
    t = pushdown(cr)
    assert t.dims == {"0": 2, "1": 3}
    rows = lambda a: t.matrices[a].to_rows()
    assert rows("a") == [[1, 0], [0, 0], [0, 0]]
    assert rows("b") == [[0, 0], [0, 1], [0, 0]]
    assert rows("c") == [[0, 0], [1, 0], [0, 1]]


def test_coefficient_quiver_of_pushdown_counts_cover_entries():
    from conftest import k3_cover_lift
    cr = k3_cover_lift()
    t = pushdown(cr)
    cq = coefficient_quiver(t)
    nonzero = sum(1 for m in cr.mats.values()
                  for x in m.entries if x != 0)
    assert cq.edge_count() == nonzero


def test_compatible_dimvectors_simple_and_zero():
    k2 = kronecker(2)
    w = cover_window(k2, 1)
    assert compatible_dimvectors(w, {"0": 1}) == [{("0", (0, 0)): 1}]
    assert compatible_dimvectors(w, {}) == [{}]


def test_compatible_dimvectors_deduplicates_translates():
    k2 = kronecker(2)
    w = cover_window(k2, 1)
    classes = compatible_dimvectors(w, {"0": 1, "1": 1})
    keys = [canonical_translate(c, k2)[0] for c in classes]
    assert len(keys) == len(set(keys))
    # the two connected classes (one per arrow) both occur
    deltas = set()
    for c in classes:
        (chi0,) = [chi for (v, chi) in c if v == "0"]
        (chi1,) = [chi for (v, chi) in c if v == "1"]
        deltas.add(tuple(b - a for a, b in zip(chi0, chi1)))
    assert (1, 0) in deltas and (0, 1) in deltas


def test_compatible_dimvectors_include_fixed_point_supports():
    # the displayed extended-Kronecker support patterns occur among the
    # compatible classes of a large enough window (n = 2 here)
    from quivercells.toruscells import fixed_points
    q = k21_quiver()
    rep = fixed_points(q, {"0": 2, "1": 2, "2": 1}, {"0": 1, "1": 0, "2": 1},
                       {"a": 1, "b": 3, "c": 1})
    w = cover_window(q, 4)
    classes = compatible_dimvectors(w, {"0": 2, "1": 2, "2": 1}, budget=10 ** 7)
    keys = {canonical_translate(c, q)[0] for c in classes}
    assert len(rep.points) == 3
    for cr in rep.points:
        assert canonical_translate(cr.fibers, q)[0] in keys
