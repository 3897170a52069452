from quivercells import ExactMatrix, FieldSpec, euler_form, kronecker
from quivercells.quivercore import subspace_quiver
from quivercells.repspace import (RElement, Representation, all_points, assemble_d,
                                  deform, direct_sum, hom_basis, middle_term,
                                  random_representation, represent_basis, restrict)
from quivercells.homalg import is_isomorphic

from conftest import (QQ, F2, F3, F5, random_dims, random_quiver, rep_T_i, seeded,
                      worked_example_pair)


def nonzero_coords(el):
    return [(a, i, j) for (a, i, j) in el.coords() if el.blocks[a].at(i, j) != el.field.zero()]


# -- assemble_d -----------------------------------------------------------------


def test_ext_presentation_simples_kronecker():
    k3 = kronecker(3)
    s0 = Representation.simple(k3, QQ, "0")
    s1 = Representation.simple(k3, QQ, "1")
    ep = assemble_d(s0, s1)
    assert ep.d_matrix.cols == 0  # no common support, Hom domain is zero
    assert ep.hom_dim == 0 and ep.ext_dim == 3


def test_ext_presentation_simple_self():
    q = subspace_quiver(2)
    s = Representation.simple(q, QQ, "q1")
    ep = assemble_d(s, s)
    assert ep.hom_dim == 1 and ep.ext_dim == 0


def test_ext_presentation_arrow_module_self():
    k3 = kronecker(3)
    t = rep_T_i(k3, QQ, 0)
    ep = assemble_d(t, t)
    assert ep.hom_dim == 1 and ep.ext_dim == 2  # n - 1 for n = 3


def test_euler_identity_randomized():
    rng = seeded(99)
    for field in (QQ, F5):
        for _ in range(40):
            q = random_quiver(rng)
            n = random_representation(q, field, random_dims(rng, q), rng)
            m = random_representation(q, field, random_dims(rng, q), rng)
            ep = assemble_d(n, m)
            assert ep.hom_dim - ep.ext_dim == euler_form(q, n.dims, m.dims)


# -- hom_basis ------------------------------------------------------------------


def test_hom_simples_empty():
    k3 = kronecker(3)
    s0 = Representation.simple(k3, QQ, "0")
    s1 = Representation.simple(k3, QQ, "1")
    assert hom_basis(s0, s1) == []


def test_hom_of_worked_example_pair():
    k3, t1, t2 = worked_example_pair()
    basis = hom_basis(t2, t1)
    assert len(basis) == 1
    f = basis[0]
    # the generator kills the b-arm vertex and matches the two a-edges
    assert f["1"].at(0, 0) == 0
    assert f["0"].at(0, 0) == f["1"].at(0, 1) != 0


def test_end_of_arrow_module_is_scalars():
    k3 = kronecker(3)
    t = rep_T_i(k3, QQ, 1)
    basis = hom_basis(t, t)
    assert len(basis) == 1
    f = basis[0]
    assert f["0"].at(0, 0) == f["1"].at(0, 0) != 0


def test_hom_vectors_satisfy_intertwining():
    rng = seeded(3)
    for _ in range(15):
        q = random_quiver(rng)
        n = random_representation(q, F3, random_dims(rng, q), rng)
        m = random_representation(q, F3, random_dims(rng, q), rng)
        for f in hom_basis(n, m):
            for a, s, t in q.arrows:
                assert f[t].mul(n.matrices[a]) == m.matrices[a].mul(f[s])


# -- pi_reduce ------------------------------------------------------------------


def test_pi_reduce_zero_image_is_identity():
    k3 = kronecker(3)
    s0 = Representation.simple(k3, QQ, "0")
    s1 = Representation.simple(k3, QQ, "1")
    ep = assemble_d(s0, s1)
    f = RElement.standard_vector(s0, s1, "b", 0, 0)
    assert ep.pi_reduce(f) == f


def test_pi_reduce_kills_image():
    rng = seeded(17)
    for _ in range(10):
        q = random_quiver(rng)
        n = random_representation(q, F3, random_dims(rng, q), rng)
        m = random_representation(q, F3, random_dims(rng, q), rng)
        ep = assemble_d(n, m)
        zero = RElement.space_of(n, m)
        for j in range(ep.d_matrix.cols):
            col = [ep.d_matrix.at(i, j) for i in range(ep.d_matrix.rows)]
            assert ep.pi_reduce(zero.with_flat(col)).is_zero()


def test_pi_reduce_linear_idempotent_and_coset_constant():
    rng = seeded(29)
    for _ in range(10):
        q = random_quiver(rng)
        n = random_representation(q, F3, random_dims(rng, q), rng)
        m = random_representation(q, F3, random_dims(rng, q), rng)
        ep = assemble_d(n, m)
        zero = RElement.space_of(n, m)
        dim = zero.dim()
        f = zero.with_flat([rng.randrange(3) for _ in range(dim)])
        g = zero.with_flat([rng.randrange(3) for _ in range(dim)])
        red = ep.pi_reduce(f)
        assert ep.pi_reduce(red) == red
        assert ep.pi_reduce(f.add(g)) == ep.pi_reduce(ep.pi_reduce(f).add(ep.pi_reduce(g)))
        if ep.d_matrix.cols:
            col = [ep.d_matrix.at(i, 0) for i in range(dim)]
            assert ep.pi_reduce(f.add(zero.with_flat(col))) == red


# -- represent_basis -------------------------------------------------------------


def test_represent_basis_simples_all_arrows():
    k3 = kronecker(3)
    s0 = Representation.simple(k3, QQ, "0")
    s1 = Representation.simple(k3, QQ, "1")
    rb = represent_basis(assemble_d(s0, s1))
    assert rb.complete and len(rb) == 3
    assert [nonzero_coords(e) for e in rb.elements] == \
        [[("a", 0, 0)], [("b", 0, 0)], [("c", 0, 0)]]


def test_represent_basis_arrow_module_drops_own_arrow():
    k3 = kronecker(3)
    t = rep_T_i(k3, QQ, 0)
    rb = represent_basis(assemble_d(t, t))
    assert rb.complete
    assert [nonzero_coords(e) for e in rb.elements] == [[("b", 0, 0)], [("c", 0, 0)]]


def test_represent_basis_isotropic_subspace_example():
    # the two-element tree-shaped basis connecting the exceptional pair
    q = subspace_quiver(4)
    m_b1 = Representation.from_entries(q, QQ, {"q0": 1, "q1": 1}, {"a1": [[1]]})
    m_b2 = Representation.from_entries(q, QQ, {"q0": 1, "q2": 1, "q3": 1, "q4": 1},
                                       {"a2": [[1]], "a3": [[1]], "a4": [[1]]})
    ep = assemble_d(m_b2, m_b1)
    assert ep.ext_dim == 2
    rb = represent_basis(ep)
    assert rb.complete
    assert [nonzero_coords(e) for e in rb.elements] == [[("a2", 0, 0)], [("a3", 0, 0)]]


def test_represent_basis_size_matches_ext_dim_on_random_instances():
    rng = seeded(7)
    for _ in range(20):
        q = random_quiver(rng)
        n = random_representation(q, F3, random_dims(rng, q), rng)
        m = random_representation(q, F3, random_dims(rng, q), rng)
        ep = assemble_d(n, m)
        rb = represent_basis(ep)
        assert rb.complete and len(rb) == ep.ext_dim


# -- middle_term / deform ---------------------------------------------------------


def test_middle_term_zero_class_is_direct_sum():
    k3, t1, t2 = worked_example_pair()
    z = RElement.space_of(t1, t2)
    assert middle_term(t2, t1, z) == direct_sum(t2, t1)


def test_middle_term_of_arrow_class():
    k3 = kronecker(3)
    s0 = Representation.simple(k3, QQ, "0")
    s1 = Representation.simple(k3, QQ, "1")
    e = RElement.standard_vector(s0, s1, "a", 0, 0)
    b = middle_term(s1, s0, e)
    assert b.dims == {"0": 1, "1": 1}
    assert b.matrices["a"].at(0, 0) == 1
    assert b.matrices["b"].is_zero() and b.matrices["c"].is_zero()


def test_middle_term_canonical_maps_are_morphisms():
    from quivercells.homalg import inclusion_of_sub, projection_onto_quotient
    rng = seeded(31)
    for _ in range(10):
        q = random_quiver(rng)
        m = random_representation(q, F3, random_dims(rng, q), rng)
        n = random_representation(q, F3, random_dims(rng, q), rng)
        tau = RElement.space_of(n, m).with_flat(
            [rng.randrange(3) for _ in range(RElement.space_of(n, m).dim())])
        b = middle_term(m, n, tau)
        inclusion_of_sub(m, n, b)          # validates the morphism equations
        projection_onto_quotient(m, n, b)


def test_deform_zero_and_arrow_module():
    k3 = kronecker(3)
    t = rep_T_i(k3, QQ, 1)
    z = RElement.space_of(t, t)
    assert deform(t, z) == t
    lam = RElement(k3, QQ, t.dims, t.dims,
                   {"a": ExactMatrix.from_rows(QQ, [[5]]),
                    "c": ExactMatrix.from_rows(QQ, [["1/2"]])})
    d = deform(t, lam)
    assert d.matrices["a"].at(0, 0) == 5
    assert d.matrices["b"].at(0, 0) == 1
    assert str(d.matrices["c"].at(0, 0)) == "1/2"


def test_deform_jordan_pattern():
    # the (2,2) tree module deformed along its connecting parameter
    k2 = kronecker(2)
    t = Representation.from_entries(k2, QQ, {"0": 2, "1": 2},
                                    {"a": [[1, 0], [0, 1]], "b": [[0, 1], [0, 0]]})
    f = RElement(k2, QQ, t.dims, t.dims, {"b": ExactMatrix.identity(QQ, 2)})
    d = deform(t, f)
    assert d.matrices["a"] == ExactMatrix.identity(QQ, 2)
    assert d.matrices["b"].to_rows() == [[1, 1], [0, 1]]


def test_direct_sum_dims_and_zero_summand():
    k3 = kronecker(3)
    s0 = Representation.simple(k3, QQ, "0")
    s1 = Representation.simple(k3, QQ, "1")
    d = direct_sum(s0, s1)
    assert d.dims == {"0": 1, "1": 1}
    assert all(d.matrices[a].is_zero() for a in "abc")
    z = Representation.zero(k3, QQ, {})
    assert direct_sum(s0, z) == s0


def test_restrict():
    q = subspace_quiver(4)
    m = Representation.from_entries(
        q, QQ, {"q0": 2, "q1": 1, "q2": 1, "q3": 1, "q4": 1},
        {"a1": [[1], [0]], "a2": [[1], [1]], "a3": [[0], [1]], "a4": [[0], [1]]})
    assert restrict(m, q.vertices) == m
    empty = restrict(m, [])
    assert empty.total_dim() == 0
    sub = restrict(m, ["q0", "q1", "q2", "q3"])
    assert sub.dims == {"q0": 2, "q1": 1, "q2": 1, "q3": 1, "q4": 0}
    assert sub.matrices["a1"] == m.matrices["a1"]
    assert sub.matrices["a4"].cols == 0


def test_split_iff_class_vanishes():
    rng = seeded(47)
    checked_nonzero = 0
    for _ in range(25):
        q = random_quiver(rng, max_vertices=2, max_arrows=2)
        m = random_representation(q, F2, random_dims(rng, q, max_dim=2), rng)
        n = random_representation(q, F2, random_dims(rng, q, max_dim=2), rng)
        ep = assemble_d(n, m)
        zero = RElement.space_of(n, m)
        f = zero.with_flat([rng.randrange(2) for _ in range(zero.dim())])
        b = middle_term(m, n, f)
        split = is_isomorphic(b, direct_sum(m, n))
        assert split == ep.pi_reduce(f).is_zero()
        if not ep.pi_reduce(f).is_zero():
            checked_nonzero += 1
    assert checked_nonzero > 0


def test_all_points_sharded_union_is_partition():
    k2 = kronecker(2)
    dims = {"0": 1, "1": 1}
    full = [r.key() for r in all_points(k2, dims, F3)]
    sharded = []
    for s in range(3):
        sharded.extend(r.key() for r in all_points(k2, dims, F3, start=s, step=3))
    assert sorted(full) == sorted(sharded) and len(full) == 9


def test_represents_subspace_checker():
    from quivercells.repspace import represents_subspace
    k3 = kronecker(3)
    t = rep_T_i(k3, QQ, 0)
    ep = assemble_d(t, t)
    e_a = RElement.standard_vector(t, t, "a", 0, 0)
    e_b = RElement.standard_vector(t, t, "b", 0, 0)
    e_c = RElement.standard_vector(t, t, "c", 0, 0)
    assert represents_subspace(ep, [e_b, e_c])
    assert not represents_subspace(ep, [e_a])          # the a-direction is a coboundary
    assert not represents_subspace(ep, [e_b, e_b])     # dependent set
