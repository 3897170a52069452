import random

import pytest

from quivercells import ExactMatrix, FieldSpec, Quiver, kronecker
from quivercells.quivercore import cover_window
from quivercells.repspace import Representation
from quivercells.toruscells import CoverRepresentation

QQ = FieldSpec.rationals()
F2 = FieldSpec.prime(2)
F3 = FieldSpec.prime(3)
F5 = FieldSpec.prime(5)


@pytest.fixture
def k2():
    return kronecker(2)


@pytest.fixture
def k3():
    return kronecker(3)


def rep_T_i(quiver, field, i):
    """The (1,1) representation carried by the i-th arrow of a Kronecker quiver."""
    a = quiver.arrow_ids[i]
    return Representation.from_entries(quiver, field, {"0": 1, "1": 1},
                                       {a: [[1]]})


def worked_example_pair(field=QQ):
    """The two tree modules of the three-arrow example: a single-arrow module
    and a two-arm module with arms labeled b and a."""
    k3 = kronecker(3)
    t1 = Representation.from_entries(k3, field, {"0": 1, "1": 1}, {"a": [[1]]})
    t2 = Representation.from_entries(k3, field, {"0": 1, "1": 2},
                                     {"a": [[0], [1]], "b": [[1], [0]]})
    return k3, t1, t2


def k21_quiver():
    return Quiver(["0", "1", "2"], [("a", "0", "1"), ("b", "0", "1"), ("c", "2", "1")])


def extended_subspace_quiver(n):
    verts = ["q0"] + [f"q{i}" for i in range(1, n + 2)]
    arrows = [("a1", "q1", "q0"), ("a2", "q1", "q0")]
    arrows += [(f"b{i}", f"q{i+1}", "q0") for i in range(1, n + 1)]
    return Quiver(verts, arrows)


def k3_cover_lift(field=QQ, basis_order="weight_asc"):
    """The (2,3) tree lift of the three-arrow quiver with scaling (1,3,5)."""
    k3 = kronecker(3)
    fibers = {("0", (0, 0, 0)): 1, ("0", (0, -1, 1)): 1,
              ("1", (1, 0, 0)): 1, ("1", (0, 0, 1)): 1, ("1", (0, -1, 2)): 1}
    one = ExactMatrix.from_rows(field, [[1]])
    mats = {("a", (0, 0, 0)): one, ("c", (0, 0, 0)): one,
            ("b", (0, -1, 1)): one, ("c", (0, -1, 1)): one}
    window = cover_window(k3, 4)
    return CoverRepresentation(window, field, fibers, mats,
                               {"a": 1, "b": 3, "c": 5}, basis_order=basis_order)


def random_quiver(rng, max_vertices=3, max_arrows=4):
    nv = rng.randint(1, max_vertices)
    verts = [str(i) for i in range(nv)]
    na = rng.randint(1, max_arrows)
    arrows = []
    for k in range(na):
        arrows.append((f"a{k}", rng.choice(verts), rng.choice(verts)))
    return Quiver(verts, arrows)


def random_dims(rng, quiver, max_dim=3, allow_zero=True):
    lo = 0 if allow_zero else 1
    dims = {v: rng.randint(lo, max_dim) for v in quiver.vertices}
    if sum(dims.values()) == 0:
        dims[quiver.vertices[0]] = 1
    return dims


def seeded(seed):
    return random.Random(seed)
