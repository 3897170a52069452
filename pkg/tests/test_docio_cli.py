import json

import pytest

from quivercells import ExactMatrix, FieldSpec, kronecker
from quivercells.quivercore import subspace_quiver
from quivercells.repspace import RElement, Representation
from quivercells.cellkit import Cell, Mosaic, subspace_tnf
from quivercells import docio
from quivercells.cli import main

from conftest import QQ, F2, k3_cover_lift, k21_quiver, rep_T_i, worked_example_pair


# -- round trips ---------------------------------------------------------------


def roundtrip(value):
    kind, back = docio.loads(docio.dumps(value))
    return back


def test_quiver_roundtrip():
    q = k21_quiver()
    assert roundtrip(q) == q


def test_representation_roundtrip_rational_entries():
    k2 = kronecker(2)
    rep = Representation.from_entries(k2, QQ, {"0": 2, "1": 1},
                                      {"a": [["1/2", "-3"]], "b": [[0, "7"]]})
    back = roundtrip(rep)
    assert back == rep
    assert docio.dumps(back) == docio.dumps(rep)


def test_representation_roundtrip_prime_field():
    k2 = kronecker(2)
    rep = rep_T_i(k2, F2, 1)
    assert roundtrip(rep) == rep


def test_relement_roundtrip_sparse_blocks():
    k3, t1, t2 = worked_example_pair()
    el = RElement.standard_vector(t1, t2, "c", 0, 0)
    payload = docio.relement_payload(el)
    assert set(payload["blocks"]) == {"c"}  # zero blocks omitted
    assert roundtrip(el) == el


def test_cell_and_mosaic_roundtrip():
    mosaic = subspace_tnf(4, F2)
    back = roundtrip(mosaic)
    assert len(back.cells) == len(mosaic.cells)
    for a, b in zip(mosaic.cells, back.cells):
        assert a.base == b.base and a.params == b.params and a.flags == b.flags


def test_cover_rep_roundtrip():
    cr = k3_cover_lift()
    back = roundtrip(cr)
    assert back.fibers == cr.fibers
    assert back.gamma == cr.gamma
    assert back.basis_order == cr.basis_order
    assert set(back.mats) == set(cr.mats)
    for k in cr.mats:
        assert back.mats[k] == cr.mats[k]


def test_malformed_fraction_names_path():
    k2 = kronecker(2)
    rep = rep_T_i(k2, QQ, 0)
    doc = json.loads(docio.dumps(rep))
    doc["payload"]["matrices"]["a"][0][0] = "3/0"
    with pytest.raises(docio.DocumentError) as err:
        docio.loads(json.dumps(doc))
    assert "matrices.a[0][0]" in str(err.value)


def test_wrong_schema_and_kind_rejected():
    with pytest.raises(docio.DocumentError):
        docio.loads("{\"schema_version\": \"0\", \"kind\": \"quiver\", \"payload\": {}}")
    with pytest.raises(docio.DocumentError):
        docio.loads("not json at all {")
    with pytest.raises(docio.DocumentError):
        docio.loads("{\"schema_version\": \"1\", \"kind\": \"nope\", \"payload\": {}}")


def test_shape_violation_reported():
    k2 = kronecker(2)
    rep = rep_T_i(k2, QQ, 0)
    doc = json.loads(docio.dumps(rep))
    doc["payload"]["matrices"]["a"] = [[1, 2]]
    with pytest.raises(docio.DocumentError):
        docio.loads(json.dumps(doc))


def test_parse_field_flag():
    assert docio.parse_field_flag("Q") == QQ
    assert docio.parse_field_flag("Fp:5") == FieldSpec.prime(5)
    with pytest.raises(docio.DocumentError):
        docio.parse_field_flag("R")


# -- CLI ------------------------------------------------------------------------


def write_doc(tmp_path, name, value):
    path = tmp_path / name
    path.write_text(docio.dumps(value), encoding="utf-8")
    return str(path)


def test_cli_hom_and_exit_codes(tmp_path, capsys):
    k3, t1, t2 = worked_example_pair()
    a = write_doc(tmp_path, "t1.json", t1)
    b = write_doc(tmp_path, "t2.json", t2)
    assert main(["hom", "--rep-a", a, "--rep-b", b]) == 0
    out = capsys.readouterr().out
    assert "hom_dim 0" in out and "ext_dim 3" in out


def test_cli_input_error_is_exit_2(tmp_path, capsys):
    missing = str(tmp_path / "nope.json")
    assert main(["hom", "--rep-a", missing, "--rep-b", missing]) == 2


def test_cli_budget_error_is_exit_3(tmp_path, capsys):
    k2 = kronecker(2)
    z = Representation.zero(k2, F2, {"0": 2, "1": 2})
    a = write_doc(tmp_path, "z.json", z)
    assert main(["iso", "--rep-a", a, "--rep-b", a, "--budget", "2"]) == 3


def test_cli_ext_basis(tmp_path, capsys):
    k3, t1, t2 = worked_example_pair()
    n = write_doc(tmp_path, "n.json", t1)
    m = write_doc(tmp_path, "m.json", t2)
    assert main(["ext-basis", "--rep-n", n, "--rep-m", m]) == 0
    out = capsys.readouterr().out
    assert "selected 3 standard vectors" in out


def test_cli_middle_term_and_indec(tmp_path, capsys):
    k3, t1, t2 = worked_example_pair()
    m = write_doc(tmp_path, "m.json", t2)
    n = write_doc(tmp_path, "n.json", t1)
    e = RElement.standard_vector(t1, t2, "c", 0, 0)
    tau = write_doc(tmp_path, "tau.json", e)
    out_path = str(tmp_path / "b.json")
    assert main(["middle-term", "--rep-m", m, "--rep-n", n, "--tau", tau,
                 "--out", out_path]) == 0
    b = docio.load_path(out_path, "representation")
    assert b.dims == {"0": 2, "1": 3}
    # indecomposability of the middle term over F_2
    b2 = docio.load_path(out_path, "representation")
    from quivercells.cellkit import _cast_rep
    bf2 = write_doc(tmp_path, "bf2.json", _cast_rep(b2, F2))
    assert main(["indec", "--rep", bf2]) == 0
    assert "indecomposable True" in capsys.readouterr().out


def test_cli_subspace_tnf_and_mosaic_verify(tmp_path, capsys):
    mosaic_path = str(tmp_path / "mosaic.json")
    assert main(["subspace-tnf", "--n", "4", "--field", "Fp:2",
                 "--out", mosaic_path]) == 0
    out = capsys.readouterr().out
    assert "cells 5" in out
    assert main(["mosaic-verify", "--mosaic", mosaic_path, "--q", "2"]) == 0
    out = capsys.readouterr().out
    assert "covered 6" in out and "total 6" in out and "cellular_tnf True" in out


def test_cli_mosaic_verify_failure_is_exit_4(tmp_path, capsys):
    k2 = kronecker(2)
    lone = Mosaic({"0": 1, "1": 1}, [Cell(rep_T_i(k2, F2, 0), [])])
    path = write_doc(tmp_path, "lone.json", lone)
    assert main(["mosaic-verify", "--mosaic", path, "--q", "2"]) == 4


def test_cli_att_cell_prints_patterns(tmp_path, capsys):
    cover = write_doc(tmp_path, "cover.json", k3_cover_lift())
    assert main(["att-cell", "--cover", cover, "--q", "2"]) == 0
    out = capsys.readouterr().out
    assert "attracting_space" in out and "section" in out
    assert "cell_dim 4" in out
    assert "section_verified_q2 True" in out


def test_cli_poincare_k21(tmp_path, capsys):
    q = write_doc(tmp_path, "q.json", k21_quiver())
    assert main(["poincare", "--quiver", q, "--alpha", "3,3,1",
                 "--theta", "1,0,1", "--gamma", "1,3,1",
                 "--basis-order", "weight_desc"]) == 0
    out = capsys.readouterr().out
    assert "poincare [1, 0, 1, 0, 1, 0, 1]" in out


def test_cli_fixed_points_k21(tmp_path, capsys):
    q = write_doc(tmp_path, "q.json", k21_quiver())
    assert main(["fixed-points", "--quiver", q, "--alpha", "2,2,1",
                 "--theta", "1,0,1", "--gamma", "1,3,1"]) == 0
    out = capsys.readouterr().out
    assert "fixed_points 3" in out


def test_cli_kac_count_and_poly(tmp_path, capsys):
    s4 = write_doc(tmp_path, "s4.json", subspace_quiver(4))
    assert main(["kac-count", "--quiver", s4, "--alpha", "2,1,1,1,1",
                 "--q", "2"]) == 0
    out = capsys.readouterr().out
    assert "abs_indec_classes 6" in out
    assert main(["kac-poly", "--quiver", s4, "--alpha", "2,1,1,1,1",
                 "--q", "2,3"]) == 0
    out = capsys.readouterr().out
    assert "polynomial [4, 1]" in out


def test_cli_kac_count_shard_determinism(tmp_path, capsys):
    k2 = write_doc(tmp_path, "k2.json", kronecker(2))
    assert main(["kac-count", "--quiver", k2, "--alpha", "1,1", "--q", "3"]) == 0
    single = capsys.readouterr().out
    assert main(["kac-count", "--quiver", k2, "--alpha", "1,1", "--q", "3",
                 "--shards", "5"]) == 0
    sharded = capsys.readouterr().out
    assert single == sharded


def test_cli_crosscheck(tmp_path, capsys):
    mosaic_path = str(tmp_path / "mosaic.json")
    assert main(["subspace-tnf", "--n", "4", "--field", "Fp:2",
                 "--out", mosaic_path]) == 0
    capsys.readouterr()
    s4 = write_doc(tmp_path, "s4.json", subspace_quiver(4))
    assert main(["crosscheck", "--mosaic", mosaic_path, "--quiver", s4,
                 "--alpha", "2,1,1,1,1", "--q", "2,3"]) == 0
    out = capsys.readouterr().out
    assert "all_match True" in out


def test_cli_stable_and_hn(tmp_path, capsys):
    k2 = kronecker(2)
    m = Representation.from_entries(k2, F2, {"0": 2, "1": 1}, {"a": [[0, 1]]})
    path = write_doc(tmp_path, "m.json", m)
    assert main(["stable", "--rep", path, "--theta", "1,0"]) == 0
    assert "stability unstable" in capsys.readouterr().out
    assert main(["hn", "--rep", path, "--theta", "1,0"]) == 0
    out = capsys.readouterr().out
    assert "hn_length 2" in out


def test_cli_schur_level(tmp_path, capsys):
    k2 = write_doc(tmp_path, "k2.json", kronecker(2))
    assert main(["schur-level", "--quiver", k2, "--alpha", "2,2", "--q", "2"]) == 0
    assert "schur_level 2" in capsys.readouterr().out


def test_cli_schubert_mosaic(tmp_path, capsys):
    out_path = str(tmp_path / "mos.json")
    assert main(["schubert-mosaic", "--n", "4", "--d", "2", "--field", "Fp:2",
                 "--out", out_path]) == 0
    out = capsys.readouterr().out
    assert "cells 6" in out
    mosaic = docio.load_path(out_path, "mosaic")
    assert sorted(c.dim for c in mosaic.cells) == [0, 1, 2, 2, 3, 4]


def test_cli_report_out_embeds_inputs_hash(tmp_path):
    k3, t1, t2 = worked_example_pair()
    a = write_doc(tmp_path, "a.json", t1)
    b = write_doc(tmp_path, "b.json", t2)
    out_path = str(tmp_path / "report.json")
    assert main(["hom", "--rep-a", a, "--rep-b", b, "--out", out_path]) == 0
    kind, payload = docio.loads(open(out_path).read())
    assert kind == "report"
    assert payload["hom_dim"] == 0 and payload["ext_dim"] == 3
    assert "inputs" in payload and "version" in payload
    # provenance is stable for identical inputs
    out2 = str(tmp_path / "report2.json")
    assert main(["hom", "--rep-a", a, "--rep-b", b, "--out", out2]) == 0
    assert open(out_path).read() == open(out2).read()


def test_cli_deform(tmp_path, capsys):
    k2 = kronecker(2)
    t1 = rep_T_i(k2, QQ, 0)
    lam = RElement(k2, QQ, t1.dims, t1.dims,
                   {"b": ExactMatrix.from_rows(QQ, [["2/3"]])})
    rep_path = write_doc(tmp_path, "t1.json", t1)
    lam_path = write_doc(tmp_path, "lam.json", lam)
    out_path = str(tmp_path / "deformed.json")
    assert main(["deform", "--rep", rep_path, "--lam", lam_path,
                 "--out", out_path]) == 0
    back = docio.load_path(out_path, "representation")
    assert str(back.matrices["b"].at(0, 0)) == "2/3"
    assert back.matrices["a"].at(0, 0) == 1


def test_cli_tree_cells(tmp_path, capsys):
    q = subspace_quiver(4)
    t3 = Representation.from_entries(q, QQ, {"q0": 2, "q1": 1, "q2": 1, "q3": 1},
                                     {"a1": [[1], [0]], "a2": [[0], [1]],
                                      "a3": [[1], [1]]})
    s4 = Representation.simple(q, QQ, "q4")
    cell_t = write_doc(tmp_path, "cellt.json", Cell(t3, []))
    cell_s = write_doc(tmp_path, "cells.json", Cell(s4, []))
    out_path = str(tmp_path / "mosaic.json")
    assert main(["tree-cells", "--cell-s", cell_s, "--cell-t", cell_t,
                 "--out", out_path]) == 0
    out = capsys.readouterr().out
    assert "cells 2" in out and "dims [0, 1]" in out
    mosaic = docio.load_path(out_path, "mosaic")
    assert sorted(c.dim for c in mosaic.cells) == [0, 1]


def test_cli_iso_true_and_false(tmp_path, capsys):
    k2 = kronecker(2)
    a = write_doc(tmp_path, "a.json", rep_T_i(k2, F2, 0))
    b = write_doc(tmp_path, "b.json", rep_T_i(k2, F2, 1))
    assert main(["iso", "--rep-a", a, "--rep-b", a]) == 0
    assert "isomorphic True" in capsys.readouterr().out
    assert main(["iso", "--rep-a", a, "--rep-b", b]) == 0
    assert "isomorphic False" in capsys.readouterr().out


def test_cli_fixed_points_window_flag(tmp_path, capsys):
    q = write_doc(tmp_path, "q.json", k21_quiver())
    assert main(["fixed-points", "--quiver", q, "--alpha", "1,1,1",
                 "--theta", "1,0,1", "--gamma", "1,3,1", "--window", "6"]) == 0
    out = capsys.readouterr().out
    assert "fixed_points 2" in out and "radius 6" in out
