import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import CORPUS
from qgal import corpus
from qgal.cli import main
from qgal.examples import cyclic, dihedral, group_algebra, symmetric
from qgal.fqg import isomorphism_residuals, validate
from qgal.io import (ParseError, decode_complex, encode_complex, galois_from_coaction_file,
                     load_coaction, load_cocycle, load_qg, load_recipe, qg_from_dict,
                     qg_to_dict, read_json, save_qg)

TOL = 1e-9


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def failing(doc):
    return sorted(c["name"] for c in doc["checks"] if not c["passed"])


# ---- serialization -------------------------------------------------------------------


def test_complex_encoding_roundtrip():
    a = np.array([[1 + 2j, -0.5], [0, 3j]])
    assert_allclose(decode_complex(encode_complex(a), (2, 2)), a)
    with pytest.raises(ParseError):
        decode_complex(encode_complex(a), (3, 3))
    with pytest.raises(ParseError):
        decode_complex([[1, 2, 3]], (1,))


def test_quantum_group_roundtrip(tmp_path):
    q = group_algebra(dihedral(4))
    save_qg(q, tmp_path / "q.json")
    q2 = load_qg(tmp_path / "q.json")
    assert q2.name == q.name
    for attr in ("mult", "unit", "comult", "counit", "star", "haar"):
        assert_allclose(getattr(q2, attr), getattr(q, attr))
    assert validate(q2, TOL).passed


def test_bad_format_tag_is_parse_error():
    d = qg_to_dict(group_algebra(cyclic(2)))
    d["format"] = "something/2"
    with pytest.raises(ParseError):
        qg_from_dict(d)


def test_malformed_json_is_parse_error(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(ParseError):
        read_json(p)
    with pytest.raises(ParseError):
        read_json(tmp_path / "missing.json")


def test_corpus_is_generated_deterministically():
    for name, data in corpus.files().items():
        on_disk = json.loads((CORPUS / name).read_text())
        assert on_disk == json.loads(json.dumps(data)), name


def test_corpus_quantum_groups_validate():
    for p in sorted(CORPUS.glob("c_*.json")):
        assert validate(load_qg(p), TOL).passed, p.name


def test_corpus_cocycles_load_against_base():
    oc = load_cocycle(CORPUS / "d4_klein.json")
    assert oc.base.dim == 8
    oc = load_cocycle(CORPUS / "bichar.json")
    assert oc.omega.shape == (16, 16)


def test_coaction_file_builds_galois_object():
    go = galois_from_coaction_file(load_coaction(CORPUS / "weyl_action_m2.coaction.json"))
    assert go.is_galois and go.n == 4
    assert_allclose(np.sort(go.phi_N.real)[-1], 0.5, atol=1e-12)


def test_recipes_build():
    r = load_recipe(CORPUS / "trivial_s3.recipe.json")
    assert r.kind == "trivial"
    go = r.build()
    ref = group_algebra(symmetric(3))
    assert go.d == ref.dim
    theta = np.eye(6)
    assert max(isomorphism_residuals(go.qg, ref, theta).values()) <= TOL


# ---- command line ------------------------------------------------------------------


def test_validate_exit_codes(capsys, tmp_path):
    assert run(capsys, "validate", CORPUS / "c_s3.json")[0] == 0
    code, out, _ = run(capsys, "validate", CORPUS / "broken_haar.json")
    assert code == 1 and "FAIL" in out
    assert run(capsys, "validate", tmp_path / "nope.json")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"format": "qgal.qg/1"}')
    assert run(capsys, "validate", bad)[0] == 2


def test_usage_errors(capsys):
    assert run(capsys, "validate")[0] == 2
    assert run(capsys, "frobnicate", "x")[0] == 2
    assert run(capsys, "validate", CORPUS / "c_z2.json", "--tol", "0.5")[0] == 2
    assert run(capsys, "validate", CORPUS / "c_z2.json", "--tol", "abc")[0] == 2
    assert run(capsys, "validate", CORPUS / "c_z2.json", "--tol", "0")[0] == 2


def test_tolerance_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("QGAL_TOL", "1e-6")
    code, doc = run_json(capsys, "pentagon", CORPUS / "c_grp_d4.json")
    assert code == 0 and doc["tol"] == 1e-6
    monkeypatch.setenv("QGAL_TOL", "-1")
    assert run(capsys, "pentagon", CORPUS / "c_grp_d4.json")[0] == 2
    # an explicit flag wins over the environment
    code, doc = run_json(capsys, "pentagon", CORPUS / "c_grp_d4.json", "--tol", "1e-8")
    assert code == 0 and doc["tol"] == 1e-8


def test_dual_output_revalidates(capsys, tmp_path):
    out = tmp_path / "dual.json"
    assert run(capsys, "dual", CORPUS / "c_grp_s3.json", "--out", out)[0] == 0
    assert run(capsys, "validate", out)[0] == 0


def test_cocycle_check(capsys):
    assert run(capsys, "cocycle-check", CORPUS / "c_grp_z2z2.json", CORPUS / "bichar.json")[0] == 0
    assert run(capsys, "cocycle-check", CORPUS / "c_d4.json", CORPUS / "d4_klein.json")[0] == 0


def test_twist_output_revalidates(capsys, tmp_path):
    out = tmp_path / "twisted.json"
    code, doc = run_json(capsys, "twist", CORPUS / "c_grp_z2z2.json", CORPUS / "bichar.json",
                         "--out", out)
    assert code == 0, failing(doc)
    assert run(capsys, "validate", out)[0] == 0


def test_trivial_twist_matches_dual(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "twist", CORPUS / "c_grp_z2z2.json", CORPUS / "trivial_cocycle_z2z2.json",
               "--out", a)[0] == 0
    assert run(capsys, "dual", CORPUS / "c_grp_z2z2.json", "--out", b)[0] == 0
    qa, qb = load_qg(a), load_qg(b)
    assert max(isomorphism_residuals(qa, qb, np.eye(4)).values()) <= TOL


def test_dihedral_twist_flags(capsys):
    code, doc = run_json(capsys, "twist", CORPUS / "c_d4.json", CORPUS / "d4_klein.json")
    assert code == 0, failing(doc)
    info = {c["name"]: c["value"] for c in doc["checks"]}
    assert info["commutative"] is False
    assert info["cocommutative"] is True
    assert info["twisted_deviation_from_dual"] > 0.1


def test_suite_json_and_seed_determinism(capsys):
    code, doc = run_json(capsys, "suite", CORPUS / "weyl_n2.recipe.json", "--seed", "5")
    assert code == 0, failing(doc)
    assert doc["seed"] == 5
    names = {c["name"] for c in doc["checks"]}
    for key in ("galois_criterion_agreement", "roundtrip.iso_comult",
                "negative_control.random_v_conjugation"):
        assert any(n.startswith(key) for n in names), key
    _, again = run_json(capsys, "suite", CORPUS / "weyl_n2.recipe.json", "--seed", "5")
    assert again == doc


def test_suite_on_non_galois_controls(capsys):
    code, doc = run_json(capsys, "suite", CORPUS / "nongalois_control.recipe.json")
    assert code == 1
    assert failing(doc) == ["crossed_product.rho_image_dim", "galois.Gtilde_coisometry",
                            "galois.Gtilde_isometry"]
    code, doc = run_json(capsys, "suite", CORPUS / "nongalois_s3.recipe.json")
    assert code == 1
    bad = failing(doc)
    assert "crossed_product.dim_crossed_product" in bad
    assert "galois_criterion_agreement" not in bad


def test_timing_flag(capsys):
    code, doc = run_json(capsys, "validate", CORPUS / "c_z2.json", "--timing")
    assert code == 0 and doc["timing_s"] >= 0
    code, doc = run_json(capsys, "validate", CORPUS / "c_z2.json")
    assert "timing_s" not in doc
