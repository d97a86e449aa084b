import numpy as np
import pytest

from conftest import random_unitary
from qgal.examples import cyclic, function_algebra, group_algebra, symmetric
from qgal.fqg import pairing_identification, regular
from qgal.galois import trivial_galois_object
from qgal.projrep import (ProjectiveCorep, check_corep, conjugate_corep, extract_galois,
                          grouplike_corep, induced_coaction, outer_equivalence, perturb_corep,
                          regular_corep, roundtrip_isomorphism, trivial_type_i,
                          twisted_unitary_relation, validate_type_i)
from qgal.reflection import twisted_multiplicative_unitary
from qgal.tensor import residual

TOL = 1e-9
SMALL = ["trivial C(Z2)", "trivial C[S3]", "cocycle bichar_Z2xZ2", "weyl action M2"]


def _failures(rep):
    return [(c.name, c.value) for c in rep.failures()]


@pytest.fixture(scope="module")
def coreps(galois_objects):
    return {k: regular_corep(go) for k, go in galois_objects.items()}


@pytest.fixture(scope="module")
def extractions(coreps):
    return {k: extract_galois(induced_coaction(coreps[k]), TOL) for k in SMALL}


# ---- corepresentations -------------------------------------------------------------


def test_regular_coreps(coreps):
    for name, pc in coreps.items():
        rep = check_corep(pc, TOL)
        assert rep.passed, (name, _failures(rep))


def test_perturbed_corep_fails(coreps):
    for name, pc in coreps.items():
        rep = check_corep(perturb_corep(pc, 0.3, 1), TOL)
        assert rep.value("unitary") <= TOL
        assert rep.value("corep_identity") > 1e-3, name


def test_conjugated_corep_is_corep(coreps):
    rng = np.random.default_rng(3)
    pc = coreps["weyl action M2"]
    rep = check_corep(conjugate_corep(pc, random_unitary(pc.H_dim, rng)), TOL)
    assert rep.passed, _failures(rep)


@pytest.mark.parametrize("g", [cyclic(3), symmetric(3)], ids=lambda g: g.name)
def test_group_elements_are_one_dimensional_coreps(g):
    # over the trivial object of C(G) the dual is C[G]; each group element is a
    # grouplike unitary, and a sum of two distinct ones is not
    q = function_algebra(g)
    go = trivial_galois_object(q)
    reg = regular(q)
    F = pairing_identification(q)
    ops = np.tensordot(F.T, reg.Mhat.elements, axes=1)
    for u in ops:
        assert residual(u.conj().T @ u, np.eye(q.dim)) < 1e-12
        assert check_corep(grouplike_corep(go, u), TOL).passed
    mix = (ops[1] + ops[2]) / np.sqrt(2)
    assert check_corep(grouplike_corep(go, mix), TOL).value("corep_identity") > 1e-3


def test_corep_shape_check(galois_objects):
    go = galois_objects["trivial C(Z2)"]
    with pytest.raises(ValueError):
        ProjectiveCorep(go, 2, np.eye(3))


def test_twisted_unitary_relation(cocycles, cocycle_objects, coreps):
    for key, go in cocycle_objects.items():
        W, _ = twisted_multiplicative_unitary(go.qg, cocycles[key], go)
        assert twisted_unitary_relation(coreps[f"cocycle {key}"], W) <= TOL, key
    with pytest.raises(ValueError):
        twisted_unitary_relation(coreps["trivial C(Z2)"], np.eye(4))


# ---- coactions on B(H) ---------------------------------------------------------------


def test_induced_coactions_validate(coreps):
    for name, pc in coreps.items():
        rep = validate_type_i(induced_coaction(pc), TOL)
        assert rep.passed, (name, _failures(rep))


def test_trivial_coaction_on_matrices():
    q = group_algebra(symmetric(3))
    assert validate_type_i(trivial_type_i(q, 2), TOL).passed


def test_extraction_from_trivial_coaction_gives_trivial_object():
    # Upsilon(x) = 1 (x) x: the crossed product is M (x) B(H) and the relative
    # commutant is M (x) 1, so the extracted object is M itself
    q = group_algebra(symmetric(3))
    ex = extract_galois(trivial_type_i(q, 2), TOL)
    assert ex.report.passed, _failures(ex.report)
    assert ex.crossed_dim == 6 * 4
    assert ex.go.n == 6 and ex.go.is_galois
    # noncommutative like C[S3]
    N = ex.go.coaction.N.elements
    assert max(np.linalg.norm(x @ y - y @ x) for x in N for y in N) > 0.1


def test_extractions(extractions, galois_objects):
    for name, ex in extractions.items():
        assert ex.report.passed, (name, _failures(ex.report))
        go = galois_objects[name]
        assert ex.go.n == go.n
        assert ex.crossed_dim == go.d * go.n ** 2


def test_roundtrip(extractions, coreps):
    for name, ex in extractions.items():
        rep = roundtrip_isomorphism(coreps[name], ex.corep, TOL)
        assert rep.passed, (name, _failures(rep))


def test_outer_equivalence(coreps):
    rng = np.random.default_rng(11)
    for name in SMALL:
        pc = coreps[name]
        tc = induced_coaction(pc)
        pc2 = conjugate_corep(pc, random_unitary(pc.H_dim, rng))
        tc2 = induced_coaction(pc2)
        v = pc2.G_op.conj().T @ pc.G_op
        rep = outer_equivalence(tc, tc2, v, TOL)
        assert rep.passed, (name, _failures(rep))
        bad = outer_equivalence(tc, tc2, random_unitary(len(v), rng), TOL)
        assert bad.value("conjugation") > 1e-3


def test_identity_is_trivially_outer_equivalent(coreps):
    tc = induced_coaction(coreps["weyl action M2"])
    assert outer_equivalence(tc, tc, np.eye(tc.qg.dim * tc.H_dim), TOL).passed
