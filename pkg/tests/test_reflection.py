import numpy as np
import pytest

from qgal.fqg import pentagon_residual, validate
from qgal.reflection import (corner_coproducts, dual_isomorphism, intertwiner_corner, reflect,
                             twisted_multiplicative_unitary, unitary_antipode_Q)
from qgal.tensor import residual

TOL = 1e-9


def _failures(rep):
    return [(c.name, c.value) for c in rep.failures()]


@pytest.fixture(scope="module")
def corners(galois_objects):
    return {k: intertwiner_corner(go, TOL) for k, go in galois_objects.items()}


@pytest.fixture(scope="module")
def reflections(galois_objects, corners):
    return {k: reflect(go, TOL, corners[k]) for k, go in galois_objects.items()}


def test_corner_witnesses(corners):
    for name, lc in corners.items():
        assert lc.report.passed, (name, _failures(lc.report))


def test_corner_dimensions(galois_objects, corners):
    for name, lc in corners.items():
        go = galois_objects[name]
        assert lc.Phat.dim == go.d
        assert lc.space_dim(1) == go.n and lc.space_dim(2) == go.d


def test_corner_unitaries_are_unitary(corners):
    for lc in corners.values():
        for i in (1, 2):
            u = lc.unitary(i)
            assert residual(u.conj().T @ u, np.eye(len(u))) <= TOL


def test_corner_coproducts(corners):
    for name, lc in corners.items():
        rep = corner_coproducts(lc, TOL)
        assert rep.passed, (name, _failures(rep))


def test_unitary_antipodes(corners):
    for name, lc in corners.items():
        rep = unitary_antipode_Q(lc, TOL)
        assert rep.passed, (name, _failures(rep))


def test_reflection_witnesses(reflections):
    for name, rq in reflections.items():
        assert rq.witness.passed, (name, _failures(rq.witness))
        assert validate(rq.qg_out, TOL).passed


def test_reflection_of_trivial_object_is_dual(galois_objects, reflections):
    for name, rq in reflections.items():
        if name.startswith("trivial"):
            res = dual_isomorphism(galois_objects[name], rq)
            assert max(res.values()) <= TOL, (name, res)


def test_reflection_of_cocycle_object_is_twisted_dual(galois_objects, reflections):
    for name, rq in reflections.items():
        if name.startswith("cocycle"):
            res = dual_isomorphism(galois_objects[name], rq)
            assert max(res.values()) <= TOL, (name, res)


def test_reflection_commutativity_pattern(reflections):
    # the dual of C(G) is C[G] (cocommutative); the dual of C[S3] is C(S3)
    def flags(name):
        w = reflections[name].witness
        return (w.value("commutativity_residual") <= TOL,
                w.value("cocommutativity_residual") <= TOL)

    assert flags("trivial C(Z3)") == (True, True)
    assert flags("trivial C[S3]") == (True, False)
    assert flags("trivial C[D4]") == (True, False)
    # twisting C(D4)^ = C[D4] keeps the algebra (noncommutative); the Klein twist
    # preserves cocommutativity since the alternating form on Z2xZ2 is invariant
    assert flags("cocycle D4_klein") == (False, True)


@pytest.mark.parametrize("key", ["trivial_Z2xZ2", "bichar_Z2xZ2", "bichar_Z3xZ3", "D4_klein"])
def test_twisted_unitary_routes_agree(cocycles, cocycle_objects, key):
    oc = cocycles[key]
    go = cocycle_objects[key]
    W, rep = twisted_multiplicative_unitary(oc.base, oc, go, tol=TOL)
    assert rep.passed, _failures(rep)
    assert pentagon_residual(W, oc.base.dim) <= TOL


def test_trivial_twist_gives_W_hat(cocycles, cocycle_objects):
    oc = cocycles["trivial_Z2xZ2"]
    W, _ = twisted_multiplicative_unitary(oc.base, oc, cocycle_objects["trivial_Z2xZ2"])
    assert residual(W, cocycle_objects["trivial_Z2xZ2"].reg.What) <= TOL
