import numpy as np
import pytest
from numpy.testing import assert_allclose

from qgal.examples import cyclic, function_algebra
from qgal.fqg import regular
from qgal.galois import (NotErgodicError, classical_coaction, coaction_from_operators,
                         commutation_suite, corep_residual, crossed_product, fixed_point_dim,
                         galois_report, invariant_state, modular_suite,
                         permutation_action_control, perturb_phase, trivial_action_control,
                         twisted_pentagon_residual, validate_coaction)
from qgal.tensor import block_dims, center, residual

TOL = 1e-9


def _report_ok(rep):
    return rep.passed, [(c.name, c.value) for c in rep.failures()]


# ---- coactions -------------------------------------------------------------------


def test_coproduct_is_an_ergodic_coaction(trivial_objects):
    for go in trivial_objects.values():
        rep = validate_coaction(go.coaction, TOL)
        assert rep.passed
        assert rep.value("fixed_point_dim") == 1


def test_trivial_coaction_on_matrices_is_not_ergodic():
    # alpha(x) = x (x) 1 on M2 for C(Z2)
    qg = function_algebra(cyclic(2))
    units = np.array([np.outer(np.eye(2)[i], np.eye(2)[j]) for i in range(2) for j in range(2)],
                     dtype=complex)
    alpha = np.array([np.kron(u, np.eye(2)) for u in units])
    c = coaction_from_operators(qg, units, alpha, "M2_trivial")
    rep = validate_coaction(c, TOL)
    assert rep.passed
    assert fixed_point_dim(c) == 4
    with pytest.raises(NotErgodicError):
        invariant_state(c)


def test_weyl_coaction_is_ergodic_with_trace_state(weyl_object):
    c = weyl_object.coaction
    assert validate_coaction(c, TOL).passed
    assert fixed_point_dim(c) == 1
    # the only invariant state on M2 under the Weyl action is the normalized trace
    traces = np.array([np.trace(f) / 2 for f in c.N.elements])
    assert_allclose(weyl_object.phi_N, traces, atol=1e-12)
    assert weyl_object.uniqueness_dim == 1


def test_relation_violation_is_recorded():
    qg = function_algebra(cyclic(2))
    S = np.array([np.eye(2), np.eye(2)], dtype=complex)     # s_0 = s_1
    alpha = np.array([np.eye(4), 2 * np.eye(4)], dtype=complex)
    c = coaction_from_operators(qg, S, alpha)
    assert c.membership > 0.1


def test_classical_free_action_is_galois():
    # Z3 acting on itself by translation is free and transitive
    g = cyclic(3)
    c = classical_coaction(g, 3, lambda y, h: g.mul(y, h), "Z3_on_Z3")
    from qgal.galois import GaloisObject
    go = GaloisObject(c)
    assert go.is_galois
    _, rep = crossed_product(go)
    assert rep.passed


# ---- Galois objects --------------------------------------------------------------------


def test_galois_reports_pass(galois_objects):
    for name, go in galois_objects.items():
        ok, bad = _report_ok(galois_report(go, TOL))
        assert ok, (name, bad)
        assert go.is_galois


def test_trivial_object_gives_W_hat(trivial_objects):
    for go in trivial_objects.values():
        assert residual(go.Gtilde, go.reg.What) <= TOL


def test_cocycle_object_gives_twisted_W_hat(cocycle_objects):
    for go in cocycle_objects.values():
        assert residual(go.Gtilde, go.reg.What @ go.cocycle.omega.conj().T) <= TOL


def test_cocycle_object_implementation_is_V(cocycle_objects):
    for go in cocycle_objects.values():
        assert residual(go.U, go.reg.V) <= TOL
        assert corep_residual(go) <= TOL


@pytest.mark.parametrize("key,dim,cdim,blocks", [
    ("trivial_Z2xZ2", 4, 4, [1, 1, 1, 1]),
    ("bichar_Z2xZ2", 4, 1, [2]),
    ("bichar_Z3xZ3", 9, 1, [3]),
    ("D4_klein", 8, 2, [2, 2]),
])
def test_twisted_algebra_structure(cocycle_objects, key, dim, cdim, blocks):
    N = cocycle_objects[key].coaction.N
    assert N.dim == dim
    assert center(N).dim == cdim
    assert block_dims(N) == blocks


def test_crossed_products(galois_objects):
    for name, go in galois_objects.items():
        cp, rep = crossed_product(go, TOL)
        ok, bad = _report_ok(rep)
        assert ok, (name, bad)
        assert cp.dim == go.n ** 2


def test_commutation_suites(galois_objects):
    for name, go in galois_objects.items():
        ok, bad = _report_ok(commutation_suite(go, TOL))
        assert ok, (name, bad)


def test_perturbed_galois_map_breaks_pentagon(galois_objects):
    for name, go in galois_objects.items():
        bad = perturb_phase(go.Gtilde, 0.3, 1)
        assert twisted_pentagon_residual(go, bad) > 1e-3, name


def test_modular_suites(galois_objects):
    for name, go in galois_objects.items():
        ok, bad = _report_ok(modular_suite(go, TOL))
        assert ok, (name, bad)


def test_linking_corner_dimensions(galois_objects):
    for name, go in galois_objects.items():
        d, n = go.d, go.n
        assert go.N_hat.dim == d, name
        assert go.O_hat.dim == d, name
        assert go.P_hat.dim == d, name


# ---- non-Galois controls -------------------------------------------------------------


def test_trivial_action_control_fails_galois_criterion():
    go = trivial_action_control()
    u = go.unitarity
    assert u["Gtilde_isometry"] > 1e-3
    assert not go.is_galois
    _, rep = crossed_product(go)
    assert rep.value("rho_image_dim") < rep.value("dim_crossed_product")


def test_permutation_action_control_fails_galois_criterion():
    go = permutation_action_control()
    assert go.uniqueness_dim == 1           # ergodic
    assert not go.is_galois                 # but not free
    cp, rep = crossed_product(go)
    # C(S3) acting on 3 points: the crossed product is C^3 x| C[S3], dimension 18
    assert cp.dim == 18 != go.n ** 2
    assert regular(go.qg).d == 6
