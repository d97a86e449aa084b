import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from qgal.cocycle import (TwoCocycle, broken_cocycle, check_cocycle, coboundary_transform,
                          cocycle_from_function, dual_point_functions, leg_projections,
                          mirror_cocycle, trivial_cocycle, twist_coproduct, weyl_cocycle)
from qgal.examples import cyclic, direct_product, group_algebra
from qgal.fqg import regular, validate
from qgal.tensor import residual

TOL = 1e-9
Z2Z2 = direct_product(cyclic(2), cyclic(2))


@pytest.fixture(scope="module")
def c_grp_z2z2():
    return group_algebra(Z2Z2)


def classical_cocycle_defect(g, sigma):
    """max |sigma(t, u) sigma(s, tu) - sigma(s, t) sigma(st, u)| over the group."""
    n = g.order
    worst = 0.0
    for s in range(n):
        for t in range(n):
            for u in range(n):
                lhs = sigma[t, u] * sigma[s, g.mul(t, u)]
                rhs = sigma[s, t] * sigma[g.mul(s, t), u]
                worst = max(worst, abs(lhs - rhs))
    return worst


def test_fixture_cocycles_pass(cocycles):
    for name, oc in cocycles.items():
        rep = check_cocycle(oc.base, oc, TOL)
        assert rep.passed, (name, [(c.name, c.value) for c in rep.failures()])


def test_trivial_cocycle_is_identity(c_grp_z2z2):
    oc = trivial_cocycle(c_grp_z2z2)
    assert_allclose(oc.omega, np.eye(16))
    assert check_cocycle(c_grp_z2z2, oc).passed


@settings(max_examples=15, deadline=None)
@given(st.lists(st.floats(0, 2 * np.pi), min_size=16, max_size=16), st.booleans())
def test_cocycle_identity_matches_classical_condition(angles, coboundary):
    # on the function algebra C(G) of an abelian G, a function Omega(s, t) is a
    # 2-cocycle iff the classical identity holds; coboundaries always do
    g = Z2Z2
    qg = group_algebra(g)
    if coboundary:
        f = np.exp(1j * np.array(angles[:4]))
        sigma = np.array([[f[s] * f[t] / f[g.mul(s, t)] for t in range(4)] for s in range(4)])
    else:
        sigma = np.exp(1j * np.array(angles)).reshape(4, 4)
    oc = cocycle_from_function(qg, dual_point_functions(qg), sigma)
    defect = classical_cocycle_defect(g, sigma)
    value = check_cocycle(qg, oc).value("cocycle_identity")
    if defect < 1e-12:
        assert value <= TOL
    elif defect > 1e-3:
        assert value > 1e-6


def test_bicharacter_satisfies_classical_condition():
    n = 3
    g = direct_product(cyclic(n), cyclic(n))
    pts = [(a, b) for a in range(n) for b in range(n)]
    zeta = np.exp(2j * np.pi / n)
    sigma = np.array([[zeta ** (s[1] * t[0]) for t in pts] for s in pts])
    assert classical_cocycle_defect(g, sigma) < 1e-12
    oc = weyl_cocycle(n)
    assert residual(oc.omega, cocycle_from_function(
        oc.base, dual_point_functions(oc.base), sigma).omega) < 1e-12


def test_point_functions_are_orthogonal_projections(c_grp_z2z2):
    P = dual_point_functions(c_grp_z2z2)
    for i, p in enumerate(P):
        assert residual(p @ p, p) < 1e-12
        assert residual(p, p.conj().T) < 1e-12
        for q in P[i + 1:]:
            assert np.linalg.norm(p @ q) < 1e-12
    assert residual(P.sum(axis=0), np.eye(4)) < 1e-12


@pytest.mark.parametrize("key", ["bichar_Z2xZ2", "bichar_Z3xZ3", "D4_klein"])
def test_broken_cocycle_fails_identity(cocycles, key):
    bad = broken_cocycle(cocycles[key])
    rep = check_cocycle(bad.base, bad)
    assert rep.value("unitary") <= TOL
    assert rep.value("legs_in_dual") <= TOL
    assert rep.value("cocycle_identity") > 1e-3


def test_broken_noncommutative_twist_loses_coassociativity(cocycles):
    bad = broken_cocycle(cocycles["D4_klein"])
    assert twist_coproduct(bad.base, bad).coassociativity > 1e-3


def test_commutative_dual_twist_is_trivial(cocycles):
    # M_hat = C(G) is commutative, so Omega commutes with Delta_hat(y)
    oc = cocycles["bichar_Z2xZ2"]
    th = twist_coproduct(oc.base, oc)
    assert th.deviation <= TOL
    assert th.coassociativity <= TOL


def test_dihedral_twist_deforms_coproduct(cocycles):
    oc = cocycles["D4_klein"]
    th = twist_coproduct(oc.base, oc)
    assert th.deviation > 0.1
    assert th.coassociativity <= TOL
    assert validate(th.qg, TOL).passed


def test_coboundary_transform_keeps_cocycle(cocycles):
    oc = cocycles["D4_klein"]
    reg = regular(oc.base)
    rng = np.random.default_rng(0)
    # a unitary in M_hat: exp(i h) for h self-adjoint in M_hat
    B = reg.Mhat.elements
    h = np.tensordot(rng.standard_normal(len(B)) + 1j * rng.standard_normal(len(B)), B, axes=1)
    h = h + h.conj().T
    w, v = np.linalg.eigh(h)
    u = v @ np.diag(np.exp(1j * w)) @ v.conj().T
    oc2 = coboundary_transform(oc, u)
    assert check_cocycle(oc2.base, oc2, TOL).passed
    with pytest.raises(ValueError):
        coboundary_transform(oc, 2 * u)


def test_mirror_cocycle_is_cocycle(cocycles):
    for name, oc in cocycles.items():
        _, rep = mirror_cocycle(oc.base, oc)
        assert rep.passed, (name, [(c.name, c.value) for c in rep.failures()])


def test_leg_projections_resolve_identity(cocycles):
    for oc in cocycles.values():
        P = leg_projections(oc)
        d = oc.base.dim
        if len(P) > 1:
            assert residual(P.sum(axis=0), np.eye(d)) < 1e-10


def test_shape_errors(c_grp_z2z2):
    with pytest.raises(ValueError):
        TwoCocycle(c_grp_z2z2, np.eye(3))
    with pytest.raises(ValueError):
        check_cocycle(c_grp_z2z2, np.eye(5))
