import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from qgal.examples import (cyclic, dihedral, direct_product, function_algebra, group_algebra,
                           symmetric, trivial_quantum_group)
from qgal.fqg import (FiniteQuantumGroup, HaarNotFaithfulError, antipode_data,
                      bidual_identification, dual, dual_report, gns, isomorphism_residuals,
                      multiplicative_unitary, pairing_identification, pentagon_residual,
                      regular, solve_haar, validate)
from qgal.tensor import residual

TOL = 1e-9


def _group_unitary(g, rule):
    """Permutation matrix sending e_s (x) e_t to the basis vector given by ``rule``."""
    n = g.order
    W = np.zeros((n * n, n * n))
    for s in range(n):
        for t in range(n):
            a, b = rule(s, t)
            W[a * n + b, s * n + t] = 1.0
    return W


def test_corpus_validates(qgs):
    for name, q in qgs.items():
        rep = validate(q, TOL)
        assert rep.passed, (name, [c.name for c in rep.failures()])


@pytest.mark.parametrize("g", [cyclic(2), cyclic(3), symmetric(3)], ids=lambda g: g.name)
def test_function_algebra_W_is_group_shift(g):
    # W*(d_s (x) d_t) = d_s (x) d_{s^-1 t}; both legs carry the same scaling
    W = multiplicative_unitary(function_algebra(g)).W
    expected = _group_unitary(g, lambda s, t: (s, g.mul(s, t)))
    assert residual(W, expected) < 1e-12


@pytest.mark.parametrize("g", [cyclic(3), symmetric(3), dihedral(4)], ids=lambda g: g.name)
def test_group_algebra_W(g):
    # W*(g (x) h) = hg (x) h, so W(g (x) h) = h^-1 g (x) h
    W = multiplicative_unitary(group_algebra(g)).W
    expected = _group_unitary(g, lambda s, t: (g.mul(g.inv(t), s), t))
    assert residual(W, expected) < 1e-12


def test_pentagon_on_corpus(qgs):
    for q in qgs.values():
        mu = multiplicative_unitary(q)
        d = q.dim
        for X in (mu.W, mu.V, mu.What):
            assert pentagon_residual(X, d) <= TOL


def test_pentagon_detects_perturbation():
    q = group_algebra(symmetric(3))
    W = multiplicative_unitary(q).W.copy()
    W[:, 0] *= np.exp(0.3j)
    assert pentagon_residual(W, q.dim) > 1e-3


def test_haar_solutions():
    g = symmetric(3)
    h, dim = solve_haar(function_algebra(g).comult, function_algebra(g).unit)
    assert dim == 1
    assert_allclose(h, np.full(6, 1 / 6), atol=1e-12)
    h, dim = solve_haar(group_algebra(g).comult, group_algebra(g).unit)
    assert dim == 1
    assert_allclose(h, np.eye(6)[g.identity], atol=1e-12)


def test_antipode_of_function_algebra_inverts():
    g = symmetric(3)
    ap = antipode_data(function_algebra(g))
    expected = np.zeros((6, 6))
    for j in range(6):
        expected[g.inv(j), j] = 1.0
    assert_allclose(ap.S, expected, atol=1e-10)


def test_tracial_haar_has_trivial_modular_operator(qgs):
    for q in qgs.values():
        assert residual(gns(q.algebra, q.haar).nabla, np.eye(q.dim)) < 1e-10


def test_trivial_quantum_group_validates():
    assert validate(trivial_quantum_group()).passed


def test_non_invariant_state_fails_validation():
    q = function_algebra(cyclic(2)).with_haar([0.9, 0.1])
    rep = validate(q, TOL)
    assert not rep.passed
    # (phi (x) id)Delta(d_0) = 0.9 d_0 + 0.1 d_1 against phi(d_0) 1 = 0.9
    assert rep.value("haar_right_invariance") > 0.1


def test_non_faithful_haar_raises():
    q = function_algebra(cyclic(2)).with_haar([1.0, 0.0])
    with pytest.raises(HaarNotFaithfulError):
        validate(q)


def test_broken_coassociativity_is_reported():
    q = function_algebra(cyclic(3))
    c = q.comult.copy()
    c[0] = c[1]
    bad = FiniteQuantumGroup("bad", q.mult, q.unit, c, q.counit, q.star, q.haar)
    rep = validate(bad, TOL, unitaries=False)
    assert rep.value("coassociativity") > 1e-3
    assert not rep.passed


def test_shape_validation():
    q = function_algebra(cyclic(2))
    with pytest.raises(ValueError):
        FiniteQuantumGroup("x", q.mult, q.unit, q.comult, q.counit, q.star, [1.0])
    with pytest.raises(ValueError):
        FiniteQuantumGroup("x", q.mult * np.nan, q.unit, q.comult, q.counit, q.star, q.haar)


@settings(max_examples=8, deadline=None)
@given(st.integers(2, 5), st.booleans(), st.booleans())
def test_cyclic_and_products_validate(n, product, group_alg):
    g = cyclic(n)
    if product:
        g = direct_product(g, cyclic(2))
    q = group_algebra(g) if group_alg else function_algebra(g)
    assert validate(q, TOL).passed


# ---- duality -------------------------------------------------------------------


def test_dual_reports_pass(qgs):
    for name, q in qgs.items():
        rep = dual_report(q, TOL)
        assert rep.passed, (name, [c.name for c in rep.failures()])


@pytest.mark.parametrize("g", [cyclic(2), cyclic(3), symmetric(3)], ids=lambda g: g.name)
def test_dual_of_function_algebra_is_group_algebra(g):
    # W = sum_b pi(d_b) (x) f_b with f_b the translation by b, so b -> f_b
    q = function_algebra(g)
    F = pairing_identification(q)
    res = isomorphism_residuals(group_algebra(g), dual(q), F)
    assert max(res.values()) <= TOL


def test_bidual_matches(qgs):
    for name, q in qgs.items():
        qdd, theta = bidual_identification(q)
        res = isomorphism_residuals(q, qdd, theta)
        assert max(res.values()) <= TOL, (name, res)


def test_dual_commutativity_swaps():
    q = group_algebra(symmetric(3))
    qd = dual(q)
    # C[S3] is cocommutative and noncommutative; its dual the reverse
    assert residual(qd.mult, qd.mult.transpose(1, 0, 2)) < 1e-10
    assert residual(qd.comult, qd.comult.transpose(0, 2, 1)) > 0.1


def test_regular_is_cached():
    q = function_algebra(cyclic(2))
    assert regular(q) is regular(q)
