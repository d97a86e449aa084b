"""Ergodic coactions, Galois objects and their verification suites.

A right coaction ``alpha : N -> N (x) M`` is stored through its structure
tensor ``A`` in a basis ``f_a`` of ``N``:

    alpha(f_a) = sum_{b, c} A[a, b, c] f_b (x) e_c

where ``e_c`` is the basis of ``M``.  All operators of a Galois object live on
``L2(N)``, the GNS space of the invariant state, and on ``L2(M)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .cocycle import TwoCocycle, mirror_cocycle
from .fqg import FiniteQuantumGroup, GnsData, StarAlgebra, check_positive, gns, regular
from .report import DEFAULT_TOL, Report
from .tensor import (AlgebraBasis, AntiLinear, canonical_basis, flip, generated_algebra,
                     leg_embed, null_space, residual, slices_left, slices_right, SPAN_RTOL)

T_SAMPLES = (1.0, np.sqrt(2.0), np.pi)


class NotErgodicError(ValueError):
    """The fixed-point algebra of the coaction is larger than the scalars."""


class NotFaithfulError(ValueError):
    """The invariant functional is not a faithful positive state."""


# --------------------------------------------------------------------------
# coactions
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Coaction:
    """A coaction of ``qg`` on a realized algebra ``N``.

    ``N`` is a Hilbert-Schmidt orthonormal basis of matrices on ``H_N`` and
    ``alpha_ops[a]`` the operator ``alpha(f_a)`` on ``H_N (x) L2(M)``.
    """

    qg: FiniteQuantumGroup
    N: AlgebraBasis
    alpha_ops: np.ndarray
    name: str = "N"
    membership: float = 0.0      # size of alpha(N) outside N (x) M, from construction

    @property
    def h(self) -> int:
        return self.N.ambient_dim

    @property
    def dim(self) -> int:
        return self.N.dim

    @cached_property
    def algebra(self) -> StarAlgebra:
        B = self.N.elements
        k = len(B)
        flat = B.reshape(k, -1)
        prods = np.einsum("iab,jbc->ijac", B, B).reshape(k * k, -1)
        mult = (prods @ flat.conj().T).reshape(k, k, k)
        unit = flat.conj() @ np.eye(self.h).reshape(-1)
        adj = B.conj().transpose(0, 2, 1).reshape(k, -1)
        star = (adj @ flat.conj().T).T
        return StarAlgebra(mult, unit, star)

    @cached_property
    def A(self) -> np.ndarray:
        """Structure tensor ``A[a, b, c]`` (least squares over ``f_b (x) pi(e_c)``)."""
        A, _ = _coaction_tensor(self.qg, self.N.elements, self.alpha_ops)
        return A

    @cached_property
    def tensor_residual(self) -> float:
        return _coaction_tensor(self.qg, self.N.elements, self.alpha_ops)[1]

    def alpha(self, x) -> np.ndarray:
        """``alpha`` on coordinates, as coordinates in ``N (x) M`` (shape ``(k, d)``)."""
        return np.einsum("a,abc->bc", np.asarray(x, dtype=complex), self.A)


def _coaction_tensor(qg, B, alpha_ops):
    """Coefficients of ``alpha(f_a)`` over ``f_b (x) pi(e_c)`` and the fit residual.

    ``f_b`` is orthonormal, so the normal equations reduce to the Gram matrix
    of the ``pi(e_c)``.
    """
    pi = regular(qg).gns.pi
    k, h, _ = B.shape
    d = qg.dim
    T = np.asarray(alpha_ops).reshape(k, h, d, h, d)
    gram = np.einsum("cij,eij->ce", pi.conj(), pi)
    inner = np.einsum("bik,cjl,aijkl->abc", B.conj(), pi.conj(), T, optimize=True)
    A = np.linalg.solve(gram.T, inner.reshape(-1, d).T).T.reshape(k, k, d)
    rebuilt = np.einsum("abc,bik,cjl->aijkl", A, B, pi, optimize=True)
    return A, residual(T, rebuilt)


def coaction_from_operators(qg: FiniteQuantumGroup, n_ops, alpha_ops, name: str = "N",
                            rtol: float = SPAN_RTOL) -> Coaction:
    """Build a coaction from a spanning set of ``N`` and the images under ``alpha``.

    ``n_ops`` need not be linearly independent; ``alpha`` must respect the
    linear relations among them (checked: the violation is recorded in
    ``membership`` together with the part of ``alpha(N)`` outside ``N (x) M``).
    """
    S = np.asarray(n_ops, dtype=complex)
    Aop = np.asarray(alpha_ops, dtype=complex)
    if S.ndim != 3 or S.shape[1] != S.shape[2]:
        raise ValueError("n_ops must be a stack of square matrices")
    h = S.shape[1]
    d = qg.dim
    if Aop.shape != (len(S), h * d, h * d):
        raise ValueError(f"alpha_ops must have shape {(len(S), h * d, h * d)}, got {Aop.shape}")
    basis = canonical_basis(S, rtol)
    # f_a = sum_i beta[a, i] s_i
    beta = np.linalg.lstsq(S.reshape(len(S), -1).T, basis.reshape(len(basis), -1).T,
                           rcond=None)[0].T
    images = np.tensordot(beta, Aop, axes=1)
    # relations z with sum z_i s_i = 0 must satisfy sum z_i alpha(s_i) = 0
    rel = null_space(S.reshape(len(S), -1).T, rtol)
    bad = 0.0
    if rel.size:
        viol = np.tensordot(rel.T, Aop, axes=1)
        bad = float(np.linalg.norm(viol) / max(1.0, np.linalg.norm(Aop)))
    N = AlgebraBasis(basis, is_algebra=True)
    c = Coaction(qg, N, images, name)
    object.__setattr__(c, "membership", max(bad, c.tensor_residual))
    return c


def fixed_point_dim(c: Coaction, rtol: float = 1e-9) -> int:
    """Dimension of ``{x : alpha(x) = x (x) 1}``."""
    return _fixed_points(c, rtol).shape[1]


def _fixed_points(c: Coaction, rtol: float = 1e-9) -> np.ndarray:
    k, d = c.dim, c.qg.dim
    unit = c.qg.unit
    # sum_a x_a (A[a, b, cc] - delta_ab unit_cc) = 0 for all (b, cc)
    sysm = c.A - np.einsum("ab,c->abc", np.eye(k), unit)
    return null_space(sysm.reshape(k, k * d).T, rtol, 1.0)


def invariance_solutions(c: Coaction, rtol: float = 1e-9) -> np.ndarray:
    """Functionals ``psi`` (columns) with ``(psi (x) id)alpha(x) = psi(x) 1``."""
    k, d = c.dim, c.qg.dim
    unit = c.qg.unit
    # sum_b psi_b A[a, b, cc] - psi_a unit_cc = 0
    sysm = np.einsum("abc->acb", c.A) - np.einsum("ab,c->acb", np.eye(k), unit)
    return null_space(sysm.reshape(k * d, k), rtol, 1.0)


def validate_coaction(c: Coaction, tol: float = DEFAULT_TOL) -> Report:
    """Homomorphism, unit, adjoint and coaction identities, plus ergodicity."""
    rep = Report(f"coaction {c.name}", tol=tol)
    alg = c.algebra
    k, d = c.dim, c.qg.dim
    ops = c.alpha_ops
    rep.le("alpha_in_N_tensor_M", c.membership)
    prods = np.einsum("iab,jbc->ijac", ops, ops)
    images = np.einsum("ijp,pab->ijab", alg.mult, ops)
    rep.le("homomorphism", residual(prods, images))
    unit_img = np.tensordot(alg.unit, ops, axes=1)
    rep.le("unital", residual(unit_img, np.eye(c.h * d)))
    adj = ops.conj().transpose(0, 2, 1)
    star_img = np.einsum("ba,bij->aij", alg.star, ops)
    rep.le("star", residual(adj, star_img))
    A = c.A
    lhs = np.einsum("abr,bpq->apqr", A, A)                 # (alpha (x) id) alpha
    rhs = np.einsum("apc,cqr->apqr", A, c.qg.comult)       # (id (x) Delta) alpha
    rep.le("coaction_identity", residual(lhs, rhs))
    s = np.linalg.svd(ops.reshape(k, -1), compute_uv=False)
    rank = int(np.sum(s > 1e-9 * s[0])) if len(s) else 0
    rep.eq("injective_rank", rank, k)
    rep.info("fixed_point_dim", fixed_point_dim(c))
    return rep


def invariant_state(c: Coaction, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, int]:
    """The state ``(id (x) phi)alpha`` of an ergodic coaction and the dimension
    of the space of invariant functionals.

    Raises :class:`NotErgodicError` if the fixed points are not scalar and
    :class:`NotFaithfulError` if the resulting state is not faithful.
    """
    fp = fixed_point_dim(c)
    if fp != 1:
        raise NotErgodicError(f"fixed-point algebra has dimension {fp}")
    alg = c.algebra
    # (id (x) phi) alpha(f_a) = sum_b (sum_c A[a, b, c] phi_c) f_b = phi_N(f_a) 1
    cond = np.einsum("abc,c->ab", c.A, c.qg.haar)
    u = alg.unit
    phi_N = cond @ u.conj() / (u.conj() @ u)
    scalar = residual(cond, np.outer(phi_N, u))
    if scalar > max(tol, 1e-8):
        raise NotErgodicError(f"conditional expectation is not scalar (residual {scalar:.2e})")
    try:
        check_positive(_gram(alg, phi_N))
    except ValueError as exc:
        raise NotFaithfulError(str(exc)) from exc
    return phi_N, invariance_solutions(c).shape[1]


def _gram(alg: StarAlgebra, state):
    return np.einsum("ai,ajk,k->ij", alg.star, alg.mult, np.asarray(state, dtype=complex))


# --------------------------------------------------------------------------
# Galois objects
# --------------------------------------------------------------------------


class GaloisObject:
    """A coaction together with an invariant state and everything built on its GNS space.

    ``L_N`` may be supplied to fix the GNS map (used to identify ``L2(N)`` with
    ``L2(M)`` for cocycle objects); it must reproduce the Gram matrix.
    """

    def __init__(self, coaction: Coaction, phi_N=None, L_N=None, name: str | None = None,
                 cocycle: TwoCocycle | None = None):
        self.coaction = coaction
        self.name = name or coaction.name
        self.cocycle = cocycle
        if phi_N is None:
            phi_N, self.uniqueness_dim = invariant_state(coaction)
        else:
            self.uniqueness_dim = invariance_solutions(coaction).shape[1]
        self.phi_N = np.asarray(phi_N, dtype=complex)
        self.gns_N: GnsData = gns(coaction.algebra, self.phi_N, L_N)

    # ---- sizes and shorthands -------------------------------------------------
    @property
    def qg(self) -> FiniteQuantumGroup:
        return self.coaction.qg

    @property
    def reg(self):
        return regular(self.qg)

    @property
    def n(self) -> int:
        return self.gns_N.dim

    @property
    def d(self) -> int:
        return self.qg.dim

    @property
    def J_N(self) -> AntiLinear:
        return self.gns_N.J

    @property
    def nabla_N(self) -> np.ndarray:
        return self.gns_N.nabla

    @property
    def P_N(self) -> np.ndarray:
        """Scaling operator of ``N``; equals ``nabla_N`` since the dual modular element is trivial."""
        return self.gns_N.nabla

    @property
    def delta_N(self) -> np.ndarray:
        """Modular element of the coaction (normalized to 1; see ``modular_suite``)."""
        return np.eye(self.n)

    def piN(self, x) -> np.ndarray:
        return self.gns_N.rep(x)

    def alpha_op(self, x) -> np.ndarray:
        """``alpha(x)`` for coordinates ``x``, on ``L2(N) (x) L2(M)``."""
        a = self.coaction.alpha(x)
        return np.einsum("bc,bij,ckl->ikjl", a, self.gns_N.pi, self.reg.gns.pi).reshape(
            self.n * self.d, self.n * self.d)

    # ---- the Galois map and the implementation ----------------------------------
    @cached_property
    def G(self) -> np.ndarray:
        """``Lambda_N(x) (x) Lambda_N(y) -> (Lambda_N (x) Lambda)(alpha(x)(y (x) 1))``."""
        A = self.coaction.A
        mN = self.coaction.algebra.mult
        k, d = self.coaction.dim, self.d
        gc = np.einsum("abc,byp->pcay", A, mN).reshape(k * d, k * k)
        LN, L = self.gns_N.L, self.reg.gns.L
        return np.kron(LN, L) @ gc @ np.kron(self.gns_N.Linv, self.gns_N.Linv)

    @cached_property
    def Gtilde(self) -> np.ndarray:
        """``Sigma G : L2(N) (x) L2(N) -> L2(M) (x) L2(N)``."""
        return flip(self.n, self.d) @ self.G

    @cached_property
    def U(self) -> np.ndarray:
        """Implementation: ``(id (x) w)(U) Lambda_N(z) = Lambda_N((id (x) w)alpha(z))``."""
        A = self.coaction.A
        inner = np.einsum("abc,cij->baij", A, self.reg.gns.pi)      # sum_c A^T (x) pi(e_c)
        k, d = self.coaction.dim, self.d
        inner = inner.transpose(0, 2, 1, 3).reshape(k * d, k * d)
        LN = np.kron(self.gns_N.L, np.eye(d))
        LNi = np.kron(self.gns_N.Linv, np.eye(d))
        return LN @ inner @ LNi

    @cached_property
    def unitarity(self) -> dict[str, float]:
        Gt = self.Gtilde
        out = {"Gtilde_isometry": residual(Gt.conj().T @ Gt, np.eye(Gt.shape[1]))}
        if Gt.shape[0] == Gt.shape[1]:
            out["Gtilde_coisometry"] = residual(Gt @ Gt.conj().T, np.eye(Gt.shape[0]))
        else:
            out["Gtilde_coisometry"] = float("inf")
        U = self.U
        out["U_unitary"] = residual(U.conj().T @ U, np.eye(len(U)))
        return out

    @property
    def is_galois(self) -> bool:
        u = self.unitarity
        return max(u["Gtilde_isometry"], u["Gtilde_coisometry"]) <= 1e-8

    # ---- Galois homomorphism rho ------------------------------------------------
    @cached_property
    def _slice_pair(self):
        d, n = self.d, self.n
        v = slices_right(self.reg.V, d, d)            # (id (x) w_ij)(V)
        u = slices_right(self.U, n, d)                # (id (x) w_ij)(U)
        return v, u

    def pihat_l(self, m) -> np.ndarray:
        """``rho(1 (x) m)`` for ``m`` in the commutant ``M_hat'`` (acts on ``L2(N)``)."""
        v, u = self._slice_pair
        c = np.linalg.lstsq(v.reshape(len(v), -1).T, np.asarray(m).reshape(-1), rcond=None)[0]
        return np.tensordot(c, u, axes=1)

    def rho_well_defined(self) -> float:
        """Relations among the slices of ``V`` must hold among those of ``U``."""
        v, u = self._slice_pair
        rel = null_space(v.reshape(len(v), -1).T, 1e-9)
        if not rel.size:
            return 0.0
        return float(np.linalg.norm(np.tensordot(rel.T, u, axes=1)))

    def theta_r(self, m) -> np.ndarray:
        """``J_N pihat_l(m)^* J_N``."""
        return (self.J_N @ self.pihat_l(m).conj().T) @ self.J_N.H

    def pi_r(self, x) -> np.ndarray:
        """Right representation ``J_N x^* J_N`` of ``N`` on ``L2(N)``."""
        return self.gns_N.right_rep(x)

    # ---- intertwiner spaces -------------------------------------------------
    @cached_property
    def N_hat(self) -> AlgebraBasis:
        """``{x : L2(M) -> L2(N) | x (id (x) w)(V) = (id (x) w)(U) x}``."""
        v, u = self._slice_pair
        n, d = self.n, self.d
        blocks = [np.kron(np.eye(n), vi.T) - np.kron(ui, np.eye(d)) for vi, ui in zip(v, u)]
        ns = null_space(np.vstack(blocks), 1e-9)
        return AlgebraBasis(canonical_basis(ns.T.reshape(-1, n, d)))

    @cached_property
    def O_hat(self) -> AlgebraBasis:
        return AlgebraBasis(canonical_basis(self.N_hat.elements.conj().transpose(0, 2, 1)))

    @cached_property
    def P_hat(self) -> AlgebraBasis:
        """Commutant of ``rho(1 (x) M_hat')`` on ``L2(N)``."""
        from .tensor import commutant
        _, u = self._slice_pair
        return commutant(u, 1e-9)


def build_galois_object(c: Coaction, phi_N=None, L_N=None, name: str | None = None,
                        cocycle: TwoCocycle | None = None) -> GaloisObject:
    return GaloisObject(c, phi_N, L_N, name, cocycle)


def galois_map(go: GaloisObject, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``G_tilde``; raises if it is not even isometric (internal inconsistency)."""
    iso = go.unitarity["Gtilde_isometry"]
    if iso > max(tol, 1e-8):
        raise ValueError(f"Galois map is not isometric (residual {iso:.2e})")
    return go.Gtilde


def implementation_unitary(go: GaloisObject, tol: float = DEFAULT_TOL) -> np.ndarray:
    res = go.unitarity["U_unitary"]
    if res > max(tol, 1e-8):
        raise ValueError(f"implementation is not unitary (residual {res:.2e})")
    return go.U


def corep_residual(go: GaloisObject) -> float:
    """``(id (x) Delta)(U) = U_12 U_13`` with ``(id (x) Delta)(X) = V_23 X_12 V_23^*``."""
    n, d = go.n, go.d
    dims = [n, d, d]
    V23 = leg_embed(go.reg.V, [2, 3], dims)
    U12 = leg_embed(go.U, [1, 2], dims)
    U13 = leg_embed(go.U, [1, 3], dims)
    return residual(V23 @ U12 @ V23.conj().T, U12 @ U13)


# --------------------------------------------------------------------------
# crossed product
# --------------------------------------------------------------------------


def crossed_product(go: GaloisObject, tol: float = DEFAULT_TOL) -> tuple[AlgebraBasis, Report]:
    """``N x| M`` generated by ``alpha(N)`` and ``1 (x) M_hat'`` on ``L2(N) (x) L2(M)``,
    with the Galois homomorphism ``rho`` checked on products of generators."""
    n, d = go.n, go.d
    k = go.coaction.dim
    alphas = np.array([go.alpha_op(np.eye(k)[a]) for a in range(k)])
    mp = go.reg.Mhat_prime.elements
    ones = np.array([np.kron(np.eye(n), m) for m in mp])
    prods = np.einsum("aij,bjk->abik", alphas, ones).reshape(-1, n * d, n * d)
    cp = generated_algebra(np.concatenate([alphas, ones]), seed=prods)
    rep = Report(f"crossed product {go.name}", tol=tol)
    rep.eq("dim_crossed_product", cp.dim, n * n)
    # rho on the spanning products alpha(f_a)(1 (x) m'_b)
    pil = go.gns_N.pi
    phl = np.array([go.pihat_l(m) for m in mp])
    rho_prods = np.einsum("aij,bjk->abik", pil, phl).reshape(-1, n, n)
    flat = prods.reshape(len(prods), -1)
    s = np.linalg.svd(flat, compute_uv=False)
    rank = int(np.sum(s > 1e-9 * s[0]))
    rep.eq("products_span_crossed_product", rank, cp.dim)
    rel = null_space(flat.T, 1e-9)
    wd = 0.0
    if rel.size:
        wd = float(np.linalg.norm(np.tensordot(rel.T, rho_prods, axes=1)))
    rep.le("rho_well_defined", max(wd, go.rho_well_defined()))
    # multiplicativity on pairs of generators: rho(g h) = rho(g) rho(h)
    gens = np.concatenate([alphas, ones])
    rho_gens = np.concatenate([pil, phl])
    solver = np.linalg.pinv(flat.T)
    worst = 0.0
    for g, rg in zip(gens, rho_gens):
        gh = (g @ gens).reshape(len(gens), -1)
        lhs = np.tensordot(gh @ solver.T, rho_prods, axes=1)
        worst = max(worst, residual(lhs, rg @ rho_gens))
    rep.le("rho_multiplicative", worst)
    s_img = np.linalg.svd(rho_prods.reshape(len(rho_prods), -1), compute_uv=False)
    img = int(np.sum(s_img > 1e-9 * s_img[0]))
    rep.eq("rho_image_dim", img, cp.dim)
    return cp, rep


# --------------------------------------------------------------------------
# verification suites
# --------------------------------------------------------------------------


def _dual_prime_op(go: GaloisObject, m):
    """``(Delta_hat')^op(m) = Sigma V^*(1 (x) m) V Sigma``."""
    S = go.reg.Sigma
    return S @ go.reg.dual_prime_coproduct(m) @ S


def commutation_suite(go: GaloisObject, tol: float = DEFAULT_TOL,
                      Gtilde=None) -> Report:
    """Commutation relations, the J-intertwining, the twisted pentagon and
    slice densities.  ``Gtilde`` may be overridden (for negative controls)."""
    rep = Report(f"commutation {go.name}", tol=tol)
    n, d, k = go.n, go.d, go.coaction.dim
    Gt = go.Gtilde if Gtilde is None else np.asarray(Gtilde)
    reg = go.reg
    U, V = go.U, reg.V
    Sw = flip(n, d)
    # (1) G~(x (x) 1) = alpha^op(x) G~
    w1 = 0.0
    for a in range(k):
        x = np.eye(k)[a]
        aop = Sw @ go.alpha_op(x) @ Sw.T
        w1 = max(w1, residual(Gt @ np.kron(go.piN(x), np.eye(n)), aop @ Gt))
    rep.le("G_x_tensor_1", w1)
    # (2) G~(pihat_l(m) (x) 1) = (m (x) 1) G~ for m in M_hat'
    mp = reg.Mhat_prime.elements
    w2 = max(residual(Gt @ np.kron(go.pihat_l(m), np.eye(n)), np.kron(m, np.eye(n)) @ Gt)
             for m in mp)
    rep.le("G_commutant_tensor_1", w2)
    # (3) G~(1 (x) pi_r(x)) = (1 (x) pi_r(x)) G~
    w3 = 0.0
    for a in range(k):
        pr = go.pi_r(np.eye(k)[a])
        w3 = max(w3, residual(Gt @ np.kron(np.eye(n), pr), np.kron(np.eye(d), pr) @ Gt))
    rep.le("G_1_tensor_right_rep", w3)
    # (4) G~(1 (x) theta_r(m)) = (pihat_r (x) theta_r)((Delta_hat')^op(m)) G~
    mpk = len(mp)
    prodb = np.einsum("iac,jbd->ijabcd", mp, mp).reshape(mpk * mpk, -1)
    Jh = reg.Jhat
    pihat_r = np.array([(Jh @ b.conj().T) @ Jh.H for b in mp])
    theta = np.array([go.theta_r(b) for b in mp])
    w4 = 0.0
    member = 0.0
    for m in mp:
        Z = _dual_prime_op(go, m).reshape(-1)
        coef = prodb.conj() @ Z
        member = max(member, residual(Z, coef @ prodb))
        rhs = np.einsum("ij,iab,jcd->acbd", coef.reshape(mpk, mpk), pihat_r, theta).reshape(
            d * n, d * n)
        w4 = max(w4, residual(Gt @ np.kron(np.eye(n), go.theta_r(m)), rhs @ Gt))
    rep.le("G_1_tensor_theta_r", max(w4, member))
    # G~_12 U_13 = V_13 G~_12
    dims = [n, n, d]
    G12 = leg_embed(Gt, [1, 2], dims, [d, n, d])
    U13 = leg_embed(U, [1, 3], dims)
    V13 = leg_embed(V, [1, 3], [d, n, d])
    rep.le("G12_U13_eq_V13_G12", residual(G12 @ U13, V13 @ G12))
    # G~(J_N (x) J_N) Sigma = Sigma U Sigma (J_hat (x) J_N) G~
    JN = go.J_N
    lhs = Gt @ (JN.kron(JN) @ flip(n, n))
    rhs = (Sw @ U @ Sw.T) @ (reg.Jhat.kron(JN) @ Gt)
    rep.le("J_intertwining", residual(lhs.K, rhs.K))
    # twisted pentagon W_hat_12 G~_13 G~_23 = G~_23 G~_12
    rep.le("twisted_pentagon", twisted_pentagon_residual(go, Gt))
    # densities
    left = slices_left(Gt, n, n, d)
    rep.eq("dim_left_slices", _span_dim(left), k)
    rep.le("left_slices_in_N", _outside(go.gns_N.pi, left))
    right = _right_slices_rect(Gt, n, d)
    O = go.O_hat.elements
    rep.eq("dim_right_slices", _span_dim(right), len(O))
    rep.le("right_slices_in_O_hat", _outside(O, right))
    rep.le("G_in_O_hat_tensor_N", _tensor_outside(Gt, O, go.gns_N.pi))
    return rep


def _right_slices_rect(Gt, n, d):
    """Slices ``(id (x) w_ij)(G~)`` as operators ``L2(N) -> L2(M)``."""
    t = np.asarray(Gt).reshape(d, n, n, n)
    return t.transpose(1, 3, 0, 2).reshape(n * n, d, n)


def _span_dim(mats) -> int:
    flat = np.asarray(mats).reshape(len(mats), -1)
    s = np.linalg.svd(flat, compute_uv=False)
    return int(np.sum(s > SPAN_RTOL * s[0])) if len(s) and s[0] > 0 else 0


def _outside(basis_ops, mats) -> float:
    """Relative size of ``mats`` outside the span of ``basis_ops``."""
    B = canonical_basis(basis_ops).reshape(-1, np.asarray(basis_ops)[0].size)
    flat = np.asarray(mats).reshape(len(mats), -1)
    proj = (flat @ B.conj().T) @ B
    return float(np.linalg.norm(flat - proj) / max(1.0, np.linalg.norm(flat)))


def _tensor_outside(X, left_basis, right_ops) -> float:
    L = canonical_basis(left_basis)
    R = canonical_basis(right_ops)
    prod = np.einsum("iac,jbd->ijabcd", L, R).reshape(len(L) * len(R), -1)
    v = np.asarray(X).reshape(-1)
    return float(np.linalg.norm(v - (v @ prod.conj().T) @ prod) / max(1.0, np.linalg.norm(v)))


def twisted_pentagon_residual(go: GaloisObject, Gt=None) -> float:
    n, d = go.n, go.d
    Gt = go.Gtilde if Gt is None else Gt
    G23 = leg_embed(Gt, [2, 3], [n, n, n], [n, d, n])
    G13 = leg_embed(Gt, [1, 3], [n, d, n], [d, d, n])
    W12 = leg_embed(go.reg.What, [1, 2], [d, d, n])
    G12 = leg_embed(Gt, [1, 2], [n, n, n], [d, n, n])
    G23b = leg_embed(Gt, [2, 3], [d, n, n], [d, d, n])
    return residual(W12 @ G13 @ G23, G23b @ G12)


def perturb_phase(X, phase: float = 0.3, index: int = 0) -> np.ndarray:
    """``X D`` with ``D`` diagonal, one entry ``exp(i phase)`` (negative controls)."""
    X = np.asarray(X, dtype=complex)
    D = np.ones(X.shape[1], dtype=complex)
    D[index] = np.exp(1j * phase)
    return X * D[None, :]


def _ipow(h, t) -> np.ndarray:
    """``h^{it}`` for a positive matrix ``h``."""
    w, v = np.linalg.eigh((h + h.conj().T) / 2)
    return (v * np.exp(1j * t * np.log(w))) @ v.conj().T


def haar_modular_element(qg: FiniteQuantumGroup) -> np.ndarray:
    """Coordinates of ``delta`` with ``phi(delta x) = phi(R(x))`` for all ``x``."""
    from .fqg import antipode_data
    d = qg.dim
    m = qg.mult
    R = antipode_data(qg).R
    psi = qg.haar @ R
    # phi(delta e_i) = sum_j delta_j phi(e_j e_i)
    M = np.einsum("jik,k->ij", m, qg.haar)
    return np.linalg.solve(M, psi)


def modular_suite(go: GaloisObject, tol: float = DEFAULT_TOL) -> Report:
    rep = Report(f"modular {go.name}", tol=tol)
    n, d, k = go.n, go.d, go.coaction.dim
    reg = go.reg
    Gt = go.Gtilde
    delta = haar_modular_element(go.qg)
    rep.le("delta_is_unit", residual(delta, go.qg.unit))
    Jd = (reg.J @ reg.gns.rep(delta)) @ reg.J.H
    H = Gt.conj().T @ np.kron(Jd, np.eye(n)) @ Gt
    rep.le("H_is_identity", residual(H, np.eye(n * n)))
    rep.info("delta_N_normalization", 1.0, note="delta_N = 1 since H = 1 (x) 1")
    nab_hat = reg.nabla_hat
    nab = reg.gns.nabla
    worst = [0.0, 0.0, 0.0]
    P = np.eye(d)
    for t in T_SAMPLES:
        nN = _ipow(go.nabla_N, t)
        pN = _ipow(go.P_N, t)
        worst[0] = max(worst[0], residual(Gt @ np.kron(nN, nN),
                                          np.kron(_ipow(nab_hat, -t), nN) @ Gt))
        worst[1] = max(worst[1], residual(Gt @ np.kron(nN, pN), np.kron(_ipow(nab, t), pN) @ Gt))
        worst[2] = max(worst[2], residual(Gt @ np.kron(pN, pN), np.kron(P, pN) @ Gt))
    rep.le("modular_nabla_nabla", worst[0])
    rep.le("modular_nabla_scaling", worst[1])
    rep.le("scaling_scaling", worst[2])
    rep.info("nabla_N_minus_identity", residual(go.nabla_N, np.eye(n)))
    # invariance of phi_N and uniqueness
    A = go.coaction.A
    pi = reg.gns.pi
    phi = go.phi_N
    # phi_N((id (x) w_pq)alpha(f_a)) = sum_{b, c} A[a, b, c] phi_N(f_b) pi(e_c)[p, q]
    lhs = np.einsum("abc,b,cpq->apq", A, phi, pi)
    rhs = np.einsum("a,pq->apq", phi, np.eye(d))
    rep.le("phi_N_invariance", float(np.max(np.abs(lhs - rhs))))
    rep.eq("invariant_state_uniqueness_dim", go.uniqueness_dim, 1)
    if go.cocycle is not None:
        rep.le("coboundary_X", coboundary_residual(go))
    return rep


def coboundary_residual(go: GaloisObject) -> float:
    """``Omega^*(X (x) X) = Delta_hat(X) Omega~^*`` with ``X = J_N J``."""
    oc = go.cocycle
    reg = go.reg
    X = go.J_N @ reg.J
    tilde, _ = mirror_cocycle(go.qg, oc)
    lhs = oc.omega.conj().T @ np.kron(X, X)
    rhs = reg.dual_coproduct(X) @ tilde.omega.conj().T
    return residual(lhs, rhs)


def galois_report(go: GaloisObject, tol: float = DEFAULT_TOL) -> Report:
    """Unitarity of ``G~`` and ``U`` plus the corepresentation identity."""
    rep = Report(f"galois {go.name}", tol=tol)
    u = go.unitarity
    rep.le("Gtilde_isometry", u["Gtilde_isometry"])
    rep.le("Gtilde_coisometry", u["Gtilde_coisometry"])
    rep.le("U_unitary", u["U_unitary"])
    rep.le("U_corepresentation", corep_residual(go))
    return rep


# --------------------------------------------------------------------------
# constructions
# --------------------------------------------------------------------------


def cocycle_crossed_product(qg: FiniteQuantumGroup, oc: TwoCocycle,
                            tol: float = DEFAULT_TOL) -> GaloisObject:
    """The Galois object ``N = span (w (x) id)(W_hat Omega^*)`` on ``L2(M)``."""
    if oc.base is not qg:
        raise ValueError("cocycle belongs to a different quantum group")
    reg = regular(qg)
    d = qg.dim
    WO = reg.What @ oc.omega.conj().T
    sl = slices_left(WO, d, d)
    dims = [d, d, d]
    W13 = leg_embed(reg.What, [1, 3], dims)
    W12 = leg_embed(reg.What, [1, 2], dims)
    O12 = leg_embed(oc.omega.conj().T, [1, 2], dims)
    big = W13 @ W12 @ O12
    alph = slices_left(big, d, d * d)
    c = coaction_from_operators(qg, sl, alph, f"N_{oc.name}")
    N = c.N
    if N.closure_residual() > max(tol, 1e-8):
        raise ValueError("slices do not span a *-algebra; the cocycle is invalid")
    # Lambda_N((w (x) id)(W_hat Omega^*)) = Lambda((w (x) id)(W_hat)) = (w (x) id)(W_hat) Lambda(1)
    lam1 = reg.gns.lam(qg.unit)
    vecs = np.einsum("kab,b->ak", slices_left(reg.What, d, d), lam1)
    coords = N.coords(sl).T
    LN = vecs @ np.linalg.pinv(coords)
    fit = residual(vecs, LN @ coords)
    if fit > max(tol, 1e-8):
        raise ValueError(f"GNS identification is inconsistent (residual {fit:.2e})")
    phi_N, _ = invariant_state(c)
    return GaloisObject(c, phi_N, LN, c.name, cocycle=oc)


def trivial_galois_object(qg: FiniteQuantumGroup) -> GaloisObject:
    """``N = M`` with ``alpha = Delta``, realized on ``L2(M)``."""
    reg = regular(qg)
    d = qg.dim
    pi = reg.gns.pi
    ops = np.array([np.einsum("jk,jab,kcd->acbd", qg.comult[i], pi, pi).reshape(d * d, d * d)
                    for i in range(d)])
    c = coaction_from_operators(qg, pi, ops, f"trivial_{qg.name}")
    # Lambda_N(x) = x Lambda(1) identifies L2(N) with L2(M)
    LN = np.einsum("kab,b->ak", c.N.elements, reg.gns.lam(qg.unit))
    return GaloisObject(c, L_N=LN, name=c.name)


def weyl_coaction(n: int = 2) -> Coaction:
    """``Z_n x Z_n`` acting on ``M_n`` by ``x -> w_g^* x w_g`` with ``w_(a, b) = X^a Z^b``,
    encoded as a coaction of ``C(Z_n x Z_n)``."""
    from .examples import cyclic, direct_product, function_algebra
    g = direct_product(cyclic(n), cyclic(n))
    qg = function_algebra(g)
    X = np.roll(np.eye(n), 1, axis=0)
    Z = np.diag(np.exp(2j * np.pi * np.arange(n) / n))
    pts = [(a, b) for a in range(n) for b in range(n)]
    ws = [np.linalg.matrix_power(X, a) @ np.linalg.matrix_power(Z, b) for a, b in pts]
    pi = regular(qg).gns.pi
    units = np.array([np.eye(n)[:, [i]] @ np.eye(n)[[j], :] for i in range(n) for j in range(n)],
                     dtype=complex)
    alpha = np.array([sum(np.kron(w.conj().T @ x @ w, pi[i]) for i, w in enumerate(ws))
                      for x in units])
    return coaction_from_operators(qg, units, alpha, f"weyl_M{n}")


def classical_coaction(group, points: int, action, name: str) -> Coaction:
    """``C(X)`` with the coaction of ``C(G)`` from a right action ``x . g``.

    ``action(x, g)`` returns the index of ``x . g``; ``alpha(d_x) = sum d_y (x) d_g``
    over pairs with ``y . g = x``.
    """
    from .examples import function_algebra
    qg = function_algebra(group)
    pi = regular(qg).gns.pi
    deltas = np.array([np.diag(np.eye(points)[x]) for x in range(points)], dtype=complex)
    alpha = []
    for x in range(points):
        op = np.zeros((points * qg.dim,) * 2, dtype=complex)
        for y in range(points):
            for g in range(group.order):
                if action(y, g) == x:
                    op += np.kron(deltas[y], pi[g])
        alpha.append(op)
    return coaction_from_operators(qg, deltas, np.array(alpha), name)


def trivial_action_control() -> GaloisObject:
    """Non-Galois control: ``Z2`` acting trivially on two points (uniform state)."""
    from .examples import cyclic
    c = classical_coaction(cyclic(2), 2, lambda y, g: y, "trivial_Z2_on_2pts")
    return GaloisObject(c, phi_N=np.full(2, 0.5), name=c.name)


def permutation_action_control() -> GaloisObject:
    """Non-Galois control: ``S3`` acting on three points (ergodic, not free)."""
    from .examples import symmetric
    g = symmetric(3)
    perms = [tuple(int(ch) for ch in lab) for lab in g.labels]

    def act(y, gi):
        # right action y . g = g^{-1}(y)
        return perms[gi].index(y)

    c = classical_coaction(g, 3, act, "S3_on_3pts")
    return GaloisObject(c, name=c.name)
