"""Unitary 2-cocycles on the dual of a finite quantum group.

A cocycle is stored as an operator ``Omega`` on ``L2(M) (x) L2(M)`` whose
legs lie in the realized dual ``M_hat``.  The leg coproducts are

    (id (x) Delta_hat)(X) = W_hat_23^* X_13 W_hat_23
    (Delta_hat (x) id)(X) = W_hat_12^* X_23 W_hat_12

and the cocycle identity reads
``(1 (x) Omega)(id (x) Delta_hat)(Omega) = (Omega (x) 1)(Delta_hat (x) id)(Omega)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fqg import FiniteQuantumGroup, regular, structure_from_operators
from .report import DEFAULT_TOL, Report
from .tensor import AntiLinear, flip, kron, leg_embed, residual


@dataclass(frozen=True, eq=False)
class TwoCocycle:
    base: FiniteQuantumGroup
    omega: np.ndarray
    name: str = "Omega"

    def __post_init__(self):
        om = np.asarray(self.omega, dtype=complex)
        d = self.base.dim
        if om.shape != (d * d, d * d):
            raise ValueError(f"cocycle must act on L2(M)(x)L2(M) of dimension {d * d}, "
                             f"got shape {om.shape}")
        if not np.all(np.isfinite(om)):
            raise ValueError("cocycle has non-finite entries")
        object.__setattr__(self, "omega", om)


@dataclass(frozen=True, eq=False)
class TwistedHopfData:
    basis: np.ndarray             # realized dual basis
    coproducts: np.ndarray        # Delta_hat_Omega of each basis element
    coassociativity: float
    deviation: float              # max residual between Delta_hat_Omega and Delta_hat
    qg: FiniteQuantumGroup        # the twisted structure constants


def trivial_cocycle(qg: FiniteQuantumGroup, name: str = "trivial") -> TwoCocycle:
    return TwoCocycle(qg, np.eye(qg.dim ** 2), name)


def dual_leg_coproducts(qg: FiniteQuantumGroup, X):
    """``((Delta_hat (x) id)(X), (id (x) Delta_hat)(X))`` for ``X`` on two legs."""
    reg = regular(qg)
    d = qg.dim
    dims = [d, d, d]
    Wh = reg.What
    w12 = leg_embed(Wh, [1, 2], dims)
    w23 = leg_embed(Wh, [2, 3], dims)
    left = w12.conj().T @ leg_embed(X, [2, 3], dims) @ w12
    right = w23.conj().T @ leg_embed(X, [1, 3], dims) @ w23
    return left, right


def leg_membership(qg: FiniteQuantumGroup, X) -> float:
    """Relative norm of the part of ``X`` outside ``M_hat (x) M_hat``."""
    B = regular(qg).Mhat.elements
    d = qg.dim
    k = len(B)
    prod = np.einsum("iac,jbd->ijabcd", B, B).reshape(k * k, d ** 4)
    v = np.asarray(X).reshape(-1)
    proj = (v @ prod.conj().T) @ prod
    return float(np.linalg.norm(v - proj) / max(1.0, np.linalg.norm(v)))


def cocycle_identity_residual(qg: FiniteQuantumGroup, omega) -> float:
    d = qg.dim
    left, right = dual_leg_coproducts(qg, omega)
    lhs = np.kron(np.eye(d), omega) @ right
    rhs = np.kron(omega, np.eye(d)) @ left
    return residual(lhs, rhs)


def check_cocycle(qg: FiniteQuantumGroup, omega, tol: float = DEFAULT_TOL) -> Report:
    """Unitarity, leg membership and the cocycle identity."""
    om = omega.omega if isinstance(omega, TwoCocycle) else np.asarray(omega, dtype=complex)
    d = qg.dim
    if om.shape != (d * d, d * d):
        raise ValueError(f"cocycle must have shape {(d * d, d * d)}, got {om.shape}")
    rep = Report("cocycle", tol=tol)
    rep.le("unitary", residual(om.conj().T @ om, np.eye(d * d)))
    rep.le("legs_in_dual", leg_membership(qg, om))
    rep.le("cocycle_identity", cocycle_identity_residual(qg, om))
    return rep


def twisted_coproduct_operator(qg: FiniteQuantumGroup, omega, y) -> np.ndarray:
    om = omega.omega if isinstance(omega, TwoCocycle) else np.asarray(omega)
    return om @ regular(qg).dual_coproduct(y) @ om.conj().T


def coassociativity_residual(coproduct, basis) -> tuple[float, float]:
    """Coassociativity of ``coproduct`` on the span of ``basis``.

    ``basis`` is a Hilbert-Schmidt orthonormal stack.  Each ``coproduct(b)`` is
    expanded over ``basis (x) basis``; returns ``(coassociativity, membership)``
    where membership is the part of the coproducts outside that span.
    """
    B = np.asarray(basis)
    k = len(B)
    D = np.array([coproduct(b) for b in B]).reshape(k, -1)
    prod = np.einsum("iac,jbd->ijabcd", B, B).reshape(k * k, -1)
    coef = D @ prod.conj().T
    member = residual(D, coef @ prod)
    c = coef.reshape(k, k, k)
    lhs = np.einsum("ijk,jab->iabk", c, c)      # (Delta (x) id) Delta
    rhs = np.einsum("ijk,kab->ijab", c, c)      # (id (x) Delta) Delta
    return residual(lhs, rhs), member


def twist_coproduct(qg: FiniteQuantumGroup, oc: TwoCocycle,
                    tol: float = DEFAULT_TOL) -> TwistedHopfData:
    """The twisted dual ``(M_hat, Omega Delta_hat(.) Omega^*)``."""
    reg = regular(qg)
    B = reg.Mhat.elements
    tw = [twisted_coproduct_operator(qg, oc, b) for b in B]
    plain = [reg.dual_coproduct(b) for b in B]
    coassoc, member = coassociativity_residual(
        lambda y: twisted_coproduct_operator(qg, oc, y), B)
    qt, _ = structure_from_operators(B, lambda y: twisted_coproduct_operator(qg, oc, y),
                                     f"{reg.dual.name}_{oc.name}")
    dev = max(residual(a, b) for a, b in zip(tw, plain))
    return TwistedHopfData(B, np.array(tw), max(coassoc, member), dev, qt)


def _unitary_in_dual(qg, u, tol):
    d = qg.dim
    u = np.asarray(u, dtype=complex)
    if u.shape != (d, d):
        raise ValueError(f"expected a {d}x{d} matrix, got {u.shape}")
    if residual(u.conj().T @ u, np.eye(d)) > max(tol, 1e-8):
        raise ValueError("u is not unitary")
    if regular(qg).Mhat.contains(u) > max(tol, 1e-8):
        raise ValueError("u does not lie in the dual algebra")
    return u


def coboundary_transform(oc: TwoCocycle, u, tol: float = DEFAULT_TOL,
                         name: str | None = None) -> TwoCocycle:
    """``Omega' = (u (x) u) Omega Delta_hat(u)^*`` for a unitary ``u`` in ``M_hat``."""
    qg = oc.base
    u = _unitary_in_dual(qg, u, tol)
    du = regular(qg).dual_coproduct(u)
    om = np.kron(u, u) @ oc.omega @ du.conj().T
    return TwoCocycle(qg, om, name or f"{oc.name}^u")


def dual_unitary_antipode_2(qg: FiniteQuantumGroup, X) -> np.ndarray:
    """``(R_hat (x) R_hat)(X) = (J (x) J) X^* (J (x) J)``."""
    J = regular(qg).J
    JJ = J.kron(J)
    return (JJ @ np.asarray(X).conj().T) @ JJ.H


def mirror_cocycle(qg: FiniteQuantumGroup, oc: TwoCocycle,
                   tol: float = DEFAULT_TOL) -> tuple[TwoCocycle, Report]:
    """``Omega~ = (R_hat (x) R_hat)(Sigma Omega^* Sigma)`` with its check report.

    ``R_hat`` is the unitary antipode of the dual, ``J y^* J``; the report
    also compares it with the antipode solved from the dual's structure
    constants.
    """
    reg = regular(qg)
    S = reg.Sigma
    om = dual_unitary_antipode_2(qg, S @ oc.omega.conj().T @ S)
    mirrored = TwoCocycle(qg, om, f"{oc.name}~")
    rep = check_cocycle(qg, mirrored, tol)
    rep.title = "mirror cocycle"
    # R_hat from the structure constants of the dual agrees with J y^* J
    B = reg.Mhat.elements
    R = reg.dual_build[0]
    from .fqg import antipode_data
    Rmat = antipode_data(R).R
    worst = 0.0
    for i, b in enumerate(B):
        via_j = reg.dual_unitary_antipode(b)
        via_sc = np.tensordot(Rmat[:, i], B, axes=1)
        worst = max(worst, residual(via_j, via_sc))
    rep.le("unitary_antipode_consistency", worst)
    return mirrored, rep


# --------------------------------------------------------------------------
# worked cocycles
# --------------------------------------------------------------------------


def dual_point_functions(qg: FiniteQuantumGroup) -> np.ndarray:
    """Realized elements ``f_b`` of ``M_hat`` with ``W = sum_b pi(e_b) (x) f_b``.

    For ``M = C[G]`` these are the minimal projections of ``M_hat = C(G)``
    (``f_g`` is the delta function at ``g``); for ``M = C(G)`` they are the
    group-like unitaries ``lambda_g`` of ``M_hat = C[G]``.
    """
    from .fqg import pairing_identification
    reg = regular(qg)
    return np.array([reg.Mhat.combine(c) for c in pairing_identification(qg).T])


def cocycle_from_function(qg: FiniteQuantumGroup, projections, sigma,
                          name: str = "Omega") -> TwoCocycle:
    """``Omega = sum_ij sigma[i, j] P_i (x) P_j`` over realized projections."""
    P = np.asarray(projections)
    om = np.einsum("ij,iac,jbd->abcd", np.asarray(sigma, dtype=complex), P, P)
    d = P.shape[1]
    return TwoCocycle(qg, om.reshape(d * d, d * d), name)


def weyl_cocycle(n: int = 2) -> TwoCocycle:
    """Bicharacter ``zeta^{bc}`` on ``Z_n x Z_n`` as a cocycle on the dual of
    ``C[Z_n x Z_n]`` (that dual being the function algebra)."""
    from .examples import cyclic, direct_product, group_algebra
    g = direct_product(cyclic(n), cyclic(n))
    qg = group_algebra(g)
    zeta = np.exp(2j * np.pi / n)
    pts = [(a, b) for a in range(n) for b in range(n)]   # element order of the product
    sigma = np.array([[zeta ** (s[1] * t[0]) for t in pts] for s in pts])
    return cocycle_from_function(qg, dual_point_functions(qg), sigma, f"bichar_Z{n}xZ{n}")


def dihedral_twist() -> TwoCocycle:
    """A cocycle on ``C[D4]``, the dual of ``C(D4)``, supported on the Klein
    subgroup ``K = {e, r^2, s, r^2 s}``.

    With ``K = Z2 x Z2`` via ``r^{2a} s^b -> (a, b)``, the minimal projections of
    ``C[K]`` are ``p_chi = (1/4) sum_k chi(k) lambda_k`` for the characters
    ``chi_(c, d)(a, b) = (-1)^{ac + bd}``, and ``Omega`` is the bicharacter
    ``(-1)^{c1 d2}`` on the character group.
    """
    from .examples import dihedral, function_algebra
    g = dihedral(4)
    qg = function_algebra(g)
    lam = dual_point_functions(qg)
    klein = {(a, b): g.index("r" + str(2 * a) + ("s" if b else "")) for a in range(2)
             for b in range(2)}
    chars = [(c, e) for c in range(2) for e in range(2)]
    P = np.array([sum((-1) ** (a * c + b * e) * lam[klein[(a, b)]]
                      for (a, b) in klein) / 4 for (c, e) in chars])
    sigma = np.array([[(-1) ** (x[0] * y[1]) for y in chars] for x in chars])
    om = np.einsum("ij,iac,jbd->abcd", sigma.astype(complex), P, P)
    d = qg.dim
    # the projections sum to 1 on the Klein part; Omega acts as the identity elsewhere
    return TwoCocycle(qg, om.reshape(d * d, d * d), "D4_klein_twist")


def broken_cocycle(oc: TwoCocycle, phase: float = 0.3) -> TwoCocycle:
    """Perturb a single diagonal phase of ``Omega``.

    The legs of ``Omega`` generate a commutative algebra; with ``P`` its last
    minimal projection that is not central in ``M_hat`` (or simply its last one
    when all are central), ``Omega`` is multiplied by ``1 + (exp(i phase) - 1) P (x) P``.
    The result stays unitary with legs in ``M_hat`` but is no longer a cocycle
    (unless ``Omega`` is a scalar, which has nothing to break).
    """
    P = leg_projections(oc)
    d = oc.base.dim
    B = regular(oc.base).Mhat.elements
    noncentral = [p for p in P if max(residual(p @ b, b @ p) for b in B) > 1e-8]
    p = noncentral[-1] if noncentral else P[-1]
    E = np.kron(p, p)
    om = oc.omega @ (np.eye(d * d) + (np.exp(1j * phase) - 1) * E)
    return TwoCocycle(oc.base, om, f"{oc.name}_broken")


def leg_projections(oc: TwoCocycle) -> np.ndarray:
    """Minimal projections of the (commutative) algebra generated by the legs
    of ``Omega``, ordered by a deterministic generic spectral parameter."""
    from .tensor import generated_algebra, slices_left, slices_right
    d = oc.base.dim
    legs = np.concatenate([slices_left(oc.omega, d, d), slices_right(oc.omega, d, d)])
    A = generated_algebra(legs, rng=np.random.default_rng(0)).elements
    comm = max(residual(a @ b, b @ a) for a in A for b in A)
    if comm > 1e-8:
        raise ValueError("the legs of this cocycle do not commute")
    h = np.tensordot(np.linspace(1.0, 2.0, len(A)), A, axes=1)
    h = h + h.conj().T
    w, v = np.linalg.eigh(h)
    groups = []
    for i, val in enumerate(w):
        if groups and abs(val - w[groups[-1][0]]) < 1e-8:
            groups[-1].append(i)
        else:
            groups.append([i])
    return np.array([v[:, g] @ v[:, g].conj().T for g in groups])
