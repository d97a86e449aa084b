"""The linking algebra of a Galois object and the reflected quantum group.

Corners are labelled by pairs ``(i, j)`` with ``1 = L2(N)`` and ``2 = L2(M)``;
corner ``(i, j)`` consists of operators from space ``j`` to space ``i``:

    (1, 1) P_hat    (1, 2) N_hat
    (2, 1) O_hat    (2, 2) M_hat

The coproduct of corner ``(i, j)`` is ``x -> G_i^* (1 (x) x) G_j`` with
``G_1 = G~`` and ``G_2 = W_hat``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .cocycle import TwoCocycle
from .fqg import (FiniteQuantumGroup, SolveError, gns, multiplicative_unitary,
                  pentagon_residual, structure_from_operators, validate)
from .galois import GaloisObject
from .report import DEFAULT_TOL, Report
from .tensor import AlgebraBasis, AntiLinear, canonical_basis, flip, leg_embed, residual

CORNERS = ((1, 1), (1, 2), (2, 1), (2, 2))
CORNER_NAMES = {(1, 1): "P_hat", (1, 2): "N_hat", (2, 1): "O_hat", (2, 2): "M_hat"}


@dataclass(eq=False)
class LinkingCorners:
    go: GaloisObject
    Nhat: AlgebraBasis
    Ohat: AlgebraBasis
    Phat: AlgebraBasis
    Mhat: AlgebraBasis
    report: Report = field(default_factory=lambda: Report("corners"))

    def corner(self, ij) -> np.ndarray:
        return {(1, 1): self.Phat, (1, 2): self.Nhat, (2, 1): self.Ohat,
                (2, 2): self.Mhat}[tuple(ij)].elements

    def space_dim(self, i: int) -> int:
        return self.go.n if i == 1 else self.go.d

    def unitary(self, i: int) -> np.ndarray:
        """``G_i``: the Galois map for ``i = 1``, ``W_hat`` for ``i = 2``."""
        return self.go.Gtilde if i == 1 else self.go.reg.What

    def conjugation(self, i: int) -> AntiLinear:
        return self.go.J_N if i == 1 else self.go.reg.J

    def coproduct(self, ij, x) -> np.ndarray:
        i, j = ij
        d = self.go.d
        Gi, Gj = self.unitary(i), self.unitary(j)
        return Gi.conj().T @ np.kron(np.eye(d), np.asarray(x)) @ Gj

    def antipode(self, ij, x) -> np.ndarray:
        """``R_Q(x) = J_j x^* J_i`` maps corner ``(i, j)`` to ``(j, i)``."""
        i, j = ij
        return (self.conjugation(j) @ np.asarray(x).conj().T) @ self.conjugation(i).H


def _span_report(rep, name, mats, basis):
    """Equality of ``span(mats)`` with the span of ``basis``."""
    flat = np.asarray(mats).reshape(len(mats), -1)
    B = np.asarray(basis).reshape(len(basis), -1)
    s = np.linalg.svd(flat, compute_uv=False)
    rank = int(np.sum(s > 1e-8 * s[0])) if s.size and s[0] > 0 else 0
    rep.eq(f"{name}_dim", rank, len(B))
    proj = (flat @ B.conj().T) @ B
    rep.le(f"{name}_contained", float(np.linalg.norm(flat - proj) / max(1.0, np.linalg.norm(flat))))


def intertwiner_corner(go: GaloisObject, tol: float = DEFAULT_TOL) -> LinkingCorners:
    """Solve for the intertwiners and assemble the four corners."""
    Nh, Oh, Ph = go.N_hat, go.O_hat, go.P_hat
    if Nh.dim == 0:
        raise SolveError("no intertwiners between the module structures")
    reg = go.reg
    Mh = reg.Mhat
    rep = Report(f"corners {go.name}", tol=tol)
    rep.info("dim_N_hat", Nh.dim)
    rep.info("dim_P_hat", Ph.dim)
    # intertwining of the right M_hat-actions  m -> J_hat m^* J_hat
    Jh = reg.Jhat
    worst = 0.0
    for m in Mh.elements:
        mr = (Jh @ m.conj().T) @ Jh.H
        act_N = go.pihat_l(mr)
        for x in Nh.elements:
            worst = max(worst, residual(x @ mr, act_N @ x))
    rep.le("intertwiner_property", worst)
    NO = np.einsum("iab,jbc->ijac", Nh.elements, Oh.elements).reshape(-1, go.n, go.n)
    ON = np.einsum("iab,jbc->ijac", Oh.elements, Nh.elements).reshape(-1, go.d, go.d)
    _span_report(rep, "N_O_spans_P", NO, Ph.elements)
    _span_report(rep, "O_N_spans_M", ON, Mh.elements)
    # module closure: P N M inside N
    PN = np.einsum("iab,jbc->ijac", Ph.elements, Nh.elements).reshape(-1, go.n, go.d)
    NM = np.einsum("iab,jbc->ijac", Nh.elements, Mh.elements).reshape(-1, go.n, go.d)
    B = Nh.elements.reshape(Nh.dim, -1)
    both = np.concatenate([PN, NM]).reshape(-1, B.shape[1])
    rep.le("bimodule_closure", float(np.linalg.norm(both - (both @ B.conj().T) @ B)
                                     / max(1.0, np.linalg.norm(both))))
    rep.le("P_hat_closure", Ph.closure_residual())
    return LinkingCorners(go, Nh, Oh, Ph, Mh, rep)


def _tensor_membership(Z, basis) -> float:
    B = np.asarray(basis)
    k = len(B)
    prod_ = np.einsum("iac,jbd->ijabcd", B, B).reshape(k * k, -1)
    v = np.asarray(Z).reshape(-1)
    return float(np.linalg.norm(v - (v @ prod_.conj().T) @ prod_) / max(1.0, np.linalg.norm(v)))


def _coassociativity(lc: LinkingCorners, ij, x) -> float:
    i, j = ij
    d = lc.go.d
    r, c = lc.space_dim(i), lc.space_dim(j)
    Gi, Gj = lc.unitary(i), lc.unitary(j)
    Z = lc.coproduct(ij, x)
    # (Delta (x) id)(Z) = G_i,12^* Z_23 G_j,12
    gj12 = leg_embed(Gj, [1, 2], [c, c, c], [d, c, c])
    z23 = leg_embed(Z, [2, 3], [d, c, c], [d, r, r])
    gi12 = leg_embed(Gi, [1, 2], [r, r, r], [d, r, r])
    left = gi12.conj().T @ z23 @ gj12
    # (id (x) Delta)(Z) = G_i,23^* Z_13 G_j,23
    gj23 = leg_embed(Gj, [2, 3], [c, c, c], [c, d, c])
    z13 = leg_embed(Z, [1, 3], [c, d, c], [r, d, r])
    gi23 = leg_embed(Gi, [2, 3], [r, r, r], [r, d, r])
    right = gi23.conj().T @ z13 @ gj23
    return residual(left, right)


def corner_coproducts(lc: LinkingCorners, tol: float = DEFAULT_TOL) -> Report:
    """Membership, coassociativity, multiplicativity and the unit of ``Delta_Q``."""
    go = lc.go
    rep = Report(f"corner coproducts {go.name}", tol=tol)
    for ij in CORNERS:
        nm = CORNER_NAMES[ij]
        B = lc.corner(ij)
        rep.le(f"{nm}_membership", max(_tensor_membership(lc.coproduct(ij, x), B) for x in B))
        rep.le(f"{nm}_coassociativity", max(_coassociativity(lc, ij, x) for x in B))
    # O_hat coproduct is the adjoint of the N_hat one
    rep.le("O_hat_adjoint_of_N_hat",
           max(residual(lc.coproduct((2, 1), y), lc.coproduct((1, 2), y.conj().T).conj().T)
               for y in lc.Ohat.elements))
    # homomorphism on composable pairs of corners
    worst = 0.0
    for (i, j), (j2, k) in product(CORNERS, CORNERS):
        if j != j2:
            continue
        for x in lc.corner((i, j)):
            dx = lc.coproduct((i, j), x)
            for y in lc.corner((j, k)):
                worst = max(worst, residual(lc.coproduct((i, k), x @ y),
                                            dx @ lc.coproduct((j, k), y)))
    rep.le("multiplicative", worst)
    # Delta_Q(1) = 1_M (x) 1_M + 1_P (x) 1_P, which is not the unit of Q (x) Q
    n, d = go.n, go.d
    K = n + d
    EN = np.diag(np.r_[np.ones(n), np.zeros(d)])
    EM = np.diag(np.r_[np.zeros(n), np.ones(d)])
    iN = np.eye(K)[:, :n]
    iM = np.eye(K)[:, n:]
    dP1 = lc.coproduct((1, 1), np.eye(n))
    dM1 = lc.coproduct((2, 2), np.eye(d))
    big = np.kron(iN, iN) @ dP1 @ np.kron(iN, iN).T + np.kron(iM, iM) @ dM1 @ np.kron(iM, iM).T
    rep.le("unit_image", residual(big, np.kron(EN, EN) + np.kron(EM, EM)))
    rep.info("unit_image_vs_identity", residual(big, np.eye(K * K)),
             note="non-zero: the coproduct of the linking algebra is not unital")
    return rep


def unitary_antipode_Q(lc: LinkingCorners, tol: float = DEFAULT_TOL) -> Report:
    rep = Report(f"unitary antipode {lc.go.name}", tol=tol)
    member = invol = 0.0
    lem = 0.0
    for ij in CORNERS:
        i, j = ij
        ji = (j, i)
        target = lc.corner(ji).reshape(len(lc.corner(ji)), -1)
        for x in lc.corner(ij):
            rx = lc.antipode(ij, x)
            v = rx.reshape(-1)
            member = max(member, float(np.linalg.norm(v - (v @ target.conj().T) @ target)))
            invol = max(invol, residual(lc.antipode(ji, rx), x))
            # Delta(R x) = (R (x) R)(Delta^op x),  (R (x) R)(Z) = (J_j (x) J_j) Z^* (J_i (x) J_i)
            r, c = lc.space_dim(i), lc.space_dim(j)
            dop = flip(r, r) @ lc.coproduct(ij, x) @ flip(c, c)
            Jj = lc.conjugation(j).kron(lc.conjugation(j))
            Ji = lc.conjugation(i).kron(lc.conjugation(i))
            rr = (Jj @ dop.conj().T) @ Ji.H
            lem = max(lem, residual(lc.coproduct(ji, rx), rr))
    rep.le("maps_corners", member)
    rep.le("involutive", invol)
    anti = 0.0
    for (i, j), (j2, k) in product(CORNERS, CORNERS):
        if j != j2:
            continue
        for x in lc.corner((i, j)):
            for y in lc.corner((j, k)):
                anti = max(anti, residual(lc.antipode((i, k), x @ y),
                                          lc.antipode((j, k), y) @ lc.antipode((i, j), x)))
    rep.le("anti_multiplicative", anti)
    rep.le("coproduct_antipode_relation", lem)
    # on the M_hat corner it is the unitary antipode of the dual
    reg = lc.go.reg
    rep.le("restricts_to_dual_antipode",
           max(residual(lc.antipode((2, 2), m), reg.dual_unitary_antipode(m))
               for m in lc.Mhat.elements))
    return rep


@dataclass(eq=False)
class ReflectedQuantumGroup:
    qg_out: FiniteQuantumGroup
    corners: LinkingCorners
    witness: Report

    @property
    def basis(self) -> np.ndarray:
        return self.corners.Phat.elements


def _is_commutative(qg: FiniteQuantumGroup) -> float:
    return residual(qg.mult, qg.mult.transpose(1, 0, 2))


def _cocommutativity(qg: FiniteQuantumGroup) -> float:
    return residual(qg.comult, qg.comult.transpose(0, 2, 1))


def reflect(go: GaloisObject, tol: float = DEFAULT_TOL,
            lc: LinkingCorners | None = None) -> ReflectedQuantumGroup:
    """The reflected quantum group ``(P_hat, Delta_P)`` as structure constants."""
    lc = intertwiner_corner(go, tol) if lc is None else lc
    B = lc.Phat.elements
    qg_out, info = structure_from_operators(
        B, lambda x: lc.coproduct((1, 1), x), f"reflect({go.name})", haar_sides=("left",))
    if info["haar_solution_dim"] != 1:
        raise SolveError(f"left-invariance system has solution dimension "
                         f"{info['haar_solution_dim']}")
    rep = Report(f"reflect {go.name}", tol=tol)
    rep.le("closure", info["closure"])
    rep.le("unit", info["unit"])
    rep.le("coproduct_membership", info["coproduct_membership"])
    rep.eq("haar_solution_dim", info["haar_solution_dim"], 1)
    # R_P in coordinates and psi = phi o R, which must be right invariant
    Rm = np.array([lc.Phat.coords(lc.antipode((1, 1), b)) for b in B]).T
    psi = qg_out.haar @ Rm
    k = len(B)
    # (psi (x) id) Delta(e_i) = psi(e_i) 1
    lhs = np.einsum("ijk,j->ik", qg_out.comult, psi)
    rep.le("psi_right_invariance", residual(lhs, np.outer(psi, qg_out.unit)))
    rep.le("psi_equals_phi", residual(psi, qg_out.haar))
    val = validate(qg_out, tol)
    rep.extend(val, prefix="validate")
    rep.info("commutativity_residual", _is_commutative(qg_out))
    rep.info("cocommutativity_residual", _cocommutativity(qg_out))
    rep.info("modular_data_trivial", residual(go.nabla_N, np.eye(go.n)),
             note="modular groups commute vacuously when this is 0")
    return ReflectedQuantumGroup(qg_out, lc, rep)


def dual_isomorphism(go: GaloisObject, rq: ReflectedQuantumGroup) -> dict[str, float]:
    """For objects realized on ``L2(M)`` with ``P_hat = M_hat`` as algebras: residuals
    of the identity map being an isomorphism onto the twisted (or plain) dual."""
    reg = go.reg
    theta = np.array([reg.Mhat.coords(b) for b in rq.basis]).T
    if go.cocycle is not None:
        from .cocycle import twist_coproduct
        target = twist_coproduct(go.qg, go.cocycle).qg
    else:
        target = reg.dual
    out = {"span": max(reg.Mhat.contains(b) for b in rq.basis)}
    out.update(_iso(rq.qg_out, target, theta))
    return out


def _iso(q1, q2, theta):
    from .fqg import isomorphism_residuals
    return isomorphism_residuals(q1, q2, theta)


def twisted_multiplicative_unitary(qg: FiniteQuantumGroup, oc: TwoCocycle, go: GaloisObject,
                                   rq: ReflectedQuantumGroup | None = None,
                                   tol: float = DEFAULT_TOL) -> tuple[np.ndarray, Report]:
    """``W_hat_Omega`` by the closed formula and from the reflected quantum group.

    Route (a): ``(J_N (x) J_hat) Omega W_hat^* (J (x) J_hat) Omega^*``.
    Route (b): the left regular unitary of the reflected quantum group, moved
    to ``L2(M)`` by ``Lambda_P(p) -> p xi0``.
    """
    reg = regular_of(qg)
    d = qg.dim
    om = oc.omega
    a = (go.J_N.kron(reg.Jhat) @ (om @ reg.What.conj().T)) @ reg.J.kron(reg.Jhat) @ om.conj().T
    rq = reflect(go, tol) if rq is None else rq
    qP = rq.qg_out
    gP = gns(qP)
    WP = multiplicative_unitary(qP, gP).W
    vecs = np.array([b @ reg.xi0 for b in rq.basis]).T
    theta = vecs @ gP.Linv
    TT = np.kron(theta, theta)
    b = TT @ WP @ TT.conj().T
    rep = Report("twisted multiplicative unitary", tol=tol)
    rep.le("transport_unitary", residual(theta.conj().T @ theta, np.eye(d)))
    rep.le("formula_vs_reflection", residual(a, b))
    rep.le("unitary", residual(a.conj().T @ a, np.eye(d * d)))
    rep.le("pentagon", pentagon_residual(a, d))
    rep.le("implements_twisted_coproduct",
           max(residual(a.conj().T @ np.kron(np.eye(d), y) @ a,
                        om @ reg.dual_coproduct(y) @ om.conj().T) for y in reg.Mhat.elements))
    rep.info("deviation_from_W_hat", residual(a, reg.What))
    return a, rep


def regular_of(qg):
    from .fqg import regular
    return regular(qg)
