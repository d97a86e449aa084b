"""Projective corepresentations of a Galois object and coactions on matrix algebras.

A projective corepresentation is a unitary ``G : L2(M) (x) H -> L2(N) (x) H``
whose first leg lies in ``N_hat`` and which satisfies
``(Delta_N_hat (x) id)(G) = G_13 G_23``.  It induces the left coaction
``Upsilon(x) = G^*(1 (x) x)G`` of the dual on ``B(H)``; conversely a Galois
object is recovered from any such coaction as a relative commutant inside
the crossed product.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fqg import FiniteQuantumGroup, regular
from .galois import GaloisObject, coaction_from_operators
from .report import DEFAULT_TOL, Report
from .tensor import (AntiLinear, canonical_basis, conj_entrywise, generated_algebra,
                     leg_embed, matrix_unit, residual, slices_right)


@dataclass(eq=False)
class ProjectiveCorep:
    go: GaloisObject
    H_dim: int
    G_op: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.G_op, dtype=complex)
        n, d, k = self.go.n, self.go.d, int(self.H_dim)
        if g.shape != (n * k, d * k):
            raise ValueError(f"corepresentation must have shape {(n * k, d * k)}, got {g.shape}")
        self.G_op = g


@dataclass(eq=False)
class TypeICoaction:
    """``Upsilon(e_ij)`` for the matrix units of ``B(C^H_dim)``, on ``L2(M) (x) H``."""

    qg: FiniteQuantumGroup
    H_dim: int
    Upsilon: np.ndarray          # shape (H, H, d H, d H)

    def __call__(self, x) -> np.ndarray:
        return np.einsum("ij,ijab->ab", np.asarray(x, dtype=complex), self.Upsilon)

    def slice_legs(self, v) -> np.ndarray:
        """``(id (x) Upsilon)(v)`` for ``v`` on ``L2(M) (x) H``; result on ``L2(M) (x) L2(M) (x) H``."""
        d, k = self.qg.dim, self.H_dim
        t = np.asarray(v).reshape(d, k, d, k)
        # v = sum_ij v_ij (x) e_ij with v_ij = t[:, i, :, j]
        coef = t.transpose(0, 2, 1, 3).reshape(d * d, k * k)
        prod = (coef @ self.Upsilon.reshape(k * k, -1)).reshape(d, d, d * k, d * k)
        return prod.transpose(0, 2, 1, 3).reshape(d * d * k, d * d * k)


# --------------------------------------------------------------------------
# corepresentations
# --------------------------------------------------------------------------


def delta_N_hat_leg(go: GaloisObject, X, k: int) -> np.ndarray:
    """``(Delta_N_hat (x) id)(X) = G~_12^* X_23 W_hat_12`` for ``X : L2(M) (x) H -> L2(N) (x) H``."""
    n, d = go.n, go.d
    W12 = leg_embed(go.reg.What, [1, 2], [d, d, k])
    X23 = leg_embed(X, [2, 3], [d, d, k], [d, n, k])
    G12 = leg_embed(go.Gtilde, [1, 2], [n, n, k], [d, n, k])
    return G12.conj().T @ X23 @ W12


def check_corep(pc: ProjectiveCorep, tol: float = DEFAULT_TOL) -> Report:
    go, k, g = pc.go, pc.H_dim, pc.G_op
    n, d = go.n, go.d
    rep = Report("projective corepresentation", tol=tol)
    # first leg in N_hat: every slice (id (x) w_ij)(G) lies in N_hat
    sl = np.asarray(g).reshape(n, k, d, k).transpose(1, 3, 0, 2).reshape(k * k, n, d)
    B = go.N_hat.elements.reshape(go.N_hat.dim, -1)
    flat = sl.reshape(k * k, -1)
    out = np.linalg.norm(flat - (flat @ B.conj().T) @ B) / max(1.0, np.linalg.norm(flat))
    rep.le("first_leg_in_N_hat", float(out))
    rep.le("unitary", max(residual(g.conj().T @ g, np.eye(d * k)),
                          residual(g @ g.conj().T, np.eye(n * k))))
    G13 = leg_embed(g, [1, 3], [d, n, k], [n, n, k])
    G23 = leg_embed(g, [2, 3], [d, d, k], [d, n, k])
    rep.le("corep_identity", residual(delta_N_hat_leg(go, g, k), G13 @ G23))
    return rep


def regular_corep(go: GaloisObject) -> ProjectiveCorep:
    """``(J_N (x) K) G~^* (J (x) K)`` with ``K`` entrywise conjugation on ``L2(N)``."""
    n = go.n
    K = conj_entrywise(n)
    left = go.J_N.kron(K)
    right = go.reg.J.kron(K)
    g = (left @ go.Gtilde.conj().T) @ right
    return ProjectiveCorep(go, n, g)


def grouplike_corep(go: GaloisObject, u) -> ProjectiveCorep:
    """A one-dimensional corepresentation given by a unitary ``u`` in ``N_hat``."""
    return ProjectiveCorep(go, 1, np.asarray(u, dtype=complex))


def perturb_corep(pc: ProjectiveCorep, phase: float = 0.3, index: int = 0) -> ProjectiveCorep:
    """Multiply by ``1 (x) D`` with one diagonal phase of ``D`` changed (negative control)."""
    D = np.eye(pc.H_dim, dtype=complex)
    D[index, index] = np.exp(1j * phase)
    return ProjectiveCorep(pc.go, pc.H_dim, pc.G_op @ np.kron(np.eye(pc.go.d), D))


def conjugate_corep(pc: ProjectiveCorep, w) -> ProjectiveCorep:
    """``(1 (x) w) G (1 (x) w^*)``, another corepresentation over the same object."""
    w = np.asarray(w, dtype=complex)
    return ProjectiveCorep(pc.go, pc.H_dim,
                           np.kron(np.eye(pc.go.n), w) @ pc.G_op @ np.kron(np.eye(pc.go.d),
                                                                         w.conj().T))


def twisted_unitary_relation(pc: ProjectiveCorep, W_omega) -> float:
    """For a cocycle object: ``(1 (x) K_J_hat) G_reg (1 (x) K_J_hat)^* = W_hat_Omega Omega``.

    ``K_J_hat`` is the matrix of the dual conjugation (``J_hat = K_J_hat o conj``).
    """
    go = pc.go
    if go.cocycle is None:
        raise ValueError("only defined for cocycle objects")
    Kj = go.reg.Jhat.K
    d = go.d
    lhs = np.kron(np.eye(d), Kj) @ pc.G_op @ np.kron(np.eye(d), Kj).conj().T
    return residual(lhs, np.asarray(W_omega) @ go.cocycle.omega)


# --------------------------------------------------------------------------
# coactions on B(H)
# --------------------------------------------------------------------------


def induced_coaction(pc: ProjectiveCorep) -> TypeICoaction:
    g = pc.G_op
    k, d = pc.H_dim, pc.go.d
    ups = np.array([[g.conj().T @ np.kron(np.eye(pc.go.n), matrix_unit(k, i, j)) @ g
                     for j in range(k)] for i in range(k)])
    return TypeICoaction(pc.go.qg, k, ups)


def validate_type_i(tc: TypeICoaction, tol: float = DEFAULT_TOL) -> Report:
    d, k = tc.qg.dim, tc.H_dim
    reg = regular(tc.qg)
    Y = tc.Upsilon
    rep = Report("coaction on B(H)", tol=tol)
    worst = 0.0
    for i in range(k):
        for j in range(k):
            for a in range(k):
                for b in range(k):
                    target = Y[i, b] if j == a else np.zeros_like(Y[i, b])
                    worst = max(worst, residual(Y[i, j] @ Y[a, b], target))
    rep.le("matrix_units", worst)
    rep.le("unital", residual(sum(Y[i, i] for i in range(k)), np.eye(d * k)))
    rep.le("star", max(residual(Y[i, j].conj().T, Y[j, i]) for i in range(k) for j in range(k)))
    # first legs in M_hat
    sl = np.concatenate([slices_right(Y[i, j], d, k) for i in range(k) for j in range(k)])
    B = reg.Mhat.elements.reshape(reg.Mhat.dim, -1)
    flat = sl.reshape(len(sl), -1)
    rep.le("first_leg_in_dual", float(np.linalg.norm(flat - (flat @ B.conj().T) @ B)
                                      / max(1.0, np.linalg.norm(flat))))
    # (Delta_hat (x) id) Upsilon = (id (x) Upsilon) Upsilon
    W12 = leg_embed(reg.What, [1, 2], [d, d, k])
    coact = 0.0
    for i in range(k):
        for j in range(k):
            lhs = W12.conj().T @ leg_embed(Y[i, j], [2, 3], [d, d, k]) @ W12
            coact = max(coact, residual(lhs, tc.slice_legs(Y[i, j])))
    rep.le("coaction_identity", coact)
    s = np.linalg.svd(Y.reshape(k * k, -1), compute_uv=False)
    rep.eq("injective_rank", int(np.sum(s > 1e-9 * s[0])), k * k)
    return rep


def trivial_type_i(qg: FiniteQuantumGroup, k: int) -> TypeICoaction:
    """``Upsilon(x) = 1 (x) x``."""
    d = qg.dim
    ups = np.array([[np.kron(np.eye(d), matrix_unit(k, i, j)) for j in range(k)]
                    for i in range(k)])
    return TypeICoaction(qg, k, ups)


@dataclass(eq=False)
class Extraction:
    go: GaloisObject
    corep: ProjectiveCorep
    report: Report
    crossed_dim: int


def extract_galois(tc: TypeICoaction, tol: float = DEFAULT_TOL,
                   name: str = "extracted") -> Extraction:
    """Recover the Galois object and the corepresentation inducing ``Upsilon``."""
    qg, k, Y = tc.qg, tc.H_dim, tc.Upsilon
    d = qg.dim
    reg = regular(qg)
    rep = Report(f"extraction {name}", tol=tol)
    Mops = np.array([np.kron(p, np.eye(k)) for p in reg.gns.pi])
    gens = np.concatenate([Y.reshape(k * k, d * k, d * k), Mops])
    seed = np.einsum("cab,ijbe->cijae", Mops, Y).reshape(-1, d * k, d * k)
    cp = generated_algebra(gens, seed=seed, canonical=False)
    rep.eq("crossed_product_dim", cp.dim, d * k * k)

    def phi(i, j, z):
        return sum(Y[l, i] @ z @ Y[j, l] for l in range(k))

    spanning = np.array([phi(i, j, m) for i in range(k) for j in range(k) for m in Mops])
    basis = canonical_basis(spanning)
    rep.eq("relative_commutant_dim", len(basis), d)
    comm = max(residual(b @ Y[i, j], Y[i, j] @ b) for b in basis for i in range(k)
               for j in range(k))
    rep.le("relative_commutant", comm)
    inside = cp.contains(basis[0]) if len(basis) else 0.0
    rep.le("inside_crossed_product", max(cp.contains(b) for b in basis) if len(basis) else inside)
    if len(basis) != d:
        raise ValueError(f"relative commutant has dimension {len(basis)}, expected {d}")
    # dual coaction x -> V_13 x_12 V_13^*
    V13 = leg_embed(reg.V, [1, 3], [d, k, d])
    alpha = np.array([V13 @ np.kron(b, np.eye(d)) @ V13.conj().T for b in basis])
    c = coaction_from_operators(qg, basis, alpha, name)
    go = GaloisObject(c, name=name)
    # u(Lambda(e_c) (x) Lambda_Tr(e_ab)) = (Lambda_N (x) Lambda_Tr)(Phi(e_c (x) 1)(1 (x) e_ab))
    LN = go.gns_N.L
    n = go.n
    cols = np.zeros((n, k, k, d, k, k), dtype=complex)     # (out N, out i, out b ; c, a, b)
    for cidx, m in enumerate(Mops):
        for a in range(k):
            for i in range(k):
                vec = LN @ c.N.coords(phi(i, a, m))
                for b in range(k):
                    cols[:, i, b, cidx, a, b] = vec
    u = cols.reshape(n * k * k, d * k * k) @ np.kron(np.linalg.inv(reg.gns.L), np.eye(k * k))
    t = u.reshape(n * k, k, d * k, k)
    Gx = t[:, 0, :, 0]
    rep.le("u_factorizes", residual(u, np.kron(Gx, np.eye(k))))
    pc = ProjectiveCorep(go, k, Gx)
    rep.le("implements_coaction", max(
        residual(Gx @ Y[i, j], np.kron(np.eye(n), matrix_unit(k, i, j)) @ Gx)
        for i in range(k) for j in range(k)))
    rep.extend(check_corep(pc, tol), prefix="corep")
    return Extraction(go, pc, rep, cp.dim)


def roundtrip_isomorphism(pc1: ProjectiveCorep, pc2: ProjectiveCorep,
                          tol: float = DEFAULT_TOL) -> Report:
    """Compare the reflections of two Galois objects carrying coreps that induce
    the same coaction: ``G_1 G_2^* = v (x) 1`` and ``p -> v p v^*`` is an
    isomorphism of the reflected quantum groups."""
    from .fqg import isomorphism_residuals
    from .reflection import reflect
    k = pc1.H_dim
    n1, n2 = pc1.go.n, pc2.go.n
    X = pc1.G_op @ pc2.G_op.conj().T
    t = X.reshape(n1, k, n2, k)
    v = t[:, 0, :, 0]
    rep = Report("reflection roundtrip", tol=tol)
    rep.le("canonical_unitary_factorizes", residual(X, np.kron(v, np.eye(k))))
    rep.le("canonical_unitary", residual(v.conj().T @ v, np.eye(n2)))
    r1, r2 = reflect(pc1.go, tol), reflect(pc2.go, tol)
    P1 = r1.corners.Phat
    theta = np.array([P1.coords(v @ b @ v.conj().T) for b in r2.basis]).T
    rep.le("maps_P_hat", max(P1.contains(v @ b @ v.conj().T) for b in r2.basis))
    for key, val in isomorphism_residuals(r2.qg_out, r1.qg_out, theta).items():
        rep.le(f"iso_{key}", val)
    return rep


def outer_equivalence(tc1: TypeICoaction, tc2: TypeICoaction, v,
                      tol: float = DEFAULT_TOL) -> Report:
    """Check that ``v`` is an ``Upsilon_1``-cocycle conjugating ``Upsilon_1`` to ``Upsilon_2``."""
    if tc1.H_dim != tc2.H_dim or tc1.qg is not tc2.qg:
        raise ValueError("coactions must share the quantum group and H")
    d, k = tc1.qg.dim, tc1.H_dim
    v = np.asarray(v, dtype=complex)
    reg = regular(tc1.qg)
    rep = Report("outer equivalence", tol=tol)
    rep.le("unitary", residual(v.conj().T @ v, np.eye(d * k)))
    W12 = leg_embed(reg.What, [1, 2], [d, d, k])
    lhs = W12.conj().T @ leg_embed(v, [2, 3], [d, d, k]) @ W12
    rhs = leg_embed(v, [2, 3], [d, d, k]) @ tc1.slice_legs(v)
    rep.le("cocycle_identity", residual(lhs, rhs))
    rep.le("conjugation", max(residual(tc2.Upsilon[i, j], v @ tc1.Upsilon[i, j] @ v.conj().T)
                              for i in range(k) for j in range(k)))
    return rep
