"""Dense complex tensor algebra used throughout the package.

Operators are plain ``numpy`` arrays.  Tensor products are row-major with the
left factor outermost (``np.kron`` convention), and leg numbers are 1-based,
so ``leg_embed(u, [1, 3], dims)`` is the operator usually written ``u_13``.

Antilinear operators (modular conjugations and the like) are carried by the
small :class:`AntiLinear` wrapper, which stores a matrix ``K`` acting as
``xi -> K @ conj(xi)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "AlgebraBasis",
    "AntiLinear",
    "adjoint_action",
    "as_cmatrix",
    "block_dims",
    "canonical_basis",
    "center",
    "commutant",
    "conj_entrywise",
    "coords_in_basis",
    "flip",
    "generated_algebra",
    "kron",
    "kron_antilinear",
    "leg_embed",
    "matrix_unit",
    "null_space",
    "SPAN_RTOL",
    "rank_tol",
    "residual",
    "slice_left",
    "slice_right",
    "slices_left",
    "slices_right",
    "span_contains",
]


def as_cmatrix(a) -> np.ndarray:
    """Return ``a`` as a finite complex 2-d array (raises on NaN/Inf)."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def kron(*factors) -> np.ndarray:
    """Kronecker product of any number of factors, left factor outermost."""
    if not factors:
        return np.ones((1, 1), dtype=complex)
    return reduce(np.kron, [np.asarray(f, dtype=complex) for f in factors])


def flip(d1: int, d2: int) -> np.ndarray:
    """The flip ``C^d1 (x) C^d2 -> C^d2 (x) C^d1``, ``a (x) b -> b (x) a``."""
    s = np.zeros((d2 * d1, d1 * d2), dtype=complex)
    for i in range(d1):
        for j in range(d2):
            s[j * d1 + i, i * d2 + j] = 1.0
    return s


def matrix_unit(n: int, i: int, j: int, m: int | None = None) -> np.ndarray:
    """The matrix unit ``e_ij`` of shape ``(n, m)`` (square if ``m`` is None)."""
    e = np.zeros((n, n if m is None else m), dtype=complex)
    e[i, j] = 1.0
    return e


def leg_embed(u, legs: Sequence[int], dims: Sequence[int],
              out_dims: Sequence[int] | None = None) -> np.ndarray:
    """Place ``u`` on the given (1-based) legs of a tensor product.

    ``u`` acts on the product of the factors ``dims[l-1]`` for ``l`` in
    ``legs``, *in the order listed*.  ``out_dims`` (default ``dims``) gives the
    factor dimensions after the map, which lets rectangular maps such as
    ``L2(N) (x) L2(N) -> L2(M) (x) L2(N)`` be embedded; only the legs in
    ``legs`` may change dimension.
    """
    u = np.asarray(u, dtype=complex)
    dims = [int(d) for d in dims]
    out_dims = dims if out_dims is None else [int(d) for d in out_dims]
    n = len(dims)
    idx = [int(l) - 1 for l in legs]
    if len(set(idx)) != len(idx) or any(i < 0 or i >= n for i in idx):
        raise ValueError(f"invalid legs {legs} for {n} factors")
    rest = [i for i in range(n) if i not in idx]
    if any(dims[i] != out_dims[i] for i in rest):
        raise ValueError("untouched legs must keep their dimension")
    din = int(np.prod([dims[i] for i in idx]))
    dout = int(np.prod([out_dims[i] for i in idx]))
    if u.shape != (dout, din):
        raise ValueError(f"operator shape {u.shape} does not match legs "
                         f"(expected {(dout, din)})")
    drest = int(np.prod([dims[i] for i in rest])) if rest else 1
    order = idx + rest
    big = np.kron(u, np.eye(drest))
    shape_out = [out_dims[i] for i in order]
    shape_in = [dims[i] for i in order]
    big = big.reshape(shape_out + shape_in)
    inv = list(np.argsort(order))
    big = big.transpose(inv + [n + k for k in inv])
    return big.reshape(int(np.prod(out_dims)), int(np.prod(dims)))


def _split(x, d1: int, d2: int, e1: int | None = None, e2: int | None = None):
    e1 = d1 if e1 is None else e1
    e2 = d2 if e2 is None else e2
    x = np.asarray(x, dtype=complex)
    if x.shape != (e1 * e2, d1 * d2):
        raise ValueError(f"shape {x.shape} incompatible with factors "
                         f"({e1}x{e2}, {d1}x{d2})")
    return x.reshape(e1, e2, d1, d2)


def slice_left(rho, x, d1: int, d2: int) -> np.ndarray:
    """``(omega (x) id)(x)`` for ``omega = Tr(rho .)`` on the first factor.

    ``rho`` may be rectangular (shape ``(d1, e1)``) when ``x`` maps a ``d1``-
    dimensional first leg to an ``e1``-dimensional one; the second leg must
    be square of size ``d2``.
    """
    rho = np.asarray(rho, dtype=complex)
    e1 = rho.shape[1]
    t = _split(x, d1, d2, e1=e1)
    return np.einsum("ji,iajb->ab", rho, t)


def slice_right(rho, x, d1: int, d2: int) -> np.ndarray:
    """``(id (x) omega)(x)`` for ``omega = Tr(rho .)`` on the second factor."""
    rho = np.asarray(rho, dtype=complex)
    e2 = rho.shape[1]
    t = _split(x, d1, d2, e2=e2)
    return np.einsum("ba,iajb->ij", rho, t)


def slices_left(x, d1: int, d2: int, e1: int | None = None) -> np.ndarray:
    """All matrix-unit slices ``x[(i, .), (j, .)]``, shape ``(e1*d1, d2, d2)``."""
    t = _split(x, d1, d2, e1=e1)
    e1 = t.shape[0]
    return t.transpose(0, 2, 1, 3).reshape(e1 * d1, d2, d2)


def slices_right(x, d1: int, d2: int, e2: int | None = None) -> np.ndarray:
    """All matrix-unit slices ``x[(., a), (., b)]``, shape ``(e2*d2, d1, d1)``."""
    t = _split(x, d1, d2, e2=e2)
    e2 = t.shape[1]
    return t.transpose(1, 3, 0, 2).reshape(e2 * d2, t.shape[0], d1)


def residual(a, b) -> float:
    """Relative Frobenius distance ``||a - b||_F / max(1, ||a||_F)``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b) / max(1.0, np.linalg.norm(a)))


#: Relative singular-value cutoff used for spans of *computed* operators
#: (slices, products), whose round-off is far above ``dim * eps``.
SPAN_RTOL = 1e-8


def rank_tol(s: np.ndarray, shape: tuple[int, ...], rtol: float | None = None,
             scale: float = 0.0) -> float:
    """Numerical-rank threshold.

    The default is ``max(shape) * eps * s_max``; ``rtol`` replaces the
    ``max(shape) * eps`` factor when the data carry more round-off than that.
    ``scale`` is the natural size of the data the matrix was built from: a
    matrix that is pure round-off relative to it has rank zero.
    """
    if s.size == 0:
        return 0.0
    factor = max(shape) * np.finfo(float).eps if rtol is None else rtol
    return factor * max(float(s[0]), scale)


def null_space(a, rtol: float | None = None, scale: float = 0.0) -> np.ndarray:
    """Orthonormal columns spanning the kernel of ``a``; see :func:`rank_tol`."""
    a = np.asarray(a, dtype=complex)
    if a.shape[0] == 0:
        return np.eye(a.shape[1], dtype=complex)
    _, s, vh = np.linalg.svd(a, full_matrices=a.shape[0] < a.shape[1])
    if s.size and s[0] == 0:
        return np.eye(a.shape[1], dtype=complex)
    r = int(np.sum(s > rank_tol(s, a.shape, rtol, scale)))
    return vh[r:].conj().T


def _row_space(rows: np.ndarray, rtol: float | None = None) -> np.ndarray:
    if rows.shape[0] == 0:
        return np.zeros((0, rows.shape[1]), dtype=complex)
    _, s, vh = np.linalg.svd(rows, full_matrices=False)
    if s[0] == 0:
        return np.zeros((0, rows.shape[1]), dtype=complex)
    r = int(np.sum(s > rank_tol(s, rows.shape, rtol)))
    return vh[:r]


def _canonicalize(q: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of the span of the rows of ``q``.

    The orthogonal projector onto the span does not depend on the spanning
    set; pivoted Gram-Schmidt on its columns (largest norm first, ties to the
    smallest index) therefore returns the same basis for any input.  The
    projector is never formed: with ``q`` orthonormal its columns are
    ``q.T @ c`` for coefficient vectors ``c`` of length ``len(q)``.
    """
    k = q.shape[0]
    if k == 0:
        return q
    # column j of the (deflated) projector is q.T @ r[:, j]
    r = q.conj().copy()
    out = []
    for _ in range(k):
        norms = np.sqrt(np.einsum("ij,ij->j", r.real, r.real)
                        + np.einsum("ij,ij->j", r.imag, r.imag))
        top = norms.max()
        j = int(np.flatnonzero(norms >= top * (1 - 1e-8))[0])
        a = r[:, j] / norms[j]
        out.append(q.T @ a)
        r -= np.outer(a, a.conj() @ r)
    return np.array(out)


def canonical_basis(mats, rtol: float | None = None) -> np.ndarray:
    """Hilbert-Schmidt orthonormal, input-order independent basis of a span.

    ``mats`` is an iterable of equally shaped matrices; the result has shape
    ``(k, *shape)`` with ``k`` the dimension of their span.
    """
    mats = np.asarray(list(mats) if not isinstance(mats, np.ndarray) else mats,
                      dtype=complex)
    if mats.ndim == 2:
        mats = mats[None]
    shape = mats.shape[1:]
    q = _row_space(mats.reshape(mats.shape[0], -1), rtol)
    return _canonicalize(q).reshape((q.shape[0],) + shape)


def coords_in_basis(basis, x) -> np.ndarray:
    """Coordinates of ``x`` (one matrix or a stack) in an orthonormal basis."""
    b = np.asarray(basis).reshape(len(basis), -1)
    x = np.asarray(x, dtype=complex)
    flat = x.reshape(-1, b.shape[1]) if x.ndim > 2 else x.reshape(1, -1)
    c = flat @ b.conj().T
    return c if x.ndim > 2 else c[0]


def span_contains(basis, x) -> float:
    """Relative norm of the component of ``x`` orthogonal to an ONB span."""
    b = np.asarray(basis).reshape(len(basis), -1)
    v = np.asarray(x, dtype=complex).reshape(-1)
    proj = (v @ b.conj().T) @ b if len(b) else np.zeros_like(v)
    return float(np.linalg.norm(v - proj) / max(1.0, np.linalg.norm(v)))


@dataclass(frozen=True)
class AlgebraBasis:
    """A Hilbert-Schmidt orthonormal basis of a space of square matrices."""

    elements: np.ndarray
    is_algebra: bool = False

    def __post_init__(self):
        e = np.asarray(self.elements, dtype=complex)
        if e.ndim != 3 or e.shape[1] != e.shape[2]:
            raise ValueError("elements must be a stack of square matrices")
        object.__setattr__(self, "elements", e)

    @classmethod
    def span(cls, mats, is_algebra: bool = False, rtol: float | None = None):
        return cls(canonical_basis(mats, rtol), is_algebra)

    @property
    def ambient_dim(self) -> int:
        return self.elements.shape[1]

    @property
    def dim(self) -> int:
        return self.elements.shape[0]

    def __len__(self) -> int:
        return self.dim

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def coords(self, x) -> np.ndarray:
        return coords_in_basis(self.elements, x)

    def combine(self, c) -> np.ndarray:
        return np.tensordot(np.asarray(c, dtype=complex), self.elements, axes=1)

    def contains(self, x) -> float:
        return span_contains(self.elements, x)

    def closure_residual(self) -> float:
        """Largest residual of products and adjoints leaving the span."""
        worst = 0.0
        for a in self.elements:
            worst = max(worst, self.contains(a.conj().T))
            for b in self.elements:
                worst = max(worst, self.contains(a @ b))
        return worst


def commutant(gens, rtol: float | None = None) -> AlgebraBasis:
    """Basis of ``{x : x g = g x for every g}``, Hilbert-Schmidt orthonormal."""
    gens = [np.asarray(g, dtype=complex) for g in gens]
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].shape[0]
    eye = np.eye(n)
    # row-major vec: vec(g x) = (g (x) I) vec x, vec(x g) = (I (x) g^T) vec x
    stacked = np.vstack([np.kron(g, eye) - np.kron(eye, g.T) for g in gens])
    ns = null_space(stacked, rtol, max(np.linalg.norm(g, 2) for g in gens))
    return AlgebraBasis(_canonicalize(ns.T).reshape(-1, n, n), is_algebra=True)


def generated_algebra(gens, seed=None, rng=None, max_rounds: int | None = None,
                      rtol: float | None = None, canonical: bool = True) -> AlgebraBasis:
    """Basis of the unital *-algebra generated by ``gens``.

    ``seed`` optionally provides a spanning set believed to be (close to) the
    answer; the span is then closed under left multiplication by the
    generators and their adjoints until its dimension stabilises.  Closure is
    tested on a few random elements of the current span, which is equivalent
    to testing every basis element with probability one.  With
    ``canonical=False`` the orthonormal basis is returned as found (cheaper
    for large algebras whose basis is not compared across runs).
    """
    gens = [np.asarray(g, dtype=complex) for g in gens]
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].shape[0]
    rng = np.random.default_rng(0) if rng is None else rng
    letters = gens + [g.conj().T for g in gens]
    start = [np.eye(n, dtype=complex)] + letters
    if seed is not None:
        start += [np.asarray(s, dtype=complex) for s in seed]
    q = _row_space(np.array(start).reshape(len(start), -1), rtol)
    cap = n * n if max_rounds is None else max_rounds
    for _ in range(cap):
        mats = q.reshape(-1, n, n)
        probes = np.tensordot(
            rng.standard_normal((3, len(mats))) + 1j * rng.standard_normal((3, len(mats))),
            mats, axes=1)
        cand = np.array([g @ p for g in letters for p in probes]).reshape(-1, n * n)
        leak = cand - (cand @ q.conj().T) @ q
        scale = max(1.0, float(np.abs(cand).max()))
        if np.linalg.norm(leak) <= 1e-10 * scale * np.sqrt(len(cand)):
            break
        full = np.array([g @ m for g in letters for m in mats]).reshape(-1, n * n)
        q = _row_space(np.vstack([q, full]), rtol)
    q = _canonicalize(q) if canonical else q
    return AlgebraBasis(q.reshape(-1, n, n), is_algebra=True)


def center(alg: AlgebraBasis, rtol: float = 1e-9) -> AlgebraBasis:
    """The centre ``A \u2229 A'`` of a realized algebra."""
    B = alg.elements
    k = len(B)
    # sum_a z_a [b_a, b_c] = 0 for every c
    comm = np.einsum("aij,cjk->caik", B, B) - np.einsum("cij,ajk->caik", B, B)
    scale = max(np.linalg.norm(b, 2) for b in B) ** 2
    ns = null_space(comm.transpose(0, 2, 3, 1).reshape(-1, k), rtol, scale)
    z = np.tensordot(ns.T, B, axes=1)
    return AlgebraBasis(_canonicalize(z.reshape(len(z), -1)).reshape(-1, *B.shape[1:]),
                        is_algebra=True)


def block_dims(alg: AlgebraBasis) -> list[int]:
    """Matrix sizes ``n_i`` of the Wedderburn decomposition ``A = sum M_{n_i}``.

    Uses the minimal central projections (spectral projections of a generic
    self-adjoint central element) and ``dim(p A) = n_i^2``.
    """
    Z = center(alg).elements
    rng = np.random.default_rng(1)
    h = np.tensordot(rng.standard_normal(len(Z)), Z, axes=1)
    h = (h + h.conj().T) / 2
    w, v = np.linalg.eigh(h)
    sizes = []
    start = 0
    B = alg.elements
    while start < len(w):
        stop = start + 1
        while stop < len(w) and abs(w[stop] - w[start]) < 1e-8:
            stop += 1
        p = v[:, start:stop] @ v[:, start:stop].conj().T
        if np.linalg.norm(p) > 0:
            pa = np.einsum("ij,ajk->aik", p, B).reshape(len(B), -1)
            s = np.linalg.svd(pa, compute_uv=False)
            r = int(np.sum(s > 1e-8 * s[0])) if s[0] > 0 else 0
            if r:
                sizes.append(int(round(np.sqrt(r))))
        start = stop
    return sorted(sizes)


def conj_entrywise(n: int) -> "AntiLinear":
    """Entrywise complex conjugation on ``C^n``."""
    return AntiLinear(np.eye(n, dtype=complex))


class AntiLinear:
    """Antilinear map ``xi -> K @ conj(xi)``.

    Composition with ordinary matrices via ``@`` follows the rules
    ``A @ X = AntiLinear(K conj(X))``, ``X @ A = AntiLinear(X K)`` and
    ``A1 @ A2 = K1 conj(K2)`` (a plain matrix).
    """

    __array_ufunc__ = None

    def __init__(self, K):
        self.K = np.asarray(K, dtype=complex)

    @property
    def shape(self):
        return self.K.shape

    def __call__(self, xi):
        return self.K @ np.conj(np.asarray(xi, dtype=complex))

    def __matmul__(self, other):
        if isinstance(other, AntiLinear):
            return self.K @ other.K.conj()
        return AntiLinear(self.K @ np.conj(np.asarray(other, dtype=complex)))

    def __rmatmul__(self, other):
        return AntiLinear(np.asarray(other, dtype=complex) @ self.K)

    @property
    def H(self) -> "AntiLinear":
        """Adjoint: ``<A xi, eta> = conj(<xi, A* eta>)``."""
        return AntiLinear(self.K.T)

    def kron(self, other: "AntiLinear") -> "AntiLinear":
        return AntiLinear(np.kron(self.K, other.K))

    def __repr__(self):
        return f"AntiLinear(shape={self.K.shape})"


def adjoint_action(j: AntiLinear, x) -> np.ndarray:
    """``j @ x @ j^{-1}`` for antiunitary ``j`` (returned as a matrix)."""
    return (j @ np.asarray(x, dtype=complex)) @ j.H


def kron_antilinear(*parts: Iterable[AntiLinear]) -> AntiLinear:
    """Tensor product of antilinear maps (all factors antilinear)."""
    return reduce(lambda a, b: a.kron(b), parts)
