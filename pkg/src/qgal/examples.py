"""Finite groups and the quantum groups built from them.

``C(G)`` is the commutative algebra of functions on ``G`` (basis of delta
functions) and ``C[G]`` the group algebra (basis of group elements).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product

import numpy as np

from .fqg import FiniteQuantumGroup


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group given by its elements and multiplication table."""

    name: str
    labels: tuple
    table: np.ndarray          # table[i, j] = index of g_i g_j
    identity: int

    @property
    def order(self) -> int:
        return len(self.labels)

    def mul(self, i: int, j: int) -> int:
        return int(self.table[i, j])

    def inv(self, i: int) -> int:
        return int(np.flatnonzero(self.table[i] == self.identity)[0])

    def index(self, label) -> int:
        return self.labels.index(label)


def _from_elements(name, elems, op, identity, fmt=str) -> FiniteGroup:
    elems = list(elems)
    pos = {e: i for i, e in enumerate(elems)}
    table = np.array([[pos[op(a, b)] for b in elems] for a in elems], dtype=int)
    return FiniteGroup(name, tuple(fmt(e) for e in elems), table, pos[identity])


def cyclic(n: int) -> FiniteGroup:
    return _from_elements(f"Z{n}", range(n), lambda a, b: (a + b) % n, 0)


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    elems = list(product(range(g.order), range(h.order)))

    def op(a, b):
        return (g.mul(a[0], b[0]), h.mul(a[1], b[1]))

    grp = _from_elements(f"{g.name}x{h.name}", elems, op, (g.identity, h.identity))
    labels = tuple(f"({g.labels[a]},{h.labels[b]})" for a, b in elems)
    return FiniteGroup(grp.name, labels, grp.table, grp.identity)


def symmetric(n: int) -> FiniteGroup:
    """``S_n`` as permutation tuples; ``(p q)(i) = p(q(i))``."""
    elems = sorted(permutations(range(n)))

    def op(p, q):
        return tuple(p[q[i]] for i in range(n))

    return _from_elements(f"S{n}", elems, op, tuple(range(n)),
                          fmt=lambda p: "".join(map(str, p)))


def dihedral(n: int) -> FiniteGroup:
    """``D_n`` of order ``2n``; element ``(a, b)`` is ``r^a s^b`` with
    ``s r = r^{-1} s``."""
    elems = [(a, b) for b in range(2) for a in range(n)]

    def op(x, y):
        a1, b1 = x
        a2, b2 = y
        return ((a1 + (-a2 if b1 else a2)) % n, (b1 + b2) % 2)

    return _from_elements(f"D{n}", elems, op, (0, 0),
                          fmt=lambda e: f"r{e[0]}" + ("s" if e[1] else ""))


def function_algebra(g: FiniteGroup) -> FiniteQuantumGroup:
    """``C(G)``: pointwise product, ``Delta(f)(s, t) = f(st)``, uniform Haar."""
    n = g.order
    mult = np.zeros((n, n, n))
    comult = np.zeros((n, n, n))
    for i in range(n):
        mult[i, i, i] = 1.0
        for j in range(n):
            comult[g.mul(i, j), i, j] = 1.0
    counit = np.zeros(n)
    counit[g.identity] = 1.0
    return FiniteQuantumGroup(f"C({g.name})", mult, np.ones(n), comult, counit,
                              np.eye(n), np.full(n, 1.0 / n),
                              tuple(f"d[{lab}]" for lab in g.labels))


def group_algebra(g: FiniteGroup) -> FiniteQuantumGroup:
    """``C[G]``: convolution product, ``Delta(g) = g (x) g``, ``g^* = g^{-1}``."""
    n = g.order
    mult = np.zeros((n, n, n))
    comult = np.zeros((n, n, n))
    star = np.zeros((n, n))
    for i in range(n):
        comult[i, i, i] = 1.0
        star[g.inv(i), i] = 1.0
        for j in range(n):
            mult[i, j, g.mul(i, j)] = 1.0
    unit = np.zeros(n)
    unit[g.identity] = 1.0
    haar = unit.copy()
    return FiniteQuantumGroup(f"C[{g.name}]", mult, unit, comult, np.ones(n), star, haar,
                              tuple(g.labels))


def trivial_quantum_group() -> FiniteQuantumGroup:
    """The one-dimensional quantum group ``C``."""
    one = np.ones((1, 1, 1))
    return FiniteQuantumGroup("C", one, [1.0], one, [1.0], [[1.0]], [1.0], ("1",))
