"""Shared fixtures: the example quantum groups and Galois objects are expensive
to analyse, so they are built once per session."""

from pathlib import Path

import numpy as np
import pytest

from qgal.cocycle import dihedral_twist, trivial_cocycle, weyl_cocycle
from qgal.examples import (cyclic, dihedral, direct_product, function_algebra, group_algebra,
                           symmetric)
from qgal.galois import (GaloisObject, cocycle_crossed_product, trivial_galois_object,
                         weyl_coaction)

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "corpus"


def corpus_quantum_groups():
    z2, z3 = cyclic(2), cyclic(3)
    return {
        "C(Z2)": function_algebra(z2),
        "C(Z3)": function_algebra(z3),
        "C(Z2xZ2)": function_algebra(direct_product(z2, z2)),
        "C[S3]": group_algebra(symmetric(3)),
        "C[D4]": group_algebra(dihedral(4)),
    }


@pytest.fixture(scope="session")
def qgs():
    return corpus_quantum_groups()


@pytest.fixture(scope="session")
def cocycles():
    bichar2 = weyl_cocycle(2)
    return {
        "trivial_Z2xZ2": trivial_cocycle(bichar2.base),
        "bichar_Z2xZ2": bichar2,
        "bichar_Z3xZ3": weyl_cocycle(3),
        "D4_klein": dihedral_twist(),
    }


@pytest.fixture(scope="session")
def cocycle_objects(cocycles):
    return {k: cocycle_crossed_product(oc.base, oc) for k, oc in cocycles.items()}


@pytest.fixture(scope="session")
def trivial_objects(qgs):
    return {k: trivial_galois_object(q) for k, q in qgs.items()}


@pytest.fixture(scope="session")
def weyl_object():
    return GaloisObject(weyl_coaction(2))


@pytest.fixture(scope="session")
def galois_objects(trivial_objects, cocycle_objects, weyl_object):
    """Every Galois object of the example corpus."""
    out = {f"trivial {k}": v for k, v in trivial_objects.items()}
    out.update({f"cocycle {k}": v for k, v in cocycle_objects.items()})
    out["weyl action M2"] = weyl_object
    return out


def random_unitary(n, rng):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))[None, :]
