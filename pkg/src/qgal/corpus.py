"""The shipped example files (``corpus/``), generated deterministically.

Run ``python3 -m qgal.corpus DIR`` to (re)write them.
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

from .cocycle import dihedral_twist, trivial_cocycle, weyl_cocycle
from .examples import (cyclic, dihedral, direct_product, function_algebra, group_algebra,
                       symmetric)
from .galois import classical_coaction, weyl_coaction
from .io import (coaction_to_dict, cocycle_to_dict, qg_to_dict, recipe_to_dict, write_json)

VALID_QG = ("c_z2", "c_z3", "c_z2z2", "c_grp_s3", "c_grp_d4")


def quantum_groups() -> dict:
    z2, z3 = cyclic(2), cyclic(3)
    out = {
        "c_z2": function_algebra(z2),
        "c_z3": function_algebra(z3),
        "c_z2z2": function_algebra(direct_product(z2, z2)),
        "c_d4": function_algebra(dihedral(4)),
        "c_grp_s3": group_algebra(symmetric(3)),
        "c_grp_d4": group_algebra(dihedral(4)),
        "c_grp_z2z2": weyl_cocycle(2).base,
        "c_grp_z3z3": weyl_cocycle(3).base,
    }
    c = out["c_z2"]
    out["broken_haar"] = c.with_haar(np.array([0.7, 0.3])).renamed("C(Z2), non-invariant state")
    return out


def files() -> dict:
    """``{relative path: JSON object}`` for every corpus file."""
    qgs = quantum_groups()
    out = {f"{k}.json": qg_to_dict(v) for k, v in qgs.items()}
    bichar = weyl_cocycle(2)
    out["bichar.json"] = cocycle_to_dict(bichar, "c_grp_z2z2.json")
    out["bichar_z3.json"] = cocycle_to_dict(weyl_cocycle(3), "c_grp_z3z3.json")
    d4 = dihedral_twist()
    out["d4_klein.json"] = cocycle_to_dict(d4, "c_d4.json")
    out["trivial_cocycle_z2z2.json"] = cocycle_to_dict(trivial_cocycle(bichar.base),
                                                       "c_grp_z2z2.json")
    # coactions
    w = weyl_coaction(2)
    out["weyl_action_m2.coaction.json"] = coaction_to_dict(
        w.N.elements, w.alpha_ops, "c_z2z2.json", w.name)
    triv = classical_coaction(cyclic(2), 2, lambda y, g: y, "trivial_Z2_on_2pts")
    S = triv.N.elements
    # the uniform state on C^2, evaluated on the stored basis
    phi = np.array([0.5 * np.trace(s).real for s in S])
    out["nongalois_control.coaction.json"] = coaction_to_dict(
        S, triv.alpha_ops, "c_z2.json", triv.name, phi_N=phi)
    g = symmetric(3)
    perms = [tuple(int(ch) for ch in lab) for lab in g.labels]
    s3 = classical_coaction(g, 3, lambda y, gi: perms[gi].index(y), "S3_on_3pts")
    out["c_s3.json"] = qg_to_dict(s3.qg)
    out["nongalois_s3.coaction.json"] = coaction_to_dict(
        s3.N.elements, s3.alpha_ops, "c_s3.json", s3.name)
    # recipes
    out["trivial_z2.recipe.json"] = recipe_to_dict("trivial_C(Z2)", qg="c_z2.json")
    out["trivial_z3.recipe.json"] = recipe_to_dict("trivial_C(Z3)", qg="c_z3.json")
    out["trivial_s3.recipe.json"] = recipe_to_dict("trivial_C[S3]", qg="c_grp_s3.json")
    out["weyl_n2.recipe.json"] = recipe_to_dict("weyl_n2", cocycle="bichar.json")
    out["weyl_n3.recipe.json"] = recipe_to_dict("weyl_n3", cocycle="bichar_z3.json")
    out["d4_twist.recipe.json"] = recipe_to_dict("d4_twist", cocycle="d4_klein.json")
    out["weyl_action_m2.recipe.json"] = recipe_to_dict(
        "weyl_action_m2", coaction="weyl_action_m2.coaction.json")
    out["nongalois_control.recipe.json"] = recipe_to_dict(
        "nongalois_control", coaction="nongalois_control.coaction.json")
    out["nongalois_s3.recipe.json"] = recipe_to_dict(
        "nongalois_s3", coaction="nongalois_s3.coaction.json")
    return out


def write_corpus(directory) -> list[Path]:
    d = Path(directory)
    written = []
    for name, data in sorted(files().items()):
        write_json(data, d / name)
        written.append(d / name)
    return written


if __name__ == "__main__":
    for p in write_corpus(sys.argv[1] if len(sys.argv) > 1 else "corpus"):
        print(p)
