"""JSON files for quantum groups, cocycles, coactions, recipes and corepresentations.

Complex numbers are stored as ``[re, im]`` pairs, so an array of shape ``s``
is a nested list of shape ``s + (2,)``.  Paths inside a file (``base``,
``qg``, ``cocycle``, ``coaction``, ``recipe``) are resolved relative to the
directory of the file that contains them.  Operators on ``L2(M)`` are written
in the orthonormal frame ``Lambda(x) = sqrt(Gram) x`` of the Haar GNS space.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cocycle import TwoCocycle
from .fqg import FiniteQuantumGroup
from .galois import (GaloisObject, coaction_from_operators, cocycle_crossed_product,
                     trivial_galois_object)
from .projrep import ProjectiveCorep

QG_FORMAT = "qgal.qg/1"
COCYCLE_FORMAT = "qgal.cocycle/1"
COACTION_FORMAT = "qgal.coaction/1"
RECIPE_FORMAT = "qgal.recipe/1"
COREP_FORMAT = "qgal.corep/1"


class ParseError(ValueError):
    """A file is missing, is not JSON, or does not follow its schema."""


# --------------------------------------------------------------------------
# complex arrays
# --------------------------------------------------------------------------


def encode_complex(a) -> list:
    a = np.asarray(a, dtype=complex)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def decode_complex(obj, shape=None, what: str = "array") -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{what}: not a numeric array") from exc
    if arr.ndim == 0 or arr.shape[-1] != 2:
        raise ParseError(f"{what}: entries must be [re, im] pairs")
    out = arr[..., 0] + 1j * arr[..., 1]
    if shape is not None and out.shape != tuple(shape):
        raise ParseError(f"{what}: shape {out.shape}, expected {tuple(shape)}")
    if not np.all(np.isfinite(out)):
        raise ParseError(f"{what}: non-finite entries")
    return out


def read_json(path) -> dict:
    p = Path(path)
    try:
        with p.open() as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {p}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{p}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{p}: top level must be an object")
    return data


def write_json(data: dict, path) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with p.open("w") as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")


def _field(data: dict, key: str, where):
    if key not in data:
        raise ParseError(f"{where}: missing field {key!r}")
    return data[key]


def _check_format(data: dict, fmt: str, where) -> None:
    got = data.get("format", fmt)
    if got != fmt:
        raise ParseError(f"{where}: format {got!r}, expected {fmt!r}")


def _resolve(ref, where) -> Path:
    if not isinstance(ref, str):
        raise ParseError(f"{where}: file references must be strings")
    return (Path(where).parent / ref) if not os.path.isabs(ref) else Path(ref)


# --------------------------------------------------------------------------
# quantum groups
# --------------------------------------------------------------------------


def qg_to_dict(qg: FiniteQuantumGroup) -> dict:
    return {
        "format": QG_FORMAT,
        "name": qg.name,
        "dim": qg.dim,
        "labels": list(qg.labels),
        "mult": encode_complex(qg.mult),
        "unit": encode_complex(qg.unit),
        "comult": encode_complex(qg.comult),
        "counit": encode_complex(qg.counit),
        "star": encode_complex(qg.star),
        "haar": encode_complex(qg.haar),
    }


def qg_from_dict(data: dict, where="<qg>") -> FiniteQuantumGroup:
    _check_format(data, QG_FORMAT, where)
    d = _field(data, "dim", where)
    if not isinstance(d, int) or d < 1:
        raise ParseError(f"{where}: dim must be a positive integer")
    arrays = {}
    for key, shape in (("mult", (d, d, d)), ("unit", (d,)), ("comult", (d, d, d)),
                       ("counit", (d,)), ("star", (d, d)), ("haar", (d,))):
        arrays[key] = decode_complex(_field(data, key, where), shape, f"{where}: {key}")
    labels = data.get("labels") or ()
    if labels and len(labels) != d:
        raise ParseError(f"{where}: labels must have length {d}")
    return FiniteQuantumGroup(str(data.get("name", Path(str(where)).stem)), labels=tuple(labels),
                              **arrays)


def load_qg(path) -> FiniteQuantumGroup:
    return qg_from_dict(read_json(path), path)


def save_qg(qg: FiniteQuantumGroup, path) -> None:
    write_json(qg_to_dict(qg), path)


# --------------------------------------------------------------------------
# cocycles, coactions
# --------------------------------------------------------------------------


def cocycle_to_dict(oc: TwoCocycle, base_ref: str) -> dict:
    return {"format": COCYCLE_FORMAT, "name": oc.name, "base": base_ref,
            "omega": encode_complex(oc.omega)}


def load_cocycle(path, qg: FiniteQuantumGroup | None = None) -> TwoCocycle:
    """Load a cocycle; its base quantum group is read from ``base`` unless given."""
    data = read_json(path)
    _check_format(data, COCYCLE_FORMAT, path)
    if qg is None:
        qg = load_qg(_resolve(_field(data, "base", path), path))
    d = qg.dim
    omega = decode_complex(_field(data, "omega", path), (d * d, d * d), f"{path}: omega")
    return TwoCocycle(qg, omega, str(data.get("name", Path(path).stem)))


def save_cocycle(oc: TwoCocycle, path, base_ref: str) -> None:
    write_json(cocycle_to_dict(oc, base_ref), path)


def coaction_to_dict(n_ops, alpha_ops, base_ref: str, name: str, phi_N=None) -> dict:
    n_ops = np.asarray(n_ops)
    out = {"format": COACTION_FORMAT, "name": name, "base": base_ref,
           "H_dim": int(n_ops.shape[1]), "N": encode_complex(n_ops),
           "alpha": encode_complex(alpha_ops)}
    if phi_N is not None:
        out["phi_N"] = encode_complex(phi_N)
    return out


@dataclass
class CoactionFile:
    qg: FiniteQuantumGroup
    N: np.ndarray
    alpha: np.ndarray
    name: str
    phi_N: np.ndarray | None = None


def load_coaction(path) -> CoactionFile:
    data = read_json(path)
    _check_format(data, COACTION_FORMAT, path)
    qg = load_qg(_resolve(_field(data, "base", path), path))
    h = _field(data, "H_dim", path)
    if not isinstance(h, int) or h < 1:
        raise ParseError(f"{path}: H_dim must be a positive integer")
    N = decode_complex(_field(data, "N", path), what=f"{path}: N")
    if N.ndim != 3 or N.shape[1:] != (h, h):
        raise ParseError(f"{path}: N must be a list of {h}x{h} matrices")
    hd = h * qg.dim
    alpha = decode_complex(_field(data, "alpha", path), (len(N), hd, hd), f"{path}: alpha")
    phi = data.get("phi_N")
    phi = None if phi is None else decode_complex(phi, what=f"{path}: phi_N")
    return CoactionFile(qg, N, alpha, str(data.get("name", Path(path).stem)), phi)


def galois_from_coaction_file(cf: CoactionFile) -> GaloisObject:
    c = coaction_from_operators(cf.qg, cf.N, cf.alpha, cf.name)
    if cf.phi_N is None:
        return GaloisObject(c, name=cf.name)
    # phi_N is given on the spanning set; move it to the canonical basis
    S = cf.N.reshape(len(cf.N), -1)
    beta = np.linalg.lstsq(S.T, c.N.elements.reshape(c.dim, -1).T, rcond=None)[0].T
    if len(cf.phi_N) != len(cf.N):
        raise ParseError("phi_N must have one value per element of N")
    return GaloisObject(c, phi_N=beta @ cf.phi_N, name=cf.name)


# --------------------------------------------------------------------------
# recipes and corepresentations
# --------------------------------------------------------------------------


@dataclass
class Recipe:
    """A buildable Galois object: the trivial object of ``qg``, a cocycle
    crossed product, or an explicit coaction."""

    name: str
    kind: str                       # "trivial" | "cocycle" | "coaction"
    qg: FiniteQuantumGroup
    cocycle: TwoCocycle | None = None
    coaction: CoactionFile | None = None

    def build(self) -> GaloisObject:
        if self.kind == "trivial":
            return trivial_galois_object(self.qg)
        if self.kind == "cocycle":
            return cocycle_crossed_product(self.qg, self.cocycle)
        return galois_from_coaction_file(self.coaction)


def load_recipe(path) -> Recipe:
    data = read_json(path)
    _check_format(data, RECIPE_FORMAT, path)
    name = str(data.get("name", Path(path).stem))
    keys = [k for k in ("coaction", "cocycle", "qg") if data.get(k) is not None]
    if "coaction" in keys:
        cf = load_coaction(_resolve(data["coaction"], path))
        return Recipe(name, "coaction", cf.qg, coaction=cf)
    if "cocycle" in keys:
        cpath = _resolve(data["cocycle"], path)
        qg = load_qg(_resolve(data["qg"], path)) if "qg" in keys else None
        oc = load_cocycle(cpath, qg)
        return Recipe(name, "cocycle", oc.base, cocycle=oc)
    if "qg" in keys:
        return Recipe(name, "trivial", load_qg(_resolve(data["qg"], path)))
    raise ParseError(f"{path}: a recipe needs one of 'qg', 'cocycle' or 'coaction'")


def recipe_to_dict(name: str, qg=None, cocycle=None, coaction=None) -> dict:
    out = {"format": RECIPE_FORMAT, "name": name}
    for key, val in (("qg", qg), ("cocycle", cocycle), ("coaction", coaction)):
        if val is not None:
            out[key] = val
    return out


def corep_to_dict(pc: ProjectiveCorep, recipe_ref: str) -> dict:
    return {"format": COREP_FORMAT, "recipe": recipe_ref, "H_dim": pc.H_dim,
            "G_op": encode_complex(pc.G_op)}


def load_corep(path, go: GaloisObject | None = None) -> ProjectiveCorep:
    data = read_json(path)
    _check_format(data, COREP_FORMAT, path)
    if go is None:
        go = load_recipe(_resolve(_field(data, "recipe", path), path)).build()
    k = _field(data, "H_dim", path)
    if not isinstance(k, int) or k < 1:
        raise ParseError(f"{path}: H_dim must be a positive integer")
    G = decode_complex(_field(data, "G_op", path), (go.n * k, go.d * k), f"{path}: G_op")
    return ProjectiveCorep(go, k, G)
