"""The full verification suite of a Galois object, as one aggregated report."""

from __future__ import annotations

import time

import numpy as np

from .galois import (GaloisObject, commutation_suite, crossed_product, galois_report,
                     modular_suite, validate_coaction)
from .projrep import (conjugate_corep, extract_galois, induced_coaction, outer_equivalence,
                      regular_corep, roundtrip_isomorphism, check_corep, validate_type_i)
from .reflection import (corner_coproducts, dual_isomorphism, intertwiner_corner, reflect,
                         twisted_multiplicative_unitary, unitary_antipode_Q)
from .report import DEFAULT_TOL, Report

GALOIS_CRITERION = ("galois.Gtilde_isometry", "galois.Gtilde_coisometry",
                    "crossed_product.dim_crossed_product", "crossed_product.rho_image_dim")


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))[None, :]


class _Steps:
    def __init__(self, rep: Report, timing: bool):
        self.rep, self.timing = rep, timing

    def run(self, prefix, fn):
        t = time.perf_counter()
        out = fn()
        sub = out[1] if isinstance(out, tuple) else out
        if isinstance(sub, Report):
            self.rep.extend(sub, prefix=prefix)
        if self.timing:
            self.rep.info(f"time.{prefix}", round(time.perf_counter() - t, 4))
        return out


def suite_report(go: GaloisObject, tol: float = DEFAULT_TOL, seed: int = 0,
                 realized_on_dual: bool = False, timing: bool = False) -> Report:
    """Run every check on ``go``.

    The Galois criterion (unitarity of the Galois map and the crossed-product
    dimension) is evaluated first; when it fails, the steps that presuppose a
    Galois object are skipped.  ``realized_on_dual`` adds the comparison of
    the reflected quantum group with the (twisted) dual.
    """
    rep = Report(f"suite {go.name}", tol=tol)
    try:
        _run_suite(go, rep, tol, seed, realized_on_dual, timing)
    except (ValueError, RuntimeError) as exc:
        rep.le("construction_error", float("inf"), note=f"{type(exc).__name__}: {exc}")
    return rep


def _run_suite(go, rep, tol, seed, realized_on_dual, timing) -> None:
    steps = _Steps(rep, timing)
    steps.run("coaction", lambda: validate_coaction(go.coaction, tol))
    g = steps.run("galois", lambda: galois_report(go, tol))
    _, cp = steps.run("crossed_product", lambda: crossed_product(go, tol))
    unitary = g.passed
    dim_ok = all(c.passed for c in cp.checks if c.name in ("dim_crossed_product",
                                                          "rho_image_dim"))
    rep.eq("galois_criterion_agreement", int(unitary == dim_ok), 1,
           note="Galois map unitary iff crossed product has full dimension")
    if not (unitary and dim_ok):
        rep.info("skipped", "steps after the Galois criterion",
                 note="the object is not Galois")
        return
    steps.run("commutation", lambda: commutation_suite(go, tol))
    steps.run("modular", lambda: modular_suite(go, tol))
    lc = steps.run("corners", lambda: (lambda x: (x, x.report))(intertwiner_corner(go, tol)))[0]
    steps.run("corner_coproducts", lambda: corner_coproducts(lc, tol))
    steps.run("antipode_Q", lambda: unitary_antipode_Q(lc, tol))
    rq = steps.run("reflect", lambda: (lambda r: (r, r.witness))(reflect(go, tol, lc)))[0]
    if realized_on_dual:
        iso = Report("dual isomorphism", tol=tol)
        for k, v in dual_isomorphism(go, rq).items():
            iso.le(k, v)
        steps.run("reflect_vs_dual", lambda: iso)
    if go.cocycle is not None:
        steps.run("W_omega", lambda: twisted_multiplicative_unitary(go.qg, go.cocycle, go, rq, tol))
    pc = regular_corep(go)
    steps.run("corep", lambda: check_corep(pc, tol))
    tc = induced_coaction(pc)
    steps.run("type_i", lambda: validate_type_i(tc, tol))
    ex = steps.run("extract", lambda: (lambda e: (e, e.report))(extract_galois(tc, tol)))[0]
    steps.run("roundtrip", lambda: roundtrip_isomorphism(pc, ex.corep, tol))
    rng = np.random.default_rng(seed)
    pc2 = conjugate_corep(pc, random_unitary(pc.H_dim, rng))
    tc2 = induced_coaction(pc2)
    v = pc2.G_op.conj().T @ pc.G_op
    steps.run("outer_equivalence", lambda: outer_equivalence(tc, tc2, v, tol))
    bad = outer_equivalence(tc, tc2, random_unitary(v.shape[0], rng), tol)
    rep.info("negative_control_seed", seed)
    rep.ge("negative_control.random_v_conjugation", bad.value("conjugation"), 1e-3)
