"""The verification suite behind ``sacat verify``.

Each item returns a JSON-ready dict with a boolean ``passed``.  Items are
independent, so they may run in worker processes; results are merged in the
fixed item order, which keeps the output byte-identical across runs.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from typing import Callable

import numpy as np

from .catalog import catalog
from .cohomology import CoefficientGroup, h2_cohomology
from .extensions import (
    are_equivalent,
    baer_sum,
    classify_central,
    inverse_extension,
    is_central_huq,
    is_central_smith,
    make_extension,
    split_extension,
    subobjects_of_kernel_are_normal,
)
from .groups import FiniteGroup, Subgroup, builtin, center, normal_subgroups, quotient
from .homology import h2, homology_transgression
from .theorems import (
    hochschild_serre,
    is_perfect,
    perfect_case_isomorphism,
    projectivity_witness,
    stallings_stammbach,
    universal_central_extension,
    universal_coefficients,
)

COEFFS = ("C2", "C3", "C4", "C2xC2")


def named_extensions():
    """C4->C2, Q8->C2xC2, D4->C2xC2, S3->C2, then X -> X/Z(X) over the catalog."""
    out = []
    for spec, gens in [("C4", [2]), ("Q8", None), ("D4", None), ("S3", [1])]:
        X = builtin(spec)
        N = center(X) if gens is None else Subgroup(X, X.closure(gens))
        out.append(_quotient_extension(X, N))
    for X in catalog():
        Z = center(X)
        if 1 < Z.order < X.order:
            out.append(_quotient_extension(X, Z))
    return out


def _quotient_extension(X: FiniteGroup, N: Subgroup):
    Q, p = quotient(X, N)
    return make_extension(p)


def _random_section(e, rng: random.Random) -> np.ndarray:
    fibers: dict[int, list[int]] = {}
    for x in range(e.total.order):
        fibers.setdefault(int(e.proj.map[x]), []).append(x)
    s = np.array([rng.choice(fibers[y]) for y in range(e.base.order)], dtype=np.int64)
    s[0] = 0
    return s


def check_classification(max_product: int = 16) -> dict:
    rows = []
    for Y in catalog():
        for a in COEFFS:
            A = CoefficientGroup.of(a)
            if Y.order * A.order > max_product:
                continue
            n = len(classify_central(Y, A))
            rows.append([Y.label, a, n, h2_cohomology(Y, A).order])
    return {"item": "classification", "passed": all(r[2] == r[3] for r in rows),
            "pairs": len(rows), "mismatches": [r for r in rows if r[2] != r[3]]}


def check_baer_laws() -> dict:
    failures = []
    for ys in ("C2", "C2xC2"):
        Y, A = builtin(ys), CoefficientGroup.of("C2")
        H = h2_cohomology(Y, A)
        cls = classify_central(Y, A)

        def cl(e):
            from .cohomology import cocycle_of_extension
            return H.class_of(cocycle_of_extension(e))

        zero = (0,) * H.structure.rank
        for c1 in cls:
            e1 = c1.extension
            if cl(baer_sum(e1, split_extension(Y, A))) != c1.coords:
                failures.append([ys, "identity", list(c1.coords)])
            if cl(baer_sum(e1, inverse_extension(e1))) != zero:
                failures.append([ys, "inverse", list(c1.coords)])
            for c2 in cls:
                s12 = baer_sum(e1, c2.extension)
                if cl(s12) != cl(baer_sum(c2.extension, e1)):
                    failures.append([ys, "commutative", list(c1.coords), list(c2.coords)])
                for c3 in cls:
                    left = baer_sum(s12, c3.extension)
                    right = baer_sum(e1, baer_sum(c2.extension, c3.extension))
                    if are_equivalent(left, right) is None:
                        failures.append([ys, "associative", list(c1.coords), list(c2.coords),
                                         list(c3.coords)])
    X = builtin("C4")
    C4 = _quotient_extension(X, Subgroup(X, [0, 2]))
    from .cohomology import identify
    A, iso = identify(C4.embedding.source)
    e = make_extension(C4.proj, C4.embedding.compose(iso.inverse()), A)
    doubled = baer_sum(e, e)
    V4_total = doubled.total.is_abelian and all(
        doubled.total.table[x, x] == 0 for x in range(doubled.total.order))
    return {"item": "baer_laws", "passed": not failures and V4_total,
            "failures": failures[:10], "c4_plus_c4_is_klein": V4_total}


def check_stallings(seed: int) -> dict:
    rng = random.Random(seed)
    rows = []
    for e in named_extensions():
        rep = stallings_stammbach(e)
        base = homology_transgression(e)
        indep = all(homology_transgression(e, _random_section(e, rng)) == base
                    for _ in range(20))
        rows.append([e.total.label, e.base.label, rep.passed, indep])
    return {"item": "stallings", "passed": all(r[2] and r[3] for r in rows),
            "extensions": len(rows), "failures": [r for r in rows if not (r[2] and r[3])]}


def check_hochschild_serre() -> dict:
    rows = []
    for e in named_extensions():
        for a in ("C2", "C3", "C6"):
            rep = hochschild_serre(e, CoefficientGroup.of(a))
            rows.append([e.total.label, e.base.label, a, rep.passed, rep.verdicts[0]["exact"]])
    return {"item": "hochschild_serre", "passed": all(r[3] and r[4] for r in rows),
            "reports": len(rows), "failures": [r for r in rows if not (r[3] and r[4])]}


def check_uct(max_order: int = 16) -> dict:
    rows = []
    for Y in catalog(max_order):
        for a in ("C2", "C3", "C4"):
            rep = universal_coefficients(Y, CoefficientGroup.of(a))
            o = [n.order for n in rep.nodes]
            pairing_image = len(rep.arrows[2].image_set())
            identity = o[2] == o[1] * pairing_image
            rows.append([Y.label, a, rep.passed, identity])
    return {"item": "uct", "passed": all(r[2] and r[3] for r in rows),
            "reports": len(rows), "failures": [r for r in rows if not (r[2] and r[3])]}


def check_huq_smith(max_order: int = 16) -> dict:
    rows = []
    for X in catalog(max_order):
        for N in normal_subgroups(X):
            e = _quotient_extension(X, N)
            huq, coop = is_central_huq(e)
            smith, wit = is_central_smith(e)
            ok = huq == smith == e.is_central and (coop is not None) == huq
            if smith:
                ok &= wit.generated_size_bound_ok and all(wit.pullback_certificates)
            rows.append([X.label, N.order, huq, smith, ok])
    return {"item": "huq_smith", "passed": all(r[4] for r in rows),
            "cases": len(rows), "failures": [r for r in rows if not r[4]]}


def check_normality() -> dict:
    checked = violations = 0
    for e in named_extensions():
        if e.is_central:
            rep = subobjects_of_kernel_are_normal(e)
            checked += rep.checked
            violations += len(rep.violations)
    return {"item": "normality", "passed": violations == 0,
            "subobjects": checked, "violations": violations}


def check_a5() -> dict:
    Y = builtin("A5")
    H = h2(Y, uncertified=True)
    uce = universal_central_extension(Y, uncertified=True)
    bij = {a: perfect_case_isomorphism(Y, CoefficientGroup.of(a), H).bijective
           for a in ("C2", "C3")}
    # independent of the homology path: cocycles mod 2
    h2_mod2 = h2_cohomology(Y, CoefficientGroup.of("C2")).order
    ok = (is_perfect(Y) and H.structure.factors == (2,) and h2_mod2 == 2
          and uce.extension.total.order == 120 and uce.checks["total_perfect"]
          and not uce.checks["split"] and uce.checks["kernel_matches_h2"] and all(bij.values()))
    return {"item": "a5", "passed": bool(ok), "h2": list(H.structure.factors),
            "h2_cohomology_c2_order": h2_mod2, "uce": uce.to_json(), "pairing_bijective": bij}


def check_c2_witness() -> dict:
    w = projectivity_witness(builtin("C2"), ["C2"])
    ok = w is not None and w.h2_order == 2 and w.hom_order == 1
    return {"item": "c2_witness", "passed": ok, "witness": None if w is None else w.to_json()}


def items(seed: int, full: bool) -> list[tuple[str, Callable, tuple]]:
    out = [
        ("classification", check_classification, ()),
        ("baer_laws", check_baer_laws, ()),
        ("stallings", check_stallings, (seed,)),
        ("hochschild_serre", check_hochschild_serre, ()),
        ("uct", check_uct, ()),
        ("huq_smith", check_huq_smith, ()),
        ("normality", check_normality, ()),
        ("c2_witness", check_c2_witness, ()),
    ]
    if full:
        out.append(("a5", check_a5, ()))
    return out


def _call(job):
    fn, args = job
    return fn(*args)


def run_suite(seed: int = 0, full: bool = False, threads: int | None = None) -> dict:
    """Run every item; ``threads`` > 1 uses worker processes, merged in item order."""
    threads = threads or int(os.environ.get("SACAT_THREADS", "1"))
    jobs = [(fn, args) for _, fn, args in items(seed, full)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_call, jobs))
    else:
        results = [_call(j) for j in jobs]
    return {"suite": "paper", "seed": seed, "full": full,
            "passed": all(r["passed"] for r in results), "items": results}
