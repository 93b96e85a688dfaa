"""``sacat`` command-line front end.

Exit codes: 0 success (all verdicts PASS), 1 domain failure, 2 usage error.
JSON output always uses sorted keys so identical inputs give identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import cohomology, homology
from .cohomology import CoefficientGroup, h2_cohomology, identify
from .errors import (
    NotAHomomorphism,
    SacatError,
    SchemaError,
    UsageError,
)
from .extensions import (
    Extension,
    baer_sum,
    classify_central,
    is_central_huq,
    is_central_smith,
    make_extension,
)
from .groups import FiniteGroup, GroupMorphism, builtin, center, from_cayley_table
from .homology import h1, h2
from .theorems import (
    hochschild_serre,
    is_perfect,
    stallings_stammbach,
    universal_central_extension,
    universal_coefficients,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ------------------------------------------------------------------ ingest

def _group_from_json(doc, where: str) -> FiniteGroup:
    if isinstance(doc, str):
        return builtin(doc)
    if isinstance(doc, dict) and "table" in doc:
        return from_cayley_table(doc["table"], label=str(doc.get("label", "G")))
    if isinstance(doc, list):
        return from_cayley_table(doc)
    raise SchemaError(f"{where}: expected a DSL string or a Cayley table")


def _identity_swap(table) -> np.ndarray | None:
    """The relabeling from_cayley_table applies (swap identity with 0), if any."""
    T = np.asarray(table)
    ar = np.arange(T.shape[0])
    for e in range(T.shape[0]):
        if np.array_equal(T[e], ar) and np.array_equal(T[:, e], ar):
            if e == 0:
                return None
            perm = ar.copy()
            perm[0], perm[e] = e, 0
            return perm
    return None


def _map_field(doc: dict, key: str) -> list[int]:
    try:
        m = doc[key]["map"]
    except (KeyError, TypeError):
        raise SchemaError(f"missing {key}.map") from None
    if not isinstance(m, list) or not all(isinstance(v, int) for v in m):
        raise SchemaError(f"{key}.map must be a list of integers")
    return m


def load_group(spec: str) -> FiniteGroup:
    """A DSL string, or a path to Cayley JSON."""
    path = Path(spec)
    if spec.endswith(".json") or path.is_file():
        return _group_from_json(_read_json(path), str(path))
    return builtin(spec)


def _read_json(path: Path):
    try:
        return json.loads(path.read_text())
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def extension_from_json(doc, base: FiniteGroup | None = None) -> Extension:
    """Build an extension from ``{"total", "proj": {"map"}, "kernel_identification": {"map"}}``.

    The base group is read from ``base`` when present, otherwise rebuilt as the
    image of ``proj``.  ``coeff`` (DSL or factor list) names the kernel; the
    identification map lists the images of its elements.  A ``base`` group with
    the same table replaces the parsed one, so two files can share a base.
    """
    if not isinstance(doc, dict) or "total" not in doc:
        raise SchemaError("extension JSON needs a 'total' field")
    X = _group_from_json(doc["total"], "total")
    swap = _identity_swap(doc["total"]["table"]) if isinstance(doc["total"], dict) else None
    pmap = _map_field(doc, "proj")
    if len(pmap) != X.order:
        raise SchemaError(f"proj.map has {len(pmap)} entries, total has order {X.order}")
    if swap is not None:
        pmap = [pmap[int(swap[i])] for i in range(X.order)]
    if "base" in doc:
        Y = _group_from_json(doc["base"], "base")
    else:
        Y = _image_group(X, pmap)
    if base is not None and np.array_equal(base.table, Y.table):
        Y = base
    if any(not 0 <= v < Y.order for v in pmap):
        raise SchemaError("proj.map value outside the base group")
    proj = GroupMorphism(X, Y, pmap)
    if "kernel_identification" not in doc:
        return make_extension(proj)
    kmap = _map_field(doc, "kernel_identification")
    if swap is not None:
        kmap = [int(swap[v]) for v in kmap]
    if any(not 0 <= v < X.order for v in kmap):
        raise SchemaError("kernel_identification.map value outside the total group")
    if "coeff" in doc:
        c = doc["coeff"]
        A = CoefficientGroup.of(c if isinstance(c, str) else tuple(c))
    else:
        from .groups import kernel
        A, _ = identify(kernel(proj).as_group()[0])
    if len(kmap) != A.order:
        raise SchemaError(f"kernel_identification.map has {len(kmap)} entries, expected {A.order}")
    emb = GroupMorphism(A.concrete, X, kmap)
    return make_extension(proj, emb, A)


def _image_group(X: FiniteGroup, pmap: list[int]) -> FiniteGroup:
    n = max(pmap) + 1 if pmap else 0
    if sorted(set(pmap)) != list(range(n)):
        from .errors import NotSurjective
        raise NotSurjective("proj.map does not cover 0..max")
    T = np.full((n, n), -1, dtype=np.int64)
    for a in range(X.order):
        for b in range(X.order):
            v = pmap[int(X.table[a, b])]
            if T[pmap[a], pmap[b]] not in (-1, v):
                raise NotAHomomorphism(f"proj is not a homomorphism at ({a}, {b})")
            T[pmap[a], pmap[b]] = v
    return from_cayley_table(T, label=f"{X.label}/ker")


def load_extension(path: str, base: FiniteGroup | None = None) -> Extension:
    return extension_from_json(_read_json(Path(path)), base)


# ---------------------------------------------------------------- commands

def cmd_group(args) -> tuple[dict, int]:
    G = load_group(args.spec)
    out = {"group": G.label, "order": G.order, "abelian": G.is_abelian,
           "center_order": center(G).order, "h1": h1(G).structure.to_json(),
           "perfect": is_perfect(G)}
    return out, 0


def cmd_homology(args) -> tuple[dict, int]:
    G = load_group(args.spec)
    out: dict = {"group": G.label}
    if args.degree in (None, 1):
        out["h1"] = h1(G).structure.to_json()
    if args.degree in (None, 2):
        H = h2(G, uncertified=args.uncertified)
        out["h2"] = H.structure.to_json()
        out["certified"] = H.certified
    return out, 0


def cmd_cohomology(args) -> tuple[dict, int]:
    Y = load_group(args.spec)
    return h2_cohomology(Y, CoefficientGroup.of(args.coeff)).to_json(reps=args.reps), 0


def cmd_centr(args) -> tuple[dict, int]:
    if args.action == "classify":
        if len(args.inputs) != 1:
            raise UsageError("centr classify takes one group")
        Y = load_group(args.inputs[0])
        A = CoefficientGroup.of(args.coeff or _require("--coeff"))
        classes = classify_central(Y, A)
        return {"group": Y.label, "coeff": str(A), "count": len(classes),
                "classes": [{"class": list(c.coords), "total_order": c.extension.total.order,
                             "total_abelian": c.extension.total.is_abelian}
                            for c in classes]}, 0
    if args.action == "baer":
        if len(args.inputs) != 2:
            raise UsageError("centr baer takes two extension files")
        e1 = load_extension(args.inputs[0])
        s = baer_sum(e1, load_extension(args.inputs[1], e1.base))
        out = s.to_json()
        out["class"] = _class_of(s)
        return out, 0
    if len(args.inputs) != 1:
        raise UsageError("centr check takes one extension file")
    e = load_extension(args.inputs[0])
    huq, coop = is_central_huq(e)
    smith, wit = is_central_smith(e)
    out = {"huq": huq, "smith": smith, "agree": huq == smith,
           "cooperator": None if coop is None else coop.map.tolist(),
           "smith_witness": {"double_relation_size": wit.double_relation_size,
                             "generated_size_bound_ok": wit.generated_size_bound_ok,
                             "pullback_certificates": list(wit.pullback_certificates)}}
    return out, 0 if huq == smith else 1


def _class_of(e: Extension) -> list[int] | None:
    if e.coefficients is None:
        return None
    H = h2_cohomology(e.base, e.coefficients)
    return list(H.class_of(cohomology.cocycle_of_extension(e)))


def _require(flag: str):
    raise UsageError(f"{flag} is required")


def cmd_exact(args) -> tuple[dict, int]:
    if args.which == "uct":
        rep = universal_coefficients(load_group(args.input),
                                     CoefficientGroup.of(args.coeff or _require("--coeff")))
    elif args.which == "hs":
        rep = hochschild_serre(load_extension(args.input),
                               CoefficientGroup.of(args.coeff or _require("--coeff")))
    else:
        rep = stallings_stammbach(load_extension(args.input))
    return rep.to_json(), 0 if rep.passed else 1


def cmd_uce(args) -> tuple[dict, int]:
    res = universal_central_extension(load_group(args.spec), uncertified=args.uncertified)
    c = res.checks
    ok = c["total_perfect"] and c["central"] and not c["split"] and c["initial"]
    return res.to_json(), 0 if ok or res.extension.base.order == 1 else 1


def cmd_verify(args) -> tuple[dict, int]:
    from .suite import run_suite

    if args.suite != "paper":
        raise UsageError(f"unknown suite {args.suite!r}")
    report = run_suite(seed=args.seed, full=args.full)
    return report, 0 if report["passed"] else 1


# ------------------------------------------------------------------ parser

def _global_flags(default) -> argparse.ArgumentParser:
    """Flags accepted before or after the subcommand.

    Subcommand copies use SUPPRESS so they do not overwrite a value given earlier.
    """
    g = _Parser(add_help=False)
    g.add_argument("--json", action="store_true",
                   default=False if default is None else default, help="machine-readable output")
    g.add_argument("--cap", type=int, default=default, help="certified order cap for H2")
    g.add_argument("--solver-cap", type=int, default=default,
                   help="cap on |Y|^2 |A| for the cocycle solver")
    return g


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sacat", parents=[_global_flags(None)],
                description="Homology and central extensions of finite groups.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[_global_flags(argparse.SUPPRESS)], **kw)
    sub.add_parser = add_parser

    g = sub.add_parser("group", help="basic invariants")
    g.add_argument("action", choices=["info"])
    g.add_argument("spec")
    g.set_defaults(fn=cmd_group)

    h = sub.add_parser("homology", help="H1 and H2 with integer coefficients")
    h.add_argument("spec")
    h.add_argument("--degree", type=int, choices=[1, 2])
    h.add_argument("--uncertified", action="store_true")
    h.set_defaults(fn=cmd_homology)

    c = sub.add_parser("cohomology", help="H2(Y, A) for trivial coefficients")
    c.add_argument("spec")
    c.add_argument("--coeff", required=True)
    c.add_argument("--reps", action="store_true", help="include cocycle tables")
    c.set_defaults(fn=cmd_cohomology)

    ce = sub.add_parser("centr", help="central extensions")
    ce.add_argument("action", choices=["classify", "baer", "check"])
    ce.add_argument("inputs", nargs="+")
    ce.add_argument("--coeff")
    ce.set_defaults(fn=cmd_centr)

    ex = sub.add_parser("exact", help="exact-sequence reports")
    ex.add_argument("which", choices=["stallings", "hs", "uct"])
    ex.add_argument("input")
    ex.add_argument("--coeff")
    ex.set_defaults(fn=cmd_exact)

    u = sub.add_parser("uce", help="universal central extension of a perfect group")
    u.add_argument("spec")
    u.add_argument("--uncertified", action="store_true")
    u.set_defaults(fn=cmd_uce)

    v = sub.add_parser("verify", help="run the verification suite")
    v.add_argument("--suite", default="paper")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--full", action="store_true", help="include the A5 checks")
    v.set_defaults(fn=cmd_verify)
    return p


def render_text(doc, indent: int = 0) -> str:
    pad = " " * indent
    if not isinstance(doc, dict):
        return pad + json.dumps(doc, sort_keys=True)
    width = max((len(k) for k in doc), default=0)
    lines = []
    for k in sorted(doc):
        v = doc[k]
        if isinstance(v, dict) and v:
            lines.append(f"{pad}{k}:")
            lines.append(render_text(v, indent + 2))
        else:
            lines.append(f"{pad}{k.ljust(width)}  {json.dumps(v, sort_keys=True)}")
    return "\n".join(lines)


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    caps = homology.CERTIFIED_CAP, cohomology.SOLVER_CAP
    try:
        args = build_parser().parse_args(argv)
        if args.cap is not None:
            homology.CERTIFIED_CAP = args.cap
            homology.h2.cache_clear()
        if args.solver_cap is not None:
            cohomology.SOLVER_CAP = args.solver_cap
        doc, code = args.fn(args)
    except UsageError as exc:
        print(f"sacat: usage error: {exc}", file=err)
        return 2
    except SacatError as exc:
        print(f"sacat: {type(exc).__name__}: {exc}", file=err)
        return 1
    finally:
        if (homology.CERTIFIED_CAP, cohomology.SOLVER_CAP) != caps:
            homology.CERTIFIED_CAP, cohomology.SOLVER_CAP = caps
            homology.h2.cache_clear()
    if args.json:
        out.write(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")
    else:
        out.write(render_text(doc) + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
