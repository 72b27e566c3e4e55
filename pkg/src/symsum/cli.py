"""Command-line front end.

Manifold specs::

    manifold = "CP2" [ "#" int ]
             | "S2xS2"
             | "S2xT2" [ "#" int ]
             | "S2~xT2"
             | "S2xSg" int [ "#" int ]      (base genus >= 2)
             | "S2~xSg" int                 (base genus >= 2)
             | "E1" ;
    class    = "[" int { "," int } "]" ;    (coefficients in the family's basis)

Bundle and family-tag literals follow :mod:`symsum.torusbundle`.

Exit codes: 0 success, 2 parse error, 3 domain error, 4 negative classification.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Iterable, Optional, Sequence

from . import homology as hom
from .classifier import DEFAULT_BOUND, Classification, Verdict, classify, model_invariants
from .fpgroup import AbelianInvariants, abelianize, format_presentation
from .glue import Form, GlueError, GluingData, enumerate_table, glue_bundle, glue_presentation, gluing_grid, involution_composite
from .homology import H2Class, HomologyError, SurfaceFamily
from .sumcalc import SumError, SumProblem, Summand, formal_invariants
from .torusbundle import (
    BundleError,
    BundleSyntaxError,
    PATTERNS,
    format_bundle,
    format_matrix,
    h1,
    normal_form,
    parse_bundle,
    parse_matrix,
)

EXIT_OK, EXIT_PARSE, EXIT_DOMAIN, EXIT_NEGATIVE = 0, 2, 3, 4


class ParseError(ValueError):
    pass


_MANIFOLD = re.compile(
    r"(?P<cp2>CP2)(?:#(?P<ck>\d+))?"
    r"|(?P<s2s2>S2xS2)"
    r"|S2xT2(?:#(?P<tk>\d+))?"
    r"|(?P<tw>S2~xT2)"
    r"|S2xSg(?P<gh>\d+)(?:#(?P<gk>\d+))?"
    r"|S2~xSg(?P<th>\d+)"
    r"|(?P<e1>E1)"
)


def parse_manifold(text: str) -> SurfaceFamily:
    t = text.strip()
    m = _MANIFOLD.fullmatch(t)
    if not m:
        raise ParseError(f"cannot parse manifold {text!r}")
    g = m.groupdict()
    if g["e1"]:
        return hom.E1
    if g["cp2"]:
        return hom.CP2Blowup(int(g["ck"] or 0))
    if g["s2s2"]:
        return hom.S2xS2()
    if g["tw"]:
        return hom.RuledTwisted(1)
    if g["gh"]:
        h = int(g["gh"])
        if h < 2:
            raise ParseError("use S2xT2 for base genus 1")
        return hom.RuledTrivial(h, int(g["gk"] or 0))
    if g["th"]:
        h = int(g["th"])
        if h < 2:
            raise ParseError("use S2~xT2 for base genus 1")
        return hom.RuledTwisted(h)
    return hom.RuledTrivial(1, int(g["tk"] or 0))


def parse_class(text: str, X: SurfaceFamily) -> H2Class:
    t = re.sub(r"\s+", "", text)
    if not re.fullmatch(r"\[-?\d+(,-?\d+)*\]", t):
        raise ParseError(f"cannot parse class {text!r}")
    coeffs = tuple(int(c) for c in t[1:-1].split(","))
    if len(coeffs) != hom.rank(X):
        raise HomologyError(f"{X} needs {hom.rank(X)} coefficients, got {len(coeffs)}")
    return H2Class(X, coeffs)


def format_coeffs(c: H2Class) -> str:
    return "[" + ",".join(str(x) for x in c.coeffs) + "]"


def _abelian(a: AbelianInvariants) -> dict:
    return {"rank": a.rank, "torsion": list(a.torsion), "group": str(a)}


# --------------------------------------------------------------------------
# commands; each returns (exit code, records)

Record = dict


def cmd_invariants(spec: str) -> tuple[int, list[Record]]:
    X = parse_manifold(spec)
    K = hom.anticanonical(X)
    return EXIT_OK, [{
        "manifold": str(X),
        "chi": hom.euler(X),
        "sigma": hom.signature(X),
        "c1sq": hom.c1sq(X),
        "b1": hom.b1(X),
        "anticanonical": hom.format_class(K),
        "anticanonical_coeffs": list(K.coeffs),
        "basis": list(hom.basis_labels(X)),
        "genus": hom.adjunction_genus(K),
    }]


def _summand(spec: str, override: Optional[str]) -> Summand:
    X = parse_manifold(spec)
    F = hom.anticanonical(X) if override is None else parse_class(override, X)
    return Summand(X, F)


def classification_record(p: SumProblem, c: Classification) -> Record:
    rec: Record = {
        "X1": str(p.X1.family),
        "X2": str(p.X2.family),
        "F1": hom.format_class(p.X1.F),
        "F2": hom.format_class(p.X2.F),
        "verdict": c.verdict.name,
        "text": str(c),
    }
    if c.reason:
        rec["reason"] = c.reason
    if c.verdict is Verdict.TORUS_BUNDLE_FAMILIES:
        rec["families"] = [str(f) for f in c.families]
    if c.kodaira is not None:
        rec["kodaira"] = c.kodaira.value
    cert = c.certificate
    if c.verdict.is_manifold:
        rec["trades"] = list(cert.trades)
        rec["reduced"] = [str(X) for X in cert.reduced.families]
        inv = formal_invariants(p)
        rec["chi"], rec["sigma"], rec["c1sq"] = inv.chi, inv.sigma, inv.c1sq
    if c.verdict in (Verdict.K3, Verdict.ENRIQUES):
        m = model_invariants(c)
        rec["model"] = {"chi": m.chi, "sigma": m.sigma, "b1": m.b1}
    if cert.complements is not None:
        rec["complements"] = [f"Y{j}" for j in cert.complements]
        rec["bound"] = cert.bound
        rec["witnesses"] = [
            {
                "j": w.j,
                "k": w.k,
                "gluing": str(w.gluing),
                "tag": str(w.tag),
                "b1": model_invariants(w.tag).b1,
            }
            for w in cert.witnesses
        ]
    return rec


def cmd_classify(spec1: str, spec2: str, F1: Optional[str] = None, F2: Optional[str] = None,
                 bound: int = DEFAULT_BOUND) -> tuple[int, list[Record]]:
    p = SumProblem(_summand(spec1, F1), _summand(spec2, F2))
    c = classify(p, bound)
    code = EXIT_OK if c.verdict.is_manifold else EXIT_NEGATIVE
    return code, [classification_record(p, c)]


def cmd_normalform(literal: str) -> tuple[int, list[Record]]:
    b = parse_bundle(literal)
    tag, trace = normal_form(b)
    return EXIT_OK, [{
        "input": format_bundle(b),
        "tag": str(tag),
        "bundle": format_bundle(tag.bundle()),
        "trace": {
            "shape": trace.shape,
            "delta": trace.delta,
            "zeta": trace.zeta,
            "z": trace.z,
            "p": trace.p,
            "q": trace.q,
            "r": trace.r,
            "s": trace.s,
            "x": trace.x,
            "j": trace.j,
            "P": format_matrix(trace.P),
        },
    }]


def cmd_h1(literal: str) -> tuple[int, list[Record]]:
    b = parse_bundle(literal)
    return EXIT_OK, [{"bundle": format_bundle(b), **_abelian(h1(b))}]


def _parse_params(text: str) -> tuple[int, ...]:
    t = re.sub(r"\s+", "", text)
    if not re.fullmatch(r"-?\d+(,-?\d+){4}", t):
        raise ParseError(f"--params needs five comma-separated integers, got {text!r}")
    return tuple(int(x) for x in t.split(","))


def _gluing_record(j: int, k: int, g: GluingData, with_presentation: bool) -> Record:
    b = glue_bundle(j, k, g)
    rec: Record = {"j": j, "k": k, "gluing": str(g), "bundle": format_bundle(b)}
    if with_presentation:
        P = glue_presentation(j, k, g)
        rec["presentation"] = format_presentation(P)
        rec["abelianization"] = str(abelianize(P))
    rec["h1"] = str(h1(b))
    rec["tag"] = str(normal_form(b)[0])
    return rec


def cmd_glue(j: int, k: int, form: str, params: str) -> tuple[int, list[Record]]:
    vals = _parse_params(params)
    g = GluingData.even(*vals) if form == "even" else GluingData.odd(*vals)
    return EXIT_OK, [_gluing_record(j, k, g, True)]


def cmd_enumerate(j: int, k: int, bound: int = DEFAULT_BOUND,
                  emit_presentations: bool = False) -> tuple[int, list[Record]]:
    tags = enumerate_table(j, k, bound)
    patterns = [p for p in PATTERNS if any(t.pattern == p for t in tags)]
    out: list[Record] = [{
        "j": j,
        "k": k,
        "bound": bound,
        "families": [str(p) for p in patterns],
        "tags": sorted(str(t) for t in tags),
    }]
    if emit_presentations:
        for jj, kk in sorted({(j, k), (k, j)}):
            for g in gluing_grid(bound):
                out.append(_gluing_record(jj, kk, g, True))
    return EXIT_OK, out


def cmd_involution(literal: str) -> tuple[int, list[Record]]:
    A = parse_matrix(literal)
    v = involution_composite(A)
    return EXIT_OK, [{
        "matrix": format_matrix(A),
        "kind": v.kind.value,
        "translation": [str(x) for x in v.translation],
    }]


# --------------------------------------------------------------------------
# rendering and dispatch


def render_text(rec: Record) -> str:
    lines = []
    for key, val in rec.items():
        if isinstance(val, dict):
            lines.append(f"{key}:")
            lines += [f"  {k}: {_text(v)}" for k, v in val.items()]
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            lines.append(f"{key}:")
            for item in val:
                lines.append("  - " + ", ".join(f"{k}={_text(v)}" for k, v in item.items()))
        else:
            lines.append(f"{key}: {_text(val)}")
    return "\n".join(lines)


def _text(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, list):
        return "; ".join(str(x) for x in v) if v else "-"
    return str(v)


def render(records: Iterable[Record], fmt: str) -> str:
    if fmt == "records":
        return "\n".join(json.dumps(r, ensure_ascii=False) for r in records)
    return "\n\n".join(render_text(r) for r in records)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="symsum", description=__doc__.split("\n")[0])
    ap.add_argument("--format", choices=("text", "records"), default="text")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", help="homology invariants of a rational or ruled surface")
    p.add_argument("spec")

    p = sub.add_parser("classify", help="classify a symplectic sum along tori")
    p.add_argument("spec1")
    p.add_argument("spec2")
    p.add_argument("--F1", help="class of the surface in the first summand")
    p.add_argument("--F2", help="class of the surface in the second summand")
    p.add_argument("--bound", type=int, default=DEFAULT_BOUND)

    p = sub.add_parser("normalform", help="table family of a glued torus bundle")
    p.add_argument("bundle")

    p = sub.add_parser("h1", help="first homology of a torus bundle")
    p.add_argument("bundle")

    p = sub.add_parser("glue", help="glue two annulus bundles")
    p.add_argument("--j", type=int, choices=(0, 1), required=True)
    p.add_argument("--k", type=int, choices=(0, 1), required=True)
    p.add_argument("--form", choices=[f.value for f in Form], required=True)
    p.add_argument("--params", required=True, help="b,c,d,e,f (even) or a,b,d,e,f (odd)")

    p = sub.add_parser("enumerate", help="all table families from a parameter box")
    p.add_argument("--j", type=int, choices=(0, 1), required=True)
    p.add_argument("--k", type=int, choices=(0, 1), required=True)
    p.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    p.add_argument("--emit-presentations", action="store_true")

    p = sub.add_parser("involution", help="parity of the boundary involution under a matrix")
    p.add_argument("matrix")
    return ap


def run(args: argparse.Namespace) -> tuple[int, list[Record]]:
    c = args.command
    if c == "invariants":
        return cmd_invariants(args.spec)
    if c == "classify":
        return cmd_classify(args.spec1, args.spec2, args.F1, args.F2, args.bound)
    if c == "normalform":
        return cmd_normalform(args.bundle)
    if c == "h1":
        return cmd_h1(args.bundle)
    if c == "glue":
        return cmd_glue(args.j, args.k, args.form, args.params)
    if c == "enumerate":
        return cmd_enumerate(args.j, args.k, args.bound, args.emit_presentations)
    return cmd_involution(args.matrix)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, records = run(args)
    except (ParseError, BundleSyntaxError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (HomologyError, BundleError, GlueError, SumError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    print(render(records, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
