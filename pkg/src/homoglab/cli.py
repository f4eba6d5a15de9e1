"""Command-line interface: ``python -m homoglab <subcommand> ...``.

Exit codes: 0 success, 1 negative answer (``iso`` without a mapping, ``grid``
with mismatches), 2 Unknown verdict or no expansion, 3 budget exhausted,
64 usage error, 65 unparseable input.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from typing import Optional

from . import __version__
from .errors import BudgetExceeded, InputError, NotApplicable, ParseError
from .families import (CASE_CATALOG, CASE_H_12, CASE_H_T1, CASE_H_T2, CASE_II, CatalogEntry,
                       FamilySpec, generate)
from .graph import Graph, are_isomorphic, from_graph6, to_dot, to_graph6

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_UNKNOWN = 2
EXIT_BUDGET = 3
EXIT_USAGE = 64
EXIT_PARSE = 65

CASE_FLAGS = {
    "catalog": CASE_CATALOG,
    "g-union-h": CASE_II,
    "ht1": CASE_H_T1,
    "ht2": CASE_H_T2,
    "h12": CASE_H_12,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


# -- input / output -----------------------------------------------------------

def _read_source(path: Optional[str], inline: Optional[str]) -> str:
    if (path is None) == (inline is None):
        raise UsageError("give exactly one input: a file path, '-' for stdin, or --g6")
    if inline is not None:
        return inline
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="ascii", errors="replace") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) != 1:
        raise UsageError(f"expected exactly one graph6 line, found {len(lines)}")
    return lines[0]


def _load_graph(args) -> Graph:
    return from_graph6(_read_source(args.input, args.g6).strip())


def _header(digest_of: str) -> dict:
    return {"tool_version": __version__,
            "input_hash": "sha256:" + hashlib.sha256(digest_of.encode()).hexdigest()}


def _emit_json(header: dict, body: dict):
    out = dict(header)
    out.update(body)
    sys.stdout.write(json.dumps(out, indent=2) + "\n")


def _write_sidecar(path: Optional[str], payload: dict):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(payload, indent=2) + "\n")


# -- subcommands --------------------------------------------------------------

def cmd_gen(args) -> int:
    case = CASE_FLAGS[args.case]
    h = CatalogEntry.parse(args.h) if args.h else None
    spec = FamilySpec(case, m=args.m, t=args.t, h=h, complemented=args.complement)
    g = generate(spec)
    line = to_graph6(g)
    _write_sidecar(args.sidecar, spec.to_json())
    if args.format == "json":
        _emit_json(_header(line), {"graph6": line, "spec": spec.to_json()})
    elif args.format == "dot":
        sys.stdout.write(to_dot(g))
    else:
        sys.stdout.write(line + "\n")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    from .homogeneity import spectrum
    g = _load_graph(args)
    sp = spectrum(g, args.budget, use_cache=False)
    if args.format == "text":
        sys.stdout.write(sp.text())
    else:
        _emit_json(_header(to_graph6(g)), sp.to_json())
    return EXIT_OK if sp.complete else EXIT_BUDGET


def cmd_classify(args) -> int:
    from .classifier import UNKNOWN, classify
    g = _load_graph(args)
    res = classify(g, args.budget)
    if args.format == "text":
        sys.stdout.write(res.summary() + "\n")
    elif args.format == "dot":
        colors = [0] * g.n
        for i, orb in enumerate(res.anatomy.one_orbits):
            for v in orb:
                colors[v] = i
        sys.stdout.write(to_dot(g, colors))
    else:
        _emit_json(_header(to_graph6(g)), res.to_json())
    return EXIT_UNKNOWN if res.verdict == UNKNOWN else EXIT_OK


def cmd_orbits(args) -> int:
    from .symmetry import automorphism_group, generators_text, orbits_on_ktuples
    g = _load_graph(args)
    if not 1 <= args.k <= max(g.n, 1):
        raise UsageError(f"--k must be in 1..{g.n}")
    grp = automorphism_group(g, args.budget)
    orbits = orbits_on_ktuples(g, args.k, grp=grp)
    if args.format == "text":
        sys.stdout.write(f"|Aut| = {grp.order}\n")
        sys.stdout.write(generators_text(grp))
        sys.stdout.write(f"{len(orbits)} orbits on injective {args.k}-tuples\n")
        for rep, size in orbits:
            sys.stdout.write(f"{list(rep)} size {size}\n")
    elif args.format == "dot":
        colors = [0] * g.n
        for i, orb in enumerate(grp.orbits()):
            for v in orb:
                colors[v] = i
        sys.stdout.write(to_dot(g, colors))
    else:
        body = {
            "group_order": str(grp.order),
            "generators": [list(p) for p in grp.generators],
            "vertex_orbits": grp.orbits(),
            "k": args.k,
            "count": len(orbits),
            "orbits": [{"rep": list(rep), "size": size} for rep, size in orbits],
        }
        _emit_json(_header(to_graph6(g)), body)
    return EXIT_OK


def cmd_homogenize(args) -> int:
    from .homogeneity import low_levels
    from .homogenize import BINARY, UNARY, binary_expansion, unary_expansion, verify_expansion
    g = _load_graph(args)
    kind = args.kind
    if kind == "auto":
        low = low_levels(g, 2, args.budget)
        if low and not low[0].holds:
            kind = UNARY
        elif len(low) > 1 and not low[1].holds:
            kind = BINARY
        else:
            sys.stderr.write("graph is already 2-homogeneous; nothing to add\n")
            return EXIT_UNKNOWN
    try:
        e = unary_expansion(g, args.budget) if kind == UNARY else binary_expansion(g, args.budget)
    except NotApplicable as exc:
        sys.stderr.write(f"no expansion: {exc}\n")
        return EXIT_UNKNOWN
    report = verify_expansion(e, args.budget)
    sidecar = e.to_json(report)
    _write_sidecar(args.sidecar, sidecar)
    line = to_graph6(g)
    if args.format == "text":
        sys.stdout.write(line + "\n")
        sys.stdout.write(json.dumps(sidecar) + "\n")
    elif args.format == "dot":
        sys.stdout.write(to_dot(g, list(e.colors) if e.colors else None))
    else:
        _emit_json(_header(line), {"graph6": line, **sidecar})
    return EXIT_OK if report.ok(e.kind) else EXIT_UNKNOWN


def cmd_iso(args) -> int:
    sources = list(args.inputs or []) + [("g6", s) for s in (args.g6 or [])]
    if len(sources) != 2:
        raise UsageError("iso needs exactly two graphs (files and/or --g6)")
    graphs = []
    for src in sources:
        if isinstance(src, tuple):
            graphs.append(from_graph6(src[1].strip()))
        else:
            graphs.append(from_graph6(_read_source(src, None).strip()))
    a, b = graphs
    mapping = are_isomorphic(a, b)
    digest = to_graph6(a) + "\n" + to_graph6(b)
    body = {"isomorphic": mapping is not None,
            "mapping": ({str(k): v for k, v in sorted(mapping.items())} if mapping is not None else None)}
    if args.format == "text":
        sys.stdout.write(("isomorphic " + json.dumps(body["mapping"]) if mapping else "not isomorphic") + "\n")
    else:
        _emit_json(_header(digest), body)
    return EXIT_OK if mapping is not None else EXIT_NEGATIVE


def cmd_grid(args) -> int:
    from .classifier import roundtrip_grid
    hs = args.h or ["K1", "K2", "K3", "2K2", "C5"]
    report = roundtrip_grid(args.tmax, args.mmax, hs, args.budget, args.jobs)
    digest = json.dumps({"tmax": args.tmax, "mmax": args.mmax, "h": hs})
    if args.format == "text":
        for c in report.cells:
            sys.stdout.write(f"{c.status:18s} {json.dumps(c.spec.to_json())} {c.reason}\n")
        sys.stdout.write(f"{len(report.mismatches)} mismatches, {len(report.collapses)} expected collapses\n")
    else:
        _emit_json(_header(digest), report.to_json())
    return EXIT_OK if not report.mismatches else EXIT_NEGATIVE


# -- parser -------------------------------------------------------------------

def _positive_int(text: str) -> int:
    try:
        val = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if val < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return val


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="homoglab", description="Homogeneity tools for finite graphs.")
    p.add_argument("--version", action="version", version=f"homoglab {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, formats=("json", "text")):
        sp.add_argument("--format", choices=formats, default=formats[0])
        sp.add_argument("--budget", type=_positive_int, default=None,
                        help="search node budget (default: $HOMOGLAB_BUDGET or 2000000)")
        sp.add_argument("--jobs", type=_positive_int, default=1)
        sp.add_argument("--seed", type=int, default=0, help="accepted for reproducible scripting")

    def one_input(sp):
        sp.add_argument("input", nargs="?", help="graph6 file, or '-' for stdin")
        sp.add_argument("--g6", help="graph6 string given inline")

    sp = sub.add_parser("gen", help="generate a family member")
    sp.add_argument("--case", choices=sorted(CASE_FLAGS), required=True)
    sp.add_argument("--t", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--h", help="catalogue entry: K3, 2K2, co-3K2, C5, rook3x3, co-C5, ...")
    sp.add_argument("--complement", action="store_true")
    sp.add_argument("--sidecar", help="write the family spec as JSON to this path")
    common(sp, ("g6", "json", "dot"))
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("spectrum", help="k-homogeneity verdicts for every k")
    one_input(sp)
    common(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("classify", help="recognise the family of a graph")
    one_input(sp)
    common(sp, ("json", "text", "dot"))
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("orbits", help="automorphism group and orbits on k-tuples")
    one_input(sp)
    sp.add_argument("--k", type=_positive_int, default=1)
    common(sp, ("json", "text", "dot"))
    sp.set_defaults(func=cmd_orbits)

    sp = sub.add_parser("homogenize", help="find and verify a homogeneous expansion")
    one_input(sp)
    sp.add_argument("--kind", choices=("auto", "unary", "binary"), default="auto")
    sp.add_argument("--sidecar", help="write the expansion JSON to this path")
    common(sp, ("json", "text", "dot"))
    sp.set_defaults(func=cmd_homogenize)

    sp = sub.add_parser("iso", help="isomorphism test with an explicit mapping")
    sp.add_argument("inputs", nargs="*", help="graph6 files ('-' for stdin)")
    sp.add_argument("--g6", action="append", help="inline graph6 (repeatable)")
    common(sp)
    sp.set_defaults(func=cmd_iso)

    sp = sub.add_parser("grid", help="classifier round trip over a parameter grid")
    sp.add_argument("--tmax", type=_positive_int, default=3)
    sp.add_argument("--mmax", type=_positive_int, default=4)
    sp.add_argument("--h", action="append", help="catalogue entries for the grid (repeatable)")
    common(sp)
    sp.set_defaults(func=cmd_grid)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.budget is None and os.environ.get("HOMOGLAB_BUDGET"):
        from .symmetry.search import default_budget
        args.budget = default_budget()
    try:
        return args.func(args)
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except BudgetExceeded as exc:
        sys.stderr.write(f"budget exhausted: {exc}\n")
        return EXIT_BUDGET
    except (UsageError, InputError) as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
