"""Command-line driver: ``dburnside {basis,mul,idempotents,hdb,units,verify}``.

Exit codes: 0 success or structure match, 1 failed verification suite,
2 bad input (argument, parse, or group mismatch), 3 structure mismatch,
4 unverified exploratory result, 5 time budget or closure cap exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from pathlib import Path

from .cyclic_group import CyclicPGroup
from .goursat import enumerate_basis
from .ring import RingElement, f_idem, h_db_generators, j_idem

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_MISMATCH, EXIT_UNVERIFIED, EXIT_BUDGET = 0, 1, 2, 3, 4, 5


class InputError(Exception):
    pass


def format_element(a: RingElement) -> str:
    terms = a.terms()
    if not terms:
        return "0"
    return " + ".join(f"{c}*{q}" for q, c in terms).replace("+ -", "- ")


def _emit(args, obj: dict, text_lines: list[str]):
    if args.format == "json":
        print(json.dumps(obj, indent=2, sort_keys=False))
    else:
        print("\n".join(text_lines))


def _group(args) -> CyclicPGroup:
    try:
        return CyclicPGroup(args.p, args.n)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _config(args):
    from .solver import SearchConfig

    try:
        return SearchConfig(coefficient_bound=args.bound, mode=args.mode, time_budget=args.time_budget)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _load_element(source: str) -> RingElement:
    text = source if source.lstrip().startswith("{") else None
    if text is None:
        try:
            text = sys.stdin.read() if source == "-" else Path(source).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {source}: {exc}") from exc
    try:
        return RingElement.from_json(text)
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(f"cannot parse ring element from {source!r}: {exc}") from exc


# -- subcommands ---------------------------------------------------------------


def cmd_basis(args) -> int:
    G = _group(args)
    basis = enumerate_basis(G)
    strata = Counter(q.gap for q in basis)
    obj = {
        "group": {"p": G.p, "n": G.n},
        "count": len(basis),
        "strata": {str(t): strata[t] for t in sorted(strata)},
        "basis": [q.to_list() for q in basis],
    }
    _emit(args, obj, [str(q) for q in basis])
    if args.format == "text":
        summary = ", ".join(f"|P/K|=p^{t}: {strata[t]}" for t in sorted(strata))
        print(f"{len(basis)} subgroups of {G} x {G} ({summary})", file=sys.stderr)
    return EXIT_OK


def cmd_mul(args) -> int:
    G = _group(args)
    a, b = _load_element(args.a), _load_element(args.b)
    for x in (a, b):
        if x.group != G:
            raise InputError(f"element lives over {x.group}, expected {G}")
    c = a * b
    if args.format == "json":
        print(c.to_json())
    else:
        print(format_element(c))
    return EXIT_OK


def cmd_idempotents(args) -> int:
    G = _group(args)
    rows = []
    for N in range(G.n + 1):
        rows.append({"N": N, "j": j_idem(G, N), "f": f_idem(G, N)})
    obj = {
        "group": {"p": G.p, "n": G.n},
        "idempotents": [{"N": r["N"], "j": r["j"].to_json_obj(), "f": r["f"].to_json_obj()} for r in rows],
    }
    lines = []
    for r in rows:
        lines.append(f"j_{r['N']} = {format_element(r['j'])}")
        lines.append(f"f_{r['N']} = {format_element(r['f'])}")
    _emit(args, obj, lines)
    return EXIT_OK


def cmd_hdb(args) -> int:
    from .group_id import closure, fingerprint

    G = _group(args)
    gens = h_db_generators(G)
    fp = fingerprint(closure(gens))
    obj = {
        "group": {"p": G.p, "n": G.n},
        "generators": [g.to_json_obj() for g in gens],
        "fingerprint": fp.to_json_obj(),
    }
    lines = [f"Id - 2 j_{N} = {format_element(g)}" for N, g in enumerate(gens)]
    lines.append(f"order {fp.order}, order statistics {fp.order_statistics}, invariants {list(fp.abelian_invariants)}")
    _emit(args, obj, lines)
    return EXIT_OK


def cmd_units(args) -> int:
    from .group_id import ClosureCapExceeded
    from .solver import BudgetExceeded, orthogonal_unit_group

    G = _group(args)
    cfg = _config(args)
    try:
        report = orthogonal_unit_group(G, cfg)
    except (BudgetExceeded, ClosureCapExceeded) as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    fp = report.fingerprint
    kernel = report.kernel
    lines = [
        f"group: {G}",
        f"solver: mode={kernel.mode} bound={kernel.bound_used} complete={kernel.complete} nodes={kernel.nodes}",
        f"kernel of rho: {len(kernel.solutions)} elements, lifted support {kernel.lifted_support}",
        f"order: {fp.order}",
        f"abelian: {fp.is_abelian}",
        f"order statistics: {fp.order_statistics}",
        f"invariants: {list(fp.abelian_invariants)}",
        f"center order: {fp.center_order}",
        f"direct product im(eta) x ker(rho): {report.direct_product}",
        f"claimed: {report.claimed if report.claimed else 'none (open case)'}",
    ]
    if report.claimed is None:
        status, code = "UNVERIFIED", EXIT_UNVERIFIED
    elif report.match and report.direct_product:
        # a box search cannot prove completeness, so say so instead of claiming it
        status, code = ("MATCH" if kernel.complete else "MATCH_IN_BOX"), EXIT_OK
    else:
        status, code = "MISMATCH", EXIT_MISMATCH
    lines.append(f"status: {status}")
    lines += [f"note: {n}" for n in report.notes]
    obj = report.to_json_obj()
    obj["status"] = status
    _emit(args, obj, lines)
    return code


def cmd_verify(args) -> int:
    from .verify import run_verify

    G = _group(args)
    report = run_verify(G, _config(args), units=not args.skip_units)
    lines = [f"verify {G}"]
    for s in report.suites:
        lines.append(f"[{s.status}] {s.name}: {s.detail} ({s.elapsed:.2f}s)")
    lines += [f"note: {n}" for n in report.notes]
    _emit(args, report.to_json_obj(), lines)
    if report.failed:
        return EXIT_FAIL
    if report.budget_limited:
        return EXIT_BUDGET
    if report.exploratory:
        return EXIT_UNVERIFIED
    return EXIT_OK


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dburnside", description="Double Burnside rings of cyclic p-groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, *, search=False):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--p", type=int, required=True, help="prime p")
        sp.add_argument("--n", type=int, required=True, help="G = C_{p^n}")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        if search:
            sp.add_argument("--bound", type=int, default=6, help="coefficient box for the oracle (default 6)")
            sp.add_argument("--mode", choices=("pruned", "oracle"), default="pruned")
            sp.add_argument(
                "--time-budget", type=float, default=None, help="seconds; default $DBURNSIDE_TIME_BUDGET or 600"
            )
        sp.set_defaults(func=func)
        return sp

    add("basis", cmd_basis, "list the Goursat basis of B(G, G)")
    mul = add("mul", cmd_mul, "multiply two ring elements given as JSON files, inline JSON, or - for stdin")
    mul.add_argument("a")
    mul.add_argument("b")
    add("idempotents", cmd_idempotents, "the idempotents j_N and f_N")
    add("hdb", cmd_hdb, "generators and structure of H_dB")
    add("units", cmd_units, "compute and identify the orthogonal unit group", search=True)
    ver = add("verify", cmd_verify, "run the property suites", search=True)
    ver.add_argument("--skip-units", action="store_true", help="only the algebra suites")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
