"""Command-line interface.

Exit codes: 0 success or no conflict, 2 usage error, 3 unresolvable
input, 4 conflicts found, 5 data error. The bundled dataset and alias
table are used unless overridden with ``--dataset`` / ``--aliases`` or
the ``LICTERM_DATASET`` environment variable. ``--format records``
emits one JSON object per line for piping; table output is for humans.
Identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .conflicts import ConflictType, build_matrix, check_expressions, explain as explain_finding
from .dataset import (
    AliasTable,
    Dataset,
    bundled_aliases,
    bundled_dataset,
    bundled_known_ids,
    known_licenses,
    load_aliases,
    load_dataset,
)
from .errors import LictermError
from .expression import (
    ExpressionSyntaxError,
    KnownLicenses,
    Resolved,
    Unresolvable,
    normalize,
    parse_expression,
    render,
)
from .mining import InvalidThreshold, dedup_similar, mine
from .model import TERM_ORDER
from .registry import build_graph, license_changes, parse_snapshot, read_graph, write_graph
from .scan import rank_pairs, scan

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_UNRESOLVABLE = 3
EXIT_CONFLICTS = 4
EXIT_DATA = 5

DATASET_ENV = "LICTERM_DATASET"


class _Context:
    """Lazily loaded dataset, alias table, and id registry."""

    def __init__(self, args):
        self._dataset_path = getattr(args, "dataset", None) or os.environ.get(DATASET_ENV)
        self._aliases_path = getattr(args, "aliases", None)
        self._ds: Dataset | None = None
        self._known: KnownLicenses | None = None
        self._aliases: AliasTable | None = None

    @property
    def dataset(self) -> Dataset:
        if self._ds is None:
            self._ds = (
                load_dataset(self._dataset_path) if self._dataset_path else bundled_dataset()
            )
        return self._ds

    @property
    def known(self) -> KnownLicenses:
        if self._known is None:
            self._known = known_licenses(self.dataset, bundled_known_ids())
        return self._known

    @property
    def aliases(self) -> AliasTable:
        if self._aliases is None:
            self._aliases = (
                load_aliases(self._aliases_path, self.known)
                if self._aliases_path
                else bundled_aliases(self.known)
            )
        return self._aliases


def _emit(record: dict) -> None:
    print(json.dumps(record, sort_keys=True))


def _finding_record(finding) -> dict:
    return {
        "kind": "finding",
        "type": finding.ctype.value,
        "term": finding.term.value,
        "parent": finding.parent_id,
        "dep": finding.dep_id,
        "parent_attitude": finding.parent_attitude.value,
        "dep_attitude": finding.dep_attitude.value,
    }


def _normalize_or_exit(ctx: _Context, raw: str, role: str):
    outcome = normalize(raw, ctx.aliases, ctx.known)
    if isinstance(outcome, Unresolvable):
        print(
            f"{role} license is unresolvable ({outcome.reason.value}): {raw}",
            file=sys.stderr,
        )
        raise SystemExit(EXIT_UNRESOLVABLE)
    return outcome.expr


# --- subcommand handlers -----------------------------------------------------


def _cmd_normalize(args) -> int:
    ctx = _Context(args)
    outcome = normalize(args.raw, ctx.aliases, ctx.known)
    if isinstance(outcome, Resolved):
        print(render(outcome.expr))
        return EXIT_OK
    print(f"unresolvable:{outcome.reason.value}")
    return EXIT_UNRESOLVABLE


def _cmd_parse_expr(args) -> int:
    try:
        expr = parse_expression(args.expr)
    except ExpressionSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNRESOLVABLE
    print(_parenthesized(expr))
    return EXIT_OK


def _parenthesized(expr) -> str:
    from .expression import And, Or

    if isinstance(expr, (And, Or)):
        op = "AND" if isinstance(expr, And) else "OR"
        return f"({_parenthesized(expr.left)} {op} {_parenthesized(expr.right)})"
    return render(expr)


def _cmd_check(args) -> int:
    ctx = _Context(args)
    parent = _normalize_or_exit(ctx, args.parent, "parent")
    dep = _normalize_or_exit(ctx, args.dep, "dependency")
    verdict = check_expressions(parent, dep, ctx.dataset, args.strict_not_mentioned)
    if args.format == "records":
        for finding in verdict.findings:
            _emit(_finding_record(finding))
        for warning in verdict.warnings:
            _emit({"kind": "warning", "message": warning})
        _emit(
            {
                "kind": "verdict",
                "conflict_free": verdict.conflict_free,
                "parent": verdict.parent_resolved,
                "dep": verdict.dep_resolved,
                "unknown": list(verdict.unknown_ids),
            }
        )
    else:
        for warning in verdict.warnings:
            print(f"warning: {warning}", file=sys.stderr)
        if verdict.conflict_free:
            print(
                f"no conflicts: {verdict.parent_resolved} may depend on {verdict.dep_resolved}"
            )
        else:
            for finding in verdict.findings:
                print(explain_finding(finding))
    return EXIT_OK if verdict.conflict_free else EXIT_CONFLICTS


def _cmd_matrix(args) -> int:
    ctx = _Context(args)
    matrix = build_matrix(ctx.dataset, args.strict_not_mentioned)
    if args.format == "records":
        _emit(
            {
                "kind": "totals",
                "c1_pairs": matrix.c1_pairs,
                "c2_pairs": matrix.c2_pairs,
                "c3_pairs": matrix.c3_pairs,
            }
        )
        for spdx_id in sorted(matrix.degrees):
            c1, c2, c3 = matrix.degrees[spdx_id]
            _emit({"kind": "degree", "id": spdx_id, "c1": c1, "c2": c2, "c3": c3})
    else:
        print(
            f"conflicting ordered pairs: C1={matrix.c1_pairs} "
            f"C2={matrix.c2_pairs} C3={matrix.c3_pairs}"
        )
        print(f"{'license':<24} {'C1':>5} {'C2':>5} {'C3':>5}")
        for spdx_id in sorted(matrix.degrees):
            c1, c2, c3 = matrix.degrees[spdx_id]
            print(f"{spdx_id:<24} {c1:>5} {c2:>5} {c3:>5}")
    return EXIT_OK


def _cmd_mine(args) -> int:
    ctx = _Context(args)
    try:
        patterns = mine(ctx.dataset, args.min_support)
        if not args.no_dedup:
            patterns = dedup_similar(patterns, args.jaccard)
    except InvalidThreshold as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    patterns = [p for p in patterns if len(p.items) >= args.min_size]
    if args.format == "records":
        for p in patterns:
            _emit(
                {
                    "kind": "pattern",
                    "items": [str(i) for i in p.sorted_items()],
                    "support": p.support_count,
                    "licenses": sorted(p.supporting_ids),
                }
            )
    else:
        print(f"{len(patterns)} patterns (min support {args.min_support})")
        for p in patterns:
            items = " ".join(str(i) for i in p.sorted_items())
            sample = ", ".join(sorted(p.supporting_ids)[:4])
            print(f"{p.support_count:>4}  {items}  [{sample}]")
    return EXIT_OK


def _cmd_ingest(args) -> int:
    records = parse_snapshot(args.snapshot)
    graph = build_graph(records)
    write_graph(graph, records, args.output)
    print(
        f"nodes={len(graph.nodes)} edges={len(graph.edges)} "
        f"unresolved={len(graph.unresolved)}"
    )
    return EXIT_OK


def _cmd_changes(args) -> int:
    ctx = _Context(args)
    records = parse_snapshot(args.snapshot)
    changes = license_changes(records, ctx.aliases, ctx.known)

    def show(outcome) -> str:
        if isinstance(outcome, Resolved):
            return render(outcome.expr)
        return f"unresolvable:{outcome.reason.value}"

    if args.format == "records":
        for c in changes:
            _emit(
                {
                    "kind": "change",
                    "package": c.package,
                    "from": show(c.from_outcome),
                    "to": show(c.to_outcome),
                    "at_version": str(c.at_version),
                    "classification": c.classification,
                }
            )
    else:
        print(f"{len(changes)} license changes")
        for c in changes:
            print(
                f"{c.package} {show(c.from_outcome)} -> {show(c.to_outcome)} "
                f"at {c.at_version} [{c.classification}]"
            )
    return EXIT_OK


def _cmd_scan(args) -> int:
    ctx = _Context(args)
    graph, records = read_graph(args.graph)
    report = scan(
        graph, records, ctx.dataset, args.strict_not_mentioned, ctx.aliases, ctx.known
    )
    table = rank_pairs(report, args.top)
    if args.format == "records":
        _emit(
            {
                "kind": "summary",
                "total_edges": report.total_edges,
                "conflicted_edges": report.conflicted_edges,
                "unknown_license_edges": report.unknown_license_edges,
                **{
                    f"{ctype.value.lower()}_edges": report.edges_with_findings[ctype]
                    for ctype in ConflictType
                },
            }
        )
        for ctype in ConflictType:
            for parent, dep, count in table.rows[ctype]:
                _emit(
                    {
                        "kind": "pair",
                        "type": ctype.value,
                        "parent": parent,
                        "dep": dep,
                        "edges": count,
                    }
                )
        for (year, bucket), count in sorted(report.usage.items()):
            _emit({"kind": "usage", "year": year, "license": bucket, "count": count})
    else:
        print(
            f"edges={report.total_edges} conflicted={report.conflicted_edges} "
            + " ".join(
                f"{ctype.value}={report.edges_with_findings[ctype]}"
                for ctype in ConflictType
            )
            + f" unknown-license={report.unknown_license_edges}"
        )
        for ctype in ConflictType:
            print(f"top {ctype.value} pairs (total {table.totals[ctype]}):")
            for parent, dep, count in table.rows[ctype]:
                print(f"  {parent} -> {dep}: {count}")
        print("usage by year:")
        for (year, bucket), count in sorted(report.usage.items()):
            print(f"  {year} {bucket}: {count}")
    return EXIT_CONFLICTS if report.conflicted_edges else EXIT_OK


def _cmd_explain(args) -> int:
    ctx = _Context(args)
    outcome = normalize(args.license, ctx.aliases, ctx.known)
    from .expression import LicenseRef

    if isinstance(outcome, Unresolvable) or not isinstance(outcome.expr, LicenseRef):
        print(f"cannot resolve {args.license!r} to a single license id", file=sys.stderr)
        return EXIT_UNRESOLVABLE
    profile = ctx.dataset.profiles.get(outcome.expr.id)
    if profile is None:
        print(
            f"{outcome.expr.id} is a known id but has no profile in the dataset",
            file=sys.stderr,
        )
        return EXIT_UNRESOLVABLE
    print(f"spdx-id: {profile.spdx_id}")
    print(f"full-name: {profile.full_name}")
    print(f"copyleft: {profile.copyleft.value}")
    for term in TERM_ORDER:
        print(f"{term.value}: {profile.terms[term].value}")
    if profile.notes:
        print(f"notes: {profile.notes}")
    return EXIT_OK


# --- argument parsing --------------------------------------------------------


def _add_data_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--dataset", help=f"dataset file (default: bundled; ${DATASET_ENV})")
    sub.add_argument("--aliases", help="alias table file (default: bundled)")


def _add_format_flag(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--format",
        choices=("table", "records"),
        default="table",
        help="human table or one JSON record per line",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="licterm",
        description="Term-level license compatibility checking and scanning.",
    )
    parser.add_argument("--version", action="version", version=f"licterm {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("normalize", help="resolve a raw license string")
    p.add_argument("raw")
    _add_data_flags(p)
    p.set_defaults(func=_cmd_normalize)

    p = commands.add_parser("parse-expr", help="parse an SPDX expression")
    p.add_argument("expr")
    p.set_defaults(func=_cmd_parse_expr)

    p = commands.add_parser("check", help="check a parent expression against a dependency")
    p.add_argument("parent")
    p.add_argument("dep")
    p.add_argument("--strict-not-mentioned", action="store_true")
    _add_data_flags(p)
    _add_format_flag(p)
    p.set_defaults(func=_cmd_check)

    p = commands.add_parser("matrix", help="all-pairs conflict counts and degrees")
    p.add_argument("--strict-not-mentioned", action="store_true")
    _add_data_flags(p)
    _add_format_flag(p)
    p.set_defaults(func=_cmd_matrix)

    p = commands.add_parser("mine", help="mine frequent term patterns")
    p.add_argument("--min-support", type=int, default=2)
    p.add_argument("--min-size", type=int, default=1)
    p.add_argument("--jaccard", type=float, default=0.9, help="dedup threshold")
    p.add_argument("--no-dedup", action="store_true")
    _add_data_flags(p)
    _add_format_flag(p)
    p.set_defaults(func=_cmd_mine)

    p = commands.add_parser("ingest", help="build a dependency graph from a snapshot")
    p.add_argument("snapshot")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_ingest)

    p = commands.add_parser("changes", help="license changes across versions")
    p.add_argument("snapshot")
    _add_data_flags(p)
    _add_format_flag(p)
    p.set_defaults(func=_cmd_changes)

    p = commands.add_parser("scan", help="scan a dependency graph for conflicts")
    p.add_argument("graph")
    p.add_argument("--strict-not-mentioned", action="store_true")
    p.add_argument("--top", type=int, default=10)
    _add_data_flags(p)
    _add_format_flag(p)
    p.set_defaults(func=_cmd_scan)

    p = commands.add_parser("explain", help="dump a license profile")
    p.add_argument("license")
    _add_data_flags(p)
    p.set_defaults(func=_cmd_explain)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.func(args)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except (LictermError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_DATA
    if argv is None:  # invoked as a console script
        sys.exit(code)
    return code


if __name__ == "__main__":
    main()
