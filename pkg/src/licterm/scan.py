"""Apply conflict checking across a dependency graph and aggregate reports.

Every edge is checked independently: the dependent's raw license is the
parent side and the target's is the dependency side, both normalized
first. An edge with an unresolvable license on either side lands in
``unknown_license_edges`` and is never counted as a conflict. The
aggregation adds no findings of its own; counts are exactly what
per-edge checking produces.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .conflicts import ConflictType, check_expressions
from .dataset import Dataset, bundled_known_ids, known_licenses
from .expression import (
    KnownLicenses,
    NormalizationOutcome,
    Resolved,
    Unresolvable,
    UnresolvableReason,
    normalize,
    render,
)
from .registry import DependencyGraph, VersionRecord

if TYPE_CHECKING:  # pragma: no cover
    from .dataset import AliasTable

#: Usage bucket for packages that declare no license at all.
NO_LICENSE_BUCKET = "no-license"


@dataclass(frozen=True)
class ScanReport:
    total_edges: int
    edges_with_findings: dict[ConflictType, int]
    conflicted_edges: int  # distinct edges with at least one finding of any type
    unknown_license_edges: int
    top_pairs: dict[ConflictType, Counter]  # (parent expr, dep expr) -> edge count
    usage: dict[tuple[int, str], int]  # (year, license bucket) -> package count
    warnings: tuple[str, ...]


def _usage_bucket(outcome: NormalizationOutcome) -> str:
    if isinstance(outcome, Resolved):
        return render(outcome.expr)
    if outcome.reason is UnresolvableReason.NO_LICENSE:
        return NO_LICENSE_BUCKET
    return f"unresolvable:{outcome.reason.value}"


def _yearly_usage(
    records: list[VersionRecord], outcome_of: dict[str, NormalizationOutcome]
) -> dict[tuple[int, str], int]:
    """Count each package once per year via its latest version that year."""
    latest: dict[tuple[str, int], VersionRecord] = {}
    for record in records:
        key = (record.package, record.published.year)
        cur = latest.get(key)
        if cur is None or (record.published, record.version) > (cur.published, cur.version):
            latest[key] = record
    usage: dict[tuple[int, str], int] = defaultdict(int)
    for (package, year), record in latest.items():
        usage[(year, _usage_bucket(outcome_of[record.license_raw]))] += 1
    return dict(usage)


def scan(
    graph: DependencyGraph,
    records: list[VersionRecord],
    ds: Dataset,
    strict_not_mentioned: bool = False,
    aliases: "AliasTable | None" = None,
    known: KnownLicenses | None = None,
) -> ScanReport:
    """Check every edge of the graph and aggregate ecosystem statistics."""
    if known is None:
        known = known_licenses(ds, bundled_known_ids())
    outcome_of: dict[str, NormalizationOutcome] = {}
    license_of: dict[tuple[str, str], str] = {}
    for record in records:
        license_of[(record.package, str(record.version))] = record.license_raw
        if record.license_raw not in outcome_of:
            outcome_of[record.license_raw] = normalize(record.license_raw, aliases, known)

    edges_with = {ctype: 0 for ctype in ConflictType}
    top_pairs: dict[ConflictType, Counter] = {ctype: Counter() for ctype in ConflictType}
    conflicted = 0
    unknown_edges = 0
    warnings: list[str] = []
    seen_warnings: set[str] = set()
    for edge in graph.edges:
        parent_raw = license_of[(edge.package, str(edge.version))]
        dep_raw = license_of[(edge.dep_package, str(edge.dep_version))]
        parent_outcome = outcome_of[parent_raw]
        dep_outcome = outcome_of[dep_raw]
        if isinstance(parent_outcome, Unresolvable) or isinstance(dep_outcome, Unresolvable):
            unknown_edges += 1
            continue
        verdict = check_expressions(
            parent_outcome.expr, dep_outcome.expr, ds, strict_not_mentioned
        )
        for warning in verdict.warnings:
            if warning not in seen_warnings:
                seen_warnings.add(warning)
                warnings.append(warning)
        if not verdict.findings:
            continue
        conflicted += 1
        pair = (render(parent_outcome.expr), render(dep_outcome.expr))
        for ctype in ConflictType:
            if any(f.ctype is ctype for f in verdict.findings):
                edges_with[ctype] += 1
                top_pairs[ctype][pair] += 1
    return ScanReport(
        total_edges=len(graph.edges),
        edges_with_findings=edges_with,
        conflicted_edges=conflicted,
        unknown_license_edges=unknown_edges,
        top_pairs=top_pairs,
        usage=_yearly_usage(records, outcome_of),
        warnings=tuple(warnings),
    )


@dataclass(frozen=True)
class PairTable:
    rows: dict[ConflictType, tuple[tuple[str, str, int], ...]]
    totals: dict[ConflictType, int]


def rank_pairs(report: ScanReport, k: int = 10) -> PairTable:
    """Per-type top-k (parent, dep, count) rows plus per-type totals.

    Rows sort by descending count, then pair spelling; the totals row
    covers all conflicted edges of the type, not only the top k.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    rows: dict[ConflictType, tuple[tuple[str, str, int], ...]] = {}
    for ctype in ConflictType:
        ranked = sorted(
            report.top_pairs[ctype].items(), key=lambda item: (-item[1], item[0])
        )
        rows[ctype] = tuple(
            (parent, dep, count) for (parent, dep), count in ranked[:k]
        )
    totals = {ctype: report.edges_with_findings[ctype] for ctype in ConflictType}
    return PairTable(rows=rows, totals=totals)
