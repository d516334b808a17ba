"""Offline registry snapshots: parsing, dependency resolution, license changes.

Snapshot format: plain UTF-8 text, one version record per line, five
tab-separated fields::

    package<TAB>version<TAB>published<TAB>license_raw<TAB>dependencies

``published`` is an ISO calendar date (YYYY-MM-DD). ``dependencies``
is ``;``-joined ``name@range`` entries (the range follows the last
``@``, so scoped names like ``@scope/pkg`` work) and may be empty.
``license_raw`` may be empty and may not contain tabs. Lines starting
with ``#`` and blank lines are skipped. Parsing is strict; a repeated
(package, version) is an error.

The dependency graph materializes one edge per resolvable direct
dependency; failures are kept as data with their reason rather than
dropped. The graph file written by ``ingest`` repeats the node
metadata so a scan can run from the graph file alone.
"""

from __future__ import annotations

import datetime as _dt
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING

from .errors import DuplicateVersionError, FormatError
from .expression import (
    KnownLicenses,
    NormalizationOutcome,
    Resolved,
    Unresolvable,
    expression_ids,
    normalize,
    render,
)
from .semver import RangeSyntaxError, Semver, parse_range, resolve_range

if TYPE_CHECKING:  # pragma: no cover
    from .dataset import AliasTable


@dataclass(frozen=True)
class VersionRecord:
    package: str
    version: Semver
    published: _dt.date
    license_raw: str
    dependencies: tuple[tuple[str, str], ...]  # (name, range string)


@dataclass(frozen=True)
class Edge:
    package: str
    version: Semver
    dep_package: str
    dep_version: Semver
    range: str


@dataclass(frozen=True)
class Unresolved:
    package: str
    version: Semver
    dep_name: str
    range: str
    reason: str  # unknown-package | no-match | unparsable-range


@dataclass(frozen=True)
class DependencyGraph:
    nodes: frozenset[tuple[str, Semver]]
    edges: tuple[Edge, ...]
    unresolved: tuple[Unresolved, ...]


def _parse_dependencies(text: str, source: str, lineno: int):
    deps = []
    if not text:
        return tuple(deps)
    for entry in text.split(";"):
        entry = entry.strip()
        if not entry:
            continue
        name, sep, range_str = entry.rpartition("@")
        if not sep or not name:
            raise FormatError(
                f"dependency entry {entry!r} is not name@range", source=source, line=lineno
            )
        deps.append((name, range_str.strip()))
    return tuple(deps)


def parse_snapshot(path: str | Path) -> list[VersionRecord]:
    path = Path(path)
    return parse_snapshot_text(path.read_text(encoding="utf-8"), source=str(path))


def parse_snapshot_text(text: str, source: str = "<string>") -> list[VersionRecord]:
    records: list[VersionRecord] = []
    seen: set[tuple[str, str]] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 5:
            raise FormatError(
                f"expected 5 tab-separated fields, got {len(fields)}",
                source=source,
                line=lineno,
            )
        package, version_str, published_str, license_raw, deps_str = fields
        package = package.strip()
        if not package:
            raise FormatError("empty package name", source=source, line=lineno)
        try:
            version = Semver.parse(version_str)
        except FormatError as exc:
            raise FormatError(str(exc), source=source, line=lineno) from None
        try:
            published = _dt.date.fromisoformat(published_str.strip())
        except ValueError:
            raise FormatError(
                f"invalid date {published_str!r}", source=source, line=lineno
            ) from None
        key = (package, str(version))
        if key in seen:
            raise DuplicateVersionError(
                f"duplicate record for {package}@{version}", source=source, line=lineno
            )
        seen.add(key)
        records.append(
            VersionRecord(
                package,
                version,
                published,
                license_raw.strip(),
                _parse_dependencies(deps_str.strip(), source, lineno),
            )
        )
    return records


def build_graph(records: list[VersionRecord]) -> DependencyGraph:
    """Resolve every dependency range against the snapshot's own versions.

    Deterministic and independent of record order: edges come out
    sorted, and each range resolves against all versions of the target
    package present in the snapshot.
    """
    versions_by_package: dict[str, list[Semver]] = defaultdict(list)
    for record in records:
        versions_by_package[record.package].append(record.version)
    edges: list[Edge] = []
    unresolved: list[Unresolved] = []
    for record in records:
        for name, range_str in record.dependencies:
            if name not in versions_by_package:
                unresolved.append(
                    Unresolved(record.package, record.version, name, range_str, "unknown-package")
                )
                continue
            try:
                rng = parse_range(range_str)
            except RangeSyntaxError:
                unresolved.append(
                    Unresolved(record.package, record.version, name, range_str, "unparsable-range")
                )
                continue
            target = resolve_range(rng, versions_by_package[name])
            if target is None:
                unresolved.append(
                    Unresolved(record.package, record.version, name, range_str, "no-match")
                )
            else:
                edges.append(Edge(record.package, record.version, name, target, range_str))
    return DependencyGraph(
        nodes=frozenset((r.package, r.version) for r in records),
        edges=tuple(
            sorted(edges, key=lambda e: (e.package, e.version, e.dep_package, e.dep_version, e.range))
        ),
        unresolved=tuple(
            sorted(unresolved, key=lambda u: (u.package, u.version, u.dep_name, u.range))
        ),
    )


# ---------------------------------------------------------------------------
# License change detection
# ---------------------------------------------------------------------------

_PERMISSIVE_CLASSES = {"none"}


@dataclass(frozen=True)
class LicenseChange:
    package: str
    from_outcome: NormalizationOutcome
    to_outcome: NormalizationOutcome
    at_version: Semver
    classification: str


def _outcome_key(outcome: NormalizationOutcome):
    """Identity for change detection: canonical expression, or the
    unresolvable reason bucket (statement forms carry no license content,
    so two file references are "the same license" for this purpose)."""
    if isinstance(outcome, Resolved):
        return ("resolved", render(outcome.expr))
    return ("unresolvable", outcome.reason.value)


def _classify(
    from_outcome: NormalizationOutcome,
    to_outcome: NormalizationOutcome,
    known: KnownLicenses,
) -> str:
    if isinstance(from_outcome, Unresolvable) or isinstance(to_outcome, Unresolvable):
        return "involving-unresolvable"

    def side(outcome: Resolved) -> str:
        classes = {known.copyleft_of(i) for i in expression_ids(outcome.expr)}
        return "copyleft" if classes - _PERMISSIVE_CLASSES else "permissive"

    return f"{side(from_outcome)}-to-{side(to_outcome)}"


def license_changes(
    records: list[VersionRecord],
    aliases: "AliasTable | None",
    known: KnownLicenses,
) -> list[LicenseChange]:
    """Changes of normalized license between consecutive versions.

    Versions are ordered by semver precedence with publish date as the
    tie breaker. Changes of statement only (raw text differs, same
    normalized license) are suppressed; a change touching an
    unresolvable license is emitted as involving-unresolvable.
    """
    by_package: dict[str, list[VersionRecord]] = defaultdict(list)
    for record in records:
        by_package[record.package].append(record)
    cache: dict[str, NormalizationOutcome] = {}

    def normalized(raw: str) -> NormalizationOutcome:
        if raw not in cache:
            cache[raw] = normalize(raw, aliases, known)
        return cache[raw]

    changes: list[LicenseChange] = []
    for package in sorted(by_package):
        chain = sorted(by_package[package], key=lambda r: (r.version, r.published))
        for prev, curr in zip(chain, chain[1:]):
            before = normalized(prev.license_raw)
            after = normalized(curr.license_raw)
            if _outcome_key(before) == _outcome_key(after):
                continue
            changes.append(
                LicenseChange(
                    package=package,
                    from_outcome=before,
                    to_outcome=after,
                    at_version=curr.version,
                    classification=_classify(before, after, known),
                )
            )
    return changes


# ---------------------------------------------------------------------------
# Graph file persistence
# ---------------------------------------------------------------------------

GRAPH_HEADER = "#% licterm-graph 1"


def write_graph(
    graph: DependencyGraph, records: list[VersionRecord], path: str | Path
) -> None:
    """Persist the graph with enough node metadata to scan it later."""
    by_key = {(r.package, r.version): r for r in records}
    lines = [GRAPH_HEADER]
    for package, version in sorted(graph.nodes, key=lambda n: (n[0], n[1])):
        record = by_key[(package, version)]
        lines.append(
            "\t".join(
                ("node", package, str(version), record.published.isoformat(), record.license_raw)
            )
        )
    for e in graph.edges:
        lines.append(
            "\t".join(
                ("edge", e.package, str(e.version), e.dep_package, str(e.dep_version), e.range)
            )
        )
    for u in graph.unresolved:
        lines.append(
            "\t".join(("unresolved", u.package, str(u.version), u.dep_name, u.range, u.reason))
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_graph(path: str | Path) -> tuple[DependencyGraph, list[VersionRecord]]:
    """Load a graph file; the returned records carry no dependency lists."""
    source = str(path)
    text = Path(path).read_text(encoding="utf-8")
    records: list[VersionRecord] = []
    edges: list[Edge] = []
    unresolved: list[Unresolved] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        kind = fields[0]
        if kind == "node" and len(fields) == 5:
            try:
                version = Semver.parse(fields[2])
                published = _dt.date.fromisoformat(fields[3])
            except (FormatError, ValueError) as exc:
                raise FormatError(str(exc), source=source, line=lineno) from None
            records.append(VersionRecord(fields[1], version, published, fields[4], ()))
        elif kind == "edge" and len(fields) == 6:
            edges.append(
                Edge(fields[1], Semver.parse(fields[2]), fields[3], Semver.parse(fields[4]), fields[5])
            )
        elif kind == "unresolved" and len(fields) == 6:
            unresolved.append(
                Unresolved(fields[1], Semver.parse(fields[2]), fields[3], fields[4], fields[5])
            )
        else:
            raise FormatError(f"unrecognized line kind {kind!r}", source=source, line=lineno)
    graph = DependencyGraph(
        nodes=frozenset((r.package, r.version) for r in records),
        edges=tuple(edges),
        unresolved=tuple(unresolved),
    )
    return graph, records
