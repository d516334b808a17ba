import pytest

from licterm.conflicts import ConflictType, check_expressions
from licterm.expression import Resolved, normalize
from licterm.registry import build_graph, parse_snapshot_text
from licterm.scan import NO_LICENSE_BUCKET, rank_pairs, scan


def line(pkg, ver, date, license_raw, deps=""):
    return "\t".join((pkg, ver, date, license_raw, deps))


def _scan_text(text, seed_dataset, aliases, strict=False):
    records = parse_snapshot_text(text)
    graph = build_graph(records)
    return scan(graph, records, seed_dataset, strict, aliases), graph, records


class TestScanFixtures:
    def test_single_c1_edge(self, seed_dataset, aliases):
        text = "\n".join(
            [
                line("web-framework", "1.0.0", "2021-01-01", "MIT", "styles@^1.0.0"),
                line("styles", "1.2.0", "2020-06-01", "CC-BY-4.0"),
            ]
        )
        report, _, _ = _scan_text(text, seed_dataset, aliases)
        assert report.total_edges == 1
        assert report.edges_with_findings[ConflictType.C1] == 1
        assert report.edges_with_findings[ConflictType.C3] == 0
        table = rank_pairs(report, 10)
        assert table.rows[ConflictType.C1] == (("MIT", "CC-BY-4.0", 1),)
        assert table.totals[ConflictType.C1] == 1

    def test_single_c2_edge_no_c1_c3(self, seed_dataset, aliases):
        text = "\n".join(
            [
                line("tool", "2.0.0", "2021-01-01", "MIT", "engine@*"),
                line("engine", "5.0.0", "2020-01-01", "Apache-2.0"),
            ]
        )
        report, _, _ = _scan_text(text, seed_dataset, aliases)
        assert report.edges_with_findings[ConflictType.C1] == 0
        assert report.edges_with_findings[ConflictType.C2] == 1
        assert report.edges_with_findings[ConflictType.C3] == 0
        assert report.conflicted_edges == 1

    def test_edge_with_two_types_counted_in_each(self, seed_dataset, aliases):
        text = "\n".join(
            [
                line("tool", "1.0.0", "2021-01-01", "MIT", "lib@1.0.0"),
                line("lib", "1.0.0", "2020-01-01", "GPL-3.0-only"),
            ]
        )
        report, _, _ = _scan_text(text, seed_dataset, aliases)
        assert report.edges_with_findings[ConflictType.C1] == 1
        assert report.edges_with_findings[ConflictType.C2] == 1
        assert report.edges_with_findings[ConflictType.C3] == 1
        assert report.conflicted_edges == 1  # the union counts edges once

    def test_unresolvable_endpoint_is_unknown_edge(self, seed_dataset, aliases):
        text = "\n".join(
            [
                line("a", "1.0.0", "2021-01-01", "SEE LICENSE IN LICENSE.txt", "b@*"),
                line("b", "1.0.0", "2021-01-01", "MIT", "c@*"),
                line("c", "1.0.0", "2021-01-01", "UNLICENSED"),
            ]
        )
        report, _, _ = _scan_text(text, seed_dataset, aliases)
        assert report.total_edges == 2
        assert report.unknown_license_edges == 2
        assert report.conflicted_edges == 0
        assert all(n == 0 for n in report.edges_with_findings.values())

    def test_unknown_id_edge_is_conflict_free_with_warning(self, seed_dataset, aliases):
        text = "\n".join(
            [
                line("a", "1.0.0", "2021-01-01", "MIT", "b@*"),
                line("b", "1.0.0", "2021-01-01", "EPL-2.0"),
            ]
        )
        report, _, _ = _scan_text(text, seed_dataset, aliases)
        assert report.unknown_license_edges == 0
        assert report.conflicted_edges == 0
        assert any("unknown license EPL-2.0" in w for w in report.warnings)

    def test_per_edge_counts_match_recheck(self, seed_dataset, aliases, known):
        text = "\n".join(
            [
                line("app", "1.0.0", "2021-01-01", "MIT", "x@*;y@*;z@*"),
                line("x", "1.0.0", "2020-01-01", "Apache-2.0"),
                line("y", "2.0.0", "2020-01-01", "CC0-1.0"),
                line("z", "3.0.0", "2020-01-01", "MPL-2.0", "x@^1.0.0"),
            ]
        )
        report, graph, records = _scan_text(text, seed_dataset, aliases)
        license_of = {(r.package, str(r.version)): r.license_raw for r in records}
        recheck = {ctype: 0 for ctype in ConflictType}
        for edge in graph.edges:
            parent = normalize(license_of[(edge.package, str(edge.version))], aliases, known)
            dep = normalize(license_of[(edge.dep_package, str(edge.dep_version))], aliases, known)
            assert isinstance(parent, Resolved) and isinstance(dep, Resolved)
            verdict = check_expressions(parent.expr, dep.expr, seed_dataset)
            for ctype in ConflictType:
                if any(f.ctype is ctype for f in verdict.findings):
                    recheck[ctype] += 1
        assert report.edges_with_findings == recheck


class TestUsage:
    def test_latest_version_per_year(self, seed_dataset, aliases):
        text = "\n".join(
            [
                line("pkg", "1.0.0", "2020-02-01", "MIT"),
                line("pkg", "1.1.0", "2020-09-01", "ISC"),
                line("pkg", "2.0.0", "2021-03-01", "ISC"),
                line("other", "0.1.0", "2020-05-05", "UNLICENSED"),
            ]
        )
        report, _, _ = _scan_text(text, seed_dataset, aliases)
        assert report.usage == {
            (2020, "ISC"): 1,
            (2020, NO_LICENSE_BUCKET): 1,
            (2021, "ISC"): 1,
        }

    def test_publish_date_wins_over_semver_within_year(self, seed_dataset, aliases):
        # A backported patch published later in the year is still the
        # year's latest release.
        text = "\n".join(
            [
                line("pkg", "2.0.0", "2020-03-01", "MIT"),
                line("pkg", "1.9.9", "2020-11-01", "ISC"),
            ]
        )
        report, _, _ = _scan_text(text, seed_dataset, aliases)
        assert report.usage == {(2020, "ISC"): 1}

    def test_expression_bucket_uses_canonical_rendering(self, seed_dataset, aliases):
        text = line("pkg", "1.0.0", "2020-01-01", "(mit or apache-2.0)")
        report, _, _ = _scan_text(text, seed_dataset, aliases)
        assert report.usage == {(2020, "MIT OR Apache-2.0"): 1}


class TestRankPairs:
    def test_k_larger_than_pairs(self, seed_dataset, aliases):
        text = "\n".join(
            [
                line("a", "1.0.0", "2021-01-01", "MIT", "b@*"),
                line("b", "1.0.0", "2021-01-01", "Apache-2.0"),
            ]
        )
        report, _, _ = _scan_text(text, seed_dataset, aliases)
        table = rank_pairs(report, 50)
        assert table.rows[ConflictType.C2] == (("MIT", "Apache-2.0", 1),)

    def test_empty_report(self, seed_dataset, aliases):
        report, _, _ = _scan_text(
            line("solo", "1.0.0", "2021-01-01", "MIT"), seed_dataset, aliases
        )
        table = rank_pairs(report, 10)
        for ctype in ConflictType:
            assert table.rows[ctype] == ()
            assert table.totals[ctype] == 0

    def test_rank_by_count_then_name(self, seed_dataset, aliases):
        rows = [
            line("a1", "1.0.0", "2021-01-01", "MIT", "apache1@*;apache2@*"),
            line("a2", "1.0.0", "2021-01-01", "MIT", "apache1@*"),
            line("b1", "1.0.0", "2021-01-01", "ISC", "apache1@*"),
            line("apache1", "1.0.0", "2020-01-01", "Apache-2.0"),
            line("apache2", "1.0.0", "2020-01-01", "Apache-2.0"),
        ]
        report, _, _ = _scan_text("\n".join(rows), seed_dataset, aliases)
        table = rank_pairs(report, 10)
        assert table.rows[ConflictType.C2] == (
            ("MIT", "Apache-2.0", 3),
            ("ISC", "Apache-2.0", 1),
        )

    def test_invalid_k(self, seed_dataset, aliases):
        report, _, _ = _scan_text(
            line("solo", "1.0.0", "2021-01-01", "MIT"), seed_dataset, aliases
        )
        with pytest.raises(ValueError):
            rank_pairs(report, 0)


def test_scan_deterministic(seed_dataset, aliases):
    text = "\n".join(
        [
            line("a", "1.0.0", "2021-01-01", "MIT", "b@*;c@*"),
            line("b", "1.0.0", "2021-01-01", "Apache-2.0"),
            line("c", "1.0.0", "2021-01-01", "GPL-3.0-only"),
        ]
    )
    first, _, _ = _scan_text(text, seed_dataset, aliases)
    second, _, _ = _scan_text(text, seed_dataset, aliases)
    assert first == second
