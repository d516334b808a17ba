import random

import pytest
from hypothesis import given, settings, strategies as st

from licterm.errors import FormatError
from licterm.semver import (
    RangeSyntaxError,
    Semver,
    parse_range,
    resolve_range,
)

from oracles import oracle_resolve, oracle_satisfies


def v(text):
    return Semver.parse(text)


class TestSemverParse:
    def test_basic(self):
        version = v("1.2.3")
        assert version.triple == (1, 2, 3)
        assert version.prerelease == ()

    def test_prerelease_and_build(self):
        version = v("1.2.3-beta.1+build.5")
        assert version.prerelease == ("beta", "1")
        assert version.build == "build.5"
        assert str(version) == "1.2.3-beta.1+build.5"

    @pytest.mark.parametrize("bad", ["1.2", "1", "v1.2.3", "1.2.3.4", "01.2.3", "", "x"])
    def test_rejects_non_semver(self, bad):
        with pytest.raises(FormatError):
            Semver.parse(bad)

    def test_precedence_ordering(self):
        ordering = [
            "1.0.0-alpha",
            "1.0.0-alpha.1",
            "1.0.0-alpha.beta",
            "1.0.0-beta",
            "1.0.0-beta.2",
            "1.0.0-beta.11",
            "1.0.0-rc.1",
            "1.0.0",
            "2.0.0",
            "2.1.0",
            "2.1.1",
        ]
        parsed = [v(t) for t in ordering]
        assert parsed == sorted(parsed)

    def test_build_ignored_in_precedence(self):
        assert v("1.2.3+a") == v("1.2.3+b")
        assert not v("1.2.3+a") < v("1.2.3+b")


class TestRangeExamples:
    def test_caret_picks_highest_in_major(self):
        rng = parse_range("^1.2.3")
        available = [v("1.2.2"), v("1.2.4"), v("1.3.0"), v("2.0.0")]
        assert resolve_range(rng, available) == v("1.3.0")

    def test_tilde_bounds_to_minor(self):
        rng = parse_range("~1.2.3")
        assert resolve_range(rng, [v("1.2.4"), v("1.3.0")]) == v("1.2.4")

    def test_star_over_empty_domain(self):
        assert resolve_range(parse_range("*"), []) is None

    @pytest.mark.parametrize(
        "range_str,versions,expected",
        [
            ("1.2.3", ["1.2.3", "1.2.4"], "1.2.3"),
            ("=1.2.3", ["1.2.3"], "1.2.3"),
            (">=1.2.0 <2.0.0", ["1.1.0", "1.9.9", "2.0.0"], "1.9.9"),
            (">1.0.0", ["1.0.0", "1.0.1"], "1.0.1"),
            ("<=2.0.0", ["2.0.0", "2.0.1"], "2.0.0"),
            ("1.2.x", ["1.2.0", "1.2.9", "1.3.0"], "1.2.9"),
            ("1.x", ["1.9.9", "2.0.0"], "1.9.9"),
            ("1.2", ["1.2.5", "1.3.0"], "1.2.5"),
            ("^0.2.3", ["0.2.4", "0.3.0"], "0.2.4"),
            ("^0.0.3", ["0.0.3", "0.0.4"], "0.0.3"),
            ("^0", ["0.9.1", "1.0.0"], "0.9.1"),
            ("~1", ["1.4.5", "2.0.0"], "1.4.5"),
            ("~1.2", ["1.2.9", "1.3.0"], "1.2.9"),
            ("1.2.3 - 2.3.4", ["1.2.2", "2.3.4", "2.3.5"], "2.3.4"),
            ("1.2.3 || 2.0.0", ["1.2.3", "2.0.0", "3.0.0"], "2.0.0"),
            ("*", ["0.0.1", "4.5.6"], "4.5.6"),
            ("x", ["0.0.1"], "0.0.1"),
            ("", ["1.0.0"], "1.0.0"),
        ],
    )
    def test_examples(self, range_str, versions, expected):
        rng = parse_range(range_str)
        got = resolve_range(rng, [v(t) for t in versions])
        assert got == v(expected)

    def test_no_match(self):
        assert resolve_range(parse_range("^3.0.0"), [v("1.0.0"), v("2.0.0")]) is None

    @pytest.mark.parametrize(
        "bad",
        [
            "latest",
            "git+https://example.com/repo.git",
            "1.2.3 -",
            "- 1.2.3",
            "1.0.0 ||",
            ">*",
            "^1.2.3 - 2.0.0",
            "file:../local",
        ],
    )
    def test_unsupported_forms_raise(self, bad):
        with pytest.raises(RangeSyntaxError):
            parse_range(bad)


class TestPrereleaseRule:
    def test_excluded_by_default(self):
        rng = parse_range("^1.0.0")
        assert resolve_range(rng, [v("1.1.0-beta.1"), v("1.0.5")]) == v("1.0.5")

    def test_allowed_when_range_names_same_triple(self):
        rng = parse_range(">=1.1.0-alpha <2.0.0")
        assert resolve_range(rng, [v("1.1.0-beta.1"), v("1.0.5")]) == v("1.1.0-beta.1")

    def test_not_allowed_for_different_triple(self):
        rng = parse_range(">=1.1.0-alpha")
        # 1.2.0-beta has a different triple than the anchored 1.1.0.
        assert resolve_range(rng, [v("1.2.0-beta")]) is None

    def test_exact_prerelease(self):
        rng = parse_range("1.2.3-beta.1")
        assert resolve_range(rng, [v("1.2.3-beta.1"), v("1.2.3-beta.2")]) == v("1.2.3-beta.1")


def _random_version(rng: random.Random) -> Semver:
    pre = ()
    if rng.random() < 0.25:
        pool = ("alpha", "beta", "rc", "0", "1", "2", "11")
        pre = tuple(rng.choice(pool) for _ in range(rng.randint(1, 2)))
    return Semver(rng.randint(0, 3), rng.randint(0, 4), rng.randint(0, 6), pre)


def _random_range(rng: random.Random) -> str:
    def partial():
        forms = [
            f"{rng.randint(0, 3)}.{rng.randint(0, 4)}.{rng.randint(0, 6)}",
            f"{rng.randint(0, 3)}.{rng.randint(0, 4)}",
            f"{rng.randint(0, 3)}",
            f"{rng.randint(0, 3)}.x",
            f"{rng.randint(0, 3)}.{rng.randint(0, 4)}.x",
            "*",
        ]
        text = rng.choice(forms)
        if rng.random() < 0.2 and text.count(".") == 2 and "x" not in text:
            text += "-" + rng.choice(("alpha", "beta.1", "rc.2"))
        return text

    def simple():
        kind = rng.random()
        if kind < 0.25:
            return rng.choice(("^", "~")) + partial()
        if kind < 0.5:
            return rng.choice((">", ">=", "<", "<=", "=")) + partial()
        if kind < 0.6:
            a = f"{rng.randint(0, 2)}.{rng.randint(0, 4)}.{rng.randint(0, 6)}"
            b = f"{rng.randint(1, 3)}.{rng.randint(0, 4)}.{rng.randint(0, 6)}"
            return f"{a} - {b}"
        return partial()

    conj = " ".join(simple() for _ in range(rng.randint(1, 2)))
    if rng.random() < 0.25:
        return f"{conj} || {simple()}"
    return conj


class TestOracleEquivalence:
    def test_resolve_matches_oracle_seeded_bulk(self):
        rng = random.Random(0x5EED)
        checked = 0
        for _ in range(2000):
            range_str = _random_range(rng)
            try:
                parsed = parse_range(range_str)
            except RangeSyntaxError:
                continue
            available = [_random_version(rng) for _ in range(rng.randint(0, 12))]
            assert resolve_range(parsed, available) == oracle_resolve(parsed, available), (
                range_str,
                [str(a) for a in available],
            )
            checked += 1
        assert checked > 1500

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_satisfies_matches_oracle_hypothesis(self, seed):
        rng = random.Random(seed)
        range_str = _random_range(rng)
        try:
            parsed = parse_range(range_str)
        except RangeSyntaxError:
            return
        for _ in range(10):
            version = _random_version(rng)
            assert parsed.satisfies(version) == oracle_satisfies(parsed, version)
