import random

import pytest
from hypothesis import given, settings, strategies as st

from licterm.dataset import Dataset
from licterm.mining import (
    FrequentPattern,
    InvalidThreshold,
    TermItem,
    common_term_report,
    dedup_similar,
    mine,
    profile_items,
)
from licterm.model import Attitude, CopyleftClass, LicenseProfile, TERM_ORDER, make_terms

from oracles import oracle_mine


def _profile(spdx_id, **attitudes):
    return LicenseProfile(
        spdx_id, spdx_id, make_terms(**attitudes), CopyleftClass.NONE
    )


def _ds(*profiles):
    return Dataset(profiles={p.spdx_id: p for p in profiles})


def _as_oracle_input(ds):
    return {i: set(profile_items(p)) for i, p in ds.profiles.items()}


THREE_PROFILE_FIXTURE = _ds(
    _profile("A", distribute="can", sublicense="can"),
    _profile("B", distribute="can", sublicense="can"),
    _profile("C", distribute="can"),
)

D_CAN = TermItem("distribute", "can")
SUB_CAN = TermItem("sublicense", "can")


class TestMine:
    def test_three_profile_fixture_frozen(self):
        # Expected values enumerated by hand over the fixture.
        patterns = mine(THREE_PROFILE_FIXTURE, min_support=2)
        assert [
            (p.sorted_items(), p.support_count, set(p.supporting_ids)) for p in patterns
        ] == [
            ((D_CAN,), 3, {"A", "B", "C"}),
            ((SUB_CAN,), 2, {"A", "B"}),
            ((D_CAN, SUB_CAN), 2, {"A", "B"}),
        ]

    def test_min_support_one_equals_exhaustive_oracle(self):
        patterns = mine(THREE_PROFILE_FIXTURE, min_support=1)
        expected = oracle_mine(_as_oracle_input(THREE_PROFILE_FIXTURE), 1)
        assert {p.items: p.supporting_ids for p in patterns} == expected

    def test_invalid_threshold(self):
        with pytest.raises(InvalidThreshold):
            mine(THREE_PROFILE_FIXTURE, min_support=0)

    def test_no_shared_items(self):
        ds = _ds(
            _profile("A", distribute="can"),
            _profile("B", modify="can"),
        )
        assert mine(ds, min_support=2) == []
        singles = mine(ds, min_support=1)
        assert {p.sorted_items() for p in singles} == {
            (TermItem("distribute", "can"),),
            (TermItem("modify", "can"),),
        }

    def test_attitude_distinguishes_items(self):
        ds = _ds(
            _profile("A", place_warranty="can"),
            _profile("B", place_warranty="cannot"),
        )
        patterns = mine(ds, min_support=1)
        assert {str(p.sorted_items()[0]) for p in patterns} == {
            "place-warranty=can",
            "place-warranty=cannot",
        }
        assert mine(ds, min_support=2) == []

    def test_order_independent(self):
        profiles = list(THREE_PROFILE_FIXTURE.profiles.values())
        shuffled = Dataset(profiles={p.spdx_id: p for p in reversed(profiles)})
        assert mine(THREE_PROFILE_FIXTURE, 1) == mine(shuffled, 1)

    def test_sorted_output_contract(self, seed_dataset):
        patterns = mine(seed_dataset, min_support=10)
        keys = [(-p.support_count, len(p.items), p.sorted_items()) for p in patterns]
        assert keys == sorted(keys)

    def test_anti_monotonicity_on_seed(self, seed_dataset):
        patterns = mine(seed_dataset, min_support=12)
        by_items = {p.items: p.support_count for p in patterns}
        for pattern in patterns:
            for item in pattern.items:
                if len(pattern.items) == 1:
                    continue
                subset = pattern.items - {item}
                assert subset in by_items
                assert by_items[subset] >= pattern.support_count

    def test_random_datasets_equal_oracle_seeded(self):
        rng = random.Random(2718)
        for round_no in range(15):
            n = rng.randint(1, 8)
            ds = Dataset(
                profiles={
                    f"L{i}": _restricted_random_profile(rng, f"L{i}") for i in range(n)
                }
            )
            min_support = rng.randint(1, max(1, n))
            got = {
                p.items: p.supporting_ids for p in mine(ds, min_support)
            }
            assert got == oracle_mine(_as_oracle_input(ds), min_support)

    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_random_datasets_equal_oracle_hypothesis(self, data):
        seed = data.draw(st.integers(0, 2**32 - 1))
        rng = random.Random(seed)
        n = rng.randint(1, 6)
        ds = Dataset(
            profiles={f"L{i}": _restricted_random_profile(rng, f"L{i}") for i in range(n)}
        )
        min_support = rng.randint(1, n)
        got = {p.items: p.supporting_ids for p in mine(ds, min_support)}
        assert got == oracle_mine(_as_oracle_input(ds), min_support)


def _restricted_random_profile(rng, spdx_id):
    """Random profile over a 6-term sub-vocabulary, so the itemset
    universe stays within exhaustive-oracle reach (<= 12 items)."""
    kwargs = {}
    for key, choices in (
        ("distribute", ("can", "cannot")),
        ("modify", ("can", "cannot")),
        ("sublicense", ("can", "cannot")),
        ("include_copyright", ("must",)),
        ("include_license", ("must",)),
        ("state_changes", ("must",)),
    ):
        if rng.random() < 0.6:
            kwargs[key] = rng.choice(choices)
    return _profile(spdx_id, **kwargs)


def _pattern(items, ids):
    return FrequentPattern(
        frozenset(items), len(ids), frozenset(ids)
    )


class TestDedup:
    def test_identical_support_nested_items_keeps_larger(self):
        small = _pattern([D_CAN], {"A", "B"})
        large = _pattern([D_CAN, SUB_CAN], {"A", "B"})
        survivors = dedup_similar([small, large], jaccard_min=0.9)
        assert survivors == [large]

    def test_disjoint_supports_both_kept(self):
        one = _pattern([D_CAN], {"A", "B"})
        other = _pattern([D_CAN, SUB_CAN], {"C", "D"})
        assert dedup_similar([one, other], 0.9) == [one, other]

    def test_unrelated_itemsets_not_merged_even_if_supports_match(self):
        one = _pattern([D_CAN], {"A", "B"})
        other = _pattern([SUB_CAN], {"A", "B"})
        assert dedup_similar([one, other], 0.9) == [one, other]

    def test_boundary_is_inclusive(self):
        # Jaccard exactly 0.9: the larger pattern's 9 supporters sit
        # inside the smaller pattern's 10.
        base = frozenset(f"L{i}" for i in range(9))
        small = _pattern([D_CAN], base | {"X"})
        large = _pattern([D_CAN, SUB_CAN], base)
        survivors = dedup_similar([small, large], jaccard_min=0.9)
        assert survivors == [large]
        kept_both = dedup_similar([small, large], jaccard_min=0.95)
        assert kept_both == [small, large]

    def test_invalid_jaccard(self):
        with pytest.raises(InvalidThreshold):
            dedup_similar([], 0.0)
        with pytest.raises(InvalidThreshold):
            dedup_similar([], 1.5)


class TestCommonTermReport:
    def test_rows_sum_to_dataset_size(self, seed_dataset):
        report = common_term_report(seed_dataset)
        assert set(report) == set(TERM_ORDER)
        for term, row in report.items():
            assert sum(row.values()) == len(seed_dataset)

    def test_single_license_dataset(self, seed_dataset):
        ds = _ds(seed_dataset.profiles["MIT"])
        report = common_term_report(ds)
        for term, row in report.items():
            nonzero = [a for a, n in row.items() if n]
            assert len(nonzero) == 1

    def test_matches_manual_count(self, seed_dataset):
        from licterm.model import Term

        report = common_term_report(seed_dataset)
        manual = sum(
            1
            for p in seed_dataset.profiles.values()
            if p.terms[Term.DISTRIBUTE] is Attitude.CAN
        )
        assert report[Term.DISTRIBUTE][Attitude.CAN] == manual
        assert manual == 25  # every seed license grants distribution
