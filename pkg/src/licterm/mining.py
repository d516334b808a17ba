"""Frequent term-pattern mining over license profiles.

Each license is one transaction whose items are its (term, attitude)
stances, skipping not-mentioned entries. An attitude is part of the
item identity on purpose: "cannot place-warranty" and "can
place-warranty" are different stances and conflating them would merge
licenses that disagree. Mining uses FP-Growth and reports, for every
itemset at or above the support threshold, the exact set of licenses
containing it.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .dataset import Dataset
from .model import Attitude, LicenseProfile, TERM_ORDER, Term


class InvalidThreshold(ValueError):
    pass


@dataclass(frozen=True, order=True)
class TermItem:
    """One (term, attitude) stance; never not-mentioned."""

    term_key: str
    attitude: str

    @classmethod
    def of(cls, term: Term, attitude: Attitude) -> "TermItem":
        return cls(term.value, attitude.value)

    def __str__(self) -> str:
        return f"{self.term_key}={self.attitude}"


@dataclass(frozen=True)
class FrequentPattern:
    items: frozenset[TermItem]
    support_count: int
    supporting_ids: frozenset[str]

    def sorted_items(self) -> tuple[TermItem, ...]:
        return tuple(sorted(self.items))


def profile_items(profile: LicenseProfile) -> frozenset[TermItem]:
    return frozenset(
        TermItem.of(term, attitude)
        for term, attitude in profile.terms.items()
        if attitude is not Attitude.NOT_MENTIONED
    )


# --- FP-tree -----------------------------------------------------------------


class _Node:
    __slots__ = ("item", "count", "parent", "children", "link")

    def __init__(self, item, parent):
        self.item = item
        self.count = 0
        self.parent = parent
        self.children: dict = {}
        self.link = None


class _Tree:
    def __init__(self):
        self.root = _Node(None, None)
        self.heads: dict = {}
        self.tails: dict = {}

    def insert(self, items, count):
        node = self.root
        for item in items:
            child = node.children.get(item)
            if child is None:
                child = _Node(item, node)
                node.children[item] = child
                if item in self.tails:
                    self.tails[item].link = child
                else:
                    self.heads[item] = child
                self.tails[item] = child
            child.count += count
            node = child

    def nodes(self, item):
        node = self.heads.get(item)
        while node is not None:
            yield node
            node = node.link


def _fp_growth(tree: _Tree, suffix: tuple, min_support: int, out: dict) -> None:
    # Walk items in ascending frequency so conditional trees stay small.
    item_supports = {
        item: sum(n.count for n in tree.nodes(item)) for item in tree.heads
    }
    for item in sorted(item_supports, key=lambda it: (item_supports[it], it)):
        support = item_supports[item]
        if support < min_support:
            continue
        pattern = suffix + (item,)
        out[frozenset(pattern)] = support
        conditional = _Tree()
        for node in tree.nodes(item):
            path = []
            parent = node.parent
            while parent is not None and parent.item is not None:
                path.append(parent.item)
                parent = parent.parent
            if path:
                conditional.insert(reversed(path), node.count)
        if conditional.heads:
            _fp_growth(conditional, pattern, min_support, out)


def mine(ds: Dataset, min_support: int) -> list[FrequentPattern]:
    """Every itemset supported by at least ``min_support`` licenses.

    Output is sorted by descending support, ascending itemset size,
    then item spelling, and is independent of profile order. Supporting
    license sets are exact; the itemset search uses FP-Growth.
    """
    if min_support < 1:
        raise InvalidThreshold(f"min_support must be >= 1, got {min_support}")
    transactions = {
        spdx_id: profile_items(profile) for spdx_id, profile in ds.profiles.items()
    }
    inverted: dict[TermItem, set[str]] = defaultdict(set)
    for spdx_id, items in transactions.items():
        for item in items:
            inverted[item].add(spdx_id)
    frequent_items = {
        item for item, ids in inverted.items() if len(ids) >= min_support
    }
    order = {item: (-len(inverted[item]), item) for item in frequent_items}
    tree = _Tree()
    for items in transactions.values():
        kept = sorted((i for i in items if i in frequent_items), key=order.__getitem__)
        if kept:
            tree.insert(kept, 1)
    found: dict[frozenset[TermItem], int] = {}
    _fp_growth(tree, (), min_support, found)

    patterns = []
    for itemset, support in found.items():
        supporting = frozenset(
            set.intersection(*(inverted[item] for item in itemset))
        )
        assert len(supporting) == support, "FP-tree support disagrees with id sets"
        patterns.append(FrequentPattern(itemset, support, supporting))
    patterns.sort(
        key=lambda p: (-p.support_count, len(p.items), p.sorted_items())
    )
    return patterns


def dedup_similar(
    patterns: list[FrequentPattern], jaccard_min: float = 0.9
) -> list[FrequentPattern]:
    """Collapse nested patterns whose supporting sets nearly coincide.

    Scans in the mine() sort order. A pattern is folded into an already
    kept one when their supporting sets have Jaccard similarity at or
    above ``jaccard_min`` (inclusive) and one itemset contains the
    other; the larger itemset survives, so a kept pattern can be
    replaced by a later superset.
    """
    if not 0 < jaccard_min <= 1:
        raise InvalidThreshold(f"jaccard_min must be in (0, 1], got {jaccard_min}")
    kept: list[FrequentPattern] = []
    for pattern in patterns:
        similars = [
            k
            for k in kept
            if (k.items <= pattern.items or pattern.items <= k.items)
            and _jaccard(k.supporting_ids, pattern.supporting_ids) >= jaccard_min
        ]
        if not similars:
            kept.append(pattern)
            continue
        if all(len(k.items) < len(pattern.items) for k in similars):
            kept = [k for k in kept if k not in similars]
            kept.append(pattern)
    return kept


def _jaccard(a: frozenset, b: frozenset) -> float:
    if not a and not b:
        return 1.0
    return len(a & b) / len(a | b)


def common_term_report(ds: Dataset) -> dict[Term, dict[Attitude, int]]:
    """Per-term attitude histogram across the dataset (rows sum to its size)."""
    report = {
        term: {attitude: 0 for attitude in Attitude} for term in TERM_ORDER
    }
    for profile in ds.profiles.values():
        for term in TERM_ORDER:
            report[term][profile.terms[term]] += 1
    return report
