"""Conflict detection between license profiles and license expressions.

Three directed rules, always evaluated from a parent (the depending
project) toward a dependency (the component it uses):

* C1, rights: the parent permits a right the dependency forbids
  (parent ``can``, dependency ``cannot``). In strict mode a dependency
  silence (``not-mentioned``) also counts, treating unmentioned rights
  as not granted.
* C2, obligations: the parent does not require an obligation the
  dependency requires (parent ``not-mentioned``, dependency ``must``).
* C3, copyleft: a copyleft dependency grants a right the parent fails
  to preserve (dependency ``can`` while the parent attitude is not
  ``can``). Copyleft licenses demand that granted rights survive in
  derivative works, so this is a violation rather than a latent risk.

A must-versus-cannot conflict cannot exist in this model: rights never
take ``must`` and obligations never take ``cannot``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .dataset import Dataset
from .expression import And, LicenseExpression, LicenseRef, Or, render
from .model import (
    Attitude,
    CopyleftClass,
    LicenseProfile,
    OBLIGATION_TERMS,
    RIGHT_TERMS,
    Term,
)


class ConflictType(Enum):
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"


@dataclass(frozen=True)
class ConflictFinding:
    """One conflicting term between an ordered pair of licenses."""

    ctype: ConflictType
    term: Term
    parent_id: str
    dep_id: str
    parent_attitude: Attitude
    dep_attitude: Attitude


def check_profiles(
    parent: LicenseProfile,
    dep: LicenseProfile,
    strict_not_mentioned: bool = False,
    *,
    c3_explicit_cannot_only: bool = False,
) -> list[ConflictFinding]:
    """All C1/C2/C3 findings for parent depending on dep.

    Findings are ordered by conflict type, then term catalog order.
    ``strict_not_mentioned`` extends C1 to rights the dependency never
    mentions; off by default because community opinion is split on
    whether silence denies a right. ``c3_explicit_cannot_only`` narrows
    C3 to rights the parent explicitly forbids; the default also fires
    when the parent is silent, since an unmentioned right is not a
    preserved right.
    """
    findings: list[ConflictFinding] = []
    for term in RIGHT_TERMS:
        pa, da = parent.terms[term], dep.terms[term]
        if pa is Attitude.CAN and (
            da is Attitude.CANNOT
            or (strict_not_mentioned and da is Attitude.NOT_MENTIONED)
        ):
            findings.append(
                ConflictFinding(ConflictType.C1, term, parent.spdx_id, dep.spdx_id, pa, da)
            )
    for term in OBLIGATION_TERMS:
        pa, da = parent.terms[term], dep.terms[term]
        if pa is Attitude.NOT_MENTIONED and da is Attitude.MUST:
            findings.append(
                ConflictFinding(ConflictType.C2, term, parent.spdx_id, dep.spdx_id, pa, da)
            )
    if dep.copyleft is not CopyleftClass.NONE:
        for term in RIGHT_TERMS:
            pa, da = parent.terms[term], dep.terms[term]
            if da is not Attitude.CAN or pa is Attitude.CAN:
                continue
            if c3_explicit_cannot_only and pa is not Attitude.CANNOT:
                continue
            findings.append(
                ConflictFinding(ConflictType.C3, term, parent.spdx_id, dep.spdx_id, pa, da)
            )
    return findings


def explain(finding: ConflictFinding) -> str:
    """Deterministic one-sentence explanation of a finding."""
    term = finding.term.value
    if finding.ctype is ConflictType.C1:
        detail = (
            f"parent {finding.parent_id} permits the right '{term}' "
            f"({finding.parent_attitude.value}) that dependency {finding.dep_id} "
            f"does not grant ({finding.dep_attitude.value})"
        )
    elif finding.ctype is ConflictType.C2:
        detail = (
            f"parent {finding.parent_id} does not require the obligation '{term}' "
            f"({finding.parent_attitude.value}) that dependency {finding.dep_id} "
            f"requires ({finding.dep_attitude.value})"
        )
    else:
        detail = (
            f"parent {finding.parent_id} fails to preserve the right '{term}' "
            f"({finding.parent_attitude.value}) granted by copyleft dependency "
            f"{finding.dep_id} ({finding.dep_attitude.value})"
        )
    return f"{finding.ctype.value} conflict: {detail}."


# ---------------------------------------------------------------------------
# Expression-level checking
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExpressionVerdict:
    """Outcome of checking a parent expression against a dependency expression.

    ``parent_resolved`` and ``dep_resolved`` render the branch choices
    that minimize findings (OR nodes are a licensee's choice). Ids
    missing from the dataset appear in ``unknown_ids`` and contribute
    no findings.
    """

    findings: tuple[ConflictFinding, ...]
    unknown_ids: tuple[str, ...]
    warnings: tuple[str, ...]
    parent_resolved: str
    dep_resolved: str

    @property
    def conflict_free(self) -> bool:
        return not self.findings


@dataclass
class _Partial:
    findings: list[ConflictFinding]
    unknown: set[str]
    warnings: list[str]
    parent_choice: LicenseExpression
    dep_choice: LicenseExpression

    @staticmethod
    def merge(a: "_Partial", b: "_Partial", parent_choice, dep_choice) -> "_Partial":
        return _Partial(
            a.findings + b.findings,
            a.unknown | b.unknown,
            a.warnings + b.warnings,
            parent_choice,
            dep_choice,
        )


def _check_leaves(
    parent: LicenseRef, dep: LicenseRef, ds: Dataset, strict: bool
) -> _Partial:
    warnings: list[str] = []
    unknown: set[str] = set()
    for ref in (parent, dep):
        if ref.exception:
            warnings.append(
                f"exception {ref.exception} on {ref.id} is not modeled; "
                "checked against the base license"
            )
    p_profile = ds.profiles.get(parent.id)
    d_profile = ds.profiles.get(dep.id)
    for ref, profile in ((parent, p_profile), (dep, d_profile)):
        if profile is None:
            unknown.add(ref.id)
            warnings.append(f"unknown license {ref.id}: treated as conflict-free")
    findings: list[ConflictFinding] = []
    if p_profile is not None and d_profile is not None:
        findings = check_profiles(p_profile, d_profile, strict)
        if (
            p_profile.copyleft is not CopyleftClass.NONE
            and d_profile.copyleft is not CopyleftClass.NONE
        ):
            warnings.append(
                f"both {parent.id} and {dep.id} are copyleft; same-license "
                "propagation between copyleft licenses is not assessed"
            )
    return _Partial(findings, unknown, warnings, parent, dep)


def _better(a: _Partial, b: _Partial) -> _Partial:
    return b if len(b.findings) < len(a.findings) else a


def _check_pair(
    parent: LicenseExpression, dep: LicenseExpression, ds: Dataset, strict: bool
) -> _Partial:
    # OR is a choice: resolve it before splitting conjunctions so one
    # branch serves every conjunct on the other side.
    if isinstance(parent, Or):
        return _better(
            _check_pair(parent.left, dep, ds, strict),
            _check_pair(parent.right, dep, ds, strict),
        )
    if isinstance(dep, Or):
        return _better(
            _check_pair(parent, dep.left, ds, strict),
            _check_pair(parent, dep.right, ds, strict),
        )
    if isinstance(parent, And):
        left = _check_pair(parent.left, dep, ds, strict)
        right = _check_pair(parent.right, dep, ds, strict)
        return _Partial.merge(
            left, right, And(left.parent_choice, right.parent_choice), left.dep_choice
        )
    if isinstance(dep, And):
        left = _check_pair(parent, dep.left, ds, strict)
        right = _check_pair(parent, dep.right, ds, strict)
        return _Partial.merge(
            left, right, left.parent_choice, And(left.dep_choice, right.dep_choice)
        )
    return _check_leaves(parent, dep, ds, strict)


def _dedupe(items):
    seen = set()
    out = []
    for item in items:
        if item not in seen:
            seen.add(item)
            out.append(item)
    return out


def check_expressions(
    parent: LicenseExpression,
    dep: LicenseExpression,
    ds: Dataset,
    strict_not_mentioned: bool = False,
) -> ExpressionVerdict:
    """Lift profile checking to expressions.

    OR means the licensee may pick either branch, so a node is conflict
    free if any branch is, and the verdict reports the branch choice
    with the fewest findings. AND requires every branch to be conflict
    free.
    """
    result = _check_pair(parent, dep, ds, strict_not_mentioned)
    return ExpressionVerdict(
        findings=tuple(result.findings),
        unknown_ids=tuple(sorted(result.unknown)),
        warnings=tuple(_dedupe(result.warnings)),
        parent_resolved=render(result.parent_choice),
        dep_resolved=render(result.dep_choice),
    )


# ---------------------------------------------------------------------------
# All-pairs conflict matrix
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConflictMatrix:
    """Ordered-pair conflict counts plus per-license conflict degrees.

    ``c1_pairs`` counts ordered (parent, dep) pairs with at least one C1
    finding, and likewise for the other types; a pair is counted once
    per type no matter how many terms conflict. A license's degree for
    a type is the number of distinct other licenses it conflicts with
    in either direction.
    """

    c1_pairs: int
    c2_pairs: int
    c3_pairs: int
    degrees: dict[str, tuple[int, int, int]]

    def pair_count(self, ctype: ConflictType) -> int:
        return {
            ConflictType.C1: self.c1_pairs,
            ConflictType.C2: self.c2_pairs,
            ConflictType.C3: self.c3_pairs,
        }[ctype]


@dataclass(frozen=True)
class _ProfileMask:
    """Bitmask form of a profile over the 11 right / 11 obligation slots."""

    can: int
    cannot: int
    nm_rights: int
    must: int
    nm_obligations: int
    copyleft: bool


_RIGHT_BITS = {term: 1 << i for i, term in enumerate(RIGHT_TERMS)}
_OBLIGATION_BITS = {term: 1 << i for i, term in enumerate(OBLIGATION_TERMS)}


def _mask(profile: LicenseProfile) -> _ProfileMask:
    can = cannot = nm_r = must = nm_o = 0
    for term, bit in _RIGHT_BITS.items():
        attitude = profile.terms[term]
        if attitude is Attitude.CAN:
            can |= bit
        elif attitude is Attitude.CANNOT:
            cannot |= bit
        else:
            nm_r |= bit
    for term, bit in _OBLIGATION_BITS.items():
        if profile.terms[term] is Attitude.MUST:
            must |= bit
        else:
            nm_o |= bit
    return _ProfileMask(
        can, cannot, nm_r, must, nm_o, profile.copyleft is not CopyleftClass.NONE
    )


def build_matrix(ds: Dataset, strict_not_mentioned: bool = False) -> ConflictMatrix:
    """Evaluate the rules over every ordered pair of distinct licenses.

    Uses a bitmask representation per profile so the full 453-license
    list (about 205k ordered pairs) stays well under a second. Neighbor
    sets for the degree statistic are tracked as integer bitsets.
    """
    ids = list(ds.profiles)
    masks = [_mask(ds.profiles[i]) for i in ids]
    n = len(ids)
    cans = [m.can for m in masks]
    not_cans = [~m.can for m in masks]
    c1_dep = [
        m.cannot | (m.nm_rights if strict_not_mentioned else 0) for m in masks
    ]
    musts = [m.must for m in masks]
    nm_obls = [m.nm_obligations for m in masks]
    c3_dep = [m.can if m.copyleft else 0 for m in masks]

    c1 = c2 = c3 = 0
    nbr1 = [0] * n
    nbr2 = [0] * n
    nbr3 = [0] * n
    for i in range(n):
        can_i = cans[i]
        nm_i = nm_obls[i]
        not_can_i = not_cans[i]
        bit_i = 1 << i
        for j in range(n):
            if i == j:
                continue
            if can_i & c1_dep[j]:
                c1 += 1
                nbr1[i] |= 1 << j
                nbr1[j] |= bit_i
            if nm_i & musts[j]:
                c2 += 1
                nbr2[i] |= 1 << j
                nbr2[j] |= bit_i
            if c3_dep[j] & not_can_i:
                c3 += 1
                nbr3[i] |= 1 << j
                nbr3[j] |= bit_i
    degrees = {
        ids[i]: (nbr1[i].bit_count(), nbr2[i].bit_count(), nbr3[i].bit_count())
        for i in range(n)
    }
    return ConflictMatrix(c1_pairs=c1, c2_pairs=c2, c3_pairs=c3, degrees=degrees)
