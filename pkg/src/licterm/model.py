"""Core domain model: license terms, attitudes, and per-license profiles.

A license is described by its stance on a fixed set of 22 terms, split
into 11 rights (things a licensee may or may not do) and 11 obligations
(things a licensee must do). Rights take the attitudes ``can`` /
``cannot`` / ``not-mentioned``; obligations take ``must`` /
``not-mentioned`` only, since a "forbidden obligation" would really be
a forbidden right. Each license additionally carries a copyleft class
(none / weak / strong) that drives the copyleft conflict rule.

Three term-like concepts are deliberately not representable here:
pay-above-use-threshold, same-license, and network-use-is-distribution.
The first does not occur in SPDX licenses, the second is the copyleft
property itself (modeled as :class:`CopyleftClass`), and the third is
subsumed by distribution.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum


class TermKind(Enum):
    RIGHT = "right"
    OBLIGATION = "obligation"


class Term(Enum):
    """The 22 license terms, rights first, in stable catalog order."""

    # Rights
    DISTRIBUTE = "distribute"
    MODIFY = "modify"
    COMMERCIAL_USE = "commercial-use"
    PRIVATE_USE = "private-use"
    HOLD_LIABLE = "hold-liable"
    PLACE_WARRANTY = "place-warranty"
    USE_TRADEMARK = "use-trademark"
    USE_PATENT_CLAIMS = "use-patent-claims"
    SUBLICENSE = "sublicense"
    RELICENSE = "relicense"
    STATICALLY_LINK = "statically-link"
    # Obligations
    INCLUDE_COPYRIGHT = "include-copyright"
    INCLUDE_LICENSE = "include-license"
    INCLUDE_NOTICE = "include-notice"
    INCLUDE_ORIGINAL = "include-original"
    INCLUDE_INSTALL_INSTRUCTIONS = "include-install-instructions"
    DISCLOSE_SOURCE = "disclose-source"
    STATE_CHANGES = "state-changes"
    GIVE_CREDIT = "give-credit"
    RENAME = "rename"
    CONTACT_AUTHOR = "contact-author"
    COMPENSATE_FOR_DAMAGES = "compensate-for-damages"

    @property
    def kind(self) -> TermKind:
        return TermKind.RIGHT if self in _RIGHT_TERMS else TermKind.OBLIGATION


_RIGHT_TERMS = frozenset(list(Term)[:11])
_OBLIGATION_TERMS = frozenset(list(Term)[11:])

#: All 22 terms in catalog order (rights first, then obligations).
TERM_ORDER: tuple[Term, ...] = tuple(Term)

RIGHT_TERMS: tuple[Term, ...] = tuple(t for t in Term if t.kind is TermKind.RIGHT)
OBLIGATION_TERMS: tuple[Term, ...] = tuple(
    t for t in Term if t.kind is TermKind.OBLIGATION
)


class Attitude(Enum):
    """A license's stance on one term."""

    CAN = "can"
    CANNOT = "cannot"
    MUST = "must"
    NOT_MENTIONED = "not-mentioned"


#: Attitudes a term of each kind is allowed to take.
ALLOWED_ATTITUDES: dict[TermKind, frozenset[Attitude]] = {
    TermKind.RIGHT: frozenset({Attitude.CAN, Attitude.CANNOT, Attitude.NOT_MENTIONED}),
    TermKind.OBLIGATION: frozenset({Attitude.MUST, Attitude.NOT_MENTIONED}),
}


class CopyleftClass(Enum):
    """Copyleft reach: none (permissive), weak (file/module), strong (whole work)."""

    NONE = "none"
    WEAK = "weak"
    STRONG = "strong"


_SPDX_ID_RE = re.compile(r"[A-Za-z0-9.+-]+")

_TERM_DEFINITIONS: dict[Term, str] = {
    Term.DISTRIBUTE: "Distribute copies of the original or derivative works to others.",
    Term.MODIFY: "Create derivative works by changing the licensed material.",
    Term.COMMERCIAL_USE: "Use the licensed material for commercial purposes.",
    Term.PRIVATE_USE: "Use and modify the licensed material privately, without distributing it.",
    Term.HOLD_LIABLE: "Hold the licensor liable for damages arising from the licensed material.",
    Term.PLACE_WARRANTY: "Offer a warranty, possibly for a fee, when redistributing the material.",
    Term.USE_TRADEMARK: "Use the licensor's trademarks, trade names, or logos.",
    Term.USE_PATENT_CLAIMS: "Practice the licensor's patent claims that read on the licensed material.",
    Term.SUBLICENSE: "Grant the received rights onward to third parties under terms of one's choosing.",
    Term.RELICENSE: "Distribute the material or derivatives under a different license.",
    Term.STATICALLY_LINK: "Link the licensed material statically into other software.",
    Term.INCLUDE_COPYRIGHT: "Retain the original copyright notice in all copies.",
    Term.INCLUDE_LICENSE: "Include the full license text with all copies.",
    Term.INCLUDE_NOTICE: "Preserve attribution notice files or statements shipped with the material.",
    Term.INCLUDE_ORIGINAL: "Ship or reference the original, unmodified source alongside derivatives.",
    Term.INCLUDE_INSTALL_INSTRUCTIONS: "Provide the information needed to install modified versions.",
    Term.DISCLOSE_SOURCE: "Make source code available when distributing the material.",
    Term.STATE_CHANGES: "Mark modified files or versions as changed, documenting the changes.",
    Term.GIVE_CREDIT: "Credit the original authors when using or distributing the material.",
    Term.RENAME: "Give modified versions a name or version distinct from the original.",
    Term.CONTACT_AUTHOR: "Obtain permission from or notify the author for certain uses.",
    Term.COMPENSATE_FOR_DAMAGES: "Indemnify the licensor for damages caused by one's own distribution.",
}


@dataclass(frozen=True)
class LicenseProfile:
    """One license's attitude over all 22 terms plus its copyleft class.

    The ``terms`` mapping is expected to be total: a term the license
    text never addresses is stored explicitly as ``NOT_MENTIONED``, not
    omitted. Construction does not enforce the invariants; use
    :func:`validate_profile` (loaders reject invalid profiles).
    """

    spdx_id: str
    full_name: str
    terms: dict[Term, Attitude]
    copyleft: CopyleftClass
    notes: str = ""

    def attitude(self, term: Term) -> Attitude:
        return self.terms.get(term, Attitude.NOT_MENTIONED)


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_profile(profile: LicenseProfile) -> ValidationResult:
    """Check every profile invariant; violations are returned, not raised.

    Each violation message names the offending term or field and the
    rule it breaks. The check is pure and idempotent.
    """
    violations: list[str] = []
    if not profile.spdx_id:
        violations.append("spdx_id: must be non-empty")
    elif not _SPDX_ID_RE.fullmatch(profile.spdx_id):
        violations.append(
            f"spdx_id: {profile.spdx_id!r} contains characters outside letters, digits, '.', '-', '+'"
        )
    missing = [t for t in TERM_ORDER if t not in profile.terms]
    for term in missing:
        violations.append(f"{term.value}: terms mapping not total (key missing)")
    for term, attitude in profile.terms.items():
        if not isinstance(term, Term):
            violations.append(f"{term!r}: not a known term")
            continue
        if attitude not in ALLOWED_ATTITUDES[term.kind]:
            kind = term.kind.value
            violations.append(
                f"{term.value}: {kind} cannot be {attitude.value!r}"
            )
    return ValidationResult(tuple(violations))


@dataclass(frozen=True)
class TermInfo:
    term: Term
    kind: TermKind
    definition: str


def term_catalog() -> tuple[TermInfo, ...]:
    """All 22 terms in catalog order: 11 rights, then 11 obligations."""
    return tuple(
        TermInfo(term, term.kind, _TERM_DEFINITIONS[term]) for term in TERM_ORDER
    )


def make_terms(**attitudes: str) -> dict[Term, Attitude]:
    """Build a total term mapping from keyword overrides.

    Keys are term ids with ``-`` replaced by ``_``; values are attitude
    spellings (``"can"``, ``"cannot"``, ``"must"``). Unlisted terms
    default to not-mentioned. Convenience for tests and fixtures.
    """
    terms = {t: Attitude.NOT_MENTIONED for t in TERM_ORDER}
    by_key = {t.value.replace("-", "_"): t for t in TERM_ORDER}
    for key, value in attitudes.items():
        term = by_key.get(key)
        if term is None:
            raise KeyError(f"unknown term {key!r}")
        terms[term] = Attitude(value)
    return terms
