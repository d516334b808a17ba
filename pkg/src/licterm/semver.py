"""Semantic versions and npm-style dependency ranges.

Supports the range forms that dominate registry metadata: exact
versions, ``^`` caret, ``~`` tilde, comparators (``>`` ``>=`` ``<``
``<=`` ``=``), spaced hyphen ranges, wildcards (``*``, ``x``, and
partial versions like ``1.2``), and ``||`` disjunctions of
space-separated conjunctions. Anything else (git URLs, tags) is a
parse error for the caller to record.

Prerelease versions satisfy a range only when some comparator in the
range carries a prerelease with the same (major, minor, patch) triple,
mirroring registry resolution behavior.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering

from .errors import FormatError


class RangeSyntaxError(ValueError):
    """A version range string is outside the supported grammar."""


_VERSION_RE = re.compile(
    r"""^
    (0|[1-9]\d*)\.(0|[1-9]\d*)\.(0|[1-9]\d*)
    (?:-([0-9A-Za-z.-]+))?
    (?:\+([0-9A-Za-z.-]+))?
    $""",
    re.VERBOSE,
)


@total_ordering
@dataclass(frozen=True, eq=False)
class Semver:
    major: int
    minor: int
    patch: int
    prerelease: tuple[str, ...] = ()
    build: str = ""

    @classmethod
    def parse(cls, text: str) -> "Semver":
        m = _VERSION_RE.match(text.strip())
        if m is None:
            raise FormatError(f"not a semantic version: {text!r}")
        prerelease = tuple(m.group(4).split(".")) if m.group(4) else ()
        if any(not part for part in prerelease):
            raise FormatError(f"empty prerelease identifier in {text!r}")
        return cls(
            int(m.group(1)),
            int(m.group(2)),
            int(m.group(3)),
            prerelease,
            m.group(5) or "",
        )

    @property
    def triple(self) -> tuple[int, int, int]:
        return (self.major, self.minor, self.patch)

    def _key(self):
        # Release sorts after any of its prereleases; numeric prerelease
        # identifiers sort below alphanumeric ones. Build metadata is
        # ignored for precedence.
        pre_key = tuple(
            (0, int(part), "") if part.isdigit() else (1, 0, part)
            for part in self.prerelease
        )
        return (self.triple, not self.prerelease, pre_key)

    def __lt__(self, other: "Semver") -> bool:
        return self._key() < other._key()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Semver):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __str__(self) -> str:
        text = f"{self.major}.{self.minor}.{self.patch}"
        if self.prerelease:
            text += "-" + ".".join(self.prerelease)
        if self.build:
            text += "+" + self.build
        return text


@dataclass(frozen=True)
class Comparator:
    op: str  # one of < <= > >= =
    version: Semver

    def matches(self, version: Semver) -> bool:
        if self.op == "<":
            return version < self.version
        if self.op == "<=":
            return version <= self.version
        if self.op == ">":
            return version > self.version
        if self.op == ">=":
            return version >= self.version
        return version == self.version


@dataclass(frozen=True)
class VersionRange:
    """Disjunction of comparator conjunctions, plus the raw text."""

    raw: str
    alternatives: tuple[tuple[Comparator, ...], ...]

    def satisfies(self, version: Semver) -> bool:
        for conjunction in self.alternatives:
            if all(c.matches(version) for c in conjunction):
                if version.prerelease and not self._prerelease_allowed(version):
                    continue
                return True
        return False

    def _prerelease_allowed(self, version: Semver) -> bool:
        return any(
            c.version.prerelease and c.version.triple == version.triple
            for conjunction in self.alternatives
            for c in conjunction
        )


_PARTIAL_RE = re.compile(
    r"^[v=]?(\d+|[xX*])(?:\.(\d+|[xX*]))?(?:\.(\d+|[xX*]))?"
    r"(?:-([0-9A-Za-z.-]+))?(?:\+([0-9A-Za-z.-]+))?$"
)


@dataclass
class _Partial:
    major: int | None
    minor: int | None
    patch: int | None
    prerelease: tuple[str, ...]

    @property
    def full(self) -> bool:
        return self.patch is not None

    def floor(self) -> Semver:
        return Semver(self.major or 0, self.minor or 0, self.patch or 0, self.prerelease)


def _parse_partial(text: str) -> _Partial:
    m = _PARTIAL_RE.match(text)
    if m is None:
        raise RangeSyntaxError(f"not a version or partial version: {text!r}")
    parts: list[int | None] = []
    for group in m.group(1, 2, 3):
        if group is None or group in ("x", "X", "*"):
            parts.append(None)
        else:
            parts.append(int(group))
    major, minor, patch = parts
    if major is None:
        minor = patch = None
    elif minor is None:
        patch = None
    prerelease = tuple(m.group(4).split(".")) if m.group(4) else ()
    if prerelease and patch is None:
        raise RangeSyntaxError(f"prerelease requires a full version: {text!r}")
    return _Partial(major, minor, patch, prerelease)


def _wildcard_bounds(p: _Partial) -> tuple[Comparator, ...]:
    if p.major is None:
        return ()  # any version
    if p.minor is None:
        return (
            Comparator(">=", Semver(p.major, 0, 0)),
            Comparator("<", Semver(p.major + 1, 0, 0)),
        )
    if p.patch is None:
        return (
            Comparator(">=", Semver(p.major, p.minor, 0)),
            Comparator("<", Semver(p.major, p.minor + 1, 0)),
        )
    return (Comparator("=", p.floor()),)


def _caret_bounds(p: _Partial) -> tuple[Comparator, ...]:
    if p.major is None:
        return ()
    low = p.floor()
    if p.major > 0:
        high = Semver(p.major + 1, 0, 0)
    elif p.minor is not None and (p.minor > 0 or p.patch is None):
        high = Semver(0, p.minor + 1, 0)
    elif p.minor is None:
        high = Semver(1, 0, 0)
    else:
        high = Semver(0, 0, p.patch + 1)
    return (Comparator(">=", low), Comparator("<", high))


def _tilde_bounds(p: _Partial) -> tuple[Comparator, ...]:
    if p.major is None:
        return ()
    low = p.floor()
    if p.minor is None:
        high = Semver(p.major + 1, 0, 0)
    else:
        high = Semver(p.major, p.minor + 1, 0)
    return (Comparator(">=", low), Comparator("<", high))


def _comparator(op: str, text: str) -> tuple[Comparator, ...]:
    p = _parse_partial(text)
    if p.major is None:
        # Comparing against a bare wildcard collapses to all-or-nothing;
        # treat ">=*" as any and the rest as unsupported.
        if op in (">=", "<="):
            return ()
        raise RangeSyntaxError(f"cannot apply {op!r} to a wildcard")
    if p.full:
        return (Comparator(op, p.floor()),)
    # Partial versions under an operator behave like their wildcard span.
    low, high = _wildcard_bounds(p)
    if op == ">":
        return (Comparator(">=", high.version),)
    if op == ">=":
        return (Comparator(">=", low.version),)
    if op == "<":
        return (Comparator("<", low.version),)
    if op == "<=":
        return (Comparator("<", high.version),)
    return (low, high)  # "=1.2" == "1.2.x"


_OP_RE = re.compile(r"^(>=|<=|>|<|=|\^|~)")


def _parse_conjunction(text: str) -> tuple[Comparator, ...]:
    tokens = text.split()
    # Spaced hyphen range: "1.2.3 - 2.3.4", inclusive on both ends.
    if "-" in tokens:
        if tokens.index("-") != 1 or len(tokens) != 3:
            raise RangeSyntaxError(f"malformed hyphen range: {text!r}")
        low = _parse_partial(tokens[0])
        high = _parse_partial(tokens[2])
        if not (low.full and high.full):
            raise RangeSyntaxError(f"hyphen range requires full versions: {text!r}")
        return (Comparator(">=", low.floor()), Comparator("<=", high.floor()))
    comparators: list[Comparator] = []
    for token in tokens:
        m = _OP_RE.match(token)
        op = m.group(1) if m else ""
        rest = token[len(op):]
        if op == "^":
            comparators.extend(_caret_bounds(_parse_partial(rest)))
        elif op == "~":
            comparators.extend(_tilde_bounds(_parse_partial(rest)))
        elif op:
            comparators.extend(_comparator(op, rest))
        else:
            comparators.extend(_wildcard_bounds(_parse_partial(token)))
    return tuple(comparators)


def parse_range(text: str) -> VersionRange:
    """Parse a range string; raises RangeSyntaxError outside the grammar."""
    raw = text.strip()
    if raw == "":
        return VersionRange(raw, ((),))
    parts = [alt.strip() for alt in raw.split("||")]
    if any(part == "" for part in parts):
        raise RangeSyntaxError(f"empty alternative in range: {text!r}")
    return VersionRange(raw, tuple(_parse_conjunction(part) for part in parts))


def resolve_range(rng: VersionRange, available: list[Semver]) -> Semver | None:
    """Highest available version satisfying the range, or None.

    Prereleases are skipped unless the range itself names a prerelease
    of the same (major, minor, patch).
    """
    best: Semver | None = None
    for version in available:
        if rng.satisfies(version) and (best is None or version > best):
            best = version
    return best
