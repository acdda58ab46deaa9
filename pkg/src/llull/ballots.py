"""Ballots and their translation into pairwise preference contributions.

A ballot is a truncated ranking with ties, optionally split by an approval
cutoff written ``/``.  The line grammar is::

    [weight ":"] group (">" group)*        group = name ("=" name)*

with at most one ``/`` placed before the first group, after the last one, or
between two groups.  Everything left of the ``/`` counts as approved.  A lone
``/`` is the explicit empty ballot (nothing approved, nothing ranked).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import (
    DuplicateCandidate,
    MalformedSyntax,
    NonPositiveWeight,
    UnknownCandidate,
)

RESERVED = set(">=/:#")


class CandidateSet:
    """Ordered set of candidate names; file order breaks all ties."""

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if not names:
            raise ValueError("candidate set is empty")
        for name in names:
            if not name or any(c in RESERVED or c.isspace() for c in name):
                raise ValueError(f"invalid candidate name: {name!r}")
        if len(set(names)) != len(names):
            raise ValueError("duplicate candidate names")
        self.names = names
        self.index = {name: i for i, name in enumerate(names)}

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __eq__(self, other) -> bool:
        return isinstance(other, CandidateSet) and self.names == other.names

    def __repr__(self) -> str:
        return f"CandidateSet({list(self.names)!r})"


class Listed(enum.Enum):
    """Rule for a pair with one candidate listed and the other not."""

    PREFERRED = "preferred"
    NO_INFO = "noinfo"


class Unlisted(enum.Enum):
    """Rule for a pair with neither candidate listed."""

    NO_INFO = "noinfo"
    TIED = "tied"


@dataclass(frozen=True)
class InterpretationRules:
    """How a ballot's silences are read when counting pairs."""

    listed_vs_unlisted: Listed = Listed.PREFERRED
    unlisted_pair: Unlisted = Unlisted.NO_INFO


@dataclass(frozen=True)
class Ballot:
    """A weighted ranking of disjoint candidate groups.

    ``groups`` holds candidate indices, tied within a group and each group
    preferred to the later ones.  ``approval_cutoff`` is the number of leading
    groups that are approved (``None`` when the ballot has no cutoff).
    """

    groups: tuple[tuple[int, ...], ...]
    approval_cutoff: int | None = None
    weight: Fraction = Fraction(1)

    def __post_init__(self):
        seen = set()
        for group in self.groups:
            if not group:
                raise ValueError("empty group")
            for c in group:
                if c in seen:
                    raise ValueError(f"candidate index {c} repeated")
                seen.add(c)
        if self.approval_cutoff is not None:
            if not 0 <= self.approval_cutoff <= len(self.groups):
                raise ValueError("approval cutoff outside group boundaries")
        elif not self.groups:
            raise ValueError("ballot lists nothing and has no cutoff")
        if self.weight <= 0:
            raise ValueError("weight must be positive")

    def listed(self) -> frozenset[int]:
        return frozenset(c for group in self.groups for c in group)

    def approved(self) -> frozenset[int]:
        if self.approval_cutoff is None:
            return frozenset()
        return frozenset(
            c for group in self.groups[: self.approval_cutoff] for c in group
        )


@dataclass(frozen=True)
class _Token:
    kind: str  # 'name', '>', '=', '/', ':'
    text: str
    column: int  # 1-based


def _tokenize(text: str, offset: int = 0) -> list[_Token]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in ">=/:":
            tokens.append(_Token(ch, ch, offset + i + 1))
            i += 1
        elif ch == "#":
            break
        else:
            start = i
            while i < len(text) and not text[i].isspace() and text[i] not in RESERVED:
                i += 1
            tokens.append(_Token("name", text[start:i], offset + start + 1))
    return tokens


def parse_ballot_line(
    text: str, candidates: CandidateSet, line: int = 1
) -> Ballot:
    """Parse one ballot line; raises the ballot errors with line/column."""
    # The weight prefix is split off textually: rational weights like "1/2"
    # would otherwise collide with the approval-cutoff token.
    weight = Fraction(1)
    body, offset = text, 0
    if ":" in text:
        head, _, body = text.partition(":")
        offset = len(head) + 1
        head = head.strip()
        try:
            weight = Fraction(head)
        except (ValueError, ZeroDivisionError):
            raise MalformedSyntax(f"cannot read weight {head!r}", line, 1) from None
        if weight <= 0:
            raise NonPositiveWeight(f"weight {head} is not positive", line, 1)

    tokens = _tokenize(body, offset)
    if not tokens:
        if offset:
            raise MalformedSyntax("weight without a ballot", line, offset + 1)
        raise MalformedSyntax("empty ballot", line, 1)

    groups: list[tuple[int, ...]] = []
    cutoff: int | None = None
    seen: dict[int, int] = {}

    def mark_cutoff(token: _Token):
        nonlocal cutoff
        if cutoff is not None:
            raise MalformedSyntax("second approval cutoff", line, token.column)
        cutoff = len(groups)

    def read_name(token: _Token) -> int:
        if token.kind != "name":
            raise MalformedSyntax(
                f"expected a candidate name, found {token.text!r}", line, token.column
            )
        idx = candidates.index.get(token.text)
        if idx is None:
            raise UnknownCandidate(f"unknown candidate {token.text!r}", line, token.column)
        if idx in seen:
            raise DuplicateCandidate(
                f"candidate {token.text!r} listed twice", line, token.column
            )
        seen[idx] = token.column
        return idx

    pos = 0
    if tokens[pos].kind == "/":
        mark_cutoff(tokens[pos])
        pos += 1
        if pos == len(tokens):
            return Ballot((), 0, weight)

    while True:
        if pos >= len(tokens):
            raise MalformedSyntax("ballot ends where a name is expected", line, len(text))
        group = [read_name(tokens[pos])]
        pos += 1
        while pos < len(tokens) and tokens[pos].kind == "=":
            pos += 1
            if pos >= len(tokens):
                raise MalformedSyntax("'=' at end of ballot", line, len(text))
            group.append(read_name(tokens[pos]))
            pos += 1
        groups.append(tuple(sorted(group)))
        if pos < len(tokens) and tokens[pos].kind == "/":
            mark_cutoff(tokens[pos])
            pos += 1
        if pos == len(tokens):
            break
        if tokens[pos].kind != ">":
            raise MalformedSyntax(
                f"expected '>', found {tokens[pos].text!r}", line, tokens[pos].column
            )
        pos += 1
        if pos < len(tokens) and tokens[pos].kind == "/":
            mark_cutoff(tokens[pos])
            pos += 1

    return Ballot(tuple(groups), cutoff, weight)


def serialize_ballot(ballot: Ballot, candidates: CandidateSet) -> str:
    """Canonical text for a ballot; parsing it back gives the same ballot."""
    parts = []
    for i, group in enumerate(ballot.groups):
        text = "=".join(candidates.names[c] for c in group)
        if ballot.approval_cutoff == i + 1:
            text += "/"
        parts.append(text)
    body = ">".join(parts)
    if ballot.approval_cutoff == 0:
        body = "/" + body
    if ballot.weight != 1:
        return f"{ballot.weight}: {body}"
    return body


def effective_groups(ballot: Ballot) -> tuple[tuple[int, ...], ...]:
    """Groups as counted: everything approved collapses into one tied group."""
    if ballot.approval_cutoff is None or ballot.approval_cutoff == 0:
        return ballot.groups
    merged = tuple(sorted(ballot.approved()))
    return (merged,) + ballot.groups[ballot.approval_cutoff :]


def ballot_to_pairwise(
    ballot: Ballot, rules: InterpretationRules, candidates: CandidateSet
) -> dict[tuple[int, int], Fraction]:
    """Per-unit-weight pairwise contribution of one ballot.

    A pair listed in distinct groups contributes a full point to the higher
    one; a tied listed pair contributes half a point each way.  Pairs with
    one or both members unlisted follow ``rules``.
    """
    groups = effective_groups(ballot)
    listed = [c for group in groups for c in group]
    listed_set = set(listed)
    half = Fraction(1, 2)
    out: dict[tuple[int, int], Fraction] = {}

    for gi, group in enumerate(groups):
        for x in group:
            for y in group:
                if x != y:
                    out[(x, y)] = half
            for later in groups[gi + 1 :]:
                for y in later:
                    out[(x, y)] = Fraction(1)

    if rules.listed_vs_unlisted is Listed.PREFERRED:
        for x in listed:
            for y in range(len(candidates)):
                if y not in listed_set:
                    out[(x, y)] = Fraction(1)
    if rules.unlisted_pair is Unlisted.TIED:
        unlisted = [c for c in range(len(candidates)) if c not in listed_set]
        for x in unlisted:
            for y in unlisted:
                if x != y:
                    out[(x, y)] = half
    return out


def read_ballot_file(text: str) -> tuple[CandidateSet, list[Ballot]]:
    """Read a ballot file: comments and blanks skipped, one ballot per line.

    The first effective line may be ``candidates: a b c`` to fix the name
    order; otherwise names are collected in order of first appearance.
    """
    lines = text.splitlines()
    candidates: CandidateSet | None = None
    ballot_lines: list[tuple[int, str]] = []
    for lineno, raw in enumerate(lines, start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        if candidates is None and not ballot_lines and stripped.startswith("candidates:"):
            names = stripped[len("candidates:") :].split()
            if not names:
                raise MalformedSyntax("empty candidates line", lineno, 1)
            candidates = CandidateSet(names)
            continue
        ballot_lines.append((lineno, raw))

    if candidates is None:
        names: list[str] = []
        for _, raw in ballot_lines:
            body = raw.split("#", 1)[0]
            if ":" in body:
                body = body.partition(":")[2]
            for token in _tokenize(body):
                if token.kind == "name" and token.text not in names:
                    names.append(token.text)
        if not names:
            raise MalformedSyntax("no candidates found", 1, 1)
        candidates = CandidateSet(names)

    ballots = [
        parse_ballot_line(raw.split("#", 1)[0], candidates, lineno)
        for lineno, raw in ballot_lines
    ]
    return candidates, ballots


def serialize_ballot_file(candidates: CandidateSet, ballots: Iterable[Ballot]) -> str:
    lines = ["candidates: " + " ".join(candidates.names)]
    lines += [serialize_ballot(b, candidates) for b in ballots]
    return "\n".join(lines) + "\n"
