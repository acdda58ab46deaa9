"""The Llull matrix of pairwise scores, with exact rational entries."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .ballots import Ballot, CandidateSet, InterpretationRules, ballot_to_pairwise
from .errors import MatrixFormatError, TotalVotersTooSmall

Grid = tuple[tuple[Fraction, ...], ...]


def _as_grid(rows: Sequence[Sequence[Fraction]]) -> Grid:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


@dataclass(frozen=True)
class LlullMatrix:
    """Relative pairwise scores v[x][y] with v_xy + v_yx <= 1."""

    candidates: CandidateSet
    scores: Grid  # relative, diagonal unused (kept at 0)
    total: Fraction  # the voter denominator V

    def __post_init__(self):
        n = len(self.candidates)
        object.__setattr__(self, "scores", _as_grid(self.scores))
        object.__setattr__(self, "total", Fraction(self.total))
        if self.total <= 0:
            raise ValueError("total voters must be positive")
        if len(self.scores) != n or any(len(r) != n for r in self.scores):
            raise ValueError("score grid does not match the candidate count")
        for x in range(n):
            for y in range(n):
                if x == y:
                    continue
                v = self.scores[x][y]
                if not 0 <= v <= 1:
                    raise ValueError(f"score v[{x}][{y}] = {v} outside [0, 1]")
                if x < y and v + self.scores[y][x] > 1:
                    raise ValueError(f"pair ({x}, {y}) has turnout above 1")

    @property
    def n(self) -> int:
        return len(self.candidates)

    def absolute(self, x: int, y: int) -> Fraction:
        return self.scores[x][y] * self.total

    @classmethod
    def from_absolute(
        cls, candidates: CandidateSet, counts: Sequence[Sequence[Fraction]], total: Fraction
    ) -> "LlullMatrix":
        total = Fraction(total)
        rel = [
            [Fraction(c) / total if i != j else Fraction(0) for j, c in enumerate(row)]
            for i, row in enumerate(counts)
        ]
        return cls(candidates, _as_grid(rel), total)


@dataclass(frozen=True)
class TurnoutMatrix:
    """Symmetric per-pair turnouts t_xy = v_xy + v_yx."""

    t: Grid


@dataclass(frozen=True)
class MarginMatrix:
    """Antisymmetric per-pair margins m_xy = v_xy - v_yx."""

    m: Grid


def aggregate(
    profile: Iterable[Ballot],
    rules: InterpretationRules,
    candidates: CandidateSet,
    total_voters: Fraction | None = None,
) -> LlullMatrix:
    """Sum weighted ballot contributions into a relative Llull matrix.

    The denominator defaults to the sum of ballot weights; an explicit
    ``total_voters`` must cover every absolute turnout.
    """
    n = len(candidates)
    counts = [[Fraction(0)] * n for _ in range(n)]
    weight_sum = Fraction(0)
    for ballot in profile:
        weight_sum += ballot.weight
        for (x, y), c in ballot_to_pairwise(ballot, rules, candidates).items():
            counts[x][y] += ballot.weight * c

    if total_voters is None:
        total = weight_sum if weight_sum > 0 else Fraction(1)
    else:
        total = Fraction(total_voters)
        for x in range(n):
            for y in range(x + 1, n):
                turnout = counts[x][y] + counts[y][x]
                if turnout > total:
                    raise TotalVotersTooSmall(
                        f"pair ({candidates.names[x]}, {candidates.names[y]}) has "
                        f"absolute turnout {turnout} > V = {total}"
                    )
    return LlullMatrix.from_absolute(candidates, counts, total)


def turnouts(matrix: LlullMatrix) -> TurnoutMatrix:
    n = matrix.n
    v = matrix.scores
    return TurnoutMatrix(
        _as_grid(
            [
                [v[x][y] + v[y][x] if x != y else Fraction(0) for y in range(n)]
                for x in range(n)
            ]
        )
    )


def margins(matrix: LlullMatrix) -> MarginMatrix:
    n = matrix.n
    v = matrix.scores
    return MarginMatrix(
        _as_grid(
            [
                [v[x][y] - v[y][x] if x != y else Fraction(0) for y in range(n)]
                for x in range(n)
            ]
        )
    )


# ---------------------------------------------------------------------------
# CSV serialization: a header row of candidate names, a "V=" line with the
# voter total, then one row per candidate.  Entries are absolute counts in
# any Fraction-readable form ("321.5" and "643/2" both work); the diagonal
# is written as "*".


def read_matrix(text: str) -> LlullMatrix:
    header: list[str] | None = None
    total: Fraction | None = None
    rows: list[list[Fraction]] = []
    row_lines: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("V=") or line.startswith("V ="):
            try:
                total = Fraction(line.split("=", 1)[1].strip())
            except (ValueError, ZeroDivisionError):
                raise MatrixFormatError("cannot read the voter total", lineno) from None
            continue
        cells = [c.strip() for c in line.split(",")]
        if header is None:
            header = cells
            continue
        if len(cells) == len(header) + 1 and cells[0] == header[len(rows)]:
            cells = cells[1:]  # row label column
        if len(cells) != len(header):
            raise MatrixFormatError(
                f"expected {len(header)} entries, found {len(cells)}", lineno
            )
        parsed = []
        for j, cell in enumerate(cells):
            if j == len(rows) and cell in ("*", "", "0"):
                parsed.append(Fraction(0))
                continue
            try:
                parsed.append(Fraction(cell))
            except (ValueError, ZeroDivisionError):
                raise MatrixFormatError(f"cannot read entry {cell!r}", lineno) from None
        rows.append(parsed)
        row_lines.append(lineno)

    if header is None:
        raise MatrixFormatError("missing header row", 1)
    if len(rows) != len(header):
        raise MatrixFormatError(
            f"expected {len(header)} rows, found {len(rows)}", row_lines[-1] if row_lines else 1
        )
    candidates = CandidateSet(header)
    if total is None:
        total = Fraction(1)
    try:
        return LlullMatrix.from_absolute(candidates, rows, total)
    except ValueError as exc:
        raise MatrixFormatError(str(exc), row_lines[0]) from None


def write_matrix(matrix: LlullMatrix) -> str:
    lines = [",".join(matrix.candidates.names), f"V={matrix.total}"]
    for x in range(matrix.n):
        cells = [
            "*" if x == y else str(matrix.absolute(x, y)) for y in range(matrix.n)
        ]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
