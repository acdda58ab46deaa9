"""End-to-end tally: ballots or a score matrix in, rates and ranking out."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .ballots import (
    Ballot,
    CandidateSet,
    InterpretationRules,
    Listed,
    Unlisted,
    read_ballot_file,
)
from .closures import Variant
from .errors import TotalVotersTooSmall
from .matrix import LlullMatrix, aggregate, read_matrix
from .projection import ProjectionDetails, project_details
from .rates import RankLikeRates, RateFormula, SocialRanking, rank_like_rates, social_ranking


@dataclass(frozen=True)
class RunConfig:
    variant: Variant = Variant.MAIN
    rules: InterpretationRules = InterpretationRules()
    total_voters: Fraction | None = None
    formula: RateFormula = RateFormula.MAIN
    json_output: bool = False
    intermediates: bool = False
    matrix_input: bool = False


@dataclass(frozen=True)
class TallyResult:
    matrix: LlullMatrix
    details: ProjectionDetails
    rates: RankLikeRates
    ranking: SocialRanking

    @property
    def candidates(self) -> CandidateSet:
        return self.matrix.candidates


def tally(
    matrix: LlullMatrix,
    variant: Variant = Variant.MAIN,
    formula: RateFormula = RateFormula.MAIN,
) -> TallyResult:
    details = project_details(matrix, variant)
    rates = rank_like_rates(details.pm, formula)
    ranking = social_ranking(rates, details.pm)
    return TallyResult(matrix, details, rates, ranking)


def tally_ballots(
    candidates: CandidateSet,
    ballots: list[Ballot],
    config: RunConfig,
) -> TallyResult:
    matrix = aggregate(ballots, config.rules, candidates, config.total_voters)
    return tally(matrix, config.variant, config.formula)


def load_input(text: str, config: RunConfig) -> LlullMatrix:
    """Interpret input text per the config: score matrix or ballot file."""
    if config.matrix_input:
        matrix = read_matrix(text)
        if config.total_voters is not None:
            total = Fraction(config.total_voters)
            counts = [
                [matrix.absolute(x, y) for y in range(matrix.n)]
                for x in range(matrix.n)
            ]
            for x in range(matrix.n):
                for y in range(x + 1, matrix.n):
                    if counts[x][y] + counts[y][x] > total:
                        raise TotalVotersTooSmall(
                            f"turnout of pair ({matrix.candidates.names[x]}, "
                            f"{matrix.candidates.names[y]}) exceeds V = {total}"
                        )
            matrix = LlullMatrix.from_absolute(matrix.candidates, counts, total)
        return matrix
    candidates, ballots = read_ballot_file(text)
    return aggregate(ballots, config.rules, candidates, config.total_voters)


def run(text: str, config: RunConfig) -> str:
    """Tally the input and render the report chosen by the config."""
    matrix = load_input(text, config)
    result = tally(matrix, config.variant, config.formula)
    if config.json_output or config.intermediates:
        return render_json(result, config)
    return render_text(result)


# ---------------------------------------------------------------------------
# Rendering.


def render_text(result: TallyResult) -> str:
    names = result.candidates.names
    width = max(len(n) for n in names)
    lines = [f"{'candidate':<{max(width, 9)}}  {'rate':>8}  group"]
    for gi, group in enumerate(result.ranking.groups, start=1):
        for x in group:
            lines.append(
                f"{names[x]:<{max(width, 9)}}  {result.rates.rates[x]:8.4f}  {gi}"
            )
    ranking = " > ".join(
        " = ".join(names[x] for x in group) for group in result.ranking.groups
    )
    lines.append("ranking: " + ranking)
    return "\n".join(lines) + "\n"


def _frac_grid(grid, diag="0") -> list[list[str]]:
    n = len(grid)
    return [
        [str(grid[x][y]) if x != y else diag for y in range(n)] for x in range(n)
    ]


def _config_json(config: RunConfig) -> dict:
    return {
        "variant": config.variant.value,
        "listed_vs_unlisted": config.rules.listed_vs_unlisted.value,
        "unlisted_pair": config.rules.unlisted_pair.value,
        "total_voters": None if config.total_voters is None else str(config.total_voters),
        "formula": config.formula.value,
    }


def _intermediates_json(details: ProjectionDetails) -> dict:
    names = details.matrix.candidates.names
    seq = details.xi.sequence
    n = len(seq)
    ordered_msigma = _frac_grid(details.im.msigma)
    ordered_tsigma = [
        [details.pt.tsigma[i][j] if i != j else 0.0 for j in range(n)] for i in range(n)
    ]
    ordered_pi = [
        [details.pm.pi[seq[i]][seq[j]] if i != j else 0.0 for j in range(n)]
        for i in range(n)
    ]
    return {
        "v": _frac_grid(details.matrix.scores),
        "t": _frac_grid(details.t.t),
        "vstar": _frac_grid(details.scores.vstar),
        "vbar": None if details.scores.vbar is None else _frac_grid(details.scores.vbar),
        "m": _frac_grid(details.vm.m),
        "copeland": [str(r) for r in details.copeland],
        "xi": [names[x] for x in seq],
        "msigma": ordered_msigma,
        "tausigma": ordered_tsigma,
        "gamma": [[g.lo, g.hi] for g in details.intervals],
        "pi": ordered_pi,
    }


def render_json(result: TallyResult, config: RunConfig) -> str:
    names = result.candidates.names
    doc = {
        "schema": 1,
        "config": _config_json(config),
        "candidates": list(names),
        "total_voters": str(result.matrix.total),
        "rates": {names[x]: result.rates.rates[x] for x in range(len(names))},
        "ranking": [[names[x] for x in group] for group in result.ranking.groups],
    }
    if config.intermediates:
        doc["intermediates"] = _intermediates_json(result.details)
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def parse_variant(text: str) -> Variant:
    for variant in Variant:
        if variant.value == text:
            return variant
    raise ValueError(f"unknown variant {text!r}")


def parse_rules(listed: str, unlisted: str) -> InterpretationRules:
    return InterpretationRules(Listed(listed), Unlisted(unlisted))


def parse_formula(text: str) -> RateFormula:
    return RateFormula(text)
