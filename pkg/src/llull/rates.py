"""Rank-like rates and the social ranking they induce."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .projection import ProjectedMatrix

TIE_TOL = 1e-9  # ties are read off projected-score equality, not rate equality


class RateFormula(enum.Enum):
    MAIN = "main"
    ALTERNATIVE = "alt"


@dataclass(frozen=True)
class RankLikeRates:
    """Continuous ratings in [1, N]; 1 means unanimous first place."""

    rates: tuple[float, ...]
    formula: RateFormula


def rank_like_rates(
    pm: ProjectedMatrix, formula: RateFormula = RateFormula.MAIN
) -> RankLikeRates:
    """Main formula: N minus the row sum of projected scores.

    The alternative formula instead adds the column sum to 1; both agree in
    the complete case.
    """
    n = pm.n
    if formula is RateFormula.MAIN:
        rates = tuple(
            n - sum(pm.pi[x][y] for y in range(n) if y != x) for x in range(n)
        )
    else:
        rates = tuple(
            1 + sum(pm.pi[y][x] for y in range(n) if y != x) for x in range(n)
        )
    return RankLikeRates(rates, formula)


@dataclass(frozen=True)
class SocialRanking:
    """Groups of candidate indices, best first, tied within a group."""

    groups: tuple[tuple[int, ...], ...]

    def position(self, x: int) -> int:
        for i, group in enumerate(self.groups):
            if x in group:
                return i
        raise KeyError(x)


def social_ranking(r: RankLikeRates, pm: ProjectedMatrix) -> SocialRanking:
    """Group candidates that are exactly tied, ordered by increasing rate.

    Two candidates tie exactly when their opposed projected scores are
    equal; equality of rates follows from that but is noisier, so the
    grouping tests the scores.
    """
    n = pm.n
    by_rate = sorted(range(n), key=lambda x: (r.rates[x], x))
    groups: list[list[int]] = []
    for x in by_rate:
        if groups:
            head = groups[-1][0]
            if abs(pm.pi[head][x] - pm.pi[x][head]) <= TIE_TOL:
                groups[-1].append(x)
                continue
        groups.append([x])
    return SocialRanking(tuple(tuple(sorted(g)) for g in groups))
