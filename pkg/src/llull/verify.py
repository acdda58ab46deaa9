"""Property checks for the tally's proved guarantees.

Each check builds or receives a profile, runs the pipeline, and raises
``VerificationFailure`` with a replayable dump when a guarantee is broken.
The suite runner turns those into per-case pass/fail records; everything is
deterministic given a seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

from .ballots import Ballot, CandidateSet, InterpretationRules, serialize_ballot_file
from .closures import Variant, maxmin_closure, minmax_closure
from .errors import LlullError, NotAdmissible
from .generate import ProfileGenerator, candidate_names, random_matrix
from .matrix import Grid, LlullMatrix, aggregate, write_matrix
from .ordering import enumerate_admissible_orders
from .pipeline import tally
from .projection import project_details, project_with_order
from .qp import (
    QpProblem,
    kkt_residual,
    problem_to_json,
    solve_active_set,
    solve_dykstra,
)
from .rates import rank_like_rates

RATE_TOL = 1e-9


class VerificationFailure(LlullError):
    """A proved property failed on a concrete profile."""

    def __init__(self, message: str, replay: str = ""):
        super().__init__(message)
        self.replay = replay


def _rates(matrix: LlullMatrix, variant: Variant = Variant.MAIN) -> tuple[float, ...]:
    return tally(matrix, variant).rates.rates


def _replay(candidates: CandidateSet, ballots: list[Ballot]) -> str:
    return serialize_ballot_file(candidates, ballots)


# ---------------------------------------------------------------------------
# Brute-force path closures, used as the oracle for the Floyd-Warshall route.


def oracle_paths(matrix: LlullMatrix) -> tuple[Grid, Grid]:
    """Max-min and min-max closures by enumerating all simple paths."""
    n = matrix.n
    v = matrix.scores
    best: list[list[Fraction]] = [[Fraction(0)] * n for _ in range(n)]
    worst: list[list[Fraction]] = [[Fraction(0)] * n for _ in range(n)]

    def walk(x: int, y: int):
        others = [z for z in range(n) if z not in (x, y)]
        lo, hi = None, None
        for k in range(len(others) + 1):
            for middle in permutations(others, k):
                path = (x, *middle, y)
                score_lo = min(v[path[i]][path[i + 1]] for i in range(len(path) - 1))
                score_hi = max(v[path[i]][path[i + 1]] for i in range(len(path) - 1))
                lo = score_lo if lo is None or score_lo > lo else lo
                hi = score_hi if hi is None or score_hi < hi else hi
        return lo, hi

    for x in range(n):
        for y in range(n):
            if x != y:
                best[x][y], worst[x][y] = walk(x, y)
    return tuple(map(tuple, best)), tuple(map(tuple, worst))


def check_paths(matrix: LlullMatrix) -> None:
    star = maxmin_closure(matrix)
    bar = minmax_closure(matrix)
    oracle_star, oracle_bar = oracle_paths(matrix)
    if star != oracle_star:
        raise VerificationFailure("max-min closure disagrees with path enumeration",
                                  write_matrix(matrix))
    if bar != oracle_bar:
        raise VerificationFailure("min-max closure disagrees with path enumeration",
                                  write_matrix(matrix))


# ---------------------------------------------------------------------------
# Individual property checks.


def check_single_choice(candidates: CandidateSet, ballots: list[Ballot]) -> None:
    """Single-choice voting: rates are affine in the vote fractions and the
    projection leaves the scores unchanged."""
    matrix = aggregate(ballots, InterpretationRules(), candidates)
    n = matrix.n
    shares = [Fraction(0)] * n
    for ballot in ballots:
        (group,) = ballot.groups
        (choice,) = group
        shares[choice] += ballot.weight
    total = sum(b.weight for b in ballots)
    result = tally(matrix)
    for x in range(n):
        expected = 1 + (n - 1) * (1 - Fraction(shares[x], total))
        if abs(result.rates.rates[x] - float(expected)) > RATE_TOL:
            raise VerificationFailure(
                f"single-choice rate of {candidates.names[x]} is "
                f"{result.rates.rates[x]}, expected {float(expected)}",
                _replay(candidates, ballots),
            )
    for x in range(n):
        for y in range(n):
            if x != y and abs(result.details.pm.pi[x][y] - float(matrix.scores[x][y])) > RATE_TOL:
                raise VerificationFailure(
                    "single-choice projection moved the scores",
                    _replay(candidates, ballots),
                )


def check_order_independence(matrix: LlullMatrix, variant: Variant = Variant.MAIN) -> int:
    """Rates and the position-indexed score matrix agree across every
    admissible order.  Returns the number of orders tried."""
    details = project_details(matrix, variant)
    reference_rates = rank_like_rates(details.pm).rates
    seq = details.xi.sequence
    reference_grid = [
        [details.pm.pi[x][y] for y in seq] for x in seq
    ]
    count = 0
    for order in enumerate_admissible_orders(details.vm):
        count += 1
        *_, pm = project_with_order(details.effective, details.vm, order)
        rates = rank_like_rates(pm).rates
        drift = max(abs(a - b) for a, b in zip(rates, reference_rates))
        if drift > RATE_TOL:
            raise VerificationFailure(
                f"rates move by {drift} under order {order.sequence}",
                write_matrix(matrix),
            )
        grid = [[pm.pi[x][y] for y in order.sequence] for x in order.sequence]
        grid_drift = max(
            abs(grid[i][j] - reference_grid[i][j])
            for i in range(len(seq))
            for j in range(len(seq))
        )
        if grid_drift > RATE_TOL:
            raise VerificationFailure(
                f"position-indexed scores move by {grid_drift} under order "
                f"{order.sequence}",
                write_matrix(matrix),
            )
    return count


def matrix_from_floats(candidates: CandidateSet, grid) -> LlullMatrix:
    """Rationalize a float score grid, absorbing roundoff above turnout 1."""
    n = len(candidates)
    scores = [[Fraction(0)] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            if x != y:
                scores[x][y] = max(Fraction(0), min(Fraction(1), Fraction(grid[x][y])))
    for x in range(n):
        for y in range(x + 1, n):
            excess = scores[x][y] + scores[y][x] - 1
            if excess > 0:  # a few ulps from the float stage
                scores[x][y] -= excess / 2
                scores[y][x] -= excess / 2
    return LlullMatrix(candidates, tuple(map(tuple, scores)), Fraction(1))


def check_idempotence(matrix: LlullMatrix, variant: Variant = Variant.MAIN) -> None:
    """Projecting a projected matrix returns it unchanged; the structural
    inequality suite holds along the way."""
    first = project_details(matrix, variant)
    first.pm.check_structure()
    again = project_details(
        matrix_from_floats(matrix.candidates, first.pm.pi), Variant.MAIN
    )
    drift = max(
        abs(first.pm.pi[x][y] - again.pm.pi[x][y])
        for x in range(matrix.n)
        for y in range(matrix.n)
        if x != y
    )
    if drift > RATE_TOL:
        raise VerificationFailure(
            f"projection is not idempotent: scores move by {drift}",
            write_matrix(matrix),
        )


def check_condorcet_smith(
    matrix: LlullMatrix, split: frozenset[int] | None = None
) -> int:
    """Every pairwise-majority partition must be respected by the rates.

    Scans all bipartitions when none is given; returns how many qualified.
    """
    n = matrix.n
    rates = _rates(matrix)
    splits = (
        [split]
        if split is not None
        else [
            frozenset(xs) for size in range(1, n) for xs in combinations(range(n), size)
        ]
    )
    qualified = 0
    for xs in splits:
        ys = [y for y in range(n) if y not in xs]
        if not ys:
            continue
        if all(matrix.scores[x][y] > Fraction(1, 2) for x in xs for y in ys):
            qualified += 1
            for x in xs:
                for y in ys:
                    if not rates[x] < rates[y] - RATE_TOL:
                        raise VerificationFailure(
                            f"majority set {sorted(xs)} does not rank above "
                            f"{sorted(ys)}: r={rates[x]} vs {rates[y]}",
                            write_matrix(matrix),
                        )
    return qualified


def margin_form_notes(matrix: LlullMatrix) -> str:
    """Report partitions winning by margins yet not separated by the rates.

    The margin form of the majority principle is deliberately not enforced
    (only the absolute-majority form is guaranteed), so these observations
    are informational and never fail a case.
    """
    n = matrix.n
    rates = _rates(matrix)
    v = matrix.scores
    noted = []
    for size in range(1, n):
        for xs in combinations(range(n), size):
            ys = [y for y in range(n) if y not in xs]
            if all(v[x][y] > v[y][x] for x in xs for y in ys) and any(
                rates[x] >= rates[y] - RATE_TOL for x in xs for y in ys
            ):
                noted.append(f"margin-form majority {list(xs)} not separated")
    return "; ".join(noted)


def check_clone_consistency(matrix: LlullMatrix, clones: frozenset[int]) -> None:
    """A set treated identically from outside stays together and contracts."""
    n = matrix.n
    v = matrix.scores
    outsiders = [x for x in range(n) if x not in clones]
    witness = min(clones)
    for a in clones:
        for x in outsiders:
            if v[a][x] != v[witness][x] or v[x][a] != v[x][witness]:
                raise ValueError("clone set is not autonomous for the matrix")

    rates = _rates(matrix)
    for x in outsiders:
        below = [rates[a] <= rates[x] + RATE_TOL for a in clones]
        above = [rates[x] <= rates[a] + RATE_TOL for a in clones]
        if any(below) and not all(below) or any(above) and not all(above):
            raise VerificationFailure(
                f"candidate {x} separates the clone set {sorted(clones)}",
                write_matrix(matrix),
            )

    kept = outsiders + [witness]
    names = candidate_names(len(kept))
    quotient = LlullMatrix(
        names,
        tuple(
            tuple(v[p][q] if p != q else Fraction(0) for q in kept) for p in kept
        ),
        matrix.total,
    )
    qrates = _rates(quotient)
    pos = {c: i for i, c in enumerate(kept)}

    def rel(a: float, b: float) -> int:
        if abs(a - b) <= RATE_TOL:
            return 0
        return -1 if a < b else 1

    for p in kept:
        for q in kept:
            if p == q:
                continue
            if rel(rates[p], rates[q]) != rel(qrates[pos[p]], qrates[pos[q]]):
                raise VerificationFailure(
                    f"contraction changes the relation between {p} and {q}",
                    write_matrix(matrix),
                )


def check_monotonicity(
    matrix: LlullMatrix, favored: int, perturbed: LlullMatrix
) -> None:
    """Raising a candidate's scores never pushes it behind anyone it beat."""
    n = matrix.n
    v, w = matrix.scores, perturbed.scores
    for x in range(n):
        for y in range(n):
            if x == y:
                continue
            if x == favored and w[x][y] < v[x][y]:
                raise ValueError("perturbation lowered a favored score")
            if y == favored and w[x][y] > v[x][y]:
                raise ValueError("perturbation raised an opposing score")
            if favored not in (x, y) and w[x][y] != v[x][y]:
                raise ValueError("perturbation touched an unrelated pair")
    before = _rates(matrix)
    after = _rates(perturbed)
    for y in range(n):
        if y == favored:
            continue
        if before[favored] < before[y] - RATE_TOL and not (
            after[favored] <= after[y] + RATE_TOL
        ):
            raise VerificationFailure(
                f"candidate {favored} fell behind {y} after being favored",
                write_matrix(matrix),
            )
    if all(before[favored] < before[y] - RATE_TOL for y in range(n) if y != favored):
        if not all(
            after[favored] < after[y] + RATE_TOL for y in range(n) if y != favored
        ):
            raise VerificationFailure(
                f"strict winner {favored} lost the win after being favored",
                write_matrix(matrix),
            )


def check_decomposition(
    candidates: CandidateSet, ballots: list[Ballot], top: frozenset[int]
) -> None:
    """Unanimous top sets split the election into independent pieces."""
    n = len(candidates)
    matrix = aggregate(ballots, InterpretationRules(), candidates)
    for x in top:
        for y in range(n):
            if y not in top and matrix.scores[x][y] != 1:
                raise ValueError("top set is not unanimously preferred")
    result = tally(matrix)
    rates = result.rates.rates

    k = len(top)
    head_sum = sum(rates[x] for x in top)
    if abs(head_sum - k * (k + 1) / 2) > RATE_TOL * max(1, k):
        raise VerificationFailure(
            f"top-set rates sum to {head_sum}, expected {k * (k + 1) / 2}",
            _replay(candidates, ballots),
        )

    if k > 1:
        keep = sorted(top)
        sub_names = candidate_names(k)
        remap = {c: i for i, c in enumerate(keep)}
        sub_ballots = []
        for ballot in ballots:
            groups = []
            for group in ballot.groups:
                kept = tuple(sorted(remap[c] for c in group if c in top))
                if kept:
                    groups.append(kept)
            sub_ballots.append(Ballot(tuple(groups), None, ballot.weight))
        sub = tally(aggregate(sub_ballots, InterpretationRules(), sub_names))
        for c in keep:
            if abs(rates[c] - sub.rates.rates[remap[c]]) > RATE_TOL:
                raise VerificationFailure(
                    f"restricted election changes the rate of {candidates.names[c]}",
                    _replay(candidates, ballots),
                )

    for x in range(n):
        unanimous_first = all(
            matrix.scores[x][y] == 1 for y in range(n) if y != x
        )
        if unanimous_first and abs(rates[x] - 1) > RATE_TOL:
            raise VerificationFailure(
                f"unanimous first {candidates.names[x]} has rate {rates[x]}",
                _replay(candidates, ballots),
            )
        if not unanimous_first and rates[x] < 1 + RATE_TOL:
            raise VerificationFailure(
                f"{candidates.names[x]} reached rate 1 without unanimity",
                _replay(candidates, ballots),
            )


def approval_counts(
    candidates: CandidateSet, ballots: list[Ballot]
) -> tuple[Fraction, ...]:
    counts = [Fraction(0)] * len(candidates)
    for ballot in ballots:
        for c in ballot.approved():
            counts[c] += ballot.weight
    return tuple(counts)


def check_approval_agreement(candidates: CandidateSet, ballots: list[Ballot]) -> None:
    """On approval profiles the pairwise margins collapse to approval-score
    differences, under every reading of the tied and silent pairs, and the
    margin-completed tally ranks exactly like the approval scores."""
    n = len(candidates)
    total = sum(b.weight for b in ballots)
    approvals = approval_counts(candidates, ballots)

    both = [[Fraction(0)] * n for _ in range(n)]
    only = [[Fraction(0)] * n for _ in range(n)]
    neither = [[Fraction(0)] * n for _ in range(n)]
    for ballot in ballots:
        approved = ballot.approved()
        for x in range(n):
            for y in range(n):
                if x == y:
                    continue
                if x in approved and y in approved:
                    both[x][y] += ballot.weight
                elif x in approved:
                    only[x][y] += ballot.weight
                elif y not in approved:
                    neither[x][y] += ballot.weight

    half = Fraction(1, 2)
    readings = {
        "silent pairs ignored": lambda x, y: only[x][y] + half * both[x][y],
        "silent pairs tied": lambda x, y: only[x][y] + half * both[x][y] + half * neither[x][y],
        "approved pairs silent": lambda x, y: only[x][y],
    }
    for label, score in readings.items():
        for x in range(n):
            for y in range(n):
                if x == y:
                    continue
                margin = score(x, y) - score(y, x)
                if margin != approvals[x] - approvals[y]:
                    raise VerificationFailure(
                        f"margin identity fails for ({x}, {y}) with {label}",
                        _replay(candidates, ballots),
                    )

    matrix = aggregate(ballots, InterpretationRules(), candidates, total)
    for x in range(n):
        for y in range(n):
            if x != y and matrix.scores[x][y] * total != only[x][y] + half * both[x][y]:
                raise VerificationFailure(
                    "aggregation disagrees with the direct approval counts",
                    _replay(candidates, ballots),
                )
    rates = _rates(matrix, Variant.MARGIN_BASED)
    for x in range(n):
        for y in range(n):
            if x == y:
                continue
            rate_says = rates[x] < rates[y] - RATE_TOL
            score_says = approvals[x] > approvals[y]
            if rate_says != score_says:
                raise VerificationFailure(
                    f"margin-based ranking of ({candidates.names[x]}, "
                    f"{candidates.names[y]}) disagrees with approval scores",
                    _replay(candidates, ballots),
                )


def check_continuity(
    matrix: LlullMatrix, direction: dict[tuple[int, int], Fraction]
) -> None:
    """Shrinking a perturbation shrinks the rate movement toward zero."""
    base = _rates(matrix)

    def perturbed(scale: Fraction) -> LlullMatrix:
        scores = [list(row) for row in matrix.scores]
        for (x, y), step in direction.items():
            scores[x][y] += step * scale
        return LlullMatrix(matrix.candidates, tuple(map(tuple, scores)), matrix.total)

    drifts = []
    for exponent in range(2, 7):
        scale = Fraction(1, 10**exponent)
        rates = _rates(perturbed(scale))
        drifts.append(max(abs(a - b) for a, b in zip(rates, base)))
    for small, large in zip(drifts[1:], drifts[:-1]):
        if small > large + RATE_TOL:
            raise VerificationFailure(
                f"rate drift grew from {large} to {small} as the perturbation shrank",
                write_matrix(matrix),
            )
    if drifts[-1] > 1e-3:
        raise VerificationFailure(
            f"rate drift {drifts[-1]} did not vanish with the perturbation",
            write_matrix(matrix),
        )
    still = _rates(perturbed(Fraction(0)))
    if tuple(still) != tuple(base):
        raise VerificationFailure("zero perturbation changed the rates",
                                  write_matrix(matrix))


def check_duplication_renaming(
    candidates: CandidateSet, ballots: list[Ballot], copies: int, mapping: tuple[int, ...]
) -> None:
    """Copying every ballot or renaming every candidate cannot move rates."""
    matrix = aggregate(ballots, InterpretationRules(), candidates)
    base = _rates(matrix)

    duplicated = aggregate(
        [b for b in ballots for _ in range(copies)], InterpretationRules(), candidates
    )
    if _rates(duplicated) != base:
        raise VerificationFailure(
            f"{copies} copies of every ballot changed the rates",
            _replay(candidates, ballots),
        )

    renamed_ballots = [
        Ballot(
            tuple(tuple(sorted(mapping[c] for c in group)) for group in b.groups),
            b.approval_cutoff,
            b.weight,
        )
        for b in ballots
    ]
    renamed = aggregate(renamed_ballots, InterpretationRules(), candidates)
    permuted = _rates(renamed)
    for x in range(len(candidates)):
        if abs(permuted[mapping[x]] - base[x]) > RATE_TOL:
            raise VerificationFailure(
                f"renaming moved the rate of candidate {x} by "
                f"{abs(permuted[mapping[x]] - base[x])}",
                _replay(candidates, ballots),
            )


def check_qp_agreement(problem: QpProblem) -> None:
    """Both solvers land on the same projection with clean optimality."""
    primal = solve_active_set(problem)
    residual = kkt_residual(problem, primal)
    if residual > 1e-8:
        raise VerificationFailure(
            f"KKT residual {residual} too large", problem_to_json(problem)
        )
    oracle = solve_dykstra(problem, tol=1e-12)
    gap = max(abs(a - b) for a, b in zip(primal.point, oracle.point))
    if gap > 1e-6:
        raise VerificationFailure(
            f"active-set and alternating projections disagree by {gap}",
            problem_to_json(problem),
        )


# ---------------------------------------------------------------------------
# Case builders: deterministic constructions feeding the checks above.


def _case_single_choice(rng: random.Random) -> None:
    n = rng.randint(2, 8)
    candidates = candidate_names(n)
    ballots = [
        Ballot(((rng.randrange(n),),), None, Fraction(rng.randint(1, 3)))
        for _ in range(rng.randint(1, 12))
    ]
    check_single_choice(candidates, ballots)


def _case_order_independence(rng: random.Random) -> None:
    gen = ProfileGenerator(n_candidates=(3, 5), n_ballots=(2, 10), seed="oi")
    candidates, ballots = _regen(gen, rng)
    matrix = aggregate(ballots, InterpretationRules(), candidates)
    check_order_independence(matrix)


def _regen(gen: ProfileGenerator, rng: random.Random):
    # Re-key the generator on the caller's stream to stay per-case deterministic.
    return ProfileGenerator(
        gen.n_candidates, gen.n_ballots, gen.truncation, gen.tie, gen.approval,
        rng.randrange(2**30),
    ).profile(0)


def _case_idempotence(rng: random.Random) -> str | None:
    matrix = random_matrix(rng, rng.randint(3, 6))
    variant = rng.choice(
        [Variant.MAIN, Variant.MAIN, Variant.CODUAL, Variant.BALANCED, Variant.MARGIN_BASED]
    )
    try:
        check_idempotence(matrix, variant)
    except NotAdmissible as exc:
        if variant in (Variant.CODUAL, Variant.BALANCED):
            return f"skipped: {exc}"  # surfaced, not guaranteed for these variants
        raise
    return None


def _case_condorcet_smith(rng: random.Random) -> None:
    n = rng.randint(3, 6)
    candidates = candidate_names(n)
    members = list(range(n))
    rng.shuffle(members)
    k = rng.randint(1, n - 1)
    top, rest = members[:k], members[k:]
    voters = 2 * rng.randint(2, 5) + 1
    majority = voters // 2 + 1
    ballots = []
    for _ in range(majority):
        perm_top = top[:]
        perm_rest = rest[:]
        rng.shuffle(perm_top)
        rng.shuffle(perm_rest)
        keep = rng.randint(0, len(perm_rest))
        listing = perm_top + perm_rest[:keep]
        ballots.append(Ballot(tuple((c,) for c in listing)))
    for _ in range(voters - majority):
        listing = members[:]
        rng.shuffle(listing)
        listing = listing[: rng.randint(1, n)]
        ballots.append(Ballot(tuple((c,) for c in listing)))
    matrix = aggregate(ballots, InterpretationRules(), candidates)
    if check_condorcet_smith(matrix) == 0:
        raise VerificationFailure("constructed majority partition did not qualify",
                                  _replay(candidates, ballots))
    return margin_form_notes(matrix) or None


def _case_clone_consistency(rng: random.Random) -> None:
    base_n = rng.randint(2, 4)
    k = rng.randint(2, 3)
    base = random_matrix(rng, base_n)
    cloned = base_n - 1  # expand the last base candidate into k clones
    n = base_n - 1 + k
    clones = frozenset(range(base_n - 1, n))
    scores = [[Fraction(0)] * n for _ in range(n)]
    for x in range(base_n - 1):
        for y in range(base_n - 1):
            scores[x][y] = base.scores[x][y]
    for a in clones:
        for x in range(base_n - 1):
            scores[a][x] = base.scores[cloned][x]
            scores[x][a] = base.scores[x][cloned]
    for a in clones:
        for b in clones:
            if a < b:
                turnout = rng.randint(0, 12)
                forward = rng.randint(0, turnout)
                scores[a][b] = Fraction(forward, 12)
                scores[b][a] = Fraction(turnout - forward, 12)
    matrix = LlullMatrix(candidate_names(n), tuple(map(tuple, scores)), Fraction(1))
    check_clone_consistency(matrix, clones)


def _case_monotonicity(rng: random.Random) -> None:
    n = rng.randint(3, 6)
    matrix = random_matrix(rng, n)
    favored = rng.randrange(n)
    scores = [list(row) for row in matrix.scores]
    changed = False
    for y in range(n):
        if y == favored:
            continue
        headroom = 1 - scores[favored][y] - scores[y][favored]
        if rng.random() < 0.6 and headroom > 0:
            scores[favored][y] += Fraction(rng.randint(1, headroom.numerator),
                                           headroom.denominator)
            changed = True
        if rng.random() < 0.4 and scores[y][favored] > 0:
            drop = scores[y][favored]
            scores[y][favored] -= Fraction(rng.randint(1, drop.numerator),
                                           drop.denominator)
            changed = True
    # A case that changed nothing is the trivial equality check.
    perturbed = LlullMatrix(matrix.candidates, tuple(map(tuple, scores)), matrix.total)
    check_monotonicity(matrix, favored, perturbed)


def _case_decomposition(rng: random.Random) -> None:
    n = rng.randint(3, 6)
    candidates = candidate_names(n)
    members = list(range(n))
    rng.shuffle(members)
    k = rng.randint(1, n - 1)
    top, rest = members[:k], members[k:]
    ballots = []
    for _ in range(rng.randint(2, 10)):
        perm_top = top[:]
        rng.shuffle(perm_top)
        groups = _tie_up(perm_top, rng)
        perm_rest = rest[:]
        rng.shuffle(perm_rest)
        groups += _tie_up(perm_rest[: rng.randint(0, len(perm_rest))], rng)
        ballots.append(Ballot(tuple(groups), None, Fraction(rng.randint(1, 2))))
    check_decomposition(candidates, ballots, frozenset(top))


def _tie_up(items: list[int], rng: random.Random) -> list[tuple[int, ...]]:
    groups: list[list[int]] = []
    for c in items:
        if groups and rng.random() < 0.25:
            groups[-1].append(c)
        else:
            groups.append([c])
    return [tuple(sorted(g)) for g in groups]


def _case_approval_agreement(rng: random.Random) -> None:
    gen = ProfileGenerator(n_candidates=(2, 6), n_ballots=(1, 14), approval=True)
    candidates, ballots = _regen(gen, rng)
    check_approval_agreement(candidates, ballots)


def _case_continuity(rng: random.Random) -> None:
    n = rng.randint(3, 5)
    matrix = random_matrix(rng, n)
    scores = [list(row) for row in matrix.scores]
    x, y = rng.sample(range(n), 2)
    tied = min(scores[x][y], scores[y][x])
    scores[x][y] = scores[y][x] = tied  # an exact tie the order can flip over
    matrix = LlullMatrix(matrix.candidates, tuple(map(tuple, scores)), matrix.total)
    direction: dict[tuple[int, int], Fraction] = {}
    wanted = rng.randint(1, 4)
    pairs = [(p, q) for p in range(n) for q in range(n) if p != q]
    rng.shuffle(pairs)
    for p, q in pairs:
        if len(direction) == wanted:
            break
        headroom = 1 - matrix.scores[p][q] - matrix.scores[q][p]
        if headroom > 0:
            direction[(p, q)] = headroom
        elif matrix.scores[p][q] > 0:
            direction[(p, q)] = -matrix.scores[p][q]
    check_continuity(matrix, direction)


def _case_duplication_renaming(rng: random.Random) -> None:
    gen = ProfileGenerator(n_candidates=(2, 6), n_ballots=(1, 10))
    candidates, ballots = _regen(gen, rng)
    mapping = list(range(len(candidates)))
    rng.shuffle(mapping)
    check_duplication_renaming(candidates, ballots, rng.randint(2, 3), tuple(mapping))


def _case_paths(rng: random.Random) -> None:
    check_paths(random_matrix(rng, rng.randint(2, 5)))


def _case_qp_agreement(rng: random.Random) -> None:
    d = rng.randint(1, 15)
    feasible = [rng.uniform(-1.0, 2.0) for _ in range(d)]
    bounds: list[tuple[float | None, float | None]] = []
    for k in range(d):
        roll = rng.random()
        if roll < 0.15:
            bounds.append((feasible[k], feasible[k]))
        elif roll < 0.6:
            lo = feasible[k] - rng.uniform(0.0, 1.0) if rng.random() < 0.8 else None
            hi = feasible[k] + rng.uniform(0.0, 1.0) if rng.random() < 0.8 else None
            bounds.append((lo, hi))
        else:
            bounds.append((None, None))
    diffs = []
    for _ in range(rng.randint(0, 2 * d)):
        i, j = rng.sample(range(d), 2) if d > 1 else (0, 0)
        if i == j:
            continue
        gap = feasible[i] - feasible[j]
        if rng.random() < 0.15:
            diffs.append((i, j, gap, gap))
        else:
            diffs.append((i, j, gap - rng.uniform(0.0, 1.0), gap + rng.uniform(0.0, 1.0)))
    center = tuple(rng.uniform(-2.0, 3.0) for _ in range(d))
    check_qp_agreement(QpProblem(center, tuple(bounds), tuple(diffs)))


# ---------------------------------------------------------------------------
# Suite runner.


@dataclass(frozen=True)
class CaseOutcome:
    suite: str
    case: int | str
    passed: bool
    detail: str = ""
    replay: str = ""


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    outcomes: tuple[CaseOutcome, ...]

    @property
    def passed(self) -> bool:
        return all(o.passed for o in self.outcomes)

    @property
    def failures(self) -> tuple[CaseOutcome, ...]:
        return tuple(o for o in self.outcomes if not o.passed)


SUITES = {
    "single-choice": _case_single_choice,
    "order-independence": _case_order_independence,
    "idempotence": _case_idempotence,
    "condorcet-smith": _case_condorcet_smith,
    "clone-consistency": _case_clone_consistency,
    "monotonicity": _case_monotonicity,
    "decomposition": _case_decomposition,
    "approval-agreement": _case_approval_agreement,
    "continuity": _case_continuity,
    "duplication-renaming": _case_duplication_renaming,
    "paths": _case_paths,
    "qp-agreement": _case_qp_agreement,
}


def _fixture_case(
    suite: str, candidates: CandidateSet, ballots: list[Ballot]
) -> CaseOutcome | None:
    try:
        if suite == "approval-agreement":
            check_approval_agreement(candidates, ballots)
        elif suite == "order-independence":
            matrix = aggregate(ballots, InterpretationRules(), candidates)
            if matrix.n > 6:
                return None
            check_order_independence(matrix)
        elif suite == "condorcet-smith":
            check_condorcet_smith(aggregate(ballots, InterpretationRules(), candidates))
        elif suite == "idempotence":
            check_idempotence(aggregate(ballots, InterpretationRules(), candidates))
        elif suite == "paths":
            matrix = aggregate(ballots, InterpretationRules(), candidates)
            if matrix.n > 6:
                return None
            check_paths(matrix)
        else:
            return None
    except VerificationFailure as failure:
        return CaseOutcome(suite, "fixture", False, str(failure), failure.replay)
    return CaseOutcome(suite, "fixture", True)


def run_suite(
    name: str,
    cases: int = 100,
    seed: int = 0,
    fixture: tuple[CandidateSet, list[Ballot]] | None = None,
) -> SuiteReport:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    builder = SUITES[name]
    outcomes: list[CaseOutcome] = []
    if fixture is not None:
        outcome = _fixture_case(name, *fixture)
        if outcome is not None:
            outcomes.append(outcome)
    for case in range(cases):
        rng = random.Random(f"{seed}:{name}:{case}")
        try:
            note = builder(rng)
            outcomes.append(CaseOutcome(name, case, True, note or ""))
        except VerificationFailure as failure:
            outcomes.append(CaseOutcome(name, case, False, str(failure), failure.replay))
        except Exception as exc:  # surfaced, never silently swallowed
            outcomes.append(
                CaseOutcome(name, case, False, f"{type(exc).__name__}: {exc}")
            )
    return SuiteReport(name, tuple(outcomes))


def run_all(
    cases: int = 100,
    seed: int = 0,
    fixture: tuple[CandidateSet, list[Ballot]] | None = None,
) -> list[SuiteReport]:
    return [run_suite(name, cases, seed, fixture) for name in SUITES]
