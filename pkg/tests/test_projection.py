import random
from fractions import Fraction

import pytest

from llull.ballots import CandidateSet, InterpretationRules, read_ballot_file
from llull.closures import Variant, indirect_scores, variant_margins
from llull.errors import LlullError
from llull.generate import candidate_names, random_matrix
from llull.matrix import LlullMatrix, aggregate, margins, turnouts
from llull.ordering import admissible_order
from llull.projection import (
    build_intervals,
    intermediate_margins,
    project,
    project_details,
    project_turnouts,
    project_with_order,
)
from llull.verify import matrix_from_floats

RULES = InterpretationRules()


@pytest.fixture(scope="module")
def royal(royal_text):
    cands, ballots = read_ballot_file(royal_text)
    matrix = aggregate(ballots, RULES, cands)
    return matrix, project_details(matrix)


def rect_min_oracle(vm_grid, seq, i, j):
    return min(
        vm_grid[seq[p]][seq[q]] for p in range(i + 1) for q in range(j, len(seq))
    )


class TestIntermediateMargins:
    def test_royal_reduction_of_the_f_d_margin(self, royal):
        matrix, details = royal
        # position grid: order is b,a,e,f,d,c so f is position 3, d position 4
        assert details.vm.m[5][3] * matrix.total == 2  # direct indirect margin
        assert details.im.msigma[3][4] * matrix.total == 1  # rectangle minimum

    def test_royal_superdiagonal(self, royal):
        matrix, details = royal
        assert [m * matrix.total for m in details.im.superdiagonal] == [2, 0, 0, 1, 2]

    def test_constant_margins_stay_unchanged(self):
        n = 4
        cands = candidate_names(n)
        scores = [[Fraction(0)] * n for _ in range(n)]
        for x in range(n):
            for y in range(x + 1, n):
                scores[x][y] = Fraction(3, 4)
                scores[y][x] = Fraction(1, 4)
        matrix = LlullMatrix(cands, tuple(map(tuple, scores)), Fraction(1))
        details = project_details(matrix)
        seq = details.xi.sequence
        for i in range(n):
            for j in range(i + 1, n):
                assert details.im.msigma[i][j] == details.vm.m[seq[i]][seq[j]]

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_double_loop_oracle(self, seed):
        rng = random.Random(seed)
        matrix = random_matrix(rng, 5)
        details = project_details(matrix)
        seq = details.xi.sequence
        for i in range(5):
            for j in range(i + 1, 5):
                assert details.im.msigma[i][j] == rect_min_oracle(
                    details.vm.m, seq, i, j
                )


class TestProjectedTurnouts:
    def test_royal_printed_values(self, royal):
        matrix, details = royal
        V = float(matrix.total)
        t = details.pt.tsigma
        sixth = {(1, 4): 16 / 3, (2, 4): 16 / 3, (3, 4): 16 / 3,
                 (1, 5): 14 / 3, (2, 5): 14 / 3, (3, 5): 14 / 3,
                 (4, 5): 4.0}
        for i in range(6):
            for j in range(i + 1, 6):
                expected = sixth.get((i, j), 6.0)
                assert t[i][j] * V == pytest.approx(expected, abs=1e-9)
                assert t[j][i] == t[i][j]

    def test_complete_case_returns_all_ones_exactly(self):
        cands, ballots = read_ballot_file(
            "candidates: a b c d\na>b>c>d\nd>c>b>a\nb=c>a=d\n"
        )
        matrix = aggregate(ballots, RULES, cands)
        details = project_details(matrix)
        for i in range(4):
            for j in range(4):
                if i != j:
                    assert details.pt.tsigma[i][j] == 1.0

    def test_single_choice_keeps_raw_turnouts(self):
        cands, ballots = read_ballot_file("candidates: a b c\n3: a\n2: b\nc\n")
        matrix = aggregate(ballots, RULES, cands)
        details = project_details(matrix)
        seq = details.xi.sequence
        t = turnouts(matrix)
        for i in range(3):
            for j in range(i + 1, 3):
                assert details.pt.tsigma[i][j] == pytest.approx(
                    float(t.t[seq[i]][seq[j]]), abs=1e-10
                )


class TestIntervals:
    def test_royal_intervals(self, royal):
        matrix, details = royal
        V = float(matrix.total)
        gammas = details.intervals
        assert gammas[3].lo * V == pytest.approx(13 / 6, abs=1e-9)  # f-d
        assert gammas[3].hi * V == pytest.approx(19 / 6, abs=1e-9)
        assert gammas[4].lo * V == pytest.approx(1.0, abs=1e-9)  # d-c
        assert gammas[4].hi * V == pytest.approx(3.0, abs=1e-9)

    def test_zero_margin_makes_a_point_interval(self, royal):
        _, details = royal
        assert details.im.superdiagonal[1] == 0
        assert details.intervals[1].lo == details.intervals[1].hi

    @pytest.mark.parametrize("seed", range(12))
    def test_interval_union_laws(self, seed):
        rng = random.Random(300 + seed)
        matrix = random_matrix(rng, rng.randint(3, 6))
        details = project_details(matrix)
        n = matrix.n
        seq = details.xi.sequence
        pi = details.pm.pi
        tol = 1e-9

        def gamma(i, j):  # interval for order positions i < j
            return pi[seq[j]][seq[i]], pi[seq[i]][seq[j]]

        for i in range(n):
            for j in range(i + 1, n):
                lo, hi = gamma(i, j)
                assert lo <= hi + tol
                assert -tol <= lo and hi <= 1 + tol
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    lo_ij, hi_ij = gamma(i, j)
                    lo_jk, hi_jk = gamma(j, k)
                    lo_ik, hi_ik = gamma(i, k)
                    # union, nonempty intersection, length, centers
                    assert lo_ik == pytest.approx(min(lo_ij, lo_jk), abs=tol)
                    assert hi_ik == pytest.approx(max(hi_ij, hi_jk), abs=tol)
                    assert max(lo_ij, lo_jk) <= min(hi_ij, hi_jk) + tol
                    assert hi_ik - lo_ik >= max(hi_ij - lo_ij, hi_jk - lo_jk) - tol
                    c_ij, c_ik, c_jk = (
                        (lo_ij + hi_ij) / 2,
                        (lo_ik + hi_ik) / 2,
                        (lo_jk + hi_jk) / 2,
                    )
                    assert c_ij + tol >= c_ik >= c_jk - tol
                    assert c_ij - (hi_jk - lo_jk) / 2 <= c_ik + tol
                    assert c_ik <= c_jk + (hi_ij - lo_ij) / 2 + tol


class TestProjectedScores:
    def test_royal_full_matrix(self, royal):
        matrix, details = royal
        V = matrix.total
        names = "abcdef"
        expected = {
            "b": {"a": 4, "e": 4, "f": 4, "d": 4, "c": 4},
            "a": {"b": 2, "e": 3, "f": 3, "d": Fraction(19, 6), "c": Fraction(19, 6)},
            "e": {"b": 2, "a": 3, "f": 3, "d": Fraction(19, 6), "c": Fraction(19, 6)},
            "f": {"b": 2, "a": 3, "e": 3, "d": Fraction(19, 6), "c": Fraction(19, 6)},
            "d": {"b": 2, "a": Fraction(13, 6), "e": Fraction(13, 6),
                  "f": Fraction(13, 6), "c": 3},
            "c": {"b": 1, "a": 1, "e": 1, "f": 1, "d": 1},
        }
        for x, row in expected.items():
            for y, value in row.items():
                got = details.pm.pi[names.index(x)][names.index(y)] * V
                assert got == pytest.approx(float(value), abs=1e-9)

    def test_two_candidates_scores_are_interval_endpoints(self):
        cands, ballots = read_ballot_file("candidates: a b\n3: a>b\nb>a\n")
        details = project_details(aggregate(ballots, RULES, cands))
        gamma = details.intervals[0]
        seq = details.xi.sequence
        assert details.pm.pi[seq[0]][seq[1]] == gamma.hi
        assert details.pm.pi[seq[1]][seq[0]] == gamma.lo

    @pytest.mark.parametrize("seed", range(10))
    def test_union_formulation_matches_running_extrema(self, seed):
        rng = random.Random(400 + seed)
        matrix = random_matrix(rng, rng.randint(3, 6))
        details = project_details(matrix)
        n = matrix.n
        seq = details.xi.sequence
        for i in range(n):
            for j in range(i + 1, n):
                union_lo = min(g.lo for g in details.intervals[i:j])
                union_hi = max(g.hi for g in details.intervals[i:j])
                assert details.pm.pi[seq[i]][seq[j]] == union_hi
                assert details.pm.pi[seq[j]][seq[i]] == union_lo


class TestProjectOperator:
    @pytest.mark.parametrize("seed", range(15))
    def test_idempotence_and_structure(self, seed):
        rng = random.Random(500 + seed)
        matrix = random_matrix(rng, 4)
        pm = project(matrix)
        pm.check_structure()
        again = project(matrix_from_floats(matrix.candidates, pm.pi))
        for x in range(4):
            for y in range(4):
                if x != y:
                    assert again.pi[x][y] == pytest.approx(pm.pi[x][y], abs=1e-9)

    def test_single_choice_projection_is_identity(self):
        cands, ballots = read_ballot_file("candidates: a b c d\n4: a\n2: b\nc\nd\n")
        matrix = aggregate(ballots, RULES, cands)
        pm = project(matrix)
        for x in range(4):
            for y in range(4):
                if x != y:
                    assert pm.pi[x][y] == pytest.approx(
                        float(matrix.scores[x][y]), abs=1e-12
                    )

    def test_structured_matrices_are_fixed_points(self):
        # dyadic entries make the float passage exact, so equality is exact
        rng = random.Random(41)
        for _ in range(8):
            n = rng.randint(3, 6)
            # integer turnouts/margins in eighths: tau nonincreasing (centers),
            # and tau_prev - m_prev <= tau + m (consecutive intervals overlap)
            taus, ms = [rng.randint(0, 8)], []
            ms.append(rng.randint(0, taus[0]))
            for _ in range(n - 2):
                lowest = (taus[-1] - ms[-1] + 1) // 2
                tau = rng.randint(lowest, taus[-1])
                m = rng.randint(max(0, taus[-1] - ms[-1] - tau), tau)
                taus.append(tau)
                ms.append(m)
            his = [Fraction(t + m, 16) for t, m in zip(taus, ms)]
            los = [Fraction(t - m, 16) for t, m in zip(taus, ms)]
            scores = [[Fraction(0)] * n for _ in range(n)]
            for i in range(n):
                for j in range(i + 1, n):
                    scores[i][j] = max(his[i:j])
                    scores[j][i] = min(los[i:j])
            matrix = LlullMatrix(candidate_names(n), tuple(map(tuple, scores)), Fraction(1))
            pm = project(matrix)
            for x in range(n):
                for y in range(n):
                    if x != y:
                        assert pm.pi[x][y] == float(matrix.scores[x][y])

    def test_margin_based_runs_on_completed_matrix(self, royal):
        matrix, _ = royal
        details = project_details(matrix, Variant.MARGIN_BASED)
        assert all(
            details.effective.scores[x][y] + details.effective.scores[y][x] == 1
            for x in range(6)
            for y in range(6)
            if x != y
        )
        for i in range(6):
            for j in range(6):
                if i != j:
                    assert details.pt.tsigma[i][j] == 1.0

    def test_order_choice_does_not_change_scores(self, royal):
        matrix, details = royal
        from llull.ordering import enumerate_admissible_orders

        for order in enumerate_admissible_orders(details.vm):
            *_, pm = project_with_order(details.effective, details.vm, order)
            for x in range(6):
                for y in range(6):
                    if x != y:
                        assert pm.pi[x][y] == pytest.approx(
                            details.pm.pi[x][y], abs=1e-9
                        )
