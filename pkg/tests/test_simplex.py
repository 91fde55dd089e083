"""LP engine: random-instance oracle, certificates, warm starts, cycling."""

import itertools

import numpy as np
import pytest

from intransit import LpProblem, solve_lp, verify_certificate
from intransit.errors import SolverError
from intransit.simplex import (
    STATUS_INFEASIBLE,
    STATUS_OPTIMAL,
    STATUS_UNBOUNDED,
)

ORACLE_TOL = 1e-7


def enumerate_vertices(problem: LpProblem):
    """Brute-force basic feasible solutions of the standard form.

    Returns (best objective or None, any feasible vertex exists). Only for
    tiny problems: tries every basis of [A | slacks].
    """
    A = problem.A.toarray() if hasattr(problem.A, "toarray") else np.asarray(problem.A)
    m, n = A.shape
    le_rows = np.flatnonzero(problem.senses == "<")
    slacks = np.zeros((m, len(le_rows)))
    slacks[le_rows, np.arange(len(le_rows))] = 1.0
    A_std = np.concatenate([A, slacks], axis=1)
    total = A_std.shape[1]
    rank = np.linalg.matrix_rank(A_std) if A_std.size else 0
    resid_tol = 1e-8 * (1.0 + float(np.abs(problem.rhs).max(initial=0.0)))
    best = None
    feasible = False
    # a vertex has at most rank(A_std) nonzeros, so rank-sized column
    # subsets with a consistent least-squares fit cover redundant rows too
    for combo in itertools.combinations(range(total), rank):
        B = A_std[:, combo]
        xb, *_ = np.linalg.lstsq(B, problem.rhs, rcond=None)
        if not np.all(np.isfinite(xb)) or xb.min(initial=0.0) < -1e-9:
            continue
        if float(np.abs(B @ xb - problem.rhs).max(initial=0.0)) > resid_tol:
            continue
        feasible = True
        x = np.zeros(total)
        x[list(combo)] = xb
        val = float(problem.objective @ x[:n])
        if best is None or val < best:
            best = val
    if rank == 0 and not np.abs(problem.rhs).max(initial=0.0) > resid_tol:
        feasible = True
        best = 0.0
    return best, feasible


def has_improving_ray(problem: LpProblem) -> bool:
    """Check for a recession direction with negative cost (tiny LPs only)."""
    from scipy.optimize import linprog

    A = problem.A.toarray() if hasattr(problem.A, "toarray") else np.asarray(problem.A)
    le = problem.senses == "<"
    res = linprog(
        problem.objective,
        A_ub=A[le] if le.any() else None,
        b_ub=np.zeros(le.sum()) if le.any() else None,
        A_eq=A[~le] if (~le).any() else None,
        b_eq=np.zeros((~le).sum()) if (~le).any() else None,
        bounds=[(0, 1)] * problem.num_cols,
        method="highs",
    )
    return res.status == 0 and res.fun < -1e-9


def random_problem(rng: np.random.Generator) -> LpProblem:
    m = int(rng.integers(1, 5))
    n = int(rng.integers(1, 6))
    A = np.round(rng.uniform(-5, 5, size=(m, n)), 1)
    A[rng.uniform(size=(m, n)) < 0.3] = 0.0
    c = np.round(rng.uniform(-4, 10, size=n), 1)
    b = np.round(rng.uniform(-3, 10, size=m), 1)
    senses = np.where(rng.uniform(size=m) < 0.5, "<", "=")
    if m > 1 and rng.uniform() < 0.15:
        A[-1] = A[0]  # duplicated row: degenerate or inconsistent
        senses[-1] = senses[0]
        if rng.uniform() < 0.5:
            b[-1] = b[0]
    if rng.uniform() < 0.15:
        b[rng.integers(0, m)] = 0.0  # primal degeneracy
    return LpProblem(objective=c, A=A, senses=senses, rhs=b)


class TestRandomOracle:
    @pytest.mark.parametrize("block", range(10))
    def test_against_vertex_enumeration(self, block):
        # 10 blocks x 60 instances: every outcome independently certified
        # and optima matched against brute-force vertex enumeration
        rng = np.random.default_rng(6800 + block)
        for _ in range(60):
            problem = random_problem(rng)
            outcome = solve_lp(problem)
            report = verify_certificate(problem, outcome)
            assert report.ok, (outcome.status, report.failures)
            best, feasible = enumerate_vertices(problem)
            if outcome.status == STATUS_OPTIMAL:
                assert best is not None
                scale = 1.0 + abs(best)
                assert abs(outcome.objective - best) <= ORACLE_TOL * scale
            elif outcome.status == STATUS_INFEASIBLE:
                assert not feasible
            else:
                assert outcome.status == STATUS_UNBOUNDED
                assert feasible
                assert has_improving_ray(problem)


class TestBasicOutcomes:
    def test_single_equality(self):
        problem = LpProblem(
            objective=np.array([3.0]),
            A=np.array([[2.0]]),
            senses=np.array(["="]),
            rhs=np.array([4.0]),
        )
        out = solve_lp(problem)
        assert out.status == STATUS_OPTIMAL
        assert out.x[0] == pytest.approx(2.0)
        assert out.objective == pytest.approx(6.0)

    def test_no_rows_zero_optimum(self):
        problem = LpProblem(
            objective=np.array([1.0, 2.0]),
            A=np.zeros((0, 2)),
            senses=np.array([], dtype="<U1"),
            rhs=np.array([]),
        )
        out = solve_lp(problem)
        assert out.status == STATUS_OPTIMAL
        assert out.objective == 0.0

    def test_no_rows_unbounded(self):
        problem = LpProblem(
            objective=np.array([1.0, -2.0]),
            A=np.zeros((0, 2)),
            senses=np.array([], dtype="<U1"),
            rhs=np.array([]),
        )
        out = solve_lp(problem)
        assert out.status == STATUS_UNBOUNDED
        assert verify_certificate(problem, out).ok

    def test_infeasible_equalities(self):
        problem = LpProblem(
            objective=np.array([1.0]),
            A=np.array([[1.0], [1.0]]),
            senses=np.array(["=", "="]),
            rhs=np.array([1.0, 2.0]),
        )
        out = solve_lp(problem)
        assert out.status == STATUS_INFEASIBLE
        assert verify_certificate(problem, out).ok

    def test_negative_rhs_inequality(self):
        # x <= -1 with x >= 0 is infeasible; -x <= -1 forces x >= 1
        problem = LpProblem(
            objective=np.array([2.0]),
            A=np.array([[-1.0]]),
            senses=np.array(["<"]),
            rhs=np.array([-1.0]),
        )
        out = solve_lp(problem)
        assert out.status == STATUS_OPTIMAL
        assert out.x[0] == pytest.approx(1.0)

    def test_unbounded_with_rows(self):
        # minimize -x subject to a row that never binds x's growth
        problem = LpProblem(
            objective=np.array([-1.0, 0.0]),
            A=np.array([[0.0, 1.0]]),
            senses=np.array(["<"]),
            rhs=np.array([5.0]),
        )
        out = solve_lp(problem)
        assert out.status == STATUS_UNBOUNDED
        assert verify_certificate(problem, out).ok

    def test_duals_price_binding_rows(self):
        # min x1 + x2 with x1 + x2 >= 2 written as -x1 - x2 <= -2
        problem = LpProblem(
            objective=np.array([1.0, 1.0]),
            A=np.array([[-1.0, -1.0]]),
            senses=np.array(["<"]),
            rhs=np.array([-2.0]),
        )
        out = solve_lp(problem)
        assert out.status == STATUS_OPTIMAL
        assert out.objective == pytest.approx(2.0)
        assert out.y[0] == pytest.approx(-1.0)

    def test_rejects_nan(self):
        with pytest.raises(SolverError):
            LpProblem(
                objective=np.array([np.nan]),
                A=np.array([[1.0]]),
                senses=np.array(["="]),
                rhs=np.array([1.0]),
            )

    def test_rejects_bad_sense(self):
        with pytest.raises(SolverError):
            LpProblem(
                objective=np.array([1.0]),
                A=np.array([[1.0]]),
                senses=np.array([">"]),
                rhs=np.array([1.0]),
            )


class TestDegenerateCycling:
    def test_beale_example_terminates(self):
        # the classical cycling configuration for textbook Dantzig pivoting
        A = np.array(
            [
                [0.25, -60.0, -1.0 / 25.0, 9.0],
                [0.5, -90.0, -1.0 / 50.0, 3.0],
                [0.0, 0.0, 1.0, 0.0],
            ]
        )
        problem = LpProblem(
            objective=np.array([-0.75, 150.0, -0.02, 6.0]),
            A=A,
            senses=np.array(["<", "<", "<"]),
            rhs=np.array([0.0, 0.0, 1.0]),
        )
        out = solve_lp(problem)
        assert out.status == STATUS_OPTIMAL
        assert verify_certificate(problem, out).ok
        best, _ = enumerate_vertices(problem)
        assert out.objective == pytest.approx(best, abs=1e-9)

    def test_highly_degenerate_equalities(self):
        # many duplicate zero-rhs rows stacked on one small system
        rng = np.random.default_rng(3)
        base = np.round(rng.uniform(-2, 2, size=(2, 6)), 1)
        A = np.concatenate([base, base, base], axis=0)
        problem = LpProblem(
            objective=np.round(rng.uniform(0, 3, size=6), 1),
            A=A,
            senses=np.array(["="] * 6),
            rhs=np.zeros(6),
        )
        out = solve_lp(problem)
        assert out.status == STATUS_OPTIMAL
        assert out.objective == pytest.approx(0.0, abs=1e-9)

    def test_bland_fallback_small_budget(self):
        # force the Bland switch almost immediately; must still terminate
        rng = np.random.default_rng(9)
        A = np.round(rng.uniform(-3, 3, size=(4, 7)), 1)
        problem = LpProblem(
            objective=np.round(rng.uniform(-2, 5, size=7), 1),
            A=A,
            senses=np.array(["<", "<", "=", "="]),
            rhs=np.array([4.0, 0.0, 0.0, 1.0]),
        )
        cold = solve_lp(problem)
        switched = solve_lp(problem, bland_threshold=1)
        assert switched.status == cold.status
        if cold.status == STATUS_OPTIMAL:
            assert switched.objective == pytest.approx(cold.objective, rel=1e-9)


class TestWarmStart:
    def _problem(self, rhs_shift=0.0):
        A = np.array(
            [
                [1.0, 1.0, 0.0, 2.0],
                [0.0, 1.0, 1.0, 0.0],
                [1.0, 0.0, 2.0, 1.0],
            ]
        )
        return LpProblem(
            objective=np.array([2.0, 3.0, 1.0, 4.0]),
            A=A,
            senses=np.array(["=", "<", "<"]),
            rhs=np.array([4.0 + rhs_shift, 3.0, 6.0]),
        )

    def test_warm_matches_cold_after_rhs_change(self):
        base = solve_lp(self._problem())
        assert base.status == STATUS_OPTIMAL
        for shift in (-1.0, -0.5, 0.25, 1.0, 2.0):
            changed = self._problem(shift)
            warm = solve_lp(changed, warm=base.basis)
            cold = solve_lp(changed)
            assert warm.status == cold.status
            if cold.status == STATUS_OPTIMAL:
                assert warm.objective == pytest.approx(cold.objective, rel=1e-9)
                assert verify_certificate(changed, warm).ok
            else:
                assert verify_certificate(changed, warm).ok

    def test_warm_to_infeasible_gives_farkas(self):
        base = solve_lp(self._problem())
        infeasible = LpProblem(
            objective=np.array([2.0, 3.0, 1.0, 4.0]),
            A=np.array(
                [
                    [1.0, 1.0, 0.0, 2.0],
                    [0.0, 1.0, 1.0, 0.0],
                    [-1.0, -1.0, 0.0, -2.0],
                ]
            ),
            senses=np.array(["=", "<", "<"]),
            rhs=np.array([4.0, 3.0, -9.0]),
        )
        out = solve_lp(infeasible, warm=base.basis)
        assert out.status == STATUS_INFEASIBLE
        assert verify_certificate(infeasible, out).ok

    def test_random_warm_cold_agreement(self):
        rng = np.random.default_rng(42)
        checked = 0
        for _ in range(250):
            problem = random_problem(rng)
            base = solve_lp(problem)
            if base.status != STATUS_OPTIMAL:
                continue
            shifted = LpProblem(
                objective=problem.objective,
                A=problem.A,
                senses=problem.senses,
                rhs=problem.rhs + np.round(rng.uniform(-1, 1, problem.num_rows), 1),
            )
            warm = solve_lp(shifted, warm=base.basis)
            cold = solve_lp(shifted)
            assert warm.status == cold.status
            if cold.status == STATUS_OPTIMAL:
                scale = 1.0 + abs(cold.objective)
                assert abs(warm.objective - cold.objective) <= 1e-8 * scale
            checked += 1
        assert checked > 50


class TestScaling:
    def test_wide_coefficient_range(self):
        # rows mixing unit and 1e5-size coefficients must still certify
        problem = LpProblem(
            objective=np.array([0.3, 0.2, 48000.0]),
            A=np.array(
                [
                    [1.0, 1.0, 0.0],
                    [0.0, 1.0, -48000.0],
                    [-1.0, -1.0, 0.0],
                ]
            ),
            senses=np.array(["=", "<", "<"]),
            rhs=np.array([120000.0, 0.0, -120000.0]),
        )
        out = solve_lp(problem)
        assert out.status == STATUS_OPTIMAL
        assert verify_certificate(problem, out).ok

    def test_objective_recovered_in_original_units(self):
        rng = np.random.default_rng(8)
        for _ in range(30):
            problem = random_problem(rng)
            scale = float(rng.choice([1e-4, 1e-2, 1e2, 1e4]))
            scaled = LpProblem(
                objective=problem.objective * scale,
                A=problem.A,
                senses=problem.senses,
                rhs=problem.rhs,
            )
            a, b = solve_lp(problem), solve_lp(scaled)
            assert a.status == b.status
            if a.status == STATUS_OPTIMAL:
                want = a.objective * scale
                assert b.objective == pytest.approx(want, rel=1e-9, abs=1e-12)
