"""Two-phase revised simplex with dual values and infeasibility certificates.

Solves ``min c'x  s.t.  A_eq x = b_eq, A_le x <= b_le, x >= 0`` and returns
one of three certified outcomes:

* Optimal: primal vector, dual vector y (free on ``=`` rows, nonpositive on
  ``<=`` rows), and the objective; strong duality holds within tolerance.
* Infeasible: a Farkas ray y over the rows with ``A'y <= 0`` (respecting
  row signs) and ``y'b > 0``.
* Unbounded: a primal ray r >= 0 with ``A_eq r = 0``, ``A_le r <= 0`` and
  ``c'r < 0``.

The basis is held as a sparse LU factorization with product-form eta
updates and periodic refactorization. Pricing uses Dantzig's rule,
switching permanently to Bland's rule after a run of degenerate pivots so
termination is guaranteed. Phase one uses artificial variables; in phase
two any artificial still basic at zero is pinned there (a pivot that would
move it forces it out of the basis instead), which also neutralizes
linearly dependent rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .errors import SolverError

STATUS_OPTIMAL = "optimal"
STATUS_INFEASIBLE = "infeasible"
STATUS_UNBOUNDED = "unbounded"

DEFAULT_TOL = 1e-7
PIVOT_TOL = 1e-9


@dataclass
class LpProblem:
    """Minimization LP over nonnegative variables.

    ``senses`` holds ``"="`` or ``"<"`` per row; all column lower bounds
    are zero and there are no upper bounds.
    """

    objective: np.ndarray
    A: sp.spmatrix
    senses: np.ndarray
    rhs: np.ndarray

    def __post_init__(self) -> None:
        self.objective = np.asarray(self.objective, dtype=np.float64)
        self.rhs = np.asarray(self.rhs, dtype=np.float64)
        self.senses = np.asarray(self.senses, dtype="<U1")
        if not sp.issparse(self.A):
            # small matrices stay dense and skip sparse-object overhead
            self.A = np.atleast_2d(np.asarray(self.A, dtype=np.float64))
        m, n = self.A.shape
        if self.objective.shape != (n,):
            raise SolverError("objective length does not match column count")
        if self.rhs.shape != (m,) or self.senses.shape != (m,):
            raise SolverError("rhs/senses length does not match row count")
        if not set(self.senses.tolist()) <= {"=", "<"}:
            raise SolverError("senses must be '=' or '<'")
        for name, arr in (("objective", self.objective), ("rhs", self.rhs)):
            if not np.all(np.isfinite(arr)):
                raise SolverError(f"{name} contains NaN or infinite entries")
        entries = self.A.data if sp.issparse(self.A) else self.A
        if not np.all(np.isfinite(entries)):
            raise SolverError("constraint matrix contains NaN or infinite entries")

    @property
    def num_rows(self) -> int:
        return self.A.shape[0]

    @property
    def num_cols(self) -> int:
        return self.A.shape[1]


@dataclass(frozen=True)
class BasisLabels:
    """Row-independent description of an optimal basis.

    ``struct`` holds basic structural column indices, ``slack_rows`` the
    rows whose slack is basic, ``art_rows`` the rows whose artificial is
    basic (degenerate leftovers pinned at zero). Used to warm-start a
    related LP that shares columns and most rows.
    """

    struct: np.ndarray
    slack_rows: np.ndarray
    art_rows: np.ndarray


@dataclass
class LpOutcome:
    status: str
    x: np.ndarray | None = None
    y: np.ndarray | None = None
    objective: float | None = None
    farkas_ray: np.ndarray | None = None
    ray: np.ndarray | None = None
    pivots: int = 0
    basis: BasisLabels | None = None


# below this many matrix cells the dense basis path is faster
DENSE_LIMIT = 1_000_000


class _DenseBasis:
    """Dense twin of :class:`_Basis` for small problems.

    Keeps the full constraint matrix and an explicit basis inverse, which
    avoids sparse-object overhead that dominates at small sizes. The
    product-form update is applied to the inverse directly, so there is no
    eta file.
    """

    def __init__(self, A_std: np.ndarray, n_struct: int):
        self.A = A_std
        self.m = A_std.shape[0]
        self.n_struct = n_struct
        self.basis = np.zeros(self.m, dtype=np.int64)
        self.Binv: np.ndarray | None = None

    def price(self, y: np.ndarray) -> np.ndarray:
        return y @ self.A

    def column(self, j: int) -> np.ndarray:
        if j < self.n_struct:
            return self.A[:, j].copy()
        e = np.zeros(self.m)
        e[j - self.n_struct] = 1.0
        return e

    def refactor(self) -> None:
        B = np.zeros((self.m, self.m))
        struct_pos = np.flatnonzero(self.basis < self.n_struct)
        if len(struct_pos):
            B[:, struct_pos] = self.A[:, self.basis[struct_pos]]
        art_pos = np.flatnonzero(self.basis >= self.n_struct)
        if len(art_pos):
            B[self.basis[art_pos] - self.n_struct, art_pos] = 1.0
        try:
            self.Binv = np.linalg.inv(B)
        except np.linalg.LinAlgError as exc:
            raise SolverError(f"singular basis during refactorization: {exc}") from None

    def ftran(self, v: np.ndarray) -> np.ndarray:
        return self.Binv @ v

    def btran(self, w: np.ndarray) -> np.ndarray:
        return self.Binv.T @ w

    def update(self, leave_pos: int, d: np.ndarray) -> None:
        row = self.Binv[leave_pos] / d[leave_pos]
        self.Binv -= np.outer(d, row)
        self.Binv[leave_pos] = row


class _Basis:
    """Basis bookkeeping: sparse LU of B plus an eta file.

    Columns >= n_struct are the artificial identity columns; artificial
    j corresponds to row j - n_struct.
    """

    def __init__(self, A_std: sp.csc_matrix, n_struct: int):
        self.A = A_std
        self.AT = A_std.T.tocsr()
        self.m = A_std.shape[0]
        self.n_struct = n_struct
        self.basis = np.zeros(self.m, dtype=np.int64)
        self.lu = None
        self.etas: list[tuple[int, np.ndarray]] = []

    def price(self, y: np.ndarray) -> np.ndarray:
        return self.AT @ y

    def column(self, j: int) -> np.ndarray:
        if j < self.n_struct:
            lo, hi = self.A.indptr[j], self.A.indptr[j + 1]
            col = np.zeros(self.m)
            col[self.A.indices[lo:hi]] = self.A.data[lo:hi]
            return col
        e = np.zeros(self.m)
        e[j - self.n_struct] = 1.0
        return e

    def refactor(self) -> None:
        struct_pos = np.flatnonzero(self.basis < self.n_struct)
        rows_list, cols_list, vals_list = [], [], []
        if len(struct_pos):
            sub = self.A[:, self.basis[struct_pos]].tocoo()
            rows_list.append(sub.row)
            cols_list.append(struct_pos[sub.col])
            vals_list.append(sub.data)
        art_pos = np.flatnonzero(self.basis >= self.n_struct)
        if len(art_pos):
            rows_list.append(self.basis[art_pos] - self.n_struct)
            cols_list.append(art_pos)
            vals_list.append(np.ones(len(art_pos)))
        B = sp.coo_matrix(
            (
                np.concatenate(vals_list),
                (np.concatenate(rows_list), np.concatenate(cols_list)),
            ),
            shape=(self.m, self.m),
        ).tocsc()
        try:
            self.lu = splu(B)
        except RuntimeError as exc:
            raise SolverError(f"singular basis during refactorization: {exc}") from None
        self.etas = []

    def ftran(self, v: np.ndarray) -> np.ndarray:
        x = self.lu.solve(np.asarray(v, dtype=np.float64))
        for r, eta in self.etas:
            xr = x[r]
            if xr != 0.0:
                x[r] = 0.0
                x += eta * xr
        return x

    def btran(self, w: np.ndarray) -> np.ndarray:
        y = np.array(w, dtype=np.float64)
        for r, eta in reversed(self.etas):
            y[r] = eta @ y
        return self.lu.solve(y, trans="T")

    def update(self, leave_pos: int, d: np.ndarray) -> None:
        dr = d[leave_pos]
        eta = -d / dr
        eta[leave_pos] = 1.0 / dr
        self.etas.append((leave_pos, eta))


@dataclass
class _State:
    B: _Basis
    x_B: np.ndarray
    b: np.ndarray
    tol: float
    bland_threshold: int
    refactor_every: int
    max_pivots: int
    pivots: int = 0
    stalls: int = 0
    bland: bool = False
    # pivot count at the last refactor + exact x_B recompute; lets the
    # extraction step skip a redundant refactor when nothing moved since
    fresh_at: int = -1


def _basic_costs(state: _State, c_struct: np.ndarray, art_cost: np.ndarray) -> np.ndarray:
    basis = state.B.basis
    struct = basis < state.B.n_struct
    cb = np.where(struct, c_struct[np.minimum(basis, state.B.n_struct - 1)], art_cost)
    return cb


def _iterate(state: _State, c_struct, art_cost, *, allow_unbounded, pin_artificials):
    """Pivot to optimality; return (entering, direction) if unbounded."""
    B = state.B
    n_struct = B.n_struct
    # absolute dual tolerance, well below the requested tol: the caller
    # equilibrates first, so reduced-cost noise sits near machine epsilon
    # and a leftover -1e-7 entry would be a real suboptimality, not dust
    opt_tol = 0.01 * state.tol
    zero_tol = state.tol * (1.0 + float(np.abs(state.b).max(initial=0.0)))

    # incremental bookkeeping: membership, artificial flags, basic costs
    basis = B.basis
    art_basic = basis >= n_struct
    c_basic = np.where(
        art_basic, art_cost, c_struct[np.minimum(basis, n_struct - 1)]
    )
    in_basis = np.zeros(n_struct, dtype=bool)
    in_basis[basis[~art_basic]] = True

    while True:
        y = B.btran(c_basic)
        reduced = c_struct - B.price(y)
        reduced[in_basis] = 0.0
        if state.bland:
            candidates = np.flatnonzero(reduced < -opt_tol)
            if len(candidates) == 0:
                return None
            q = int(candidates[0])
        else:
            q = int(np.argmin(reduced))
            if reduced[q] >= -opt_tol:
                return None

        d = B.ftran(B.column(q))

        if pin_artificials and art_basic.any():
            guard = art_basic & (np.abs(d) > PIVOT_TOL) & (state.x_B <= zero_tol)
            blocking = (d > PIVOT_TOL) & ~guard
        else:
            guard = None
            blocking = d > PIVOT_TOL

        if guard is not None and guard.any():
            theta = 0.0
            cand_pos = np.flatnonzero(guard)
        elif blocking.any():
            pos_idx = np.flatnonzero(blocking)
            ratios = np.maximum(state.x_B[pos_idx], 0.0) / d[pos_idx]
            theta = float(ratios.min())
            cand_pos = pos_idx[ratios <= theta + 1e-12 * (1.0 + abs(theta))]
        else:
            if not allow_unbounded:
                raise SolverError(
                    "no blocking variable in a bounded phase; numerical breakdown"
                )
            return q, d

        if state.bland:
            leave = int(cand_pos[np.argmin(basis[cand_pos])])
        else:
            leave = int(cand_pos[np.argmax(np.abs(d[cand_pos]))])

        if theta > 0.0:
            state.x_B -= theta * d
        state.x_B[leave] = theta
        np.maximum(state.x_B, 0.0, out=state.x_B)
        B.update(leave, d)
        leaving_col = int(basis[leave])
        if leaving_col < n_struct:
            in_basis[leaving_col] = False
        in_basis[q] = True
        art_basic[leave] = False
        c_basic[leave] = c_struct[q]
        basis[leave] = q

        state.pivots += 1
        if theta <= PIVOT_TOL:
            state.stalls += 1
            if state.stalls > state.bland_threshold:
                state.bland = True
        else:
            state.stalls = 0
        if state.pivots % state.refactor_every == 0:
            B.refactor()
            state.x_B = B.ftran(state.b)
            np.maximum(state.x_B, 0.0, out=state.x_B)
            state.fresh_at = state.pivots
        if state.pivots >= state.max_pivots:
            raise SolverError(
                f"pivot limit {state.max_pivots} reached; numerical breakdown "
                "or extreme degeneracy"
            )


def _dual_iterate(
    state: _State, c_struct: np.ndarray, feas_tol: float, reduced: np.ndarray
) -> int | None:
    """Dual-simplex pivots from a dual-feasible basis toward primal feasibility.

    ``reduced`` holds the reduced costs at entry (basic entries zero) and is
    maintained incrementally with each pivot. Returns None once
    ``x_B >= -feas_tol`` everywhere, or the index of a row certifying
    primal infeasibility. Raises on numerical breakdown or a pivot cap;
    callers fall back to a cold solve.
    """
    B = state.B
    n_struct = B.n_struct
    basis = B.basis
    in_basis = np.zeros(n_struct, dtype=bool)
    in_basis[basis[basis < n_struct]] = True
    cap = state.pivots + 50 + 10 * B.m
    e = np.zeros(B.m)
    while True:
        r = int(np.argmin(state.x_B))
        if state.x_B[r] >= -feas_tol:
            return None
        e[:] = 0.0
        e[r] = 1.0
        rho = B.btran(e)
        alpha = B.price(rho)
        alpha[in_basis] = 0.0
        candidates = np.flatnonzero(alpha < -PIVOT_TOL)
        if len(candidates) == 0:
            return r
        ratios = np.maximum(reduced[candidates], 0.0) / -alpha[candidates]
        q = int(candidates[np.argmin(ratios)])
        d = B.ftran(B.column(q))
        if abs(d[r]) <= 1e-7:
            raise SolverError("dual pivot element too small; warm start abandoned")
        theta = state.x_B[r] / d[r]
        state.x_B -= theta * d
        state.x_B[r] = theta
        B.update(r, d)
        # dual step: shift reduced costs along the pivot row
        delta = reduced[q] / alpha[q]
        if delta != 0.0:
            reduced -= delta * alpha
        leaving = int(basis[r])
        if leaving < n_struct:
            in_basis[leaving] = False
            reduced[leaving] = -delta
        in_basis[q] = True
        reduced[q] = 0.0
        basis[r] = q
        state.pivots += 1
        if state.pivots % state.refactor_every == 0:
            B.refactor()
            state.x_B = B.ftran(state.b)
            state.fresh_at = state.pivots
        if state.pivots >= cap:
            raise SolverError("dual pivot cap reached; warm start abandoned")


def _basis_labels(B, n: int, n_struct: int, le_rows: np.ndarray) -> BasisLabels:
    basis = B.basis
    is_slack = (basis >= n) & (basis < n_struct)
    return BasisLabels(
        struct=basis[basis < n].copy(),
        slack_rows=le_rows[basis[is_slack] - n].astype(np.int64),
        art_rows=(basis[basis >= n_struct] - n_struct).astype(np.int64),
    )


def _finish_phase2(
    problem: LpProblem,
    state: _State,
    c_struct: np.ndarray,
    flip: np.ndarray,
    n: int,
    b: np.ndarray,
    le_rows: np.ndarray,
) -> LpOutcome:
    """Run phase 2 from a primal-feasible basis and extract the outcome."""
    m = state.B.m
    art_cost = np.zeros(m)
    result = _iterate(
        state, c_struct, art_cost, allow_unbounded=True, pin_artificials=True
    )
    if result is not None:
        q, d = result
        ray = np.zeros(n)
        if q < n:
            ray[q] = 1.0
        for pos in range(m):
            col = state.B.basis[pos]
            if col < n:
                ray[col] = max(0.0, -d[pos])
        return LpOutcome(status=STATUS_UNBOUNDED, ray=ray, pivots=state.pivots)

    # clean final iterate and extract the solution
    if state.fresh_at != state.pivots:
        state.B.refactor()
        state.x_B = state.B.ftran(b)
    x = np.zeros(n)
    for pos in range(m):
        col = state.B.basis[pos]
        if col < n:
            x[col] = state.x_B[pos]
    np.maximum(x, 0.0, out=x)
    y_std = state.B.btran(_basic_costs(state, c_struct, art_cost))
    y = flip * y_std
    objective = float(problem.objective @ x)
    return LpOutcome(
        status=STATUS_OPTIMAL,
        x=x,
        y=y,
        objective=objective,
        pivots=state.pivots,
        basis=_basis_labels(state.B, n, state.B.n_struct, le_rows),
    )


def _solve_trivial(problem: LpProblem) -> LpOutcome:
    # no rows: each variable sits at 0 unless its cost is negative
    n = problem.num_cols
    neg = np.flatnonzero(problem.objective < 0)
    if len(neg):
        ray = np.zeros(n)
        ray[int(neg[np.argmin(problem.objective[neg])])] = 1.0
        return LpOutcome(status=STATUS_UNBOUNDED, ray=ray)
    return LpOutcome(
        status=STATUS_OPTIMAL, x=np.zeros(n), y=np.zeros(0), objective=0.0
    )


def _pow2_scale(v: np.ndarray) -> np.ndarray:
    """Per-entry scale factors 2^-round(log2 v), snapped to powers of two.

    Powers of two multiply without rounding error, so equilibrating with
    them changes conditioning but not the exact values the pivoting sees.
    """
    safe = np.where(v > 0, v, 1.0)
    return np.exp2(-np.round(np.log2(safe)))


def _equilibration(A) -> tuple[np.ndarray, np.ndarray]:
    """Max-norm row scales then column scales for the constraint matrix."""
    if sp.issparse(A):
        Aabs = abs(A.tocsr())
        rmax = Aabs.max(axis=1).toarray().ravel()
        r = _pow2_scale(rmax)
        cmax = (sp.diags(r) @ Aabs).max(axis=0).toarray().ravel()
    else:
        Aabs = np.abs(A)
        r = _pow2_scale(Aabs.max(axis=1, initial=0.0))
        cmax = (Aabs * r[:, None]).max(axis=0)
    return r, _pow2_scale(cmax)


def solve_lp(
    problem: LpProblem,
    tol: float = DEFAULT_TOL,
    *,
    max_pivots: int | None = None,
    bland_threshold: int = 1000,
    refactor_every: int = 100,
    warm: BasisLabels | None = None,
) -> LpOutcome:
    """Solve an LP; deterministic for identical input.

    Raises :class:`SolverError` on numerical breakdown (singular basis,
    pivot limit); breakdown is never reported as a solution status.

    ``warm`` is an optional basis from a related solved LP (same columns,
    overlapping rows). If it is dual feasible here, primal feasibility is
    restored with dual-simplex pivots, which is much cheaper than the cold
    two-phase start; on any trouble the cold path runs instead.

    The problem is equilibrated internally (power-of-two row and column
    scales, plus uniform scales bringing costs and rhs near 1) and the
    outcome mapped back, so tolerances behave the same across instances
    whose raw coefficients differ by orders of magnitude.
    """
    if problem.num_rows == 0:
        return _solve_trivial(problem)

    r, s = _equilibration(problem.A)
    sig_c = float(_pow2_scale(np.array([np.abs(problem.objective * s).max(initial=0.0)]))[0])
    sig_b = float(_pow2_scale(np.array([np.abs(problem.rhs * r).max(initial=0.0)]))[0])
    if sp.issparse(problem.A):
        A_s = sp.diags(r) @ problem.A @ sp.diags(s)
    else:
        A_s = problem.A * r[:, None] * s[None, :]
    # the input was validated on construction and the scales are finite
    # powers of two, so skip a second validation pass
    scaled = LpProblem.__new__(LpProblem)
    scaled.objective = problem.objective * s * sig_c
    scaled.A = A_s
    scaled.senses = problem.senses
    scaled.rhs = problem.rhs * r * sig_b
    out = _solve_core(
        scaled,
        tol,
        max_pivots=max_pivots,
        bland_threshold=bland_threshold,
        refactor_every=refactor_every,
        warm=warm,
    )
    if out.status == STATUS_OPTIMAL:
        x = out.x * s / sig_b
        return LpOutcome(
            status=STATUS_OPTIMAL,
            x=x,
            y=out.y * r / sig_c,
            objective=float(problem.objective @ x),
            pivots=out.pivots,
            basis=out.basis,
        )
    if out.status == STATUS_INFEASIBLE:
        return LpOutcome(
            status=STATUS_INFEASIBLE, farkas_ray=out.farkas_ray * r, pivots=out.pivots
        )
    return LpOutcome(status=STATUS_UNBOUNDED, ray=out.ray * s, pivots=out.pivots)


def _solve_core(
    problem: LpProblem,
    tol: float,
    *,
    max_pivots: int | None,
    bland_threshold: int,
    refactor_every: int,
    warm: BasisLabels | None,
) -> LpOutcome:
    m, n = problem.num_rows, problem.num_cols
    if max_pivots is None:
        max_pivots = 2000 + 200 * (m + n)

    le_rows = np.flatnonzero(problem.senses == "<")
    n_slack = len(le_rows)
    n_struct = n + n_slack

    flip = np.where(problem.rhs < 0, -1.0, 1.0)
    b = problem.rhs * flip
    sparse_input = sp.issparse(problem.A)
    use_dense = m * n_struct <= DENSE_LIMIT
    if use_dense:
        A_std_dense = np.zeros((m, n_struct))
        A_std_dense[:, :n] = problem.A.toarray() if sparse_input else problem.A
        if n_slack:
            A_std_dense[le_rows, n + np.arange(n_slack)] = 1.0
        A_std_dense *= flip[:, None]
    else:
        A_csr = problem.A.tocsr() if sparse_input else sp.csr_matrix(problem.A)
        if n_slack:
            slack = sp.coo_matrix(
                (np.ones(n_slack), (le_rows, np.arange(n_slack))), shape=(m, n_slack)
            )
            A_full = sp.hstack([A_csr, slack], format="csr")
        else:
            A_full = A_csr
        A_std = (sp.diags(flip) @ A_full).tocsc()

    c_struct = np.concatenate([problem.objective, np.zeros(n_slack)])
    # slack column id per row, -1 on '=' rows
    slack_pos = np.full(m, -1, dtype=np.int64)
    slack_pos[le_rows] = n + np.arange(n_slack)

    def fresh_basis():
        return _DenseBasis(A_std_dense, n_struct) if use_dense else _Basis(A_std, n_struct)

    if warm is not None:
        outcome = _try_warm_start(
            problem, warm, fresh_basis, slack_pos, c_struct, b, flip, le_rows,
            n, n_struct, tol, max_pivots, bland_threshold, refactor_every,
        )
        if outcome is not None:
            return outcome

    slack_start = (problem.senses == "<") & (flip > 0)
    basis = np.where(slack_start, slack_pos, n_struct + np.arange(m))
    any_artificial = bool((~slack_start).any())

    B = fresh_basis()
    B.basis = basis
    B.refactor()

    state = _State(
        B=B,
        x_B=b.copy(),
        b=b,
        tol=tol,
        bland_threshold=bland_threshold,
        refactor_every=refactor_every,
        max_pivots=max_pivots,
        fresh_at=0,
    )

    # phase 1: minimize the artificial mass
    if any_artificial:
        c_phase1 = np.zeros(n_struct)
        art_cost = np.ones(m)
        _iterate(
            state, c_phase1, art_cost, allow_unbounded=False, pin_artificials=False
        )
        art_mask = state.B.basis >= n_struct
        phase1_obj = float(state.x_B[art_mask].sum())
        feas_tol = tol * (1.0 + float(np.abs(b).max(initial=0.0)))
        if phase1_obj > feas_tol:
            y_std = state.B.btran(_basic_costs(state, c_phase1, art_cost))
            return LpOutcome(
                status=STATUS_INFEASIBLE,
                farkas_ray=flip * y_std,
                pivots=state.pivots,
            )
        state.B.refactor()
        state.x_B = state.B.ftran(b)
        np.maximum(state.x_B, 0.0, out=state.x_B)
        state.fresh_at = state.pivots

    # phase 2
    return _finish_phase2(problem, state, c_struct, flip, n, b, le_rows)


def _try_warm_start(
    problem: LpProblem,
    warm: BasisLabels,
    fresh_basis,
    slack_pos: dict[int, int],
    c_struct: np.ndarray,
    b: np.ndarray,
    flip: np.ndarray,
    le_rows: np.ndarray,
    n: int,
    n_struct: int,
    tol: float,
    max_pivots: int,
    bland_threshold: int,
    refactor_every: int,
) -> LpOutcome | None:
    """Attempt a warm-started solve; None means fall back to the cold path."""
    m = len(b)
    struct = np.asarray(warm.struct, dtype=np.int64)
    if len(struct) and (struct.min() < 0 or struct.max() >= n):
        return None
    # an artificial would drift off zero under dual pivots; its row's
    # slack spans the same direction and is a legitimate column
    rows = np.concatenate([warm.slack_rows, warm.art_rows]).astype(np.int64)
    if len(rows) and (rows.min() < 0 or rows.max() >= m):
        return None
    sids = slack_pos[rows]
    if len(sids) and sids.min() < 0:
        return None
    cols = np.concatenate([struct, sids])
    if len(cols) != m or len(np.unique(cols)) != m:
        return None

    B = fresh_basis()
    B.basis = cols
    try:
        B.refactor()
    except SolverError:
        return None
    state = _State(
        B=B,
        x_B=B.ftran(b),
        b=b,
        tol=tol,
        bland_threshold=bland_threshold,
        refactor_every=refactor_every,
        max_pivots=max_pivots,
    )

    def price_basis() -> np.ndarray:
        # the warm basis holds no artificials, so basic costs index directly
        y = B.btran(c_struct[B.basis])
        red = c_struct - B.price(y)
        red[B.basis] = 0.0
        return red

    # the warm basis is useful only if it is dual feasible here, to the
    # same standard the primal iteration terminates at
    reduced = price_basis()
    if float(reduced.min(initial=0.0)) < -0.01 * state.tol:
        return None

    # absolute feasibility target: a slack left at -1e-5 and clamped would
    # shift the objective below the true optimum, so rhs-scaled slack here
    # is not acceptable
    feas_tol = 1e-9
    try:
        for attempt in range(3):
            if attempt:
                reduced = price_basis()
            bad_row = _dual_iterate(state, c_struct, feas_tol, reduced)
            if bad_row is not None:
                if state.x_B[bad_row] > -tol * (1.0 + float(np.abs(b).max(initial=0.0))):
                    # margin too thin for a convincing certificate; decide cold
                    return None
                e = np.zeros(m)
                e[bad_row] = 1.0
                y_std = -state.B.btran(e)
                return LpOutcome(
                    status=STATUS_INFEASIBLE,
                    farkas_ray=flip * y_std,
                    pivots=state.pivots,
                )
            # recompute the iterate exactly; if residual dust reappears at
            # this basis, pivot it out too rather than clamping it away
            state.B.refactor()
            state.x_B = state.B.ftran(b)
            if float(state.x_B.min(initial=0.0)) >= -feas_tol:
                np.maximum(state.x_B, 0.0, out=state.x_B)
                state.fresh_at = state.pivots
                return _finish_phase2(problem, state, c_struct, flip, n, b, le_rows)
        return None
    except SolverError:
        # any breakdown on the warm path is recoverable by a cold start
        return None


@dataclass(frozen=True)
class CertificateReport:
    ok: bool
    failures: list[str]


def verify_certificate(
    problem: LpProblem, outcome: LpOutcome, tol: float = DEFAULT_TOL
) -> CertificateReport:
    """Independently re-check the invariant bundle for an LpOutcome."""
    failures: list[str] = []
    A = problem.A.tocsr() if sp.issparse(problem.A) else problem.A
    le = problem.senses == "<"
    eq = ~le
    scale_b = 1.0 + float(np.abs(problem.rhs).max(initial=0.0))
    scale_c = 1.0 + float(np.abs(problem.objective).max(initial=0.0))

    if outcome.status == STATUS_OPTIMAL:
        x, y = outcome.x, outcome.y
        if x is None or y is None:
            return CertificateReport(False, ["optimal outcome lacks x or y"])
        if len(x) and float((-x).max(initial=0.0)) > tol:
            failures.append("primal negativity")
        resid = A @ x - problem.rhs
        if eq.any() and float(np.abs(resid[eq]).max()) > tol * scale_b:
            failures.append("equality-row residual")
        if le.any() and float(resid[le].max(initial=0.0)) > tol * scale_b:
            failures.append("inequality-row violation")
        if le.any() and float(y[le].max(initial=0.0)) > tol:
            failures.append("dual sign on <= rows")
        dual_slack = problem.objective - A.T @ y
        if float((-dual_slack).max(initial=0.0)) > tol * scale_c * 10:
            failures.append("dual feasibility A'y <= c")
        cx = float(problem.objective @ x)
        yb = float(y @ problem.rhs)
        if abs(cx - yb) > tol * (1.0 + abs(cx)) * 10:
            failures.append(f"strong-duality gap {cx - yb:.3e}")
    elif outcome.status == STATUS_INFEASIBLE:
        ray = outcome.farkas_ray
        if ray is None:
            return CertificateReport(False, ["infeasible outcome lacks Farkas ray"])
        norm = float(np.abs(ray).max(initial=0.0))
        if norm <= tol:
            return CertificateReport(False, ["zero Farkas ray"])
        r = ray / norm
        if le.any() and float(r[le].max(initial=0.0)) > tol:
            failures.append("Farkas sign on <= rows")
        aty = A.T @ r
        if float(aty.max(initial=0.0)) > tol * 100:
            failures.append("Farkas column condition A'y <= 0")
        if float(r @ problem.rhs) <= tol:
            failures.append("Farkas ray fails to certify: y'b not positive")
    elif outcome.status == STATUS_UNBOUNDED:
        ray = outcome.ray
        if ray is None:
            return CertificateReport(False, ["unbounded outcome lacks ray"])
        norm = float(np.abs(ray).max(initial=0.0))
        if norm <= tol:
            return CertificateReport(False, ["zero unbounded ray"])
        r = ray / norm
        if float((-r).max(initial=0.0)) > tol:
            failures.append("ray negativity")
        ar = A @ r
        if eq.any() and float(np.abs(ar[eq]).max()) > tol * 100:
            failures.append("ray not in equality null space")
        if le.any() and float(ar[le].max(initial=0.0)) > tol * 100:
            failures.append("ray increases a <= row")
        if float(problem.objective @ r) >= -tol:
            failures.append("ray does not improve the objective")
    else:
        failures.append(f"unknown status {outcome.status!r}")
    return CertificateReport(ok=not failures, failures=failures)
