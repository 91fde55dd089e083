"""Decomposition driver: fix containers, price the flows, cut, repeat.

The integer container counts T are the complicating variables. Fixing
``T = T_bar`` leaves a pure LP over the flow variables (the subproblem);
its duals yield an optimality cut, a Farkas ray yields a feasibility cut.
The master minimizes ``q + fcl_costs . T`` over the accumulated cuts with
T integer, providing a global lower bound; each feasible subproblem gives
an upper bound. The loop stops when the bounds meet.

Row convention: the monolithic rows are split as ``A x <=/= b - B T``
where B holds the T coefficients (only capacity rows are nonzero, each
entry ``-capacity``). A dual vector a that is feasible for the subproblem
dual satisfies ``a'(b - B T) <= q(T)`` for every T, with equality at the
generating T_bar; a Farkas ray r of an infeasible subproblem satisfies
``r'(b - B T) <= 0`` for every feasible T.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import TextIO

import numpy as np
import scipy.sparse as sp

from .errors import InfeasibleInstanceError, SolverError
from .instance import Instance, validate_routes
from .milp import (
    MILP_INFEASIBLE,
    MILP_OPTIMAL,
    MilpProblem,
    lp_from_mip,
    solve_milp,
)
from .model import (
    MODE_WINDOW,
    CostBreakdown,
    MipModel,
    build_mip,
    objective_breakdown,
)
from .simplex import (
    STATUS_INFEASIBLE,
    STATUS_OPTIMAL,
    STATUS_UNBOUNDED,
    LpProblem,
    solve_lp,
)

CUT_OPTIMALITY = "optimality"
CUT_FEASIBILITY = "feasibility"

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITERS = 500


@dataclass(frozen=True)
class Cut:
    """Linear inequality over the master variables (T, q).

    The stored expression is ``constant - t_coefficients . T``; an
    optimality cut asserts it is ``<= q``, a feasibility cut ``<= 0``.
    """

    kind: str
    t_coefficients: np.ndarray
    constant: float
    iteration: int

    def value_at(self, t: np.ndarray) -> float:
        return self.constant - float(self.t_coefficients @ t)


@dataclass
class MasterData:
    """Everything the master needs: T-coefficient matrix, rhs, costs, cuts."""

    B: sp.csr_matrix  # monolithic rows x T columns; -capacity in capacity rows
    b: np.ndarray
    h_costs: np.ndarray  # container cost per T column
    t_upper: float
    cuts: list[Cut] = field(default_factory=list)

    @property
    def num_t(self) -> int:
        return self.B.shape[1]


@dataclass
class SubproblemResult:
    status: str
    value: float | None = None
    x: np.ndarray | None = None  # over subproblem (non-T) columns
    duals: np.ndarray | None = None
    farkas_ray: np.ndarray | None = None


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    lower: float
    upper: float
    gap: float
    t_candidate: np.ndarray
    subproblem_value: float | None
    cut_kind: str | None


@dataclass
class BendersTrace:
    records: list[IterationRecord] = field(default_factory=list)

    def export_csv(self, stream: TextIO) -> None:
        writer = csv.writer(stream)
        writer.writerow(["iteration", "lb", "ub", "gap", "cut_kind", "subproblem_value"])
        for r in self.records:
            writer.writerow(
                [
                    r.iteration,
                    f"{r.lower:.9f}",
                    f"{r.upper:.9f}" if math.isfinite(r.upper) else "inf",
                    f"{r.gap:.3e}" if math.isfinite(r.gap) else "inf",
                    r.cut_kind or "",
                    f"{r.subproblem_value:.9f}" if r.subproblem_value is not None else "",
                ]
            )


@dataclass
class BendersResult:
    status: str  # "optimal", "max_iters", "infeasible"
    objective: float | None
    t_values: np.ndarray | None
    x_full: np.ndarray | None  # over monolithic columns
    breakdown: CostBreakdown | None
    trace: BendersTrace
    lower_bound: float
    upper_bound: float
    iterations: int
    proven: bool
    model: MipModel | None = None


@dataclass
class _SubStructure:
    model: MipModel
    non_t_cols: np.ndarray
    t_cols: np.ndarray
    A_sub: sp.csr_matrix
    obj_sub: np.ndarray
    master: MasterData
    warm_basis: object = None  # optimal basis of the previous subproblem solve


def _prepare(model: MipModel) -> _SubStructure:
    t_cols = np.asarray(model.integer_columns)
    mask = np.ones(model.num_vars, dtype=bool)
    mask[t_cols] = False
    non_t = np.flatnonzero(mask)
    A = model.A.tocsc()
    A_sub = A[:, non_t].tocsr()
    B = A[:, t_cols].tocsr()
    k = model.instance.container_capacity
    total = model.instance.total_demand()
    t_upper = float(math.ceil(total / k)) if k > 0 else 0.0
    master = MasterData(
        B=B,
        b=model.rhs.copy(),
        h_costs=model.objective[t_cols].copy(),
        t_upper=t_upper,
        cuts=[Cut(CUT_OPTIMALITY, np.zeros(len(t_cols)), 0.0, 0)],  # q >= 0
    )
    return _SubStructure(
        model=model,
        non_t_cols=non_t,
        t_cols=t_cols,
        A_sub=A_sub,
        obj_sub=model.objective[non_t].copy(),
        master=master,
    )


def _solve_sub(sub: _SubStructure, t_fixed: np.ndarray, tol: float) -> SubproblemResult:
    rhs = sub.master.b - sub.master.B @ t_fixed
    lp = LpProblem(
        objective=sub.obj_sub, A=sub.A_sub, senses=sub.model.senses, rhs=rhs
    )
    # consecutive subproblems differ only in rhs, so the previous optimal
    # basis is dual feasible and a short warm run replaces a full solve
    outcome = solve_lp(lp, tol=tol, warm=sub.warm_basis)
    if outcome.status == STATUS_OPTIMAL and outcome.basis is not None:
        sub.warm_basis = outcome.basis
    if outcome.status == STATUS_UNBOUNDED:
        raise SolverError(
            "subproblem reported unbounded; with nonnegative costs this "
            "signals a model-assembly bug"
        )
    if outcome.status == STATUS_INFEASIBLE:
        return SubproblemResult(status=STATUS_INFEASIBLE, farkas_ray=outcome.farkas_ray)
    return SubproblemResult(
        status=STATUS_OPTIMAL,
        value=outcome.objective,
        x=outcome.x,
        duals=outcome.y,
    )


def solve_subproblem(
    instance: Instance,
    t_fixed: np.ndarray,
    mode: str = MODE_WINDOW,
    *,
    tol: float = 1e-7,
    require_routes: bool = True,
) -> SubproblemResult:
    """Price the flow LP for fixed container counts.

    ``t_fixed`` is indexed like the model's T block: gateway-major, then
    day. Returns duals on optimality or a Farkas ray on infeasibility.
    """
    t_fixed = np.asarray(t_fixed, dtype=np.float64)
    if (t_fixed < 0).any():
        raise SolverError("t_fixed must be componentwise nonnegative")
    model = build_mip(instance, mode, require_routes=require_routes)
    sub = _prepare(model)
    if t_fixed.shape != (sub.master.num_t,):
        raise SolverError(
            f"t_fixed has shape {t_fixed.shape}, expected ({sub.master.num_t},)"
        )
    return _solve_sub(sub, t_fixed, tol)


def make_optimality_cut(
    duals: np.ndarray, master: MasterData, iteration: int = 0
) -> Cut:
    """Cut ``a'(b - B T) <= q`` from an optimal subproblem's duals."""
    duals = np.asarray(duals, dtype=np.float64)
    if duals.shape != (master.B.shape[0],):
        raise SolverError(
            f"dual vector length {duals.shape} does not match {master.B.shape[0]} rows"
        )
    return Cut(
        kind=CUT_OPTIMALITY,
        t_coefficients=np.asarray(master.B.T @ duals),
        constant=float(duals @ master.b),
        iteration=iteration,
    )


def make_feasibility_cut(
    ray: np.ndarray, master: MasterData, iteration: int = 0
) -> Cut:
    """Cut ``r'(b - B T) <= 0`` from an infeasible subproblem's Farkas ray."""
    ray = np.asarray(ray, dtype=np.float64)
    if ray.shape != (master.B.shape[0],):
        raise SolverError(
            f"Farkas ray length {ray.shape} does not match {master.B.shape[0]} rows"
        )
    if float(np.abs(ray).max(initial=0.0)) <= 0.0:
        raise SolverError("zero Farkas ray cannot build a feasibility cut")
    return Cut(
        kind=CUT_FEASIBILITY,
        t_coefficients=np.asarray(master.B.T @ ray),
        constant=float(ray @ master.b),
        iteration=iteration,
    )


def master_problem(master: MasterData) -> MilpProblem:
    """Assemble the integer master over columns [T..., q]."""
    n_t = master.num_t
    n = n_t + 1
    rows, cols, vals, rhs, senses = [], [], [], [], []
    r = 0
    for cut in master.cuts:
        for j, w in enumerate(cut.t_coefficients):
            if w != 0.0:
                rows.append(r)
                cols.append(j)
                vals.append(-w)
        if cut.kind == CUT_OPTIMALITY:
            rows.append(r)
            cols.append(n_t)
            vals.append(-1.0)
        rhs.append(-cut.constant)
        senses.append("<")
        r += 1
    # T <= t_upper is carried by integer_upper below, not by explicit rows
    A = sp.coo_matrix((vals, (rows, cols)), shape=(r, n)).tocsr()
    objective = np.concatenate([master.h_costs, [1.0]])
    lp = LpProblem(
        objective=objective,
        A=A,
        senses=np.array(senses, dtype="<U1"),
        rhs=np.asarray(rhs, dtype=np.float64),
    )
    return MilpProblem(
        lp=lp,
        integer_columns=np.arange(n_t),
        integer_upper=np.full(n_t, master.t_upper),
    )


def master_point(master: MasterData, t: np.ndarray) -> tuple[np.ndarray, float] | None:
    """Lift an integer container schedule to a feasible master point.

    Sets q to the largest optimality-cut value at ``t`` (at least 0) and
    returns ``((T..., q), objective)``, or None when ``t`` violates a
    feasibility cut or its upper bound.
    """
    t = np.asarray(t, dtype=np.float64)
    if (t < 0).any() or (t > master.t_upper).any():
        return None
    q = 0.0
    for cut in master.cuts:
        v = cut.value_at(t)
        if cut.kind == CUT_FEASIBILITY:
            if v > 0.0:
                return None
        elif v > q:
            q = v
    x = np.concatenate([t, [q]])
    return x, float(master.h_costs @ t) + q


def solve_master(
    master: MasterData,
    gap_tol: float = 1e-9,
    node_limit: int = 100_000,
    *,
    warm_t: np.ndarray | None = None,
) -> tuple[np.ndarray, float, float]:
    """Solve the master; returns (T candidate, q value, lower bound).

    ``warm_t`` seeds the branch-and-bound with a known-good container
    schedule (lifted via :func:`master_point`), which lets the search
    prune from the start.
    """
    if not master.cuts:
        raise SolverError("cut pool must contain at least the q >= 0 bound")
    warm = master_point(master, warm_t) if warm_t is not None else None
    outcome = solve_milp(
        master_problem(master),
        gap_tol=gap_tol,
        node_limit=node_limit,
        warm_start=warm,
    )
    if outcome.status == MILP_INFEASIBLE:
        raise InfeasibleInstanceError(
            "master problem is infeasible: the instance admits no feasible schedule"
        )
    if outcome.status != MILP_OPTIMAL:
        raise SolverError(
            f"master solve hit the node limit at gap {outcome.gap:.3e}"
        )
    t = np.round(outcome.x[: master.num_t])
    q = float(outcome.x[master.num_t])
    return t, q, float(outcome.objective)


def lp_relaxation(
    instance: Instance, mode: str = MODE_WINDOW, *, tol: float = 1e-7
) -> tuple[float, np.ndarray, CostBreakdown]:
    """Monolithic LP with T continuous; a global lower bound."""
    model = build_mip(instance, mode)
    outcome = solve_lp(lp_from_mip(model), tol=tol)
    if outcome.status == STATUS_INFEASIBLE:
        raise InfeasibleInstanceError("LP relaxation is infeasible")
    if outcome.status == STATUS_UNBOUNDED:
        raise SolverError("LP relaxation unbounded; model-assembly bug")
    return outcome.objective, outcome.x, objective_breakdown(model, outcome.x)


@dataclass(frozen=True)
class BendersParams:
    tol: float = DEFAULT_TOL
    max_iters: int = DEFAULT_MAX_ITERS
    gap_tol: float = 1e-9
    node_limit: int = 100_000
    lp_tol: float = 1e-7
    check_cuts: bool = True


def run_benders(
    instance: Instance,
    mode: str = MODE_WINDOW,
    params: BendersParams | None = None,
    *,
    validate: bool = True,
) -> BendersResult:
    """Iterate master and subproblem until the bounds meet.

    Returns the incumbent container schedule, the assembled full solution
    vector over the monolithic columns, the cost breakdown, and the trace.
    Instances that fail route validation are reported infeasible up front
    unless ``validate=False`` (then a feasibility cut makes the master
    infeasible, which is reported the same way).
    """
    params = params or BendersParams()
    trace = BendersTrace()
    if validate:
        diag = validate_routes(instance)
        if not diag.feasible:
            return BendersResult(
                status="infeasible",
                objective=None,
                t_values=None,
                x_full=None,
                breakdown=None,
                trace=trace,
                lower_bound=math.inf,
                upper_bound=math.inf,
                iterations=0,
                proven=True,
            )

    model = build_mip(instance, mode, require_routes=False)
    sub = _prepare(model)
    master = sub.master

    lb = -math.inf
    ub = math.inf
    best_t: np.ndarray | None = None
    best_x: np.ndarray | None = None
    prev_t: np.ndarray | None = None
    status = "max_iters"

    for it in range(1, params.max_iters + 1):
        warm_t = None
        warm_obj = math.inf
        for cand in (best_t, prev_t):
            if cand is None:
                continue
            lifted = master_point(master, cand)
            if lifted is not None and lifted[1] < warm_obj:
                warm_t, warm_obj = cand, lifted[1]
        try:
            t_bar, q_val, master_obj = solve_master(
                master,
                gap_tol=params.gap_tol,
                node_limit=params.node_limit,
                warm_t=warm_t,
            )
        except InfeasibleInstanceError:
            return BendersResult(
                status="infeasible",
                objective=None,
                t_values=None,
                x_full=None,
                breakdown=None,
                trace=trace,
                lower_bound=lb,
                upper_bound=ub,
                iterations=it - 1,
                proven=True,
                model=model,
            )
        lb = max(lb, master_obj)
        prev_t = t_bar

        result = _solve_sub(sub, t_bar, params.lp_tol)
        cut_kind = None
        sub_value = None
        if result.status == STATUS_OPTIMAL:
            sub_value = result.value
            candidate_ub = sub_value + float(master.h_costs @ t_bar)
            if candidate_ub < ub - 1e-12:
                ub = candidate_ub
                best_t = t_bar.copy()
                best_x = result.x.copy()
            cut = make_optimality_cut(result.duals, master, iteration=it)
            if params.check_cuts:
                tight = cut.value_at(t_bar)
                if abs(tight - sub_value) > 1e-6 * (1.0 + abs(sub_value)):
                    raise SolverError(
                        f"optimality cut not tight at its generator: "
                        f"{tight:.9g} vs q={sub_value:.9g}"
                    )
            cut_kind = CUT_OPTIMALITY
        else:
            cut = make_feasibility_cut(result.farkas_ray, master, iteration=it)
            if params.check_cuts and cut.value_at(t_bar) <= 0.0:
                raise SolverError(
                    "feasibility cut does not exclude the generating candidate"
                )
            cut_kind = CUT_FEASIBILITY
        master.cuts.append(cut)

        gap = (ub - lb) / (1.0 + abs(ub)) if math.isfinite(ub) else math.inf
        trace.records.append(
            IterationRecord(
                iteration=it,
                lower=lb,
                upper=ub,
                gap=gap,
                t_candidate=t_bar.copy(),
                subproblem_value=sub_value,
                cut_kind=cut_kind,
            )
        )
        if gap <= params.tol:
            status = "optimal"
            break

    proven = status == "optimal"
    x_full = None
    breakdown = None
    objective = None
    if best_t is not None and best_x is not None:
        x_full = np.zeros(model.num_vars)
        x_full[sub.non_t_cols] = best_x
        x_full[sub.t_cols] = best_t
        breakdown = objective_breakdown(model, x_full)
        objective = ub
    return BendersResult(
        status=status,
        objective=objective,
        t_values=best_t,
        x_full=x_full,
        breakdown=breakdown,
        trace=trace,
        lower_bound=lb,
        upper_bound=ub,
        iterations=len(trace.records),
        proven=proven,
        model=model,
    )
