"""Best-bound branch-and-bound over the LP engine.

Serves two roles: the monolithic solver for small consolidation models and
the integer master solver inside the decomposition loop. Branching picks
the most fractional integer column (ties: lowest index); node selection is
best-bound first (ties: insertion order). Both rules are deterministic.
"""

from __future__ import annotations

import csv
import heapq
import math
from dataclasses import dataclass
from typing import TextIO

import numpy as np
import scipy.sparse as sp

from .errors import SolverError
from .model import MipModel
from .simplex import (
    DENSE_LIMIT,
    STATUS_INFEASIBLE,
    STATUS_OPTIMAL,
    STATUS_UNBOUNDED,
    BasisLabels,
    LpProblem,
    solve_lp,
)

MILP_OPTIMAL = "optimal"
MILP_INFEASIBLE = "infeasible"
MILP_NODE_LIMIT = "node_limit"

INTEGRALITY_TOL = 1e-6
DEFAULT_GAP_TOL = 1e-9
DEFAULT_NODE_LIMIT = 100_000


@dataclass
class MilpProblem:
    """An LP plus integrality marks and optional integer upper bounds.

    ``integer_upper`` entries are implied bounds: no optimal solution
    exceeds them, so branches above them are pruned, but they are not
    added as rows to node LPs.
    """

    lp: LpProblem
    integer_columns: np.ndarray
    integer_upper: np.ndarray | None = None  # parallel to integer_columns


@dataclass
class MilpOutcome:
    status: str
    x: np.ndarray | None
    objective: float | None
    bound: float
    gap: float
    nodes: int


def lp_from_mip(model: MipModel) -> LpProblem:
    """The LP relaxation of a consolidation model (integrality dropped)."""
    return LpProblem(
        objective=model.objective, A=model.A, senses=model.senses, rhs=model.rhs
    )


def _as_milp(model) -> MilpProblem:
    if isinstance(model, MilpProblem):
        return model
    if isinstance(model, MipModel):
        k = model.instance.container_capacity
        total = model.instance.total_demand()
        # implied container bound keeps the tree finite
        t_max = math.ceil(total / k) if k > 0 else 0
        upper = np.full(len(model.integer_columns), float(t_max))
        return MilpProblem(
            lp=lp_from_mip(model),
            integer_columns=np.asarray(model.integer_columns),
            integer_upper=upper,
        )
    raise SolverError(f"cannot solve object of type {type(model).__name__}")


def _node_lp(
    base: LpProblem,
    bounds: dict[int, tuple[float, float]],
    base_dense: np.ndarray | None = None,
) -> LpProblem:
    """Base LP plus branching bounds encoded as extra <= rows."""
    if not bounds:
        return base
    rows, cols, vals, rhs = [], [], [], []
    r = 0
    for col in sorted(bounds):
        lo, hi = bounds[col]
        if hi is not None and math.isfinite(hi):
            rows.append(r)
            cols.append(col)
            vals.append(1.0)
            rhs.append(hi)
            r += 1
        if lo is not None and lo > 0:
            rows.append(r)
            cols.append(col)
            vals.append(-1.0)
            rhs.append(-lo)
            r += 1
    if base_dense is not None:
        extra_dense = np.zeros((r, base.num_cols))
        extra_dense[rows, cols] = vals
        A = np.concatenate([base_dense, extra_dense], axis=0)
    else:
        extra = sp.coo_matrix((vals, (rows, cols)), shape=(r, base.num_cols))
        A = sp.vstack([base.A, extra], format="csr")
    # the base LP was validated on construction and the appended rows are
    # unit-coefficient bounds, so skip re-validation in this hot path
    node = LpProblem.__new__(LpProblem)
    node.objective = base.objective
    node.A = A
    node.senses = np.concatenate([base.senses, np.full(r, "<", dtype="<U1")])
    node.rhs = np.concatenate([base.rhs, np.asarray(rhs, dtype=np.float64)])
    return node


def _bound_layout(bounds: dict[int, tuple[float, float]]) -> list[tuple[int, str]]:
    """The (column, kind) identity of each extra row, in _node_lp order."""
    layout = []
    for col in sorted(bounds):
        lo, hi = bounds[col]
        if hi is not None and math.isfinite(hi):
            layout.append((col, "hi"))
        if lo is not None and lo > 0:
            layout.append((col, "lo"))
    return layout


def _translate_basis(
    parent: BasisLabels,
    parent_bounds: dict[int, tuple[float, float]],
    child_bounds: dict[int, tuple[float, float]],
    m0: int,
) -> BasisLabels | None:
    """Re-index a parent node's basis for a child's row layout.

    Base rows keep their indices; bound rows are matched by (column, kind);
    rows the child adds get their own slack. Returns None when a referenced
    row no longer exists.
    """
    parent_layout = _bound_layout(parent_bounds)
    child_layout = _bound_layout(child_bounds)
    child_row = {key: m0 + i for i, key in enumerate(child_layout)}

    def map_row(r: int) -> int | None:
        if r < m0:
            return r
        return child_row.get(parent_layout[r - m0])

    slack_rows: list[int] = []
    art_rows: list[int] = []
    for r in parent.slack_rows:
        mr = map_row(int(r))
        if mr is None:
            return None
        slack_rows.append(mr)
    for r in parent.art_rows:
        mr = map_row(int(r))
        if mr is None:
            return None
        art_rows.append(mr)
    parent_keys = set(parent_layout)
    for key in child_layout:
        if key not in parent_keys:
            slack_rows.append(child_row[key])
    return BasisLabels(
        struct=parent.struct,
        slack_rows=np.asarray(slack_rows, dtype=np.int64),
        art_rows=np.asarray(art_rows, dtype=np.int64),
    )


def _check_warm_start(
    prob: MilpProblem,
    warm_start: tuple[np.ndarray, float],
    int_cols: np.ndarray,
    tol: float,
) -> tuple[np.ndarray, float]:
    x, obj = warm_start
    x = np.asarray(x, dtype=np.float64)
    lp = prob.lp
    if x.shape != (lp.num_cols,):
        raise SolverError("warm start has the wrong length")
    scale = 1.0 + float(np.abs(lp.rhs).max(initial=0.0))
    resid = lp.A @ x - lp.rhs
    le = lp.senses == "<"
    bad = (
        float((-x).max(initial=0.0)) > tol
        or (le.any() and float(resid[le].max(initial=0.0)) > tol * scale)
        or ((~le).any() and float(np.abs(resid[~le]).max(initial=0.0)) > tol * scale)
    )
    if len(int_cols):
        vals = x[int_cols]
        bad = bad or float(np.abs(vals - np.round(vals)).max()) > INTEGRALITY_TOL
        if prob.integer_upper is not None:
            bad = bad or bool((vals > np.asarray(prob.integer_upper) + INTEGRALITY_TOL).any())
    if bad:
        raise SolverError("warm start is not feasible for the integer problem")
    return x.copy(), float(obj)


def solve_milp(
    model,
    gap_tol: float = DEFAULT_GAP_TOL,
    node_limit: int = DEFAULT_NODE_LIMIT,
    *,
    tol: float = 1e-7,
    warm_start: tuple[np.ndarray, float] | None = None,
    node_log: TextIO | None = None,
) -> MilpOutcome:
    """Solve a MipModel or MilpProblem to the requested gap.

    The gap is the hybrid ``(UB - LB) / (1 + |UB|)``. Hitting the node
    limit returns status ``node_limit`` with the best incumbent and bound,
    never a silent "optimal".

    ``warm_start`` is an optional known feasible point ``(x, objective)``
    used as the initial incumbent; it is verified before use. A good warm
    incumbent lets the tree prune from the first node.
    """
    prob = _as_milp(model)
    int_cols = np.asarray(prob.integer_columns, dtype=np.int64)

    base_dense = None
    if not sp.issparse(prob.lp.A):
        base_dense = np.asarray(prob.lp.A, dtype=np.float64)
    elif (prob.lp.num_rows + 2 * len(int_cols) + 8) * prob.lp.num_cols <= DENSE_LIMIT:
        base_dense = prob.lp.A.toarray()

    implied_upper: dict[int, float] = {}
    if prob.integer_upper is not None:
        for col, ub in zip(int_cols, prob.integer_upper):
            implied_upper[int(col)] = float(ub)

    log_writer = None
    if node_log is not None:
        log_writer = csv.writer(node_log)
        log_writer.writerow(["node", "depth", "bound", "incumbent"])

    incumbent_x: np.ndarray | None = None
    incumbent_obj = math.inf
    if warm_start is not None:
        incumbent_x, incumbent_obj = _check_warm_start(prob, warm_start, int_cols, tol)
    nodes = 0
    counter = 0
    m0 = prob.lp.num_rows
    heap: list[tuple[float, int, int, dict, BasisLabels | None]] = []

    def push(bound: float, depth: int, bounds: dict, warm: BasisLabels | None) -> None:
        nonlocal counter
        heapq.heappush(heap, (bound, counter, depth, bounds, warm))
        counter += 1

    def rel_gap(ub: float, lb: float) -> float:
        if not math.isfinite(ub):
            return math.inf
        return (ub - lb) / (1.0 + abs(ub))

    push(-math.inf, 0, {}, None)

    while heap:
        bound, _, depth, bounds, warm = heapq.heappop(heap)
        if rel_gap(incumbent_obj, bound) <= gap_tol:
            # best-bound order: every remaining node is at least this bound
            heap.clear()
            break
        if nodes >= node_limit:
            push(bound, depth, bounds, warm)
            break
        nodes += 1

        outcome = solve_lp(_node_lp(prob.lp, bounds, base_dense), tol=tol, warm=warm)
        if outcome.status == STATUS_INFEASIBLE:
            continue
        if outcome.status == STATUS_UNBOUNDED:
            raise SolverError(
                "node LP is unbounded; the integer model must be bounded below"
            )
        assert outcome.status == STATUS_OPTIMAL
        lp_obj = outcome.objective
        if log_writer is not None:
            log_writer.writerow([nodes, depth, f"{lp_obj:.9g}", f"{incumbent_obj:.9g}"])
        if rel_gap(incumbent_obj, lp_obj) <= gap_tol:
            continue

        x = outcome.x
        vals = x[int_cols]
        frac = np.abs(vals - np.round(vals))
        if len(frac) == 0 or float(frac.max()) <= INTEGRALITY_TOL:
            if lp_obj < incumbent_obj - 1e-12:
                incumbent_obj = lp_obj
                incumbent_x = x.copy()
                if len(int_cols):
                    incumbent_x[int_cols] = np.round(incumbent_x[int_cols])
            continue

        j = int(np.argmax(frac))
        col = int(int_cols[j])
        val = float(vals[j])
        lo, hi = bounds.get(col, (0.0, math.inf))
        down = dict(bounds)
        down[col] = (lo, math.floor(val))
        push(lp_obj, depth + 1, down, _translate_basis(outcome.basis, bounds, down, m0))
        up_lo = math.ceil(val)
        if up_lo <= min(hi, implied_upper.get(col, math.inf)):
            up = dict(bounds)
            up[col] = (up_lo, hi)
            push(lp_obj, depth + 1, up, _translate_basis(outcome.basis, bounds, up, m0))

    open_bounds = [entry[0] for entry in heap]
    if incumbent_x is None:
        if open_bounds:
            lb = min(open_bounds)
            return MilpOutcome(MILP_NODE_LIMIT, None, None, lb, math.inf, nodes)
        return MilpOutcome(MILP_INFEASIBLE, None, None, math.inf, math.inf, nodes)
    lb = min(open_bounds) if open_bounds else incumbent_obj
    lb = min(lb, incumbent_obj)
    gap = (incumbent_obj - lb) / (1.0 + abs(incumbent_obj))
    status = MILP_OPTIMAL if gap <= gap_tol else MILP_NODE_LIMIT
    return MilpOutcome(status, incumbent_x, incumbent_obj, lb, gap, nodes)
