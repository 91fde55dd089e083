"""Sparse MIP assembly for the consolidation problem.

Variables (all nonnegative; times 0-based days):

  X[p,s,h,d]  lbs sent supplier->gateway by land on day d
  Y[p,s,h,d]  lbs sent supplier->gateway by air on day d
  Z[p,h,d]    lbs sent gateway->customer as LCL on day d
  U[p,h,d]    lbs sent gateway->customer inside containers on day d
  T[h,d]      container count at gateway h on day d (integer)
  I[p,h,d]    lbs of product p held at gateway h at the start of day d
  N[p,d]      lbs of product p delivered early, on hand at the customer
              at the start of day d (absent in exact-day mode)

Constraint families:

  pickup                 per positive pickup (p,s,d): all weight leaves that day
  capacity               per (h,d): container weight <= capacity * T
  gateway_balance        per (p,h,d): inflow + held = outflow + carried
  customer_balance_late  per (p,d), d >= window: arrivals + stock = due + carry
  customer_balance_early per (p,d), d < window: arrivals + stock = carry

Lagged references falling before day 0 contribute nothing; inventories
carried past the last day are fixed to zero, so every picked-up pound must
be delivered within the horizon. Start-of-horizon stocks I[.,.,0] and
N[.,0] are likewise empty: those columns exist in the index map but appear
in no constraint row.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, TextIO

import numpy as np
import scipy.sparse as sp

from .errors import ModelError
from .instance import Instance, validate_routes

MODE_WINDOW = "window"
MODE_EXACT_DAY = "exact_day"

KINDS = ("X", "Y", "Z", "U", "T", "I", "N")

FAMILY_PICKUP = "pickup"
FAMILY_CAPACITY = "capacity"
FAMILY_GATEWAY = "gateway_balance"
FAMILY_CUSTOMER_LATE = "customer_balance_late"
FAMILY_CUSTOMER_EARLY = "customer_balance_early"


class VarKey(NamedTuple):
    """Typed variable key; unused indices are None."""

    kind: str
    p: str | None
    s: str | None
    h: str | None
    d: int

    def __str__(self) -> str:
        parts = [x for x in (self.p, self.s, self.h) if x is not None]
        parts.append(str(self.d))
        return f"{self.kind}[{','.join(parts)}]"


class VarIndexer:
    """Bijective, arithmetic key <-> column mapping for one instance/mode.

    Column order is X, Y, Z, U, T, I, N blocks, each in C order over the
    instance's (product, supplier, gateway, day) list order.
    """

    def __init__(self, instance: Instance, mode: str):
        if mode not in (MODE_WINDOW, MODE_EXACT_DAY):
            raise ModelError(f"unknown mode {mode!r}")
        self.instance = instance
        self.mode = mode
        self.nP = len(instance.products)
        self.nS = len(instance.suppliers)
        self.nH = len(instance.gateways)
        self.nD = instance.horizon_days
        psh = self.nP * self.nS * self.nH * self.nD
        ph = self.nP * self.nH * self.nD
        hd = self.nH * self.nD
        pd = self.nP * self.nD if mode == MODE_WINDOW else 0
        sizes = {"X": psh, "Y": psh, "Z": ph, "U": ph, "T": hd, "I": ph, "N": pd}
        self.offsets: dict[str, int] = {}
        total = 0
        for kind in KINDS:
            self.offsets[kind] = total
            total += sizes[kind]
        self.sizes = sizes
        self.num_vars = total
        self.p_index = {p: i for i, p in enumerate(instance.products)}
        self.s_index = {s: i for i, s in enumerate(instance.suppliers)}
        self.h_index = {h: i for i, h in enumerate(instance.gateways)}

    # index arguments below are integer positions, not ids
    def col_x(self, p: int, s: int, h: int, d: int) -> int:
        return self.offsets["X"] + ((p * self.nS + s) * self.nH + h) * self.nD + d

    def col_y(self, p: int, s: int, h: int, d: int) -> int:
        return self.offsets["Y"] + ((p * self.nS + s) * self.nH + h) * self.nD + d

    def col_z(self, p: int, h: int, d: int) -> int:
        return self.offsets["Z"] + (p * self.nH + h) * self.nD + d

    def col_u(self, p: int, h: int, d: int) -> int:
        return self.offsets["U"] + (p * self.nH + h) * self.nD + d

    def col_t(self, h: int, d: int) -> int:
        return self.offsets["T"] + h * self.nD + d

    def col_i(self, p: int, h: int, d: int) -> int:
        return self.offsets["I"] + (p * self.nH + h) * self.nD + d

    def col_n(self, p: int, d: int) -> int:
        if self.mode != MODE_WINDOW:
            raise ModelError("N columns do not exist in exact-day mode")
        return self.offsets["N"] + p * self.nD + d

    def key_of(self, col: int) -> VarKey:
        if not 0 <= col < self.num_vars:
            raise ModelError(f"column {col} out of range")
        inst = self.instance
        for kind in reversed(KINDS):
            if col >= self.offsets[kind] and self.sizes[kind] > 0:
                rem = col - self.offsets[kind]
                if kind in ("X", "Y"):
                    d = rem % self.nD
                    rem //= self.nD
                    h = rem % self.nH
                    rem //= self.nH
                    s = rem % self.nS
                    p = rem // self.nS
                    return VarKey(kind, inst.products[p], inst.suppliers[s], inst.gateways[h], d)
                if kind in ("Z", "U", "I"):
                    d = rem % self.nD
                    rem //= self.nD
                    h = rem % self.nH
                    p = rem // self.nH
                    return VarKey(kind, inst.products[p], None, inst.gateways[h], d)
                if kind == "T":
                    return VarKey("T", None, None, inst.gateways[rem // self.nD], rem % self.nD)
                return VarKey("N", inst.products[rem // self.nD], None, None, rem % self.nD)
        raise ModelError(f"column {col} out of range")


@dataclass
class MipModel:
    """Sparse constraint system with objective and integrality marks.

    Rows are stored as ``A x (sense) rhs`` with sense ``=`` or ``<``.
    ``cost_class`` labels each column's objective partition: ``f`` first
    leg, ``g`` LCL plus holding, ``h`` FCL containers, `` `` costless.
    """

    indexer: VarIndexer
    objective: np.ndarray
    A: sp.csr_matrix
    senses: np.ndarray
    rhs: np.ndarray
    row_tags: np.ndarray
    integer_columns: np.ndarray
    cost_class: np.ndarray

    @property
    def instance(self) -> Instance:
        return self.indexer.instance

    @property
    def mode(self) -> str:
        return self.indexer.mode

    @property
    def num_vars(self) -> int:
        return self.indexer.num_vars

    @property
    def num_rows(self) -> int:
        return self.A.shape[0]

    def family_counts(self) -> dict[str, int]:
        tags, counts = np.unique(self.row_tags, return_counts=True)
        return dict(zip(tags.tolist(), counts.tolist()))

    def export_text(self, stream: TextIO) -> None:
        """Deterministic plain-text dump: one row per line."""
        acsr = self.A
        for r in range(self.num_rows):
            lo, hi = acsr.indptr[r], acsr.indptr[r + 1]
            cols = acsr.indices[lo:hi]
            vals = acsr.data[lo:hi]
            pairs = " ".join(f"{c}:{v:.12g}" for c, v in zip(cols, vals))
            stream.write(
                f"{self.row_tags[r]} {self.senses[r]} {self.rhs[r]:.12g} {pairs}\n"
            )


def expected_num_vars(nP: int, nS: int, nH: int, nD: int, mode: str = MODE_WINDOW) -> int:
    """Closed-form column tally for given dimensions."""
    n = 2 * nP * nS * nH * nD + 3 * nP * nH * nD + nH * nD
    if mode == MODE_WINDOW:
        n += nP * nD
    return n


def build_mip(instance: Instance, mode: str = MODE_WINDOW, *, require_routes: bool = True) -> MipModel:
    """Assemble the full consolidation MIP for an instance.

    With ``require_routes`` (the default) the instance must pass
    :func:`validate_routes`; disable it only to study infeasible models.
    """
    if require_routes:
        diag = validate_routes(instance)
        if not diag.feasible:
            first = diag.issues[0]
            raise ModelError(
                f"instance fails route validation ({len(diag.issues)} pickup(s)); "
                f"first: ({first.product}, {first.supplier}, {first.day}) "
                f"{first.reason}"
            )

    ix = VarIndexer(instance, mode)
    nP, nS, nH, nD = ix.nP, ix.nS, ix.nH, ix.nD
    k = instance.container_capacity

    rows_r: list[np.ndarray] = []
    rows_c: list[np.ndarray] = []
    rows_v: list[np.ndarray] = []

    def add(r, c, v) -> None:
        rows_r.append(np.asarray(r, dtype=np.int64).ravel())
        rows_c.append(np.asarray(c, dtype=np.int64).ravel())
        rows_v.append(np.asarray(v, dtype=np.float64).ravel())

    senses: list[str] = []
    rhs: list[float] = []
    tags: list[str] = []
    row = 0

    # pickup rows: one per positive-demand (p,s,d)
    pickup_keys = instance.positive_pickups()
    for (p, s, d) in pickup_keys:
        pi, si = ix.p_index[p], ix.s_index[s]
        cols = [ix.col_x(pi, si, h, d) for h in range(nH)]
        cols += [ix.col_y(pi, si, h, d) for h in range(nH)]
        add([row] * len(cols), cols, [1.0] * len(cols))
        senses.append("=")
        rhs.append(instance.pickups[p, s, d])
        tags.append(FAMILY_PICKUP)
        row += 1

    # capacity rows: one per (h,d)
    cap_row0 = row
    days = np.arange(nD)
    for h in range(nH):
        r0 = cap_row0 + h * nD
        rr = r0 + days
        for p in range(nP):
            add(rr, ix.col_u(p, h, 0) + days, np.ones(nD))
        add(rr, ix.col_t(h, 0) + days, np.full(nD, -k))
    senses += ["<"] * (nH * nD)
    rhs += [0.0] * (nH * nD)
    tags += [FAMILY_CAPACITY] * (nH * nD)
    row += nH * nD

    # gateway balance rows: one per (p,h,d)
    gw_row0 = row

    def gw_row(p: int, h: int, d) -> np.ndarray:
        return gw_row0 + ((p * nH + h) * nD) + d

    for p in range(nP):
        for h in range(nH):
            rr = gw_row(p, h, days)
            add(rr, ix.col_u(p, h, 0) + days, np.ones(nD))
            add(rr, ix.col_z(p, h, 0) + days, np.ones(nD))
            # carried stock: +I[d+1] (d < nD-1), -I[d] (d > 0)
            if nD > 1:
                add(rr[:-1], ix.col_i(p, h, 0) + days[1:], np.ones(nD - 1))
                add(rr[1:], ix.col_i(p, h, 0) + days[1:], -np.ones(nD - 1))
    # first-leg arrivals: X/Y sent on day d land on day d + t1
    for s in range(nS):
        sid = instance.suppliers[s]
        for h in range(nH):
            hid = instance.gateways[h]
            for kind, t1 in (
                ("X", instance.land_time[sid, hid]),
                ("Y", instance.air_time[sid, hid]),
            ):
                if t1 >= nD:
                    continue
                send_days = np.arange(nD - t1)
                for p in range(nP):
                    rr = gw_row(p, h, send_days + t1)
                    col0 = ix.col_x(p, s, h, 0) if kind == "X" else ix.col_y(p, s, h, 0)
                    add(rr, col0 + send_days, -np.ones(len(send_days)))
    senses += ["="] * (nP * nH * nD)
    rhs += [0.0] * (nP * nH * nD)
    tags += [FAMILY_GATEWAY] * (nP * nH * nD)
    row += nP * nH * nD

    # customer balance rows: one per (p,d)
    cust_row0 = row
    tw = instance.window_days

    def cust_row(p: int, d) -> np.ndarray:
        return cust_row0 + p * nD + d

    for p in range(nP):
        for h in range(nH):
            t2 = instance.second_leg_time[instance.gateways[h]]
            if t2 >= nD:
                continue
            send_days = np.arange(nD - t2)
            rr = cust_row(p, send_days + t2)
            add(rr, ix.col_u(p, h, 0) + send_days, np.ones(len(send_days)))
            add(rr, ix.col_z(p, h, 0) + send_days, np.ones(len(send_days)))
        if mode == MODE_WINDOW:
            # +N[d] for d >= 1, -N[d+1] for d <= nD-2
            if nD > 1:
                add(cust_row(p, days[1:]), ix.col_n(p, 0) + days[1:], np.ones(nD - 1))
                add(cust_row(p, days[:-1]), ix.col_n(p, 0) + days[1:], -np.ones(nD - 1))
    cust_rhs = np.zeros(nP * nD)
    for (p, s, d) in pickup_keys:
        due = d + tw
        if due < nD:
            cust_rhs[ix.p_index[p] * nD + due] += instance.pickups[p, s, d]
    senses += ["="] * (nP * nD)
    rhs += cust_rhs.tolist()
    for p in range(nP):
        tags += [FAMILY_CUSTOMER_EARLY] * min(tw, nD)
        tags += [FAMILY_CUSTOMER_LATE] * max(0, nD - tw)
    row += nP * nD

    m = row
    r_all = np.concatenate(rows_r) if rows_r else np.zeros(0, dtype=np.int64)
    c_all = np.concatenate(rows_c) if rows_c else np.zeros(0, dtype=np.int64)
    v_all = np.concatenate(rows_v) if rows_v else np.zeros(0)
    A = sp.coo_matrix((v_all, (r_all, c_all)), shape=(m, ix.num_vars)).tocsr()
    A.sum_duplicates()

    # objective and cost partition
    obj = np.zeros(ix.num_vars)
    cost_class = np.full(ix.num_vars, " ", dtype="<U1")
    for s in range(nS):
        sid = instance.suppliers[s]
        for h in range(nH):
            hid = instance.gateways[h]
            xs = ix.col_x(0, s, h, 0)
            ys = ix.col_y(0, s, h, 0)
            stride = nS * nH * nD
            for p in range(nP):
                obj[xs + p * stride : xs + p * stride + nD] = instance.land_cost[sid, hid]
                obj[ys + p * stride : ys + p * stride + nD] = instance.air_cost[sid, hid]
    for h in range(nH):
        hid = instance.gateways[h]
        for p in range(nP):
            z0 = ix.col_z(p, h, 0)
            i0 = ix.col_i(p, h, 0)
            obj[z0 : z0 + nD] = instance.lcl_cost[hid]
            obj[i0 : i0 + nD] = instance.hold_cost[hid]
        t0 = ix.col_t(h, 0)
        obj[t0 : t0 + nD] = instance.fcl_cost[hid]
    cost_class[ix.offsets["X"] : ix.offsets["X"] + ix.sizes["X"]] = "f"
    cost_class[ix.offsets["Y"] : ix.offsets["Y"] + ix.sizes["Y"]] = "f"
    cost_class[ix.offsets["Z"] : ix.offsets["Z"] + ix.sizes["Z"]] = "g"
    cost_class[ix.offsets["I"] : ix.offsets["I"] + ix.sizes["I"]] = "g"
    cost_class[ix.offsets["T"] : ix.offsets["T"] + ix.sizes["T"]] = "h"

    integer_columns = np.arange(ix.offsets["T"], ix.offsets["T"] + ix.sizes["T"])

    return MipModel(
        indexer=ix,
        objective=obj,
        A=A,
        senses=np.array(senses, dtype="<U1"),
        rhs=np.asarray(rhs, dtype=np.float64),
        row_tags=np.array(tags),
        integer_columns=integer_columns,
        cost_class=cost_class,
    )


@dataclass(frozen=True)
class CostBreakdown:
    """Objective split into the three cost components plus the fixed line."""

    first_leg: float
    lcl_and_hold: float
    fcl: float
    fixed_pickup: float

    @property
    def total(self) -> float:
        return self.first_leg + self.lcl_and_hold + self.fcl

    @property
    def grand_total(self) -> float:
        return self.total + self.fixed_pickup


def objective_breakdown(model: MipModel, solution: np.ndarray) -> CostBreakdown:
    """Recompute cost components from a solution vector.

    The pickup fixed cost is a post-hoc reporting line: fixed cost times the
    number of positive-weight pickup events, never part of the objective.
    """
    x = np.asarray(solution, dtype=np.float64)
    if x.shape != (model.num_vars,):
        raise ModelError(
            f"solution length {x.shape} does not match {model.num_vars} columns"
        )
    contrib = model.objective * x
    f = float(contrib[model.cost_class == "f"].sum())
    g = float(contrib[model.cost_class == "g"].sum())
    h = float(contrib[model.cost_class == "h"].sum())
    fixed = model.instance.pickup_fixed_cost * len(model.instance.positive_pickups())
    return CostBreakdown(first_leg=f, lcl_and_hold=g, fcl=h, fixed_pickup=fixed)


def lcl_hold_split(model: MipModel, solution: np.ndarray) -> tuple[float, float]:
    """Split the g component into (LCL freight, gateway holding)."""
    ix = model.indexer
    x = np.asarray(solution, dtype=np.float64)
    z = slice(ix.offsets["Z"], ix.offsets["Z"] + ix.sizes["Z"])
    i = slice(ix.offsets["I"], ix.offsets["I"] + ix.sizes["I"])
    return (
        float((model.objective[z] * x[z]).sum()),
        float((model.objective[i] * x[i]).sum()),
    )


@dataclass(frozen=True)
class ResidualReport:
    """Max-residual summary of a candidate solution against the model."""

    family_residuals: dict[str, float]
    max_integrality_violation: float
    max_negativity: float

    def ok(self, tol: float) -> bool:
        worst = max(self.family_residuals.values(), default=0.0)
        return (
            worst <= tol
            and self.max_integrality_violation <= tol
            and self.max_negativity <= tol
        )


def check_solution(model: MipModel, solution: np.ndarray, tol: float = 1e-6) -> ResidualReport:
    """Report constraint residuals, T integrality drift, and negativity."""
    x = np.asarray(solution, dtype=np.float64)
    if x.shape != (model.num_vars,):
        raise ModelError(
            f"solution length {x.shape} does not match {model.num_vars} columns"
        )
    ax = model.A @ x
    resid = ax - model.rhs
    le = model.senses == "<"
    resid_mag = np.abs(resid)
    resid_mag[le] = np.maximum(resid[le], 0.0)
    families: dict[str, float] = {}
    for tag in (
        FAMILY_PICKUP,
        FAMILY_CAPACITY,
        FAMILY_GATEWAY,
        FAMILY_CUSTOMER_LATE,
        FAMILY_CUSTOMER_EARLY,
    ):
        mask = model.row_tags == tag
        families[tag] = float(resid_mag[mask].max()) if mask.any() else 0.0
    t_vals = x[model.integer_columns]
    integrality = float(np.abs(t_vals - np.round(t_vals)).max()) if len(t_vals) else 0.0
    negativity = float(np.maximum(-x, 0.0).max()) if len(x) else 0.0
    return ResidualReport(
        family_residuals=families,
        max_integrality_violation=integrality,
        max_negativity=negativity,
    )
