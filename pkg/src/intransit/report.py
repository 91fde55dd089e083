"""Solution reporting: delivery-lag histograms, scenario tables, exports."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import TextIO

import numpy as np

from .errors import IntransitError
from .model import MipModel, check_solution, lcl_hold_split, objective_breakdown

LAG_TOL = 1e-6


@dataclass(frozen=True)
class HistogramBin:
    weight: float
    products: int


@dataclass
class DeliveryHistogram:
    """Delivered weight binned by pickup-to-delivery lag in days."""

    bins: dict[int, HistogramBin] = field(default_factory=dict)

    @property
    def total_weight(self) -> float:
        return sum(b.weight for b in self.bins.values())

    def max_lag(self) -> int | None:
        return max(self.bins) if self.bins else None

    def export_csv(self, stream: TextIO) -> None:
        writer = csv.writer(stream)
        writer.writerow(["lag_days", "delivered_weight_lbs", "product_count"])
        for lag in sorted(self.bins):
            b = self.bins[lag]
            writer.writerow([lag, f"{b.weight:.6f}", b.products])


def delivery_histogram(model: MipModel, solution: np.ndarray, tol: float = 1e-6) -> DeliveryHistogram:
    """Bin each delivered pound by its pickup-to-delivery lag.

    Arrivals of a product are matched to its pickups first-in-first-out,
    which is consistent with the window constraints: cumulative arrivals
    never trail cumulative due demand. Rejects infeasible solutions.
    """
    report = check_solution(model, solution, tol)
    if not report.ok(tol * (1.0 + abs(float(np.abs(model.rhs).max(initial=0.0))))):
        raise IntransitError(
            f"solution fails feasibility check: residuals {report.family_residuals}, "
            f"integrality {report.max_integrality_violation:.3g}"
        )
    ix = model.indexer
    inst = model.instance
    x = np.asarray(solution, dtype=np.float64)
    weight_bins: dict[int, float] = {}
    product_bins: dict[int, set[str]] = {}

    for p_pos, p in enumerate(inst.products):
        # arrivals per day at the customer
        arrivals = np.zeros(inst.horizon_days)
        for h_pos, h in enumerate(inst.gateways):
            t2 = inst.second_leg_time[h]
            for d in range(inst.horizon_days - t2):
                w = x[ix.col_u(p_pos, h_pos, d)] + x[ix.col_z(p_pos, h_pos, d)]
                if w > tol:
                    arrivals[d + t2] += w
        pickups = sorted(
            ((d, inst.pickups[p, s, d]) for (pp, s, d) in inst.pickups if pp == p and inst.pickups[pp, s, d] > 0),
            key=lambda t: t[0],
        )
        # FIFO matching of arrival mass to pickup mass
        pi = 0
        remaining = pickups[pi][1] if pickups else 0.0
        for day in range(inst.horizon_days):
            mass = arrivals[day]
            while mass > tol and pi < len(pickups):
                take = min(mass, remaining)
                lag = day - pickups[pi][0]
                weight_bins[lag] = weight_bins.get(lag, 0.0) + take
                product_bins.setdefault(lag, set()).add(p)
                mass -= take
                remaining -= take
                if remaining <= tol:
                    pi += 1
                    remaining = pickups[pi][1] if pi < len(pickups) else 0.0
            if mass > tol and pi >= len(pickups):
                raise IntransitError(
                    f"product {p}: arrivals exceed pickups by {mass:.3g} lbs"
                )

    hist = DeliveryHistogram()
    for lag, w in weight_bins.items():
        hist.bins[lag] = HistogramBin(weight=w, products=len(product_bins[lag]))
    bad = [lag for lag in hist.bins if lag > inst.window_days + LAG_TOL]
    if bad:
        raise IntransitError(f"delivery lag exceeds the window: lags {sorted(bad)}")
    return hist


def consolidation_share(model: MipModel, solution: np.ndarray) -> float | None:
    """FCL-delivered weight over total delivered weight; None if nothing moved."""
    ix = model.indexer
    x = np.asarray(solution, dtype=np.float64)
    u = x[ix.offsets["U"] : ix.offsets["U"] + ix.sizes["U"]].sum()
    z = x[ix.offsets["Z"] : ix.offsets["Z"] + ix.sizes["Z"]].sum()
    total = u + z
    if total <= 0.0:
        return None
    return float(u / total)


@dataclass(frozen=True)
class ScenarioRow:
    label: str
    containers: float
    fixed_pickup_cost: float
    first_leg_cost: float
    lcl_cost: float
    hold_cost: float
    fcl_cost: float

    @property
    def total(self) -> float:
        return self.first_leg_cost + self.lcl_cost + self.hold_cost + self.fcl_cost

    @property
    def grand_total(self) -> float:
        return self.total + self.fixed_pickup_cost


@dataclass
class ScenarioReport:
    rows: list[ScenarioRow] = field(default_factory=list)

    def export_csv(self, stream: TextIO) -> None:
        writer = csv.writer(stream)
        writer.writerow(
            [
                "label",
                "containers",
                "fixed_pickup_cost",
                "first_leg_cost",
                "lcl_cost",
                "hold_cost",
                "fcl_cost",
                "total",
                "grand_total",
            ]
        )
        for r in self.rows:
            writer.writerow(
                [
                    r.label,
                    f"{r.containers:g}",
                    f"{r.fixed_pickup_cost:.2f}",
                    f"{r.first_leg_cost:.2f}",
                    f"{r.lcl_cost:.2f}",
                    f"{r.hold_cost:.2f}",
                    f"{r.fcl_cost:.2f}",
                    f"{r.total:.2f}",
                    f"{r.grand_total:.2f}",
                ]
            )

    def format_table(self) -> str:
        headers = [
            "scenario",
            "containers",
            "fixed",
            "first leg",
            "LCL",
            "hold",
            "FCL",
            "total",
            "grand total",
        ]
        body = [
            [
                r.label,
                f"{r.containers:g}",
                f"{r.fixed_pickup_cost:,.2f}",
                f"{r.first_leg_cost:,.2f}",
                f"{r.lcl_cost:,.2f}",
                f"{r.hold_cost:,.2f}",
                f"{r.fcl_cost:,.2f}",
                f"{r.total:,.2f}",
                f"{r.grand_total:,.2f}",
            ]
            for r in self.rows
        ]
        widths = [max(len(h), *(len(row[i]) for row in body)) if body else len(h) for i, h in enumerate(headers)]
        lines = [
            "  ".join(h.rjust(w) for h, w in zip(headers, widths)),
            "  ".join("-" * w for w in widths),
        ]
        for row in body:
            lines.append("  ".join(cell.rjust(w) for cell, w in zip(row, widths)))
        return "\n".join(lines)


def scenario_row(label: str, model: MipModel, solution: np.ndarray) -> ScenarioRow:
    """Build one report row from a solution vector."""
    bd = objective_breakdown(model, solution)
    lcl, hold = lcl_hold_split(model, solution)
    ix = model.indexer
    containers = float(
        np.asarray(solution)[ix.offsets["T"] : ix.offsets["T"] + ix.sizes["T"]].sum()
    )
    return ScenarioRow(
        label=label,
        containers=containers,
        fixed_pickup_cost=bd.fixed_pickup,
        first_leg_cost=bd.first_leg,
        lcl_cost=lcl,
        hold_cost=hold,
        fcl_cost=bd.fcl,
    )


def export_solution_json(
    model: MipModel, solution: np.ndarray, objective: float, path: Path, *, threshold: float = 1e-9
) -> None:
    """Write nonzero variable values keyed by their VarKey string form."""
    x = np.asarray(solution, dtype=np.float64)
    nz = np.flatnonzero(np.abs(x) > threshold)
    variables = {str(model.indexer.key_of(int(c))): float(x[c]) for c in nz}
    payload = {
        "mode": model.mode,
        "objective": objective,
        "num_variables": model.num_vars,
        "variables": variables,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
