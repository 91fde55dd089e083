"""Show what the LP relaxation does to container decisions.

On a small single-lane instance the relaxation buys a fractional slice of a
container and prices every consolidated pound at the container's per-pound
rate. Because that rate beats LCL here, the relaxed plan carries no LCL
freight at all, and its objective is a strict lower bound on the integer
optimum, which must pay the LCL rate for anything short of a whole box.
"""

import numpy as np

from intransit import MODE_WINDOW, build_mip, lp_relaxation, run_benders
from intransit.instance import Instance


def lane_instance() -> Instance:
    return Instance(
        horizon_days=10,
        window_days=4,
        products=["p0"],
        suppliers=["s0"],
        gateways=["g0"],
        pickups={("p0", "s0", 0): 1000.0},
        land_cost={("s0", "g0"): 0.30},
        air_cost={("s0", "g0"): 0.90},
        land_time={("s0", "g0"): 2},
        air_time={("s0", "g0"): 1},
        lcl_cost={"g0": 0.20},
        fcl_cost={"g0": 4800.0},
        hold_cost={"g0": 0.005},
        second_leg_time={"g0": 1},
        container_capacity=48000.0,
    )


def main() -> None:
    inst = lane_instance()
    per_pound_fcl = inst.fcl_cost["g0"] / inst.container_capacity
    print(f"LCL rate:            ${inst.lcl_cost['g0']:.3f}/lb")
    print(f"full-container rate: ${per_pound_fcl:.3f}/lb (if the box were full)")

    relaxed_obj, relaxed_x, relaxed_parts = lp_relaxation(inst, MODE_WINDOW)
    model = build_mip(inst, MODE_WINDOW)
    ix = model.indexer
    t_cols = [ix.col_t(h, d) for h in range(1) for d in range(inst.horizon_days)]
    t_vals = relaxed_x[t_cols]
    z_total = sum(
        relaxed_x[ix.col_z(0, 0, d)] for d in range(inst.horizon_days)
    )
    print(f"\nrelaxation objective: ${relaxed_obj:.2f}")
    print(f"  fractional containers bought: {float(np.sum(t_vals)):.4f}")
    print(f"  LCL pounds shipped:           {z_total:.1f}")
    print("  the relaxation pays the full-container rate on a sliver of a box,")
    print("  so LCL never enters the optimal relaxed plan here")

    result = run_benders(inst, MODE_WINDOW)
    parts = result.breakdown
    print(f"\ninteger optimum:      ${result.objective:.2f}")
    print(f"  first leg ${parts.first_leg:.2f}, LCL+holding "
          f"${parts.lcl_and_hold:.2f}, containers ${parts.fcl:.2f}")
    gap = result.objective - relaxed_obj
    print(f"\nintegrality gap: ${gap:.2f}; 1000 lbs is nowhere near the "
          f"{inst.container_capacity:,.0f} lb box, so whole containers lose to LCL")

    frac = relaxed_parts.fcl / relaxed_obj if relaxed_obj else 0.0
    print(f"(container spend is {frac:.0%} of the relaxed objective)")


if __name__ == "__main__":
    main()
