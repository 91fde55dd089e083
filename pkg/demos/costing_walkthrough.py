"""Walk through the costing data behind a three-port consolidation setup.

Builds the East Coast port rate card, derives first-leg rates from a zone
tariff, and prints the break-even container fill fraction per gateway: the
share of a container that must be used before FCL beats LCL.
"""

from intransit import (
    Instance,
    default_zone_table,
    fcl_threshold,
    rate_class_params,
    zone_lookup,
)

ZONE_MATRIX = {
    ("NE", "NE"): "A1",
    ("NE", "SE"): "D2",
    ("SE", "NE"): "D2",
    ("SE", "SE"): "A1",
}

PORTS = {
    # gateway: (zone, lcl $/lb, fcl $/container, days to customer)
    "elizabeth": ("NE", 0.1713, 4805.46, 2),
    "jacksonville": ("SE", 0.2550, 4773.00, 1),
    "miami": ("SE", 0.1602, 3888.00, 1),
}

CAPACITY = 48000.0


def main() -> None:
    table = default_zone_table(ZONE_MATRIX)
    print("zone tariff (supplier zone NE):")
    for zone in ("NE", "SE"):
        label = zone_lookup(table, "NE", zone)
        days, rate = rate_class_params(table, label)
        print(f"  NE -> {zone}: class {label}, {days} days, ${rate:.2f}/lb")

    gateways = list(PORTS)
    instance = Instance(
        horizon_days=30,
        window_days=9,
        products=["p0"],
        suppliers=["s0"],
        gateways=gateways,
        pickups={("p0", "s0", 0): 20000.0},
        land_cost={("s0", h): rate_class_params(table, zone_lookup(table, "NE", PORTS[h][0]))[1] for h in gateways},
        air_cost={("s0", h): 3 * rate_class_params(table, zone_lookup(table, "NE", PORTS[h][0]))[1] for h in gateways},
        land_time={("s0", h): rate_class_params(table, zone_lookup(table, "NE", PORTS[h][0]))[0] for h in gateways},
        air_time={("s0", h): max(1, rate_class_params(table, zone_lookup(table, "NE", PORTS[h][0]))[0] - 2) for h in gateways},
        lcl_cost={h: PORTS[h][1] for h in gateways},
        fcl_cost={h: PORTS[h][2] for h in gateways},
        hold_cost={h: 0.005 for h in gateways},
        second_leg_time={h: PORTS[h][3] for h in gateways},
        container_capacity=CAPACITY,
    )

    print("\nbreak-even container fill per gateway:")
    for h in gateways:
        share = fcl_threshold(instance, h)
        lbs = share * CAPACITY
        print(
            f"  {h:>12}: LCL ${PORTS[h][1]:.4f}/lb vs FCL ${PORTS[h][2]:,.2f} "
            f"-> consolidate above {share:.1%} ({lbs:,.0f} lbs)"
        )
    print(
        "\nbelow the threshold a container costs more than paying the per-pound"
        "\nLCL rate; above it every extra pound rides free."
    )


if __name__ == "__main__":
    main()
