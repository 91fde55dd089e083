"""Shared instance builders for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from intransit import Instance


def build_instance(
    *,
    horizon_days=10,
    window_days=4,
    products=("p0",),
    suppliers=("s0",),
    gateways=("g0",),
    pickups=None,
    land_cost=0.30,
    air_cost=None,
    land_time=2,
    air_time=1,
    lcl_cost=0.20,
    fcl_cost=4800.0,
    hold_cost=0.005,
    second_leg_time=1,
    container_capacity=48000.0,
    pickup_fixed_cost=80.0,
):
    """A small instance with uniform rates; scalar arguments are broadcast.

    Dict arguments are taken as-is so individual tests can vary one pair
    or one gateway without spelling out the whole table.
    """
    products = list(products)
    suppliers = list(suppliers)
    gateways = list(gateways)
    pairs = [(s, h) for s in suppliers for h in gateways]

    def per_pair(value):
        return dict(value) if isinstance(value, dict) else {k: value for k in pairs}

    def per_gateway(value):
        return dict(value) if isinstance(value, dict) else {h: value for h in gateways}

    if pickups is None:
        pickups = {(products[0], suppliers[0], 0): 1000.0}
    if air_cost is None:
        air_cost = {k: 3.0 * v for k, v in per_pair(land_cost).items()}
    return Instance(
        horizon_days=horizon_days,
        window_days=window_days,
        products=products,
        suppliers=suppliers,
        gateways=gateways,
        pickups=dict(pickups),
        land_cost=per_pair(land_cost),
        air_cost=per_pair(air_cost),
        land_time=per_pair(land_time),
        air_time=per_pair(air_time),
        lcl_cost=per_gateway(lcl_cost),
        fcl_cost=per_gateway(fcl_cost),
        hold_cost=per_gateway(hold_cost),
        second_leg_time=per_gateway(second_leg_time),
        container_capacity=container_capacity,
        pickup_fixed_cost=pickup_fixed_cost,
    )


@pytest.fixture
def tiny_instance():
    return build_instance()


@pytest.fixture
def east_coast_ports():
    """Three-gateway instance with the published port rate card."""
    gateways = ["jacksonville", "elizabeth", "miami"]
    return build_instance(
        horizon_days=20,
        window_days=9,
        gateways=gateways,
        pickups={("p0", "s0", 0): 12000.0},
        lcl_cost={"jacksonville": 0.2550, "elizabeth": 0.1713, "miami": 0.1602},
        fcl_cost={"jacksonville": 4773.00, "elizabeth": 4805.46, "miami": 3888.00},
        second_leg_time={"jacksonville": 1, "elizabeth": 2, "miami": 1},
        land_time=3,
        air_time=1,
    )


def assert_instances_equal(a: Instance, b: Instance) -> None:
    assert a.horizon_days == b.horizon_days
    assert a.window_days == b.window_days
    assert a.products == b.products
    assert a.suppliers == b.suppliers
    assert a.gateways == b.gateways
    assert a.container_capacity == b.container_capacity
    assert a.pickup_fixed_cost == b.pickup_fixed_cost
    for name in (
        "pickups",
        "land_cost",
        "air_cost",
        "land_time",
        "air_time",
        "lcl_cost",
        "fcl_cost",
        "hold_cost",
        "second_leg_time",
    ):
        da, db = getattr(a, name), getattr(b, name)
        assert set(da) == set(db), name
        for key in da:
            # rates stored per 100 lbs pick up one ulp of unit-conversion noise
            assert da[key] == pytest.approx(db[key], rel=1e-12), (name, key)


def solution_vector(model, assignments: dict) -> np.ndarray:
    """Dense solution vector from {column: value}."""
    x = np.zeros(model.num_vars)
    for col, val in assignments.items():
        x[col] = val
    return x
