import json
import math

import evasion


def test_cost_spec_and_evaluate():
    spec = evasion.CostSpec(target=[0.0, 0.0], weights=[1.0, 2.0], exponent=1.0)
    assert spec.dims == 2
    assert evasion.evaluate_cost([1.0, 1.0], spec) == 3.0
    linf = evasion.CostSpec(target=[0.0, 0.0], weights=[1.0, 1.0], exponent=math.inf)
    assert evasion.evaluate_cost([2.0, -3.0], linf) == 3.0


def test_l1_ball_vertices():
    spec = evasion.CostSpec(target=[0.0, 0.0], weights=[1.0, 2.0], exponent=1.0)
    verts = evasion.l1_ball_vertices(2.0, spec)
    assert [2.0, 0.0] in verts
    assert [0.0, 1.0] in verts
    assert len(verts) == 4


def test_steps_for_gap():
    assert evasion.steps_for_gap(1.0, 2.0 ** 32, 0.01, multiplicative=True) == 12
    assert evasion.steps_for_gap(1.0, 5.0, 0.5, multiplicative=False) == 3


def test_halfspace_mac():
    spec = evasion.CostSpec(target=[0.0, 0.0], weights=[1.0, 1.0], exponent=2.0)
    mac = evasion.halfspace_mac([1.0, 1.0], [1.0, 1.0], spec)
    assert abs(mac - 2.0 / math.sqrt(2.0)) < 1e-12


def test_subgradient_cut():
    spec = evasion.CostSpec(target=[0.0, 0.0], weights=[1.0, 1.0], exponent=2.0)
    normal, offset = evasion.subgradient_cut([3.0, 4.0], spec)
    assert abs(normal[0] * 3.0 + normal[1] * 4.0 - offset) < 1e-9


def test_evade_round_trip():
    config = {
        "algorithm": "convex_search",
        "dims": 3,
        "epsilon": 0.1,
        "seed": 5,
        "classifier": {"kind": "random_halfspace"},
    }
    out = evasion.evade(json.dumps(config))
    assert out["termination"] == "converged"
    assert out["ratio"] <= 1.1 + 1e-9
    assert len(out["witness"]) == 3
    assert out["lower"] <= out["upper"]


def test_verify_runs_clean():
    failures, report = evasion.verify("cost")
    assert failures == 0
    assert "cost" in report
