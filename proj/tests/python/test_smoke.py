import json
import os
from pathlib import Path

import pytest

import camplan

DATA = Path(os.environ.get("CAMPLAN_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))
CATALOG = DATA / "catalog_experiment.json"
PROFILES = DATA / "profiles_640x480.json"


def profile(program, device):
    for p in json.loads(PROFILES.read_text())["profiles"]:
        if p["program"] == program and p["device"] == device:
            return p
    raise KeyError(program)


def test_plan_scenario1():
    plan = camplan.plan(CATALOG, PROFILES, DATA / "scenario1.json", "st3")
    assert plan["hourly_cost"] == "0.650"
    assert [i["type"] for i in plan["instances"]] == ["g2.2xlarge"]
    assert len(plan["assignments"]) == 4


def test_compare_scenario3():
    rows = camplan.compare(CATALOG, PROFILES, DATA / "scenario3.json")
    assert [r["status"] for r in rows] == ["fail", "ok", "ok"]
    assert rows[1]["hourly_cost"] == "7.150"
    assert rows[2]["hourly_cost"] == "6.919"
    assert rows[2]["savings_percent"] == 3


def test_infeasible_raises():
    with pytest.raises(camplan.InfeasibleError, match="cpu max 0.56"):
        camplan.plan(CATALOG, PROFILES, DATA / "scenario3.json", "st1")
    assert issubclass(camplan.InfeasibleError, camplan.Error)


def test_simulate_planned_scenario2():
    workload = DATA / "scenario2.json"
    plan = camplan.plan(CATALOG, PROFILES, workload)
    report = camplan.simulate(CATALOG, PROFILES, workload, plan)
    assert report["overall_performance"] == 1.0
    assert report["violations"] == []


def test_fit_and_speedup():
    cpu = camplan.fit_profile(DATA / "runs/zf_cpu.json", "ZF", "cpu-only", max_rate=0.56)
    gpu = camplan.fit_profile(DATA / "runs/zf_gpu.json", "ZF", "gpu-assisted", max_rate=9.15)
    assert camplan.speedup(cpu, gpu) == pytest.approx(16.34, abs=0.01)


def test_vectors():
    ec2 = DATA / "catalog_ec2.json"
    assert camplan.capacity_vector(ec2, "g2.8xlarge") == [32, 60] + [1536, 4] * 4
    assert camplan.capacity_vector(ec2, "c4.2xlarge") == [8, 15] + [0, 0] * 4
    zf = camplan.demand_fraction(profile("ZF", "gpu-assisted"), 8.0)
    assert zf[0] == pytest.approx(0.88)
    assert zf[2] == pytest.approx(0.48)


def test_solve_raw_instance():
    instance = {
        "dims": 1,
        "bin_types": [{"name": "small", "capacity": [8], "cost": "0.419"}],
        "items": [{"id": "a", "choices": [{"id": "cpu", "demand": [4]}]}],
    }
    exact = camplan.solve(instance)
    assert exact["total_cost"] == "0.419"
    assert exact["optimal"] is True
    assert camplan.solve(instance, "brute_force")["total_cost"] == "0.419"
    assert 0.2095 - 1e-12 <= camplan.lower_bound(instance) <= 0.419


def test_synth_run_round_trip():
    truth = profile("VGG-16", "gpu-assisted")
    run = camplan.synth_run(truth, 1.0, 3)
    fitted = camplan.fit_profile(run, "VGG-16", "gpu-assisted")
    slope = fitted["utilization"]["cpu"] / fitted["reference_rate_fps"]
    assert slope == pytest.approx(0.053 / 0.2, rel=1e-9)


def test_bad_input_raises():
    with pytest.raises(camplan.Error):
        camplan.plan(CATALOG, PROFILES, DATA / "scenario1.json", "st9")
    with pytest.raises(ValueError):
        camplan._core.capacity_vector("{not json", "g2.2xlarge")
