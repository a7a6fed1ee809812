import json

import numpy as np
import pytest

from inertia import anticipate, checks
from inertia.anticipate import ActionCandidate, ActionKind
from inertia.exceptions import ParseError, SizeError

HEADER = (
    "plant_id,kind,w_gvas,cost,notice_minutes,ramp_mw_per_min,"
    "stable_export_mw,currently_on"
)
KEEP_RUNNING = [
    "T_CARR-1",
    "T_CARR-2",
    "T_PEMB-31",
    "T_PEMB-41",
    "T_PEMB-51",
    "T_GRAI-6",
    "T_GRAI-7",
]


@pytest.fixture
def candidates_csv(write_csv):
    rows = [f"{pid},keep_running,3.4,10,0,10,300,true" for pid in KEEP_RUNNING]
    rows += [
        "T_DINO-1,start,7.7,30,30,50,300,false",
        "T_SHBA-1,keep_running,12.0,400,0,10,300,yes",
        "T_HUMR-1,start,35.0,900,60,5,400,no",
        "T_STAY-1,start,20.0,350,600,2,500,N",
        "T_MARC-1,keep_running,0,0,0,1,1,Y",
    ]
    return write_csv("candidates.csv", "\n".join([HEADER, *rows]) + "\n")


@pytest.fixture
def cands(candidates_csv):
    return anticipate.load_candidates(candidates_csv)


def test_load_candidates(cands):
    assert len(cands) == 12
    assert cands[7].kind is ActionKind.START
    assert cands[7].minutes_to_stable == pytest.approx(36.0)
    assert not cands[9].currently_on


def test_low_inertia_scenario(cands, subtests):
    p = anticipate.plan(cands, baseline=109.9, trigger=140.0, lead_time=60.0)

    with subtests.test(msg="selection"):
        assert [s.plant_id for s in p.selected] == sorted(KEEP_RUNNING + ["T_DINO-1"])
        assert sum(s.kind is ActionKind.START for s in p.selected) == 1

    with subtests.test(msg="totals"):
        assert p.achieved_gvas == pytest.approx(141.4, abs=1e-9)
        assert p.total_cost == 100.0
        assert p.feasible

    with subtests.test(msg="verified"):
        assert anticipate.verify_plan(p, cands, 109.9, 140.0)
        assert anticipate.audit_minimality(p, cands, 109.9, 140.0) == []


def test_keep_running_only_falls_short(cands):
    keep = [c for c in cands if c.plant in KEEP_RUNNING]
    p = anticipate.plan(keep, baseline=108.0, trigger=140.0)

    assert p.achieved_gvas == pytest.approx(131.8, abs=1e-9)
    assert not p.feasible
    assert len(p.selected) == 7
    assert anticipate.verify_plan(p, keep, 108.0, 140.0)


def test_lead_time(cands):
    # T_DINO-1 needs 36 minutes, so without it the cheapest cover is a decoy
    p = anticipate.plan(cands, baseline=109.9, trigger=140.0, lead_time=30.0)
    assert "T_DINO-1" not in [s.plant_id for s in p.selected]
    assert p.feasible
    assert p.total_cost > 100.0

    feasible = anticipate.filter_feasible(cands, 0.0)
    assert {c.kind for c in feasible} == {ActionKind.KEEP_RUNNING}
    assert len(anticipate.filter_feasible(cands, None)) == len(cands)


def test_baseline_above_trigger(cands):
    p = anticipate.plan(cands, baseline=150.0, trigger=140.0)
    assert p.selected == []
    assert p.total_cost == 0.0
    assert p.feasible


def test_plan_json(cands, tmp_path):
    p = anticipate.plan(cands, baseline=109.9, trigger=140.0)
    path = tmp_path / "plan.json"
    anticipate.write_plan(path, p)

    document = json.loads(path.read_text(encoding="utf-8"))
    assert set(document) == {
        "baseline_gvas",
        "trigger_gvas",
        "selected",
        "achieved_gvas",
        "total_cost",
        "feasible",
    }
    assert document["selected"][0] == {"plant_id": "T_CARR-1", "kind": "keep_running"}


def test_equal_costs_prefer_smallest_ids():
    cands = [
        ActionCandidate(
            plant=pid, kind="keep_running", w=5.0, cost=1.0, currently_on=True
        )
        for pid in ("T_C", "T_A", "T_B")
    ]
    p = anticipate.plan(cands, baseline=130.0, trigger=140.0)
    assert [s.plant_id for s in p.selected] == ["T_A", "T_B"]


def test_matches_enumeration(subtests):
    rng = np.random.default_rng(1234)
    for i in range(50):
        cands = checks.random_candidates(rng, int(rng.integers(1, 21)))
        baseline = float(rng.uniform(100.0, 135.0))
        lead = [None, 30.0, 120.0][i % 3]

        fast = anticipate.plan(cands, baseline, 140.0, lead)
        slow = anticipate.enumerate_plans(cands, baseline, 140.0, lead)
        with subtests.test(msg=f"instance {i}", n=len(cands)):
            assert fast.feasible == slow.feasible
            assert fast.total_cost == slow.total_cost
            assert fast.selected == slow.selected


def test_enumeration_limit():
    cands = [
        ActionCandidate(
            plant=f"P{j}", kind="keep_running", w=1.0, cost=1.0, currently_on=True
        )
        for j in range(21)
    ]
    with pytest.raises(SizeError):
        anticipate.enumerate_plans(cands, 100.0, 140.0)


def test_invalid_candidates(write_csv):
    path = write_csv(
        "candidates.csv",
        "\n".join(
            [
                HEADER,
                "T_A,keep_running,3.4,10,0,10,300,true",
                "T_B,keep_running,3.4,10,0,10,300,false",
                "T_C,start,3.4,10,0,10,300,true",
            ]
        ),
    )
    with pytest.raises(ParseError) as info:
        anticipate.load_candidates(path)
    assert info.value.lines == [3, 4]


def test_extra_candidate_never_costs_more(subtests):
    rng = np.random.default_rng(77)
    for i in range(40):
        cands = checks.random_candidates(rng, int(rng.integers(2, 13)))
        baseline = float(rng.uniform(100.0, 135.0))
        lead = [None, 60.0][i % 2]

        fewer = anticipate.plan(cands[:-1], baseline, 140.0, lead)
        more = anticipate.plan(cands, baseline, 140.0, lead)
        with subtests.test(msg=f"instance {i}", n=len(cands)):
            if fewer.feasible:
                assert more.feasible
                assert more.total_cost <= fewer.total_cost + 1e-9
