import json
import math
from pathlib import Path

import pytest

import rpu

GAMES = Path(__file__).resolve().parents[2] / "games"


def monty(loss="log"):
    return rpu.Game(["x1", "x2", "x3"], [["x1", "x2"], ["x2", "x3"]], [1 / 3, 1 / 3, 1 / 3], loss)


def test_monty_hall_values():
    h = -(2 / 3) * math.log(2 / 3) - (1 / 3) * math.log(1 / 3)
    for loss, expected in [("log", h), ("brier", 4 / 9), ("rand01", 1 / 3)]:
        r = rpu.solve(monty(loss))
        assert r.converged
        assert r.value == pytest.approx(expected, abs=1e-9)


def test_strategy_and_certificate():
    g = monty()
    r = rpu.solve(g)
    assert r.strategy[0][0] == pytest.approx(1 / 3, abs=1e-9)
    assert r.strategy[0][1] == pytest.approx(1 / 6, abs=1e-9)
    cert = rpu.check_kt(g, r.strategy, r.kt)
    assert cert["passed"]
    assert cert["modes"] == ["supporting", "supporting"]
    bad = list(r.kt)
    bad[1] += 0.05
    assert not rpu.check_kt(g, r.strategy, bad)["passed"]


def test_contestant_closes_the_gap():
    g = monty()
    r = rpu.solve(g)
    q = rpu.contestant(r)
    assert q[0][0] == pytest.approx(2 / 3, abs=1e-7)


def test_bundled_game_and_rcar():
    g = rpu.Game.load(str(GAMES / "fairdie.game"))
    assert g.outcomes == ["1", "2", "3", "4", "5", "6"]
    q, report = rpu.rcar(g)
    assert report.converged
    assert q[2] == pytest.approx(1 / 6, abs=1e-7)
    assert rpu.check_rcar(g, report.strategy, q)["passed"]


def test_json_round_trip():
    g = monty("brier")
    back = rpu.Game.from_json(g.to_json())
    assert back.messages == g.messages
    assert back.loss == g.loss
    doc = json.loads(rpu.solve(g).to_json())
    assert doc["report"]["converged"]
    assert rpu.Game.from_json(json.dumps(doc)).marginal == pytest.approx(g.marginal)


def test_structure_queries():
    cycle = rpu.Game.load(str(GAMES / "four_cycle.game"))
    c = rpu.classify(cycle)
    assert c["graph"] and c["matroid"] and c["connected"]
    parts = rpu.decompose(rpu.Game.load(str(GAMES / "twocomponents.game")))
    assert [round(w, 12) for w, _ in parts] == [0.5, 0.5]


def test_counterexample_separates_losses():
    g = rpu.Game.load(str(GAMES / "fairdie.game"))
    ce = rpu.counterexample(g)
    assert sum(ce["marginal"]) == pytest.approx(1.0)
    brier = ce["game"].with_loss("brier")
    assert not rpu.check_rcar(brier, rpu.solve(brier).strategy, ce["q"])["passed"]


def test_oracle_agrees_with_solver():
    g = rpu.Game.load(str(GAMES / "message_discard.game"))
    assert rpu.oracle(g, 200) == pytest.approx(rpu.solve(g).value, abs=1e-3)


def test_errors_carry_a_code():
    with pytest.raises(rpu.RpuError) as info:
        rpu.Game(["a", "b"], [["a", "b"]], [0.5, 0.4])
    assert info.value.code == "MarginalNotNormalized"
    with pytest.raises(ValueError):
        rpu.Game(["a"], [["z"]], [1.0])
    with pytest.raises(rpu.RpuError) as info:
        monty().with_loss("squared")
    assert info.value.code == "InvalidLoss"
