import math

import numpy as np
import pytest

from cesarolab import Budget, ConditionId, check, classify, detect_trend, gallery
from cesarolab.criteria import (BOUNDED, CONVERGES, DIVERGES, FAILS, HOLDS, INCONCLUSIVE, ZERO,
                                BudgetError, _Probe, classify_log_blocks)

GALLERY = [("example-1.5", {}), ("remark-3.9", {}), ("example-3.4i", {"alpha": 0.5}),
           ("example-3.4ii", {"s": 3}), ("remark-4.4", {}), ("loglog-weights", {}),
           ("power-series", {"alpha": "log"}), ("g1-nuclear", {})]


def test_trend_examples():
    assert detect_trend(lambda i: 1 / i, 1024).classification == ZERO
    assert detect_trend(math.log, 1024).classification == DIVERGES
    t = detect_trend(lambda i: 1 + (-1) ** i / i, 1024)
    assert t.classification == CONVERGES and t.value == pytest.approx(1, abs=0.05)


def test_trend_rule_edge_cases():
    assert classify_log_blocks([0.0, 0.1, 0.2, 0.3, math.nan])[0] == INCONCLUSIVE
    assert classify_log_blocks([0.0, 1.0, 2.0, 3.0])[0] == INCONCLUSIVE   # too few blocks
    assert classify_log_blocks([0.0, 1.0, 0.0, 1.0, math.inf])[0] == DIVERGES
    assert classify_log_blocks([0.0, -1.0, 0.0, -1.0, -math.inf])[0] == ZERO
    assert classify_log_blocks([0.0, 0.5, 0.2, 0.4, 0.1, 0.12])[0] == BOUNDED


def test_trend_is_deterministic():
    a = detect_trend(lambda i: math.sin(i) + 2, 4096).to_dict()
    b = detect_trend(lambda i: math.sin(i) + 2, 4096).to_dict()
    assert a == b


def test_condition_ids():
    assert str(ConditionId.parse("PointEigen(3)")) == "PointEigen(3)"
    assert str(ConditionId.parse("SN(2)")) == "SN(2)"
    with pytest.raises(ValueError):
        ConditionId.parse("Bogus")


@pytest.mark.parametrize("kwargs", [{"I_max": 8}, {"I_max": 1000}, {"N_max": 0}, {"M_max": 0}])
def test_budget_errors(kwargs):
    with pytest.raises(BudgetError):
        Budget(**kwargs)


def test_ces_continuity_value():
    p = _Probe(gallery("remark-3.9"), Budget())
    logq = (p.cum_la(1) - p.la(2) - p.near_logi).to_float()[2]       # i = 3
    expected = math.exp(-6) / 3 * (math.e + math.e ** 2 + math.e ** 3)
    assert math.exp(logq) == pytest.approx(expected, rel=1e-12)
    assert expected == pytest.approx(0.0249, abs=1e-4)
    v = check(gallery("remark-3.9"), "CesContinuity")
    assert v.status == HOLDS and v.witnesses[0][:2] == (1, 2)


def test_check_examples():
    assert check(gallery("example-1.5"), "GPC").status == HOLDS
    assert check(gallery("remark-3.9"), "U").status == FAILS
    assert check(gallery("g1-nuclear"), "CesContinuity").status == FAILS
    assert check(gallery("example-3.4ii", s=3), "PointEigen(3)").status == FAILS


def test_verdict_serialises():
    v = check(gallery("remark-4.4"), "L")
    d = v.to_dict()
    assert d["status"] == HOLDS and "numerically" in v.summary()
    assert check(gallery("remark-3.9"), "K1").to_dict()["status"] == HOLDS


@pytest.mark.parametrize("key,params", GALLERY)
def test_declared_verdicts_and_consistency(key, params):
    fam = gallery(key, params)
    cls = classify(fam)
    assert cls.inconsistencies == []
    assert cls.declared_mismatches(fam.declared) == []


@pytest.mark.parametrize("key,params", GALLERY)
def test_budget_stability(key, params):
    fam = gallery(key, params)
    small = classify(fam, Budget(I_max=2 ** 12))
    large = classify(fam, Budget(I_max=2 ** 14))
    flips = [k for k, v in small.verdicts.items()
             if {v.status, large.verdicts[k].status} == {HOLDS, FAILS}]
    assert flips == []


def test_nuclear_sum_conditions_agree():
    for key, params in GALLERY:
        cls = classify(gallery(key, params))
        known = {cls.status(c) for c in ("GPC", "SV", "N")} - {INCONCLUSIVE}
        if cls.status("Ginf") == HOLDS:
            assert len(known) <= 1, key
