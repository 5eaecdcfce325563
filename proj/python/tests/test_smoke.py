import math
import os
import tempfile

import pytest

import vennabers as va


def test_table_row():
    f0, f1 = va.compute_f_vectors([1, 2, 3], [0, 0, 1])
    assert f0 == pytest.approx([0, 0, 0.5])
    assert f1 == pytest.approx([1 / 3, 0.5, 1])


def test_ivap_interval_and_point():
    rule = va.build_ivap([1, 2, 3], [0, 1, 0])
    assert rule.predict_interval(2.5) == pytest.approx((1 / 3, 2 / 3))
    p0, p1 = rule.predict_interval(2.5)
    assert rule.predict_point(2.5) == pytest.approx(p1 / (1 - p0 + p1))
    assert rule.count_ones == 1 and rule.count_zeros == 2


def test_json_round_trip():
    rule = va.build_ivap([0.1, 0.4, 0.4, 0.9], [0, 1, 0, 1])
    back = va.IvapRule.from_json(rule.to_json())
    assert back.f0 == rule.f0 and back.f1 == rule.f1


def test_merge_and_cvap():
    assert va.merge([(0.3, 0.3)], "brier") == pytest.approx(0.3)
    rules = [va.build_ivap([1, 2, 3], [0, 0, 1]), va.build_ivap([1, 2, 3], [0, 1, 1])]
    p = va.predict_cvap_scores(rules, [2.0, 2.0])
    assert 1 / 5 <= p <= 4 / 5


def test_baselines_and_metrics():
    x, y = va.generate_synthetic(200, 7)
    assert len(x) == len(y) == 200
    platt = va.fit_platt(x, y)
    assert platt.a < 0
    iso = va.fit_direct_isotonic(x, y)
    report = va.evaluate([platt.predict(v) for v in x], y)
    assert report["n"] == 200 and math.isfinite(report["mll"])
    assert 0 <= iso.predict(0.0) <= 1


def test_errors_are_typed():
    with pytest.raises(va.DegenerateError):
        va.fit_platt([1.0, 2.0], [1, 1])
    with pytest.raises(va.DataError):
        va.build_ivap([], [])


def test_cli_synth():
    with tempfile.TemporaryDirectory() as d:
        out = os.path.join(d, "s.csv")
        code, _, _ = va.run_cli(["synth", "--n", "10", "--out", out])
        assert code == 0
        with open(out) as f:
            assert len(f.read().splitlines()) == 11
        assert va.run_cli(["synth", "--n", "0", "--out", out])[0] == 2
