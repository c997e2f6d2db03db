"""Smoke tests exercising the compiled module end to end."""

import math
import os

import pytest

import asgrowth as ag


def test_series_from_list():
    s = ag.Series([1.0, 2.0, 3.0], origin_year=2000)
    assert len(s) == 3
    assert s[2] == 3.0
    assert s.year_at(2) == 2002


def test_acf_of_known_sequence():
    # lag-1 autocorrelation of 1..8 under the biased estimator
    s = ag.Series([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0])
    r = ag.acf(s, 2)
    assert r.values[0] == pytest.approx(1.0)
    assert r.values[1] == pytest.approx(0.625, abs=1e-12)


def test_fisher_z_matches_atanh():
    assert ag.fisher_z(0.90) == pytest.approx(math.atanh(0.90), abs=1e-15)
    cmp = ag.compare_fisher_z(2.1, 17, 1.3, 17)
    assert cmp.zd == pytest.approx(2.1166, abs=1e-3)
    assert cmp.reject_equal


def test_holdout_rmse():
    assert ag.holdout_rmse([1.0, 2.0], [1.0, 4.0]) == pytest.approx(
        math.sqrt(2.0)
    )


def test_parse_delegated_and_build_series():
    data_dir = os.environ.get("ASGROWTH_TEST_DATA_DIR")
    if not data_dir:
        pytest.skip("ASGROWTH_TEST_DATA_DIR not set")
    records = ag.parse_delegated_file(
        os.path.join(data_dir, "delegated_synthetic.txt")
    )
    assert len(records) > 0
    acs = ag.build_annual_series(records, "IN")
    assert acs.label == "IN"
    s = acs.to_series()
    assert s.origin_year == acs.start_year
    # cumulative counts never decrease
    assert all(b >= a for a, b in zip(s.values, s.values[1:]))
    assert s.values[-1] == 432.0


def test_binseg_finds_variance_shift():
    low = [0.1, -0.1, 0.2, -0.2, 0.15, -0.15, 0.1, -0.1, 0.2, -0.2]
    high = [5.0, -5.0, 6.0, -6.0, 5.5, -5.5, 5.0, -5.0, 6.0, -6.0]
    r = ag.binseg(ag.Series(low + high), penalty="sic", max_cps=3)
    assert r.changepoints == [10]
    assert r.segment_variances[0] < r.segment_variances[1]


def test_fit_drift_only_model():
    # a line with a small wobble; the drift is the mean first difference
    wobble = [0.0, 0.3, -0.2, 0.1, -0.3, 0.2, 0.0, -0.1, 0.3, -0.2, 0.1, -0.2]
    values = [10.0 + 2.0 * t + wobble[t] for t in range(12)]
    diffs = [b - a for a, b in zip(values, values[1:])]
    drift = sum(diffs) / len(diffs)
    f = ag.fit(ag.Series(values), (0, 1, 0), drift=True)
    assert f.model == "ARIMA(0,1,0)+drift"
    assert f.drift == pytest.approx(drift, abs=1e-9)
    fc = ag.forecast(f, 3)
    assert fc.points[0] == pytest.approx(values[-1] + drift, abs=1e-9)
    assert fc.points[2] == pytest.approx(values[-1] + 3 * drift, abs=1e-9)


def test_errors_surface_as_analysis_error():
    from asgrowth._core import AnalysisError

    with pytest.raises(AnalysisError):
        ag.fit(ag.Series([1.0, 2.0, 3.0]), (3, 1, 3))
