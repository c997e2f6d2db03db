#!/usr/bin/env python3
"""Regenerates the frozen reference fixtures in this directory.

Reference values come from scipy/statsmodels so the C++ implementations can be
checked against an independent, widely used implementation.  The fixtures are
committed; rerun this script only when deliberately refreshing them, and note
the library versions below in the commit message.

Usage: python3 generate_fixtures.py
"""

import json
import os

import numpy as np
import scipy.stats
from statsmodels.tsa.stattools import acf as sm_acf
from statsmodels.tsa.stattools import adfuller
from statsmodels.tsa.stattools import pacf as sm_pacf

HERE = os.path.dirname(os.path.abspath(__file__))


def normality_fixture():
    """10 seeded normal + 10 seeded exponential samples, n=100 each, with
    Shapiro-Wilk and Jarque-Bera reference p-values."""
    out = []
    rs = np.random.RandomState(20130207)
    for kind, draw in (("normal", rs.standard_normal),
                       ("exponential", rs.standard_exponential)):
        for idx in range(10):
            x = draw(100)
            sw_w, sw_p = scipy.stats.shapiro(x)
            jb = scipy.stats.jarque_bera(x)
            out.append({
                "kind": kind,
                "idx": idx,
                "sample": [float(v) for v in x],
                "sw_w": float(sw_w),
                "sw_p": float(sw_p),
                "jb_stat": float(jb.statistic),
                "jb_p": float(jb.pvalue),
            })
    with open(os.path.join(HERE, "normality_reference.json"), "w") as f:
        json.dump(out, f, indent=1)


def small_n_shapiro_fixture():
    """Small-n Shapiro-Wilk spot checks (exercises the n<=11 branches)."""
    rs = np.random.RandomState(42)
    cases = []
    for n in (3, 4, 5, 7, 11, 12, 25):
        x = rs.standard_normal(n)
        w, p = scipy.stats.shapiro(x)
        cases.append({"n": n, "sample": [float(v) for v in x],
                      "sw_w": float(w), "sw_p": float(p)})
    with open(os.path.join(HERE, "shapiro_small_reference.json"), "w") as f:
        json.dump(cases, f, indent=1)


def dickey_fuller_fixture():
    """Seeded random walk and white noise, n=200, with adfuller t-statistics
    (lag order 0, no automatic lag selection)."""
    rs = np.random.RandomState(1994)
    walk = np.cumsum(rs.standard_normal(200))
    noise = rs.standard_normal(200)
    cases = []
    for name, x in (("random_walk", walk), ("white_noise", noise)):
        for mode, reg in (("constant", "c"), ("constant_trend", "ct"),
                          ("none", "n")):
            res = adfuller(x, maxlag=0, regression=reg, autolag=None)
            cases.append({
                "name": name,
                "mode": mode,
                "sample": [float(v) for v in x],
                "stat": float(res[0]),
                "reject_5pct": bool(res[0] < res[4]["5%"]),
                "crit_5pct": float(res[4]["5%"]),
            })
    with open(os.path.join(HERE, "dickey_fuller_reference.json"), "w") as f:
        json.dump(cases, f, indent=1)


def acf_pacf_fixture():
    """One seeded series with statsmodels ACF (biased denominator) and PACF
    (Yule-Walker on the biased autocovariances)."""
    rs = np.random.RandomState(7)
    e = rs.standard_normal(120)
    x = np.zeros(120)
    for t in range(1, 120):
        x[t] = 0.6 * x[t - 1] + e[t]
    lags = 10
    a = sm_acf(x, nlags=lags, adjusted=False, fft=False)
    p = sm_pacf(x, nlags=lags, method="ywmle")
    with open(os.path.join(HERE, "acf_pacf_reference.json"), "w") as f:
        json.dump({"sample": [float(v) for v in x],
                   "max_lag": lags,
                   "acf": [float(v) for v in a],
                   "pacf": [float(v) for v in p]}, f, indent=1)


def arima_fixture():
    """Seeded ARIMA(1,1,1) sample (phi=0.7, theta=0.4, n=500) with exact-ML
    estimates from statsmodels SARIMAX (simple differencing, stationary
    initialization) as the cross-check target."""
    from statsmodels.tsa.statespace.sarimax import SARIMAX

    rs = np.random.RandomState(20120417)
    burn = 200
    total = 500 + burn
    e = rs.standard_normal(total + 1)
    z = np.zeros(total)
    z[0] = e[1] + 0.4 * e[0]
    for t in range(1, total):
        z[t] = 0.7 * z[t - 1] + e[t + 1] + 0.4 * e[t]
    y = 100.0 + np.cumsum(z[burn:])
    model = SARIMAX(y, order=(1, 1, 1), trend=None, simple_differencing=True)
    res = model.fit(disp=False)
    with open(os.path.join(HERE, "arima_reference.json"), "w") as f:
        json.dump({
            "sample": [float(v) for v in y],
            "order": [1, 1, 1],
            "ar1": float(res.params[0]),
            "ma1": float(res.params[1]),
            "sigma2": float(res.params[2]),
            "loglik": float(res.llf),
        }, f, indent=1)
    print("statsmodels ARIMA(1,1,1):", res.params, "llf", res.llf)


def main():
    np.seterr(all="raise")
    normality_fixture()
    small_n_shapiro_fixture()
    dickey_fuller_fixture()
    acf_pacf_fixture()
    arima_fixture()
    print("fixtures written to", HERE)


if __name__ == "__main__":
    main()
