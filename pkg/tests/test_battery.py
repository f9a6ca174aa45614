"""Battery tests verified against independent mpmath computations."""

import math

import mpmath
import numpy as np
import pytest

from rotrng import (BitStream, autocorrelation_test, byte_chi_square_test,
                    monobit_test, poker_test, run_battery, runs_test)
from rotrng.battery import AUTOCORR_LAGS

mpmath.mp.dps = 30


def _coin(n, seed=0):
    return np.random.default_rng(seed).integers(0, 2, size=n, dtype=np.uint8)


def test_monobit_against_reference():
    bits = _coin(4096, seed=1)
    res = monobit_test(bits)
    ones = int(bits.sum())
    s_obs = abs(2 * ones - bits.size) / math.sqrt(bits.size)
    p_ref = float(mpmath.erfc(s_obs / mpmath.sqrt(2)))
    assert res.statistic == pytest.approx(s_obs, rel=1e-12)
    assert res.p_value == pytest.approx(p_ref, abs=1e-10)
    assert res.test == "monobit"


def test_runs_against_reference():
    bits = _coin(4096, seed=2)
    res = runs_test(bits)
    pi = bits.mean()
    v = 1 + int(np.count_nonzero(bits[1:] != bits[:-1]))
    num = abs(v - 2 * bits.size * pi * (1 - pi))
    den = 2 * math.sqrt(2 * bits.size) * pi * (1 - pi)
    p_ref = float(mpmath.erfc(num / den))
    assert res.statistic == v
    assert res.p_value == pytest.approx(p_ref, abs=1e-10)


def test_runs_precondition_bias_gate():
    bits = np.zeros(10_000, dtype=np.uint8)
    bits[:100] = 1
    res = runs_test(bits)
    assert res.verdict == "fail"
    assert res.p_value == 0.0
    assert math.isnan(res.statistic)


def test_poker_against_reference():
    bits = _coin(4096, seed=3)
    res = poker_test(bits)
    k = bits.size // 4
    counts = {}
    for i in range(k):
        v = bits[4 * i] | (bits[4 * i + 1] << 1) | (bits[4 * i + 2] << 2) | (bits[4 * i + 3] << 3)
        counts[v] = counts.get(v, 0) + 1
    x = 16.0 / k * sum(c * c for c in counts.values()) - k
    p_ref = float(mpmath.gammainc(7.5, x / 2, mpmath.inf, regularized=True))
    assert res.statistic == pytest.approx(x, rel=1e-12)
    assert res.p_value == pytest.approx(p_ref, abs=1e-10)


def test_autocorrelation_against_reference():
    bits = _coin(4096, seed=4)
    for lag in (1, 4):
        res = autocorrelation_test(bits, lag)
        n = bits.size - lag
        diff = int(np.count_nonzero(bits[lag:] != bits[:-lag]))
        s_obs = abs(2 * diff - n) / math.sqrt(n)
        p_ref = float(mpmath.erfc(s_obs / mpmath.sqrt(2)))
        assert res.statistic == pytest.approx(s_obs, rel=1e-12)
        assert res.p_value == pytest.approx(p_ref, abs=1e-10)
        assert res.test == f"autocorr_lag{lag}"


def test_byte_chi_square_against_reference():
    bits = _coin(8 * 2048, seed=5)
    res = byte_chi_square_test(bits)
    data = np.packbits(bits, bitorder="little")
    expect = data.size / 256
    counts = np.bincount(data, minlength=256)
    x = float(((counts - expect) ** 2 / expect).sum())
    p_ref = float(mpmath.gammainc(127.5, x / 2, mpmath.inf, regularized=True))
    assert res.statistic == pytest.approx(x, rel=1e-12)
    assert res.p_value == pytest.approx(p_ref, abs=1e-10)


def test_constant_stream_fails_battery():
    rep = run_battery(np.zeros(100_000, dtype=np.uint8))
    assert not rep.passed
    mono = rep.results[0]
    assert mono.test == "monobit" and mono.verdict == "fail"
    assert mono.p_value < 1e-100


def test_alternating_stream_fails_battery():
    bits = np.tile(np.array([0, 1], dtype=np.uint8), 50_000)
    rep = run_battery(bits)
    assert not rep.passed
    by_name = {r.test: r for r in rep.results}
    # perfectly balanced, so monobit is suspiciously perfect: two-sided fail
    assert by_name["monobit"].p_value == pytest.approx(1.0)
    assert by_name["monobit"].verdict == "fail"
    assert by_name["autocorr_lag1"].verdict == "fail"
    assert by_name["autocorr_lag2"].verdict == "fail"
    assert by_name["runs"].verdict == "fail"


def test_fair_coin_passes_battery():
    rep = run_battery(_coin(1_000_000, seed=6))
    assert rep.passed
    assert rep.reliable


def test_battery_order_and_schema():
    rep = run_battery(_coin(100_000, seed=7))
    names = [r.test for r in rep.results]
    want = ["monobit", "runs", "poker_m4"]
    want += [f"autocorr_lag{lag}" for lag in AUTOCORR_LAGS]
    want += ["byte_chi_square"]
    assert names == want
    for r in rep.results:
        assert r.verdict in ("pass", "fail")
        assert 0.0 <= r.p_value <= 1.0
    assert rep.nbits == 100_000
    assert not rep.reliable  # below the default reliability threshold
    assert rep.alpha == 1e-4


def test_battery_accepts_bitstream():
    bs = BitStream.from_bits(_coin(50_000, seed=8))
    rep = run_battery(bs, min_bits=50_000)
    assert rep.reliable
    assert rep.nbits == 50_000


def test_short_stream_preconditions_raise():
    short = _coin(64, seed=9)
    with pytest.raises(ValueError):
        monobit_test(short)
    with pytest.raises(ValueError):
        runs_test(short)
    with pytest.raises(ValueError):
        poker_test(_coin(300, seed=9))
    with pytest.raises(ValueError):
        autocorrelation_test(short, 1)
    with pytest.raises(ValueError):
        byte_chi_square_test(_coin(10_000, seed=9))
    with pytest.raises(ValueError):
        autocorrelation_test(_coin(4096, seed=9), 0)


def test_battery_reports_precondition_failures():
    rep = run_battery(_coin(2_000, seed=10), min_bits=0)
    by_name = {r.test: r for r in rep.results}
    assert by_name["byte_chi_square"].verdict == "fail"
    assert math.isnan(by_name["byte_chi_square"].statistic)
    assert by_name["monobit"].verdict == "pass"
    assert not rep.passed


def test_alpha_is_two_sided():
    bits = _coin(100_000, seed=11)
    strict = run_battery(bits, alpha=0.4)
    assert not strict.passed  # almost no p-value survives (0.4, 0.6)


def test_non_binary_input_rejected():
    with pytest.raises(ValueError):
        monobit_test(np.array([0, 1, 2], dtype=np.uint8))
