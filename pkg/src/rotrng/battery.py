"""Statistical test battery for generated bit streams.

Each test returns a result record with the test name, the raw statistic,
the two-sided p-value, and a pass/fail verdict.  A stream passes the
battery only if every individual p-value falls strictly inside
(alpha, 1 - alpha): wildly regular output is rejected the same way biased
output is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bitstream import BitStream
from .special import chi2_sf, erfc

__all__ = [
    "TestResult",
    "BatteryReport",
    "monobit_test",
    "runs_test",
    "poker_test",
    "autocorrelation_test",
    "byte_chi_square_test",
    "run_battery",
    "DEFAULT_ALPHA",
    "AUTOCORR_LAGS",
]

DEFAULT_ALPHA = 1e-4
DEFAULT_MIN_BITS = 1_000_000
AUTOCORR_LAGS = (1, 2, 4, 8, 16)

_POKER_M = 4


@dataclass(frozen=True)
class TestResult:
    test: str
    statistic: float
    p_value: float
    verdict: str

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


@dataclass(frozen=True)
class BatteryReport:
    results: tuple
    nbits: int
    alpha: float
    reliable: bool

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def summary_lines(self):
        lines = []
        for r in self.results:
            lines.append(f"{r.test:<16} stat={r.statistic:>14.6g}  p={r.p_value:<12.6g} {r.verdict}")
        lines.append(f"overall: {'pass' if self.passed else 'fail'} ({self.nbits} bits)")
        if not self.reliable:
            lines.append("note: stream shorter than the recommended minimum, verdicts are noisy")
        return lines


def _as_bit_array(bits) -> np.ndarray:
    if isinstance(bits, BitStream):
        return bits.to_bits()
    arr = np.asarray(bits, dtype=np.uint8).reshape(-1)
    if arr.size and arr.max() > 1:
        raise ValueError("bits must be 0 or 1")
    return arr


def _verdict(p: float, alpha: float) -> str:
    return "pass" if alpha < p < 1.0 - alpha else "fail"


def monobit_test(bits, alpha: float = DEFAULT_ALPHA) -> TestResult:
    """Counts ones vs zeros; statistic is |n1 - n0| / sqrt(n)."""
    arr = _as_bit_array(bits)
    n = arr.size
    if n < 100:
        raise ValueError("monobit test needs at least 100 bits")
    ones = int(arr.sum())
    s_obs = abs(2 * ones - n) / math.sqrt(n)
    p = erfc(s_obs / math.sqrt(2.0))
    return TestResult("monobit", s_obs, p, _verdict(p, alpha))


def runs_test(bits, alpha: float = DEFAULT_ALPHA) -> TestResult:
    """Total number of runs against the expectation for the observed bias.

    Skipped (hard fail) when the ones fraction is already so far from 1/2
    that the run count carries no extra information.
    """
    arr = _as_bit_array(bits)
    n = arr.size
    if n < 100:
        raise ValueError("runs test needs at least 100 bits")
    pi = float(arr.mean())
    if abs(pi - 0.5) >= 2.0 / math.sqrt(n):
        return TestResult("runs", float("nan"), 0.0, "fail")
    v_obs = 1 + int(np.count_nonzero(arr[1:] != arr[:-1]))
    denom = 2.0 * math.sqrt(2.0 * n) * pi * (1.0 - pi)
    p = erfc(abs(v_obs - 2.0 * n * pi * (1.0 - pi)) / denom)
    return TestResult("runs", float(v_obs), p, _verdict(p, alpha))


def poker_test(bits, alpha: float = DEFAULT_ALPHA, m: int = _POKER_M) -> TestResult:
    """Chi-square on the frequencies of non-overlapping m-bit patterns."""
    arr = _as_bit_array(bits)
    k = arr.size // m
    if k < 5 * (1 << m):
        raise ValueError(f"poker test needs at least {5 * (1 << m) * m} bits")
    blocks = arr[: k * m].reshape(k, m)
    weights = (1 << np.arange(m, dtype=np.int64))
    vals = blocks @ weights
    counts = np.bincount(vals, minlength=1 << m)
    x = float((1 << m) / k * np.square(counts.astype(np.float64)).sum() - k)
    p = chi2_sf(x, (1 << m) - 1)
    return TestResult(f"poker_m{m}", x, p, _verdict(p, alpha))


def autocorrelation_test(bits, lag: int, alpha: float = DEFAULT_ALPHA) -> TestResult:
    """Balance of bits XORed with themselves at the given lag."""
    if lag < 1:
        raise ValueError("lag must be >= 1")
    arr = _as_bit_array(bits)
    n = arr.size - lag
    if n < 100:
        raise ValueError("autocorrelation test needs at least lag + 100 bits")
    diff = int(np.count_nonzero(arr[lag:] != arr[:-lag]))
    s_obs = abs(2 * diff - n) / math.sqrt(n)
    p = erfc(s_obs / math.sqrt(2.0))
    return TestResult(f"autocorr_lag{lag}", s_obs, p, _verdict(p, alpha))


def byte_chi_square_test(bits, alpha: float = DEFAULT_ALPHA) -> TestResult:
    """Chi-square over the 256 byte values of the packed stream."""
    arr = _as_bit_array(bits)
    nbytes = arr.size // 8
    if nbytes < 1280:
        raise ValueError("byte chi-square test needs at least 10240 bits")
    data = np.packbits(arr[: nbytes * 8], bitorder="little")
    counts = np.bincount(data, minlength=256).astype(np.float64)
    expect = nbytes / 256.0
    x = float(np.square(counts - expect).sum() / expect)
    p = chi2_sf(x, 255)
    return TestResult("byte_chi_square", x, p, _verdict(p, alpha))


def run_battery(bits, alpha: float = DEFAULT_ALPHA, min_bits: int = DEFAULT_MIN_BITS) -> BatteryReport:
    """Run the full battery in its fixed order.

    A test whose length precondition fails is reported as a hard fail
    rather than aborting the whole battery.
    """
    arr = _as_bit_array(bits)
    plan = [
        ("monobit", lambda: monobit_test(arr, alpha)),
        ("runs", lambda: runs_test(arr, alpha)),
        (f"poker_m{_POKER_M}", lambda: poker_test(arr, alpha)),
    ]
    for lag in AUTOCORR_LAGS:
        plan.append((f"autocorr_lag{lag}", lambda lag=lag: autocorrelation_test(arr, lag, alpha)))
    plan.append(("byte_chi_square", lambda: byte_chi_square_test(arr, alpha)))

    results = []
    for name, fn in plan:
        try:
            results.append(fn())
        except ValueError:
            results.append(TestResult(name, float("nan"), 0.0, "fail"))
    return BatteryReport(tuple(results), int(arr.size), alpha, reliable=arr.size >= min_bits)
