"""Throughput and FPGA area estimators, exact rational arithmetic.

All results are fractions.Fraction so repeated halvings and quarter-CLB
stages never accumulate float error; display layers decide how to round.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "throughput_bps",
    "ClbBreakdown",
    "clb_count",
    "DEFAULT_F_CLK",
    "TABLE_ROWS",
]

DEFAULT_F_CLK = 50_000_000

# reference operating points: (d, r, n, l)
TABLE_ROWS = (
    (0, 2, 20, 3),
    (0, 3, 10, 3),
    (2, 2, 10, 3),
    (5, 3, 5, 3),
)


def throughput_bps(f_clk=DEFAULT_F_CLK, d: int = 0, r: int = 0) -> Fraction:
    """Output bit rate: the sample clock divided by 2**(d + r)."""
    if d < 0 or r < 0:
        raise ValueError("d and r must be >= 0")
    f = Fraction(f_clk)
    if f <= 0:
        raise ValueError("f_clk must be positive")
    return f / (1 << (d + r))


def _ceil_stage(x: Fraction) -> int:
    # a stage that needs no inputs occupies no slices
    return max(0, math.ceil(x))


@dataclass(frozen=True)
class ClbBreakdown:
    """Slice usage by pipeline stage; total is the sum of the parts."""

    ro_chain: Fraction
    xor_tree: Fraction
    divider: Fraction
    counter: Fraction
    and_stage: Fraction
    fixed: Fraction

    @property
    def total(self) -> Fraction:
        return (self.ro_chain + self.xor_tree + self.divider
                + self.counter + self.and_stage + self.fixed)


def clb_count(n: int, l: int, d: int, r: int) -> ClbBreakdown:
    """CLB cost of a generator instance.

    Oscillator chains take one slice per element; the combining XOR packs
    three inputs per slice; clock divider and fold counter cost a quarter
    slice per stage; the fold gate packs three of its inputs per slice;
    control overhead is a flat three slices.
    """
    if n < 1 or l < 1 or d < 0 or r < 0:
        raise ValueError("need n >= 1, l >= 1, d >= 0, r >= 0")
    return ClbBreakdown(
        ro_chain=Fraction(l),
        xor_tree=Fraction(_ceil_stage(Fraction(n - 1, 3))),
        divider=Fraction(d, 4),
        counter=Fraction(r, 4),
        and_stage=Fraction(_ceil_stage(Fraction(r - 1, 3))),
        fixed=Fraction(3),
    )


def reference_table(f_clk=DEFAULT_F_CLK):
    """Throughput and area for the reference operating points.

    Yields (d, r, n, l, throughput_bps, clb_total) rows with exact values.
    """
    for d, r, n, l in TABLE_ROWS:
        yield d, r, n, l, throughput_bps(f_clk, d, r), clb_count(n, l, d, r).total
