"""Parameter sweeps: run the battery across a grid of pipeline settings."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .battery import DEFAULT_ALPHA, run_battery
from .jitter import JitterModel
from .pipeline import TrngParams, trng_generate

__all__ = ["SweepCell", "sweep_axis", "SWEEP_AXES"]

SWEEP_AXES = ("n", "l", "d", "r")


@dataclass(frozen=True)
class SweepCell:
    """Battery outcome for one grid point, aggregated over seeds."""

    axis: str
    value: int
    seeds: tuple
    passed: tuple

    @property
    def passes(self) -> int:
        return sum(self.passed)

    @property
    def pass_fraction(self) -> float:
        return self.passes / len(self.passed) if self.passed else 0.0


def sweep_axis(axis: str, values, model: JitterModel, params: TrngParams,
               nbits: int, seeds, alpha: float = DEFAULT_ALPHA,
               progress=None) -> list:
    """Battery pass/fail over one swept parameter.

    Every (value, seed) cell generates a fresh nbits-bit stream with the
    seed substituted into the model, runs the battery on it, and records
    the overall verdict.
    """
    if axis not in SWEEP_AXES:
        raise ValueError(f"axis must be one of {SWEEP_AXES}")
    seeds = tuple(int(s) for s in seeds)
    if not seeds:
        raise ValueError("need at least one seed")
    cells = []
    for value in values:
        p = replace(params, **{axis: int(value)})
        outcomes = []
        for seed in seeds:
            m = replace(model, seed=seed)
            bits = trng_generate(m, p, nbits)
            report = run_battery(bits, alpha=alpha, min_bits=0)
            outcomes.append(report.passed)
            if progress is not None:
                progress(axis, value, seed, report)
        cells.append(SweepCell(axis, int(value), seeds, tuple(outcomes)))
    return cells
