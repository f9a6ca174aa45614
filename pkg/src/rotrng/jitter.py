"""Ring oscillator bank model with per-edge timing jitter.

Each oscillator is a chain of identical delay elements; its nominal half
period is the chain length times the element delay, scaled once per
oscillator by a frequency mismatch factor.  Every individual half period
then receives an independent Gaussian perturbation (accumulated phase
jitter), clamped below so the oscillator can never run away to infinite
frequency.  A register that samples an oscillator level within `aperture`
seconds of a transition goes metastable and resolves to a fair coin.

Determinism contract: every random quantity comes from a PCG64 substream
keyed by an integer tuple:

    (seed, bank, 0)        per-oscillator frequency mismatch factors
    (seed, bank, 1)        combiner relaxation stream (overload regime)
    (seed, bank, ro, 2)    half-period jitter for one oscillator
    (seed, bank, ro, 3)    metastability coins for one oscillator

Scalar helpers and the vectorized sampling engine consume these substreams
in the same order, so both paths yield bit-identical results for the same
model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "JitterModel",
    "RoState",
    "init_bank",
    "ro_level_at",
    "combined_level_at",
    "sample_level_at",
    "substream",
]

_MISMATCH_STREAM = 0
_RELAX_STREAM = 1
_JITTER_STREAM = 2
_COIN_STREAM = 3

# lowest multiplier a mismatch draw may produce, keeps periods positive
_MIN_MISMATCH_SCALE = 0.01

DEFAULT_ELEMENT_DELAY = 2e-8 / 3.0
DEFAULT_JITTER_SIGMA = 2.8e-9
DEFAULT_FREQ_MISMATCH_SIGMA = 0.01
DEFAULT_COMBINE_RESOLVE = 2e-10


def substream(*key: int) -> np.random.Generator:
    """Independent generator for an integer key tuple."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(list(key))))


@dataclass(frozen=True)
class JitterModel:
    """Physical parameters of the oscillator bank and its sampling registers.

    aperture defaults to a tenth of the element delay when not given.
    combine_resolve is the shortest edge spacing the XOR combiner can still
    track, averaged over a sample interval; zero turns the overload regime
    off entirely.
    """

    element_delay: float = DEFAULT_ELEMENT_DELAY
    jitter_sigma: float = DEFAULT_JITTER_SIGMA
    aperture: float | None = None
    freq_mismatch_sigma: float = DEFAULT_FREQ_MISMATCH_SIGMA
    combine_resolve: float = DEFAULT_COMBINE_RESOLVE
    seed: int = 0

    def __post_init__(self):
        if self.aperture is None:
            object.__setattr__(self, "aperture", self.element_delay / 10.0)
        if not self.element_delay > 0:
            raise ValueError("element_delay must be positive")
        if self.jitter_sigma < 0:
            raise ValueError("jitter_sigma must be non-negative")
        if self.aperture < 0:
            raise ValueError("aperture must be non-negative")
        if self.freq_mismatch_sigma < 0:
            raise ValueError("freq_mismatch_sigma must be non-negative")
        if self.combine_resolve < 0:
            raise ValueError("combine_resolve must be non-negative")
        if not (isinstance(self.seed, int) and 0 <= self.seed < 2**64):
            raise ValueError("seed must be an integer in [0, 2**64)")

    @property
    def half_period_floor(self) -> float:
        return self.element_delay / 100.0

    def nominal_half_period(self, l: int) -> float:
        return l * self.element_delay


@dataclass
class RoState:
    """Evolving state of a single oscillator.

    next_transition is the absolute time of the first edge not yet in the
    past; transitions_seen counts completed edges.
    """

    level: int
    next_transition: float
    half_period_base: float
    transitions_seen: int = 0
    last_transition: float = -math.inf
    rng: np.random.Generator = field(default=None, repr=False)
    coin_rng: np.random.Generator = field(default=None, repr=False)


def _draw_half_period(state: RoState, model: JitterModel) -> float:
    if model.jitter_sigma == 0.0:
        return state.half_period_base
    z = state.rng.standard_normal()
    return max(model.half_period_floor, state.half_period_base + model.jitter_sigma * z)


def mismatch_scales(model: JitterModel, n: int, bank: int = 0) -> np.ndarray:
    """Per-oscillator half-period multipliers for one bank."""
    z = substream(model.seed, bank, _MISMATCH_STREAM).standard_normal(n)
    return np.maximum(_MIN_MISMATCH_SCALE, 1.0 + model.freq_mismatch_sigma * z)


def init_bank(model: JitterModel, n: int, l: int, bank: int = 0) -> list:
    """Create n oscillators of chain length l, all at level 0 at t = 0."""
    if n < 1:
        raise ValueError("need at least one oscillator")
    if l < 1:
        raise ValueError("chain length must be >= 1")
    scales = mismatch_scales(model, n, bank)
    states = []
    for i in range(n):
        base = model.nominal_half_period(l) * float(scales[i])
        st = RoState(
            level=0,
            next_transition=0.0,
            half_period_base=base,
            rng=substream(model.seed, bank, i, _JITTER_STREAM),
            coin_rng=substream(model.seed, bank, i, _COIN_STREAM),
        )
        st.next_transition = _draw_half_period(st, model)
        states.append(st)
    return states


def ro_level_at(state: RoState, model: JitterModel, t: float) -> int:
    """Ideal oscillator level at time t.

    Advances the state through every edge up to and including t: an edge
    landing exactly on t counts as already completed.
    """
    while state.next_transition <= t:
        state.level ^= 1
        state.transitions_seen += 1
        state.last_transition = state.next_transition
        state.next_transition = state.last_transition + _draw_half_period(state, model)
    return state.level


def combined_level_at(states, model: JitterModel, t: float) -> int:
    """XOR of all ideal oscillator levels at time t."""
    acc = 0
    for st in states:
        acc ^= ro_level_at(st, model, t)
    return acc


def sample_level_at(state: RoState, model: JitterModel, t: float) -> int:
    """Level a register captures at time t.

    The register sees the value from just before t (an edge exactly at t
    has not propagated yet).  If any edge falls strictly within the
    aperture of t the capture is metastable and resolves to a fair coin
    from the oscillator's coin stream.
    """
    while state.next_transition < t:
        state.level ^= 1
        state.transitions_seen += 1
        state.last_transition = state.next_transition
        state.next_transition = state.last_transition + _draw_half_period(state, model)
    level = state.level
    if model.aperture > 0.0:
        near = (state.next_transition - t < model.aperture) or (t - state.last_transition < model.aperture)
        if near:
            level = int(state.coin_rng.random() < 0.5)
    return level
