"""Sampling pipeline: oscillator bank -> divided-clock capture -> XOR folding.

The raw stream samples the XOR of all oscillator levels at times
t_k = (k + 1) * 2**d / f_clk.  A resilience stage then folds each group of
2**r consecutive raw bits into one output bit by parity.

The combiner is not an ideal XOR: it can only track a finite edge rate.
When the mean edge spacing inside one sample interval drops below the
model's combine_resolve, the combined node stops following individual
transitions and rings at its own relaxation period instead; samples taken
in that regime capture the ringing waveform, not bank parity.

The vectorized engine and the scalar helpers in the jitter module consume
identical random substreams, so either path reproduces the other bit for
bit (see the jitter module docstring for the substream layout).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bitstream import BitStream
from .jitter import JitterModel, RoState, mismatch_scales, substream

__all__ = [
    "TrngParams",
    "BankSampler",
    "sample_raw",
    "resilience_xor",
    "trng_generate",
    "multi_sampler_generate",
]

_CHUNK = 1 << 17
_RAW_SLAB = 1 << 22

# index snap: edges within ~2**-48 relative of a sample instant count as
# coincident, which keeps exactly commensurate (zero jitter) configurations
# stable against floating point rounding
_SNAP = 2.0**-48

_JITTER_STREAM = 2
_COIN_STREAM = 3


@dataclass(frozen=True)
class TrngParams:
    """Pipeline configuration: n oscillators of chain length l, sample clock
    f_clk divided by 2**d, parity folding over 2**r raw bits."""

    n: int
    l: int = 3
    d: int = 0
    r: int = 0
    f_clk: float = 50e6

    def __post_init__(self):
        if not (isinstance(self.n, int) and self.n >= 1):
            raise ValueError("n must be an integer >= 1")
        if not (isinstance(self.l, int) and self.l >= 1):
            raise ValueError("l must be an integer >= 1")
        if not (isinstance(self.d, int) and self.d >= 0):
            raise ValueError("d must be an integer >= 0")
        if not (isinstance(self.r, int) and self.r >= 0):
            raise ValueError("r must be an integer >= 0")
        if not self.f_clk > 0:
            raise ValueError("f_clk must be positive")

    @property
    def sample_period(self) -> float:
        return (1 << self.d) / self.f_clk


class _Channel:
    """Carry state for one oscillator between engine chunks."""

    __slots__ = ("base", "rng", "coin_rng", "future", "gen_last", "parity",
                 "consumed", "last_edge", "zero_index")

    def __init__(self, base: float, rng, coin_rng):
        self.base = base
        self.rng = rng
        self.coin_rng = coin_rng
        self.future = np.empty(0, dtype=np.float64)
        self.gen_last = 0.0
        self.parity = 0
        self.consumed = 0
        self.last_edge = -np.inf
        self.zero_index = 0


def _assign(edge_times: np.ndarray, inv_period: float) -> np.ndarray:
    """Index of the first sample instant strictly after each edge."""
    s = edge_times * inv_period
    return (s + s * _SNAP + _SNAP).astype(np.int64)


class BankSampler:
    """Chunked vectorized sampler for one oscillator bank.

    take(m) returns the next m raw bits as a uint8 array of 0/1 values.
    Output is a pure function of (model, n, l, f_clk, d, bank) and of how
    many bits were taken so far; chunk boundaries do not affect it.
    """

    def __init__(self, model: JitterModel, n: int, l: int, f_clk: float,
                 d: int = 0, bank: int = 0):
        if n < 1 or l < 1:
            raise ValueError("need n >= 1 oscillators of length l >= 1")
        if f_clk <= 0:
            raise ValueError("f_clk must be positive")
        self.model = model
        self.n = n
        self.l = l
        self.bank = bank
        self.period = (1 << d) / f_clk
        if model.aperture >= self.period / 2.0:
            raise ValueError("aperture must be smaller than half the sample period")
        scales = mismatch_scales(model, n, bank)
        base_half = model.nominal_half_period(l)
        self._channels = [
            _Channel(base_half * float(scales[i]),
                     substream(model.seed, bank, i, _JITTER_STREAM),
                     substream(model.seed, bank, i, _COIN_STREAM))
            for i in range(n)
        ]
        self._relax_rng = substream(model.seed, bank, 1)
        self._relax_phase = 0.0
        self._k0 = 0

    # -- overload regime -------------------------------------------------

    def _relax_levels(self, count: int) -> np.ndarray:
        """Ringing waveform of the overloaded combiner, one level per sample.

        The node relaxes with period 4 * combine_resolve; successive sample
        instants advance its phase by one sample period plus accumulated
        timing noise.  The stream is consumed every chunk whether or not an
        overload actually happened, which keeps outputs independent of
        chunk boundaries.
        """
        rho = self.model.combine_resolve
        period_osc = 4.0 * rho
        half_osc = 2.0 * rho
        sigma_step = (rho / 20.0) * np.sqrt(self.period / half_osc)
        steps = self.period + sigma_step * self._relax_rng.standard_normal(count)
        phases = self._relax_phase + np.cumsum(steps)
        self._relax_phase = float(phases[-1] % period_osc)
        return ((phases % period_osc) >= half_osc).astype(np.uint8)

    # -- per-oscillator edge generation ----------------------------------

    def _edges_jittered(self, ch: _Channel, t_target: float) -> np.ndarray:
        """All generated edges (carried + new) up to at least t_target."""
        model = self.model
        pieces = [ch.future] if ch.future.size else []
        while ch.gen_last <= t_target:
            deficit = t_target - ch.gen_last
            block = max(64, int(deficit / ch.base * 1.05) + 16)
            draws = ch.base + model.jitter_sigma * ch.rng.standard_normal(block)
            np.maximum(draws, model.half_period_floor, out=draws)
            new = ch.gen_last + np.cumsum(draws)
            ch.gen_last = float(new[-1])
            pieces.append(new)
        if not pieces:
            return np.empty(0, dtype=np.float64)
        return pieces[0] if len(pieces) == 1 else np.concatenate(pieces)

    def _edges_exact(self, ch: _Channel, t_target: float) -> np.ndarray:
        """Zero-jitter edge times, regenerated from the global edge index."""
        count = int(t_target / ch.base) + 2
        if count <= ch.zero_index:
            return np.empty(0, dtype=np.float64)
        m = np.arange(ch.zero_index, count, dtype=np.float64)
        return ch.base * (m + 1.0)

    # -- main loop --------------------------------------------------------

    def _chunk(self, out: np.ndarray, k0: int, size: int) -> None:
        model = self.model
        period = self.period
        inv_period = 1.0 / period
        aperture = model.aperture
        jittered = model.jitter_sigma > 0.0
        t_end = (k0 + size) * period
        t_target = t_end + aperture

        parity_acc = np.zeros(size, dtype=np.uint8)
        edge_counts = np.zeros(size, dtype=np.int64)

        for ch in self._channels:
            edges = self._edges_jittered(ch, t_target) if jittered else self._edges_exact(ch, t_target)
            idx = _assign(edges, inv_period)
            j = idx - k0
            in_chunk = j < size
            n_cons = int(np.count_nonzero(in_chunk))

            cnt = np.bincount(j[in_chunk], minlength=size)
            level_vec = ((ch.parity + np.cumsum(cnt)) & 1).astype(np.uint8)
            parity_acc ^= level_vec
            edge_counts += cnt

            if aperture > 0.0 and edges.size:
                near_k = np.rint(edges * inv_period)
                dist = np.abs(edges - near_k * period)
                kn = near_k.astype(np.int64) - 1
                sel = (dist < aperture) & (kn >= k0) & (kn < k0 + size)
                if sel.any():
                    mask = np.zeros(size, dtype=bool)
                    mask[kn[sel] - k0] = True
                    hits = np.nonzero(mask)[0]
                    coins = (ch.coin_rng.random(hits.size) < 0.5).astype(np.uint8)
                    parity_acc[hits] ^= level_vec[hits] ^ coins

            if n_cons:
                ch.parity = (ch.parity + n_cons) & 1
                ch.consumed += n_cons
                ch.last_edge = float(edges[n_cons - 1])
            if jittered:
                ch.future = edges[n_cons:]
            else:
                ch.zero_index += n_cons

        rho = model.combine_resolve
        if rho > 0.0:
            relax = self._relax_levels(size)
            over = edge_counts * rho > period
            if over.any():
                parity_acc[over] = relax[over]

        out[:] = parity_acc

    def take(self, m: int) -> np.ndarray:
        if m < 0:
            raise ValueError("cannot take a negative number of bits")
        out = np.empty(m, dtype=np.uint8)
        done = 0
        while done < m:
            size = min(_CHUNK, m - done)
            self._chunk(out[done:done + size], self._k0, size)
            self._k0 += size
            done += size
        return out

    def states(self) -> list:
        """Snapshot of every oscillator as an RoState.

        Levels, edge counts, and next_transition reflect exactly the samples
        taken so far.  The attached generators are the live ones and sit
        past any pre-generated future edges, so treat the snapshot as
        read-only bookkeeping rather than a resume point.
        """
        snap = []
        for ch in self._channels:
            if self.model.jitter_sigma > 0.0:
                if not ch.future.size:
                    draws = ch.base + self.model.jitter_sigma * ch.rng.standard_normal(1)
                    step = max(self.model.half_period_floor, float(draws[0]))
                    ch.future = np.array([ch.gen_last + step])
                    ch.gen_last = float(ch.future[-1])
                nxt = float(ch.future[0])
            else:
                nxt = ch.base * (ch.zero_index + 1)
            snap.append(RoState(
                level=ch.parity,
                next_transition=nxt,
                half_period_base=ch.base,
                transitions_seen=ch.consumed,
                last_transition=ch.last_edge,
                rng=ch.rng,
                coin_rng=ch.coin_rng,
            ))
        return snap


def sample_raw(model: JitterModel, params: TrngParams, nbits: int) -> BitStream:
    """Raw sampled bits before parity folding, at the divided clock."""
    if nbits < 0:
        raise ValueError("nbits must be >= 0")
    sampler = BankSampler(model, params.n, params.l, params.f_clk, params.d)
    return BitStream.from_bits(sampler.take(nbits))


def resilience_xor(bits: BitStream, r: int) -> BitStream:
    """Fold every 2**r consecutive bits into their parity.

    A trailing group shorter than 2**r is discarded.
    """
    if r < 0:
        raise ValueError("r must be >= 0")
    if r == 0:
        return bits
    group = 1 << r
    arr = bits.to_bits()
    m = arr.size // group
    folded = np.bitwise_xor.reduce(arr[: m * group].reshape(m, group), axis=1)
    return BitStream.from_bits(folded)


def _fold_array(raw: np.ndarray, r: int) -> np.ndarray:
    if r == 0:
        return raw
    group = 1 << r
    return np.bitwise_xor.reduce(raw.reshape(-1, group), axis=1)


def trng_generate(model: JitterModel, params: TrngParams, nbits: int) -> BitStream:
    """Generate nbits output bits through the full pipeline."""
    if nbits < 0:
        raise ValueError("nbits must be >= 0")
    sampler = BankSampler(model, params.n, params.l, params.f_clk, params.d)
    group = 1 << params.r
    slab_groups = max(1, _RAW_SLAB >> params.r)
    out = np.empty(nbits, dtype=np.uint8)
    done = 0
    while done < nbits:
        n_groups = min(slab_groups, nbits - done)
        raw = sampler.take(n_groups * group)
        out[done:done + n_groups] = _fold_array(raw, params.r)
        done += n_groups
    return BitStream.from_bits(out)


def multi_sampler_generate(s: int, n_per: int, l: int, model: JitterModel,
                           f_clk: float, nbits: int) -> BitStream:
    """XOR of s independent banks, each sampled by its own register.

    Every bank has its own n_per oscillators and its own combiner, keyed by
    bank index; the registers share one undivided sample clock and their
    outputs are XORed into the final stream.
    """
    if s < 1:
        raise ValueError("need at least one sampler")
    if nbits < 0:
        raise ValueError("nbits must be >= 0")
    samplers = [BankSampler(model, n_per, l, f_clk, d=0, bank=b) for b in range(s)]
    out = np.empty(nbits, dtype=np.uint8)
    done = 0
    while done < nbits:
        size = min(_RAW_SLAB, nbits - done)
        acc = samplers[0].take(size)
        for smp in samplers[1:]:
            acc ^= smp.take(size)
        out[done:done + size] = acc
        done += size
    return BitStream.from_bits(out)
