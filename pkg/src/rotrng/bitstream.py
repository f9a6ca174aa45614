"""Packed bit sequences with LSB-first byte layout."""

from __future__ import annotations

import numpy as np

__all__ = ["BitStream"]


class BitStream:
    """An immutable sequence of bits stored packed, eight per byte.

    Bit i of the stream lives at byte i // 8, position i % 8 counting from
    the least significant bit.  Any padding bits in the final byte are zero.
    """

    __slots__ = ("_buf", "_nbits")

    def __init__(self, buf: np.ndarray, nbits: int):
        # internal: use the from_* constructors
        if nbits < 0:
            raise ValueError("nbits must be >= 0")
        if buf.dtype != np.uint8:
            raise TypeError("backing buffer must be uint8")
        if len(buf) != (nbits + 7) // 8:
            raise ValueError("buffer length does not match nbits")
        self._buf = buf
        self._nbits = nbits

    @classmethod
    def from_bits(cls, bits) -> "BitStream":
        """Pack an iterable of 0/1 values."""
        arr = np.asarray(bits, dtype=np.uint8)
        if arr.ndim != 1:
            arr = arr.reshape(-1)
        if arr.size and arr.max() > 1:
            raise ValueError("bits must be 0 or 1")
        packed = np.packbits(arr, bitorder="little")
        return cls(packed, arr.size)

    @classmethod
    def from_bytes(cls, data: bytes, nbits: int | None = None) -> "BitStream":
        buf = np.frombuffer(bytes(data), dtype=np.uint8).copy()
        if nbits is None:
            nbits = 8 * len(buf)
        if not (8 * len(buf) - 8 < nbits <= 8 * len(buf)) and not (nbits == 0 and len(buf) == 0):
            raise ValueError("nbits inconsistent with byte length")
        pad = 8 * len(buf) - nbits
        if pad and len(buf):
            # force pad bits to zero so equal streams compare equal bytewise
            buf[-1] &= (1 << (8 - pad)) - 1
        return cls(buf, nbits)

    def to_bits(self) -> np.ndarray:
        """Unpack to a uint8 array of 0/1 values, length == len(self)."""
        return np.unpackbits(self._buf, count=self._nbits, bitorder="little")

    def to_bytes(self) -> bytes:
        return self._buf.tobytes()

    def __len__(self) -> int:
        return self._nbits

    def __getitem__(self, i: int) -> int:
        if isinstance(i, slice):
            return BitStream.from_bits(self.to_bits()[i])
        if i < 0:
            i += self._nbits
        if not 0 <= i < self._nbits:
            raise IndexError("bit index out of range")
        return int(self._buf[i >> 3] >> (i & 7)) & 1

    def __iter__(self):
        return iter(self.to_bits().tolist())

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitStream):
            return NotImplemented
        return self._nbits == other._nbits and bool(np.array_equal(self._buf, other._buf))

    def __hash__(self):
        return hash((self._nbits, self._buf.tobytes()))

    def __repr__(self) -> str:
        return f"BitStream(nbits={self._nbits})"

    def ones(self) -> int:
        """Population count."""
        return int(np.unpackbits(self._buf, count=self._nbits, bitorder="little").sum())

    def concat(self, other: "BitStream") -> "BitStream":
        if self._nbits % 8 == 0:
            buf = np.concatenate([self._buf, other._buf])
            return BitStream(buf, self._nbits + other._nbits)
        return BitStream.from_bits(np.concatenate([self.to_bits(), other.to_bits()]))
