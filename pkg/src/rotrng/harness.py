"""Capture harness: RAM buffering FSM and UART byte serialization.

Models the control logic that sits between the bit pipeline and a host
link: fill a block RAM with raw bits, read it back eight bits at a time
into a shift register, and push completed bytes out through a UART.  The
FSM is a Mealy machine; fsm_step is a pure function from (state, inputs)
to (next state, outputs) so single transitions are directly checkable.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

__all__ = [
    "FsmState",
    "FsmInputs",
    "FsmOutputs",
    "fsm_step",
    "CaptureConfig",
    "CaptureUnderrun",
    "run_capture",
    "uart_frame",
    "uart_deframe",
    "frame_trace",
    "deframe_trace",
]


class FsmState(enum.Enum):
    IDLE = enum.auto()
    PREPARE_FILL_RAM = enum.auto()
    FILL_RAM = enum.auto()
    READ_RAM = enum.auto()
    SHIFT_IN = enum.auto()
    CHECK_SR = enum.auto()
    WAIT_UART = enum.auto()
    UART_SEND = enum.auto()


class FsmInputs(NamedTuple):
    bit_ready: bool = False
    addr_wrapped: bool = False
    sr_full: bool = False
    uart_busy: bool = False
    addr_zero: bool = False


class FsmOutputs(NamedTuple):
    addr_reset: bool = False
    write_enable: bool = False
    addr_inc: bool = False
    shift_en: bool = False
    uart_send: bool = False


_OUT_NONE = FsmOutputs()
_OUT_ADDR_RESET = FsmOutputs(addr_reset=True)
_OUT_WRITE = FsmOutputs(write_enable=True, addr_inc=True)
_OUT_SHIFT = FsmOutputs(shift_en=True, addr_inc=True)
_OUT_SEND = FsmOutputs(uart_send=True)


def fsm_step(state: FsmState, inputs: FsmInputs):
    """One clock edge of the control FSM, returns (next_state, outputs)."""
    if state is FsmState.IDLE:
        return FsmState.PREPARE_FILL_RAM, _OUT_ADDR_RESET
    if state is FsmState.PREPARE_FILL_RAM:
        return FsmState.FILL_RAM, _OUT_ADDR_RESET
    if state is FsmState.FILL_RAM:
        if not inputs.bit_ready:
            return FsmState.FILL_RAM, _OUT_NONE
        nxt = FsmState.READ_RAM if inputs.addr_wrapped else FsmState.FILL_RAM
        return nxt, _OUT_WRITE
    if state is FsmState.READ_RAM:
        return FsmState.SHIFT_IN, _OUT_NONE
    if state is FsmState.SHIFT_IN:
        return FsmState.CHECK_SR, _OUT_SHIFT
    if state is FsmState.CHECK_SR:
        nxt = FsmState.WAIT_UART if inputs.sr_full else FsmState.READ_RAM
        return nxt, _OUT_NONE
    if state is FsmState.WAIT_UART:
        nxt = FsmState.WAIT_UART if inputs.uart_busy else FsmState.UART_SEND
        return nxt, _OUT_NONE
    if state is FsmState.UART_SEND:
        nxt = FsmState.PREPARE_FILL_RAM if inputs.addr_zero else FsmState.READ_RAM
        return nxt, _OUT_SEND
    raise ValueError(f"unknown state: {state!r}")


@dataclass(frozen=True)
class CaptureConfig:
    """RAM depth in bits and UART pacing for a capture run.

    framed adds a busy window after each byte, modelling the time the UART
    spends clocking the frame out; it changes only the cycle count, never
    the captured bytes.
    """

    ram_bits: int = 16384
    framed: bool = False
    uart_busy_cycles: int = 160

    def __post_init__(self):
        if self.ram_bits < 8 or self.ram_bits % 8 != 0:
            raise ValueError("ram_bits must be a positive multiple of 8")
        if self.uart_busy_cycles < 0:
            raise ValueError("uart_busy_cycles must be >= 0")


class CaptureUnderrun(RuntimeError):
    """Bit source ran dry while the FSM still expected data."""


def run_capture(source, config: CaptureConfig, nbytes: int) -> bytes:
    """Drive the FSM until nbytes have been serialized.

    source is any iterable of 0/1 values.  Bits enter the RAM in arrival
    order and leave through the shift register LSB first, so the output
    bytes are the packed form of the input bit sequence.
    """
    if config is None:
        config = CaptureConfig()
    if nbytes < 0:
        raise ValueError("nbytes must be >= 0")

    bits = iter(source)
    pending = next(bits, None)

    ram = bytearray(config.ram_bits)
    addr = 0
    last_addr = config.ram_bits - 1
    sr = 0
    sr_count = 0
    busy = 0
    out = bytearray()
    state = FsmState.IDLE

    while len(out) < nbytes:
        if state is FsmState.FILL_RAM and pending is None:
            raise CaptureUnderrun(
                f"source exhausted after {len(out)} bytes, {sr_count} bits in flight")
        inputs = FsmInputs(
            bit_ready=pending is not None,
            addr_wrapped=addr == last_addr,
            sr_full=sr_count == 8,
            uart_busy=busy > 0,
            addr_zero=addr == 0,
        )
        state, outs = fsm_step(state, inputs)
        if busy > 0:
            busy -= 1
        if outs.addr_reset:
            addr = 0
        if outs.write_enable:
            ram[addr] = pending
            pending = next(bits, None)
        if outs.shift_en:
            sr = (sr >> 1) | (ram[addr] << 7)
            sr_count += 1
        if outs.addr_inc:
            addr = 0 if addr == last_addr else addr + 1
        if outs.uart_send:
            out.append(sr)
            sr = 0
            sr_count = 0
            if config.framed:
                busy = config.uart_busy_cycles
    return bytes(out)


def uart_frame(byte: int):
    """10-bit serial frame: start bit 0, eight data bits LSB first, stop bit 1."""
    if not 0 <= byte <= 255:
        raise ValueError("byte out of range")
    return [0] + [(byte >> i) & 1 for i in range(8)] + [1]


def uart_deframe(frame) -> int:
    bits = list(frame)
    if len(bits) != 10:
        raise ValueError("frame must be exactly 10 bits")
    if bits[0] != 0:
        raise ValueError("bad start bit")
    if bits[9] != 1:
        raise ValueError("bad stop bit")
    return sum(bits[1 + i] << i for i in range(8))


def frame_trace(data: bytes):
    """Serial line trace for a byte sequence, as a flat bit list."""
    trace = []
    for b in data:
        trace.extend(uart_frame(b))
    return trace


def deframe_trace(trace) -> bytes:
    bits = list(trace)
    if len(bits) % 10 != 0:
        raise ValueError("trace length must be a multiple of 10")
    return bytes(uart_deframe(bits[i:i + 10]) for i in range(0, len(bits), 10))
