"""Desk-scale simulator of a ring-oscillator true random number generator.

Jittered oscillator bank, divided-clock sampling with parity folding, a
RAM/UART capture harness, a statistical test battery, and exact resource
estimators, all behind one deterministic seeding scheme.
"""

from .bitstream import BitStream
from .jitter import (JitterModel, RoState, combined_level_at, init_bank,
                     ro_level_at, sample_level_at)
from .pipeline import (BankSampler, TrngParams, multi_sampler_generate,
                       resilience_xor, sample_raw, trng_generate)
from .battery import (BatteryReport, TestResult, autocorrelation_test,
                      byte_chi_square_test, monobit_test, poker_test,
                      run_battery, runs_test)
from .harness import (CaptureConfig, CaptureUnderrun, FsmInputs, FsmOutputs,
                      FsmState, deframe_trace, frame_trace, fsm_step,
                      run_capture, uart_deframe, uart_frame)
from .estimators import ClbBreakdown, clb_count, reference_table, throughput_bps
from .sweep import SweepCell, sweep_axis

__version__ = "0.1.0"

__all__ = [
    "BitStream",
    "JitterModel", "RoState", "init_bank", "ro_level_at", "combined_level_at",
    "sample_level_at",
    "BankSampler", "TrngParams", "sample_raw", "resilience_xor",
    "trng_generate", "multi_sampler_generate",
    "BatteryReport", "TestResult", "run_battery", "monobit_test", "runs_test",
    "poker_test", "autocorrelation_test", "byte_chi_square_test",
    "FsmState", "FsmInputs", "FsmOutputs", "fsm_step", "CaptureConfig",
    "CaptureUnderrun", "run_capture", "uart_frame", "uart_deframe",
    "frame_trace", "deframe_trace",
    "ClbBreakdown", "clb_count", "throughput_bps", "reference_table",
    "SweepCell", "sweep_axis",
    "__version__",
]
