import pytest

from rotrng import JitterModel, TrngParams, sweep_axis
from rotrng.sweep import SweepCell


def test_sweep_structure():
    model = JitterModel(seed=0)
    params = TrngParams(n=2, l=1, d=0, r=0)
    cells = sweep_axis("r", [0, 1], model, params, 12_000, seeds=(0, 1))
    assert [c.value for c in cells] == [0, 1]
    for c in cells:
        assert isinstance(c, SweepCell)
        assert c.axis == "r"
        assert c.seeds == (0, 1)
        assert len(c.passed) == 2
        assert 0.0 <= c.pass_fraction <= 1.0
        assert c.passes == sum(c.passed)


def test_sweep_is_deterministic():
    model = JitterModel(seed=3)
    params = TrngParams(n=2, l=1)
    a = sweep_axis("l", [1, 2], model, params, 12_000, seeds=(0,))
    b = sweep_axis("l", [1, 2], model, params, 12_000, seeds=(0,))
    assert [c.passed for c in a] == [c.passed for c in b]


def test_sweep_progress_callback():
    calls = []
    sweep_axis("n", [2], JitterModel(seed=0), TrngParams(n=2, l=1), 12_000,
               seeds=(0, 5), progress=lambda *a: calls.append(a))
    assert len(calls) == 2
    assert calls[0][:3] == ("n", 2, 0)
    assert calls[1][:3] == ("n", 2, 5)


def test_sweep_validation():
    with pytest.raises(ValueError):
        sweep_axis("q", [1], JitterModel(), TrngParams(n=2), 1000, seeds=(0,))
    with pytest.raises(ValueError):
        sweep_axis("r", [0], JitterModel(), TrngParams(n=2), 1000, seeds=())
