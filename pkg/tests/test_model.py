import numpy as np
import pytest
from hypothesis import given, strategies as st

from remest.model import (
    EPS,
    DimensionMismatch,
    InfeasibleSchedule,
    InvalidHorizon,
    InvalidNoiseRadius,
    NegativeBudget,
    NegativeNoiseRadius,
    NoEnergyError,
    NonOrthogonalRotation,
    ProblemSpec,
    Schedule,
    channel,
    check_schedule,
    energy_step,
    source_step,
    transmitted,
    validate_spec,
)

from conftest import rot90


def test_validate_accepts_identity():
    spec = ProblemSpec(5, 3, (1, 1, 1, 1, 1), 1.0, np.eye(1))
    assert validate_spec(spec) is spec


@pytest.mark.parametrize("kwargs, exc, field", [
    (dict(rotation=[[1, 1], [0, 1]], noise_radii=(1, 1, 1)), NonOrthogonalRotation, "rotation"),
    (dict(noise_radii=(1, -0.1, 1)), NegativeNoiseRadius, "noise_radii"),
    (dict(horizon=0, noise_radii=()), InvalidHorizon, "horizon"),
    (dict(budget=-1, noise_radii=(1, 1, 1)), NegativeBudget, "budget"),
    (dict(noise_radii=(1, 1)), InvalidNoiseRadius, "noise_radii"),
    (dict(noise_radii=(1, float("inf"), 1)), InvalidNoiseRadius, "noise_radii"),
])
def test_validate_rejects(kwargs, exc, field):
    base = dict(horizon=3, budget=1, noise_radii=(1, 1, 1), lam=1.0)
    base.update(kwargs)
    with pytest.raises(exc) as info:
        validate_spec(ProblemSpec(**base))
    assert info.value.field == field
    assert field in str(info.value)


def test_improper_rotation_accepted():
    validate_spec(ProblemSpec(2, 1, (1, 1), 1.0, np.diag([1.0, -1.0])))


def test_budget_at_least_horizon_accepted():
    validate_spec(ProblemSpec.homogeneous(3, 7, 1.0))


def test_source_step_examples():
    spec1 = ProblemSpec.homogeneous(2, 1, 1.0, lam=1.0)
    assert source_step([0.0], [0.0], spec1) == pytest.approx([0.0])
    spec2 = ProblemSpec.homogeneous(2, 1, 1.0, lam=2.0, rotation=rot90())
    np.testing.assert_allclose(source_step([1, 0], [0, 0], spec2), [0, 2], atol=1e-15)
    spec3 = ProblemSpec.homogeneous(2, 1, 1.0, lam=-1.0)
    np.testing.assert_allclose(source_step([1.0], [0.5], spec3), [-0.5])


def test_source_step_dimension_mismatch():
    spec = ProblemSpec.homogeneous(2, 1, 1.0, rotation=np.eye(2))
    with pytest.raises(DimensionMismatch):
        source_step([1.0], [0.0, 0.0], spec)


@pytest.mark.parametrize("e, u, out", [(3, 1, 2), (3, 0, 3), (0, 0, 0)])
def test_energy_step(e, u, out):
    assert energy_step(e, u) == out


def test_energy_step_no_energy():
    with pytest.raises(NoEnergyError):
        energy_step(0, 1)


def test_channel():
    x = np.array([1.5, -2.0])
    y = channel(x, 1)
    np.testing.assert_array_equal(y, x)
    assert y is not x
    assert channel(x, 0) is EPS
    assert not transmitted(channel(x, 0))
    np.testing.assert_array_equal(channel(np.zeros(3), 1), np.zeros(3))


def test_schedule_helpers():
    s = Schedule.from_times(5, [2, 4])
    assert str(s) == "01010"
    assert s.transmit_times == (2, 4)
    assert Schedule.from_string("01010") == s
    with pytest.raises(ValueError):
        Schedule((0, 2))
    with pytest.raises(InfeasibleSchedule):
        check_schedule(Schedule.from_string("111"), ProblemSpec.homogeneous(3, 2, 1.0))
    with pytest.raises(InfeasibleSchedule):
        check_schedule(Schedule.from_string("11"), ProblemSpec.homogeneous(3, 2, 1.0))


@given(st.lists(st.integers(0, 1), min_size=1, max_size=15), st.integers(0, 15))
def test_energy_nonincreasing_never_negative(bits, K):
    e = K
    for u in bits:
        if e == 0:
            u = 0
        nxt = energy_step(e, u)
        assert 0 <= nxt <= e
        e = nxt


@given(st.integers(1, 4), st.floats(-3, 3), st.integers(0, 2**31 - 1))
def test_source_step_scales_norm(dim, lam, seed):
    from conftest import random_rotation
    rng = np.random.default_rng(seed)
    spec = ProblemSpec.homogeneous(2, 1, 1.0, lam, rotation=random_rotation(dim, rng))
    x = rng.standard_normal(dim)
    out = source_step(x, np.zeros(dim), spec)
    assert np.linalg.norm(out) == pytest.approx(abs(lam) * np.linalg.norm(x), rel=1e-9, abs=1e-12)
