import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from remest.model import EPS, DimensionMismatch, InfeasibleSchedule, ProblemSpec, Schedule, close
from remest.range_dp import radius_at, solve
from remest.rangeprop import (
    NoiseBoundViolation,
    RangeState,
    adversarial_noise,
    ball_trajectory,
    estimator_step,
    evaluate_schedule,
    evaluate_schedules,
    propagate,
    random_admissible_noise,
    simulate,
    simulate_batch,
)
from remest.model import source_step

from conftest import random_rotation, rot90


def grid_worst_errors(schedule, spec, pts):
    """Per-time max error over every noise sequence drawn from ``pts`` (1-D)."""
    worst = np.zeros(spec.horizon)
    for ns in itertools.product(pts, repeat=spec.horizon):
        noise = np.array(ns)[:, None] * np.array(spec.noise_radii)[:, None]
        worst = np.maximum(worst, simulate(schedule, noise, spec).errors)
    return worst


def test_estimator_step_examples():
    spec = ProblemSpec.homogeneous(3, 1, 1.0, 2.0, rotation=rot90())
    np.testing.assert_array_equal(estimator_step([0, 0], EPS, spec), [0, 0])
    np.testing.assert_array_equal(estimator_step([5, 5], np.array([1.0, -1.0]), spec), [1, -1])
    out = estimator_step([1, 0], EPS, spec)
    np.testing.assert_allclose(out, [0, 2], atol=1e-15)
    np.testing.assert_allclose(out, source_step([1, 0], [0, 0], spec))
    with pytest.raises(DimensionMismatch):
        estimator_step([1.0], EPS, spec)


def test_evaluate_schedule_examples():
    spec = ProblemSpec.homogeneous(4, 4, 1.0, 3.0)
    rt = evaluate_schedule(Schedule.from_string("1111"), spec)
    assert rt.max_radius == 0 and not rt.radii.any()

    spec = ProblemSpec.homogeneous(5, 3, 1.0, 1.0)
    rt = evaluate_schedule(Schedule.from_times(5, [2, 4]), spec)
    np.testing.assert_array_equal(rt.radii, [1, 0, 1, 0, 1])
    assert rt.max_radius == 1

    spec = ProblemSpec.homogeneous(3, 0, 1.0, 2.0)
    rt = evaluate_schedule(Schedule.never(3), spec)
    np.testing.assert_array_equal(rt.radii, [1, 3, 7])
    assert rt.max_radius == 7 and rt.argmax_t == 3
    assert [radius_at(t, 0, spec) for t in (1, 2, 3)] == [1, 3, 7]


def test_evaluate_schedule_infeasible():
    with pytest.raises(InfeasibleSchedule):
        evaluate_schedule(Schedule.from_string("11"), ProblemSpec.homogeneous(2, 1, 1.0))


def test_evaluate_schedules_matches_single():
    rng = np.random.default_rng(3)
    spec = ProblemSpec(7, 7, rng.uniform(0, 2, 7), -1.3)
    rows = rng.integers(0, 2, (40, 7))
    batch = evaluate_schedules(rows, spec)
    single = [evaluate_schedule(Schedule(tuple(r)), spec).max_radius for r in rows]
    np.testing.assert_allclose(batch, single, rtol=1e-12)


def test_radii_follow_last_transmission():
    rng = np.random.default_rng(4)
    spec = ProblemSpec(8, 8, rng.uniform(0, 2, 8), 1.7)
    s = Schedule.from_times(8, [3, 4, 7])
    rt = evaluate_schedule(s, spec)
    tau = 0
    for t in range(1, 9):
        if t in s.transmit_times:
            assert rt.radii[t - 1] == 0
            tau = t
        else:
            assert close(rt.radii[t - 1], radius_at(t, tau, spec))


def test_adversarial_noise_two_steps():
    spec = ProblemSpec.homogeneous(2, 0, 1.0, 1.0)
    s = Schedule.never(2)
    noise = adversarial_noise(s, spec)
    np.testing.assert_array_equal(noise[:, 0], [1, 1])
    assert simulate(s, noise, spec).errors[1] == 2
    assert grid_worst_errors(s, spec, (-1, 0, 1))[1] == 2


def test_adversarial_noise_negative_lambda():
    spec = ProblemSpec.homogeneous(3, 1, 1.0, -1.0)
    s = Schedule.from_times(3, [2])
    errs = simulate(s, adversarial_noise(s, spec), spec).errors
    np.testing.assert_allclose(errs, [1, 0, 1])
    np.testing.assert_allclose(grid_worst_errors(s, spec, (-1, 1)), [1, 0, 1])


def test_adversarial_noise_zero_radii():
    spec = ProblemSpec(4, 1, (0, 0, 0, 0), 2.0, rotation=np.eye(2))
    s = Schedule.from_times(4, [2])
    noise = adversarial_noise(s, spec)
    assert not noise.any()
    assert simulate(s, noise, spec).cost == 0


def test_adversary_matches_grid_search():
    # 1-D: the extreme points of the noise interval suffice
    for lam in (0.0, 0.5, -1.0, 2.0):
        spec = ProblemSpec((3), 1, (1.0, 0.5, 2.0), lam)
        for s in ("000", "100", "010", "001"):
            sched = Schedule.from_string(s)
            errs = simulate(sched, adversarial_noise(sched, spec), spec).errors
            np.testing.assert_allclose(errs, grid_worst_errors(sched, spec, (-1, 1)), atol=1e-12)


def test_simulate_examples(rng):
    spec = ProblemSpec.homogeneous(4, 2, 1.0, 1.5, rotation=random_rotation(2, rng))
    s = Schedule.from_times(4, [1, 3])
    tr = simulate(s, np.zeros((4, 2)), spec)
    assert tr.cost == 0
    assert tr.symbols[1] is EPS and np.array_equal(tr.symbols[0], tr.states[0])

    spec1 = ProblemSpec.homogeneous(1, 1, 2.0, 0.3)
    for n in (-2.0, 0.5, 2.0):
        assert simulate(Schedule.from_string("1"), [[n]], spec1).cost == 0


def test_simulate_rejects_large_noise():
    spec = ProblemSpec.homogeneous(2, 1, 1.0, 1.0)
    with pytest.raises(NoiseBoundViolation):
        simulate(Schedule.never(2), [[0.5], [1.01]], spec)


def test_simulate_batch_matches_simulate(rng):
    spec = ProblemSpec(5, 2, rng.uniform(0, 2, 5), -1.2, rotation=random_rotation(3, rng))
    s = Schedule.from_times(5, [2, 5])
    noises = np.stack([random_admissible_noise(spec, rng) for _ in range(20)])
    batch = simulate_batch(s, noises, spec)
    for nz, row in zip(noises, batch):
        np.testing.assert_allclose(simulate(s, nz, spec).errors, row, rtol=1e-12, atol=1e-14)


def test_radius_recursion(rng):
    spec = ProblemSpec(3, 1, (1.0, 0.7, 0.2), -1.8, rotation=random_rotation(2, rng))
    for r in rng.uniform(0, 5, 20):
        state = RangeState(rng.standard_normal(2), float(r), "post")
        nxt = propagate(state, spec, 1)
        assert nxt.radius == abs(spec.lam) * r + 0.7
        assert nxt.kind == "pre"


def test_balls_contain_state_and_match_radii(rng):
    spec = ProblemSpec(6, 2, rng.uniform(0, 2, 6), 1.1, rotation=random_rotation(2, rng))
    s = Schedule.from_times(6, [3, 5])
    noise = random_admissible_noise(spec, rng)
    balls = ball_trajectory(s, noise, spec)
    tr = simulate(s, noise, spec)
    rt = evaluate_schedule(s, spec)
    for t, b in enumerate(balls):
        np.testing.assert_allclose(b.center, tr.estimates[t], atol=1e-12)
        assert close(b.radius, rt.radii[t])
        assert tr.errors[t] <= b.radius + 1e-9


@given(st.integers(1, 3), st.integers(1, 8), st.floats(-2, 2), st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_tightness_and_soundness(dim, T, lam, seed):
    rng = np.random.default_rng(seed)
    spec = ProblemSpec(T, T, rng.uniform(0, 2, T), lam, rotation=random_rotation(dim, rng))
    s = Schedule(tuple(rng.integers(0, 2, T)))
    rt = evaluate_schedule(s, spec)
    tr = simulate(s, adversarial_noise(s, spec), spec)
    np.testing.assert_allclose(tr.errors, rt.radii, rtol=1e-9, atol=1e-12)
    noises = np.stack([random_admissible_noise(spec, rng, on_sphere=bool(i % 2)) for i in range(50)])
    assert (simulate_batch(s, noises, spec) <= rt.radii + 1e-9 * (1 + rt.radii)).all()


def test_rotation_invariance(rng):
    for _ in range(10):
        T = int(rng.integers(2, 8))
        a = rng.uniform(0, 2, T)
        lam = float(rng.uniform(-2, 2))
        s = Schedule(tuple(rng.integers(0, 2, T)))
        base = ProblemSpec(T, T, a, lam, rotation=np.eye(3))
        rotated = base.replace(rotation=random_rotation(3, rng))
        np.testing.assert_array_equal(evaluate_schedule(s, base).radii,
                                      evaluate_schedule(s, rotated).radii)
        c0 = simulate(s, adversarial_noise(s, base), base).cost
        c1 = simulate(s, adversarial_noise(s, rotated), rotated).cost
        assert close(c0, c1)


def test_optimal_schedule_is_tight():
    spec = ProblemSpec(6, 2, (1.0, 0.2, 1.5, 0.4, 0.9, 1.1), 1.4)
    res = solve(spec)
    assert close(simulate(res.schedule, adversarial_noise(res.schedule, spec), spec).cost,
                 res.optimal_cost)
