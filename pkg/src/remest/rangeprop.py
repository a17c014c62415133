"""Uncertainty-ball propagation, the optimal estimator and closed-loop rollouts.

Under an open-loop schedule the estimator's conditional range is always a
ball: it collapses to the received point on a transmission and otherwise is
rotated, scaled by ``|lam|`` and inflated by the next noise radius. Only the
ball's centre and radius are tracked here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (
    EPS,
    ChannelSymbol,
    DimensionMismatch,
    ProblemSpec,
    Schedule,
    channel,
    check_schedule,
    close,
    transmitted,
    validate_spec,
)

NOISE_TOL = 1e-9


class NoiseBoundViolation(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class RangeState:
    center: np.ndarray
    radius: float
    kind: str  # "pre" or "post" transmission


@dataclass(frozen=True, eq=False)
class RadiusTrajectory:
    radii: np.ndarray
    max_radius: float
    argmax_t: int


@dataclass(frozen=True, eq=False)
class Trajectory:
    states: np.ndarray      # (T, n)
    estimates: np.ndarray   # (T, n)
    symbols: tuple
    errors: np.ndarray      # (T,)
    cost: float


def propagate(state: RangeState, spec: ProblemSpec, t: int) -> RangeState:
    """Push a post-transmission ball at ``t`` to the pre-transmission ball at ``t+1``."""
    center = spec.lam * (spec.rotation @ state.center)
    return RangeState(center, spec.abs_lam * state.radius + spec.radius(t + 1), "pre")


def receive(state: RangeState, y: ChannelSymbol) -> RangeState:
    if transmitted(y):
        return RangeState(np.asarray(y, dtype=float), 0.0, "post")
    return RangeState(state.center, state.radius, "post")


def estimator_step(prev_center, y: ChannelSymbol, spec: ProblemSpec) -> np.ndarray:
    """Optimal estimate: the received state, or the noiseless prediction of the
    previous estimate when nothing arrives."""
    prev = np.atleast_1d(np.asarray(prev_center, dtype=float))
    if prev.shape != (spec.dim,):
        raise DimensionMismatch(f"prev_center has shape {prev.shape}, expected ({spec.dim},)")
    if transmitted(y):
        y = np.atleast_1d(np.asarray(y, dtype=float))
        if y.shape != (spec.dim,):
            raise DimensionMismatch(f"received vector has shape {y.shape}")
        return y.copy()
    return spec.lam * (spec.rotation @ prev)


def evaluate_schedule(schedule: Schedule, spec: ProblemSpec) -> RadiusTrajectory:
    """Per-time worst-case error radii of ``schedule`` under the optimal estimator."""
    check_schedule(schedule, spec)
    radii = np.empty(spec.horizon)
    r = 0.0
    for t, u in enumerate(schedule.decisions, start=1):
        r = 0.0 if u else spec.abs_lam * r + spec.radius(t)
        radii[t - 1] = r
    k = int(np.argmax(radii))
    return RadiusTrajectory(radii, float(radii[k]), k + 1)


def evaluate_schedules(decisions: np.ndarray, spec: ProblemSpec) -> np.ndarray:
    """Worst-case cost of each row of a ``(m, T)`` 0/1 array, vectorised."""
    decisions = np.asarray(decisions, dtype=bool)
    if decisions.ndim != 2 or decisions.shape[1] != spec.horizon:
        raise ValueError(f"expected shape (m, {spec.horizon}), got {decisions.shape}")
    r = np.zeros(decisions.shape[0])
    worst = np.zeros(decisions.shape[0])
    for t in range(spec.horizon):
        r = np.where(decisions[:, t], 0.0, spec.abs_lam * r + spec.noise_radii[t])
        np.maximum(worst, r, out=worst)
    return worst


def _canonical_direction(dim: int) -> np.ndarray:
    e1 = np.zeros(dim)
    e1[0] = 1.0
    return e1


def adversarial_noise(schedule: Schedule, spec: ProblemSpec) -> np.ndarray:
    """Noise sequence (shape ``(T, n)``) that pushes the state as far from the
    optimal estimate as the radius bound allows at every silent step.

    Each ``n_{t+1}`` points along ``sign(lam) * A @ e_t``, where ``e_t`` is the
    current estimation error, so the error norm grows to ``|lam| ||e_t|| + a_{t+1}``.
    """
    validate_spec(spec)
    check_schedule(schedule, spec)
    sign = -1.0 if spec.lam < 0 else 1.0
    A = spec.rotation
    noise = np.zeros((spec.horizon, spec.dim))
    x = np.zeros(spec.dim)
    xhat = np.zeros(spec.dim)
    for t, u in enumerate(schedule.decisions, start=1):
        err = x - xhat
        norm = np.linalg.norm(err)
        if norm > 0.0:
            direction = sign * (A @ err) / norm
        else:
            direction = _canonical_direction(spec.dim)
        noise[t - 1] = spec.radius(t) * direction
        x = spec.lam * (A @ x) + noise[t - 1]
        xhat = estimator_step(xhat, channel(x, u), spec)
    return noise


def simulate(schedule: Schedule, noise, spec: ProblemSpec) -> Trajectory:
    """Roll the source, channel and optimal estimator forward.

    Starting from ``x_0 = xhat_0 = 0`` gives ``x_1 = n_1``.
    """
    validate_spec(spec)
    check_schedule(schedule, spec)
    noise = np.asarray(noise, dtype=float)
    if noise.ndim == 1 and spec.dim == 1:
        noise = noise.reshape(-1, 1)
    if noise.shape != (spec.horizon, spec.dim):
        raise DimensionMismatch(f"noise has shape {noise.shape}, expected ({spec.horizon}, {spec.dim})")
    norms = np.linalg.norm(noise, axis=1)
    for t, (nrm, a) in enumerate(zip(norms, spec.noise_radii), start=1):
        if nrm > a and not close(nrm, a, rel_tol=NOISE_TOL):
            raise NoiseBoundViolation(f"||n_{t}|| = {nrm:.12g} exceeds a_{t} = {a:.12g}")

    T, n = spec.horizon, spec.dim
    states = np.empty((T, n))
    estimates = np.empty((T, n))
    symbols = []
    x = np.zeros(n)
    xhat = np.zeros(n)
    for t, u in enumerate(schedule.decisions, start=1):
        x = spec.lam * (spec.rotation @ x) + noise[t - 1]
        y = channel(x, u)
        xhat = estimator_step(xhat, y, spec)
        states[t - 1], estimates[t - 1] = x, xhat
        symbols.append(y)
    errors = np.linalg.norm(states - estimates, axis=1)
    return Trajectory(states, estimates, tuple(symbols), errors, float(errors.max()))


def simulate_batch(schedule: Schedule, noises, spec: ProblemSpec) -> np.ndarray:
    """Per-time errors ``(m, T)`` for a stack of noise sequences ``(m, T, n)``.

    Same recursion as :func:`simulate`, without the per-draw bookkeeping.
    """
    check_schedule(schedule, spec)
    noises = np.asarray(noises, dtype=float)
    if noises.ndim != 3 or noises.shape[1:] != (spec.horizon, spec.dim):
        raise DimensionMismatch(f"noises has shape {noises.shape}")
    m = noises.shape[0]
    At = spec.rotation.T
    x = np.zeros((m, spec.dim))
    xhat = np.zeros((m, spec.dim))
    errors = np.empty((m, spec.horizon))
    for t, u in enumerate(schedule.decisions):
        x = spec.lam * (x @ At) + noises[:, t]
        xhat = x.copy() if u else spec.lam * (xhat @ At)
        errors[:, t] = np.linalg.norm(x - xhat, axis=1)
    return errors


def random_admissible_noise(spec: ProblemSpec, rng: np.random.Generator,
                            on_sphere: bool = False) -> np.ndarray:
    """Uniform draws from the noise balls (or their boundary spheres)."""
    T, n = spec.horizon, spec.dim
    g = rng.standard_normal((T, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    scale = np.ones(T) if on_sphere else rng.random(T) ** (1.0 / n)
    return g * (np.asarray(spec.noise_radii) * scale)[:, None]


def ball_trajectory(schedule: Schedule, noise, spec: ProblemSpec) -> list[RangeState]:
    """Post-transmission conditional-range balls along a simulated run."""
    traj = simulate(schedule, noise, spec)
    balls = []
    state = RangeState(np.zeros(spec.dim), 0.0, "post")
    for t, y in enumerate(traj.symbols, start=1):
        if t == 1:
            state = RangeState(np.zeros(spec.dim), spec.radius(1), "pre")
        else:
            state = propagate(state, spec, t - 1)
        state = receive(state, y)
        balls.append(state)
    return balls


__all__ = [
    "EPS", "NoiseBoundViolation", "RangeState", "RadiusTrajectory", "Trajectory",
    "propagate", "receive", "estimator_step", "evaluate_schedule", "evaluate_schedules",
    "adversarial_noise", "simulate", "simulate_batch", "random_admissible_noise",
    "ball_trajectory",
]
