"""Problem data and exact dynamics for the budgeted remote estimation setup.

A sensor observes the autoregressive source

    x[t+1] = lam * A @ x[t] + n[t+1],    ||n[t]|| <= a[t],    x[1] = n[1]

and may send the current state to a remote estimator at most ``K`` times over
the horizon ``1..T``. Everything in this module is a pure function on
immutable values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

ORTHOGONALITY_TOL = 1e-9
REL_TOL = 1e-9
ABS_TOL = 1e-12


def close(x: float, y: float, rel_tol: float = REL_TOL, abs_tol: float = ABS_TOL) -> bool:
    """Float comparison used across the package."""
    return math.isclose(float(x), float(y), rel_tol=rel_tol, abs_tol=abs_tol)


# -- errors ---------------------------------------------------------------


class SpecError(ValueError):
    """Base class for invalid problem data. ``field`` names the culprit."""

    field = ""

    def __init__(self, message: str, field: str | None = None):
        if field is not None:
            self.field = field
        super().__init__(f"{self.field}: {message}" if self.field else message)


class InvalidHorizon(SpecError):
    field = "horizon"


class NegativeBudget(SpecError):
    field = "budget"


class InvalidNoiseRadius(SpecError):
    field = "noise_radii"


class NegativeNoiseRadius(InvalidNoiseRadius):
    pass


class NonOrthogonalRotation(SpecError):
    field = "rotation"


class DimensionMismatch(SpecError):
    field = "dim"


class NoEnergyError(ValueError):
    """Raised when a transmission is requested with an empty battery."""


class InfeasibleSchedule(ValueError):
    """Schedule uses more transmissions than the budget, or has the wrong length."""


# -- types ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """Horizon ``T``, budget ``K``, noise radii ``a[1..T]``, scalar ``lam``
    and orthogonal ``rotation`` of size ``dim``.

    Construction only coerces types; call :func:`validate_spec` to check the
    invariants. ``rotation=None`` means the identity.
    """

    horizon: int
    budget: int
    noise_radii: tuple[float, ...]
    lam: float = 1.0
    rotation: np.ndarray | None = None
    dim: int = 1

    def __post_init__(self):
        radii = tuple(float(a) for a in np.atleast_1d(np.asarray(self.noise_radii, dtype=float)))
        object.__setattr__(self, "noise_radii", radii)
        object.__setattr__(self, "lam", float(self.lam))
        if self.rotation is None:
            rot = np.eye(int(self.dim))
        else:
            rot = np.array(self.rotation, dtype=float, copy=True)
            if rot.ndim == 0:
                rot = rot.reshape(1, 1)
            object.__setattr__(self, "dim", int(rot.shape[0]))
        rot.setflags(write=False)
        object.__setattr__(self, "rotation", rot)

    @classmethod
    def homogeneous(cls, horizon: int, budget: int, a: float, lam: float = 1.0,
                    rotation=None, dim: int = 1) -> "ProblemSpec":
        return cls(horizon, budget, (float(a),) * int(horizon), lam, rotation, dim)

    @property
    def T(self) -> int:
        return self.horizon

    @property
    def K(self) -> int:
        return self.budget

    @property
    def abs_lam(self) -> float:
        return abs(self.lam)

    def radius(self, t: int) -> float:
        """Noise radius ``a_t`` with 1-based ``t``."""
        return self.noise_radii[t - 1]

    @property
    def is_homogeneous(self) -> bool:
        return len(set(self.noise_radii)) <= 1

    def replace(self, **changes) -> "ProblemSpec":
        kw = dict(horizon=self.horizon, budget=self.budget, noise_radii=self.noise_radii,
                  lam=self.lam, rotation=self.rotation, dim=self.dim)
        kw.update(changes)
        return ProblemSpec(**kw)

    def __repr__(self):
        return (f"ProblemSpec(T={self.horizon}, K={self.budget}, a={list(self.noise_radii)}, "
                f"lam={self.lam}, dim={self.dim})")


def validate_spec(spec: ProblemSpec) -> ProblemSpec:
    """Return ``spec`` unchanged if it is well formed, otherwise raise the
    :class:`SpecError` subclass matching the first violated invariant."""
    if int(spec.horizon) != spec.horizon or spec.horizon < 1:
        raise InvalidHorizon(f"must be an integer >= 1, got {spec.horizon!r}")
    if int(spec.budget) != spec.budget or spec.budget < 0:
        raise NegativeBudget(f"must be an integer >= 0, got {spec.budget!r}")
    if len(spec.noise_radii) != spec.horizon:
        raise InvalidNoiseRadius(
            f"expected {spec.horizon} radii, got {len(spec.noise_radii)}")
    for t, a in enumerate(spec.noise_radii, start=1):
        if not math.isfinite(a):
            raise InvalidNoiseRadius(f"a_{t} = {a} is not finite")
        if a < 0:
            raise NegativeNoiseRadius(f"a_{t} = {a} is negative")
    if not math.isfinite(spec.lam):
        raise SpecError(f"lam = {spec.lam} is not finite", field="lam")
    rot = spec.rotation
    if rot.ndim != 2 or rot.shape != (spec.dim, spec.dim) or spec.dim < 1:
        raise DimensionMismatch(f"rotation must be {spec.dim}x{spec.dim}, got shape {rot.shape}")
    err = np.max(np.abs(rot.T @ rot - np.eye(spec.dim)))
    if not err <= ORTHOGONALITY_TOL:
        raise NonOrthogonalRotation(f"max |A^T A - I| = {err:.3g} exceeds {ORTHOGONALITY_TOL}")
    return spec


@dataclass(frozen=True)
class Schedule:
    """Open-loop transmission decisions ``u_1..u_T`` (0 or 1)."""

    decisions: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(u) for u in self.decisions)
        if any(u not in (0, 1) for u in bits):
            raise ValueError(f"decisions must be 0/1, got {self.decisions!r}")
        object.__setattr__(self, "decisions", bits)

    @classmethod
    def from_times(cls, horizon: int, times) -> "Schedule":
        times = set(times)
        bad = [t for t in times if not 1 <= t <= horizon]
        if bad:
            raise ValueError(f"transmission times {sorted(bad)} outside 1..{horizon}")
        return cls(tuple(int(t in times) for t in range(1, horizon + 1)))

    @classmethod
    def from_string(cls, bits: str) -> "Schedule":
        return cls(tuple(int(c) for c in bits.strip()))

    @classmethod
    def never(cls, horizon: int) -> "Schedule":
        return cls((0,) * horizon)

    @property
    def horizon(self) -> int:
        return len(self.decisions)

    @property
    def transmit_times(self) -> tuple[int, ...]:
        return tuple(t for t, u in enumerate(self.decisions, start=1) if u)

    @property
    def n_transmissions(self) -> int:
        return sum(self.decisions)

    def __len__(self):
        return len(self.decisions)

    def __iter__(self):
        return iter(self.decisions)

    def __str__(self):
        return "".join(map(str, self.decisions))


def check_schedule(schedule: Schedule, spec: ProblemSpec) -> Schedule:
    if schedule.horizon != spec.horizon:
        raise InfeasibleSchedule(
            f"schedule has length {schedule.horizon}, horizon is {spec.horizon}")
    if schedule.n_transmissions > spec.budget:
        raise InfeasibleSchedule(
            f"schedule transmits {schedule.n_transmissions} times, budget is {spec.budget}")
    return schedule


@dataclass(frozen=True, eq=False)
class SystemState:
    x: np.ndarray
    energy: int
    t: int


class NoTransmission:
    """The channel output when the sensor stays silent."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "EPS"

    def __reduce__(self):
        return (NoTransmission, ())


EPS = NoTransmission()
ChannelSymbol = Union[np.ndarray, NoTransmission]


# -- dynamics -------------------------------------------------------------


def _as_vector(v, dim: int, name: str) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(v, dtype=float))
    if arr.shape != (dim,):
        raise DimensionMismatch(f"{name} has shape {arr.shape}, expected ({dim},)", field=name)
    return arr


def source_step(x, noise, spec: ProblemSpec) -> np.ndarray:
    """One step of the source: ``lam * A @ x + noise``. The noise bound is
    the caller's business."""
    x = _as_vector(x, spec.dim, "x")
    noise = _as_vector(noise, spec.dim, "noise")
    return spec.lam * (spec.rotation @ x) + noise


def energy_step(e: int, u: int) -> int:
    if u not in (0, 1):
        raise ValueError(f"u must be 0 or 1, got {u!r}")
    if e < 0:
        raise ValueError(f"energy must be nonnegative, got {e}")
    if u == 1 and e == 0:
        raise NoEnergyError("cannot transmit with zero energy")
    return max(e - u, 0)


def channel(x, u: int) -> ChannelSymbol:
    if u not in (0, 1):
        raise ValueError(f"u must be 0 or 1, got {u!r}")
    if u:
        return np.array(np.atleast_1d(x), dtype=float, copy=True)
    return EPS


def transmitted(y: ChannelSymbol) -> bool:
    return not isinstance(y, NoTransmission)
