"""Batch command line front end.

    remest solve    --config run.json
    remest schedule --config run.json
    remest simulate --config run.json --seed 7 --out traj.csv
    remest sweep    --config sweep.json --format csv
    remest verify   --config run.json

The config is a JSON object. Problem keys: ``T``, ``K``, ``lambda`` (default
1), ``dim`` (default 1), ``rotation`` (``"identity"`` or a matrix) and exactly
one of ``a`` (homogeneous radius) or ``noise_radii`` (list). Command options:
``epsilon``, ``sweep`` (``{"K": [1, 2, 3]}`` or ``{"K": {"start": 1, "stop": 4}}``),
``schedule`` (``"optimal"``, ``"uniform"`` or a bit string), ``noise``
(``"adversarial"``, ``"random"`` or ``{"mode": "file", "path": ...}``), ``seed``.

Exit codes: 0 success, 1 invalid input, 2 a verification check failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import oracle
from .model import ProblemSpec, Schedule, SpecError, check_schedule, close, validate_spec
from .range_dp import homogeneous_cost, min_budget, solve, uniform_schedule, uniform_spacing
from .rangeprop import adversarial_noise, evaluate_schedule, random_admissible_noise, simulate

SWEEP_KEYS = ("T", "K", "lambda", "a", "epsilon")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    spec: ProblemSpec
    a: float | None = None
    epsilon: float | None = None
    sweep: dict = field(default_factory=dict)
    schedule: str = "optimal"
    noise: dict = field(default_factory=lambda: {"mode": "adversarial"})
    seed: int = 0
    out: str | None = None


def _pick(raw: dict, *names, default=None):
    found = [n for n in names if n in raw]
    if len(found) > 1:
        raise ConfigError(f"give only one of {found}")
    return raw[found[0]] if found else default


def _expand_range(key, spec):
    if isinstance(spec, dict):
        start, stop = spec["start"], spec["stop"]
        step = spec.get("step", 1)
        if isinstance(start, int) and isinstance(stop, int) and isinstance(step, int):
            values = list(range(start, stop + 1, step))
        else:
            n = int(round((stop - start) / step)) + 1
            values = [start + i * step for i in range(max(n, 0))]
    elif isinstance(spec, (list, tuple)):
        values = list(spec)
    else:
        values = [spec]
    if not values:
        raise ConfigError(f"sweep range for {key!r} is empty")
    return values


def parse_config(raw: dict) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - {"T", "horizon", "K", "budget", "lambda", "lam", "dim", "rotation",
                          "a", "noise_radii", "epsilon", "sweep", "schedule", "noise", "seed", "out"}
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    sweep = raw.get("sweep") or {}
    if not isinstance(sweep, dict):
        raise ConfigError("sweep must be an object mapping a parameter to its values")
    bad = set(sweep) - set(SWEEP_KEYS)
    if bad:
        raise ConfigError(f"cannot sweep over {sorted(bad)}; choose from {SWEEP_KEYS}")
    sweep = {k: _expand_range(k, sweep[k]) for k in SWEEP_KEYS if k in sweep}

    T = _pick(raw, "T", "horizon", default=sweep.get("T", [None])[0])
    K = _pick(raw, "K", "budget", default=sweep.get("K", [None])[0])
    lam = _pick(raw, "lambda", "lam", default=sweep.get("lambda", [1.0])[0])
    if T is None or K is None:
        raise ConfigError("T and K are required")
    if not (isinstance(T, int) and isinstance(K, int)):
        raise ConfigError("T and K must be integers")
    has_a, has_radii = "a" in raw or "a" in sweep, "noise_radii" in raw
    if has_a == has_radii:
        raise ConfigError("give exactly one of 'a' or 'noise_radii'")
    a = None
    if has_a:
        a = float(raw.get("a", sweep.get("a", [None])[0]))
        radii = (a,) * T
    else:
        radii = raw["noise_radii"]
        if not isinstance(radii, list):
            raise ConfigError("noise_radii must be a list")
    dim = raw.get("dim", 1)
    rotation = raw.get("rotation", "identity")
    if rotation == "identity":
        rotation = None
    elif not isinstance(rotation, list):
        raise ConfigError("rotation must be 'identity' or a matrix")
    spec = validate_spec(ProblemSpec(T, K, tuple(radii), float(lam), rotation, dim))

    noise = raw.get("noise", "adversarial")
    if isinstance(noise, str):
        noise = {"mode": noise}
    if noise.get("mode") not in ("adversarial", "random", "file"):
        raise ConfigError(f"unknown noise mode {noise.get('mode')!r}")
    if noise["mode"] == "file" and "path" not in noise:
        raise ConfigError("noise mode 'file' needs a 'path'")
    eps = raw.get("epsilon")
    return RunConfig(spec=spec, a=a, epsilon=None if eps is None else float(eps), sweep=sweep,
                     schedule=str(raw.get("schedule", "optimal")), noise=noise,
                     seed=int(raw.get("seed", 0)), out=raw.get("out"))


def load_config(path) -> RunConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    return parse_config(raw)


# -- output ---------------------------------------------------------------


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def render(header, rows, style: str) -> str:
    rows = [[fmt(v) for v in row] for row in rows]
    if style == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    widths = [max(len(str(h)), *(len(r[i]) for r in rows)) if rows else len(str(h))
              for i, h in enumerate(header)]
    lines = ["  ".join(str(h).rjust(w) for h, w in zip(header, widths))]
    lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in rows]
    return "\n".join(lines) + "\n"


def _write(text: str, out: str | None):
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _note(msg: str, out: str | None):
    # summaries go to stdout when the table went to a file
    print(msg, file=sys.stdout if out else sys.stderr)


# -- commands -------------------------------------------------------------


def _resolve_schedule(cfg: RunConfig) -> Schedule:
    spec = cfg.spec
    if cfg.schedule == "optimal":
        return solve(spec).schedule
    if cfg.schedule == "uniform":
        if spec.budget < 1:
            raise ConfigError("uniform schedule needs K >= 1")
        return uniform_schedule(spec.horizon, spec.budget)
    try:
        sched = Schedule.from_string(cfg.schedule)
    except ValueError as exc:
        raise ConfigError(f"bad schedule {cfg.schedule!r}") from exc
    return check_schedule(sched, spec)


def cmd_solve(cfg: RunConfig, style: str = "plain") -> int:
    res = solve(cfg.spec)
    radii = evaluate_schedule(res.schedule, cfg.spec).radii
    rows = [(t, u, r) for t, (u, r) in enumerate(zip(res.schedule.decisions, radii), start=1)]
    if style == "csv":
        _write(render(["t", "u", "radius"], rows, "csv"), cfg.out)
        _note(f"optimal_cost={fmt(res.optimal_cost)} schedule={res.schedule}", cfg.out)
    else:
        text = (f"optimal_cost: {fmt(res.optimal_cost)}\n"
                f"schedule: {res.schedule}\n"
                f"transmit_times: {' '.join(map(str, res.schedule.transmit_times)) or '-'}\n"
                f"radii: {' '.join(fmt(r) for r in radii)}\n")
        _write(text, cfg.out)
    return 0


def cmd_schedule(cfg: RunConfig, style: str = "plain") -> int:
    spec = cfg.spec
    if cfg.a is None:
        raise ConfigError("schedule needs homogeneous noise ('a')")
    if spec.budget < 1:
        raise ConfigError("schedule needs K >= 1")
    sched = uniform_schedule(spec.horizon, spec.budget)
    cost = homogeneous_cost(spec.horizon, spec.budget, cfg.a, spec.lam)
    delta = uniform_spacing(spec.horizon, spec.budget)
    if style == "csv":
        _write(render(["T", "K", "lambda", "a", "Delta", "cost", "schedule"],
                      [(spec.horizon, spec.budget, spec.lam, cfg.a, delta, cost, str(sched))], "csv"),
               cfg.out)
    else:
        _write(f"Delta: {delta}\nschedule: {sched}\ncost: {fmt(cost)}\n", cfg.out)
    return 0


def _load_noise_file(path, spec: ProblemSpec) -> np.ndarray:
    p = Path(path)
    if p.suffix == ".json":
        arr = np.asarray(json.loads(p.read_text()), dtype=float)
    else:
        arr = np.loadtxt(p, delimiter=",", ndmin=2)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    return arr


def cmd_simulate(cfg: RunConfig, style: str = "csv") -> int:
    spec = cfg.spec
    sched = _resolve_schedule(cfg)
    mode = cfg.noise["mode"]
    if mode == "adversarial":
        noise = adversarial_noise(sched, spec)
    elif mode == "random":
        noise = random_admissible_noise(spec, np.random.default_rng(cfg.seed))
    else:
        noise = _load_noise_file(cfg.noise["path"], spec)
    traj = simulate(sched, noise, spec)
    bound = evaluate_schedule(sched, spec).radii
    n = spec.dim
    header = (["t"] + [f"x_{i}" for i in range(1, n + 1)] + [f"xhat_{i}" for i in range(1, n + 1)]
              + [f"y_{i}" for i in range(1, n + 1)] + ["error", "radius_bound", "u"])
    rows = []
    for t in range(spec.horizon):
        y = traj.symbols[t]
        ys = list(y) if sched.decisions[t] else ["eps"] * n
        rows.append([t + 1, *traj.states[t], *traj.estimates[t], *ys,
                     traj.errors[t], bound[t], sched.decisions[t]])
    _write(render(header, rows, style), cfg.out)
    _note(f"cost={fmt(traj.cost)} worst_case_bound={fmt(float(bound.max()))} schedule={sched}",
          cfg.out)
    return 0


def _sweep_point(point: dict, cfg: RunConfig) -> list:
    T, K, lam, a = point["T"], point["K"], point["lambda"], point["a"]
    spec = validate_spec(ProblemSpec.homogeneous(T, K, a, lam))
    row = [T, K, lam, a, solve(spec).optimal_cost, uniform_spacing(T, K)]
    if point.get("epsilon") is not None:
        k_star = min_budget(T, a, lam, point["epsilon"])
        row += [point["epsilon"], "infeasible" if k_star is None else k_star]
    return row


def cmd_sweep(cfg: RunConfig, style: str = "csv") -> int:
    if not cfg.sweep:
        raise ConfigError("sweep needs a nonempty 'sweep' grid")
    if cfg.a is None:
        raise ConfigError("sweep needs homogeneous noise ('a')")
    base = {"T": cfg.spec.horizon, "K": cfg.spec.budget, "lambda": cfg.spec.lam, "a": cfg.a,
            "epsilon": cfg.epsilon}
    keys = list(cfg.sweep)
    points = [{**base, **dict(zip(keys, combo))}
              for combo in itertools.product(*(cfg.sweep[k] for k in keys))]
    with ThreadPoolExecutor() as pool:
        rows = list(pool.map(lambda p: _sweep_point(p, cfg), points))
    header = ["T", "K", "lambda", "a", "cost", "Delta"]
    if base["epsilon"] is not None or "epsilon" in cfg.sweep:
        header += ["epsilon", "K_star"]
    _write(render(header, rows, style), cfg.out)
    return 0


@dataclass
class Check:
    name: str
    status: str        # PASS, FAIL or SKIPPED
    expected: float | None = None
    observed: float | None = None
    detail: str = ""


def run_checks(spec: ProblemSpec) -> list[Check]:
    """Compare the dynamic program with every oracle whose guard admits ``spec``."""
    res = solve(spec)
    dp = res.optimal_cost
    checks = []

    def compare(name, fn):
        try:
            v = fn()
        except (oracle.InstanceTooLarge, oracle.CapExceeded) as exc:
            checks.append(Check(name, "SKIPPED", dp, None, str(exc)))
            return
        checks.append(Check(name, "PASS" if close(v, dp) else "FAIL", dp, v))

    compare("schedule-cost", lambda: evaluate_schedule(res.schedule, spec).max_radius)
    compare("enumeration", lambda: oracle.enumerate_schedules(spec)[0])
    compare("adversary", lambda: simulate(res.schedule, adversarial_noise(res.schedule, spec), spec).cost)
    compare("centralized-deterministic",
            lambda: oracle.solve_centralized(oracle.deterministic_problem(spec)).value)
    if spec.dim == 1:
        compare("game-tree", lambda: oracle.game_tree_minimax(spec))
        compare("centralized-coordinator",
                lambda: oracle.solve_centralized(oracle.coordinator_problem(spec)).value)
    else:
        checks.append(Check("game-tree", "SKIPPED", dp, None, "needs dim = 1"))
        checks.append(Check("centralized-coordinator", "SKIPPED", dp, None, "needs dim = 1"))
    if spec.is_homogeneous and spec.budget >= 1:
        a, T, K = spec.noise_radii[0], spec.horizon, spec.budget
        compare("closed-form", lambda: homogeneous_cost(T, K, a, spec.lam))
        compare("uniform-schedule", lambda: evaluate_schedule(uniform_schedule(T, K), spec).max_radius)
    else:
        checks.append(Check("closed-form", "SKIPPED", dp, None, "needs homogeneous noise, K >= 1"))
    return checks


def cmd_verify(cfg: RunConfig, style: str = "plain") -> int:
    checks = run_checks(cfg.spec)
    rows = [(c.name, c.status, "" if c.expected is None else c.expected,
             "" if c.observed is None else c.observed, c.detail) for c in checks]
    _write(render(["check", "status", "dp_value", "oracle_value", "detail"], rows, style), cfg.out)
    return 2 if any(c.status == "FAIL" for c in checks) else 0


COMMANDS = {
    "solve": (cmd_solve, "plain"),
    "schedule": (cmd_schedule, "plain"),
    "simulate": (cmd_simulate, "csv"),
    "sweep": (cmd_sweep, "csv"),
    "verify": (cmd_verify, "plain"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="remest", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", help="write the table here instead of stdout")
        p.add_argument("--seed", type=int, help="seed for random noise (overrides config)")
        p.add_argument("--format", choices=("csv", "plain"), help="output style")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fn, default_style = COMMANDS[args.command]
    try:
        cfg = load_config(args.config)
        if args.out is not None:
            cfg.out = args.out
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("seed must be nonnegative")
            cfg.seed = args.seed
        return fn(cfg, args.format or default_style)
    except (ConfigError, SpecError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
