"""Command-line front end.

Subcommands: dynamics, coeffs, sweep-sync, phase-diagram, pole.  Each reads
a flat TOML config (documented in the README), applies flag overrides,
validates every field before computing anything, and writes CSV files plus
a meta.json sidecar into the output directory.  Exit codes: 0 success,
1 numerical failure (diagnostic names the failing stage), 2 config error.
"""

from __future__ import annotations

import argparse
import contextlib
import math
import sys
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from oscsync import __version__
from oscsync.analysis import ProbeSettings
from oscsync.coeffs import default_dt, solve_coeffs
from oscsync.fockspace import FockBasis, coherent_state
from oscsync.master import build_generator, evolve
from oscsync.model import InitialState, ModelParams, to_relative_basis
from oscsync.pipeline import (
    COEFF_HEADER,
    OBSERVABLE_HEADER,
    coeff_rows,
    observable_rows,
    phase_diagram_parallel,
    sweep_alpha,
    sweep_boundary,
    write_csv,
    write_meta,
)
from oscsync.poles import find_pole

SQRT2 = math.sqrt(2.0)


class ConfigError(ValueError):
    """Invalid or missing configuration; reported with exit code 2."""


class StageError(RuntimeError):
    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"error in {stage} stage: {cause}")
        self.stage = stage
        self.cause = cause


@contextlib.contextmanager
def _stage(name: str):
    try:
        yield
    except Exception as exc:
        raise StageError(name, exc) from exc


_MODEL_KEYS = {"omega0", "delta_omega", "omega1", "omega2", "alpha", "omega_c", "s"}
_STATE_KEYS = {"x1", "x2", "beta1_re", "beta1_im", "beta2_re", "beta2_im"}
_RUN_KEYS = {"t_max", "dt", "n_cap", "output_stride", "logneg", "skip_transient"}

_ALLOWED_KEYS = {
    "dynamics": _MODEL_KEYS | _STATE_KEYS | _RUN_KEYS | {"write_coeffs"},
    "coeffs": _MODEL_KEYS | {"t_max", "dt"},
    "sweep-sync": _MODEL_KEYS
    | _STATE_KEYS
    | _RUN_KEYS
    | {
        "alpha_grid",
        "alpha_min",
        "alpha_max",
        "alpha_num",
        "alpha_log",
        "delta_ratios",
        "alpha_lo",
        "alpha_hi",
    },
    "phase-diagram": {"omega0", "omega_c", "s", "alpha_max", "alpha_num", "delta_max", "delta_num"},
    "pole": _MODEL_KEYS,
}


def _load_config(path: Path) -> dict:
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        return tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot parse config file {path}: {exc}") from exc


def _check_keys(cfg: dict, command: str) -> None:
    allowed = _ALLOWED_KEYS[command]
    for key in cfg:
        if key not in allowed:
            raise ConfigError(f"unknown config key '{key}' for subcommand {command}")


def _number(cfg: dict, key: str, default=None, required: bool = False) -> float | None:
    if key not in cfg:
        if required:
            raise ConfigError(f"missing required config key '{key}'")
        return default
    value = cfg[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"config key '{key}' must be a number, got {value!r}")
    return float(value)


def _integer(cfg: dict, key: str, default=None) -> int | None:
    if key not in cfg:
        return default
    value = cfg[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"config key '{key}' must be an integer, got {value!r}")
    return value


def _boolean(cfg: dict, key: str, default: bool = False) -> bool:
    value = cfg.get(key, default)
    if not isinstance(value, bool):
        raise ConfigError(f"config key '{key}' must be a boolean, got {value!r}")
    return value


def _float_list(cfg: dict, key: str) -> list[float] | None:
    if key not in cfg:
        return None
    value = cfg[key]
    if not isinstance(value, list) or any(
        isinstance(v, bool) or not isinstance(v, (int, float)) for v in value
    ):
        raise ConfigError(f"config key '{key}' must be a list of numbers, got {value!r}")
    return [float(v) for v in value]


def _build_params(cfg: dict, require_alpha: bool) -> ModelParams:
    has_pair = "omega1" in cfg or "omega2" in cfg
    has_split = "omega0" in cfg or "delta_omega" in cfg
    if has_pair and has_split:
        raise ConfigError("give either (omega1, omega2) or (omega0, delta_omega), not both")
    alpha = _number(cfg, "alpha", default=0.0, required=require_alpha)
    omega_c = _number(cfg, "omega_c", required=True)
    s = _number(cfg, "s", default=1.0)
    try:
        if has_pair:
            omega1 = _number(cfg, "omega1", required=True)
            omega2 = _number(cfg, "omega2", required=True)
            return ModelParams(omega1=omega1, omega2=omega2, alpha=alpha, omega_c=omega_c, s=s)
        omega0 = _number(cfg, "omega0", default=1.0)
        delta_omega = _number(cfg, "delta_omega", default=0.0)
        return ModelParams.from_detuning(
            omega0=omega0, delta_omega=delta_omega, alpha=alpha, omega_c=omega_c, s=s
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _build_init(cfg: dict) -> InitialState:
    has_x = "x1" in cfg or "x2" in cfg
    has_beta = any(k.startswith("beta") for k in cfg)
    if has_x and has_beta:
        raise ConfigError("give either (x1, x2) or beta components, not both")
    if has_beta:
        return InitialState(
            beta1=complex(_number(cfg, "beta1_re", 0.0), _number(cfg, "beta1_im", 0.0)),
            beta2=complex(_number(cfg, "beta2_re", 0.0), _number(cfg, "beta2_im", 0.0)),
        )
    x1 = _number(cfg, "x1", default=0.5)
    x2 = _number(cfg, "x2", default=0.5)
    return InitialState(beta1=x1 / SQRT2, beta2=x2 / SQRT2)


def _apply_overrides(cfg: dict, args: argparse.Namespace) -> dict:
    cfg = dict(cfg)
    if args.ncap is not None:
        cfg["n_cap"] = args.ncap
    if args.dt is not None:
        cfg["dt"] = args.dt
    if args.tmax is not None:
        cfg["t_max"] = args.tmax
    if args.logneg:
        cfg["logneg"] = True
    if args.skip_transient:
        cfg["skip_transient"] = True
    return cfg


def _positive(name: str, value: float) -> float:
    if value <= 0:
        raise ConfigError(f"config key '{name}' must be > 0, got {value:g}")
    return value


def _meta(args: argparse.Namespace, cfg: dict, outputs: list[str]) -> dict:
    return {
        "command": args.command,
        "config": {k: cfg[k] for k in sorted(cfg)},
        "config_path": str(args.config),
        "outputs": sorted(outputs),
        "version": __version__,
    }


def cmd_dynamics(args: argparse.Namespace, cfg: dict) -> int:
    params = _build_params(cfg, require_alpha=True)
    init = _build_init(cfg)
    t_max = _positive("t_max", _number(cfg, "t_max", default=100.0 / params.omega0))
    dt_master = _number(cfg, "dt")
    if dt_master is None:
        dt_master = 2.0 * default_dt(params)
    _positive("dt", dt_master)
    n_cap = _integer(cfg, "n_cap", default=12)
    if n_cap < 1:
        raise ConfigError(f"config key 'n_cap' must be >= 1, got {n_cap}")
    stride = _integer(cfg, "output_stride", default=1)
    if stride < 1:
        raise ConfigError(f"config key 'output_stride' must be >= 1, got {stride}")
    with_logneg = _boolean(cfg, "logneg")
    write_coeffs = _boolean(cfg, "write_coeffs")

    n_master = max(1, int(round(t_max / dt_master)))
    with _stage("coefficient integration"):
        traj = solve_coeffs(params, n_master * dt_master, dt=dt_master / 2.0)
    with _stage("generator assembly"):
        gen = build_generator(traj)
    with _stage("initial-state preparation"):
        phi1, phi2 = to_relative_basis(init)
        rho0 = coherent_state(FockBasis(n_cap), phi1, phi2)
    with _stage("density-matrix propagation"):
        result = evolve(
            rho0, gen, dt_master=dt_master, output_stride=stride, compute_logneg=with_logneg
        )
    with _stage("output"):
        header = OBSERVABLE_HEADER + (["logneg"] if with_logneg else [])
        outputs = ["observables.csv"]
        write_csv(args.out / "observables.csv", header, observable_rows(result, with_logneg))
        if write_coeffs:
            write_csv(args.out / "coeffs.csv", COEFF_HEADER, coeff_rows(traj))
            outputs.append("coeffs.csv")
        write_meta(args.out, _meta(args, cfg, outputs))
    return 0


def cmd_coeffs(args: argparse.Namespace, cfg: dict) -> int:
    params = _build_params(cfg, require_alpha=True)
    t_max = _positive("t_max", _number(cfg, "t_max", default=100.0 / params.omega0))
    dt = _number(cfg, "dt")
    if dt is None:
        dt = default_dt(params)
    _positive("dt", dt)
    with _stage("coefficient integration"):
        traj = solve_coeffs(params, t_max, dt=dt)
    with _stage("output"):
        write_csv(args.out / "coeffs.csv", COEFF_HEADER, coeff_rows(traj))
        write_meta(args.out, _meta(args, cfg, ["coeffs.csv"]))
    return 0


def _probe_settings(cfg: dict) -> ProbeSettings:
    stride = _integer(cfg, "output_stride", default=6)
    if stride < 1:
        raise ConfigError(f"config key 'output_stride' must be >= 1, got {stride}")
    n_cap = _integer(cfg, "n_cap", default=8)
    if n_cap < 1:
        raise ConfigError(f"config key 'n_cap' must be >= 1, got {n_cap}")
    t_max = _number(cfg, "t_max")
    if t_max is not None:
        _positive("t_max", t_max)
    dt = _number(cfg, "dt")
    if dt is not None:
        _positive("dt", dt)
    return ProbeSettings(
        t_max=t_max,
        dt_master=dt,
        n_cap=n_cap,
        output_stride=stride,
        skip_fraction=0.25 if _boolean(cfg, "skip_transient") else 0.0,
    )


def cmd_sweep_sync(args: argparse.Namespace, cfg: dict) -> int:
    params = _build_params(cfg, require_alpha=False)
    init = _build_init(cfg)
    settings = _probe_settings(cfg)

    alphas = _float_list(cfg, "alpha_grid")
    if alphas is None and "alpha_num" in cfg:
        num = _integer(cfg, "alpha_num")
        lo = _number(cfg, "alpha_min", required=True)
        hi = _number(cfg, "alpha_max", required=True)
        if num < 1:
            raise ConfigError(f"config key 'alpha_num' must be >= 1, got {num}")
        if not 0.0 <= lo < hi:
            raise ConfigError(f"alpha_min/alpha_max must satisfy 0 <= min < max, got {lo:g}, {hi:g}")
        if _boolean(cfg, "alpha_log"):
            if lo <= 0.0:
                raise ConfigError("alpha_min must be > 0 for a logarithmic grid")
            alphas = list(np.logspace(math.log10(lo), math.log10(hi), num))
        else:
            alphas = list(np.linspace(lo, hi, num))
    if alphas is not None and len(alphas) == 0:
        raise ConfigError("config key 'alpha_grid' is empty")

    delta_ratios = _float_list(cfg, "delta_ratios")
    if delta_ratios is not None and len(delta_ratios) == 0:
        raise ConfigError("config key 'delta_ratios' is empty")
    if alphas is None and delta_ratios is None:
        raise ConfigError(
            "no sweep requested: give 'alpha_grid' (or alpha_min/alpha_max/alpha_num) "
            "and/or 'delta_ratios'"
        )

    outputs = []
    if alphas is not None:
        with _stage("synchronization sweep"):
            rows = sweep_alpha(params, alphas, init, settings, workers=args.workers)
        with _stage("output"):
            write_csv(
                args.out / "sync_sweep.csv",
                ["alpha", "freq1", "freq2", "locked"],
                [(r.alpha, r.freq1, r.freq2, r.locked) for r in rows],
            )
        outputs.append("sync_sweep.csv")
    if delta_ratios is not None:
        alpha_lo = _number(cfg, "alpha_lo", required=True)
        alpha_hi = _number(cfg, "alpha_hi", required=True)
        if not 0.0 <= alpha_lo < alpha_hi:
            raise ConfigError(
                f"alpha_lo/alpha_hi must satisfy 0 <= lo < hi, got {alpha_lo:g}, {alpha_hi:g}"
            )
        with _stage("locking-threshold bisection"):
            rows = sweep_boundary(
                params, delta_ratios, (alpha_lo, alpha_hi), init, settings, workers=args.workers
            )
        with _stage("output"):
            write_csv(
                args.out / "boundary.csv",
                ["delta_omega", "alpha_star"],
                [(r.delta_omega, r.alpha_star) for r in rows],
            )
        outputs.append("boundary.csv")
    write_meta(args.out, _meta(args, cfg, outputs))
    return 0


def cmd_phase_diagram(args: argparse.Namespace, cfg: dict) -> int:
    omega0 = _number(cfg, "omega0", default=1.0)
    omega_c = _positive("omega_c", _number(cfg, "omega_c", required=True))
    s = _positive("s", _number(cfg, "s", default=1.0))
    alpha_max = _positive("alpha_max", _number(cfg, "alpha_max", required=True))
    alpha_num = _integer(cfg, "alpha_num", default=61)
    delta_max = _number(cfg, "delta_max", default=0.9)
    delta_num = _integer(cfg, "delta_num", default=46)
    if alpha_num < 2:
        raise ConfigError(f"config key 'alpha_num' must be >= 2, got {alpha_num}")
    if delta_num < 1:
        raise ConfigError(f"config key 'delta_num' must be >= 1, got {delta_num}")
    if not 0.0 <= delta_max < 1.0:
        raise ConfigError(f"config key 'delta_max' must be in [0, 1), got {delta_max:g}")
    if omega0 <= 0:
        raise ConfigError(f"config key 'omega0' must be > 0, got {omega0:g}")

    alphas = np.linspace(0.0, alpha_max, alpha_num)
    deltas = np.linspace(0.0, delta_max, delta_num)
    with _stage("pole rasterization"):
        diagram = phase_diagram_parallel(
            alphas, deltas, omega_c, s=s, omega0=omega0, workers=args.workers
        )
    with _stage("output"):
        raster = [
            (diagram.alphas[j], diagram.delta_ratios[i] * omega0, diagram.omega_prime[i, j])
            for i in range(diagram.delta_ratios.size)
            for j in range(diagram.alphas.size)
        ]
        write_csv(
            args.out / "phase_diagram.csv",
            ["alpha", "delta_omega", "omega_prime_over_omega0"],
            raster,
        )
        write_csv(
            args.out / "phase_boundary.csv",
            ["delta_omega", "alpha_c"],
            list(zip(diagram.delta_ratios * omega0, diagram.boundary_alpha_c)),
        )
        write_meta(args.out, _meta(args, cfg, ["phase_diagram.csv", "phase_boundary.csv"]))
    return 0


def cmd_pole(args: argparse.Namespace, cfg: dict) -> int:
    params = _build_params(cfg, require_alpha=True)
    with _stage("pole search"):
        res = find_pole(params)
    if res.localized:
        print(
            f"pole: omega_prime_over_omega0 = {res.omega_prime / params.omega0:.17g}, "
            f"alpha_c = {res.alpha_c:.17g}"
        )
    else:
        print(f"no pole: alpha_c = {res.alpha_c:.17g}")
    return 0


_COMMANDS = {
    "dynamics": cmd_dynamics,
    "coeffs": cmd_coeffs,
    "sweep-sync": cmd_sweep_sync,
    "phase-diagram": cmd_phase_diagram,
    "pole": cmd_pole,
}


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", type=Path, required=True, help="TOML config file")
    sub.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    sub.add_argument("--workers", type=int, default=1, help="parallel workers for sweeps")
    sub.add_argument("--ncap", type=int, default=None, help="override n_cap")
    sub.add_argument("--dt", type=float, default=None, help="override dt")
    sub.add_argument("--tmax", type=float, default=None, help="override t_max")
    sub.add_argument("--logneg", action="store_true", help="record logarithmic negativity")
    sub.add_argument(
        "--skip-transient",
        action="store_true",
        help="drop the first quarter of the window in spectral analysis",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oscsync",
        description="Bath-induced synchronization of two detuned oscillators: "
        "exact reduced dynamics, locking detection, and the dissipationless phase diagram.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    helps = {
        "dynamics": "propagate the density matrix and write the observable CSV",
        "coeffs": "solve the coefficient equations and write their CSV",
        "sweep-sync": "frequency-locking sweep over coupling and/or detuning",
        "phase-diagram": "rasterize the localized-mode frequency over (alpha, detuning)",
        "pole": "report the localized-mode pole for one parameter set",
    }
    for name, help_text in helps.items():
        _add_common(subparsers.add_parser(name, help=help_text))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load_config(args.config)
        _check_keys(cfg, args.command)
        if args.workers < 1:
            raise ConfigError(f"--workers must be >= 1, got {args.workers}")
        cfg = _apply_overrides(cfg, args)
        return _COMMANDS[args.command](args, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except StageError as exc:
        print(f"oscsync: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
