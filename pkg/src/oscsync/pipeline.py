"""End-to-end runs, parameter sweeps, and CSV emission.

All functions here are deterministic: identical inputs produce identical
rows (and therefore byte-identical CSV files).  Parallel sweeps assemble
results in submission order regardless of worker scheduling.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from oscsync.analysis import ProbeSettings, SyncReport, locking_threshold, run_probe, sync_report
from oscsync.coeffs import CoeffTrajectory, default_dt, solve_coeffs
from oscsync.fockspace import FockBasis, coherent_state
from oscsync.master import EvolutionResult, build_generator, evolve
from oscsync.model import InitialState, ModelParams, to_relative_basis
from oscsync.poles import PhaseDiagram, critical_coupling, phase_diagram


@dataclass(frozen=True)
class DynamicsSettings:
    """Integration controls for one density-matrix run."""

    t_max: float = 100.0
    dt_master: float | None = None  # default: twice the default coefficient step
    n_cap: int = 12
    output_stride: int = 1
    compute_logneg: bool = False


def run_dynamics(
    params: ModelParams,
    init: InitialState,
    settings: DynamicsSettings = DynamicsSettings(),
) -> tuple[EvolutionResult, CoeffTrajectory]:
    """Coefficients -> generator -> density-matrix propagation."""
    dt_master = settings.dt_master
    if dt_master is None:
        dt_master = 2.0 * default_dt(params)
    n_master = max(1, int(round(settings.t_max / dt_master)))
    traj = solve_coeffs(params, n_master * dt_master, dt=dt_master / 2.0)
    gen = build_generator(traj)
    phi1, phi2 = to_relative_basis(init)
    rho0 = coherent_state(FockBasis(settings.n_cap), phi1, phi2)
    result = evolve(
        rho0,
        gen,
        dt_master=dt_master,
        output_stride=settings.output_stride,
        compute_logneg=settings.compute_logneg,
    )
    return result, traj


@dataclass(frozen=True)
class SyncRow:
    alpha: float
    freq1: float
    freq2: float
    locked: bool


@dataclass(frozen=True)
class BoundaryRow:
    delta_omega: float
    alpha_star: float


def _sync_task(args: tuple[ModelParams, InitialState, ProbeSettings]) -> SyncReport:
    params, init, settings = args
    return run_probe(params, init, settings)


def sweep_alpha(
    params_base: ModelParams,
    alphas: Sequence[float],
    init: InitialState,
    settings: ProbeSettings = ProbeSettings(),
    workers: int = 1,
) -> list[SyncRow]:
    """Locking verdict per coupling value; rows in grid order."""
    tasks = [(replace(params_base, alpha=float(a)), init, settings) for a in alphas]
    if workers <= 1:
        reports = [_sync_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_sync_task, tasks))
    return [
        SyncRow(alpha=float(a), freq1=r.dominant_freq_1, freq2=r.dominant_freq_2, locked=r.locked)
        for a, r in zip(alphas, reports)
    ]


def _boundary_task(
    args: tuple[ModelParams, tuple[float, float], InitialState, ProbeSettings]
) -> float:
    params, alpha_range, init, settings = args
    return locking_threshold(params, alpha_range, init, settings)


def sweep_boundary(
    params_base: ModelParams,
    delta_ratios: Sequence[float],
    alpha_range: tuple[float, float],
    init: InitialState,
    settings: ProbeSettings = ProbeSettings(),
    workers: int = 1,
) -> list[BoundaryRow]:
    """Locking threshold per detuning; each column is one full bisection."""
    w0 = params_base.omega0
    tasks = []
    for d in delta_ratios:
        params = ModelParams.from_detuning(
            omega0=w0,
            delta_omega=float(d) * w0,
            alpha=params_base.alpha,
            omega_c=params_base.omega_c,
            s=params_base.s,
        )
        tasks.append((params, alpha_range, init, settings))
    if workers <= 1:
        stars = [_boundary_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            stars = list(pool.map(_boundary_task, tasks))
    return [
        BoundaryRow(delta_omega=float(d) * w0, alpha_star=star)
        for d, star in zip(delta_ratios, stars)
    ]


def _phase_row_task(args) -> np.ndarray:
    alphas, delta_ratio, omega_c, s, omega0 = args
    return phase_diagram([*alphas], [delta_ratio], omega_c, s=s, omega0=omega0).omega_prime[0]


def phase_diagram_parallel(
    alphas: Sequence[float],
    delta_ratios: Sequence[float],
    omega_c: float,
    s: float = 1.0,
    omega0: float = 1.0,
    workers: int = 1,
) -> PhaseDiagram:
    """phase_diagram with detuning rows fanned out across workers."""
    if workers <= 1:
        return phase_diagram(alphas, delta_ratios, omega_c, s=s, omega0=omega0)
    tasks = [(tuple(alphas), float(d), omega_c, s, omega0) for d in delta_ratios]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(_phase_row_task, tasks))
    field = np.vstack(rows)
    boundary = np.array(
        [
            critical_coupling(
                ModelParams.from_detuning(
                    omega0=omega0, delta_omega=float(d) * omega0, alpha=0.0, omega_c=omega_c, s=s
                )
            )
            for d in delta_ratios
        ]
    )
    return PhaseDiagram(
        alphas=np.asarray(alphas, dtype=float),
        delta_ratios=np.asarray(delta_ratios, dtype=float),
        omega_prime=field,
        boundary_alpha_c=boundary,
        omega0=omega0,
        omega_c=omega_c,
        s=s,
    )


def format_value(x) -> str:
    """Full-double-precision cell formatting (17 significant digits)."""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def write_csv(path: Path | str, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    """Write rows deterministically; returns the path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row width {len(row)} does not match header width {len(header)}")
        lines.append(",".join(format_value(cell) for cell in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def write_meta(out_dir: Path | str, payload: dict) -> Path:
    """Sidecar run metadata (kept out of the data files for determinism)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "meta.json"
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def observable_rows(result: EvolutionResult, with_logneg: bool) -> list[tuple]:
    """Rows for the observable CSV contract."""
    cols = [
        result.times,
        result.x1,
        result.x2,
        result.p1,
        result.p2,
        result.n1,
        result.n2,
        result.trace,
        result.min_eig,
    ]
    if with_logneg:
        if result.logneg is None:
            raise ValueError("run did not record logarithmic negativity")
        cols.append(result.logneg)
    return list(zip(*cols))


OBSERVABLE_HEADER = ["t", "x1", "x2", "p1", "p2", "n1", "n2", "trace", "min_eig"]


def coeff_rows(traj: CoeffTrajectory) -> list[tuple]:
    return list(
        zip(
            traj.times,
            traj.u.real,
            traj.u.imag,
            traj.v.real,
            traj.v.imag,
            traj.w.real,
            traj.w.imag,
            traj.x.real,
            traj.x.imag,
        )
    )


COEFF_HEADER = ["t", "re_u", "im_u", "re_v", "im_v", "re_w", "im_w", "re_x", "im_x"]
