"""Spectral peak estimation and frequency-locking detection.

The locking criterion digitizes "both oscillators share one dominant
spectral peak": estimate each oscillator's largest DFT peak, refine it by
parabolic interpolation, and call the pair locked when the peaks agree
within the refined resolution (a tenth of a DFT bin).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from oscsync.model import InitialState, ModelParams, to_relative_basis

RESOLUTION_GAIN = 0.1  # refined-peak resolution, as a fraction of one DFT bin
PAD_FACTOR = 8  # zero-padding factor; keeps the log-parabola fit unbiased
MIN_SAMPLES = 64
BRACKET_TOL = 1e-3  # absolute bisection width on alpha


class NoPeakError(RuntimeError):
    """Spectral maximum sits on a boundary bin (DC or Nyquist)."""


class NoBracketError(RuntimeError):
    """Locking bisection endpoints do not bracket a transition."""


def dominant_frequency(series, dt_sample: float) -> tuple[float, float]:
    """Largest positive-frequency DFT peak of a real series.

    Returns (angular frequency, amplitude).  The rectangular-window
    transform is zero-padded, then the peak bin and its two neighbors are
    fit with a parabola in log magnitude; the vertex gives the refined
    frequency and amplitude (normalized so a pure tone A*cos reports ~A).
    """
    x = np.asarray(series, dtype=float)
    if x.ndim != 1 or x.size < MIN_SAMPLES:
        raise ValueError(f"need a 1-d series of >= {MIN_SAMPLES} samples, got shape {x.shape}")
    if dt_sample <= 0:
        raise ValueError(f"dt_sample must be > 0, got {dt_sample:g}")
    n_pad = PAD_FACTOR * x.size
    mag = np.abs(np.fft.rfft(x, n_pad))
    k = int(np.argmax(mag))
    if k == 0 or k == mag.size - 1:
        where = "DC" if k == 0 else "Nyquist"
        raise NoPeakError(f"spectral maximum sits at the {where} bin; no interior peak")
    with np.errstate(divide="ignore"):
        la, lb, lg = np.log(mag[k - 1 : k + 2])
    curv = la - 2.0 * lb + lg
    if not np.isfinite(curv) or curv == 0.0:
        p, vertex = 0.0, lb
    else:
        p = 0.5 * (la - lg) / curv
        vertex = lb - 0.125 * (la - lg) * (la - lg) / curv
    freq = 2.0 * math.pi * (k + p) / (n_pad * dt_sample)
    amplitude = 2.0 * math.exp(vertex) / x.size
    return freq, amplitude


@dataclass(frozen=True)
class SyncReport:
    """Dominant-frequency comparison of the two oscillators."""

    dominant_freq_1: float
    dominant_freq_2: float
    locked: bool
    freq_resolution: float
    peak_amplitudes: tuple[float, float]


def sync_report(times, x1, x2, skip_fraction: float = 0.0) -> SyncReport:
    """Locking verdict from the two position series.

    skip_fraction drops that leading fraction of the window (transient
    removal); the default keeps the full series.
    """
    t = np.asarray(times, dtype=float)
    if t.size < 2:
        raise ValueError("need at least two samples")
    steps = np.diff(t)
    dt = float(steps[0])
    if dt <= 0 or not np.allclose(steps, dt, rtol=1e-9, atol=1e-12 * abs(dt)):
        raise ValueError("times must be a uniform increasing grid")
    if not 0.0 <= skip_fraction < 1.0:
        raise ValueError(f"skip_fraction must be in [0, 1), got {skip_fraction:g}")
    start = int(skip_fraction * t.size)
    seg1 = np.asarray(x1, dtype=float)[start:]
    seg2 = np.asarray(x2, dtype=float)[start:]
    f1, a1 = dominant_frequency(seg1, dt)
    f2, a2 = dominant_frequency(seg2, dt)
    resolution = RESOLUTION_GAIN * 2.0 * math.pi / (dt * seg1.size)
    return SyncReport(
        dominant_freq_1=f1,
        dominant_freq_2=f2,
        locked=bool(abs(f1 - f2) <= resolution),
        freq_resolution=resolution,
        peak_amplitudes=(a1, a2),
    )


def window_peak(times, series, center: float, half_width: float) -> float:
    """Max |series| over the window [center - half_width, center + half_width].

    Serves as the oscillation-envelope probe; pick half_width to cover at
    least one period of the slowest component.
    """
    t = np.asarray(times, dtype=float)
    x = np.asarray(series, dtype=float)
    mask = (t >= center - half_width) & (t <= center + half_width)
    if not np.any(mask):
        raise ValueError(
            f"window [{center - half_width:g}, {center + half_width:g}] contains no samples"
        )
    return float(np.max(np.abs(x[mask])))


@dataclass(frozen=True)
class ProbeSettings:
    """Integration controls for one synchronization probe.

    Defaults: run to t_max = 100/omega0 and sample the observables about
    fifty times per bare period, which resolves the dominant peaks to a
    tenth of a DFT bin over the window.
    """

    t_max: float | None = None  # default 100/omega0
    dt_master: float | None = None  # default 0.02/omega0
    n_cap: int = 8
    output_stride: int = 6
    skip_fraction: float = 0.0

    def resolve(self, omega0: float) -> "ProbeSettings":
        t_max = self.t_max if self.t_max is not None else 100.0 / omega0
        dt_master = self.dt_master if self.dt_master is not None else 0.02 / omega0
        return replace(self, t_max=t_max, dt_master=dt_master)


def run_probe(params: ModelParams, init: InitialState, settings: ProbeSettings = ProbeSettings()) -> SyncReport:
    """Full pipeline probe: coefficients -> master equation -> locking verdict."""
    from oscsync.coeffs import solve_coeffs
    from oscsync.fockspace import FockBasis, coherent_state
    from oscsync.master import build_generator, evolve

    st = settings.resolve(params.omega0)
    n_master = max(1, int(round(st.t_max / st.dt_master)))
    traj = solve_coeffs(params, n_master * st.dt_master, dt=st.dt_master / 2.0)
    gen = build_generator(traj)
    phi1, phi2 = to_relative_basis(init)
    rho0 = coherent_state(FockBasis(st.n_cap), phi1, phi2)
    result = evolve(rho0, gen, dt_master=st.dt_master, output_stride=st.output_stride)
    return sync_report(result.times, result.x1, result.x2, skip_fraction=st.skip_fraction)


def locking_threshold(
    params_base: ModelParams,
    alpha_range: tuple[float, float],
    init: InitialState,
    settings: ProbeSettings = ProbeSettings(),
    tol: float = BRACKET_TOL,
) -> float:
    """Smallest coupling at which the oscillators lock, by bisection.

    Bisects SyncReport.locked over alpha until the bracket is narrower
    than tol and returns the midpoint.  A bracket locked at both ends has
    no unlocked phase to resolve (the zero-detuning case) and degenerates
    to the lower endpoint; a bracket unlocked at both ends, or locked only
    at the low end, raises NoBracketError.
    """
    lo, hi = alpha_range
    if not 0.0 <= lo < hi:
        raise ValueError(f"alpha_range must satisfy 0 <= lo < hi, got ({lo:g}, {hi:g})")

    def locked_at(alpha: float) -> bool:
        return run_probe(replace(params_base, alpha=alpha), init, settings).locked

    locked_lo = locked_at(lo)
    locked_hi = locked_at(hi)
    if locked_lo and locked_hi:
        return lo
    if not locked_hi:
        verdict = "locked only at the low end" if locked_lo else "unlocked at both ends"
        raise NoBracketError(
            f"alpha range ({lo:g}, {hi:g}) does not bracket a locking transition: {verdict}"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if locked_at(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
