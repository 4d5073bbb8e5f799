"""Envelope extraction and correlation-based stability metrics.

Pipeline, applied per snapshot of a finite-difference run:

  1. locate the local maxima of |u(x, t)| above a threshold epsilon,
     refining each position/magnitude by a parabola through the three
     neighboring samples;
  2. interpolate the maxima with a monotone-preserving piecewise cubic
     (the envelope of the oscillating field);
  3. find the envelope argmax x_max by golden-section refinement;
  4. draw N uniform sample points from [x_max - L, x_max + L] with a
     seeded generator and compute the Pearson correlation between the
     analytic approximation and the numeric field at those points.

The correlation coefficient uses sample (ddof = 1) standard deviations.
Each record's generator is derived from (seed, bits of t), so a series
can be computed in any order, or in parallel, with identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from .analytic import BreatherParams, approximate_breather
from .errors import (
    DegenerateVariance,
    InvalidParam,
    NoExtremaFound,
    TooFewExtrema,
)
from .models import NonlinearityModel
from .solver import Grid1D, RunResult

__all__ = [
    "ExtremaSet",
    "EnvelopeModel",
    "CorrelationRecord",
    "find_extrema",
    "envelope",
    "locate_max",
    "correlation",
    "correlation_timeseries",
    "burst_duration",
    "track_speed",
]


@dataclass(frozen=True)
class ExtremaSet:
    """Refined local maxima of |u(., t)|: positions x and magnitudes amp."""

    t: float
    x: np.ndarray = field(repr=False)
    amp: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class EnvelopeModel:
    """Monotone piecewise-cubic interpolant through extrema knots.

    Evaluation clips coordinates into [x[0], x[-1]] and never returns
    negative values.
    """

    x: np.ndarray = field(repr=False)
    amp: np.ndarray = field(repr=False)
    _interp: PchipInterpolator = field(repr=False)

    def __call__(self, xs):
        clipped = np.clip(np.asarray(xs, dtype=float), self.x[0], self.x[-1])
        return np.maximum(self._interp(clipped), 0.0)


@dataclass(frozen=True)
class CorrelationRecord:
    """One row of the stability time series.

    A gap row (snapshot where no extrema exceeded the threshold) carries
    K_corr = nan and N = 0.
    """

    t: float
    x_max: float
    K_corr: float
    N: int
    seed: int
    L: float

    def __post_init__(self):
        if math.isnan(self.K_corr):
            return
        if abs(self.K_corr) > 1.0:
            raise InvalidParam(f"CorrelationRecord: |K_corr| must be <= 1, got {self.K_corr}")
        if self.N < 2:
            raise InvalidParam(f"CorrelationRecord: N must be >= 2, got {self.N}")

    @property
    def is_gap(self) -> bool:
        return math.isnan(self.K_corr)


def _refined_maxima(pos: np.ndarray, y: np.ndarray, threshold: float):
    """Interior local maxima of y with parabolic sub-grid refinement.

    Plateau points count as maxima; refined positions are deduplicated
    so the result is strictly increasing in pos.
    """
    h = pos[1] - pos[0]
    idx = np.flatnonzero((y[1:-1] >= y[:-2]) & (y[1:-1] >= y[2:]) & (y[1:-1] > threshold)) + 1
    if idx.size == 0:
        return np.empty(0), np.empty(0)
    ym, yl, yr = y[idx], y[idx - 1], y[idx + 1]
    denom = yl - 2.0 * ym + yr
    refinable = denom < 0.0
    p = np.zeros_like(ym)
    np.divide(yl - yr, 2.0 * denom, out=p, where=refinable)
    p[np.abs(p) > 1.0] = 0.0
    xs = pos[idx] + p * h
    amps = ym - 0.25 * (yl - yr) * p
    keep = np.empty(idx.size, dtype=bool)
    keep[0] = True
    keep[1:] = np.diff(xs) > 1e-12 * max(h, 1.0)
    return xs[keep], amps[keep]


def find_extrema(u: np.ndarray, grid: Grid1D, epsilon: float, t: float = 0.0) -> ExtremaSet:
    """Local maxima of |u| above epsilon, parabolically refined."""
    if not epsilon > 0.0:
        raise InvalidParam(f"find_extrema: epsilon must be > 0, got {epsilon}")
    u = np.asarray(u, dtype=float)
    if u.shape != (grid.nx,):
        raise InvalidParam(f"find_extrema: field shape {u.shape} does not match grid ({grid.nx},)")
    xs, amps = _refined_maxima(grid.x, np.abs(u), epsilon)
    if xs.size == 0:
        raise NoExtremaFound(f"find_extrema: no |u| maxima above epsilon = {epsilon:g}")
    return ExtremaSet(t=t, x=xs, amp=amps)


def envelope(extrema: ExtremaSet) -> EnvelopeModel:
    """Monotone-preserving piecewise-cubic envelope through the extrema."""
    if extrema.x.size < 4:
        raise TooFewExtrema(f"envelope: need >= 4 extrema, got {extrema.x.size}")
    interp = PchipInterpolator(extrema.x, extrema.amp)
    return EnvelopeModel(x=extrema.x, amp=extrema.amp, _interp=interp)


_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


def _golden_max(f, a: float, b: float, xtol: float) -> float:
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def locate_max(env: EnvelopeModel) -> float:
    """Envelope argmax, golden-section refined over the bracketing knot interval."""
    k = int(np.argmax(env.amp))
    lo = env.x[max(k - 1, 0)]
    hi = env.x[min(k + 1, env.x.size - 1)]
    if hi <= lo:
        return float(env.x[k])
    return float(_golden_max(lambda x: float(env(x)), float(lo), float(hi), xtol=1e-4))


def _record_rng(seed: int, t: float) -> np.random.Generator:
    # Derive per-record streams from (seed, bits of t): order-independent.
    return np.random.default_rng((int(seed), int(np.float64(t).view(np.uint64))))


def correlation(
    numeric: np.ndarray,
    analytic,
    grid: Grid1D,
    x_max: float,
    L: float,
    N: int,
    seed: int,
    t: float = 0.0,
) -> CorrelationRecord:
    """Pearson correlation between analytic and numeric fields near the pulse.

    Draws N uniform points from [x_max - L, x_max + L]; the analytic
    callable is evaluated exactly, the numeric snapshot by linear
    interpolation.  Sample standard deviations (ddof = 1) normalize the
    covariance.
    """
    if N < 2:
        raise InvalidParam(f"correlation: N must be >= 2, got {N}")
    if not L > 0.0:
        raise InvalidParam(f"correlation: L must be > 0, got {L}")
    if x_max - L < grid.x_min or x_max + L > grid.x_max:
        raise InvalidParam(
            f"correlation: window [{x_max - L:g}, {x_max + L:g}] leaves the grid "
            f"[{grid.x_min:g}, {grid.x_max:g}]"
        )
    numeric = np.asarray(numeric, dtype=float)
    rng = _record_rng(seed, t)
    xs = rng.uniform(x_max - L, x_max + L, size=N)
    a = np.asarray(analytic(xs), dtype=float)
    b = np.interp(xs, grid.x, numeric)
    sig_a = a.std(ddof=1)
    sig_b = b.std(ddof=1)
    if sig_a <= 1e-12 * np.max(np.abs(a), initial=0.0):
        raise DegenerateVariance("correlation: analytic samples are constant over the window")
    if sig_b <= 1e-12 * np.max(np.abs(b), initial=0.0):
        raise DegenerateVariance("correlation: numeric samples are constant over the window")
    cov = np.sum((a - a.mean()) * (b - b.mean())) / (N - 1)
    k = float(np.clip(cov / (sig_a * sig_b), -1.0, 1.0))
    return CorrelationRecord(t=float(t), x_max=float(x_max), K_corr=k, N=N, seed=seed, L=L)


def _gap_record(t: float, seed: int, L: float) -> CorrelationRecord:
    return CorrelationRecord(t=float(t), x_max=math.nan, K_corr=math.nan, N=0, seed=seed, L=L)


def correlation_timeseries(
    result: RunResult,
    params: BreatherParams,
    model: NonlinearityModel,
    L: float = 10.0,
    N: int = 200,
    seed: int = 0,
    epsilon: float | None = None,
    cadence: int = 1,
    analytic=None,
) -> list[CorrelationRecord]:
    """One correlation record per stored snapshot (every cadence-th).

    epsilon defaults to 1% of the initial snapshot's max magnitude.  A
    snapshot with no extrema above epsilon contributes a gap record.
    The reference field defaults to the small-amplitude approximation
    for (params, model); pass analytic(xs, t) to compare against another
    solution, e.g. an exact breather.
    """
    if cadence < 1:
        raise InvalidParam(f"correlation_timeseries: cadence must be >= 1, got {cadence}")
    grid = result.config.grid
    if epsilon is None:
        epsilon = 0.01 * float(np.max(np.abs(result.snapshots[0])))
    if analytic is None:
        def analytic(xs, t):
            return approximate_breather(xs, t, params, model)

    records = []
    for t, u in zip(result.snapshot_times[::cadence], result.snapshots[::cadence]):
        try:
            ext = find_extrema(u, grid, epsilon, t)
        except NoExtremaFound:
            records.append(_gap_record(t, seed, L))
            continue
        x_max = locate_max(envelope(ext))
        records.append(correlation(u, lambda xs, _t=t: analytic(xs, _t), grid, x_max, L, N, seed, t))
    return records


def burst_duration(times: np.ndarray, u: np.ndarray, rel_threshold: float = 0.05) -> float:
    """Width of the interval where the temporal envelope of |u| exceeds
    rel_threshold times its peak.

    The envelope is the monotone cubic through the local maxima of |u(t)|,
    which removes the fast carrier oscillation; raw threshold crossings of
    |u| itself would clip half a carrier period off each end.
    """
    times = np.asarray(times, dtype=float)
    y = np.abs(np.asarray(u, dtype=float))
    peaks_t, peaks_a = _refined_maxima(times, y, threshold=0.0)
    if peaks_t.size < 4:
        raise TooFewExtrema(f"burst_duration: need >= 4 |u| maxima, got {peaks_t.size}")
    env = PchipInterpolator(peaks_t, peaks_a)
    ts = np.linspace(peaks_t[0], peaks_t[-1], 20001)
    e = env(ts)
    thr = rel_threshold * float(np.max(peaks_a))
    i_max = int(np.argmax(e))
    above = e >= thr
    if above[0] or above[-1]:
        raise InvalidParam("burst_duration: series does not bracket the burst below threshold")
    lo = i_max
    while above[lo - 1]:
        lo -= 1
    hi = i_max
    while above[hi + 1]:
        hi += 1

    def cross(i0: int, i1: int) -> float:
        # Linear refine of the threshold crossing between dense samples.
        e0, e1 = e[i0] - thr, e[i1] - thr
        return float(ts[i0] + (ts[i1] - ts[i0]) * e0 / (e0 - e1))

    return cross(hi, hi + 1) - cross(lo - 1, lo)


def track_speed(records: list[CorrelationRecord], t_min: float | None = None, t_max: float | None = None) -> float:
    """Slope of a linear fit to the tracked pulse center x_max(t)."""
    pts = [(r.t, r.x_max) for r in records if not r.is_gap]
    if t_min is not None:
        pts = [p for p in pts if p[0] >= t_min]
    if t_max is not None:
        pts = [p for p in pts if p[0] <= t_max]
    if len(pts) < 2:
        raise InvalidParam("track_speed: need >= 2 tracked records in the window")
    t, xm = np.array(pts).T
    return float(np.polyfit(t, xm, 1)[0])
