"""Gaussian noise with a prescribed power spectral density, and its estimators.

Traces are synthesized in the frequency domain: each rfft bin receives an
independent complex Gaussian amplitude whose variance matches the target
spectrum, the DC bin is zeroed, and an inverse FFT returns the real trace.
The synthesized block is at least `pad_factor` times longer than requested
(rounded up to a fast FFT length) and only the head is kept, which pushes the wrap-around correlations of the periodic
construction out of the returned window.

PSD convention (shared with :func:`qlangevin.spectral.eval_force_psd`): the
periodogram ``dt / n |sum_j F_j exp(-i w_k t_j)|^2`` estimates P_F(w_k), so a
unit-variance white trace has flat PSD ``dt`` and
``var F = (1/pi) int_0^{pi/dt} P_F dw``.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.fft import next_fast_len

from .exceptions import DomainError
from .spectral import BathSpec, eval_force_psd

__all__ = [
    "ResolutionWarning",
    "NoiseTrace",
    "PsdEstimate",
    "GaussianityStats",
    "derive_rng",
    "derive_seed",
    "synthesize_batch",
    "synthesize_trace",
    "estimate_psd",
    "autocorrelation",
    "gaussianity_stats",
    "write_trace_csv",
    "write_psd_csv",
]


class ResolutionWarning(UserWarning):
    """Frequency grid too coarse to resolve the narrowest spectral feature."""


def derive_seed(master_seed: int, *key: int) -> int:
    """64-bit seed for substream `key` of `master_seed`."""
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def derive_rng(master_seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(
        master_seed, spawn_key=tuple(int(k) for k in key))))


@dataclass(frozen=True, eq=False)
class NoiseTrace:
    dt: float
    samples: np.ndarray
    seed: int
    psd_id: str = ""

    def __post_init__(self):
        if not self.dt > 0:
            raise DomainError("dt must be > 0")
        if np.ndim(self.samples) != 1 or len(self.samples) < 2:
            raise DomainError("a trace needs at least two samples")

    @property
    def n(self):
        return len(self.samples)

    @property
    def t(self):
        return self.dt * np.arange(self.n)


@dataclass(frozen=True, eq=False)
class PsdEstimate:
    freq_grid: np.ndarray
    psd_values: np.ndarray
    n_segments: int
    stderr: np.ndarray | None = None


@dataclass(frozen=True)
class GaussianityStats:
    skewness: float
    excess_kurtosis: float
    mean: float
    variance: float
    n_samples: int
    degenerate: bool


def _psd_on_grid(psd, dt, n_fft):
    w = 2.0 * math.pi * np.fft.rfftfreq(n_fft, d=dt)
    target = np.asarray(psd(w), dtype=float)
    if target.shape != w.shape:
        target = np.broadcast_to(target, w.shape).copy()
    if np.any(~np.isfinite(target[1:])) or np.any(target < 0):
        raise DomainError("target PSD must be finite and nonnegative on (0, pi/dt]")
    target[0] = 0.0
    return w, target


def synthesize_batch(psd, dt, n, rngs, pad_factor=2):
    """Synthesize one trace per generator in `rngs`.

    Parameters
    ----------
    psd : callable
        Vectorized target P_F(w) on w >= 0.
    dt : float
        Sample spacing.
    n : int
        Samples per returned trace.
    rngs : sequence of numpy Generators
        One per trace; the draws of trace k depend on ``rngs[k]`` only.
    pad_factor : int
        Length multiplier of the synthesized periodic block.

    Returns
    -------
    ndarray, shape (len(rngs), n)
    """
    if not dt > 0 or n < 2:
        raise DomainError("need dt > 0 and n >= 2")
    n_fft = next_fast_len(int(pad_factor) * int(n), real=True)
    n_fft += n_fft % 2
    _, target = _psd_on_grid(psd, dt, n_fft)
    m = target.size
    amp = np.sqrt(n_fft * target / dt)
    out = np.empty((len(rngs), n))
    if not np.any(amp):
        out[:] = 0.0
        return out
    spec = np.empty((len(rngs), m), dtype=complex)
    for k, rng in enumerate(rngs):
        z = rng.standard_normal((2, m))
        spec[k].real = z[0]
        spec[k].imag = z[1]
    spec *= amp / math.sqrt(2.0)
    # Nyquist bin of an even-length real signal is real
    spec[:, -1] = math.sqrt(2.0) * spec[:, -1].real
    out[:] = np.fft.irfft(spec, n=n_fft, axis=-1)[:, :n]
    return out


def _check_resolution(b: BathSpec, dt, n_fft):
    width = b.j.feature_width()
    d_omega = 2.0 * math.pi / (n_fft * dt)
    if width is not None and not b.j.is_zero and d_omega > width:
        warnings.warn(f"frequency spacing {d_omega:.3g} exceeds spectral feature width "
                      f"{width:.3g}; increase n", ResolutionWarning, stacklevel=3)


def synthesize_trace(b: BathSpec, dt: float, n: int, seed: int, pad_factor: int = 2) -> NoiseTrace:
    """One stationary Gaussian realization with PSD ``eval_force_psd(b, .)``.

    Deterministic in (b, dt, n, seed, pad_factor).
    """
    _check_resolution(b, dt, pad_factor * n)
    rng = np.random.Generator(np.random.PCG64(seed))
    samples = synthesize_batch(lambda w: eval_force_psd(b, w), dt, n, [rng], pad_factor)[0]
    return NoiseTrace(dt, samples, seed, b.describe())


def _as_matrix(traces):
    if isinstance(traces, NoiseTrace):
        traces = [traces]
    traces = list(traces)
    if not traces:
        raise DomainError("no traces given")
    dt, n = traces[0].dt, traces[0].n
    if any(tr.dt != dt or tr.n != n for tr in traces):
        raise DomainError("all traces must share dt and length")
    return dt, np.stack([tr.samples for tr in traces])


def estimate_psd(traces, nperseg=None, window="hann") -> PsdEstimate:
    """Segment-averaged periodogram of one or more traces.

    Traces are cut into non-overlapping segments of `nperseg` samples
    (default: whole trace), each segment is windowed and its periodogram
    normalized by the window power, and all segments are averaged.
    """
    dt, data = _as_matrix(traces)
    n = data.shape[1]
    nperseg = n if nperseg is None else int(nperseg)
    if not 2 <= nperseg <= n:
        raise DomainError("nperseg must lie in [2, n]")
    n_seg_per = n // nperseg
    segs = data[:, : n_seg_per * nperseg].reshape(-1, nperseg)
    if window == "hann":
        win = np.hanning(nperseg + 1)[:-1]
    elif window in (None, "boxcar"):
        win = np.ones(nperseg)
    else:
        raise DomainError(f"unknown window {window!r}")
    scale = dt / np.sum(win**2)
    pg = scale * np.abs(np.fft.rfft(segs * win, axis=-1)) ** 2
    w = 2.0 * math.pi * np.fft.rfftfreq(nperseg, d=dt)
    mean = pg.mean(axis=0)
    se = pg.std(axis=0, ddof=1) / math.sqrt(len(pg)) if len(pg) > 1 else None
    return PsdEstimate(w, mean, len(pg), se)


def autocorrelation(trace: NoiseTrace, max_lag: int) -> np.ndarray:
    """Biased estimator sum_t F(t) F(t + k) / n for k = 0..max_lag (about zero mean)."""
    f = np.asarray(trace.samples, dtype=float)
    n = f.size
    if not 0 <= max_lag < n:
        raise DomainError("max_lag must lie in [0, n)")
    size = 1 << int(math.ceil(math.log2(2 * n)))
    spec = np.fft.rfft(f, size)
    acf = np.fft.irfft(spec * np.conj(spec), size)[: max_lag + 1]
    return acf / n


def gaussianity_stats(traces) -> GaussianityStats:
    """Pooled standardized third and fourth moments of all samples."""
    _, data = _as_matrix(traces)
    x = data.ravel()
    mean = float(np.mean(x))
    d = x - mean
    var = float(np.mean(d * d))
    if var == 0.0:
        return GaussianityStats(math.nan, math.nan, mean, 0.0, x.size, True)
    skew = float(np.mean(d**3) / var**1.5)
    kurt = float(np.mean(d**4) / var**2 - 3.0)
    return GaussianityStats(skew, kurt, mean, var, x.size, False)


def write_trace_csv(path, trace: NoiseTrace, header=()):
    with open(path, "w", newline="") as fh:
        for line in header:
            fh.write(f"# {line}\n")
        w = csv.writer(fh)
        w.writerow(["t", "F"])
        for t, f in zip(trace.t, trace.samples):
            w.writerow([repr(float(t)), repr(float(f))])


def write_psd_csv(path, est: PsdEstimate, target, header=()):
    with open(path, "w", newline="") as fh:
        for line in header:
            fh.write(f"# {line}\n")
        w = csv.writer(fh)
        w.writerow(["omega", "P_F", "P_target"])
        for om, p, q in zip(est.freq_grid, est.psd_values, target):
            w.writerow([repr(float(om)), repr(float(p)), repr(float(q))])
