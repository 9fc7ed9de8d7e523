"""Periodic-grid calculus on closed sample arrays.

All curve and profile data in this package is stored on a uniform grid over
one full period *including* the closing sample, i.e. an array of length N+1
with ``values[0] == values[-1]`` (within tolerance).  The helpers here do
spectral (FFT) and fourth-order finite-difference calculus on such arrays.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "closed_grid",
    "check_closed",
    "close_up",
    "periodic_integral",
    "spectral_derivative",
    "fd_derivative",
    "spectral_antiderivative",
    "trig_interpolator",
    "resample_closed",
]

# Relative magnitude below which Fourier modes are treated as numerical noise
# when differentiating sampled (as opposed to analytically known) data.
NOISE_FLOOR = 1e-13


def closed_grid(period: float, n: int) -> np.ndarray:
    """Uniform grid of n intervals over [0, period], endpoints included."""
    return np.linspace(0.0, float(period), n + 1)


def check_closed(values: np.ndarray, tol: float, what: str = "samples") -> None:
    values = np.asarray(values)
    gap = np.max(np.abs(values[0] - values[-1]))
    if not np.isfinite(gap) or gap > tol:
        raise ValueError(f"{what} are not closed: endpoint gap {gap:.3e} exceeds {tol:.1e}")


def close_up(open_values: np.ndarray) -> np.ndarray:
    """Append a copy of the first sample, turning an open array into a closed one."""
    open_values = np.asarray(open_values)
    return np.concatenate([open_values, open_values[:1]], axis=0)


def periodic_integral(values: np.ndarray, period: float) -> float | np.ndarray:
    """Integral over one period (trapezoid rule, spectrally accurate for smooth data)."""
    values = np.asarray(values, dtype=float)
    return np.mean(values[:-1], axis=0) * period


def _filtered_rfft(open_values: np.ndarray, filter_rel: float | None) -> np.ndarray:
    coef = np.fft.rfft(open_values, axis=0)
    if filter_rel is not None:
        mag = np.abs(coef).reshape(coef.shape[0], -1)
        top = mag.max()
        if top > 0.0:
            significant = np.nonzero((mag > filter_rel * top).any(axis=1))[0]
            cutoff = significant.max() if significant.size else 0
            coef[cutoff + 1 :] = 0.0
    return coef


def spectral_derivative(
    values: np.ndarray,
    period: float,
    order: int = 1,
    filter_rel: float | None = None,
) -> np.ndarray:
    """Derivative of a closed periodic sample array by Fourier differentiation.

    Parameters
    ----------
    values : (N+1,) or (N+1, d) array, closed.
    period : full period of the data.
    order : derivative order >= 1.
    filter_rel : if set, Fourier modes below ``filter_rel * max`` are zeroed
        before differentiating.  Use for data that carries integration noise;
        leave ``None`` for analytically clean data.
    """
    values = np.asarray(values, dtype=float)
    f = values[:-1]
    n = f.shape[0]
    coef = _filtered_rfft(f, filter_rel)
    ik = 2j * np.pi * np.fft.rfftfreq(n, d=1.0 / n) / period
    dcoef = coef * ik.reshape((-1,) + (1,) * (coef.ndim - 1)) ** order
    if order % 2 == 1 and n % 2 == 0:
        dcoef[-1] = 0.0  # Nyquist mode has no well-defined odd derivative
    out = np.fft.irfft(dcoef, n, axis=0)
    return close_up(out)


def fd_derivative(values: np.ndarray, period: float, order: int = 1) -> np.ndarray:
    """Fourth-order central finite differences with periodic wrap-around."""
    values = np.asarray(values, dtype=float)
    f = values[:-1]
    n = f.shape[0]
    if n < 5:
        raise ValueError("need at least 5 samples for fourth-order differences")
    h = period / n
    fp2 = np.roll(f, -2, axis=0)
    fp1 = np.roll(f, -1, axis=0)
    fm1 = np.roll(f, 1, axis=0)
    fm2 = np.roll(f, 2, axis=0)
    if order == 1:
        out = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h)
    elif order == 2:
        out = (-fp2 + 16.0 * fp1 - 30.0 * f + 16.0 * fm1 - fm2) / (12.0 * h * h)
    else:
        raise ValueError("finite differences implemented for order 1 and 2 only")
    return close_up(out)


def spectral_antiderivative(values: np.ndarray, period: float) -> np.ndarray:
    """Antiderivative F with F(0) = 0; the mean contributes a linear ramp."""
    values = np.asarray(values, dtype=float)
    f = values[:-1]
    n = f.shape[0]
    coef = np.fft.rfft(f, axis=0)
    mean = coef[0].real / n
    ik = 2j * np.pi * np.fft.rfftfreq(n, d=1.0 / n) / period
    icoef = np.zeros_like(coef)
    icoef[1:] = coef[1:] / ik[1:].reshape((-1,) + (1,) * (coef.ndim - 1))
    osc = np.fft.irfft(icoef, n, axis=0)
    osc = close_up(osc)
    t = closed_grid(period, n).reshape((-1,) + (1,) * (values.ndim - 1))
    out = mean * t + (osc - osc[0])
    return out.reshape(values.shape)


def trig_interpolator(values: np.ndarray, period: float, filter_rel: float | None = NOISE_FLOOR):
    """Callable evaluating the trigonometric interpolant at arbitrary parameters.

    Only modes above the noise floor are kept, so evaluation cost scales with
    the true bandwidth of the data rather than the grid size.
    """
    values = np.asarray(values, dtype=float)
    f = values[:-1]
    n = f.shape[0]
    coef = _filtered_rfft(f, filter_rel) / n
    mag = np.abs(coef).reshape(coef.shape[0], -1).max(axis=1)
    keep = np.nonzero(mag > 0)[0]
    ks = keep
    cs = coef[keep]
    omega = 2.0 * np.pi / period
    vector_valued = values.ndim > 1

    def evaluate(t):
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        tt = np.atleast_1d(t)
        phases = np.exp(1j * omega * np.outer(tt, ks))
        weights = np.where(ks == 0, 1.0, 2.0)
        if n % 2 == 0:
            weights = np.where(ks == n // 2, 1.0, weights)
        if vector_valued:
            out = np.real(phases[:, :, None] * cs[None, :, :] * weights[None, :, None]).sum(axis=1)
        else:
            out = np.real(phases * cs[None, :] * weights[None, :]).sum(axis=1)
        return out[0] if scalar else out

    return evaluate


def resample_closed(values: np.ndarray, n_new: int) -> np.ndarray:
    """Band-limited resampling of a closed array onto n_new intervals."""
    values = np.asarray(values, dtype=float)
    f = values[:-1]
    n = f.shape[0]
    coef = np.fft.rfft(f, axis=0)
    if n % 2 == 0 and n_new > n:
        coef[-1] *= 0.5  # split the Nyquist mode symmetrically
    out = np.fft.irfft(coef, n_new, axis=0) * (n_new / n)
    return close_up(out)
