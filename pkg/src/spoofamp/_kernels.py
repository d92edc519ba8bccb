"""Hot inner loops with optional numba acceleration.

Two kernels live here: overlap-add accumulation (STFT synthesis) and harmonic
bank synthesis (synthetic corpus generation). Each has a pure-numpy fallback
with the same per-element accumulation order, so both paths agree bit-for-bit
on overlap_add and to rounding noise on harmonic_bank (libm vs simd sin).

Set SPOOFAMP_NO_NUMBA=1 to force the numpy path even when numba is installed.
"""

import math
import os

import numpy as np

TWO_PI = 2.0 * math.pi

_disabled = os.environ.get("SPOOFAMP_NO_NUMBA", "") not in ("", "0")
try:
    if _disabled:
        raise ImportError("numba disabled via SPOOFAMP_NO_NUMBA")
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:
    NUMBA_AVAILABLE = False


def _overlap_add_numpy(frames, hop, length):
    frames = np.ascontiguousarray(frames, dtype=np.float64)
    out = np.zeros(length, dtype=np.float64)
    n_frames, win = frames.shape
    for i in range(n_frames):
        start = i * hop
        stop = min(start + win, length)
        if start >= length:
            break
        out[start:stop] += frames[i, : stop - start]
    return out


def _harmonic_bank_numpy(n_samples, sample_rate, f0, vib_rate, vib_depth, amps, phases):
    t = np.arange(n_samples, dtype=np.float64) / sample_rate
    if vib_rate > 0.0:
        base = f0 * t + vib_depth * np.sin(TWO_PI * vib_rate * t) / (TWO_PI * vib_rate)
    else:
        base = f0 * t
    out = np.zeros(n_samples, dtype=np.float64)
    # accumulate harmonics sequentially to match the jitted loop order
    for k in range(len(amps)):
        out += amps[k] * np.sin(TWO_PI * (k + 1) * base + phases[k])
    return out


if NUMBA_AVAILABLE:

    @njit(cache=True)
    def _overlap_add_jit(frames, hop, length):
        out = np.zeros(length, dtype=np.float64)
        n_frames, win = frames.shape
        for i in range(n_frames):
            start = i * hop
            if start >= length:
                break
            stop = min(start + win, length)
            for j in range(stop - start):
                out[start + j] += frames[i, j]
        return out

    @njit(cache=True)
    def _harmonic_bank_jit(n_samples, sample_rate, f0, vib_rate, vib_depth, amps, phases):
        out = np.zeros(n_samples, dtype=np.float64)
        n_harm = len(amps)
        for j in range(n_samples):
            t = j / sample_rate
            if vib_rate > 0.0:
                base = f0 * t + vib_depth * math.sin(TWO_PI * vib_rate * t) / (TWO_PI * vib_rate)
            else:
                base = f0 * t
            acc = 0.0
            for k in range(n_harm):
                acc += amps[k] * math.sin(TWO_PI * (k + 1) * base + phases[k])
            out[j] = acc
        return out

    def overlap_add(frames, hop, length):
        return _overlap_add_jit(np.ascontiguousarray(frames, dtype=np.float64), hop, length)

    def harmonic_bank(n_samples, sample_rate, f0, vib_rate, vib_depth, amps, phases):
        return _harmonic_bank_jit(
            n_samples,
            float(sample_rate),
            float(f0),
            float(vib_rate),
            float(vib_depth),
            np.ascontiguousarray(amps, dtype=np.float64),
            np.ascontiguousarray(phases, dtype=np.float64),
        )

else:

    def overlap_add(frames, hop, length):
        return _overlap_add_numpy(frames, hop, length)

    def harmonic_bank(n_samples, sample_rate, f0, vib_rate, vib_depth, amps, phases):
        return _harmonic_bank_numpy(
            n_samples,
            float(sample_rate),
            float(f0),
            float(vib_rate),
            float(vib_depth),
            np.asarray(amps, dtype=np.float64),
            np.asarray(phases, dtype=np.float64),
        )


overlap_add.__doc__ = """Sum hop-shifted frames into a length-sample buffer.

Parameters
----------
frames : ndarray, shape (n_frames, window_length)
    Time-domain frames to accumulate.
hop : int
    Shift in samples between consecutive frames.
length : int
    Output buffer length; frames extending past it are truncated.

Returns
-------
ndarray of float64, shape (length,)
"""

harmonic_bank.__doc__ = """Sum of sinusoidal harmonics with optional vibrato.

Harmonic k (1-based) contributes amps[k-1] * sin(2*pi*k*base(t) + phases[k-1])
where base(t) integrates an instantaneous frequency of
f0 + vib_depth*cos(2*pi*vib_rate*t).

Returns
-------
ndarray of float64, shape (n_samples,)
"""
