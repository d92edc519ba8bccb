"""Short-time Fourier transform with exact overlap-add reconstruction.

A periodic Hann window at 50% overlap sums to exactly 1.0 at every sample
position, so analysis-windowed frames reconstruct the input by plain
overlap-add with no synthesis window. Both edges are zero padded by
window_length - hop so the first and last samples sit under a full window sum.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConfigError, DegenerateSignalError


@dataclass(frozen=True)
class StftConfig:
    """Analysis parameters. Only the Hann window is supported, and the hop
    must be half the window so overlap-add reconstruction is exact."""

    window_length: int = 512
    hop: int = 256
    window: str = "hann"

    def __post_init__(self):
        if self.window != "hann":
            raise ConfigError(f"unsupported window {self.window!r}; only 'hann'")
        if not (0 < self.hop <= self.window_length):
            raise ConfigError(
                f"hop must satisfy 0 < hop <= window_length, got {self.hop}/{self.window_length}"
            )
        if self.window_length % 2 != 0 or self.hop * 2 != self.window_length:
            raise ConfigError(
                "perfect reconstruction requires hop = window_length / 2 "
                f"(got window {self.window_length}, hop {self.hop})"
            )


def hann_periodic(n):
    """Periodic Hann window: 0.5 - 0.5*cos(2*pi*k/n); adjacent half-overlapped
    copies sum to exactly 1."""
    k = np.arange(n, dtype=np.float64)
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * k / n)


def _frame_count(n_samples, cfg):
    pad = cfg.window_length - cfg.hop
    # cover pad + signal + pad so every real sample has full window coverage
    covered = pad + n_samples + pad
    return max(1, -(-(covered - cfg.window_length) // cfg.hop) + 1)


def stft(samples, cfg):
    """Analyze a 1-D float array into windowed rfft frames.

    Returns
    -------
    ndarray of complex128, shape (n_frames, window_length // 2 + 1)
    """
    x = np.asarray(samples, dtype=np.float64)
    if x.ndim != 1 or x.size < 1:
        raise DegenerateSignalError("stft input must be a non-empty 1-D array")
    pad = cfg.window_length - cfg.hop
    n_frames = _frame_count(x.size, cfg)
    total = cfg.window_length + (n_frames - 1) * cfg.hop
    buf = np.zeros(total, dtype=np.float64)
    buf[pad : pad + x.size] = x
    window = hann_periodic(cfg.window_length)
    idx = np.arange(cfg.window_length)[None, :] + cfg.hop * np.arange(n_frames)[:, None]
    frames = buf[idx] * window[None, :]
    return np.fft.rfft(frames, axis=1)


def istft(spectra, cfg, n_samples):
    """Invert rfft frames back to n_samples via overlap-add.

    Exact inverse of stft for unmodified spectra (up to FFT round-off); for
    modified spectra this is the standard analysis-window-only resynthesis.
    """
    frames = np.fft.irfft(spectra, n=cfg.window_length, axis=1)
    pad = cfg.window_length - cfg.hop
    total = cfg.window_length + (spectra.shape[0] - 1) * cfg.hop
    full = _kernels.overlap_add(frames, cfg.hop, total)
    return full[pad : pad + n_samples]
