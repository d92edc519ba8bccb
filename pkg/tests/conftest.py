"""Shared fixtures and signal builders for the test suite."""

import numpy as np
import pytest

from spoofamp.audio import Waveform


def make_sine(freq_hz=440.0, seconds=1.0, sample_rate=16000, amplitude=0.5, phase=0.0):
    """Pure sinusoid Waveform."""
    t = np.arange(int(round(seconds * sample_rate))) / sample_rate
    return Waveform(amplitude * np.sin(2.0 * np.pi * freq_hz * t + phase), sample_rate)


def make_speechlike(seed=0, seconds=2.0, sample_rate=16000):
    """Amplitude-modulated harmonic tone, a deterministic speech stand-in.

    The modulation makes the signal non-stationary the way speech is, which
    matters for enhancers that estimate noise from quiet frames.
    """
    rng = np.random.default_rng(seed)
    n = int(round(seconds * sample_rate))
    t = np.arange(n) / sample_rate
    f0 = rng.uniform(100.0, 220.0)
    sig = np.zeros(n)
    for k in range(1, 9):
        sig += (1.0 / k) * np.sin(2.0 * np.pi * k * f0 * t + rng.uniform(0, 2 * np.pi))
    envelope = (0.5 + 0.5 * np.sin(2.0 * np.pi * 3.0 * t)) ** 2
    sig *= envelope
    sig *= 0.3 / np.sqrt(np.mean(sig**2))
    return Waveform(sig, sample_rate)


def make_noise_wave(seed=0, n=16000, sample_rate=16000, scale=1.0):
    """Seeded white Gaussian noise Waveform."""
    rng = np.random.default_rng(seed)
    return Waveform(scale * rng.standard_normal(n), sample_rate)


@pytest.fixture
def sine():
    return make_sine


@pytest.fixture
def speechlike():
    return make_speechlike


@pytest.fixture
def noise_wave():
    return make_noise_wave
