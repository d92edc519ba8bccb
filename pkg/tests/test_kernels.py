"""Accelerated kernels against their reference formulas, and the env-flag
fallback path."""

import json
import os
import subprocess
import sys
import textwrap

import numpy as np

from spoofamp import _kernels


def _overlap_add_reference(frames, hop, length):
    """Direct per-sample accumulation, written independently of the kernel."""
    out = np.zeros(length)
    for i, frame in enumerate(frames):
        for j, v in enumerate(frame):
            pos = i * hop + j
            if pos < length:
                out[pos] += v
    return out


def _harmonic_bank_reference(n, sr, f0, vib_rate, vib_depth, amps, phases):
    """Direct evaluation of the harmonic sum with vibrato phase integral."""
    t = np.arange(n) / sr
    if vib_rate > 0:
        base = f0 * t + vib_depth / (2 * np.pi * vib_rate) * np.sin(2 * np.pi * vib_rate * t)
    else:
        base = f0 * t
    out = np.zeros(n)
    for k, (a, p) in enumerate(zip(amps, phases), start=1):
        out += a * np.sin(2 * np.pi * k * base + p)
    return out


class TestOverlapAdd:
    def test_matches_reference(self):
        rng = np.random.default_rng(10)
        for _ in range(20):
            n_frames = int(rng.integers(1, 12))
            win = int(rng.choice([8, 16, 32]))
            hop = win // 2
            length = int(rng.integers(win, n_frames * hop + win + 5))
            frames = rng.standard_normal((n_frames, win))
            got = _kernels.overlap_add(frames, hop, length)
            want = _overlap_add_reference(frames, hop, length)
            assert got.shape == (length,)
            assert np.allclose(got, want, rtol=0, atol=1e-12)

    def test_truncates_past_buffer(self):
        frames = np.ones((4, 8))
        out = _kernels.overlap_add(frames, 4, 10)
        assert out.shape == (10,)
        # positions beyond length are dropped, not wrapped
        assert out[9] == _overlap_add_reference(np.ones((4, 8)), 4, 10)[9]

    def test_numpy_path_agrees_exactly(self):
        rng = np.random.default_rng(11)
        frames = rng.standard_normal((9, 32))
        a = _kernels.overlap_add(frames, 16, 9 * 16 + 16)
        b = _kernels._overlap_add_numpy(frames, 16, 9 * 16 + 16)
        assert np.array_equal(a, b)


class TestHarmonicBank:
    def test_matches_reference(self):
        rng = np.random.default_rng(12)
        for _ in range(10):
            n = int(rng.integers(100, 2000))
            f0 = float(rng.uniform(80, 300))
            vib_rate = float(rng.choice([0.0, 5.0]))
            vib_depth = float(rng.uniform(0.0, 3.0))
            n_harm = int(rng.integers(1, 12))
            amps = rng.uniform(0.1, 1.0, n_harm)
            phases = rng.uniform(0, 2 * np.pi, n_harm)
            got = _kernels.harmonic_bank(n, 16000, f0, vib_rate, vib_depth, amps, phases)
            want = _harmonic_bank_reference(n, 16000, f0, vib_rate, vib_depth, amps, phases)
            assert np.allclose(got, want, rtol=0, atol=1e-9)

    def test_single_harmonic_is_sine(self):
        n = 1600
        got = _kernels.harmonic_bank(n, 16000, 200.0, 0.0, 0.0, np.array([1.0]), np.array([0.0]))
        t = np.arange(n) / 16000
        assert np.allclose(got, np.sin(2 * np.pi * 200.0 * t), atol=1e-9)

    def test_numpy_path_agrees(self):
        rng = np.random.default_rng(13)
        amps = rng.uniform(0.1, 1.0, 6)
        phases = rng.uniform(0, 2 * np.pi, 6)
        a = _kernels.harmonic_bank(4000, 16000, 150.0, 5.5, 2.0, amps, phases)
        b = _kernels._harmonic_bank_numpy(4000, 16000, 150.0, 5.5, 2.0, amps, phases)
        assert np.allclose(a, b, rtol=0, atol=1e-9)


class TestEnvFlagFallback:
    def test_no_numba_env_selects_numpy_path(self, tmp_path):
        """A subprocess with SPOOFAMP_NO_NUMBA=1 must run on the numpy path
        and agree with this process numerically."""
        rng = np.random.default_rng(14)
        frames = rng.standard_normal((6, 64))
        amps = rng.uniform(0.1, 1.0, 8)
        phases = rng.uniform(0, 2 * np.pi, 8)
        here_oa = _kernels.overlap_add(frames, 32, 6 * 32 + 32)
        here_hb = _kernels.harmonic_bank(2000, 16000, 120.0, 4.5, 1.5, amps, phases)
        data_path = tmp_path / "in.npz"
        out_path = tmp_path / "out.npz"
        np.savez(data_path, frames=frames, amps=amps, phases=phases)
        script = textwrap.dedent(
            """
            import json, sys
            import numpy as np
            from spoofamp import _kernels
            data = np.load(sys.argv[1])
            oa = _kernels.overlap_add(data["frames"], 32, 6 * 32 + 32)
            hb = _kernels.harmonic_bank(2000, 16000, 120.0, 4.5, 1.5,
                                        data["amps"], data["phases"])
            np.savez(sys.argv[2], oa=oa, hb=hb)
            print(json.dumps({"numba": _kernels.NUMBA_AVAILABLE}))
            """
        )
        env = dict(os.environ, SPOOFAMP_NO_NUMBA="1")
        proc = subprocess.run(
            [sys.executable, "-c", script, str(data_path), str(out_path)],
            capture_output=True, text=True, env=env, timeout=120,
        )
        assert proc.returncode == 0, proc.stderr
        assert json.loads(proc.stdout.strip().splitlines()[-1])["numba"] is False
        sub = np.load(out_path)
        assert np.array_equal(sub["oa"], here_oa)
        assert np.allclose(sub["hb"], here_hb, rtol=0, atol=1e-9)

    def test_flag_zero_means_enabled(self, tmp_path):
        script = "from spoofamp import _kernels; print(_kernels._disabled)"
        env = dict(os.environ, SPOOFAMP_NO_NUMBA="0")
        proc = subprocess.run(
            [sys.executable, "-c", script], capture_output=True, text=True, env=env,
            timeout=120,
        )
        assert proc.returncode == 0, proc.stderr
        assert proc.stdout.strip() == "False"
