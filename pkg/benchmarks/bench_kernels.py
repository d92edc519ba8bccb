"""Timing comparison of the jitted vs pure-numpy kernel paths.

Runs both implementations of overlap_add and harmonic_bank on realistic
workloads, reports best-of-N wall times and the speedup, and verifies the
two paths agree. The jitted path is exercised only when numba imported
cleanly (and SPOOFAMP_NO_NUMBA is not set).

Usage: python benchmarks/bench_kernels.py [--repeats N] [--seconds S]
"""

import argparse
import sys
import time

import numpy as np

from spoofamp import _kernels


def _best_of(repeats, fn, *args):
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def bench_overlap_add(repeats, seconds):
    """STFT-synthesis shape: hann-windowed 512/256 frames of a long signal."""
    sr = 16000
    n = int(seconds * sr)
    hop, win = 256, 512
    n_frames = (n - win) // hop + 1
    rng = np.random.default_rng(0)
    frames = rng.standard_normal((n_frames, win))
    args = (frames, hop, n)
    rows = []
    t_np, ref = _best_of(repeats, _kernels._overlap_add_numpy, *args)
    rows.append(("numpy", t_np))
    if _kernels.NUMBA_AVAILABLE:
        _kernels._overlap_add_jit(frames[:2], hop, 3 * hop)  # compile outside timing
        t_jit, out = _best_of(repeats, _kernels._overlap_add_jit, *args)
        rows.append(("numba", t_jit))
        assert np.array_equal(out, ref), "overlap_add paths disagree"
    return f"overlap_add ({n_frames} frames of {win})", rows


def bench_harmonic_bank(repeats, seconds):
    """Corpus-synthesis shape: 30 harmonics with vibrato."""
    sr = 16000
    n = int(seconds * sr)
    rng = np.random.default_rng(1)
    amps = np.ascontiguousarray(rng.uniform(0.01, 1.0, 30))
    phases = np.ascontiguousarray(rng.uniform(0.0, 2 * np.pi, 30))
    args = (n, float(sr), 140.0, 5.0, 2.0, amps, phases)
    rows = []
    t_np, ref = _best_of(repeats, _kernels._harmonic_bank_numpy, *args)
    rows.append(("numpy", t_np))
    if _kernels.NUMBA_AVAILABLE:
        _kernels._harmonic_bank_jit(16, float(sr), 140.0, 5.0, 2.0, amps, phases)
        t_jit, out = _best_of(repeats, _kernels._harmonic_bank_jit, *args)
        rows.append(("numba", t_jit))
        assert np.allclose(out, ref, atol=1e-9), "harmonic_bank paths disagree"
    return f"harmonic_bank ({n} samples, 30 harmonics)", rows


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--repeats", type=int, default=5, help="best-of-N timing")
    parser.add_argument(
        "--seconds", type=float, default=30.0, help="audio seconds per workload"
    )
    args = parser.parse_args(argv)

    if not _kernels.NUMBA_AVAILABLE:
        print("numba path unavailable (not installed or SPOOFAMP_NO_NUMBA set); "
              "timing the numpy fallback only")
    for bench in (bench_overlap_add, bench_harmonic_bank):
        title, rows = bench(args.repeats, args.seconds)
        print(f"\n{title}")
        for name, t in rows:
            print(f"  {name:<6} {t * 1e3:9.2f} ms")
        if len(rows) == 2:
            print(f"  speedup {rows[0][1] / rows[1][1]:.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
