"""Benchmark the compiled kernels against the pure Python fallback.

Runs each hot kernel on a random trace with both backends and prints a
speedup table. Sizes are chosen so the pure fallback finishes in seconds;
use --scale to grow or shrink every workload proportionally.
"""

from __future__ import annotations

import argparse
import random
import time
from array import array

from locmetrics import _pykernels
from locmetrics.trace import Trace, per_datum, reuse_distance_sequence

try:
    from locmetrics import _ckernels
except ImportError:
    _ckernels = None


def _random_trace(rng: random.Random, n: int, m: int) -> Trace:
    return Trace.from_ids(rng.randrange(1, m + 1) for _ in range(n))


def _schedule_args(t: Trace):
    """Flatten per-datum reuse-distance profiles into the kernel's arrays."""
    profiles = sorted(
        per_datum(reuse_distance_sequence(t), t), key=lambda p: p.first
    )
    firsts = array("q", (p.first for p in profiles))
    reuses = array("q", (int(r) for p in profiles for r in p.reuses))
    offsets = array("q", [0])
    for p in profiles:
        offsets.append(offsets[-1] + len(p.reuses))
    return firsts, reuses, offsets, t.n, t.m, False


def _time_call(fn, args, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scale", type=float, default=1.0, help="workload multiplier")
    parser.add_argument("--repeat", type=int, default=3, help="timing repetitions")
    parser.add_argument("--seed", type=int, default=20260823)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    scale = args.scale

    workloads = []
    for name, n, m in (
        ("reuse_times", 500_000, 1_000),
        ("reuse_distances", 200_000, 1_000),
        ("lru_distances", 20_000, 500),
        ("window_totals", 3_000, 100),
        ("pd_rd_schedule", 100_000, 500),
    ):
        n = max(16, int(n * scale))
        m = max(4, min(n, int(m * scale) if m * scale >= 4 else m))
        t = _random_trace(rng, n, m)
        ids = array("q", t.accesses)
        if name == "pd_rd_schedule":
            call_args = _schedule_args(t)
        else:
            call_args = (ids, t.n, t.m)
        workloads.append((name, t.n, call_args))

    print(f"{'kernel':<18} {'n':>8} {'compiled':>12} {'pure':>12} {'speedup':>9}")
    for name, n, call_args in workloads:
        pure = _time_call(getattr(_pykernels, name), call_args, args.repeat)
        if _ckernels is None:
            print(f"{name:<18} {n:>8} {'missing':>12} {pure:>11.4f}s {'-':>9}")
            continue
        compiled = _time_call(getattr(_ckernels, name), call_args, args.repeat)
        ratio = pure / compiled if compiled > 0 else float("inf")
        print(
            f"{name:<18} {n:>8} {compiled:>11.4f}s {pure:>11.4f}s {ratio:>8.1f}x"
        )
    if _ckernels is None:
        print("compiled extension not built; showing pure timings only")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
