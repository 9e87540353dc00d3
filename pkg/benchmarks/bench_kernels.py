#!/usr/bin/env python3
"""Compare the numba and numpy kernel backends.

Runs itself in a subprocess per backend (the choice is fixed at import
time via ASQ_BACKEND) and prints a small table.

    python3 benchmarks/bench_kernels.py
"""
import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def build_inputs():
    rng = np.random.default_rng(42)
    # plane masks: 3000 subspace membership masks over 256 bits
    masks = rng.integers(0, 2**64, size=(3000, 4), dtype=np.uint64)
    masks[:, 0] |= 1  # the zero vector is in every subspace
    # a 512-element group table via F_2^9 addition
    x = np.arange(512)
    mul = (x[:, None] ^ x[None, :]).astype(np.int16)
    inv = x.astype(np.int16)
    delta = np.asarray(rng.choice(np.arange(1, 512), 90, replace=False),
                       dtype=np.int64)
    return masks, mul, inv, delta


def run_backend(repeats):
    from asq import _kernels

    masks, mul, inv, delta = build_inputs()
    out = {"backend": _kernels.BACKEND}
    # warm-up compiles the numba path
    _kernels.pairwise_disjoint(masks[:50])
    _kernels.difference_counts(mul, inv, delta[:10])
    for name, fn in [
        ("pairwise_disjoint", lambda: _kernels.pairwise_disjoint(masks)),
        ("difference_counts", lambda: _kernels.difference_counts(mul, inv, delta)),
    ]:
        best = min(
            (lambda t0=time.perf_counter(): (fn(), time.perf_counter() - t0)[1])()
            for _ in range(repeats)
        )
        out[name] = best
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.child:
        json.dump(run_backend(args.repeats), sys.stdout)
        return
    rows = []
    for backend in ("numba", "numpy"):
        env = dict(os.environ, ASQ_BACKEND=backend)
        proc = subprocess.run(
            [sys.executable, __file__, "--child", "--repeats", str(args.repeats)],
            env=env, capture_output=True, text=True,
        )
        if proc.returncode != 0:
            print(f"{backend}: failed\n{proc.stderr}", file=sys.stderr)
            continue
        rows.append(json.loads(proc.stdout))
    if not rows:
        sys.exit(1)
    kernels = ["pairwise_disjoint", "difference_counts"]
    print(f"{'kernel':<20}" + "".join(f"{r['backend']:>12}" for r in rows)
          + ("     speedup" if len(rows) == 2 else ""))
    for k in kernels:
        line = f"{k:<20}" + "".join(f"{r[k] * 1e3:>10.2f}ms" for r in rows)
        if len(rows) == 2:
            line += f"{rows[1][k] / rows[0][k]:>11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
