#!/usr/bin/env python3
"""Generate a synthetic network trace CSV.

The --mean-ms/--cv pair describes the per-request total (round-trip) transfer
time the trace reproduces under symmetric replay; each row stores half of a
clamped Gaussian draw as the upload time.
"""

import argparse
from pathlib import Path

import numpy as np


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--mean-ms", type=float, default=120.0)
    parser.add_argument("--cv", type=float, default=0.9)
    parser.add_argument("--n", type=int, default=5000)
    parser.add_argument("--seed", type=int, default=1234)
    parser.add_argument("--out", type=Path, required=True)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    totals = np.maximum(0.0, rng.normal(args.mean_ms, args.cv * args.mean_ms, size=args.n))
    lines = ["request_id,t_input_ms"]
    lines += [f"r{i},{float(t) / 2.0!r}" for i, t in enumerate(totals)]
    args.out.write_text("\n".join(lines) + "\n")
    print(f"wrote {args.out} ({args.n} rows, total mean {totals.mean():.1f} ms)")


if __name__ == "__main__":
    main()
