#!/usr/bin/env python3
"""Run the four bundled experiment families with default settings.

Results land in results/ as CSV; traces for the replay study are synthesized
on the fly (a fast university-like profile and a slower, more variable
residential-like profile).
"""

import argparse
from pathlib import Path

import numpy as np

from infersim import (
    ExperimentKind,
    ExperimentSpec,
    PolicyKind,
    default_cloud_models,
    emit_csv,
    gaussian_network,
    run_experiment,
)

REPLAY_POLICIES = (
    PolicyKind.STATIC_LATENCY,
    PolicyKind.STATIC_ACCURACY,
    PolicyKind.PURE_RANDOM,
    PolicyKind.ADAPTIVE,
)


def synthesize_trace(path: Path, mean_ms: float, cv: float, n: int, seed: int) -> Path:
    rng = np.random.default_rng(seed)
    totals = np.maximum(0.0, rng.normal(mean_ms, cv * mean_ms, size=n))
    lines = ["request_id,t_input_ms"]
    lines += [f"r{i},{float(t) / 2.0!r}" for i, t in enumerate(totals)]
    path.write_text("\n".join(lines) + "\n")
    return path


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", type=Path, default=Path("results"))
    parser.add_argument("--n", type=int, default=10_000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)

    cloud = default_cloud_models()
    network = gaussian_network(100.0, 50.0)

    sla_grid = tuple(float(v) for v in range(30, 301, 10))
    runs = [
        (
            "sla_sweep.csv",
            ExperimentSpec(
                kind=ExperimentKind.SLA_SWEEP,
                models=cloud,
                policies=(PolicyKind.ADAPTIVE, PolicyKind.STATIC_GREEDY),
                network=network,
                sla_list_ms=sla_grid,
                n_requests=args.n,
                seed=args.seed,
            ),
        ),
        (
            "cv_sweep.csv",
            ExperimentSpec(
                kind=ExperimentKind.CV_SWEEP,
                models=cloud,
                policies=(PolicyKind.ADAPTIVE,),
                cv_list=tuple(round(0.1 * i, 1) for i in range(11)),
                sla_list_ms=(100.0, 250.0),
                n_requests=args.n,
                seed=args.seed,
            ),
        ),
        (
            "policy_compare.csv",
            ExperimentSpec(
                kind=ExperimentKind.POLICY_COMPARE,
                models=default_cloud_models(include_fictional=True),
                policies=(
                    PolicyKind.ADAPTIVE,
                    PolicyKind.PURE_RANDOM,
                    PolicyKind.RELATED_RANDOM,
                    PolicyKind.RELATED_ACCURATE,
                ),
                network=network,
                sla_list_ms=tuple(float(v) for v in range(30, 401, 10)),
                n_requests=args.n,
                seed=args.seed,
            ),
        ),
    ]
    for profile, mean_ms, cv in (("university", 100.0, 0.74), ("residential", 120.0, 0.9)):
        trace = synthesize_trace(
            args.out_dir / f"{profile}_trace.csv", mean_ms, cv, n=5000, seed=args.seed + 7
        )
        runs.append(
            (
                f"trace_replay_{profile}.csv",
                ExperimentSpec(
                    kind=ExperimentKind.TRACE_REPLAY,
                    models=cloud,
                    policies=REPLAY_POLICIES,
                    trace_path=trace,
                    sla_ms=250.0,
                    duplication=True,
                    n_requests=5000,
                    seed=args.seed,
                ),
            )
        )

    for filename, spec in runs:
        rows = run_experiment(spec).rows
        out = args.out_dir / filename
        emit_csv(rows, out)
        print(f"wrote {out} ({len(rows)} rows)")


if __name__ == "__main__":
    main()
