"""Compare the training regimes on corrupted synthetic data.

Prints per-seed and median held-out labelled F1 for each setting, in the
row order of the model comparison table.

    python3 scripts/trend_table.py --seeds 5 --pairs 2000
"""

import argparse
import statistics
import time

from srlproj.experiment import SETTINGS, run_synthetic


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--pairs", type=int, default=2000)
    ap.add_argument("--shift", type=float, default=0.2)
    ap.add_argument("--dropout", type=float, default=0.2)
    ap.add_argument("--noise", type=float, default=0.2)
    ap.add_argument("--rounds", type=int, default=3)
    ap.add_argument("--epochs", type=int, default=5)
    ap.add_argument("--settings", nargs="+", default=list(SETTINGS), choices=list(SETTINGS))
    args = ap.parse_args()

    scores = {name: [] for name in args.settings}
    start = time.perf_counter()
    for seed in range(args.seeds):
        run = run_synthetic(seed, n_pairs=args.pairs, shift_rate=args.shift, alignment_dropout=args.dropout,
                            label_noise=args.noise, iterations=args.rounds, epochs=args.epochs,
                            settings=args.settings)
        for name in args.settings:
            scores[name].append(run.f1[name])
        print(f"seed {seed}: " + "  ".join(f"{n}={run.f1[n] * 100:.2f}" for n in args.settings), flush=True)

    print()
    print(f"{'setting':<20} {'median F1':>10} {'min':>8} {'max':>8}")
    for name in args.settings:
        v = scores[name]
        print(f"{name:<20} {statistics.median(v) * 100:10.2f} {min(v) * 100:8.2f} {max(v) * 100:8.2f}")
    print(f"\n{time.perf_counter() - start:.0f}s")


if __name__ == "__main__":
    main()
