"""Per-round precision, recall and F1 of chosen dependencies during relabel
bootstrapping on synthetic data, written as a plot-ready CSV.

    python3 scripts/iteration_curves.py --rounds 7 --out curves.csv
"""

import argparse
import sys

from srlproj.bootstrap import BootstrapConfig, bootstrap, costs_from_instances, partition
from srlproj.evaluation import emit_iteration_curves
from srlproj.experiment import evaluate_bundle, synthetic_pairs
from srlproj.project import project_corpus
from srlproj.synth import SynthConfig, generate


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=150)
    ap.add_argument("--dev-pairs", type=int, default=100)
    ap.add_argument("--corruption", type=float, default=0.3, help="shift, dropout and noise rate")
    ap.add_argument("--rounds", type=int, default=7)
    ap.add_argument("--epochs", type=int, default=3)
    ap.add_argument("--cost", default="comp_dep")
    ap.add_argument("--variant", default="relabel")
    ap.add_argument("--seed", type=int, default=17)
    ap.add_argument("--keys", nargs="+", default=["VERB+A0", "VERB+A1"])
    ap.add_argument("--out", help="CSV path (default stdout)")
    args = ap.parse_args()

    rate = args.corruption
    cfg = SynthConfig(n_pairs=args.pairs, shift_rate=rate, alignment_dropout=rate, label_noise=rate,
                      seed=args.seed)
    projected = project_corpus(synthetic_pairs(cfg), 0.4, cost_mode=args.cost)
    arg_costs, comp = costs_from_instances(projected.instances)
    data = partition(projected.sentences, projected.aligned_targets(), arg_costs, comp)
    dev = generate(SynthConfig(n_pairs=args.dev_pairs, seed=args.seed + 1)).gold

    reports = []
    config = BootstrapConfig(args.rounds, args.variant, args.cost, args.epochs, args.seed)
    bootstrap(data, config, lambda state: reports.append(evaluate_bundle(state.bundle, dev)))

    keys = [tuple(k.split("+", 1)) for k in args.keys]
    text = emit_iteration_curves(reports, keys)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
