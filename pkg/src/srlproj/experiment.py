"""Desk-scale synthetic experiments: the model comparison across training regimes and
per-round curves.  Used by ``scripts/`` and the acceptance tests."""

from __future__ import annotations

from dataclasses import dataclass, field

from .align import SentencePair, intersect
from .bootstrap import BootstrapConfig, RoundState, bootstrap, costs_from_instances, partition
from .evaluation import EvalReport, score
from .pipeline import ModelBundle, run_pipeline
from .project import DEFAULT_BLACKLIST, project_corpus
from .synth import SynthConfig, generate

# name -> (variant, cost mode, rounds override)
SETTINGS = {
    "no_bootstrap": ("fill_in", "uniform", 0),
    "fill_in": ("fill_in", "uniform", None),
    "relabel": ("relabel", "uniform", None),
    "relabel_comp": ("relabel", "comp", None),
    "relabel_dep": ("relabel", "dep", None),
    "relabel_comp_dep": ("relabel", "comp_dep", None),
}


@dataclass
class SyntheticRun:
    projected: object
    test_gold: list
    f1: dict = field(default_factory=dict)
    reports: dict = field(default_factory=dict)
    round_reports: dict = field(default_factory=dict)


def synthetic_pairs(cfg: SynthConfig) -> list[SentencePair]:
    corpus = generate(cfg)
    return [SentencePair(s, t, intersect(f, b))
            for s, t, f, b in zip(corpus.source, corpus.target, corpus.forward, corpus.backward)]


def evaluate_bundle(bundle: ModelBundle, gold, blacklist=DEFAULT_BLACKLIST) -> EvalReport:
    pred = [run_pipeline(bundle, s, gold_predicates=True) for s in gold]
    return score(gold, pred, gold_predicate_mode=True, role_blacklist=blacklist)


def run_synthetic(
    seed: int,
    n_pairs: int = 2000,
    shift_rate: float = 0.2,
    alignment_dropout: float = 0.2,
    label_noise: float = 0.2,
    test_pairs: int = 200,
    iterations: int = 3,
    epochs: int = 5,
    threshold: float = 0.4,
    settings=("no_bootstrap", "fill_in", "relabel", "relabel_comp_dep"),
    track_rounds: bool = False,
    vocab_size: int = 200,
) -> SyntheticRun:
    """Generate a corrupted training corpus and a clean held-out set, then
    train and score every requested setting."""
    cfg = SynthConfig(n_pairs=n_pairs, shift_rate=shift_rate, alignment_dropout=alignment_dropout,
                      label_noise=label_noise, seed=seed, vocab_size=vocab_size)
    projected = project_corpus(synthetic_pairs(cfg), threshold)
    arg_costs, comp = costs_from_instances(projected.instances)
    data = partition(projected.sentences, projected.aligned_targets(), arg_costs, comp)
    test_gold = generate(SynthConfig(n_pairs=test_pairs, seed=seed + 100_003, vocab_size=vocab_size)).gold

    run = SyntheticRun(projected, test_gold)
    for name in settings:
        variant, cost, rounds = SETTINGS[name]
        config = BootstrapConfig(iterations if rounds is None else rounds, variant, cost, epochs, seed)
        per_round = []

        def on_round(state: RoundState, per_round=per_round):
            if track_rounds:
                per_round.append(evaluate_bundle(state.bundle, test_gold))

        bundle = bootstrap(data, config, on_round)
        report = evaluate_bundle(bundle, test_gold)
        run.reports[name] = report
        run.f1[name] = report.f1
        if track_rounds:
            run.round_reports[name] = per_round
    return run
