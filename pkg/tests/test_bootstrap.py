import csv
import importlib
import statistics

import pytest

from conftest import urge_pair, german_sentence
from srlproj.bootstrap import (
    BootstrapConfig,
    PartitionedData,
    Variant,
    bootstrap,
    checkpoint_metrics,
    costs_from_instances,
    costs_from_sidecar,
    partition,
)
from srlproj.conll import PredicateFrame
from srlproj.experiment import run_synthetic, synthetic_pairs
from srlproj.features import Stage
from srlproj.perceptron import LinearModel
from srlproj.pipeline import IS_ARG, NOT_ARG, ModelBundle, dumps_bundle
from srlproj.project import CostMode, project_corpus, read_cost_sidecar, write_cost_sidecar
from srlproj.synth import SynthConfig

# the package re-exports the function under the module's name
bs = importlib.import_module("srlproj.bootstrap")


def urge_data():
    result = project_corpus([urge_pair()], 0.4)
    arg_costs, comp = costs_from_instances(result.instances)
    return result, partition(result.sentences, result.aligned_targets(), arg_costs, comp)


def synth_data(n=150, seed=0, **kw):
    cfg = SynthConfig(n_pairs=n, seed=seed, shift_rate=0.2, alignment_dropout=0.2, label_noise=0.2, **kw)
    result = project_corpus(synthetic_pairs(cfg), 0.4, cost_mode="comp_dep")
    arg_costs, comp = costs_from_instances(result.instances)
    return partition(result.sentences, result.aligned_targets(), arg_costs, comp)


# --- partition ---------------------------------------------------------------------


def test_urge_pair_partition():
    _, data = urge_data()
    labelled = {(c.predicate_index, c.token_index): c.projected_label for c in data.labeled}
    assert labelled == {
        (2, 1): "A0", (2, 3): "A1", (2, 5): "A2",
        (5, 1): NOT_ARG, (5, 2): NOT_ARG, (5, 3): "A0",
    }
    # only the unaligned "um" is left for the model to fill in
    assert {(c.predicate_index, c.token_index) for c in data.unlabeled} == {(2, 4), (5, 4)}
    assert all(c.projected_label is None for c in data.unlabeled)


def test_partition_costs():
    result, data = urge_data()
    by_key = {(c.predicate_index, c.token_index): c.cost for c in data.labeled + data.unlabeled}
    assert by_key[(2, 5)].dep == 0.5  # xcomp -> adpobj
    assert by_key[(2, 1)].dep == 1.0
    assert by_key[(5, 1)].dep == 1.0 and by_key[(2, 4)].dep == 1.0
    assert {cv.comp for cv in by_key.values()} == {0.75}


def test_sidecar_costs_match_instances():
    result, _ = urge_data()
    rows = read_cost_sidecar(write_cost_sidecar(result.instances))
    assert costs_from_sidecar(rows) == costs_from_instances(result.instances)


def test_sentences_without_predicates_contribute_nothing():
    data = partition([german_sentence()], [{1, 2, 3}])
    assert len(data) == 0
    with pytest.raises(ValueError):
        partition([german_sentence()], [])


# --- the loop ---------------------------------------------------------------------


def test_config_checks():
    with pytest.raises(ValueError):
        BootstrapConfig(iterations=-1)
    with pytest.raises(ValueError):
        BootstrapConfig(epochs_per_round=0)
    assert BootstrapConfig(variant="fill-in", cost_mode="comp+dep").cost_mode is CostMode.COMP_DEP


def test_empty_labelled_set():
    with pytest.raises(ValueError):
        bootstrap(PartitionedData(), BootstrapConfig())


def test_zero_rounds_is_labelled_only_training():
    data = synth_data(80)
    cfg = BootstrapConfig(iterations=0, epochs_per_round=2)
    alone = bootstrap(PartitionedData(data.labeled, []), cfg)
    assert dumps_bundle(bootstrap(data, cfg)) == dumps_bundle(alone)


def record(data, cfg):
    states = []
    bootstrap(data, cfg, states.append)
    return states


def test_fill_in_keeps_projected_labels():
    data = synth_data(100)
    states = record(data, BootstrapConfig(iterations=3, variant="fill_in", epochs_per_round=2))
    projected = [c.projected_label for c in data.labeled]
    assert [s.round for s in states] == [0, 1, 2, 3]
    for s in states:
        assert s.labeled_labels == projected
        assert len(s.labeled_labels) + len(s.unlabeled_labels) == len(data)
    assert all(lab is not None for lab in states[-1].unlabeled_labels)


def test_relabel_overwrites():
    data = synth_data(150, seed=1)
    states = record(data, BootstrapConfig(iterations=2, variant="relabel", epochs_per_round=2))
    projected = [c.projected_label for c in data.labeled]
    assert states[0].labeled_labels == projected
    assert states[1].labeled_labels != projected  # noisy labels get corrected
    for s in states:
        assert len(s.labeled_labels) + len(s.unlabeled_labels) == len(data)


@pytest.mark.parametrize("variant", list(Variant))
def test_training_and_labelling_counts(monkeypatch, variant):
    trained, labelled = [], []
    real_train, real_label = bs._train, bs.label_candidates

    def train(candidates, *a, **kw):
        trained.append(len(candidates))
        return real_train(candidates, *a, **kw)

    def label(bundle, candidates):
        labelled.append(len(candidates))
        return real_label(bundle, candidates)

    monkeypatch.setattr(bs, "_train", train)
    monkeypatch.setattr(bs, "label_candidates", label)
    data = synth_data(60)
    m = 3
    bootstrap(data, BootstrapConfig(iterations=m, variant=variant, epochs_per_round=1))
    assert trained == [len(data.labeled)] + [len(data)] * m
    if variant is Variant.RELABEL:
        assert labelled == [len(data.unlabeled), len(data.labeled)] * m
    else:
        assert labelled == [len(data.unlabeled)] * m


def test_costs_only_change_weights(monkeypatch):
    seen = []
    real = bs.train_argument_stages

    def spy(ident, classify, *a, **kw):
        seen.append([i.cost for i in ident])
        return real(ident, classify, *a, **kw)

    monkeypatch.setattr(bs, "train_argument_stages", spy)
    data = synth_data(60)
    bootstrap(data, BootstrapConfig(iterations=1, cost_mode="comp_dep", epochs_per_round=1))
    expected = [c.cost.combined for c in data.labeled]
    assert seen[0] == expected
    assert seen[1] == expected + [c.cost.combined for c in data.unlabeled]


def test_fixed_seed_same_model():
    data = synth_data(80)
    cfg = BootstrapConfig(iterations=2, epochs_per_round=2, seed=4, cost_mode="dep")
    assert dumps_bundle(bootstrap(data, cfg)) == dumps_bundle(bootstrap(data, cfg))


def test_warm_start_runs():
    data = synth_data(60)
    cfg = BootstrapConfig(iterations=2, epochs_per_round=1, warm_start=True)
    states = record(data, cfg)
    counts = [s.bundle.stage(Stage.ARG_ID).update_count for s in states]
    assert counts == [len(data.labeled), len(data.labeled) + len(data), len(data.labeled) + 2 * len(data)]


# --- per-round metrics -------------------------------------------------------------


def planted_bundle(identify=True):
    ident = LinearModel([NOT_ARG, IS_ARG], {
        "arg-deprel=nsubj": {IS_ARG: 5.0 if identify else -5.0},
        "arg-deprel=dobj": {IS_ARG: 5.0 if identify else -5.0},
    })
    classify = LinearModel(["A0", "A1"], {"arg-deprel=nsubj": {"A0": 5.0}, "arg-deprel=dobj": {"A1": 5.0}})
    return ModelBundle({Stage.ARG_ID: ident.freeze(), Stage.ARG_CLS: classify.freeze()})


def dev(*arg_maps):
    return [german_sentence([PredicateFrame(2, "bitten.01", args)]) for args in arg_maps]


def test_perfect_checkpoint():
    rep = checkpoint_metrics(0, planted_bundle(), dev({1: "A0", 3: "A1"}))
    assert rep.overall == (1.0, 1.0, 1.0)


def test_no_predictions_checkpoint():
    rep = checkpoint_metrics(0, planted_bundle(identify=False), dev({1: "A0", 3: "A1"}))
    assert rep.overall == (0.0, 0.0, 0.0)


def test_hand_counted_checkpoint(tmp_path):
    # the model always predicts {Ich: A0, Sie: A1}; two sentences carry one disagreement each
    gold = dev({1: "A0", 3: "A1"}, {1: "A0", 3: "A2"}, {1: "A0", 5: "A1"})
    path = tmp_path / "metrics.csv"
    rep = checkpoint_metrics(0, planted_bundle(), gold, path)
    checkpoint_metrics(1, planted_bundle(), gold, path)
    assert rep.counts == (4, 2, 2)
    assert rep.overall == pytest.approx((4 / 6, 4 / 6, 4 / 6))
    a1 = rep.get("VERB", "A1")
    assert (a1.tp, a1.fp, a1.fn) == (1, 2, 1)
    assert (a1.precision, a1.recall) == pytest.approx((1 / 3, 1 / 2))
    assert rep.get("VERB", "A0").f1 == 1.0
    assert rep.get("VERB", "A2").recall == 0.0
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["round", "stage", "scope", "precision", "recall", "f1"]
    assert [r[0] for r in rows[1:]] == ["0"] * 4 + ["1"] * 4
    assert rows[1][2] == "overall" and float(rows[1][5]) == pytest.approx(4 / 6)


# --- synthetic noise experiment ----------------------------------------------------


@pytest.mark.slow
def test_relabel_beats_fill_in_under_label_noise():
    fill, relab = [], []
    for seed in range(5):
        run = run_synthetic(seed, n_pairs=600, iterations=2, epochs=3, test_pairs=100,
                            settings=("fill_in", "relabel"))
        fill.append(run.f1["fill_in"])
        relab.append(run.f1["relabel"])
    assert statistics.median(relab) >= statistics.median(fill)
