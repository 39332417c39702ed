"""Self-training on partially projected data, in fill-in and relabel flavours.

Unit of data is a (projected predicate, candidate token) pair.  Candidates
whose target token is aligned are labelled: they carry the projected role, or
``NOT_ARG`` when projection put nothing there.  Candidates on unaligned
tokens are unlabelled.

Round 0 trains on the labelled part only.  Each later round labels the
unlabelled part with the previous model and, in the relabel variant, also
overwrites every labelled candidate's label with the model's prediction,
then retrains on everything.
"""

from __future__ import annotations

import csv
import enum
import os
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .conll import Sentence
from .evaluation import EvalReport, score
from .features import Stage, extract_features
from .perceptron import Origin, TrainingInstance, predict
from .pipeline import IS_ARG, NOT_ARG, ModelBundle, argument_candidates, run_pipeline, train_argument_stages
from .project import DEFAULT_BLACKLIST, CostMode, CostVector, ProjectedInstance, completeness_cost


class Variant(str, enum.Enum):
    FILL_IN = "fill_in"
    RELABEL = "relabel"

    @classmethod
    def parse(cls, value) -> "Variant":
        if isinstance(value, cls):
            return value
        return cls(str(value).replace("-", "_"))


@dataclass
class BootstrapConfig:
    iterations: int = 7
    variant: Variant = Variant.RELABEL
    cost_mode: CostMode = CostMode.UNIFORM
    epochs_per_round: int = 10
    seed: int = 0
    warm_start: bool = False

    def __post_init__(self):
        self.variant = Variant.parse(self.variant)
        self.cost_mode = CostMode.parse(self.cost_mode)
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if self.epochs_per_round < 1:
            raise ValueError("epochs_per_round must be >= 1")


@dataclass(frozen=True)
class Candidate:
    sentence_id: int
    predicate_index: int
    token_index: int
    features: dict
    cost: CostVector
    projected_label: str | None = None  # None for unlabelled candidates


@dataclass
class PartitionedData:
    labeled: list[Candidate] = field(default_factory=list)
    unlabeled: list[Candidate] = field(default_factory=list)

    def __len__(self):
        return len(self.labeled) + len(self.unlabeled)


@dataclass
class RoundState:
    round: int
    bundle: ModelBundle
    labeled_labels: list
    unlabeled_labels: list


def costs_from_instances(instances: Sequence[ProjectedInstance]):
    """Per-argument cost vectors and per-sentence completeness from projection output."""
    arg_costs, comp = {}, {}
    for inst in instances:
        comp.setdefault(inst.sentence_id, inst.cost.comp)
        if inst.kind == "argument":
            arg_costs.setdefault((inst.sentence_id, inst.token_index), inst.cost)
    return arg_costs, comp


def costs_from_sidecar(rows):
    arg_costs, comp = {}, {}
    for row in rows:
        comp.setdefault(row["sentence_id"], row["comp"])
        if row["kind"] == "argument":
            arg_costs.setdefault((row["sentence_id"], row["token_index"]),
                                 CostVector(row["comp"], row["dep"]))
    return arg_costs, comp


def partition(
    projected: Sequence[Sentence],
    aligned_targets: Sequence[set],
    arg_costs: dict | None = None,
    sentence_comp: dict | None = None,
) -> PartitionedData:
    """Split candidates of projected sentences into labelled / unlabelled.

    Argument candidates take their cost from ``arg_costs``; all others get
    dep = 1.0 and the sentence's completeness.  Sentences without projected
    predicates contribute nothing.
    """
    if len(projected) != len(aligned_targets):
        raise ValueError("need one aligned-token set per projected sentence")
    arg_costs = arg_costs or {}
    sentence_comp = sentence_comp or {}
    data = PartitionedData()
    for sid, (sent, aligned) in enumerate(zip(projected, aligned_targets)):
        if not sent.frames:
            continue
        comp = sentence_comp.get(sid)
        if comp is None:
            comp = completeness_cost(sent)
        default = CostVector(comp, 1.0)
        for fr in sent.frames:
            for idx in argument_candidates(sent, fr.predicate_index):
                feats = extract_features(sent, Stage.ARG_ID, idx, fr.predicate_index)
                role = fr.args.get(idx)
                if role is not None:
                    cost = arg_costs.get((sid, idx), default)
                    data.labeled.append(Candidate(sid, fr.predicate_index, idx, feats, cost, role))
                elif idx in aligned:
                    data.labeled.append(Candidate(sid, fr.predicate_index, idx, feats, default, NOT_ARG))
                else:
                    data.unlabeled.append(Candidate(sid, fr.predicate_index, idx, feats, default))
    return data


def label_candidates(bundle: ModelBundle, candidates: Sequence[Candidate]) -> list[str]:
    ident = bundle.stage(Stage.ARG_ID)
    classify = bundle.stage(Stage.ARG_CLS)
    out = []
    for c in candidates:
        if predict(ident, c.features) == IS_ARG:
            out.append(predict(classify, c.features))
        else:
            out.append(NOT_ARG)
    return out


def _train(candidates, labels, origins, config: BootstrapConfig, init=None) -> ModelBundle:
    ident, classify = [], []
    for c, lab, origin in zip(candidates, labels, origins):
        w = c.cost.select(config.cost_mode)
        ident.append(TrainingInstance(c.features, NOT_ARG if lab == NOT_ARG else IS_ARG, w, origin))
        if lab != NOT_ARG:
            classify.append(TrainingInstance(c.features, lab, w, origin))
    return train_argument_stages(ident, classify, config.epochs_per_round, config.seed, init=init)


def bootstrap(
    data: PartitionedData,
    config: BootstrapConfig,
    on_round: Callable[[RoundState], None] | None = None,
) -> ModelBundle:
    """Return the argument-stage models after ``config.iterations`` rounds."""
    if not data.labeled:
        raise ValueError("bootstrapping needs at least one labelled candidate")
    labeled_labels = [c.projected_label for c in data.labeled]
    labeled_origin = [Origin.PROJECTED_LABELED] * len(data.labeled)
    unlabeled_labels: list = [None] * len(data.unlabeled)

    bundle = _train(data.labeled, labeled_labels, labeled_origin, config)
    if on_round:
        on_round(RoundState(0, bundle, list(labeled_labels), list(unlabeled_labels)))
    for rnd in range(1, config.iterations + 1):
        unlabeled_labels = label_candidates(bundle, data.unlabeled)
        if config.variant is Variant.RELABEL:
            labeled_labels = label_candidates(bundle, data.labeled)
            labeled_origin = [Origin.RELABELED] * len(data.labeled)
        bundle = _train(
            data.labeled + data.unlabeled,
            labeled_labels + unlabeled_labels,
            labeled_origin + [Origin.FILLED_IN] * len(data.unlabeled),
            config,
            init=bundle if config.warm_start else None,
        )
        if on_round:
            on_round(RoundState(rnd, bundle, list(labeled_labels), list(unlabeled_labels)))
    return bundle


METRIC_COLUMNS = ("round", "stage", "scope", "precision", "recall", "f1")


def checkpoint_metrics(round: int, model: ModelBundle, dev_set: Sequence[Sentence],
                       csv_path=None, role_blacklist=DEFAULT_BLACKLIST) -> EvalReport:
    """Score ``model`` on a gold dev set (gold predicates); optionally append to a CSV."""
    pred = [run_pipeline(model, s, gold_predicates=True) for s in dev_set]
    report = score(dev_set, pred, gold_predicate_mode=True, role_blacklist=role_blacklist)
    if csv_path is not None:
        new = not os.path.exists(csv_path) or os.path.getsize(csv_path) == 0
        with open(csv_path, "a", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            if new:
                w.writerow(METRIC_COLUMNS)
            w.writerows(metric_rows(round, report))
    return report


def metric_rows(round: int, report: EvalReport) -> list[list]:
    rows = [[round, "argument", "overall", *map(repr, report.overall)]]
    for (pos, role), d in report.per_dependency.items():
        rows.append([round, "argument", f"{pos}+{role}", repr(d.precision), repr(d.recall), repr(d.f1)])
    return rows
