"""Greedy SRL pipeline: predicate identification, sense disambiguation,
argument identification and argument classification, one linear model each.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable

from .conll import PredicateFrame, Provenance, Sentence
from .features import Stage, extract_features
from .perceptron import LinearModel, TrainingInstance, predict, train_stage

NOT_ARG = "_"
IS_ARG = "ARG"
NOT_PRED = "_"
IS_PRED = "PRED"
FORMAT_VERSION = 1
MAGIC = "srlproj-model"


class ModelFormatError(ValueError):
    pass


@dataclass
class ModelBundle:
    models: dict = field(default_factory=dict)  # Stage -> LinearModel

    def stage(self, stage) -> LinearModel:
        stage = Stage(stage)
        try:
            return self.models[stage]
        except KeyError:
            raise KeyError(f"model bundle has no {stage.value} model") from None


def argument_candidates(sentence: Sentence, predicate_index: int) -> list[int]:
    return [t.index for t in sentence.tokens if t.index != predicate_index]


def label_arguments(bundle: ModelBundle, sentence: Sentence, predicate_index: int,
                    candidates: Iterable[int] | None = None) -> dict[int, str]:
    """Run the two argument stages for one predicate."""
    ident = bundle.stage(Stage.ARG_ID)
    classify = bundle.stage(Stage.ARG_CLS)
    if candidates is None:
        candidates = argument_candidates(sentence, predicate_index)
    args = {}
    for idx in candidates:
        feats = extract_features(sentence, Stage.ARG_ID, idx, predicate_index)
        if predict(ident, feats) == IS_ARG:
            args[idx] = predict(classify, feats)
    return args


def run_pipeline(bundle: ModelBundle, sentence: Sentence, gold_predicates: bool = True) -> Sentence:
    if gold_predicates:
        preds = [(fr.predicate_index, fr.sense) for fr in sentence.frames]
    else:
        ident = bundle.stage(Stage.PRED_ID)
        sense = bundle.stage(Stage.PRED_SENSE)
        preds = []
        for tok in sentence.tokens:
            if predict(ident, extract_features(sentence, Stage.PRED_ID, tok.index)) == IS_PRED:
                feats = extract_features(sentence, Stage.PRED_SENSE, tok.index)
                preds.append((tok.index, predict(sense, feats)))
    if preds:
        bundle.stage(Stage.ARG_ID)
        bundle.stage(Stage.ARG_CLS)
    frames = [PredicateFrame(idx, s, label_arguments(bundle, sentence, idx)) for idx, s in preds]
    return Sentence(sentence.tokens, frames, Provenance.PREDICTED)


def argument_instances(sentences: Iterable[Sentence], cost: float = 1.0):
    """(arg_id, arg_cls) training instances from fully labelled sentences."""
    ident, classify = [], []
    for sent in sentences:
        for fr in sent.frames:
            for idx in argument_candidates(sent, fr.predicate_index):
                feats = extract_features(sent, Stage.ARG_ID, idx, fr.predicate_index)
                role = fr.args.get(idx)
                ident.append(TrainingInstance(feats, IS_ARG if role else NOT_ARG, cost))
                if role:
                    classify.append(TrainingInstance(feats, role, cost))
    return ident, classify


def train_argument_stages(ident, classify, epochs=10, seed=0, cost_sensitive=True,
                          init: ModelBundle | None = None) -> ModelBundle:
    init_id = init.models.get(Stage.ARG_ID) if init else None
    init_cls = init.models.get(Stage.ARG_CLS) if init else None
    models = {
        Stage.ARG_ID: train_stage(ident, epochs, seed, [NOT_ARG, IS_ARG], cost_sensitive, init_id),
    }
    if classify:
        models[Stage.ARG_CLS] = train_stage(classify, epochs, seed, None, cost_sensitive, init_cls)
    else:
        # Nothing identified as an argument: a classifier that is never consulted.
        models[Stage.ARG_CLS] = LinearModel([NOT_ARG]).freeze()
    return ModelBundle(models)


def train_supervised(sentences: list[Sentence], epochs: int = 10, seed: int = 0) -> ModelBundle:
    """Train all four stages on gold-labelled sentences."""
    pid, psense = [], []
    for sent in sentences:
        preds = {fr.predicate_index: fr.sense for fr in sent.frames}
        for tok in sent.tokens:
            feats = extract_features(sent, Stage.PRED_ID, tok.index)
            pid.append(TrainingInstance(feats, IS_PRED if tok.index in preds else NOT_PRED))
            if tok.index in preds:
                psense.append(TrainingInstance(
                    extract_features(sent, Stage.PRED_SENSE, tok.index), preds[tok.index]))
    if not pid:
        raise ValueError("no tokens to train on")
    ident, classify = argument_instances(sentences)
    if not ident:
        raise ValueError("training data has no predicates")
    bundle = train_argument_stages(ident, classify, epochs, seed)
    bundle.models[Stage.PRED_ID] = train_stage(pid, epochs, seed, [NOT_PRED, IS_PRED])
    bundle.models[Stage.PRED_SENSE] = train_stage(psense, epochs, seed)
    return bundle


# --- serialisation -------------------------------------------------------
#
#   srlproj-model <version>
#   stage <name> <update_count> <n_labels> <n_records>
#   label <label>                                  (n_labels lines)
#   w <feature> <label> <raw weight> <accumulated>  (n_records lines, tab separated)
#
# Floats are written with repr() so they re-read exactly; records are sorted.


def dumps_bundle(bundle: ModelBundle) -> str:
    out = [f"{MAGIC}\t{FORMAT_VERSION}"]
    for stage in Stage:
        model = bundle.models.get(stage)
        if model is None:
            continue
        records = []
        for feat in sorted(model.weights):
            row = model.weights[feat]
            acc = model.accumulated.get(feat, {})
            for lab in model.label_set:
                if lab in row:
                    records.append(f"w\t{feat}\t{lab}\t{row[lab]!r}\t{acc.get(lab, 0.0)!r}")
        out.append(f"stage\t{stage.value}\t{model.update_count}\t{len(model.label_set)}\t{len(records)}")
        out.extend(f"label\t{lab}" for lab in model.label_set)
        out.extend(records)
    return "\n".join(out) + "\n"


def loads_bundle(text: str) -> ModelBundle:
    lines = io.StringIO(text).read().split("\n")
    if not lines or lines[0] != f"{MAGIC}\t{FORMAT_VERSION}":
        raise ModelFormatError("not a model file or unsupported version")
    bundle = ModelBundle()
    i = 1
    try:
        while i < len(lines) and lines[i]:
            tag, name, count, n_labels, n_records = lines[i].split("\t")
            if tag != "stage":
                raise ModelFormatError(f"line {i + 1}: expected stage header")
            n_labels, n_records = int(n_labels), int(n_records)
            labels = [lines[i + 1 + k].split("\t", 1)[1] for k in range(n_labels)]
            i += 1 + n_labels
            weights, acc = {}, {}
            for k in range(n_records):
                tag, feat, lab, w, a = lines[i + k].split("\t")
                weights.setdefault(feat, {})[lab] = float(w)
                acc.setdefault(feat, {})[lab] = float(a)
            i += n_records
            model = LinearModel(labels, weights, acc, int(count))
            bundle.models[Stage(name)] = model.freeze()
    except (ValueError, IndexError) as exc:
        if isinstance(exc, ModelFormatError):
            raise
        raise ModelFormatError(f"corrupt model file near line {i + 1}: {exc}") from None
    return bundle


def save_bundle(path, bundle: ModelBundle) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_bundle(bundle))


def load_bundle(path) -> ModelBundle:
    with open(path, encoding="utf-8") as fh:
        return loads_bundle(fh.read())
