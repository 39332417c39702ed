"""Sparse multiclass averaged perceptron with optional per-instance costs.

Averaging uses the lazy identity: with ``c`` the number of instances seen,
every update ``delta`` at step ``c`` is added to ``weights`` and
``(c - 1) * delta`` to ``accumulated``; the average of the weight vectors
after each of the ``c`` steps is then ``weights - accumulated / c``.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from typing import Sequence

FeatureVector = dict  # feature string -> value (1.0 for indicators)


class Origin(str, enum.Enum):
    PROJECTED_LABELED = "projected_labeled"
    FILLED_IN = "filled_in"
    RELABELED = "relabeled"


@dataclass
class TrainingInstance:
    features: FeatureVector
    gold_label: str
    cost: float = 1.0
    origin: Origin = Origin.PROJECTED_LABELED

    def __post_init__(self):
        if not 0.0 <= self.cost <= 1.0:
            raise ValueError(f"cost must lie in [0, 1], got {self.cost}")


@dataclass
class LinearModel:
    label_set: list[str]
    weights: dict = field(default_factory=dict)  # feature -> {label: weight}
    accumulated: dict = field(default_factory=dict)
    update_count: int = 0
    _averaged: dict | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not self.label_set:
            raise ValueError("label_set must be nonempty")
        self.label_set = list(self.label_set)
        self._label_pos = {lab: i for i, lab in enumerate(self.label_set)}

    def averaged_weights(self) -> dict:
        if self._averaged is None:
            self._averaged = self._compute_average()
        return self._averaged

    def _compute_average(self) -> dict:
        if self.update_count == 0:
            return {f: dict(row) for f, row in self.weights.items()}
        c = self.update_count
        out = {}
        for feat, row in self.weights.items():
            acc = self.accumulated.get(feat, {})
            out[feat] = {lab: w - acc.get(lab, 0.0) / c for lab, w in row.items()}
        return out

    def freeze(self) -> "LinearModel":
        self._averaged = self._compute_average()
        return self

    def scores(self, features: FeatureVector, use_averaged: bool = True) -> list[float]:
        table = self.averaged_weights() if use_averaged else self.weights
        out = [0.0] * len(self.label_set)
        pos = self._label_pos
        for feat, value in features.items():
            row = table.get(feat)
            if row is None:
                continue
            for lab, w in row.items():
                out[pos[lab]] += value * w
        return out


def predict(model: LinearModel, features: FeatureVector, use_averaged: bool = True) -> str:
    """Argmax label; ties go to the earliest label in ``model.label_set``."""
    scores = model.scores(features, use_averaged)
    best = 0
    for i in range(1, len(scores)):
        if scores[i] > scores[best]:
            best = i
    return model.label_set[best]


def perceptron_update(model: LinearModel, inst: TrainingInstance, predicted: str,
                      cost_sensitive: bool = True) -> LinearModel:
    """One online step: ``w += cost * (phi(x, gold) - phi(x, predicted))``.

    With ``cost_sensitive`` off the instance cost is ignored (plain update).
    """
    if predicted not in model._label_pos:
        raise ValueError(f"predicted label {predicted!r} not in label set")
    if inst.gold_label not in model._label_pos:
        raise ValueError(f"gold label {inst.gold_label!r} not in label set")
    model.update_count += 1
    model._averaged = None
    if predicted == inst.gold_label:
        return model
    scale = inst.cost if cost_sensitive else 1.0
    if scale == 0.0:
        return model
    steps = model.update_count - 1
    gold, guess = inst.gold_label, predicted
    for feat, value in inst.features.items():
        delta = scale * value
        row = model.weights.setdefault(feat, {})
        acc = model.accumulated.setdefault(feat, {})
        row[gold] = row.get(gold, 0.0) + delta
        acc[gold] = acc.get(gold, 0.0) + steps * delta
        row[guess] = row.get(guess, 0.0) - delta
        acc[guess] = acc.get(guess, 0.0) - steps * delta
    return model


def train_stage(
    instances: Sequence[TrainingInstance],
    epochs: int = 10,
    seed: int = 0,
    labels: Sequence[str] | None = None,
    cost_sensitive: bool = True,
    init: LinearModel | None = None,
) -> LinearModel:
    """Train one pipeline stage; instances are reshuffled every epoch.

    ``labels`` fixes the label order (and thus tie-breaking); by default the
    sorted set of gold labels is used.  ``init`` warm-starts from a copy of an
    existing model.
    """
    if not instances:
        raise ValueError("cannot train on an empty instance list")
    if epochs < 1:
        raise ValueError("epochs must be >= 1")
    if labels is None:
        labels = sorted({inst.gold_label for inst in instances})
    if init is not None:
        model = LinearModel(
            list(init.label_set) + [l for l in labels if l not in init.label_set],
            {f: dict(r) for f, r in init.weights.items()},
            {f: dict(r) for f, r in init.accumulated.items()},
            init.update_count,
        )
    else:
        model = LinearModel(list(labels))
    rng = random.Random(seed)
    order = list(range(len(instances)))
    for _ in range(epochs):
        rng.shuffle(order)
        for i in order:
            inst = instances[i]
            guess = predict(model, inst.features, use_averaged=False)
            perceptron_update(model, inst, guess, cost_sensitive)
    return model.freeze()
