"""Feature templates for the greedy SRL pipeline.

All features are binary indicators named ``template=value``.
"""

from __future__ import annotations

import enum

from .conll import Sentence

MAX_PATH = 8
UP, DOWN = "↑", "↓"


class Stage(str, enum.Enum):
    PRED_ID = "pred_id"
    PRED_SENSE = "pred_sense"
    ARG_ID = "arg_id"
    ARG_CLS = "arg_cls"


ARG_STAGES = (Stage.ARG_ID, Stage.ARG_CLS)


def _ancestors(sentence: Sentence, index: int) -> list[int]:
    chain = [index]
    while index:
        index = sentence.tokens[index - 1].head
        chain.append(index)
    return chain


def dependency_path(sentence: Sentence, arg: int, pred: int) -> str:
    """Relation path from the argument up to the common ancestor, then down to the predicate."""
    up = _ancestors(sentence, arg)
    down = _ancestors(sentence, pred)
    down_set = set(down)
    steps = []
    for node in up:
        if node in down_set:
            lca = node
            break
        steps.append(sentence.tokens[node - 1].deprel + UP)
    for node in reversed(down[: down.index(lca)]):
        steps.append(sentence.tokens[node - 1].deprel + DOWN)
    if len(steps) > MAX_PATH:
        steps = steps[:MAX_PATH] + ["+"]
    return "".join(steps)


def _predicate_features(sentence: Sentence, pred: int) -> dict:
    tok = sentence.tokens[pred - 1]
    feats = [
        "bias",
        f"pred-lemma={tok.lemma}",
        f"pred-pos={tok.pos}",
        f"pred-deprel={tok.deprel}",
    ]
    if tok.head == 0:
        feats.append(f"root-deprel={tok.deprel}")
    return feats


def extract_features(sentence: Sentence, stage, token_index: int, predicate_index: int | None = None) -> dict:
    stage = Stage(stage)
    n = len(sentence)
    if not 1 <= token_index <= n:
        raise ValueError(f"token index {token_index} out of range 1..{n}")
    toks = sentence.tokens

    if stage in (Stage.PRED_ID, Stage.PRED_SENSE):
        feats = _predicate_features(sentence, token_index)
        tok = toks[token_index - 1]
        feats.append(f"pred-form={tok.form}")
        if tok.head:
            feats.append(f"pred-head-pos={toks[tok.head - 1].pos}")
        for child in sentence.children()[token_index]:
            feats.append(f"child-deprel={toks[child - 1].deprel}")
        if stage is Stage.PRED_SENSE:
            feats = [f"{f}|lemma={tok.lemma}" if f.startswith("child") else f for f in feats]
        return dict.fromkeys(feats, 1.0)

    if predicate_index is None or not 1 <= predicate_index <= n:
        raise ValueError(f"predicate index {predicate_index} out of range 1..{n}")
    if predicate_index == token_index:
        raise ValueError("argument and predicate must be different tokens")
    pred = toks[predicate_index - 1]
    arg = toks[token_index - 1]
    feats = _predicate_features(sentence, predicate_index)
    if arg.head == 0:
        feats.append(f"root-deprel={arg.deprel}")
    path = dependency_path(sentence, token_index, predicate_index)
    dist = token_index - predicate_index
    lo, hi = sorted((token_index, predicate_index))
    between = toks[lo:hi - 1]
    feats += [
        f"arg-form={arg.form}",
        f"arg-lemma={arg.lemma}",
        f"arg-pos={arg.pos}",
        f"arg-deprel={arg.deprel}",
        f"arg-suffix={arg.form[-3:]}",
        f"dist={min(abs(dist), 10)}",
        f"dir={'L' if dist < 0 else 'R'}",
        f"arg-head-pos={toks[arg.head - 1].pos if arg.head else 'ROOT'}",
        f"path={path}",
        f"between-first-pos={between[0].pos if between else '-'}",
        f"between-last-pos={between[-1].pos if between else '-'}",
        f"pred-lemma*arg-deprel={pred.lemma}*{arg.deprel}",
        f"pred-pos*path={pred.pos}*{path}",
    ]
    return dict.fromkeys(feats, 1.0)
