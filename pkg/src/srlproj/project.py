"""Projection of predicate senses and roles across intersected alignments.

Also holds the sentence-pair density filter and the per-instance quality
costs (completeness, dependency match, and their mean).
"""

from __future__ import annotations

import csv
import enum
import io
import logging
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .align import SentencePair
from .conll import PredicateFrame, Provenance, Sentence

log = logging.getLogger(__name__)

DEFAULT_BLACKLIST = frozenset({"AM"})
VERB = "VERB"


class CostMode(str, enum.Enum):
    UNIFORM = "uniform"
    COMP = "comp"
    DEP = "dep"
    COMP_DEP = "comp_dep"

    @classmethod
    def parse(cls, value) -> "CostMode":
        if isinstance(value, cls):
            return value
        value = str(value).replace("+", "_").replace("-", "_")
        try:
            return cls(value)
        except ValueError:
            raise ValueError(f"unknown cost mode {value!r}") from None


@dataclass(frozen=True)
class DensityScore:
    value: float
    aligned_words: int
    total_words: int
    projected_predicates: int
    source_predicates: int


@dataclass(frozen=True)
class CostVector:
    comp: float = 1.0
    dep: float = 1.0

    @property
    def combined(self) -> float:
        return (self.comp + self.dep) / 2

    def select(self, mode) -> float:
        mode = CostMode.parse(mode)
        if mode is CostMode.UNIFORM:
            return 1.0
        if mode is CostMode.COMP:
            return self.comp
        if mode is CostMode.DEP:
            return self.dep
        return self.combined


@dataclass(frozen=True)
class ProjectedInstance:
    sentence_id: int
    token_index: int
    kind: str  # "predicate" or "argument"
    label: str
    source_token_index: int
    source_deprel: str
    target_deprel: str
    predicate_index: int
    cost: CostVector = CostVector()
    weight: float = 1.0


@dataclass(frozen=True)
class Collision:
    sentence_id: int
    predicate_index: int
    token_index: int
    kept: tuple[int, str]
    dropped: tuple[int, str]


def projection_density(pair: SentencePair) -> DensityScore:
    w = len(pair.target)
    f = len(pair.alignment.aligned_targets())
    p = len(pair.source.frames)
    aligned_src = pair.alignment.aligned_sources()
    p_prime = sum(1 for fr in pair.source.frames if fr.predicate_index in aligned_src)
    value = (p_prime * f) / (p * w) if p and w else 0.0
    return DensityScore(value, f, w, p_prime, p)


def filter_by_density(corpus: Iterable[SentencePair], threshold: float) -> list[SentencePair]:
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"density threshold must lie in [0, 1], got {threshold}")
    return [pair for pair in corpus if projection_density(pair).value >= threshold]


def is_blacklisted(role: str, blacklist, prefix: bool = True) -> bool:
    if role in blacklist:
        return True
    return prefix and any(role.startswith(b + "-") for b in blacklist)


def project_pair(
    pair: SentencePair,
    role_blacklist=DEFAULT_BLACKLIST,
    *,
    prefix_match: bool = True,
    sentence_id: int = 0,
    collisions: list | None = None,
) -> tuple[Sentence, list[ProjectedInstance]]:
    """Copy source frames onto the target through the pair's alignment.

    Unaligned target tokens stay unlabelled.  When two source tokens of the
    same frame would put different labels on one target token, the one with
    the lower source index wins and a :class:`Collision` is appended to
    ``collisions`` (if given).  Returned instances carry default costs; see
    :func:`assign_costs`.
    """
    src, tgt = pair.source, pair.target
    s2t = pair.alignment.source_to_targets()

    def note(c: Collision):
        log.debug("projection collision: %s", c)
        if collisions is not None:
            collisions.append(c)

    frames: dict[int, PredicateFrame] = {}
    owner: dict[int, int] = {}  # target predicate index -> source predicate index
    instances: list[ProjectedInstance] = []
    for sframe in src.frames:  # sorted by predicate index, so lower index wins
        targets = s2t.get(sframe.predicate_index)
        if not targets:
            continue
        tpred = targets[0]
        if tpred in frames:
            note(Collision(sentence_id, tpred, tpred, (owner[tpred], frames[tpred].sense),
                           (sframe.predicate_index, sframe.sense)))
            continue
        tframe = PredicateFrame(tpred, sframe.sense, {})
        frames[tpred] = tframe
        owner[tpred] = sframe.predicate_index
        instances.append(ProjectedInstance(
            sentence_id, tpred, "predicate", sframe.sense, sframe.predicate_index,
            src.token(sframe.predicate_index).deprel, tgt.token(tpred).deprel, tpred,
        ))

        arg_source: dict[int, int] = {}
        for sidx in sorted(sframe.args):
            role = sframe.args[sidx]
            if is_blacklisted(role, role_blacklist, prefix_match):
                continue
            for tidx in s2t.get(sidx, ()):
                if tidx == tpred:
                    note(Collision(sentence_id, tpred, tidx, (sframe.predicate_index, sframe.sense),
                                   (sidx, role)))
                    continue
                if tidx in tframe.args:
                    if tframe.args[tidx] != role:
                        note(Collision(sentence_id, tpred, tidx,
                                       (arg_source[tidx], tframe.args[tidx]), (sidx, role)))
                    continue
                tframe.args[tidx] = role
                arg_source[tidx] = sidx
                instances.append(ProjectedInstance(
                    sentence_id, tidx, "argument", role, sidx,
                    src.token(sidx).deprel, tgt.token(tidx).deprel, tpred,
                ))

    projected = Sentence(tgt.tokens, list(frames.values()), Provenance.PROJECTED)
    instances.sort(key=lambda i: (i.predicate_index, i.kind != "predicate", i.token_index))
    return projected, instances


def labeled_tokens(sentence: Sentence) -> set[int]:
    out = set()
    for fr in sentence.frames:
        out.add(fr.predicate_index)
        out.update(fr.args)
    return out


def completeness_cost(target: Sentence) -> float:
    """Share of verbs and direct dependents of verbs that carry a label."""
    verbs = {t.index for t in target.tokens if t.pos == VERB}
    scope = verbs | {t.index for t in target.tokens if t.head in verbs}
    if not scope:
        return 1.0
    return len(scope & labeled_tokens(target)) / len(scope)


def dep_match_cost(instance: ProjectedInstance) -> float:
    return 1.0 if instance.source_deprel == instance.target_deprel else 0.5


def assign_costs(instances, mode, completeness) -> list[ProjectedInstance]:
    """Fill cost vectors and the training weight selected by ``mode``.

    ``completeness`` maps sentence_id to that sentence's completeness cost.
    Predicates always get dep = 1.0; only arguments are checked for a
    dependency match.
    """
    mode = CostMode.parse(mode)
    out = []
    for inst in instances:
        dep = dep_match_cost(inst) if inst.kind == "argument" else 1.0
        cost = CostVector(completeness[inst.sentence_id], dep)
        out.append(replace(inst, cost=cost, weight=cost.select(mode)))
    return out


SIDECAR_COLUMNS = ("sentence_id", "token_index", "kind", "label", "comp", "dep", "combined")


def write_cost_sidecar(instances: Iterable[ProjectedInstance]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter="\t", lineterminator="\n")
    writer.writerow(SIDECAR_COLUMNS)
    for inst in instances:
        c = inst.cost
        writer.writerow([inst.sentence_id, inst.token_index, inst.kind, inst.label,
                         repr(c.comp), repr(c.dep), repr(c.combined)])
    return buf.getvalue()


def read_cost_sidecar(text: str) -> list[dict]:
    rows = []
    reader = csv.DictReader(io.StringIO(text), delimiter="\t")
    if reader.fieldnames is None or tuple(reader.fieldnames) != SIDECAR_COLUMNS:
        raise ValueError(f"cost sidecar must have columns {SIDECAR_COLUMNS}")
    for row in reader:
        rows.append({
            "sentence_id": int(row["sentence_id"]),
            "token_index": int(row["token_index"]),
            "kind": row["kind"],
            "label": row["label"],
            "comp": float(row["comp"]),
            "dep": float(row["dep"]),
            "combined": float(row["combined"]),
        })
    return rows


@dataclass
class ProjectedCorpus:
    kept: list[int]  # input positions of pairs that passed the filter
    sentences: list[Sentence]
    instances: list[ProjectedInstance]
    alignments: list  # intersected AlignmentSet per kept pair
    densities: list[DensityScore]  # one per input pair
    collisions: list[Collision]

    def aligned_targets(self) -> list[set]:
        return [a.aligned_targets() for a in self.alignments]


def project_corpus(
    pairs: Sequence[SentencePair],
    threshold: float = 0.4,
    role_blacklist=DEFAULT_BLACKLIST,
    prefix_match: bool = True,
    cost_mode=CostMode.UNIFORM,
) -> ProjectedCorpus:
    """Filter by density, project every kept pair and attach costs.

    Sentence ids of the returned instances are positions in the kept list.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"density threshold must lie in [0, 1], got {threshold}")
    densities = [projection_density(p) for p in pairs]
    kept = [i for i, d in enumerate(densities) if d.value >= threshold]
    sentences, instances, collisions, comp = [], [], [], {}
    for sid, i in enumerate(kept):
        sent, insts = project_pair(pairs[i], role_blacklist, prefix_match=prefix_match,
                                   sentence_id=sid, collisions=collisions)
        sentences.append(sent)
        comp[sid] = completeness_cost(sent)
        instances.extend(insts)
    instances = assign_costs(instances, cost_mode, comp)
    return ProjectedCorpus(kept, sentences, instances, [pairs[i].alignment for i in kept],
                           densities, collisions)
