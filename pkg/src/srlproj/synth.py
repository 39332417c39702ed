"""Synthetic parallel corpora with known target-side role labels.

Both sides come from one abstract clause structure (verbs with role-bearing
dependents plus determiners, adjectives and noun modifiers).  The target
side uses its own vocabulary and word order.  In the target, every argument
noun carries a role-specific suffix and the relation of an argument to its
verb is fixed by its role, so the target labelling is learnable from
features.

Corruptions, all applied after the gold target is fixed:

* translation shift: a frame's target realisation swaps argument roles and
  loses each of its alignment links with probability 1/2;
* alignment dropout: a link disappears from one of the two directional
  alignments, so the intersection loses it;
* label noise: aligned source arguments get a wrong core role.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import NamedTuple

from .align import AlignmentSet
from .conll import PredicateFrame, Provenance, Sentence, Token

CORE_ROLES = ("A0", "A1", "A2")
ROLE_DEPREL = {"A0": "nsubj", "A1": "dobj", "A2": "iobj", "AM-TMP": "advmod"}
ROLE_SUFFIX = {"A0": "tor", "A1": "ium", "A2": "ist"}
PLAIN_SUFFIX = "ens"

# Which side of its head a dependent goes on, per language.
SOURCE_LEFT = {"nsubj", "det", "amod"}
TARGET_LEFT = {"nsubj", "det", "dobj", "iobj"}
SWAP = {"A0": "A1", "A1": "A0", "A2": "A1"}


@dataclass
class SynthConfig:
    n_pairs: int = 500
    vocab_size: int = 200
    mean_length: int = 8
    shift_rate: float = 0.0
    alignment_dropout: float = 0.0
    label_noise: float = 0.0
    seed: int = 0

    def __post_init__(self):
        for name in ("shift_rate", "alignment_dropout", "label_noise"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if self.vocab_size < 10:
            raise ValueError("vocab_size must be >= 10")
        if self.mean_length < 3:
            raise ValueError("mean_length must be >= 3")
        if self.n_pairs < 0:
            raise ValueError("n_pairs must be >= 0")


class SynthCorpus(NamedTuple):
    source: list
    target: list
    forward: list
    backward: list
    gold: list
    shifted: list  # per pair, number of shifted frames


@dataclass
class _Node:
    kind: str  # verb, noun, det, adj, adv, punct
    lemma_id: int
    head: int  # node id, -1 for root
    deprel: str
    role: str | None = None  # role w.r.t. its head verb (target side)
    src_role: str | None = None
    frame: int | None = None  # clause id this node belongs to (verbs and their args)


def _build_clauses(rng: random.Random, cfg: SynthConfig, n_verbs: int, n_nouns: int):
    nodes: list[_Node] = []
    target_len = max(3, round(rng.gauss(cfg.mean_length, 2)))
    n_clauses = 2 if rng.random() < 0.35 else 1
    verbs = []
    nouns = []
    for c in range(n_clauses):
        head = -1 if c == 0 else verbs[0]
        nodes.append(_Node("verb", rng.randrange(n_verbs), head, "ROOT" if c == 0 else "xcomp", frame=c))
        v = len(nodes) - 1
        verbs.append(v)
        roles = [r for r, p in (("A0", 0.9), ("A1", 0.75), ("A2", 0.3)) if rng.random() < p]
        if not roles:
            roles = ["A1"]
        for role in roles:
            nodes.append(_Node("noun", rng.randrange(n_nouns), v, ROLE_DEPREL[role], role, role, c))
            nouns.append(len(nodes) - 1)
        if rng.random() < 0.25:
            nodes.append(_Node("adv", rng.randrange(8), v, "advmod", "AM-TMP", "AM-TMP", c))
    nodes.append(_Node("punct", 0, verbs[0], "p"))

    def add_modifier():
        if not nouns:
            return
        n = rng.choice(nouns)
        r = rng.random()
        if r < 0.45:
            nodes.append(_Node("det", rng.randrange(3), n, "det"))
        elif r < 0.8:
            nodes.append(_Node("adj", rng.randrange(n_nouns), n, "amod"))
        else:
            nodes.append(_Node("noun", rng.randrange(n_nouns), n, "nmod"))
            nouns.append(len(nodes) - 1)

    while len(nodes) < target_len:
        add_modifier()
    return nodes


def _linearise(nodes: list[_Node], left: set) -> list[int]:
    kids: dict[int, list[int]] = {}
    for i, n in enumerate(nodes):
        kids.setdefault(n.head, []).append(i)

    def walk(i):
        before = [k for k in kids.get(i, []) if nodes[k].deprel in left]
        after = [k for k in kids.get(i, []) if nodes[k].deprel not in left]
        after.sort(key=lambda k: nodes[k].deprel == "p")
        out = []
        for k in before:
            out += walk(k)
        out.append(i)
        for k in after:
            out += walk(k)
        return out

    return walk(kids[-1][0])


_SRC_POS = {"verb": "VERB", "noun": "NOUN", "det": "DET", "adj": "ADJ", "adv": "ADV", "punct": "."}


def _surface(node: _Node, side: str, role) -> tuple[str, str]:
    k = node.lemma_id
    if side == "source":
        lemma = {"verb": f"v{k}", "noun": f"n{k}", "det": f"the{k}", "adj": f"a{k}",
                 "adv": f"adv{k}", "punct": "."}[node.kind]
        return lemma, lemma
    lemma = {"verb": f"ver{k}", "noun": f"nom{k}", "det": f"der{k}", "adj": f"adj{k}",
             "adv": f"zeit{k}", "punct": "."}[node.kind]
    if node.kind == "noun":
        return lemma + ROLE_SUFFIX.get(role, PLAIN_SUFFIX), lemma
    if node.kind == "verb":
        return lemma + "t", lemma
    return lemma, lemma


def _sentence(nodes, order, side, roles, deprels, frames_of) -> tuple[Sentence, dict[int, int]]:
    pos_of = {node_id: i + 1 for i, node_id in enumerate(order)}
    tokens = []
    for node_id in order:
        n = nodes[node_id]
        form, lemma = _surface(n, side, roles.get(node_id))
        head = 0 if n.head == -1 else pos_of[n.head]
        tokens.append(Token(pos_of[node_id], form, lemma, _SRC_POS[n.kind], head, deprels[node_id]))
    frames = []
    for verb_id, args in frames_of.items():
        sense_prefix = "v" if side == "source" else "ver"
        frames.append(PredicateFrame(
            pos_of[verb_id], f"{sense_prefix}{nodes[verb_id].lemma_id}.01",
            {pos_of[a]: r for a, r in args.items()},
        ))
    return Sentence(tokens, frames, Provenance.GOLD), pos_of


def _pair(rng: random.Random, cfg: SynthConfig, n_verbs: int, n_nouns: int):
    nodes = _build_clauses(rng, cfg, n_verbs, n_nouns)
    verbs = [i for i, n in enumerate(nodes) if n.kind == "verb"]
    shifted = {nodes[v].frame for v in verbs if rng.random() < cfg.shift_rate}

    src_roles = {i: n.src_role for i, n in enumerate(nodes) if n.src_role}
    tgt_roles = dict(src_roles)
    for i, n in enumerate(nodes):
        if n.frame in shifted and n.kind == "noun" and n.role in SWAP:
            tgt_roles[i] = SWAP[n.role]
    src_dep = {i: n.deprel for i, n in enumerate(nodes)}
    tgt_dep = dict(src_dep)
    for i, r in tgt_roles.items():
        if nodes[i].kind == "noun":
            tgt_dep[i] = ROLE_DEPREL[r]

    def frames(roles):
        out = {v: {} for v in verbs}
        for i, r in roles.items():
            out[nodes[i].head][i] = r
        return out

    src_order = _linearise(nodes, SOURCE_LEFT)
    # target order needs the target relations
    tnodes = [_Node(n.kind, n.lemma_id, n.head, tgt_dep[i]) for i, n in enumerate(nodes)]
    tgt_order = _linearise(tnodes, TARGET_LEFT)

    # Alignment: node i <-> node i, except links lost to shifts.
    true_links = []
    for i, n in enumerate(nodes):
        in_shift = n.frame in shifted or (n.head >= 0 and nodes[n.head].frame in shifted and n.kind != "verb")
        if in_shift and rng.random() < 0.5:
            continue
        true_links.append(i)

    forward, backward = set(true_links), set(true_links)
    for i in true_links:
        if rng.random() < cfg.alignment_dropout:
            (forward if rng.random() < 0.5 else backward).discard(i)
    intersected = forward & backward

    # Label noise on source roles that will be visible through the alignment.
    noisy_src = dict(src_roles)
    for i, r in src_roles.items():
        if i in intersected and r in CORE_ROLES and rng.random() < cfg.label_noise:
            noisy_src[i] = rng.choice([x for x in CORE_ROLES if x != r])

    source, spos = _sentence(nodes, src_order, "source", noisy_src, src_dep, frames(noisy_src))
    target_gold, tpos = _sentence(nodes, tgt_order, "target", tgt_roles, tgt_dep, frames(tgt_roles))
    target = Sentence(target_gold.tokens, [], Provenance.GOLD)

    fwd = {(spos[i], tpos[i]) for i in forward}
    bwd = {(spos[i], tpos[i]) for i in backward}
    # Directional aligners also emit many-to-one links that intersection removes.
    if rng.random() < 0.3 and len(nodes) > 1:
        a, b = rng.sample(range(len(nodes)), 2)
        # never a true link since a != b, so it cannot survive intersection
        (fwd if rng.random() < 0.5 else bwd).add((spos[a], tpos[b]))
    return source, target, AlignmentSet(fwd), AlignmentSet(bwd), target_gold, len(shifted)


def generate(config: SynthConfig) -> SynthCorpus:
    rng = random.Random(config.seed)
    n_verbs = max(3, config.vocab_size // 10)
    n_nouns = config.vocab_size - n_verbs
    out = SynthCorpus([], [], [], [], [], [])
    for _ in range(config.n_pairs):
        for bucket, item in zip(out, _pair(rng, config, n_verbs, n_nouns)):
            bucket.append(item)
    return out
