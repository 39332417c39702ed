"""Dependency-parsed, role-labelled sentences and the CoNLL-2009 table format.

Column order (one token per row, tab separated)::

    ID FORM LEMMA PLEMMA POS PPOS FEAT PFEAT HEAD PHEAD DEPREL PDEPREL
    FILLPRED PRED APRED1 .. APREDn

On read the predicted columns (PLEMMA, PPOS, PHEAD, PDEPREL) are preferred and
the gold ones are used only when the predicted cell is ``_``.  On write both are
filled with the same value, so files produced here round-trip byte for byte.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

EMPTY = "_"
N_FIXED_COLUMNS = 14

# Google universal tagset (Petrov et al. 2011).
UNIVERSAL_TAGS = frozenset(
    ["VERB", "NOUN", "PRON", "ADJ", "ADV", "ADP", "CONJ", "DET", "NUM", "PRT", "X", "."]
)


class ConllError(ValueError):
    """Malformed CoNLL input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class StructureError(ConllError):
    """Head indices do not form a single-rooted tree."""


class Provenance(str, enum.Enum):
    GOLD = "gold"
    PROJECTED = "projected"
    PREDICTED = "predicted"


@dataclass(frozen=True)
class Token:
    index: int
    form: str
    lemma: str
    pos: str
    head: int
    deprel: str

    def __post_init__(self):
        if self.index < 1:
            raise StructureError(f"token index must be >= 1, got {self.index}")
        if self.head < 0:
            raise StructureError(f"token {self.index}: negative head {self.head}")
        if self.head == self.index:
            raise StructureError(f"token {self.index} is its own head")


@dataclass
class PredicateFrame:
    predicate_index: int
    sense: str
    args: dict[int, str] = field(default_factory=dict)


@dataclass
class Sentence:
    tokens: list[Token]
    frames: list[PredicateFrame] = field(default_factory=list)
    provenance: Provenance = Provenance.GOLD

    def __post_init__(self):
        self.tokens = list(self.tokens)
        self.provenance = Provenance(self.provenance)
        for i, tok in enumerate(self.tokens, 1):
            if tok.index != i:
                raise StructureError(f"token ids must run 1..n, found {tok.index} at position {i}")
        n = len(self.tokens)
        for tok in self.tokens:
            if tok.head > n:
                raise StructureError(f"token {tok.index}: head {tok.head} out of range")
        check_tree([tok.head for tok in self.tokens])

        self.frames = sorted(self.frames, key=lambda fr: fr.predicate_index)
        seen = set()
        for fr in self.frames:
            if not 1 <= fr.predicate_index <= n:
                raise StructureError(f"predicate index {fr.predicate_index} out of range")
            if fr.predicate_index in seen:
                raise StructureError(f"duplicate predicate at {fr.predicate_index}")
            seen.add(fr.predicate_index)
            for idx in fr.args:
                if not 1 <= idx <= n:
                    raise StructureError(
                        f"frame {fr.predicate_index}: argument index {idx} out of range"
                    )

    def __len__(self):
        return len(self.tokens)

    def token(self, index: int) -> Token:
        return self.tokens[index - 1]

    def frame_at(self, index: int) -> PredicateFrame | None:
        for fr in self.frames:
            if fr.predicate_index == index:
                return fr
        return None

    def children(self) -> dict[int, list[int]]:
        """Map from head index (0 for the root) to its dependents, in order."""
        kids: dict[int, list[int]] = {i: [] for i in range(len(self.tokens) + 1)}
        for tok in self.tokens:
            kids[tok.head].append(tok.index)
        return kids

    def with_frames(self, frames: Iterable[PredicateFrame], provenance=None) -> "Sentence":
        return Sentence(self.tokens, list(frames), provenance or self.provenance)

    def same_structure(self, other: "Sentence") -> bool:
        """Equality ignoring provenance."""
        return self.tokens == other.tokens and self.frames == other.frames


def check_tree(heads: list[int]) -> None:
    """Raise StructureError unless ``heads`` (1-based, 0 = root) is a single-rooted tree."""
    if not heads:
        return
    roots = [i for i, h in enumerate(heads, 1) if h == 0]
    if len(roots) != 1:
        raise StructureError(f"expected exactly one root, found {len(roots)}")
    state = [0] * (len(heads) + 1)  # 0 unvisited, 1 on path, 2 reaches root
    state[0] = 2
    for start in range(1, len(heads) + 1):
        path = []
        node = start
        while state[node] == 0:
            state[node] = 1
            path.append(node)
            node = heads[node - 1]
        if state[node] == 1:
            raise StructureError(f"cycle through token {node}")
        for p in path:
            state[p] = 2


def _pick(predicted: str, gold: str) -> str:
    return gold if predicted == EMPTY else predicted


def _parse_block(rows: list[tuple[int, list[str]]], provenance, tagset) -> Sentence:
    tokens = []
    pred_rows = []
    n_apred = None
    for lineno, cols in rows:
        if len(cols) < N_FIXED_COLUMNS:
            raise ConllError(
                f"expected at least {N_FIXED_COLUMNS} columns, got {len(cols)}", lineno
            )
        if n_apred is None:
            n_apred = len(cols) - N_FIXED_COLUMNS
        elif len(cols) - N_FIXED_COLUMNS != n_apred:
            raise ConllError("inconsistent number of APRED columns", lineno)
        try:
            index = int(cols[0])
            head = int(_pick(cols[9], cols[8]))
        except ValueError:
            raise ConllError("non-numeric ID or HEAD", lineno) from None
        pos = _pick(cols[5], cols[4])
        if tagset is not None and pos not in tagset:
            raise ConllError(f"POS tag {pos!r} not in tagset", lineno)
        try:
            tokens.append(
                Token(index, cols[1], _pick(cols[3], cols[2]), pos, head, _pick(cols[11], cols[10]))
            )
        except StructureError as exc:
            raise StructureError(str(exc), lineno) from None
        if cols[12] == "Y" or cols[13] != EMPTY:
            pred_rows.append((index, cols[13]))

    if len(pred_rows) != n_apred:
        raise ConllError(
            f"{len(pred_rows)} predicates but {n_apred} APRED columns", rows[0][0]
        )
    frames = [PredicateFrame(idx, sense, {}) for idx, sense in pred_rows]
    for lineno, cols in rows:
        for k, cell in enumerate(cols[N_FIXED_COLUMNS:]):
            if cell != EMPTY:
                frames[k].args[int(cols[0])] = cell
    try:
        return Sentence(tokens, frames, provenance)
    except StructureError as exc:
        raise StructureError(str(exc), rows[0][0]) from None


def parse_conll(text: str, provenance=Provenance.GOLD, tagset=None) -> list[Sentence]:
    """Parse CoNLL-2009 text into sentences.

    ``tagset`` optionally restricts POS tags to a closed set.  Lines starting
    with ``#`` are skipped.
    """
    sentences = []
    block: list[tuple[int, list[str]]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if line.startswith("#"):
            continue
        if not line.strip():
            if block:
                sentences.append(_parse_block(block, provenance, tagset))
                block = []
            continue
        block.append((lineno, line.split("\t")))
    if block:
        sentences.append(_parse_block(block, provenance, tagset))
    return sentences


def write_conll(sentences: Iterable[Sentence]) -> str:
    out = []
    for sent in sentences:
        frames = sent.frames
        by_pred = {fr.predicate_index: fr for fr in frames}
        for tok in sent.tokens:
            fr = by_pred.get(tok.index)
            cols = [
                str(tok.index), tok.form, tok.lemma, tok.lemma, tok.pos, tok.pos,
                EMPTY, EMPTY, str(tok.head), str(tok.head), tok.deprel, tok.deprel,
                "Y" if fr else EMPTY, fr.sense if fr else EMPTY,
            ]
            cols.extend(f.args.get(tok.index, EMPTY) for f in frames)
            out.append("\t".join(cols))
        out.append("")
    return "".join(line + "\n" for line in out)


def read_conll_file(path, **kwargs) -> list[Sentence]:
    with open(path, encoding="utf-8") as fh:
        return parse_conll(fh.read(), **kwargs)


def write_conll_file(path, sentences) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(write_conll(sentences))
