"""Pharaoh-format word alignments and their intersection.

Links are held as ``(source_index, target_index)`` pairs with 1-based token
indices, matching CoNLL token ids.  On disk the usual 0-based ``i-j`` Pharaoh
convention applies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .conll import Sentence


class AlignmentError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class AlignmentSet:
    links: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "links", frozenset(self.links))

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self.links))

    def __len__(self):
        return len(self.links)

    def __contains__(self, link):
        return link in self.links

    def source_to_targets(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for s, t in sorted(self.links):
            out.setdefault(s, []).append(t)
        return out

    def target_to_sources(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for s, t in sorted(self.links):
            out.setdefault(t, []).append(s)
        return out

    def aligned_sources(self) -> set[int]:
        return {s for s, _ in self.links}

    def aligned_targets(self) -> set[int]:
        return {t for _, t in self.links}

    def reversed(self) -> "AlignmentSet":
        return AlignmentSet((t, s) for s, t in self.links)


@dataclass
class SentencePair:
    source: Sentence
    target: Sentence
    alignment: AlignmentSet

    def __post_init__(self):
        ns, nt = len(self.source), len(self.target)
        for s, t in self.alignment.links:
            if not (1 <= s <= ns and 1 <= t <= nt):
                raise AlignmentError(
                    f"link ({s},{t}) outside sentence bounds ({ns},{nt})"
                )


def _parse_line(line: str, lineno: int, offset: int, reverse: bool) -> AlignmentSet:
    links = set()
    for item in line.split():
        i, sep, j = item.partition("-")
        if not sep:
            raise AlignmentError(f"malformed alignment pair {item!r}", lineno)
        try:
            a, b = int(i), int(j)
        except ValueError:
            raise AlignmentError(f"malformed alignment pair {item!r}", lineno) from None
        if a < 0 or b < 0:
            raise AlignmentError(f"negative index in {item!r}", lineno)
        a, b = a + offset, b + offset
        if a < 1 or b < 1:
            raise AlignmentError(f"index 0 in 1-based pair {item!r}", lineno)
        links.add((b, a) if reverse else (a, b))
    return AlignmentSet(links)


def parse_alignments(text: str, one_based: bool = False, reverse: bool = False) -> list[AlignmentSet]:
    """One AlignmentSet per line of ``text``.

    With ``reverse`` set, each ``i-j`` is read as (target i, source j), which
    is how a target-to-source aligner run is usually written out.
    """
    offset = 0 if one_based else 1
    # splitlines() drops a trailing empty line; keep interior blank ones.
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [_parse_line(line, k, offset, reverse) for k, line in enumerate(lines, 1)]


def write_alignments(sets: Iterable[AlignmentSet], one_based: bool = False, reverse: bool = False) -> str:
    offset = 0 if one_based else 1
    lines = []
    for aset in sets:
        pairs = sorted((t, s) if reverse else (s, t) for s, t in aset.links)
        lines.append(" ".join(f"{a - offset}-{b - offset}" for a, b in pairs))
    return "".join(line + "\n" for line in lines)


def intersect(forward: AlignmentSet, backward: AlignmentSet) -> AlignmentSet:
    return AlignmentSet(forward.links & backward.links)


def read_alignment_file(path, **kwargs) -> list[AlignmentSet]:
    with open(path, encoding="utf-8") as fh:
        return parse_alignments(fh.read(), **kwargs)
