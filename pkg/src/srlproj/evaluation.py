"""Labelled precision/recall/F1 over semantic dependencies."""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .conll import Sentence
from .project import is_blacklisted

SENSE_ROLE = "SENSE"


def prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f


@dataclass
class DependencyScore:
    precision: float
    recall: float
    f1: float
    support: int
    tp: int = 0
    fp: int = 0
    fn: int = 0


@dataclass
class EvalReport:
    overall: tuple[float, float, float]
    per_dependency: dict = field(default_factory=dict)  # (pos, role) -> DependencyScore
    counts: tuple[int, int, int] = (0, 0, 0)

    @property
    def precision(self):
        return self.overall[0]

    @property
    def recall(self):
        return self.overall[1]

    @property
    def f1(self):
        return self.overall[2]

    def get(self, pos: str, role: str) -> DependencyScore:
        return self.per_dependency.get((pos, role), DependencyScore(0.0, 0.0, 0.0, 0))


def _triples(sent: Sentence, pos_of, include_senses, blacklist, prefix):
    out = set()
    for fr in sent.frames:
        pos = pos_of(fr.predicate_index)
        if include_senses:
            out.add((fr.predicate_index, fr.predicate_index, fr.sense, pos, SENSE_ROLE))
        for idx, role in fr.args.items():
            if blacklist and is_blacklisted(role, blacklist, prefix):
                continue
            out.add((fr.predicate_index, idx, role, pos, role))
    return out


def score(
    gold: Sequence[Sentence],
    pred: Sequence[Sentence],
    gold_predicate_mode: bool = True,
    role_blacklist=frozenset(),
    prefix_match: bool = True,
) -> EvalReport:
    """Micro-averaged labelled scores.

    A predicted (predicate, argument, role) triple counts as correct only if
    gold has the identical triple.  Outside gold-predicate mode, predicate
    senses are scored too under the pseudo-role ``SENSE``.  Per-dependency
    keys are (POS of the predicate token, role).
    """
    if len(gold) != len(pred):
        raise ValueError(f"gold has {len(gold)} sentences, prediction has {len(pred)}")
    tp, fp, fn = Counter(), Counter(), Counter()
    for k, (g, p) in enumerate(zip(gold, pred)):
        if len(g) != len(p):
            raise ValueError(f"sentence {k}: token counts differ ({len(g)} vs {len(p)})")

        def pos_of(i, g=g):
            return g.tokens[i - 1].pos

        include = not gold_predicate_mode
        gt = _triples(g, pos_of, include, role_blacklist, prefix_match)
        pt = _triples(p, pos_of, include, role_blacklist, prefix_match)
        for t in gt & pt:
            tp[t[3:]] += 1
        for t in pt - gt:
            fp[t[3:]] += 1
        for t in gt - pt:
            fn[t[3:]] += 1

    per_dep = {}
    for key in sorted(set(tp) | set(fp) | set(fn)):
        a, b, c = tp[key], fp[key], fn[key]
        per_dep[key] = DependencyScore(*prf(a, b, c), a + c, a, b, c)
    totals = (sum(tp.values()), sum(fp.values()), sum(fn.values()))
    return EvalReport(prf(*totals), per_dep, totals)


def format_report(report: EvalReport) -> str:
    tp, fp, fn = report.counts
    lines = [
        f"labeled precision: {report.precision * 100:6.2f}",
        f"labeled recall:    {report.recall * 100:6.2f}",
        f"labeled F1:        {report.f1 * 100:6.2f}",
        f"(tp={tp} fp={fp} fn={fn})",
        "",
        f"{'dependency':<20} {'P':>7} {'R':>7} {'F1':>7} {'support':>8}",
    ]
    for (pos, role), d in report.per_dependency.items():
        lines.append(
            f"{pos + '+' + role:<20} {d.precision * 100:7.2f} {d.recall * 100:7.2f} "
            f"{d.f1 * 100:7.2f} {d.support:8d}"
        )
    return "\n".join(lines) + "\n"


def report_csv(report: EvalReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["scope", "precision", "recall", "f1", "support", "tp", "fp", "fn"])
    tp, fp, fn = report.counts
    w.writerow(["overall", *map(repr, report.overall), tp + fn, tp, fp, fn])
    for (pos, role), d in report.per_dependency.items():
        w.writerow([f"{pos}+{role}", repr(d.precision), repr(d.recall), repr(d.f1),
                    d.support, d.tp, d.fp, d.fn])
    return buf.getvalue()


CURVE_COLUMNS = ("round", "pos", "role", "precision", "recall", "f1", "support")


def emit_iteration_curves(reports: Sequence[EvalReport], keys, rounds=None) -> str:
    """One CSV row per (round, key); unseen keys give zero rows.

    ``rounds`` labels the reports (default 0, 1, ...).
    """
    if rounds is None:
        rounds = range(len(reports))
    rounds = list(rounds)
    if len(rounds) != len(reports):
        raise ValueError("need one round label per report")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CURVE_COLUMNS)
    for rnd, rep in zip(rounds, reports):
        for pos, role in keys:
            d = rep.get(pos, role)
            w.writerow([rnd, pos, role, repr(d.precision), repr(d.recall), repr(d.f1), d.support])
    return buf.getvalue()
