"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

from .align import AlignmentError, SentencePair, intersect, read_alignment_file, write_alignments
from .bootstrap import (BootstrapConfig, RoundState, bootstrap, checkpoint_metrics, costs_from_sidecar,
                        partition)
from .conll import ConllError, read_conll_file, write_conll, write_conll_file
from .evaluation import format_report, report_csv, score
from .pipeline import ModelFormatError, load_bundle, run_pipeline, save_bundle, train_supervised
from .project import CostMode, project_corpus, read_cost_sidecar, write_cost_sidecar
from .synth import SynthConfig, generate

log = logging.getLogger("srlproj")

PROJECTED_CONLL = "projected.conll"
PROJECTED_ALIGN = "projected.align"
COST_SIDECAR = "costs.tsv"
DENSITY_REPORT = "density.txt"
METRICS_CSV = "metrics.csv"


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


@dataclass
class RunConfig:
    source: str | None = None
    target: str | None = None
    forward: str | None = None
    backward: str | None = None
    intersected: str | None = None
    backward_orientation: str = "ts"
    one_based: bool = False
    out: str | None = None
    threshold: float = 0.4
    cost: str = "uniform"
    variant: str = "relabel"
    rounds: int = 7
    epochs: int = 10
    seed: int = 0
    blacklist: str = "AM"
    workers: int | None = None
    projected: str | None = None
    dev: str | None = None
    warm_start: bool = False
    model: str | None = None
    input: str | None = None
    gold: str | None = None
    pred: str | None = None
    csv: str | None = None
    predict_predicates: bool = False
    score_senses: bool = False
    pairs: int = 1000
    vocab: int = 200
    length: int = 8
    shift: float = 0.0
    dropout: float = 0.0
    noise: float = 0.0

    def blacklist_set(self) -> frozenset:
        return frozenset(r for r in self.blacklist.split(",") if r)


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then the JSON config file, then explicit flags."""
    values = asdict(RunConfig())
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        unknown = set(loaded) - set(values)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        values.update(loaded)
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            values[f.name] = v
    cfg = RunConfig(**values)
    if not 0.0 <= cfg.threshold <= 1.0:
        raise UsageError(f"--threshold must lie in [0, 1], got {cfg.threshold}")
    try:
        CostMode.parse(cfg.cost)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if cfg.variant.replace("-", "_") not in ("fill_in", "relabel"):
        raise UsageError(f"unknown variant {cfg.variant!r}")
    if cfg.rounds < 0 or cfg.epochs < 1:
        raise UsageError("--rounds must be >= 0 and --epochs >= 1")
    if cfg.workers is not None and cfg.workers < 1:
        raise UsageError("--workers must be >= 1")
    return cfg


def _require(cfg: RunConfig, *names):
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + n.replace("_", "-") for n in missing))


def _workers(cfg: RunConfig) -> int:
    return cfg.workers or os.cpu_count() or 1


def _parallel_map(fn, items, workers: int):
    if workers <= 1 or len(items) < 64:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def _read_conll(path):
    try:
        return read_conll_file(path)
    except ConllError as exc:
        raise DataError(f"{path}: {exc}") from None


def _read_align(path, **kw):
    try:
        return read_alignment_file(path, **kw)
    except AlignmentError as exc:
        raise DataError(f"{path}: {exc}") from None


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# --- subcommands ---------------------------------------------------------


def cmd_project(cfg: RunConfig) -> int:
    _require(cfg, "source", "target", "out")
    if cfg.intersected is None and (cfg.forward is None or cfg.backward is None):
        raise UsageError("give --forward and --backward, or --intersected")
    source = _read_conll(cfg.source)
    target = _read_conll(cfg.target)
    if cfg.intersected:
        alignments = _read_align(cfg.intersected, one_based=cfg.one_based)
        align_files = [cfg.intersected]
    else:
        fwd = _read_align(cfg.forward, one_based=cfg.one_based)
        bwd = _read_align(cfg.backward, one_based=cfg.one_based,
                          reverse=cfg.backward_orientation == "ts")
        if len(fwd) != len(bwd):
            raise DataError(f"{cfg.forward} has {len(fwd)} lines but {cfg.backward} has {len(bwd)}")
        alignments = [intersect(f, b) for f, b in zip(fwd, bwd)]
        align_files = [cfg.forward, cfg.backward]
    if not len(source) == len(target) == len(alignments):
        raise DataError(
            f"line-count mismatch: {cfg.source} has {len(source)} sentences, {cfg.target} has "
            f"{len(target)}, {' / '.join(align_files)} has {len(alignments)} alignment lines"
        )
    try:
        pairs = [SentencePair(s, t, a) for s, t, a in zip(source, target, alignments)]
    except AlignmentError as exc:
        raise DataError(str(exc)) from None

    result = project_corpus(pairs, cfg.threshold, cfg.blacklist_set(), cost_mode=cfg.cost)
    os.makedirs(cfg.out, exist_ok=True)
    write_conll_file(os.path.join(cfg.out, PROJECTED_CONLL), result.sentences)
    _write(os.path.join(cfg.out, PROJECTED_ALIGN), write_alignments(result.alignments))
    _write(os.path.join(cfg.out, COST_SIDECAR), write_cost_sidecar(result.instances))
    report = density_report(result, len(pairs), cfg.threshold)
    _write(os.path.join(cfg.out, DENSITY_REPORT), report)
    sys.stdout.write(report)
    return 0


def density_report(result, total: int, threshold: float, bins: int = 10) -> str:
    counts = [0] * bins
    for d in result.densities:
        counts[min(int(d.value * bins), bins - 1)] += 1
    kept = len(result.kept)
    pct = 100.0 * kept / total if total else 0.0
    lines = [
        f"threshold: {threshold}",
        f"kept: {kept} / {total} sentence pairs ({pct:.2f}%)",
        f"projected instances: {len(result.instances)}",
        f"collisions: {len(result.collisions)}",
        "density histogram:",
    ]
    for b, n in enumerate(counts):
        hi = "1.0]" if b == bins - 1 else f"{(b + 1) / bins:.1f})"
        lines.append(f"  [{b / bins:.1f}, {hi}  {n}")
    return "\n".join(lines) + "\n"


def cmd_train(cfg: RunConfig) -> int:
    _require(cfg, "input", "model")
    sentences = _read_conll(cfg.input)
    try:
        bundle = train_supervised(sentences, cfg.epochs, cfg.seed)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    save_bundle(cfg.model, bundle)
    return 0


def cmd_bootstrap(cfg: RunConfig) -> int:
    _require(cfg, "projected", "out")
    conll_path = os.path.join(cfg.projected, PROJECTED_CONLL)
    align_path = os.path.join(cfg.projected, PROJECTED_ALIGN)
    cost_path = os.path.join(cfg.projected, COST_SIDECAR)
    sentences = _read_conll(conll_path)
    alignments = _read_align(align_path)
    if len(sentences) != len(alignments):
        raise DataError(f"{conll_path} and {align_path} disagree on the number of sentences")
    mode = CostMode.parse(cfg.cost)
    arg_costs = comp = None
    if os.path.exists(cost_path):
        with open(cost_path, encoding="utf-8") as fh:
            try:
                arg_costs, comp = costs_from_sidecar(read_cost_sidecar(fh.read()))
            except (ValueError, KeyError) as exc:
                raise DataError(f"{cost_path}: {exc}") from None
    elif mode is not CostMode.UNIFORM:
        raise DataError(f"cost mode {mode.value} needs the cost sidecar {cost_path}")
    dev = _read_conll(cfg.dev) if cfg.dev else None

    data = partition(sentences, [a.aligned_targets() for a in alignments], arg_costs, comp)
    if not data.labeled:
        raise DataError("projected corpus has no labelled candidates")
    config = BootstrapConfig(cfg.rounds, cfg.variant, mode, cfg.epochs, cfg.seed, cfg.warm_start)
    os.makedirs(cfg.out, exist_ok=True)
    metrics = os.path.join(cfg.out, METRICS_CSV)
    if os.path.exists(metrics):
        os.remove(metrics)
    if dev is None:
        log.warning("no --dev set given; %s will only hold a header", metrics)
        _write(metrics, ",".join(("round", "stage", "scope", "precision", "recall", "f1")) + "\n")

    def on_round(state: RoundState):
        save_bundle(os.path.join(cfg.out, f"model_round{state.round}.model"), state.bundle)
        if dev is not None:
            rep = checkpoint_metrics(state.round, state.bundle, dev, metrics, cfg.blacklist_set())
            log.info("round %d: dev F1 %.4f", state.round, rep.f1)

    bootstrap(data, config, on_round)
    return 0


def _predict_one(job):
    bundle, sentence, gold_predicates = job
    return run_pipeline(bundle, sentence, gold_predicates)


def cmd_predict(cfg: RunConfig) -> int:
    _require(cfg, "model", "input")
    try:
        bundle = load_bundle(cfg.model)
    except (OSError, ModelFormatError) as exc:
        raise DataError(f"{cfg.model}: {exc}") from None
    sentences = _read_conll(cfg.input)
    gold_preds = not cfg.predict_predicates
    try:
        out = _parallel_map(_predict_one, [(bundle, s, gold_preds) for s in sentences], _workers(cfg))
    except KeyError as exc:
        raise DataError(str(exc)) from None
    text = write_conll(out)
    if cfg.out:
        _write(cfg.out, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_evaluate(cfg: RunConfig) -> int:
    _require(cfg, "gold", "pred")
    gold = _read_conll(cfg.gold)
    pred = _read_conll(cfg.pred)
    try:
        report = score(gold, pred, gold_predicate_mode=not cfg.score_senses,
                       role_blacklist=cfg.blacklist_set())
    except ValueError as exc:
        raise DataError(f"{cfg.gold} vs {cfg.pred}: {exc}") from None
    sys.stdout.write(format_report(report))
    if cfg.csv:
        _write(cfg.csv, report_csv(report))
    return 0


def cmd_synth(cfg: RunConfig) -> int:
    _require(cfg, "out")
    try:
        sc = SynthConfig(cfg.pairs, cfg.vocab, cfg.length, cfg.shift, cfg.dropout, cfg.noise, cfg.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    corpus = generate(sc)
    os.makedirs(cfg.out, exist_ok=True)
    write_conll_file(os.path.join(cfg.out, "source.conll"), corpus.source)
    write_conll_file(os.path.join(cfg.out, "target.conll"), corpus.target)
    write_conll_file(os.path.join(cfg.out, "gold.conll"), corpus.gold)
    _write(os.path.join(cfg.out, "forward.align"), write_alignments(corpus.forward))
    _write(os.path.join(cfg.out, "backward.align"), write_alignments(corpus.backward, reverse=True))
    return 0


COMMANDS = {
    "project": cmd_project,
    "train": cmd_train,
    "bootstrap": cmd_bootstrap,
    "predict": cmd_predict,
    "evaluate": cmd_evaluate,
    "synth": cmd_synth,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON file of option defaults")
    common.add_argument("--seed", type=int)
    common.add_argument("--workers", type=int)
    common.add_argument("--blacklist", help="comma-separated roles never projected or scored; ROLE-* variants match too")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="srlproj", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("project", parents=[common], help="filter and project a parallel corpus")
    p.add_argument("--source")
    p.add_argument("--target")
    p.add_argument("--forward", help="source-to-target Pharaoh alignments")
    p.add_argument("--backward", help="target-to-source Pharaoh alignments")
    p.add_argument("--backward-orientation", choices=["ts", "st"],
                   help="pair order in the backward file (default ts)")
    p.add_argument("--intersected", help="pre-intersected alignments; skips intersection")
    p.add_argument("--one-based", action="store_true", default=None)
    p.add_argument("--threshold", type=float)
    p.add_argument("--cost", help="uniform|comp|dep|comp+dep")
    p.add_argument("--out")

    p = sub.add_parser("train", parents=[common], help="supervised training on labelled CoNLL")
    p.add_argument("--input")
    p.add_argument("--model")
    p.add_argument("--epochs", type=int)

    p = sub.add_parser("bootstrap", parents=[common], help="self-training on a projected corpus")
    p.add_argument("--projected", help="output directory of `project`")
    p.add_argument("--out")
    p.add_argument("--cost", help="uniform|comp|dep|comp+dep")
    p.add_argument("--variant", choices=["fill-in", "relabel", "fill_in"])
    p.add_argument("--rounds", type=int)
    p.add_argument("--epochs", type=int)
    p.add_argument("--dev", help="gold CoNLL for per-round metrics")
    p.add_argument("--warm-start", action="store_true", default=None)

    p = sub.add_parser("predict", parents=[common], help="label a CoNLL file")
    p.add_argument("--model")
    p.add_argument("--input")
    p.add_argument("--out")
    p.add_argument("--predict-predicates", action="store_true", default=None,
                   help="identify predicates instead of using the input's")

    p = sub.add_parser("evaluate", parents=[common], help="score predictions against gold")
    p.add_argument("--gold")
    p.add_argument("--pred")
    p.add_argument("--csv")
    p.add_argument("--score-senses", action="store_true", default=None)

    p = sub.add_parser("synth", parents=[common], help="write a synthetic parallel corpus")
    p.add_argument("--out")
    p.add_argument("--pairs", type=int)
    p.add_argument("--vocab", type=int)
    p.add_argument("--length", type=int)
    p.add_argument("--shift", type=float)
    p.add_argument("--dropout", type=float)
    p.add_argument("--noise", type=float)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"srlproj {args.command}: {exc}", file=sys.stderr)
        return 1
    except (DataError, OSError) as exc:
        print(f"srlproj {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
