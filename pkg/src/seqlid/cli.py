"""Command line: ``seqlid {train,classify,eval,tokenize,split}``.

Exit status is 0 on success, 1 on usage errors and 2 on data or model
errors. Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from seqlid import __version__
from seqlid.classifier import ClassifierConfig, Session, Status
from seqlid.config import REPORT_FORMATS, CliConfig, ConfigError, load_config
from seqlid.harness import SplitSpec, run_experiment, split_corpus
from seqlid.model import FORMAT_VERSION, ModelFormatError, load, save, train
from seqlid.report import render_json, render_text
from seqlid.synthetic import generate_synthetic_corpora
from seqlid.tokenizer import TokenizerMode, tokenize

log = logging.getLogger("seqlid")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _csv(kind):
    def parse(text: str) -> list:
        try:
            return [kind(x) for x in text.split(",") if x.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected comma-separated {kind.__name__} values, got {text!r}")

    return parse


def _read_text(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def read_corpus_dir(directory: str) -> dict[str, str]:
    """One UTF-8 file per category; the file stem is the category id."""
    root = Path(directory)
    if not root.is_dir():
        raise FileNotFoundError(f"corpus directory {directory!r} not found")
    files = sorted(p for p in root.iterdir() if p.is_file() and not p.name.startswith("."))
    corpora = {}
    for p in files:
        if p.stem in corpora:
            raise ValueError(f"two corpus files map to category {p.stem!r}")
        corpora[p.stem] = p.read_text(encoding="utf-8")
    if len(corpora) < 2:
        raise ValueError(f"corpus directory {directory!r} holds {len(corpora)} files, need at least 2")
    return corpora


def _settings(args) -> CliConfig:
    base = load_config(args.config)
    return base.with_overrides(
        mode=getattr(args, "mode", None),
        d=getattr(args, "d", None),
        small_count_cutoff=getattr(args, "cutoff", None),
        zero_target=getattr(args, "zero_target", None),
        threshold=getattr(args, "threshold", None),
        end_policy=getattr(args, "end_policy", None),
        report=getattr(args, "report", None),
    )


def cmd_train(args) -> int:
    cfg = _settings(args)
    corpora = {
        cat: tokenize(text, cfg.mode)[: args.train_size] if args.train_size else tokenize(text, cfg.mode)
        for cat, text in read_corpus_dir(args.corpus_dir).items()
    }
    model = train(corpora, cfg.estimator_config(), cfg.mode)
    save(model, args.out)
    log.info("wrote %s (%d categories, %d distinct tokens)", args.out, len(model.categories), len(model.priors))
    return EXIT_OK


def _fmt_triple(values) -> str:
    return "\t".join(format(v, ".6f") for v in values)


def cmd_classify(args) -> int:
    model = load(args.model)
    cfg = _settings(args)
    session = Session(model, ClassifierConfig(cfg.threshold, cfg.end_policy))
    out = sys.stdout
    decision = None
    for tok in tokenize(_read_text(args.input), model.mode):
        step = session.step(tok)
        if args.trace:
            for cat, acc in session.accumulators().items():
                out.write(f"TRACE\t{session.tokens_seen}\t{tok}\t{cat}\t{_fmt_triple(acc)}\n")
        if step.decided:
            decision = step
            break
    if decision is None:
        decision = session.finish()
    if decision.status is Status.DECIDED:
        out.write(f"DECIDED {decision.category} {decision.tokens_consumed}\n")
    elif decision.status is Status.EXHAUSTED_SET:
        out.write("EXHAUSTED " + " ".join(decision.remaining) + "\n")
    else:
        out.write(f"EXHAUSTED {decision.category}\n")
    return EXIT_OK


def cmd_eval(args) -> int:
    cfg = _settings(args)
    if (args.corpus_dir is None) == (args.synthetic is None):
        raise UsageError("give exactly one of --corpus-dir or --synthetic")
    spec = SplitSpec(tuple(args.train_sizes), tuple(args.test_sizes), args.files_per_size)
    if args.corpus_dir is not None:
        corpora = read_corpus_dir(args.corpus_dir)
    else:
        corpora = generate_synthetic_corpora(
            args.synthetic,
            args.vocab_size,
            args.tokens_per_category or spec.demand,
            args.similarity,
            args.seed,
            args.zipf,
        )
    thresholds = args.thresholds if args.thresholds else [cfg.threshold]
    report = run_experiment(
        corpora, spec, thresholds, cfg.mode, cfg.estimator_config(), cfg.end_policy, args.seed, args.shuffle
    )
    rendered = render_json(report) if cfg.report == "json" else render_text(report)
    if args.out:
        Path(args.out).write_text(rendered, encoding="utf-8")
    else:
        sys.stdout.write(rendered)
    if args.figures:
        from seqlid.plotting import plot_report

        for path in plot_report(report, args.figures):
            log.info("wrote %s", path)
    return EXIT_OK


def cmd_tokenize(args) -> int:
    cfg = _settings(args)
    for tok in tokenize(_read_text(args.input), cfg.mode):
        sys.stdout.write(tok + "\n")
    return EXIT_OK


def cmd_split(args) -> int:
    cfg = _settings(args)
    spec = SplitSpec(tuple(args.train_sizes), tuple(args.test_sizes), args.files_per_size)
    train_files, tests = split_corpus(tokenize(_read_text(args.corpus), cfg.mode), spec, args.seed, args.shuffle)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    width = len(str(spec.files_per_size - 1))
    for size, tokens in zip(spec.train_sizes, train_files):
        (out / f"train_{size}.txt").write_text(" ".join(tokens) + "\n", encoding="utf-8")
    for size, files in tests.items():
        for k, tokens in enumerate(files):
            (out / f"test_{size}_{k:0{width}d}.txt").write_text(" ".join(tokens) + "\n", encoding="utf-8")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key=value defaults file")
    common.add_argument("-v", "--verbose", action="store_true")

    mode = argparse.ArgumentParser(add_help=False)
    mode.add_argument("--mode", choices=[m.value for m in TokenizerMode])

    estim = argparse.ArgumentParser(add_help=False)
    estim.add_argument("--d", type=float, help="standard deviations for the normal intervals (default 2)")
    estim.add_argument("--cutoff", type=int, help="counts below this use exact binomial bounds (default 10)")
    estim.add_argument("--zero-target", type=float, help="zero-probability target (default 0.95)")

    decide = argparse.ArgumentParser(add_help=False)
    decide.add_argument("--threshold", type=float, help="activation threshold")
    decide.add_argument("--end-policy", choices=["best", "set", "candidate_set"])

    sizes = argparse.ArgumentParser(add_help=False)
    sizes.add_argument("--train-sizes", type=_csv(int), default=[2000, 200], metavar="CSV")
    sizes.add_argument("--test-sizes", type=_csv(int), default=[1, 5, 10, 20], metavar="CSV")
    sizes.add_argument("--files-per-size", type=int, default=25, metavar="N")
    sizes.add_argument("--seed", type=int, default=0)
    sizes.add_argument("--shuffle", action="store_true", help="permute slice layout by the seed")

    parser = _Parser(prog="seqlid", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"seqlid {__version__} (model format {FORMAT_VERSION})")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("train", parents=[common, mode, estim], help="train a model from a corpus directory")
    p.add_argument("--corpus-dir", required=True, metavar="DIR")
    p.add_argument("--out", required=True, metavar="PATH")
    p.add_argument("--train-size", type=int, metavar="N", help="use only the first N tokens of each category")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("classify", parents=[common, decide], help="classify text from a file or stdin")
    p.add_argument("--model", required=True, metavar="PATH")
    p.add_argument("--trace", action="store_true", help="print accumulators after every token")
    p.add_argument("input", nargs="?", metavar="FILE")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("eval", parents=[common, mode, estim, decide, sizes], help="run a threshold sweep experiment")
    p.add_argument("--corpus-dir", metavar="DIR")
    p.add_argument("--synthetic", type=int, metavar="N", help="use N synthetic categories instead of a corpus")
    p.add_argument("--vocab-size", type=int, default=5000)
    p.add_argument("--similarity", type=float, default=0.5)
    p.add_argument("--zipf", type=float, default=1.0, help="Zipf exponent for synthetic corpora")
    p.add_argument("--tokens-per-category", type=int, metavar="N")
    p.add_argument("--thresholds", type=_csv(float), metavar="CSV")
    p.add_argument("--report", choices=REPORT_FORMATS)
    p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    p.add_argument("--figures", metavar="DIR", help="also render PNG figures into DIR")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("tokenize", parents=[common, mode], help="print one token per line")
    p.add_argument("input", nargs="?", metavar="FILE")
    p.set_defaults(func=cmd_tokenize)

    p = sub.add_parser("split", parents=[common, mode, sizes], help="split one corpus into train/test files")
    p.add_argument("--corpus", required=True, metavar="FILE")
    p.add_argument("--out-dir", required=True, metavar="DIR")
    p.set_defaults(func=cmd_split)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s", stream=sys.stderr
    )
    try:
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"seqlid {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ModelFormatError, ValueError, OSError) as exc:
        print(f"seqlid {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
