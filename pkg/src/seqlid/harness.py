"""Experiment protocol: corpus splits, outcome tallies and summary statistics."""

from __future__ import annotations

import enum
import random
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from seqlid.classifier import ClassifierConfig, Decision, EndPolicy, classify_stream
from seqlid.estimator import EstimatorConfig
from seqlid.model import GlobalModel, train
from seqlid.tokenizer import TokenizerMode, shape_word, tokenize


class InsufficientDataError(ValueError):
    pass


@dataclass(frozen=True)
class SplitSpec:
    train_sizes: tuple[int, ...] = (2000, 200)
    test_file_sizes: tuple[int, ...] = (1, 5, 10, 20)
    files_per_size: int = 25

    def __post_init__(self) -> None:
        object.__setattr__(self, "train_sizes", tuple(int(s) for s in self.train_sizes))
        object.__setattr__(self, "test_file_sizes", tuple(int(s) for s in self.test_file_sizes))
        if not self.train_sizes or not self.test_file_sizes:
            raise ValueError("need at least one training size and one test file size")
        if min(self.train_sizes + self.test_file_sizes) < 1 or self.files_per_size < 1:
            raise ValueError("all sizes must be >= 1")

    @property
    def demand(self) -> int:
        return sum(self.train_sizes) + self.files_per_size * sum(self.test_file_sizes)


def split_corpus(
    tokens: Sequence[str], spec: SplitSpec = SplitSpec(), rng_seed: int = 0, shuffle: bool = False
) -> tuple[list[list[str]], dict[int, list[list[str]]]]:
    """Cut a token sequence into disjoint contiguous training and test files.

    Slices are laid out training first, then test files grouped by size.
    With ``shuffle`` the layout order of the slices is permuted by the seed;
    the returned grouping is the same either way.

    Returns:
        ``(train, tests)`` where ``train[i]`` has ``spec.train_sizes[i]``
        tokens and ``tests[size]`` lists ``spec.files_per_size`` files.
    """
    if len(tokens) < spec.demand:
        raise InsufficientDataError(
            f"corpus has {len(tokens)} tokens, split needs {spec.demand} (short by {spec.demand - len(tokens)})"
        )
    lengths = list(spec.train_sizes)
    for size in spec.test_file_sizes:
        lengths.extend([size] * spec.files_per_size)
    order = list(range(len(lengths)))
    if shuffle:
        random.Random(rng_seed).shuffle(order)
    slices: list[list[str]] = [[] for _ in lengths]
    pos = 0
    for idx in order:
        slices[idx] = list(tokens[pos : pos + lengths[idx]])
        pos += lengths[idx]

    n_train = len(spec.train_sizes)
    train_files = slices[:n_train]
    tests: dict[int, list[list[str]]] = {}
    k = n_train
    for size in spec.test_file_sizes:
        tests.setdefault(size, []).extend(slices[k : k + spec.files_per_size])
        k += spec.files_per_size
    return train_files, tests


class OutcomeKind(str, enum.Enum):
    DEFINITIVE_CORRECT = "definitive_correct"
    NODECISION_CORRECT = "nodecision_correct"
    NODECISION_INCORRECT = "nodecision_incorrect"
    DEFINITIVE_INCORRECT = "definitive_incorrect"


OUTCOME_ORDER = tuple(OutcomeKind)


@dataclass(frozen=True)
class Outcome:
    kind: OutcomeKind
    predicted: str
    actual: str
    tokens_consumed: int
    remaining: int
    file_size: int = 0

    @property
    def definitive(self) -> bool:
        return self.kind in (OutcomeKind.DEFINITIVE_CORRECT, OutcomeKind.DEFINITIVE_INCORRECT)

    @property
    def correct(self) -> bool:
        return self.predicted == self.actual


def classify_outcome(decision: Decision, actual: str, file_size: int = 0) -> Outcome:
    correct = decision.category == actual
    if decision.decided:
        kind = OutcomeKind.DEFINITIVE_CORRECT if correct else OutcomeKind.DEFINITIVE_INCORRECT
    else:
        kind = OutcomeKind.NODECISION_CORRECT if correct else OutcomeKind.NODECISION_INCORRECT
    return Outcome(kind, decision.category, actual, decision.tokens_consumed, len(decision.remaining), file_size)


@dataclass(frozen=True)
class CellMetrics:
    counts: dict[str, int]
    total: int
    accuracy: float
    decisiveness: float


def metrics_from_counts(
    definitive_correct: int, nodecision_correct: int, nodecision_incorrect: int, definitive_incorrect: int
) -> CellMetrics:
    total = definitive_correct + nodecision_correct + nodecision_incorrect + definitive_incorrect
    counts = {
        OutcomeKind.DEFINITIVE_CORRECT.value: definitive_correct,
        OutcomeKind.NODECISION_CORRECT.value: nodecision_correct,
        OutcomeKind.NODECISION_INCORRECT.value: nodecision_incorrect,
        OutcomeKind.DEFINITIVE_INCORRECT.value: definitive_incorrect,
    }
    if total == 0:
        return CellMetrics(counts, 0, float("nan"), float("nan"))
    return CellMetrics(
        counts,
        total,
        (definitive_correct + nodecision_correct) / total,
        (definitive_correct + definitive_incorrect) / total,
    )


def outcome_metrics(outcomes: Iterable[Outcome]) -> CellMetrics:
    tally = Counter(o.kind for o in outcomes)
    return metrics_from_counts(*(tally[k] for k in OUTCOME_ORDER))


@dataclass(frozen=True)
class ConvergenceStats:
    """Mean tokens read before a definitive decision; ``None`` where no such outcome exists."""

    correct: float | None
    incorrect: float | None
    all: float | None
    max: int | None


def _mean(values: list[int]) -> float | None:
    return sum(values) / len(values) if values else None


def convergence_stats(outcomes: Iterable[Outcome]) -> ConvergenceStats:
    definitive = [o for o in outcomes if o.definitive]
    right = [o.tokens_consumed for o in definitive if o.correct]
    wrong = [o.tokens_consumed for o in definitive if not o.correct]
    every = right + wrong
    return ConvergenceStats(_mean(right), _mean(wrong), _mean(every), max(every) if every else None)


@dataclass(frozen=True)
class RemainingDistribution:
    """Histogram of remaining-set sizes: size -> (correct, incorrect, all)."""

    histogram: dict[int, tuple[int, int, int]]
    mean: float | None


def remaining_distribution(outcomes: Iterable[Outcome]) -> RemainingDistribution:
    right: Counter = Counter()
    wrong: Counter = Counter()
    for o in outcomes:
        size = 1 if o.definitive else o.remaining
        (right if o.correct else wrong)[size] += 1
    sizes = sorted(set(right) | set(wrong))
    hist = {s: (right[s], wrong[s], right[s] + wrong[s]) for s in sizes}
    total = sum(v[2] for v in hist.values())
    mean = sum(s * v[2] for s, v in hist.items()) / total if total else None
    return RemainingDistribution(hist, mean)


def confusion_matrix(outcomes: Iterable[Outcome], categories: Sequence[str]) -> dict[str, dict[str, int]]:
    """``matrix[actual][predicted]``; non-decisions count toward the top-base category."""
    matrix = {a: {p: 0 for p in categories} for a in categories}
    for o in outcomes:
        matrix[o.actual][o.predicted] += 1
    return matrix


@dataclass
class RunReport:
    """All outcomes for one (training size, threshold) pair."""

    train_size: int
    threshold: float
    outcomes: list[Outcome]

    def metrics(self, file_size: int | None = None) -> CellMetrics:
        return outcome_metrics(o for o in self.outcomes if file_size is None or o.file_size == file_size)

    @property
    def convergence(self) -> ConvergenceStats:
        return convergence_stats(self.outcomes)

    @property
    def remaining(self) -> RemainingDistribution:
        return remaining_distribution(self.outcomes)

    def confusion(self, categories: Sequence[str]) -> dict[str, dict[str, int]]:
        return confusion_matrix(self.outcomes, categories)


@dataclass
class ExperimentReport:
    categories: list[str]
    mode: TokenizerMode
    spec: SplitSpec
    thresholds: list[float]
    end_policy: EndPolicy
    runs: list[RunReport] = field(default_factory=list)
    models: dict[int, GlobalModel] = field(default_factory=dict, repr=False)

    def run(self, train_size: int, threshold: float) -> RunReport:
        for r in self.runs:
            if r.train_size == train_size and r.threshold == threshold:
                return r
        raise KeyError((train_size, threshold))

    def to_dict(self) -> dict:
        runs = []
        for r in self.runs:
            cells = {str(s): _cell_dict(r.metrics(s)) for s in self.spec.test_file_sizes}
            cells["all"] = _cell_dict(r.metrics())
            conv = r.convergence
            rem = r.remaining
            runs.append(
                {
                    "train_size": r.train_size,
                    "threshold": r.threshold,
                    "cells": cells,
                    "convergence": {
                        "correct": conv.correct,
                        "incorrect": conv.incorrect,
                        "all": conv.all,
                        "max": conv.max,
                    },
                    "remaining": {
                        "histogram": {str(k): list(v) for k, v in rem.histogram.items()},
                        "mean": rem.mean,
                    },
                    "confusion": r.confusion(self.categories),
                    "outcomes": [
                        {
                            "kind": o.kind.value,
                            "predicted": o.predicted,
                            "actual": o.actual,
                            "tokens_consumed": o.tokens_consumed,
                            "remaining": o.remaining,
                            "file_size": o.file_size,
                        }
                        for o in r.outcomes
                    ],
                }
            )
        return {
            "categories": list(self.categories),
            "mode": self.mode.value,
            "split": {
                "train_sizes": list(self.spec.train_sizes),
                "test_file_sizes": list(self.spec.test_file_sizes),
                "files_per_size": self.spec.files_per_size,
            },
            "thresholds": list(self.thresholds),
            "end_policy": self.end_policy.value,
            "runs": runs,
        }


def _cell_dict(m: CellMetrics) -> dict:
    return {"counts": dict(m.counts), "total": m.total, "accuracy": m.accuracy, "decisiveness": m.decisiveness}


def _as_tokens(value: str | Sequence[str], mode: TokenizerMode) -> list[str]:
    if isinstance(value, str):
        return tokenize(value, mode)
    if mode is TokenizerMode.SHAPE:
        return [shape_word(t) for t in value]
    return list(value)


def run_experiment(
    corpora: Mapping[str, str | Sequence[str]],
    spec: SplitSpec = SplitSpec(),
    thresholds: Sequence[float] = (0.0, 10.0, 14.0),
    mode: TokenizerMode | str = TokenizerMode.WORD,
    config: EstimatorConfig = EstimatorConfig(),
    end_policy: EndPolicy | str = EndPolicy.BEST,
    rng_seed: int = 0,
    shuffle: bool = False,
) -> ExperimentReport:
    """Train per training size, then classify every test file at every threshold.

    Corpora are raw text (tokenized in ``mode``) or ready token lists. The
    same test files are reused for every training size.
    """
    mode = TokenizerMode(mode)
    end_policy = EndPolicy.parse(end_policy)
    if len(corpora) < 2:
        raise ValueError(f"need at least 2 categories, got {len(corpora)}")

    splits = {}
    for cat, value in corpora.items():
        try:
            splits[cat] = split_corpus(_as_tokens(value, mode), spec, rng_seed, shuffle)
        except InsufficientDataError as exc:
            raise InsufficientDataError(f"category {cat!r}: {exc}") from None

    report = ExperimentReport(list(corpora), mode, spec, list(thresholds), end_policy)
    for ti, train_size in enumerate(spec.train_sizes):
        model = train({cat: s[0][ti] for cat, s in splits.items()}, config, mode)
        report.models[train_size] = model
        for threshold in thresholds:
            cfg = ClassifierConfig(float(threshold), end_policy)
            outcomes = []
            for cat, (_, tests) in splits.items():
                for size in spec.test_file_sizes:
                    for tokens in tests[size]:
                        outcomes.append(classify_outcome(classify_stream(tokens, model, cfg), cat, size))
            report.runs.append(RunReport(train_size, float(threshold), outcomes))
    return report

