"""Trained models: count tables, per-category probability triples, priors.

Models are written as line-oriented UTF-8 with tab-separated fields::

    SEQLID  version=1  mode=shape  d=2  cutoff=10  zero_target=0.95  base_cutoff=0.05
    PRIOR   <token>  <p>
    UNSEEN_PRIOR  <p>
    CATEGORY  <id>  zero=<p>  tokens=<count>
    T  <token>  <low>  <base>  <high>

Probabilities carry 17 significant digits so doubles survive a round trip
bit for bit. Token tables are sorted so output is deterministic.
"""

from __future__ import annotations

import math
import os
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from seqlid.estimator import EstimatorConfig, ProbabilityTriple, estimate, prior_probability, zero_probability
from seqlid.tokenizer import TokenizerMode

FORMAT_VERSION = 1
MAGIC = "SEQLID"
_SUM_TOL = 1e-9
_EVIDENCE_CACHE_LIMIT = 200_000


class UnknownCategoryError(KeyError):
    pass


class ModelFormatError(ValueError):
    """Malformed model file; ``lineno`` is 1-based."""

    def __init__(self, lineno: int, message: str) -> None:
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class ModelVersionError(ModelFormatError):
    pass


@dataclass
class CountTable:
    category_counts: dict[str, Counter]
    category_totals: dict[str, int]
    global_counts: Counter
    grand_total: int

    @property
    def categories(self) -> list[str]:
        return list(self.category_counts)


def _check_token(token: str, category: str) -> None:
    if not isinstance(token, str) or not token:
        raise ValueError(f"empty or non-string token in category {category!r}")
    if "\t" in token or "\n" in token or "\r" in token:
        raise ValueError(f"token {token!r} in category {category!r} contains a tab or newline")


def count(corpora: Mapping[str, Iterable[str]]) -> CountTable:
    """Exact token counts per category and pooled across categories."""
    if len(corpora) < 2:
        raise ValueError(f"need at least 2 categories, got {len(corpora)}")
    category_counts: dict[str, Counter] = {}
    category_totals: dict[str, int] = {}
    global_counts: Counter = Counter()
    for category, tokens in corpora.items():
        counts: Counter = Counter()
        for tok in tokens:
            _check_token(tok, category)
            counts[tok] += 1
        total = sum(counts.values())
        if total == 0:
            raise ValueError(f"category {category!r} has no tokens")
        category_counts[category] = counts
        category_totals[category] = total
        global_counts.update(counts)
    return CountTable(category_counts, category_totals, global_counts, sum(category_totals.values()))


@dataclass(frozen=True)
class CategoryModel:
    category_id: str
    token_probs: dict[str, ProbabilityTriple]
    zero_prob: float
    training_tokens: int

    def __post_init__(self) -> None:
        if not self.zero_prob > 0:
            raise ValueError(f"category {self.category_id!r}: zero probability must be positive")

    @property
    def zero_triple(self) -> ProbabilityTriple:
        return ProbabilityTriple.uniform(self.zero_prob)

    def triple(self, token: str) -> ProbabilityTriple:
        found = self.token_probs.get(token)
        return found if found is not None else self.zero_triple


@dataclass(frozen=True)
class GlobalModel:
    categories: tuple[CategoryModel, ...]
    priors: dict[str, float]
    unseen_prior: float
    mode: TokenizerMode = TokenizerMode.WORD
    estimator_config: EstimatorConfig = EstimatorConfig()
    format_version: int = FORMAT_VERSION
    _index: dict[str, int] = field(init=False, repr=False, compare=False)
    _evidence: dict[str, tuple] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "categories", tuple(self.categories))
        object.__setattr__(self, "mode", TokenizerMode(self.mode))
        ids = [c.category_id for c in self.categories]
        if len(set(ids)) != len(ids):
            raise ValueError("category ids must be unique")
        if not self.unseen_prior > 0:
            raise ValueError("unseen prior must be positive")
        object.__setattr__(self, "_index", {cid: i for i, cid in enumerate(ids)})
        object.__setattr__(self, "_evidence", {})

    @property
    def category_ids(self) -> list[str]:
        return [c.category_id for c in self.categories]

    def category(self, category_id: str) -> CategoryModel:
        try:
            return self.categories[self._index[category_id]]
        except KeyError:
            raise UnknownCategoryError(category_id) from None

    def prior(self, token: str) -> float:
        return self.priors.get(token, self.unseen_prior)

    def evidence(self, token: str) -> tuple[tuple[float, float, float], ...]:
        """Per-category log-ratio increments ``ln(p(t|l) / p(t))`` for one token.

        A zero low bound is floored at the category's zero probability so
        the increment stays finite.
        """
        cached = self._evidence.get(token)
        if cached is not None:
            return cached
        log_prior = math.log(self.prior(token))
        rows = []
        for cat in self.categories:
            tri = cat.triple(token)
            low = tri.low if tri.low > 0 else cat.zero_prob
            rows.append(
                (math.log(low) - log_prior, math.log(tri.base) - log_prior, math.log(tri.high) - log_prior)
            )
        result = tuple(rows)
        if len(self._evidence) >= _EVIDENCE_CACHE_LIMIT:
            self._evidence.clear()
        self._evidence[token] = result
        return result


def train(
    corpora: Mapping[str, Iterable[str]],
    config: EstimatorConfig = EstimatorConfig(),
    mode: TokenizerMode | str = TokenizerMode.WORD,
) -> GlobalModel:
    """Estimate a model from labelled token streams.

    Category order follows the mapping's iteration order and is used to
    break ties during classification.
    """
    table = count(corpora)
    categories = []
    for cid, counts in table.category_counts.items():
        n = table.category_totals[cid]
        probs = {tok: estimate(counts[tok], n, config) for tok in sorted(counts)}
        categories.append(CategoryModel(cid, probs, zero_probability(n, config.zero_target), n))
    priors = {
        tok: prior_probability(table.global_counts[tok], table.grand_total, config)
        for tok in sorted(table.global_counts)
    }
    unseen = zero_probability(table.grand_total, config.zero_target)
    return GlobalModel(tuple(categories), priors, unseen, TokenizerMode(mode), config)


def lookup(model: GlobalModel, category: str, token: str) -> tuple[ProbabilityTriple, float]:
    return model.category(category).triple(token), model.prior(token)


def _fmt(x: float) -> str:
    return format(x, ".17g")


def serialize(model: GlobalModel) -> bytes:
    cfg = model.estimator_config
    lines = [
        "\t".join(
            [
                MAGIC,
                f"version={model.format_version}",
                f"mode={model.mode.value}",
                f"d={_fmt(cfg.d)}",
                f"cutoff={cfg.small_count_cutoff}",
                f"zero_target={_fmt(cfg.zero_target)}",
                f"base_cutoff={_fmt(cfg.large_count_base_cutoff)}",
            ]
        )
    ]
    for tok in sorted(model.priors):
        lines.append(f"PRIOR\t{tok}\t{_fmt(model.priors[tok])}")
    lines.append(f"UNSEEN_PRIOR\t{_fmt(model.unseen_prior)}")
    for cat in model.categories:
        lines.append(f"CATEGORY\t{cat.category_id}\tzero={_fmt(cat.zero_prob)}\ttokens={cat.training_tokens}")
        for tok in sorted(cat.token_probs):
            t = cat.token_probs[tok]
            lines.append(f"T\t{tok}\t{_fmt(t.low)}\t{_fmt(t.base)}\t{_fmt(t.high)}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _parse_float(text: str, lineno: int, what: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ModelFormatError(lineno, f"bad {what} {text!r}") from None
    if not math.isfinite(value):
        raise ModelFormatError(lineno, f"non-finite {what} {text!r}")
    return value


def _parse_int(text: str, lineno: int, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ModelFormatError(lineno, f"bad {what} {text!r}") from None


def _keyvals(fields: list[str], lineno: int) -> dict[str, str]:
    out = {}
    for f in fields:
        key, sep, value = f.partition("=")
        if not sep:
            raise ModelFormatError(lineno, f"expected key=value, got {f!r}")
        out[key] = value
    return out


def _parse_header(line: str) -> tuple[TokenizerMode, EstimatorConfig, int]:
    fields = line.split("\t")
    if fields[0] != MAGIC:
        raise ModelFormatError(1, f"not a model file (expected {MAGIC} header)")
    kv = _keyvals(fields[1:], 1)
    version = _parse_int(kv.get("version", ""), 1, "version")
    if version != FORMAT_VERSION:
        raise ModelVersionError(1, f"unsupported format version {version} (expected {FORMAT_VERSION})")
    missing = {"mode", "d", "cutoff", "zero_target"} - kv.keys()
    if missing:
        raise ModelFormatError(1, f"header lacks {', '.join(sorted(missing))}")
    try:
        mode = TokenizerMode(kv["mode"])
        config = EstimatorConfig(
            d=_parse_float(kv["d"], 1, "d"),
            small_count_cutoff=_parse_int(kv["cutoff"], 1, "cutoff"),
            zero_target=_parse_float(kv["zero_target"], 1, "zero_target"),
            large_count_base_cutoff=_parse_float(kv.get("base_cutoff", "0.05"), 1, "base_cutoff"),
        )
    except ValueError as exc:
        if isinstance(exc, ModelFormatError):
            raise
        raise ModelFormatError(1, str(exc)) from None
    return mode, config, version


def deserialize(data: bytes | str) -> GlobalModel:
    """Parse a model file.

    Raises:
        ModelVersionError: unknown format version.
        ModelFormatError: malformed or truncated input, duplicate entries.
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    if not text:
        raise ModelFormatError(1, "empty model file")
    lines = text.split("\n")
    if lines[-1] != "":
        raise ModelFormatError(len(lines), "truncated input: missing final newline")
    lines.pop()

    mode, config, version = _parse_header(lines[0])
    priors: dict[str, float] = {}
    unseen_prior: float | None = None
    categories: list[CategoryModel] = []
    current: tuple[str, float, int, int] | None = None
    current_probs: dict[str, ProbabilityTriple] = {}
    seen_ids: set[str] = set()

    def close_category(lineno: int) -> None:
        cid, zero, tokens, _ = current
        total = math.fsum(t.base for t in current_probs.values())
        if abs(total - 1.0) > _SUM_TOL:
            raise ModelFormatError(
                lineno, f"truncated input: base probabilities of category {cid!r} sum to {total!r}, not 1"
            )
        try:
            categories.append(CategoryModel(cid, dict(current_probs), zero, tokens))
        except ValueError as exc:
            raise ModelFormatError(current[3], str(exc)) from None

    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split("\t")
        tag = fields[0]
        if tag == "PRIOR":
            if len(fields) != 3:
                raise ModelFormatError(lineno, "PRIOR needs a token and a probability")
            if unseen_prior is not None or current is not None:
                raise ModelFormatError(lineno, "PRIOR after UNSEEN_PRIOR or CATEGORY")
            tok = fields[1]
            if tok in priors:
                raise ModelFormatError(lineno, f"duplicate prior for token {tok!r}")
            p = _parse_float(fields[2], lineno, "probability")
            if not 0 < p <= 1:
                raise ModelFormatError(lineno, f"prior {p!r} outside (0, 1]")
            priors[tok] = p
        elif tag == "UNSEEN_PRIOR":
            if len(fields) != 2:
                raise ModelFormatError(lineno, "UNSEEN_PRIOR needs one probability")
            if unseen_prior is not None or current is not None:
                raise ModelFormatError(lineno, "misplaced UNSEEN_PRIOR")
            unseen_prior = _parse_float(fields[1], lineno, "probability")
            if not 0 < unseen_prior <= 1:
                raise ModelFormatError(lineno, f"unseen prior {unseen_prior!r} outside (0, 1]")
            if abs(math.fsum(priors.values()) - 1.0) > _SUM_TOL:
                raise ModelFormatError(lineno, "priors do not sum to 1")
        elif tag == "CATEGORY":
            if len(fields) != 4:
                raise ModelFormatError(lineno, "CATEGORY needs id, zero= and tokens=")
            if unseen_prior is None:
                raise ModelFormatError(lineno, "CATEGORY before UNSEEN_PRIOR")
            if current is not None:
                close_category(lineno - 1)
            cid = fields[1]
            if not cid or cid in seen_ids:
                raise ModelFormatError(lineno, f"empty or duplicate category id {cid!r}")
            seen_ids.add(cid)
            kv = _keyvals(fields[2:], lineno)
            if set(kv) != {"zero", "tokens"}:
                raise ModelFormatError(lineno, "CATEGORY needs zero= and tokens=")
            current = (
                cid,
                _parse_float(kv["zero"], lineno, "zero probability"),
                _parse_int(kv["tokens"], lineno, "token count"),
                lineno,
            )
            current_probs = {}
        elif tag == "T":
            if len(fields) != 5:
                raise ModelFormatError(lineno, "T needs a token and three probabilities")
            if current is None:
                raise ModelFormatError(lineno, "T line outside a CATEGORY block")
            tok = fields[1]
            if tok in current_probs:
                raise ModelFormatError(lineno, f"duplicate token {tok!r} in category {current[0]!r}")
            low, base, high = (_parse_float(f, lineno, "probability") for f in fields[2:])
            try:
                current_probs[tok] = ProbabilityTriple(low, base, high)
            except ValueError as exc:
                raise ModelFormatError(lineno, str(exc)) from None
        else:
            raise ModelFormatError(lineno, f"unknown record type {tag!r}")

    last = len(lines)
    if current is None:
        raise ModelFormatError(last, "truncated input: no CATEGORY blocks")
    close_category(last)
    if len(categories) < 2:
        raise ModelFormatError(last, "truncated input: fewer than 2 categories")
    try:
        return GlobalModel(tuple(categories), priors, unseen_prior, mode, config, version)
    except ValueError as exc:
        raise ModelFormatError(last, str(exc)) from None


def save(model: GlobalModel, path: str | os.PathLike) -> None:
    with open(path, "wb") as fh:
        fh.write(serialize(model))


def load(path: str | os.PathLike) -> GlobalModel:
    with open(path, "rb") as fh:
        return deserialize(fh.read())
