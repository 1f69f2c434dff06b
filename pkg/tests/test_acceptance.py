"""Exit criteria. Each test is one criterion; the terminal summary prints PASS/FAIL per test."""

import math
import random
import time

import pytest

from conftest import DESK_THRESHOLDS
from oracles import accumulate_by_hand, clopper_pearson_grid, refined_mp, zero_probability_mp
from seqlid.classifier import ClassifierConfig, classify_stream, new_session
from seqlid.estimator import EstimatorConfig, estimate, exact_small_count_interval, normal_interval, refined_interval, zero_probability
from seqlid.harness import SplitSpec, classify_outcome, run_experiment, split_corpus
from seqlid.model import deserialize, serialize, train
from seqlid.synthetic import generate_synthetic_corpora
from seqlid.tokenizer import SHAPE_ALPHABET, shape_encode, word_tokenize

pytestmark = pytest.mark.acceptance

TUNED_THRESHOLD = 14.0
N_CATEGORIES = 18


def _sig_units(x, quoted, digits=6):
    """Distance between x and a quoted figure, in units of its last significant digit."""
    unit = 10 ** (math.floor(math.log10(abs(quoted))) - digits + 1)
    return abs(x - quoted) / unit


def test_c1_estimator_exactness():
    start = time.perf_counter()
    assert abs(zero_probability(1000, 0.95) - float(zero_probability_mp(1000))) < 1e-12

    tri = refined_interval(100, 10000, 2)
    low, base, high = (float(v) for v in refined_mp(100, 10000))
    assert f"{tri.low:.5e}" == f"{low:.5e}" and f"{tri.high:.5e}" == f"{high:.5e}"
    assert tri.base == base == 0.01
    # quoted figures (0.00819003, 0.01221000) to within one unit of the 6th digit
    assert _sig_units(tri.low, 0.00819003) <= 1.0
    assert _sig_units(tri.high, 0.0122100) <= 0.5

    tri = normal_interval(5000, 10000, 2)
    assert (tri.low, tri.base, tri.high) == (0.49, 0.5, 0.51)
    assert time.perf_counter() - start < 1.0


def test_c2_small_count_oracle_equivalence():
    start = time.perf_counter()
    worst = 0.0
    for m in range(1, 10):
        for n in (10, 50, 200, 1000):
            low, high = clopper_pearson_grid(m, n, 0.05)
            tri = exact_small_count_interval(m, n, 0.05)
            worst = max(worst, abs(tri.low - low), abs(tri.high - high))
    assert worst < 1e-6
    assert time.perf_counter() - start < 5.0


def test_c3_ordering_invariant_fuzz():
    rng = random.Random(2024)
    start = time.perf_counter()
    refined_checked = 0
    for _ in range(10_000):
        n = int(10 ** rng.uniform(0, 7))
        m = rng.randint(0, min(n, 40)) if rng.random() < 0.5 else rng.randint(0, n)
        d = rng.uniform(0.5, 4.0)
        cfg = EstimatorConfig(d=d)
        tri = estimate(m, n, cfg)
        assert 0 <= tri.low <= tri.base <= tri.high <= 1
        if m >= cfg.small_count_cutoff and m / n <= cfg.large_count_base_cutoff:
            refined_checked += 1
            scale = max(1, m)
            assert abs(n * tri.low - (m - d * math.sqrt(n * tri.low))) < 1e-9 * scale
            if tri.high < 1:
                assert abs(n * tri.high - (m + d * math.sqrt(n * tri.high))) < 1e-9 * scale
    assert refined_checked > 1000
    assert time.perf_counter() - start < 5.0


def test_c4_classifier_soundness():
    corpora = generate_synthetic_corpora(6, 800, 2500, 0.5, rng_seed=41)
    model = train({c: t[:2000] for c, t in corpora.items()})
    rng = random.Random(4)
    decided = 0
    for _ in range(1000):
        source = corpora[rng.choice(list(corpora))]
        start = rng.randint(2000, len(source) - 40)
        tokens = source[start : start + rng.randint(1, 40)]
        cfg = ClassifierConfig(rng.choice([0.0, 2.0, 5.0, 10.0, 14.0, 22.0]))
        session = new_session(model, cfg)
        for tok in tokens:
            if session.step(tok).decided:
                break
        consumed = tokens[: session.tokens_seen]
        expected = accumulate_by_hand(model, consumed)
        for cat, acc in session.accumulators().items():
            assert acc == pytest.approx(tuple(expected[cat]), abs=1e-12)
        if session.decision is not None and session.decision.decided:
            decided += 1
            w = session.categories.index(session.decision.category)
            assert session.base[w] > cfg.activation_threshold
            assert session.low[w] > max(h for i, h in enumerate(session.high) if i != w)
            assert session.remaining_set() == (session.decision.category,)
    assert decided > 100


def test_c5_decisiveness_monotone(desk_report):
    sizes = list(desk_report.spec.test_file_sizes) + [None]
    for train_size in desk_report.spec.train_sizes:
        for size in sizes:
            dec = [desk_report.run(train_size, t).metrics(size).decisiveness for t in DESK_THRESHOLDS]
            assert all(a >= b for a, b in zip(dec, dec[1:])), (train_size, size, dec)


def test_c6_desk_scale_reproduction(desk_corpora):
    start = time.perf_counter()
    report = run_experiment(desk_corpora, SplitSpec(), DESK_THRESHOLDS, "word")
    elapsed = time.perf_counter() - start
    run = report.run(2000, TUNED_THRESHOLD)
    acc20 = run.metrics(20).accuracy
    mean_conv = run.convergence.all
    print(f"\n  20-token accuracy {acc20:.3f}, mean convergence {mean_conv:.2f}, runtime {elapsed:.1f}s")
    assert len(report.categories) == N_CATEGORIES
    assert acc20 >= 0.95
    assert mean_conv is not None and mean_conv <= 15
    assert elapsed < 60


def test_c7_remaining_set_behaviour(desk_report, desk_corpora):
    for run in desk_report.runs:
        for o in run.outcomes:
            if o.definitive:
                assert o.remaining == 1
    # the top category is always in the set: recheck from live sessions
    model = desk_report.models[2000]
    _, tests = split_corpus(desk_corpora[desk_report.categories[0]], SplitSpec())
    for tokens in tests[20]:
        s = new_session(model, ClassifierConfig(max(DESK_THRESHOLDS)))
        for tok in tokens:
            if s.step(tok).decided:
                break
            assert s.categories[s.best_index()] in s.remaining_set()
    top = desk_report.run(2000, max(DESK_THRESHOLDS)).remaining
    assert top.mean < N_CATEGORIES / 2


def test_c8_round_trip(desk_report, desk_corpora):
    model = desk_report.models[2000]
    reloaded = deserialize(serialize(model))
    assert reloaded == model
    assert serialize(reloaded) == serialize(model)
    for threshold in DESK_THRESHOLDS:
        expected = desk_report.run(2000, threshold).outcomes
        got = []
        cfg = ClassifierConfig(threshold)
        for cat, tokens in desk_corpora.items():
            _, tests = split_corpus(tokens, SplitSpec())
            for size in SplitSpec().test_file_sizes:
                for f in tests[size]:
                    got.append(classify_outcome(classify_stream(f, reloaded, cfg), cat, size))
        assert got == expected
        sess_a, sess_b = new_session(model, cfg), new_session(reloaded, cfg)
        for tok in desk_corpora[desk_report.categories[3]][2200:2260]:
            if sess_a.decision is None:
                sess_a.step(tok)
                sess_b.step(tok)
        assert [x.hex() for x in sess_a.base + sess_a.low + sess_a.high] == [
            x.hex() for x in sess_b.base + sess_b.low + sess_b.high
        ]


def test_c9_tokenizer_contract():
    rng = random.Random(9)
    alphabet = (
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
        ".,;:!?'\"()-–«»¿¡"
        "àáâäãåçèéêëìíîïñòóôöõùúûüýÿÀÉÎÖÜßøłđšžčćőű"
        "αβγδΩΣжЖяЯ中文٣١́̈"
    )
    words = ["".join(rng.choice(alphabet) for _ in range(rng.randint(1, 12))) for _ in range(10_000)]
    text = " ".join(words)
    assert word_tokenize(text) == words
    shapes = shape_encode(text)
    assert len(shapes) == 10_000
    seen = set()
    for w, s in zip(words, shapes):
        assert len(s) == len(w)
        seen |= set(s)
    assert seen <= SHAPE_ALPHABET
    assert seen == SHAPE_ALPHABET
