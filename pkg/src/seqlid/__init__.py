"""Sequential text classification with confidence-interval early stopping."""

__version__ = "0.1.0"

from seqlid.tokenizer import TokenizerMode, shape_encode, tokenize, word_tokenize
from seqlid.estimator import (
    EstimatorConfig,
    ProbabilityTriple,
    base_probability,
    estimate,
    exact_small_count_interval,
    normal_interval,
    prior_probability,
    refined_interval,
    zero_probability,
)
from seqlid.model import CategoryModel, CountTable, GlobalModel, count, deserialize, lookup, serialize, train
from seqlid.classifier import ClassifierConfig, Decision, Session, Status, classify_stream, new_session

__all__ = [
    "CategoryModel",
    "ClassifierConfig",
    "CountTable",
    "Decision",
    "EstimatorConfig",
    "GlobalModel",
    "ProbabilityTriple",
    "Session",
    "Status",
    "TokenizerMode",
    "base_probability",
    "classify_stream",
    "count",
    "deserialize",
    "estimate",
    "exact_small_count_interval",
    "lookup",
    "new_session",
    "normal_interval",
    "prior_probability",
    "refined_interval",
    "serialize",
    "shape_encode",
    "tokenize",
    "train",
    "word_tokenize",
    "zero_probability",
]
