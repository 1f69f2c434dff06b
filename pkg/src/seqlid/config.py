"""Optional ``key=value`` defaults file for the command line.

Blank lines and lines starting with ``#`` are ignored. Recognised keys::

    mode, d, small_count_cutoff, zero_target, threshold, end_policy, report

Command-line flags override anything set here.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

from seqlid.classifier import ClassifierConfig, EndPolicy
from seqlid.estimator import EstimatorConfig
from seqlid.tokenizer import TokenizerMode

REPORT_FORMATS = ("text", "json")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class CliConfig:
    mode: TokenizerMode = TokenizerMode.WORD
    d: float = 2.0
    small_count_cutoff: int = 10
    zero_target: float = 0.95
    threshold: float = 0.0
    end_policy: EndPolicy = EndPolicy.BEST
    report: str = "text"

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "mode", TokenizerMode(self.mode))
            object.__setattr__(self, "end_policy", EndPolicy.parse(self.end_policy))
            self.estimator_config()
            ClassifierConfig(self.threshold, self.end_policy)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.report not in REPORT_FORMATS:
            raise ConfigError(f"report must be one of {', '.join(REPORT_FORMATS)}, got {self.report!r}")

    def estimator_config(self) -> EstimatorConfig:
        return EstimatorConfig(d=self.d, small_count_cutoff=self.small_count_cutoff, zero_target=self.zero_target)

    def with_overrides(self, **values) -> CliConfig:
        return replace(self, **{k: v for k, v in values.items() if v is not None})


_CONVERTERS = {
    "mode": str,
    "d": float,
    "small_count_cutoff": int,
    "zero_target": float,
    "threshold": float,
    "end_policy": str,
    "report": str,
}


def parse_config(text: str, source: str = "<config>") -> CliConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep:
            raise ConfigError(f"{source}:{lineno}: expected key=value")
        if key not in _CONVERTERS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _CONVERTERS[key](value)
        except ValueError:
            raise ConfigError(f"{source}:{lineno}: bad value for {key}: {value!r}") from None
    return CliConfig(**values)


def load_config(path: str | os.PathLike | None) -> CliConfig:
    if path is None:
        return CliConfig()
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), str(path))
