"""Sequential classification with low/base/high evidence accumulators.

Each token adds ``ln(p(t|l) / p(t))`` to three running sums per category,
one for each bound of the probability triple. After every token the leader
by base evidence is declared the winner once its base sum exceeds the
activation threshold and its low sum beats every rival's high sum.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable
from dataclasses import dataclass

from seqlid.model import GlobalModel


class Status(str, enum.Enum):
    CONTINUE = "continue"
    DECIDED = "decided"
    EXHAUSTED_BEST = "exhausted_best"
    EXHAUSTED_SET = "exhausted_set"


class EndPolicy(str, enum.Enum):
    BEST = "best"
    CANDIDATE_SET = "candidate_set"

    @classmethod
    def parse(cls, value: str | EndPolicy) -> EndPolicy:
        if value == "set":
            return cls.CANDIDATE_SET
        return cls(value)


@dataclass(frozen=True)
class ClassifierConfig:
    activation_threshold: float = 0.0
    end_policy: EndPolicy = EndPolicy.BEST

    def __post_init__(self) -> None:
        if not self.activation_threshold >= 0:
            raise ValueError(f"activation threshold must be >= 0, got {self.activation_threshold}")
        object.__setattr__(self, "end_policy", EndPolicy.parse(self.end_policy))


@dataclass(frozen=True)
class Decision:
    """Result of one step or of the end of input.

    ``category`` is the decided category, or the current top category by
    base evidence when no decision has been made. ``remaining`` is the
    ranked set of categories not yet excluded; for ``EXHAUSTED_SET`` it is
    the reported candidate set.
    """

    status: Status
    category: str
    tokens_consumed: int
    remaining: tuple[str, ...]

    @property
    def decided(self) -> bool:
        return self.status is Status.DECIDED

    @property
    def final(self) -> bool:
        return self.status is not Status.CONTINUE


class Session:
    """Accumulator state for one input stream. Not thread-safe."""

    def __init__(self, model: GlobalModel, config: ClassifierConfig = ClassifierConfig()) -> None:
        if len(model.categories) < 2:
            raise ValueError("model must have at least 2 categories")
        self.model = model
        self.config = config
        self.categories = model.category_ids
        k = len(self.categories)
        self.low = [0.0] * k
        self.base = [0.0] * k
        self.high = [0.0] * k
        self.tokens_seen = 0
        self.decision: Decision | None = None

    def _check_open(self) -> None:
        if self.decision is not None:
            raise RuntimeError(f"session already finished with {self.decision.status.value}")

    def best_index(self) -> int:
        # first maximum wins, i.e. ties go to the earlier category
        base = self.base
        best = 0
        for i in range(1, len(base)):
            if base[i] > base[best]:
                best = i
        return best

    def _remaining_indices(self) -> list[int]:
        best = self.best_index()
        floor = self.low[best]
        keep = [i for i in range(len(self.base)) if i == best or self.high[i] >= floor]
        keep.sort(key=lambda i: (-self.base[i], i))
        return keep

    def remaining_set(self) -> tuple[str, ...]:
        """Categories whose high evidence is not below the leader's low evidence."""
        return tuple(self.categories[i] for i in self._remaining_indices())

    def accumulators(self) -> dict[str, tuple[float, float, float]]:
        return {c: (self.low[i], self.base[i], self.high[i]) for i, c in enumerate(self.categories)}

    def step(self, token: str) -> Decision:
        self._check_open()
        low, base, high = self.low, self.base, self.high
        for i, (dl, db, dh) in enumerate(self.model.evidence(token)):
            low[i] += dl
            base[i] += db
            high[i] += dh
        self.tokens_seen += 1

        best = self.best_index()
        if base[best] > self.config.activation_threshold:
            rival_high = max(h for i, h in enumerate(high) if i != best)
            if low[best] > rival_high:
                winner = self.categories[best]
                self.decision = Decision(Status.DECIDED, winner, self.tokens_seen, (winner,))
                return self.decision
        return Decision(Status.CONTINUE, self.categories[best], self.tokens_seen, self.remaining_set())

    def finish(self) -> Decision:
        """End of input without a decision."""
        self._check_open()
        top = self.categories[self.best_index()]
        status = Status.EXHAUSTED_BEST if self.config.end_policy is EndPolicy.BEST else Status.EXHAUSTED_SET
        self.decision = Decision(status, top, self.tokens_seen, self.remaining_set())
        return self.decision


def new_session(model: GlobalModel, config: ClassifierConfig = ClassifierConfig()) -> Session:
    return Session(model, config)


def classify_stream(
    tokens: Iterable[str], model: GlobalModel, config: ClassifierConfig = ClassifierConfig()
) -> Decision:
    """Feed tokens until a decision is reached or the stream ends."""
    session = Session(model, config)
    for tok in tokens:
        if session.step(tok).decided:
            return session.decision
    return session.finish()
