"""Count-driven batch generation over a partitioned corpus.

Every item owns a random source seeded from (config seed, kind, ordinal), so
the output does not depend on scheduling or on the number of worker threads.
"""

from __future__ import annotations

import dataclasses
import hashlib
import random
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from ..errors import (
    Exhausted,
    GenerationFailure,
    InsufficientCorpus,
    NoScorableCandidate,
    NoValidIndex,
    RetryNeeded,
)
from ..lexicon import POS_NAMES, Lexicon
from ..scheme import KINDS, DisfluentSentence, Label, token_labels
from ..scorer import EmbedderBackend
from ..textcore import CorpusPartition, FluentSentence
from .generators import (
    DEGREES,
    CandidatePool,
    GenerationConfig,
    gen_repetition,
    gen_replacement,
    gen_restart,
    restart_splits,
)
from .resources import ConnectiveList, CueList

SHORT_SENTENCE_WARNING = 5.0


def item_seed(seed: int, kind: str, ordinal: int) -> int:
    digest = hashlib.sha256(f"{seed}:{kind}:{ordinal}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass
class GenerationReport:
    per_kind: dict[str, int] = field(default_factory=dict)
    per_subclass: dict[str, int] = field(default_factory=dict)
    attempts: dict[str, int] = field(default_factory=dict)
    failures: dict[str, int] = field(default_factory=dict)
    disfluent_tokens: int = 0
    total_tokens: int = 0
    warnings: list[str] = field(default_factory=list)

    @property
    def disfluent_token_ratio(self) -> float:
        return self.disfluent_tokens / self.total_tokens if self.total_tokens else 0.0

    @property
    def retries(self) -> dict[str, int]:
        return {k: self.attempts.get(k, 0) - self.per_kind.get(k, 0) for k in self.attempts}

    def to_dict(self) -> dict:
        return {
            "per_kind": self.per_kind,
            "per_subclass": dict(sorted(self.per_subclass.items())),
            "attempts": self.attempts,
            "retries": self.retries,
            "failures": dict(sorted(self.failures.items())),
            "disfluent_tokens": self.disfluent_tokens,
            "total_tokens": self.total_tokens,
            "disfluent_token_ratio": self.disfluent_token_ratio,
            "warnings": self.warnings,
        }


@dataclass
class _Outcome:
    item: DisfluentSentence
    attempts: int
    failures: list[str]


class BatchGenerator:
    def __init__(
        self,
        partition: CorpusPartition,
        config: GenerationConfig,
        lex: Lexicon | None,
        backend: EmbedderBackend | None,
        cues: CueList | None,
        connectives: ConnectiveList | None,
    ):
        self.partition = partition
        self.config = config
        self.lex = lex
        self.backend = backend
        self.cues = cues
        self.connectives = connectives
        self.pool = CandidatePool(lex) if lex is not None else None

    def plan(self) -> list[tuple[str, int]]:
        counts = self.config.counts
        return [(kind, i) for kind in KINDS for i in range(counts.get(kind, 0))]

    def run(self, threads: int = 1) -> tuple[list[DisfluentSentence], GenerationReport]:
        plan = self.plan()
        self._check_resources(plan)
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as ex:
                outcomes = list(ex.map(lambda p: self.generate_item(*p), plan))
        else:
            outcomes = [self.generate_item(kind, i) for kind, i in plan]
        items = [o.item for o in outcomes]
        return items, self._report(plan, outcomes)

    def _check_resources(self, plan: Sequence[tuple[str, int]]) -> None:
        needed = {kind for kind, _ in plan}
        for kind in needed:
            if not self.partition.subset(kind):
                raise InsufficientCorpus(f"{kind} subset is empty")
        if "replacement" in needed and (self.lex is None or self.backend is None):
            raise ValueError("replacements need a lexicon and an embedder")
        if "replacement" in needed and self.cues is None and self.config.cue_probability > 0:
            raise ValueError("replacements with cues need a cue list")
        if "restart" in needed and self.connectives is None:
            raise ValueError("restarts need a connective list")

    def generate_item(self, kind: str, ordinal: int) -> _Outcome:
        seed = item_seed(self.config.seed, kind, ordinal)
        rng = random.Random(seed)
        subset = self.partition.subset(kind)
        failures: list[str] = []
        for attempt in range(self.config.retry_budget):
            source = subset[ordinal % len(subset)] if attempt == 0 else rng.choice(subset)
            try:
                item = self._attempt(kind, source, subset, rng)
            except (GenerationFailure, NoScorableCandidate) as exc:
                failures.append(exc.code)
                continue
            item = dataclasses.replace(
                item,
                id=f"{kind}-{ordinal:06d}",
                provenance=dataclasses.replace(item.provenance, seed=seed),
            )
            return _Outcome(item, attempt + 1, failures)
        raise InsufficientCorpus(
            f"{kind} item {ordinal}: {self.config.retry_budget} attempts failed "
            f"({', '.join(sorted(set(failures)))})"
        )

    def _attempt(
        self,
        kind: str,
        source: FluentSentence,
        subset: Sequence[FluentSentence],
        rng: random.Random,
    ) -> DisfluentSentence:
        cfg = self.config
        if kind == "repetition":
            (degree,) = rng.choices(DEGREES, weights=cfg.degree_weights)
            return gen_repetition(source, degree, rng)
        if kind == "replacement":
            (pos,) = rng.choices(POS_NAMES, weights=cfg.pos_weights)
            return gen_replacement(
                source, pos, cfg, self.lex, self.backend, rng, self.cues, pool=self.pool
            )
        return self._restart(source, subset, rng)

    def _restart(
        self, s1: FluentSentence, subset: Sequence[FluentSentence], rng: random.Random
    ) -> DisfluentSentence:
        cfg = self.config
        splits = restart_splits(s1, cfg.restart_prefix_max)
        if not splits:
            raise NoValidIndex(f"no valid split point in {s1.id!r}")
        split = rng.choice(splits)
        others: list[FluentSentence] | None = None
        for _ in range(cfg.retry_budget):
            # uniform over the subset minus s1
            s2 = rng.choice(subset)
            if s2.id == s1.id:
                if others is None:
                    others = [s for s in subset if s.id != s1.id]
                if not others:
                    break
                s2 = rng.choice(others)
            try:
                return gen_restart(s1, s2, cfg, self.connectives, rng, split=split)
            except RetryNeeded:
                continue
        raise Exhausted(f"no compatible continuation for {s1.id!r}")

    def _report(
        self, plan: Sequence[tuple[str, int]], outcomes: Sequence[_Outcome]
    ) -> GenerationReport:
        report = GenerationReport()
        per_kind: Counter[str] = Counter()
        per_subclass: Counter[str] = Counter()
        attempts: Counter[str] = Counter()
        failures: Counter[str] = Counter()
        for (kind, _), outcome in zip(plan, outcomes):
            per_kind[kind] += 1
            per_subclass[outcome.item.annotation.subclass] += 1
            attempts[kind] += outcome.attempts
            failures.update(outcome.failures)
            labels = token_labels(outcome.item, "keep").labels
            report.disfluent_tokens += sum(lab is Label.DISFLUENT for lab in labels)
            report.total_tokens += len(labels)
        report.per_kind = {k: per_kind.get(k, 0) for k in KINDS}
        report.per_subclass = dict(per_subclass)
        report.attempts = {k: attempts.get(k, 0) for k in KINDS}
        report.failures = dict(failures)
        restarts = self.partition.restart_set
        if self.config.counts.get("restart", 0) and restarts:
            mean_len = sum(len(s) for s in restarts) / len(restarts)
            if mean_len < SHORT_SENTENCE_WARNING:
                report.warnings.append(
                    f"restart sentences average {mean_len:.2f} tokens; fragments this short "
                    "often turn restarts into fluent text"
                )
        return report


def generate_batch(
    partition: CorpusPartition,
    config: GenerationConfig,
    lex: Lexicon | None,
    backend: EmbedderBackend | None,
    cues: CueList | None,
    connectives: ConnectiveList | None,
    threads: int = 1,
) -> tuple[list[DisfluentSentence], GenerationReport]:
    """Generate exactly ``config.counts[kind]`` items per kind.

    Raises:
        InsufficientCorpus: a subset is empty or an item exhausts its retries.
    """
    gen = BatchGenerator(partition, config, lex, backend, cues, connectives)
    return gen.run(threads)

