"""Single-item generators for repetitions, replacements and restarts.

Each generator takes its randomness from the ``rng`` it is handed and raises
a :class:`~lard.errors.GenerationFailure` subclass when the input cannot
produce an item, so callers can retry with other input.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ..errors import NoCandidateWord, NoHyponyms, NoValidIndex, RetryNeeded, WordNotFound
from ..lexicon import POS_NAMES, Lexicon, hypernyms, hyponym_lemmas, lemmatize
from ..scheme import DisfluencyAnnotation, DisfluentSentence, Provenance, Span
from ..scorer import Candidate, EmbedderBackend, select_reparandum
from ..textcore import FluentSentence, Token, make_tokens, tokenize
from .resources import ConnectiveList, CueList

DEGREES = (1, 2, 3)
MAX_CONTEXT = 3

# "draw it from the rng" marker for pinned choices
DRAW = object()


@dataclass(frozen=True)
class GenerationConfig:
    counts: Mapping[str, int] = field(default_factory=dict)
    degree_weights: Sequence[float] = (1.0, 1.0, 1.0)
    pos_weights: Sequence[float] = (1.0, 1.0, 1.0)
    num_hyponyms: int = 10
    cue_probability: float = 0.5
    context_max: int = MAX_CONTEXT
    restart_prefix_max: int | None = None
    seed: int = 0
    retry_budget: int = 20

    def __post_init__(self) -> None:
        for name, weights, size in (
            ("degree_weights", self.degree_weights, len(DEGREES)),
            ("pos_weights", self.pos_weights, len(POS_NAMES)),
        ):
            if len(weights) != size or any(w < 0 for w in weights) or sum(weights) <= 0:
                raise ValueError(f"{name} needs {size} non-negative weights with a positive sum")
        if any(c < 0 for c in self.counts.values()):
            raise ValueError("counts must be non-negative")
        if self.num_hyponyms < 1:
            raise ValueError("num_hyponyms must be at least 1")
        if not 0.0 <= self.cue_probability <= 1.0:
            raise ValueError("cue_probability must lie in [0, 1]")
        if not 0 <= self.context_max <= MAX_CONTEXT:
            raise ValueError(f"context_max must lie in [0, {MAX_CONTEXT}]")
        if self.restart_prefix_max is not None and self.restart_prefix_max < 1:
            raise ValueError("restart_prefix_max must be positive")
        if self.retry_budget < 1:
            raise ValueError("retry_budget must be positive")

    def to_dict(self) -> dict:
        return {
            "counts": dict(self.counts),
            "degree_weights": list(self.degree_weights),
            "pos_weights": list(self.pos_weights),
            "num_hyponyms": self.num_hyponyms,
            "cue_probability": self.cue_probability,
            "context_max": self.context_max,
            "restart_prefix_max": self.restart_prefix_max,
            "seed": self.seed,
            "retry_budget": self.retry_budget,
        }


def copy_case(tok: Token, source_index: int) -> str:
    """Surface for a copied or continued token.

    Lowercased, except "I" (and its contractions) and tokens that were
    capitalized away from the start of their source sentence.
    """
    s = tok.surface
    if s == "I" or s.startswith("I'"):
        return s
    if source_index > 0 and s != tok.folded:
        return s
    return tok.folded


def _build(
    surfaces: Sequence[str],
    kind: str,
    subclass: str,
    reparandum: tuple[int, int],
    sources: tuple[str, ...],
    params: dict,
    interregnum: tuple[int, int] | None = None,
    repair: tuple[int, int] | None = None,
    id: str | None = None,
) -> DisfluentSentence:
    ann = DisfluencyAnnotation(kind, subclass, Span(*reparandum),
                               Span(*interregnum) if interregnum else None,
                               Span(*repair) if repair else None)
    return DisfluentSentence(
        id=id or f"{sources[0]}-{kind}",
        tokens=make_tokens(surfaces),
        annotation=ann,
        provenance=Provenance(sources, None, params),
    )


# -- repetitions ---------------------------------------------------------------


def repetition_indices(s: FluentSentence, degree: int) -> list[int]:
    toks = s.tokens
    return [
        i
        for i in range(len(toks) - degree + 1)
        if not any(t.is_punct for t in toks[i : i + degree])
    ]


def gen_repetition(
    s: FluentSentence, degree: int, rng: random.Random, index: int | None = None
) -> DisfluentSentence:
    """Duplicate ``degree`` consecutive words right after themselves.

    The start index is uniform over windows free of punctuation.
    """
    if degree not in DEGREES:
        raise ValueError(f"degree must be one of {DEGREES}")
    valid = repetition_indices(s, degree)
    if not valid:
        raise NoValidIndex(f"no punctuation-free window of {degree} in {s.id!r}")
    if index is None:
        i = rng.choice(valid)
    elif index in valid:
        i = index
    else:
        raise NoValidIndex(f"index {index} is not a valid degree-{degree} window")
    toks = s.tokens
    surfaces = [t.surface for t in toks[: i + degree]]
    surfaces += [copy_case(t, t.index) for t in toks[i : i + degree]]
    surfaces += [t.surface for t in toks[i + degree :]]
    return _build(
        surfaces,
        "repetition",
        f"repetition-d{degree}",
        (i, i + degree),
        (s.id,),
        {"degree": degree, "index": i},
        repair=(i + degree, i + 2 * degree),
    )


# -- replacements --------------------------------------------------------------


class CandidatePool:
    """Memoized hyponym pools keyed by (lemma, pos, N).

    Pool contents depend only on the lexicon, so sharing one instance
    across threads cannot change results.
    """

    def __init__(self, lex: Lexicon):
        self.lex = lex
        self._cache: dict[tuple[str, str, int], tuple[str, ...]] = {}

    def get(self, lemma: str, pos: str, limit: int) -> tuple[str, ...]:
        key = (lemma, pos, limit)
        pool = self._cache.get(key)
        if pool is None:
            pool = self._compute(lemma, pos, limit)
            self._cache[key] = pool
        return pool

    def _compute(self, lemma: str, pos: str, limit: int) -> tuple[str, ...]:
        try:
            parents = hypernyms(self.lex, lemma, pos)
        except WordNotFound:
            return ()
        out: dict[str, str] = {}
        for parent in parents:
            for name in hyponym_lemmas(self.lex, parent, lemma, limit):
                folded = name.lower()
                if folded == lemma or folded in out:
                    continue
                words = tokenize(name)
                if any(t.is_punct for t in words):
                    continue
                out[folded] = name
        return tuple(out.values())


def candidate_indices(s: FluentSentence, pos: str, lex: Lexicon) -> list[int]:
    return [
        t.index
        for t in s.tokens
        if not t.is_punct and t.folded not in lex.stoplist and lemmatize(lex, t.folded, pos)
    ]


def context_room(s: FluentSentence, index: int) -> int:
    """Number of consecutive non-punctuation tokens right before ``index``."""
    n = 0
    while index - n - 1 >= 0 and not s.tokens[index - n - 1].is_punct:
        n += 1
    return n


def gen_replacement(
    s: FluentSentence,
    pos: str,
    config: GenerationConfig,
    lex: Lexicon,
    backend: EmbedderBackend | None,
    rng: random.Random,
    cues: CueList | None = None,
    *,
    pool: CandidatePool | None = None,
    repair_index: int | None = None,
    reparandum: str | None = None,
    context: int | None = None,
    cue: object = DRAW,
) -> DisfluentSentence:
    """Insert a semantically close wrong word (plus optional cue) before a word.

    A random word of class ``pos`` becomes the repair. Hyponyms of its
    hypernyms are substituted into the sentence one at a time and the
    substitution whose sentence embedding is closest to the original becomes
    the reparandum. Up to ``config.context_max`` preceding words are copied
    into both sides, and with probability ``config.cue_probability`` a repair
    cue fills the interregnum.

    The keyword-only arguments pin individual random choices; ``cue=None``
    forces no cue.
    """
    if pos not in POS_NAMES:
        raise ValueError(f"pos must be one of {POS_NAMES}")
    pool = pool or CandidatePool(lex)
    if repair_index is None:
        choices = candidate_indices(s, pos, lex)
        if not choices:
            raise NoCandidateWord(f"no {pos} in {s.id!r}")
        order = rng.sample(choices, len(choices))
    else:
        order = [repair_index]

    for j in order:
        lemma = lemmatize(lex, s.tokens[j].folded, pos)
        if lemma is None:
            raise NoCandidateWord(f"token {j} of {s.id!r} is not a {pos}")
        names = [n for n in pool.get(lemma, pos, config.num_hyponyms)
                 if n.lower() != s.tokens[j].folded]
        if names:
            break
    else:
        raise NoHyponyms(f"no hyponym candidates for any {pos} in {s.id!r}")

    toks = s.tokens
    score = None
    if reparandum is None:
        candidates = [
            Candidate(name, toks[:j] + tuple(tokenize(name)) + toks[j + 1 :]) for name in names
        ]
        if backend is None:
            raise ValueError("an embedder backend is required to rank candidates")
        reparandum, score = select_reparandum(backend, s, candidates)

    room = context_room(s, j)
    if context is None:
        d = rng.randint(0, min(config.context_max, room))
    elif 0 <= context <= room:
        d = context
    else:
        raise ValueError(f"context {context} exceeds the {room} words before the repair")

    if cue is DRAW:
        phrase = None
        if rng.random() < config.cue_probability:
            if cues is None:
                raise ValueError("a cue list is required when cues may be drawn")
            phrase = rng.choice(cues.phrases)
    else:
        phrase = cue  # type: ignore[assignment]

    rep_words = [t.surface for t in tokenize(reparandum)]
    cue_words = phrase.split() if phrase else []
    surfaces = [t.surface for t in toks[:j]] + rep_words + cue_words
    surfaces += [copy_case(t, t.index) for t in toks[j - d : j]]
    surfaces += [t.surface for t in toks[j:]]

    rep_end = j + len(rep_words)
    inter = (rep_end, rep_end + len(cue_words)) if cue_words else None
    repair_start = rep_end + len(cue_words)
    subclass = f"replacement-{pos}-{'cue' if cue_words else 'nocue'}"
    params = {
        "pos": pos,
        "repair_index": j,
        "repair_lemma": lemma,
        "reparandum_lemma": reparandum,
        "context": d,
        "cue": phrase,
        "num_candidates": len(names),
        "score": score,
    }
    return _build(
        surfaces,
        "replacement",
        subclass,
        (j - d, rep_end),
        (s.id,),
        params,
        interregnum=inter,
        repair=(repair_start, repair_start + d + 1),
    )


# -- restarts ------------------------------------------------------------------


def restart_splits(s1: FluentSentence, prefix_max: int | None = None) -> list[int]:
    """Valid prefix lengths: at least one token kept back, no trailing punctuation."""
    cap = len(s1) - 1
    if prefix_max is not None:
        cap = min(cap, prefix_max)
    return [p for p in range(1, cap + 1) if not s1.tokens[p - 1].is_punct]


def junction_conflict(
    prefix: Sequence[Token], continuation: Sequence[Token], connectives: ConnectiveList
) -> str | None:
    """Why joining ``prefix`` and ``continuation`` would not read as a restart."""
    head = [t.folded for t in prefix]
    tail = [t.folded for t in continuation]
    if head and head[-1] in connectives:
        return f"prefix ends with connective {head[-1]!r}"
    if len(head) >= 2 and " ".join(head[-2:]) in connectives:
        return f"prefix ends with connective {' '.join(head[-2:])!r}"
    if tail and tail[0] in connectives:
        return f"continuation starts with connective {tail[0]!r}"
    if len(tail) >= 2 and " ".join(tail[:2]) in connectives:
        return f"continuation starts with connective {' '.join(tail[:2])!r}"
    for k in range(1, 4):
        if k <= len(head) and k <= len(tail) and head[-k:] == tail[:k]:
            return f"prefix end repeats the continuation start (k={k})"
    return None


def gen_restart(
    s1: FluentSentence,
    s2: FluentSentence,
    config: GenerationConfig,
    connectives: ConnectiveList,
    rng: random.Random,
    split: int | None = None,
) -> DisfluentSentence:
    """Abandon a prefix of ``s1`` and continue with all of ``s2``.

    Raises:
        RetryNeeded: the junction would read fluently; try another ``s2``.
    """
    if s1.id == s2.id:
        raise ValueError("restart needs two different sentences")
    if len(s1) < 2:
        raise NoValidIndex(f"{s1.id!r} is too short to break")
    if split is None:
        splits = restart_splits(s1, config.restart_prefix_max)
        if not splits:
            raise NoValidIndex(f"no valid split point in {s1.id!r}")
        split = rng.choice(splits)
    elif not 1 <= split < len(s1):
        raise NoValidIndex(f"split {split} outside [1, {len(s1) - 1}]")
    prefix = s1.tokens[:split]
    reason = junction_conflict(prefix, s2.tokens, connectives)
    if reason:
        raise RetryNeeded(reason)
    surfaces = [t.surface for t in prefix]
    surfaces.append(copy_case(s2.tokens[0], 0))
    surfaces += [t.surface for t in s2.tokens[1:]]
    return _build(
        surfaces,
        "restart",
        "restart",
        (0, split),
        (s1.id, s2.id),
        {"split": split, "s1_length": len(s1)},
    )
