"""Tokenization, corpus ingestion and corpus partitioning.

Tokens are whitespace-delimited words with leading and trailing punctuation
characters split off one character at a time. Internal punctuation stays in
place, so "Let's" and "well-known" are single tokens.
"""

from __future__ import annotations

import json
import random
import string
import unicodedata
from dataclasses import dataclass
from fractions import Fraction
from typing import BinaryIO, Iterable, Sequence

from .errors import EmptyCorpus, EmptyInput, MalformedRecord

_ASCII_PUNCT = frozenset(string.punctuation)


def is_punct_char(ch: str) -> bool:
    return ch in _ASCII_PUNCT or unicodedata.category(ch).startswith("P")


def fold(surface: str) -> str:
    return surface.lower()


@dataclass(frozen=True, slots=True)
class Token:
    surface: str
    folded: str
    is_punct: bool
    index: int

    @classmethod
    def make(cls, surface: str, index: int) -> "Token":
        if not surface or any(ch.isspace() for ch in surface):
            raise ValueError(f"invalid token surface {surface!r}")
        return cls(surface, fold(surface), all(map(is_punct_char, surface)), index)

    def at(self, index: int) -> "Token":
        """Same token moved to another position."""
        if index == self.index:
            return self
        return Token(self.surface, self.folded, self.is_punct, index)

    def with_surface(self, surface: str) -> "Token":
        return Token.make(surface, self.index)


def reindex(tokens: Iterable[Token]) -> tuple[Token, ...]:
    return tuple(tok.at(i) for i, tok in enumerate(tokens))


def make_tokens(surfaces: Iterable[str]) -> tuple[Token, ...]:
    return tuple(Token.make(s, i) for i, s in enumerate(surfaces))


def _split_word(word: str) -> list[str]:
    start, end = 0, len(word)
    while start < end and is_punct_char(word[start]):
        start += 1
    if start == end:
        # all punctuation: one token per character
        return list(word)
    while is_punct_char(word[end - 1]):
        end -= 1
    return [*word[:start], word[start:end], *word[end:]]


def tokenize(text: str) -> list[Token]:
    """Split a raw sentence into tokens.

    >>> [t.surface for t in tokenize("Can we meet on Tuesday?")]
    ['Can', 'we', 'meet', 'on', 'Tuesday', '?']

    Raises:
        EmptyInput: if the text has no non-whitespace character.
    """
    surfaces = [piece for word in text.split() for piece in _split_word(word)]
    if not surfaces:
        raise EmptyInput("text contains no tokens")
    return list(make_tokens(surfaces))


def join_tokens(tokens: Iterable[Token]) -> str:
    """Space-join surfaces, the token-level convention used by exports."""
    return " ".join(tok.surface for tok in tokens)


def detokenize(tokens: Iterable[Token]) -> str:
    """Join surfaces with single spaces, dropping the space before punctuation."""
    out: list[str] = []
    for tok in tokens:
        if out and not tok.is_punct:
            out.append(" ")
        out.append(tok.surface)
    return "".join(out)


@dataclass(frozen=True, slots=True)
class FluentSentence:
    id: str
    tokens: tuple[Token, ...]
    source: str = ""

    def __post_init__(self) -> None:
        if not self.tokens:
            raise ValueError(f"sentence {self.id!r} has no tokens")
        if any(tok.index != i for i, tok in enumerate(self.tokens)):
            raise ValueError(f"sentence {self.id!r} has non-contiguous token indices")

    @classmethod
    def from_text(cls, id: str, text: str, source: str = "") -> "FluentSentence":
        return cls(str(id), tuple(tokenize(text)), source)

    @property
    def text(self) -> str:
        return detokenize(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)


def load_corpus(
    stream: BinaryIO, fmt: str = "plain", source: str = ""
) -> list[FluentSentence]:
    """Read fluent sentences from a byte stream.

    ``fmt`` is ``"plain"`` (one sentence per line) or ``"jsonl"`` (objects
    with a required ``text`` and optional ``id``). Blank lines are skipped in
    both formats; missing ids are the sentence's ordinal.
    """
    if fmt in ("plain", "plain-lines", "txt"):
        parse = _parse_plain
    elif fmt in ("jsonl", "json-lines"):
        parse = _parse_jsonl
    else:
        raise ValueError(f"unknown corpus format {fmt!r}")

    corpus: list[FluentSentence] = []
    for lineno, raw in enumerate(stream, start=1):
        try:
            line = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedRecord(f"invalid UTF-8 ({exc.reason})", lineno) from None
        if not line.strip():
            continue
        sent_id, text = parse(line, lineno)
        if sent_id is None:
            sent_id = str(len(corpus))
        try:
            corpus.append(FluentSentence.from_text(sent_id, text, source))
        except EmptyInput:
            raise MalformedRecord("record has no tokens", lineno) from None
    return corpus


def _parse_plain(line: str, lineno: int) -> tuple[None, str]:
    return None, line


def _parse_jsonl(line: str, lineno: int) -> tuple[str | None, str]:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedRecord(f"invalid JSON ({exc.msg})", lineno) from None
    if not isinstance(record, dict) or not isinstance(record.get("text"), str):
        raise MalformedRecord('record needs a string "text" field', lineno)
    sent_id = record.get("id")
    if sent_id is not None and not isinstance(sent_id, (str, int)):
        raise MalformedRecord('"id" must be a string or integer', lineno)
    return (None if sent_id is None else str(sent_id)), record["text"]


@dataclass(frozen=True)
class CorpusPartition:
    repetition_set: tuple[FluentSentence, ...]
    replacement_set: tuple[FluentSentence, ...]
    restart_set: tuple[FluentSentence, ...]
    seed: int

    def subset(self, kind: str) -> tuple[FluentSentence, ...]:
        return {
            "repetition": self.repetition_set,
            "replacement": self.replacement_set,
            "restart": self.restart_set,
        }[kind]


def apportion(total: int, weights: Sequence[float]) -> list[int]:
    """Largest-remainder apportionment; ties go to the earlier slot."""
    exact = [Fraction(w) for w in weights]
    if any(w < 0 for w in exact) or sum(exact) <= 0:
        raise ValueError("weights must be non-negative with a positive sum")
    norm = sum(exact)
    quotas = [w * total / norm for w in exact]
    sizes = [int(q) for q in quotas]
    leftover = total - sum(sizes)
    order = sorted(range(len(quotas)), key=lambda i: (-(quotas[i] - sizes[i]), i))
    for i in order[:leftover]:
        sizes[i] += 1
    return sizes


def partition(
    corpus: Sequence[FluentSentence], weights: Sequence[float], seed: int
) -> CorpusPartition:
    """Shuffle the corpus with ``seed`` and split it by ``weights``.

    The weights are (repetition, replacement, restart).
    """
    if not corpus:
        raise EmptyCorpus("cannot partition an empty corpus")
    if len(weights) != 3:
        raise ValueError("expected three weights")
    sizes = apportion(len(corpus), weights)
    shuffled = list(corpus)
    random.Random(seed).shuffle(shuffled)
    a, b = sizes[0], sizes[0] + sizes[1]
    return CorpusPartition(
        tuple(shuffled[:a]), tuple(shuffled[a:b]), tuple(shuffled[b:]), seed
    )
