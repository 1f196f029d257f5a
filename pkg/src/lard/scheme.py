"""Reparandum/interregnum annotation model and exports.

A generated sentence carries one annotation made of half-open token spans::

    [reparandum + {interregnum} repair]

The interruption point sits right after the reparandum. Restarts have no
repair; repetitions have no interregnum.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, TextIO

from .errors import InvalidAnnotation, MalformedRecord
from .textcore import Token, join_tokens, make_tokens, reindex

KINDS = ("repetition", "replacement", "restart")


@dataclass(frozen=True, slots=True)
class Span:
    """Half-open token range ``[start, end)``."""

    start: int
    end: int

    def __len__(self) -> int:
        return self.end - self.start

    def __contains__(self, index: object) -> bool:
        return isinstance(index, int) and self.start <= index < self.end

    def indices(self) -> range:
        return range(self.start, self.end)

    def to_list(self) -> list[int]:
        return [self.start, self.end]


def _span(value: Any) -> Span | None:
    if value is None or isinstance(value, Span):
        return value
    start, end = value
    return Span(int(start), int(end))


@dataclass(frozen=True)
class DisfluencyAnnotation:
    kind: str
    subclass: str
    reparandum: Span
    interregnum: Span | None = None
    repair: Span | None = None
    interruption_point: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "reparandum", _span(self.reparandum))
        object.__setattr__(self, "interregnum", _span(self.interregnum))
        object.__setattr__(self, "repair", _span(self.repair))
        if self.interruption_point is None:
            object.__setattr__(self, "interruption_point", self.reparandum.end)
        self._check()

    def _check(self) -> None:
        rep, inter, repair = self.reparandum, self.interregnum, self.repair
        if self.kind not in KINDS:
            raise InvalidAnnotation(f"unknown kind {self.kind!r}")
        if rep.start < 0 or rep.end <= rep.start:
            raise InvalidAnnotation(f"reparandum {rep.to_list()} is empty or negative")
        if self.interruption_point != rep.end:
            raise InvalidAnnotation("interruption point must equal reparandum end")
        if inter is not None:
            if len(inter) <= 0:
                raise InvalidAnnotation("interregnum span is empty")
            if inter.start != rep.end:
                raise InvalidAnnotation("interregnum must start at the interruption point")
            if repair is None or repair.start != inter.end:
                raise InvalidAnnotation("repair must follow the interregnum")
        elif repair is not None and repair.start != rep.end:
            raise InvalidAnnotation("repair must start at the interruption point")
        if repair is not None and len(repair) <= 0:
            raise InvalidAnnotation("repair span is empty")
        if self.kind == "restart" and repair is not None:
            raise InvalidAnnotation("restart annotations have no repair")
        if self.kind == "repetition":
            if inter is not None:
                raise InvalidAnnotation("repetition annotations have no interregnum")
            if repair is None or len(repair) != len(rep):
                raise InvalidAnnotation("repetition repair must match reparandum length")
        if self.kind == "replacement" and repair is None:
            raise InvalidAnnotation("replacement annotations need a repair")

    @property
    def removed(self) -> set[int]:
        """Token indices deleted by reconstruction."""
        out = set(self.reparandum.indices())
        if self.interregnum is not None:
            out.update(self.interregnum.indices())
        return out

    @property
    def end(self) -> int:
        for span in (self.repair, self.interregnum, self.reparandum):
            if span is not None:
                return span.end
        raise AssertionError("unreachable")


@dataclass(frozen=True)
class Provenance:
    sources: tuple[str, ...]
    seed: int | None = None
    params: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class DisfluentSentence:
    id: str
    tokens: tuple[Token, ...]
    annotation: DisfluencyAnnotation
    provenance: Provenance = Provenance(())

    def __post_init__(self) -> None:
        n = len(self.tokens)
        ann = self.annotation
        if ann.end > n:
            raise InvalidAnnotation(
                f"annotation reaches token {ann.end} but sentence has {n} tokens"
            )
        if any(tok.index != i for i, tok in enumerate(self.tokens)):
            raise InvalidAnnotation("token indices are not contiguous")
        if n - len(ann.removed) <= 0:
            raise InvalidAnnotation("removing the reparandum leaves no tokens")

    @property
    def kind(self) -> str:
        return self.annotation.kind

    def span_tokens(self, span: Span | None) -> tuple[Token, ...]:
        if span is None:
            return ()
        return self.tokens[span.start : span.end]


class Label(str, enum.Enum):
    FLUENT = "O"
    DISFLUENT = "D"


@dataclass(frozen=True)
class TokenLabelSequence:
    tokens: tuple[Token, ...]
    labels: tuple[Label, ...]

    def __post_init__(self) -> None:
        if len(self.tokens) != len(self.labels):
            raise ValueError("tokens and labels differ in length")

    def pairs(self) -> Iterator[tuple[Token, Label]]:
        return zip(self.tokens, self.labels)


def render_notation(s: DisfluentSentence) -> str:
    """Bracket notation, e.g. ``I want [the blue + {no} the red] one .``"""
    ann = s.annotation
    words = [tok.surface for tok in s.tokens]
    parts = words[: ann.reparandum.start]
    body = "[" + " ".join(words[ann.reparandum.start : ann.reparandum.end]) + " +"
    if ann.interregnum is not None:
        body += " {" + " ".join(words[ann.interregnum.start : ann.interregnum.end]) + "}"
    if ann.repair is not None:
        body += " " + " ".join(words[ann.repair.start : ann.repair.end]) + "]"
    else:
        body += " ]"
    parts.append(body)
    parts.extend(words[ann.end :])
    return " ".join(parts)


def token_labels(s: DisfluentSentence, interregnum_mode: str = "keep") -> TokenLabelSequence:
    """Per-token fluent/disfluent labels.

    Everything before the repair inside the disfluent fragment is disfluent.
    ``drop`` removes interregnum tokens from the sequence instead of
    labelling them.
    """
    if interregnum_mode not in ("keep", "drop"):
        raise ValueError(f"interregnum_mode must be keep or drop, not {interregnum_mode!r}")
    ann = s.annotation
    inter = ann.interregnum
    tokens: list[Token] = []
    labels: list[Label] = []
    for tok in s.tokens:
        if inter is not None and tok.index in inter:
            if interregnum_mode == "drop":
                continue
            labels.append(Label.DISFLUENT)
        elif tok.index in ann.reparandum:
            labels.append(Label.DISFLUENT)
        else:
            labels.append(Label.FLUENT)
        tokens.append(tok)
    return TokenLabelSequence(reindex(tokens), tuple(labels))


def reconstruct_fluent(s: DisfluentSentence) -> list[Token]:
    removed = s.annotation.removed
    return list(reindex(tok for tok in s.tokens if tok.index not in removed))


def to_translation_pair(s: DisfluentSentence) -> tuple[str, str]:
    return join_tokens(s.tokens), join_tokens(reconstruct_fluent(s))


# -- JSONL records -----------------------------------------------------------


def to_record(s: DisfluentSentence) -> dict[str, Any]:
    ann = s.annotation
    return {
        "id": s.id,
        "kind": ann.kind,
        "subclass": ann.subclass,
        "tokens": [tok.surface for tok in s.tokens],
        "reparandum": ann.reparandum.to_list(),
        "interregnum": ann.interregnum.to_list() if ann.interregnum else None,
        "repair": ann.repair.to_list() if ann.repair else None,
        "interruption_point": ann.interruption_point,
        "notation": render_notation(s),
        "fluent_sources": list(s.provenance.sources),
        "seed": s.provenance.seed,
        "params": s.provenance.params,
    }


def from_record(record: Any, line: int | None = None) -> DisfluentSentence:
    if not isinstance(record, dict):
        raise MalformedRecord("record is not an object", line)
    try:
        tokens = make_tokens(record["tokens"])
        ann = DisfluencyAnnotation(
            kind=record["kind"],
            subclass=record.get("subclass", ""),
            reparandum=record["reparandum"],
            interregnum=record.get("interregnum"),
            repair=record.get("repair"),
            interruption_point=record.get("interruption_point"),
        )
        return DisfluentSentence(
            id=str(record["id"]),
            tokens=tokens,
            annotation=ann,
            provenance=Provenance(
                tuple(str(x) for x in record.get("fluent_sources", ())),
                record.get("seed"),
                dict(record.get("params") or {}),
            ),
        )
    except KeyError as exc:
        raise MalformedRecord(f"missing field {exc.args[0]!r}", line) from None
    except (TypeError, ValueError) as exc:
        raise MalformedRecord(str(exc), line) from None


def dumps_record(s: DisfluentSentence) -> str:
    return json.dumps(to_record(s), ensure_ascii=False, sort_keys=True)


def write_jsonl(items: Iterable[DisfluentSentence], fh: TextIO) -> None:
    for s in items:
        fh.write(dumps_record(s))
        fh.write("\n")


def read_jsonl(fh: Iterable[str]) -> Iterator[DisfluentSentence]:
    for lineno, line in enumerate(fh, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedRecord(f"invalid JSON ({exc.msg})", lineno) from None
        yield from_record(record, lineno)


def write_tags(
    items: Iterable[DisfluentSentence], fh: TextIO, interregnum_mode: str = "keep"
) -> None:
    """Token TAB label lines, a blank line after each sentence."""
    for s in items:
        for tok, label in token_labels(s, interregnum_mode).pairs():
            fh.write(f"{tok.surface}\t{label.value}\n")
        fh.write("\n")


def write_pairs(items: Iterable[DisfluentSentence], fh: TextIO) -> None:
    for s in items:
        disfluent, fluent = to_translation_pair(s)
        fh.write(f"{disfluent}\t{fluent}\n")
