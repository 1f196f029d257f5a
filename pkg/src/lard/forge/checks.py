"""Structural invariants of generated items, shared by tests and ``lard validate``."""

from __future__ import annotations

from typing import Mapping

from ..scheme import DisfluentSentence, reconstruct_fluent
from ..textcore import FluentSentence
from .generators import DEGREES, MAX_CONTEXT, junction_conflict
from .resources import ConnectiveList, CueList

MAX_REPARANDUM_WORDS = 4


def _folded(tokens) -> list[str]:
    return [t.folded for t in tokens]


def check_item(
    s: DisfluentSentence,
    cues: CueList | None = None,
    connectives: ConnectiveList | None = None,
    sources: Mapping[str, FluentSentence] | None = None,
) -> list[str]:
    """Return a list of violation messages (empty when the item is sound)."""
    ann = s.annotation
    rep = s.span_tokens(ann.reparandum)
    repair = s.span_tokens(ann.repair)
    problems: list[str] = []

    if ann.kind == "repetition":
        if len(rep) not in DEGREES:
            problems.append(f"repetition degree {len(rep)} outside {DEGREES}")
        if _folded(rep) != _folded(repair):
            problems.append("repetition reparandum and repair differ")
        if any(t.is_punct for t in (*rep, *repair)):
            problems.append("repetition span contains punctuation")

    elif ann.kind == "replacement":
        d = len(repair) - 1
        words = len(rep) - d
        if not 0 <= d <= MAX_CONTEXT:
            problems.append(f"replacement context of {d} words")
        if not 1 <= words <= MAX_REPARANDUM_WORDS:
            problems.append(f"replacement reparandum has {words} words")
        if _folded(rep[:d]) != _folded(repair[:d]):
            problems.append("replacement context differs before reparandum and repair")
        if " ".join(_folded(rep[d:])) == " ".join(_folded(repair[d:])):
            problems.append("replacement reparandum equals repair")
        if any(t.is_punct for t in (*rep, *repair)):
            problems.append("replacement span contains punctuation")
        if ann.interregnum is not None and cues is not None:
            phrase = " ".join(t.surface for t in s.span_tokens(ann.interregnum))
            if phrase not in cues:
                problems.append(f"interregnum {phrase!r} is not a known cue")

    elif ann.kind == "restart":
        continuation = s.tokens[ann.reparandum.end :]
        if connectives is not None:
            reason = junction_conflict(rep, continuation, connectives)
            if reason:
                problems.append(f"restart junction: {reason}")
        s1_len = s.provenance.params.get("s1_length")
        if isinstance(s1_len, int) and len(rep) >= s1_len:
            problems.append("restart prefix covers the whole first sentence")

    if sources is not None:
        problems.extend(_round_trip(s, sources))
    return problems


def _round_trip(s: DisfluentSentence, sources: Mapping[str, FluentSentence]) -> list[str]:
    ids = s.provenance.sources
    target_id = ids[1] if s.kind == "restart" and len(ids) > 1 else (ids[0] if ids else None)
    target = sources.get(target_id) if target_id is not None else None
    if target is None:
        return [f"source sentence {target_id!r} not found"]
    if _folded(reconstruct_fluent(s)) != _folded(target.tokens):
        return ["reconstruction does not match the fluent source"]
    return []
