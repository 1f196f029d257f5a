from __future__ import annotations

import os
from dataclasses import dataclass

from ..errors import ResourceError
from ..resources import read_lines, resource_path
from ..textcore import fold

FILLED_PAUSES = frozenset({"um", "uh", "uhm", "erm", "er", "ah", "mm", "hmm"})
CONNECTIVE_CLASSES = ("additive", "causal", "adversative", "temporal")


@dataclass(frozen=True)
class CueList:
    phrases: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.phrases:
            raise ResourceError("cue list is empty")
        for phrase in self.phrases:
            if any(fold(w) in FILLED_PAUSES for w in phrase.split()):
                raise ResourceError(f"filled pause in cue list: {phrase!r}")

    def __contains__(self, phrase: object) -> bool:
        if not isinstance(phrase, str):
            return False
        target = " ".join(fold(phrase).split())
        return any(" ".join(fold(p).split()) == target for p in self.phrases)

    @classmethod
    def load(cls, path: str | os.PathLike | None = None) -> "CueList":
        return cls(tuple(read_lines(path or resource_path("cues.txt"))))


@dataclass(frozen=True)
class ConnectiveList:
    entries: dict[str, frozenset[str]]

    def __post_init__(self) -> None:
        for cls_name in CONNECTIVE_CLASSES:
            if not self.entries.get(cls_name):
                raise ResourceError(f"no connectives for class {cls_name!r}")

    @property
    def all(self) -> frozenset[str]:
        return frozenset().union(*self.entries.values())

    def __contains__(self, phrase: object) -> bool:
        return isinstance(phrase, str) and " ".join(fold(phrase).split()) in self.all

    @classmethod
    def load(cls, path: str | os.PathLike | None = None) -> "ConnectiveList":
        entries: dict[str, set[str]] = {}
        for line in read_lines(path or resource_path("connectives.txt")):
            cls_name, sep, phrase = line.partition(":")
            cls_name = cls_name.strip().lower()
            if not sep or cls_name not in CONNECTIVE_CLASSES or not phrase.strip():
                raise ResourceError(f"bad connective line {line!r}")
            entries.setdefault(cls_name, set()).add(" ".join(fold(phrase).split()))
        return cls({k: frozenset(v) for k, v in entries.items()})
