"""In-memory reader for WordNet 3.0 database files.

Only nouns, verbs and adjectives are loaded (``index.{noun,verb,adj}`` and
``data.{noun,verb,adj}``). Adjectives have no hypernym tree; instead the
similar-to links of an adjective cluster stand in for it: a satellite's
"hypernym" is its head synset, and a head's "hyponyms" are its satellites.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, NamedTuple

from .errors import MissingFile, ParseError, WordNotFound

POS_NAMES = ("noun", "verb", "adjective")
_FILE_SUFFIX = {"noun": "noun", "verb": "verb", "adjective": "adj"}
_POS_CODE = {"n": "noun", "v": "verb", "a": "adjective", "s": "adjective"}

_HYPERNYM_PTRS = {"@", "@i"}
_HYPONYM_PTRS = {"~", "~i"}
_SIMILAR_PTR = "&"

MAX_LEMMA_WORDS = 4


class SynsetId(NamedTuple):
    pos: str
    offset: int

    def __str__(self) -> str:
        return f"{self.pos[0]}{self.offset:08d}"


@dataclass(frozen=True)
class Synset:
    id: SynsetId
    lemmas: tuple[str, ...]
    hypernyms: tuple[SynsetId, ...]
    hyponyms: tuple[SynsetId, ...]
    related: tuple[SynsetId, ...]
    satellite: bool = False

    @property
    def name(self) -> str:
        return self.lemmas[0].replace("_", " ")


@dataclass(eq=False)
class Lexicon:
    synsets: dict[SynsetId, Synset]
    index: dict[tuple[str, str], tuple[SynsetId, ...]]
    stoplist: frozenset[str] = field(default_factory=frozenset)
    path: str = ""

    def senses(self, lemma: str, pos: str) -> tuple[SynsetId, ...]:
        return self.index.get((lemma, pos), ())

    def count(self, pos: str) -> int:
        return sum(1 for sid in self.synsets if sid.pos == pos)

    def __hash__(self) -> int:
        return id(self)


def _strip_adj_marker(word: str) -> str:
    # adjective lemmas may carry a syntactic marker: "galore(ip)"
    if word.endswith(")") and "(" in word:
        return word[: word.index("(")]
    return word


def _parse_data_line(line: bytes, pos: str, path: str, offset: int) -> Synset:
    fields = line.split(b"|", 1)[0].decode("utf-8").split()
    try:
        declared = int(fields[0])
        ss_type = fields[2]
        w_cnt = int(fields[3], 16)
        words = fields[4 : 4 + 2 * w_cnt : 2]
        if len(words) != w_cnt:
            raise ValueError("word list shorter than its count")
        cursor = 4 + 2 * w_cnt
        p_cnt = int(fields[cursor])
        cursor += 1
        hyper: list[SynsetId] = []
        hypo: list[SynsetId] = []
        related: list[SynsetId] = []
        for _ in range(p_cnt):
            symbol, target, target_pos, _srcdst = fields[cursor : cursor + 4]
            if len(_srcdst) != 4:
                raise ValueError("pointer record is incomplete")
            cursor += 4
            if target_pos not in _POS_CODE:
                continue
            ref = SynsetId(_POS_CODE[target_pos], int(target))
            if ref.pos != pos:
                continue
            if symbol in _HYPERNYM_PTRS:
                hyper.append(ref)
            elif symbol in _HYPONYM_PTRS:
                hypo.append(ref)
            elif symbol == _SIMILAR_PTR:
                related.append(ref)
    except (IndexError, ValueError) as exc:
        raise ParseError(f"malformed synset record ({exc})", path, offset) from None
    if declared != offset:
        raise ParseError(f"record declares offset {declared}", path, offset)
    if _POS_CODE.get(ss_type) != pos:
        raise ParseError(f"unexpected synset type {ss_type!r}", path, offset)
    return Synset(
        id=SynsetId(pos, offset),
        lemmas=tuple(_strip_adj_marker(w) for w in words),
        hypernyms=tuple(hyper),
        hyponyms=tuple(hypo),
        related=tuple(related),
        satellite=ss_type == "s",
    )


def _read_data(path: Path, pos: str, synsets: dict[SynsetId, Synset]) -> None:
    data = path.read_bytes()
    offset = 0
    while offset < len(data):
        end = data.find(b"\n", offset)
        if end < 0:
            raise ParseError("record is not newline-terminated", str(path), offset)
        line = data[offset:end]
        if line[:1] != b" ":
            syn = _parse_data_line(line, pos, str(path), offset)
            synsets[syn.id] = syn
        offset = end + 1


def _read_index(
    path: Path, pos: str, index: dict[tuple[str, str], tuple[SynsetId, ...]]
) -> list[tuple[int, SynsetId]]:
    data = path.read_bytes()
    refs: list[tuple[int, SynsetId]] = []
    offset = 0
    while offset < len(data):
        end = data.find(b"\n", offset)
        if end < 0:
            raise ParseError("entry is not newline-terminated", str(path), offset)
        line = data[offset:end]
        if line[:1] != b" " and line.strip():
            fields = line.decode("utf-8").split()
            try:
                lemma = fields[0]
                synset_cnt = int(fields[2])
                p_cnt = int(fields[3])
                offsets = [int(x) for x in fields[6 + p_cnt : 6 + p_cnt + synset_cnt]]
                if len(offsets) != synset_cnt or synset_cnt == 0:
                    raise ValueError("synset offsets shorter than their count")
            except (IndexError, ValueError) as exc:
                raise ParseError(f"malformed index entry ({exc})", str(path), offset) from None
            ids = tuple(SynsetId(pos, o) for o in offsets)
            refs.extend((offset, sid) for sid in ids)
            key = (lemma.lower(), pos)
            index[key] = index.get(key, ()) + ids
        offset = end + 1
    return refs


def load_lexicon(path: str | os.PathLike, stoplist: Iterable[str] | None = None) -> Lexicon:
    """Load a WordNet database directory into memory.

    Raises:
        MissingFile: a required index/data file is absent.
        ParseError: a file is malformed or truncated.
    """
    root = Path(path)
    files = {}
    for pos in POS_NAMES:
        for kind in ("index", "data"):
            f = root / f"{kind}.{_FILE_SUFFIX[pos]}"
            if not f.is_file():
                raise MissingFile(f"lexicon file not found: {f}")
            files[kind, pos] = f

    synsets: dict[SynsetId, Synset] = {}
    index: dict[tuple[str, str], tuple[SynsetId, ...]] = {}
    for pos in POS_NAMES:
        _read_data(files["data", pos], pos, synsets)
    for pos in POS_NAMES:
        f = files["index", pos]
        for line_offset, sid in _read_index(f, pos, index):
            if sid not in synsets:
                raise ParseError(f"index refers to unknown synset {sid}", str(f), line_offset)
    if stoplist is None:
        from .resources import load_stoplist

        stoplist = load_stoplist()
    return Lexicon(synsets, index, frozenset(w.lower() for w in stoplist), str(root))


# -- lemmatization -----------------------------------------------------------

_VOWELS = set("aeiou")


def _inflection_candidates(word: str, pos: str) -> list[str]:
    out: list[str] = []
    if pos in ("noun", "verb"):
        if word.endswith("ies") and len(word) > 4:
            out.append(word[:-3] + "y")
        if word.endswith("es") and len(word) > 3:
            out.append(word[:-2])
        if word.endswith("s") and not word.endswith("ss") and len(word) > 2:
            out.append(word[:-1])
    if pos == "verb":
        for suffix in ("ing", "ed"):
            if word.endswith(suffix) and len(word) > len(suffix) + 1:
                stem = word[: -len(suffix)]
                out.append(stem)
                out.append(stem + "e")
                if len(stem) > 2 and stem[-1] == stem[-2] and stem[-1] not in _VOWELS:
                    out.append(stem[:-1])
        if word.endswith("ied") and len(word) > 4:
            out.append(word[:-3] + "y")
    return out


def lemmatize(lex: Lexicon, word: str, pos: str) -> str | None:
    """Base form of ``word`` indexed under ``pos``, or None.

    The surface itself wins when indexed; otherwise simple suffix stripping
    is tried and validated against the index.
    """
    word = word.lower()
    if (word, pos) in lex.index:
        return word
    for cand in _inflection_candidates(word, pos):
        if (cand, pos) in lex.index:
            return cand
    return None


def pos_tags(lex: Lexicon, word: str, use_stoplist: bool = True) -> set[str]:
    """POS classes under which ``word`` (or its base form) is indexed."""
    word = word.lower()
    if not word or (use_stoplist and word in lex.stoplist):
        return set()
    return {pos for pos in POS_NAMES if lemmatize(lex, word, pos) is not None}


def hypernyms(lex: Lexicon, word: str, pos: str) -> list[SynsetId]:
    """Hypernym synsets pooled over every sense of ``(word, pos)``.

    For adjectives the cluster head stands in for the hypernym.
    """
    if pos not in POS_NAMES:
        raise ValueError(f"pos must be one of {POS_NAMES}, not {pos!r}")
    senses = lex.senses(word.lower(), pos)
    if not senses:
        raise WordNotFound(f"{word!r} is not indexed as {pos}")
    out: dict[SynsetId, None] = {}
    for sid in senses:
        syn = lex.synsets[sid]
        if pos == "adjective":
            parents = syn.related if syn.satellite else (sid,)
        else:
            parents = syn.hypernyms
        for parent in parents:
            out.setdefault(parent, None)
    return list(out)


def _children(lex: Lexicon, syn: Synset) -> tuple[SynsetId, ...]:
    if syn.id.pos == "adjective":
        if syn.satellite:
            return ()
        return tuple(r for r in syn.related if lex.synsets[r].satellite)
    return syn.hyponyms


def hyponym_lemmas(lex: Lexicon, synset: SynsetId, exclude: str, limit: int) -> list[str]:
    """Up to ``limit`` hyponym lemmas of ``synset`` in database order.

    One lemma is taken per hyponym synset: the first one with at most four
    words. Hyponym synsets that contain ``exclude`` are skipped entirely, so
    neither the excluded word nor its synonyms come back.
    """
    if limit < 1:
        raise ValueError("limit must be a positive integer")
    if synset not in lex.synsets:
        raise WordNotFound(f"unknown synset {synset}")
    exclude = exclude.lower().replace("_", " ")
    out: list[str] = []
    seen: set[str] = set()
    for child_id in _children(lex, lex.synsets[synset]):
        child = lex.synsets.get(child_id)
        if child is None:
            continue
        names = [lemma.replace("_", " ") for lemma in child.lemmas]
        if any(name.lower() == exclude for name in names):
            continue
        for name in names:
            if len(name.split()) <= MAX_LEMMA_WORDS and name.lower() not in seen:
                seen.add(name.lower())
                out.append(name)
                break
        if len(out) >= limit:
            break
    return out


@lru_cache(maxsize=1)
def default_lexicon() -> Lexicon:
    from .resources import resource_path

    return load_lexicon(resource_path("wordnet"))
