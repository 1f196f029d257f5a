"""Write tiny hand-specified databases in WordNet 3.0 file format."""

from __future__ import annotations

from pathlib import Path

SUFFIX = {"n": "noun", "v": "verb", "a": "adj"}
HEADER = "  1 This is a hand-made test database.\n"


def write_db(root: Path, synsets: dict[str, tuple[str, list[str], list[tuple[str, str]]]]) -> Path:
    """``synsets`` maps a key to (ss_type, lemmas, [(pointer symbol, target key)]).

    The part of speech comes from the key prefix: "n:cake", "v:eat", "a:big".
    """
    root.mkdir(parents=True, exist_ok=True)
    offsets: dict[str, int] = {}
    lines: dict[str, str] = {}
    for code, suffix in SUFFIX.items():
        keys = [k for k in synsets if k.startswith(code + ":")]
        off = len(HEADER)
        for key in keys:
            offsets[key] = off
            off += len(_line(key, synsets[key], {k: 0 for k in synsets}, 0))
        body = "".join(_line(k, synsets[k], offsets, offsets[k]) for k in keys)
        (root / f"data.{suffix}").write_text(HEADER + body, encoding="utf-8", newline="\n")
        lines[code] = body

    for code, suffix in SUFFIX.items():
        index: dict[str, list[str]] = {}
        for key, (_, lemmas, _) in synsets.items():
            if key.startswith(code + ":"):
                for lemma in lemmas:
                    index.setdefault(lemma.lower(), []).append(key)
        out = HEADER
        for lemma in sorted(index):
            offs = " ".join(f"{offsets[k]:08d}" for k in index[lemma])
            out += f"{lemma} {code} {len(index[lemma])} 0 {len(index[lemma])} 0 {offs}  \n"
        (root / f"index.{suffix}").write_text(out, encoding="utf-8", newline="\n")
    return root


def _line(key, entry, offsets, own) -> str:
    ss_type, lemmas, ptrs = entry
    words = " ".join(f"{w} 0" for w in lemmas)
    ptr_text = "".join(
        f"{sym} {offsets[target]:08d} {target[0]} 0000 "
        for sym, target in ptrs
    )
    return f"{own:08d} 00 {ss_type} {len(lemmas):02x} {words} {len(ptrs):03d} {ptr_text}| gloss  \n"
