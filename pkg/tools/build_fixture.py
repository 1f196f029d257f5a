"""Cut the bundled lexicon subset and word vectors out of a full WordNet 3.0.

usage: python tools/build_fixture.py /path/to/wordnet-3.0 [--out src/lard/resources]

The subset keeps, for every seed lemma, its first few senses, their
hypernyms, and the first hyponyms of each hypernym (for adjectives: the
cluster head and its first satellites). Pointers leaving the subset are
dropped and byte offsets are recomputed, so the result is a valid database
in its own right.

Word vectors are synthetic: each synset gets a seeded random direction
blended with its hypernym ancestry, so words under a common hypernym end up
close together. They stand in for pretrained vectors; any GloVe-style text
file can replace them.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from collections import defaultdict
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(ROOT / "tests"))

import fuzzcorpus  # noqa: E402
from lard.textcore import tokenize  # noqa: E402

SUFFIX = {"n": "noun", "v": "verb", "a": "adj"}
SENSES_PER_LEMMA = 3
HYPONYMS_PER_PARENT = 30
DIM = 48


class Record:
    __slots__ = ("pos", "offset", "head", "words", "ptrs", "tail", "gloss", "ss_type")

    def __init__(self, pos, offset, line):
        body, _, gloss = line.partition("|")
        f = body.split()
        self.pos = pos
        self.offset = offset
        self.ss_type = f[2]
        self.head = f[1]
        w_cnt = int(f[3], 16)
        self.words = [(f[4 + 2 * i], f[5 + 2 * i]) for i in range(w_cnt)]
        c = 4 + 2 * w_cnt
        p_cnt = int(f[c])
        c += 1
        self.ptrs = [tuple(f[c + 4 * i : c + 4 * i + 4]) for i in range(p_cnt)]
        self.tail = f[c + 4 * p_cnt :]
        self.gloss = gloss.strip()

    def targets(self, symbols):
        return [(p[2] if p[2] != "s" else "a", int(p[1])) for p in self.ptrs if p[0] in symbols]

    @property
    def key(self):
        return (self.pos, self.offset)


def load_full(wn: Path):
    records = {}
    index = {}
    header = {}
    for pos, suffix in SUFFIX.items():
        data = (wn / f"data.{suffix}").read_bytes()
        head_lines = []
        # some distributions ship CRLF files, so trust declared offsets
        for raw in data.split(b"\n")[:-1]:
            line = raw.decode("utf-8").rstrip("\r")
            if line.startswith("  "):
                head_lines.append(line.rstrip())
            else:
                rec = Record(pos, int(line[:8]), line)
                records[rec.key] = rec
        header[pos] = head_lines
        for line in (wn / f"index.{suffix}").read_text("utf-8").splitlines():
            line = line.rstrip("\r")
            if line.startswith("  "):
                continue
            f = line.split()
            cnt, p_cnt = int(f[2]), int(f[3])
            index[(f[0], pos)] = [(pos, int(o)) for o in f[6 + p_cnt : 6 + p_cnt + cnt]]
    return records, index, header


def select(records, index, lemmas):
    keep: set = set()

    def add(key):
        if key in records:
            keep.add(key)

    for lemma in lemmas:
        for pos in SUFFIX:
            for key in index.get((lemma, pos), [])[:SENSES_PER_LEMMA]:
                add(key)
                rec = records[key]
                if pos == "a":
                    heads = rec.targets({"&"}) if rec.ss_type == "s" else [key]
                    for head in heads:
                        add(head)
                        for sat in records[head].targets({"&"})[:HYPONYMS_PER_PARENT]:
                            add(sat)
                else:
                    for parent in rec.targets({"@", "@i"}):
                        add(parent)
                        for child in records[parent].targets({"~", "~i"})[:HYPONYMS_PER_PARENT]:
                            add(child)
    return keep


def write_subset(records, index, header, keep, out: Path):
    out.mkdir(parents=True, exist_ok=True)
    new_offset = {}
    lines = {}
    for pos in SUFFIX:
        prefix = "".join(h + "\n" for h in header[pos])
        off = len(prefix.encode("utf-8"))
        ordered = sorted(k for k in keep if k[0] == pos)
        built = []
        for key in ordered:
            rec = records[key]
            ptrs = [p for p in rec.ptrs if ((p[2] if p[2] != "s" else "a"), int(p[1])) in keep]
            words = " ".join(f"{w} {lex_id}" for w, lex_id in rec.words)
            tail = " ".join(rec.tail).replace("{", "{{").replace("}", "}}")
            gloss = rec.gloss.replace("{", "{{").replace("}", "}}")
            template = (
                f"{{off}} {rec.head} {rec.ss_type} {len(rec.words):02x} {words} "
                f"{len(ptrs):03d} " + "".join(f"{p[0]} {{{i}}} {p[2]} {p[3]} " for i, p in enumerate(ptrs))
                + (tail + " " if tail else "")
                + f"| {gloss}  \n"
            )
            built.append((key, template, ptrs))
            new_offset[key] = off
            # offsets are fixed-width, so the final length is known now
            off += len(template.format(*(["00000000"] * len(ptrs)), off="00000000").encode("utf-8"))
        lines[pos] = (prefix, built)

    for pos, suffix in SUFFIX.items():
        prefix, built = lines[pos]
        with open(out / f"data.{suffix}", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(prefix)
            for key, template, ptrs in built:
                targets = [
                    f"{new_offset[((p[2] if p[2] != 's' else 'a'), int(p[1]))]:08d}" for p in ptrs
                ]
                fh.write(template.format(*targets, off=f"{new_offset[key]:08d}"))

    lemma_synsets = defaultdict(list)
    for (lemma, pos), keys in index.items():
        for key in keys:
            if key in keep:
                lemma_synsets[(lemma, pos)].append(key)
    for pos, suffix in SUFFIX.items():
        entries = sorted((lemma, keys) for (lemma, p), keys in lemma_synsets.items() if p == pos)
        with open(out / f"index.{suffix}", "w", encoding="utf-8", newline="\n") as fh:
            fh.write("".join(h + "\n" for h in header[pos]))
            for lemma, keys in entries:
                symbols = sorted({p[0] for k in keys for p in records[k].ptrs
                                  if ((p[2] if p[2] != "s" else "a"), int(p[1])) in keep})
                offs = " ".join(f"{new_offset[k]:08d}" for k in keys)
                fh.write(
                    f"{lemma} {pos} {len(keys)} {len(symbols)} "
                    + "".join(s + " " for s in symbols)
                    + f"{len(keys)} 0 {offs}  \n"
                )


def _rand(name: str) -> np.ndarray:
    seed = int.from_bytes(hashlib.sha256(name.encode()).digest()[:8], "big")
    return np.random.default_rng(seed).standard_normal(DIM) / np.sqrt(DIM)


def build_vectors(records, keep, vocab_extra, out: Path):
    memo = {}

    def synset_vec(key, depth=0):
        if key in memo:
            return memo[key]
        rec = records[key]
        vec = _rand(f"{key[0]}:{rec.words[0][0]}:{key[1]}")
        if depth < 25:
            if key[0] == "a":
                parents = rec.targets({"&"}) if rec.ss_type == "s" else []
                weight = 1.2
            else:
                parents = rec.targets({"@", "@i"})
                weight = 1.5
            if parents:
                vec = vec + weight * np.mean([synset_vec(p, depth + 1) for p in parents], axis=0)
        memo[key] = vec
        return vec

    word_senses = defaultdict(list)
    for key in sorted(keep):
        for rank, (w, _) in enumerate(records[key].words):
            name = w.split("(")[0].replace("_", " ").lower()
            for tok in name.split():
                word_senses[tok].append((rank, key))

    vectors = {}
    for word, senses in word_senses.items():
        acc = sum(synset_vec(k) / (1 + r) for r, k in senses)
        acc = acc / np.linalg.norm(acc)
        vectors[word] = acc + 0.25 * _rand("word:" + word)

    for word in sorted(vocab_extra):
        if word in vectors or not any(c.isalnum() for c in word):
            continue
        base = next(
            (vectors[b] for b in (word[:-1], word[:-2], word[:-3] + "y", word[:-2] + "e",
                                  word[:-3], word[:-3] + "e") if b in vectors),
            None,
        )
        if base is not None:
            vectors[word] = base + 0.1 * _rand("infl:" + word)
        else:
            vectors[word] = 0.6 * _rand("fn:" + word)

    with open(out / "vectors.txt", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{len(vectors)} {DIM}\n")
        for word in sorted(vectors):
            if any(c.isspace() for c in word):
                continue
            fh.write(word + " " + " ".join(f"{x:.4f}" for x in vectors[word]) + "\n")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("wordnet", type=Path)
    ap.add_argument("--out", type=Path, default=ROOT / "src" / "lard" / "resources")
    args = ap.parse_args()

    records, index, header = load_full(args.wordnet)
    keep = select(records, index, fuzzcorpus.seed_lemmas())
    write_subset(records, index, header, keep, args.out / "wordnet")
    license_file = args.wordnet / "LICENSE"
    if license_file.exists():
        (args.out / "wordnet" / "LICENSE").write_bytes(license_file.read_bytes())

    extra = {t.folded for s in fuzzcorpus.corpus(20000, seed=99) for t in tokenize(s)}
    extra |= {"thank", "you", "for", "your", "let's", "today", "i", "would", "like", "to"}
    build_vectors(records, keep, extra, args.out)
    counts = {p: sum(1 for k in keep if k[0] == p) for p in SUFFIX}
    print(f"kept synsets: {counts}")


if __name__ == "__main__":
    main()
