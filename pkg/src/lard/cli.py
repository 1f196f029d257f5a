"""Command-line entry point.

    lard generate --input fluent.txt --counts rep=100,repl=100,res=50 --seed 42 --out out.jsonl
    lard stats --input out.jsonl [--fluent fluent.txt]
    lard validate --input out.jsonl [--source fluent.txt]

Exit codes: 0 success, 1 operational error, 2 validation failure.
"""

from __future__ import annotations

import argparse
import datetime as dt
import hashlib
import json
import sys
from collections import Counter
from pathlib import Path
from typing import Any, Iterable, Sequence

from . import __version__
from .errors import LardError, MalformedRecord
from .forge import ConnectiveList, CueList, GenerationConfig, generate_batch
from .forge.checks import check_item
from .lexicon import load_lexicon
from .resources import resource_path
from .scheme import KINDS, DisfluentSentence, from_record, token_labels, write_jsonl, write_pairs, write_tags
from .scheme import Label
from .scorer import RemoteEmbedder, parse_embedder
from .textcore import FluentSentence, load_corpus, partition

EXIT_OK, EXIT_ERROR, EXIT_INVALID = 0, 1, 2
MAX_VIOLATIONS_SHOWN = 20

_KIND_ALIASES = {
    "rep": "repetition", "repetition": "repetition", "repetitions": "repetition",
    "repl": "replacement", "replacement": "replacement", "replacements": "replacement",
    "res": "restart", "restart": "restart", "restarts": "restart",
}


class _Parser(argparse.ArgumentParser):
    # usage errors are operational errors, exit code 2 means validation failure
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        _emit_error({"error": "UsageError", "message": message})
        raise SystemExit(EXIT_ERROR)


def _emit_error(record: dict) -> None:
    print(json.dumps(record, sort_keys=True), file=sys.stderr)


def parse_counts(text: str) -> dict[str, int]:
    counts = {kind: 0 for kind in KINDS}
    for part in filter(None, (p.strip() for p in text.split(","))):
        key, sep, value = part.partition("=")
        kind = _KIND_ALIASES.get(key.strip().lower())
        if not sep or kind is None:
            raise ValueError(f"bad count {part!r}; expected rep=N, repl=N or res=N")
        counts[kind] = int(value)
        if counts[kind] < 0:
            raise ValueError("counts must be non-negative")
    return counts


def parse_weights(text: str, size: int) -> tuple[float, ...]:
    values = tuple(float(x) for x in text.split(","))
    if len(values) != size:
        raise ValueError(f"expected {size} comma-separated weights, got {text!r}")
    return values


def _guess_format(path: str, fmt: str | None) -> str:
    if fmt:
        return fmt
    return "jsonl" if path.endswith((".jsonl", ".json")) else "plain"


def _read_corpus(path: str, fmt: str | None) -> list[FluentSentence]:
    with open(path, "rb") as fh:
        return load_corpus(fh, _guess_format(path, fmt), source=Path(path).name)


def _digest(*paths: Path) -> str:
    h = hashlib.sha256()
    for path in paths:
        h.update(path.name.encode())
        h.update(path.read_bytes())
    return h.hexdigest()


def _now() -> str:
    return dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds")


# -- generate ------------------------------------------------------------------


def cmd_generate(args: argparse.Namespace) -> int:
    started = _now()
    counts = parse_counts(args.counts)
    config = GenerationConfig(
        counts=counts,
        degree_weights=parse_weights(args.degree_weights, 3),
        pos_weights=parse_weights(args.pos_weights, 3),
        num_hyponyms=args.num_hyponyms,
        cue_probability=args.cue_prob,
        context_max=args.context_max,
        restart_prefix_max=args.restart_prefix_max,
        seed=args.seed,
        retry_budget=args.retry_budget,
    )
    corpus = _read_corpus(args.input, args.format)
    resources: dict[str, Any] = {"input": _digest(Path(args.input))}

    lex = backend = cues = connectives = None
    if counts["replacement"]:
        lex_dir = Path(args.lexicon or resource_path("wordnet"))
        lex = load_lexicon(lex_dir)
        resources["lexicon"] = _digest(*sorted(p for p in lex_dir.iterdir()
                                               if p.name.startswith(("index.", "data."))))
        resources["stoplist"] = _digest(resource_path("stopwords.txt"))
        backend = parse_embedder(
            args.embedder or f"static={resource_path('vectors.txt')}", timeout=args.embed_timeout
        )
        if isinstance(backend, RemoteEmbedder):
            resources["embedder"] = {"url": backend.url}
        else:
            resources["embedder"] = _digest(Path(backend.path))
        cues_path = Path(args.cues or resource_path("cues.txt"))
        cues = CueList.load(cues_path)
        resources["cues"] = _digest(cues_path)
    if counts["restart"]:
        conn_path = Path(args.connectives or resource_path("connectives.txt"))
        connectives = ConnectiveList.load(conn_path)
        resources["connectives"] = _digest(conn_path)

    if sum(counts.values()):
        parts = partition(corpus, [counts[k] for k in KINDS], args.seed)
        items, report = generate_batch(parts, config, lex, backend, cues, connectives,
                                       threads=args.threads)
        report_dict = report.to_dict()
    else:
        items, report_dict = [], {}

    out = Path(args.out)
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        write_jsonl(items, fh)
    outputs = {"jsonl": str(out)}
    if args.tags_out:
        with open(args.tags_out, "w", encoding="utf-8", newline="\n") as fh:
            write_tags(items, fh, args.interregnum_mode)
        outputs["tags"] = args.tags_out
    if args.pairs_out:
        with open(args.pairs_out, "w", encoding="utf-8", newline="\n") as fh:
            write_pairs(items, fh)
        outputs["pairs"] = args.pairs_out

    report_path = out.with_name(out.stem + ".report.json")
    report_path.write_text(json.dumps(report_dict, indent=2, sort_keys=True) + "\n")
    manifest = {
        "tool": "lard",
        "version": __version__,
        "config": config.to_dict(),
        "interregnum_mode": args.interregnum_mode,
        "threads": args.threads,
        "resources": resources,
        "outputs": {**outputs, "report": str(report_path)},
        "items": len(items),
        "started_at": started,
        "finished_at": _now(),
    }
    manifest_path = out.with_name(out.stem + ".manifest.json")
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    for warning in report_dict.get("warnings", []):
        print(f"warning: {warning}", file=sys.stderr)
    print(f"wrote {len(items)} items to {out}")
    return EXIT_OK


# -- stats ---------------------------------------------------------------------


def _read_items(path: str) -> Iterable[tuple[int, Any]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                yield lineno, json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(f"invalid JSON ({exc.msg})", lineno) from None


def corpus_stats(
    items: Sequence[DisfluentSentence], fluent: Sequence[FluentSentence] = ()
) -> dict[str, Any]:
    """Disfluency ratios of a generated corpus, optionally mixed with fluent sentences."""
    n_dis, n_flu = len(items), len(fluent)
    dis_tokens = 0
    tokens = sum(len(s) for s in fluent)
    kinds: Counter[str] = Counter()
    subclasses: Counter[str] = Counter()
    for s in items:
        labels = token_labels(s, "keep").labels
        dis_tokens += sum(lab is Label.DISFLUENT for lab in labels)
        tokens += len(labels)
        kinds[s.kind] += 1
        subclasses[s.annotation.subclass] += 1

    def hist(counter: Counter[str]) -> dict[str, dict[str, float]]:
        return {
            k: {"count": v, "percent": 100.0 * v / n_dis}
            for k, v in sorted(counter.items())
        }

    total = n_dis + n_flu
    return {
        "disfluent_sentences": n_dis,
        "fluent_sentences": n_flu,
        "sentence_disfluent_ratio": 100.0 * n_dis / total if total else 0.0,
        "disfluent_tokens": dis_tokens,
        "tokens": tokens,
        "token_disfluent_ratio": 100.0 * dis_tokens / tokens if tokens else 0.0,
        "kinds": hist(kinds),
        "subclasses": hist(subclasses),
    }


def cmd_stats(args: argparse.Namespace) -> int:
    items = [from_record(rec, lineno) for lineno, rec in _read_items(args.input)]
    fluent = _read_corpus(args.fluent, args.format) if args.fluent else []
    stats = corpus_stats(items, fluent)
    if args.json:
        print(json.dumps(stats, indent=2, sort_keys=True))
        return EXIT_OK
    print(f"sentences: {stats['disfluent_sentences']} disfluent, {stats['fluent_sentences']} fluent")
    print(f"sentence-level disfluent ratio: {stats['sentence_disfluent_ratio']:.2f}%")
    print(f"token-level disfluent ratio: {stats['token_disfluent_ratio']:.2f}%"
          f" ({stats['disfluent_tokens']}/{stats['tokens']})")
    for title, key in (("kind", "kinds"), ("subclass", "subclasses")):
        for name, entry in stats[key].items():
            print(f"  {title} {name}: {entry['count']} ({entry['percent']:.2f}%)")
    return EXIT_OK


# -- validate ------------------------------------------------------------------


def cmd_validate(args: argparse.Namespace) -> int:
    cues = CueList.load(args.cues) if args.cues else CueList.load()
    connectives = ConnectiveList.load(args.connectives) if args.connectives else ConnectiveList.load()
    sources = None
    if args.source:
        sources = {s.id: s for s in _read_corpus(args.source, args.format)}

    violations: list[str] = []
    checked = 0
    with open(args.input, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            checked += 1
            try:
                item = from_record(json.loads(line), lineno)
            except json.JSONDecodeError as exc:
                violations.append(f"line {lineno}: invalid JSON ({exc.msg})")
                continue
            except MalformedRecord as exc:
                violations.append(str(exc))
                continue
            for problem in check_item(item, cues, connectives, sources):
                violations.append(f"line {lineno} ({item.id}): {problem}")

    for message in violations[:MAX_VIOLATIONS_SHOWN]:
        print(message)
    if violations:
        print(f"{len(violations)} violation(s) in {checked} record(s)")
        return EXIT_INVALID
    print(f"all {checked} record(s) valid")
    return EXIT_OK


# -- wiring --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lard", description="Synthesize annotated speech disfluencies.")
    parser.add_argument("--version", action="version", version=f"lard {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("generate", help="generate disfluencies from a fluent corpus")
    gen.add_argument("--input", required=True)
    gen.add_argument("--format", choices=("plain", "jsonl"))
    gen.add_argument("--out", required=True)
    gen.add_argument("--tags-out")
    gen.add_argument("--pairs-out")
    gen.add_argument("--counts", required=True, help="e.g. rep=100,repl=100,res=50")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--degree-weights", default="1,1,1", help="weights of degrees 1,2,3")
    gen.add_argument("--pos-weights", default="1,1,1", help="weights of noun,verb,adjective")
    gen.add_argument("--num-hyponyms", type=int, default=10)
    gen.add_argument("--cue-prob", type=float, default=0.5)
    gen.add_argument("--context-max", type=int, default=3)
    gen.add_argument("--restart-prefix-max", type=int)
    gen.add_argument("--embedder", help="static=PATH or http=URL")
    gen.add_argument("--embed-timeout", type=float, default=30.0)
    gen.add_argument("--lexicon", help="WordNet database directory")
    gen.add_argument("--cues")
    gen.add_argument("--connectives")
    gen.add_argument("--interregnum-mode", choices=("keep", "drop"), default="keep")
    gen.add_argument("--threads", type=int, default=1)
    gen.add_argument("--retry-budget", type=int, default=20)
    gen.set_defaults(func=cmd_generate)

    st = sub.add_parser("stats", help="report disfluency ratios of a generated corpus")
    st.add_argument("--input", required=True)
    st.add_argument("--fluent", help="fluent corpus mixed into the training set")
    st.add_argument("--format", choices=("plain", "jsonl"))
    st.add_argument("--json", action="store_true")
    st.set_defaults(func=cmd_stats)

    va = sub.add_parser("validate", help="check every record against the generator invariants")
    va.add_argument("--input", required=True)
    va.add_argument("--source", help="fluent corpus the records were generated from")
    va.add_argument("--format", choices=("plain", "jsonl"))
    va.add_argument("--cues")
    va.add_argument("--connectives")
    va.set_defaults(func=cmd_validate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LardError as exc:
        _emit_error(exc.to_record())
    except (OSError, ValueError) as exc:
        _emit_error({"error": type(exc).__name__, "message": str(exc)})
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
