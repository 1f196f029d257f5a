import dataclasses
import io
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lard.errors import (
    GenerationFailure,
    InsufficientCorpus,
    NoCandidateWord,
    NoValidIndex,
    ResourceError,
    RetryNeeded,
)
from lard.forge import (
    ConnectiveList,
    CueList,
    GenerationConfig,
    copy_case,
    gen_repetition,
    gen_replacement,
    gen_restart,
    generate_batch,
    item_seed,
    junction_conflict,
)
from lard.forge.checks import check_item
from lard.forge.generators import restart_splits
from lard.scheme import render_notation, write_jsonl
from lard.textcore import FluentSentence, Token, partition, tokenize
from oracles import rank_candidates

THANKS = FluentSentence.from_text("t", "Thank you for your help")
PANCAKES = FluentSentence.from_text("p", "I would like to eat pancakes for breakfast")
DRESS = FluentSentence.from_text("d", "I would like to buy a new dress")
TUESDAY = FluentSentence.from_text("q", "Can we meet on Tuesday?")


def folded(tokens):
    return [t.folded for t in tokens]


def fold_text(text):
    return [t.folded for t in tokenize(text)]


def remaining_after_deletion(s):
    """Reference reconstruction written straight from the span definitions."""
    ann = s.annotation
    gone = set(range(ann.reparandum.start, ann.reparandum.end))
    if ann.interregnum is not None:
        gone |= set(range(ann.interregnum.start, ann.interregnum.end))
    return [t.folded for i, t in enumerate(s.tokens) if i not in gone]


class TestGolden:
    def test_repetition_degree_1(self):
        s = gen_repetition(THANKS, 1, random.Random(0), index=2)
        assert folded(s.tokens) == fold_text("Thank you for for your help")
        assert render_notation(s) == "Thank you [for + for] your help"

    def test_repetition_degree_2(self):
        s = gen_repetition(THANKS, 2, random.Random(0), index=0)
        assert folded(s.tokens) == fold_text("Thank you thank you for your help")
        assert render_notation(s) == "[Thank you + thank you] for your help"

    def test_replacement_one_word(self, lex, vectors):
        s = gen_replacement(PANCAKES, "noun", GenerationConfig(), lex, vectors, random.Random(0),
                            repair_index=5, reparandum="cheesecake", context=0, cue="no")
        assert folded(s.tokens) == fold_text("I would like to eat cheesecake no pancakes for breakfast")
        assert render_notation(s) == "I would like to eat [cheesecake + {no} pancakes] for breakfast"
        ann = s.annotation
        assert [t.surface for t in s.span_tokens(ann.reparandum)] == ["cheesecake"]
        assert [t.surface for t in s.span_tokens(ann.interregnum)] == ["no"]
        assert [t.surface for t in s.span_tokens(ann.repair)] == ["pancakes"]

    def test_replacement_with_context(self, lex, vectors):
        s = gen_replacement(PANCAKES, "noun", GenerationConfig(), lex, vectors, random.Random(0),
                            repair_index=5, reparandum="cheesecake", context=2, cue="no")
        assert folded(s.tokens) == fold_text(
            "I would like to eat cheesecake no to eat pancakes for breakfast")
        assert render_notation(s) == "I would like [to eat cheesecake + {no} to eat pancakes] for breakfast"

    def test_restart(self, connectives):
        s = gen_restart(DRESS, TUESDAY, GenerationConfig(), connectives, random.Random(0), split=2)
        assert folded(s.tokens) == fold_text("I would can we meet on Tuesday ?")
        assert render_notation(s) == "[I would + ] can we meet on Tuesday ?"


class TestRepetition:
    def test_punctuation_only(self):
        with pytest.raises(NoValidIndex):
            gen_repetition(FluentSentence.from_text("x", "."), 1, random.Random(0))

    def test_index_must_be_valid(self):
        with pytest.raises(NoValidIndex):
            gen_repetition(TUESDAY, 2, random.Random(0), index=4)

    def test_uniform_over_valid_windows(self):
        s = FluentSentence.from_text("x", "a b , c d e .")
        rng = random.Random(1)
        seen = {gen_repetition(s, 2, rng).provenance.params["index"] for _ in range(300)}
        assert seen == {0, 3, 4}

    def test_degree_bounds(self):
        with pytest.raises(ValueError):
            gen_repetition(THANKS, 4, random.Random(0))


class TestCasing:
    @pytest.mark.parametrize(
        "surface,index,expected",
        [("Thank", 0, "thank"), ("I", 0, "I"), ("I'm", 0, "I'm"), ("Tuesday", 4, "Tuesday"),
         ("Can", 0, "can"), ("NASA", 2, "NASA"), ("hello", 3, "hello")],
    )
    def test_copy_case(self, surface, index, expected):
        assert copy_case(Token.make(surface, index), index) == expected


class TestReplacement:
    def test_no_candidate_word(self, lex, vectors):
        with pytest.raises(NoCandidateWord):
            gen_replacement(FluentSentence.from_text("x", "?"), "noun", GenerationConfig(), lex,
                            vectors, random.Random(0))

    def test_winner_matches_oracle(self, lex, vectors):
        s = gen_replacement(PANCAKES, "noun", GenerationConfig(num_hyponyms=50), lex, vectors,
                            random.Random(0), repair_index=5, context=0, cue=None)
        from lard.forge.generators import CandidatePool

        names = [n for n in CandidatePool(lex).get("pancake", "noun", 50) if n.lower() != "pancakes"]
        table = {w: v.tolist() for w, v in vectors.vectors.items()}
        base = folded(PANCAKES.tokens)
        ranked = rank_candidates(table, base, [base[:5] + fold_text(n) + base[6:] for n in names])
        assert s.provenance.params["reparandum_lemma"] == names[ranked[0][1]]
        assert s.annotation.interregnum is None
        assert s.annotation.subclass == "replacement-noun-nocue"

    def test_context_limited_by_room(self, lex, vectors):
        s = FluentSentence.from_text("x", "well , cake is nice")
        for seed in range(30):
            out = gen_replacement(s, "noun", GenerationConfig(), lex, vectors, random.Random(seed),
                                  repair_index=2, cue=None)
            assert out.provenance.params["context"] == 0

    def test_context_out_of_range(self, lex, vectors):
        with pytest.raises(ValueError):
            gen_replacement(PANCAKES, "noun", GenerationConfig(), lex, vectors, random.Random(0),
                            repair_index=5, reparandum="cheesecake", context=6)

    def test_cue_probability_extremes(self, lex, vectors, cues):
        for prob, has_cue in ((0.0, False), (1.0, True)):
            cfg = GenerationConfig(cue_probability=prob)
            for seed in range(10):
                out = gen_replacement(PANCAKES, "noun", cfg, lex, vectors, random.Random(seed), cues)
                assert (out.annotation.interregnum is not None) == has_cue
                assert out.annotation.subclass.endswith("-cue" if has_cue else "-nocue")


class TestRestart:
    def test_prefix_ending_in_connective(self, connectives):
        s1 = FluentSentence.from_text("a", "I was tired and I left")
        with pytest.raises(RetryNeeded):
            gen_restart(s1, TUESDAY, GenerationConfig(), connectives, random.Random(0), split=4)

    def test_shared_boundary_word(self, connectives):
        s1 = FluentSentence.from_text("a", "I think we can go")
        with pytest.raises(RetryNeeded):
            gen_restart(s1, TUESDAY, GenerationConfig(), connectives, random.Random(0), split=4)

    def test_continuation_starting_with_bigram(self, connectives):
        s2 = FluentSentence.from_text("b", "As well the dog barked")
        assert "as well" in junction_conflict(DRESS.tokens[:2], s2.tokens, connectives)

    def test_k3_overlap(self, connectives):
        prefix = tokenize("we went to the park")
        cont = tokenize("to the park we went")
        assert "k=3" in junction_conflict(prefix, cont, connectives)

    def test_same_sentence_rejected(self, connectives):
        with pytest.raises(ValueError):
            gen_restart(DRESS, DRESS, GenerationConfig(), connectives, random.Random(0))

    def test_splits(self):
        assert restart_splits(TUESDAY) == [1, 2, 3, 4, 5]
        assert restart_splits(TUESDAY, 2) == [1, 2]
        assert restart_splits(FluentSentence.from_text("x", "Hi")) == []


class TestResources:
    def test_default_cues(self, cues):
        for phrase in ("no", "sorry", "wait", "oops", "I meant to say", "I mean", "you know"):
            assert phrase in cues
        assert "um" not in cues

    def test_filled_pause_rejected(self):
        with pytest.raises(ResourceError):
            CueList(("no", "um"))
        with pytest.raises(ResourceError):
            CueList(())

    def test_connectives(self, connectives):
        assert {"and", "because", "but", "after", "as well"} <= connectives.all

    def test_connective_class_required(self, tmp_path):
        (tmp_path / "c.txt").write_text("additive: and\ncausal: so\nadversative: but\n")
        with pytest.raises(ResourceError):
            ConnectiveList.load(tmp_path / "c.txt")


class TestConfig:
    @pytest.mark.parametrize(
        "kwargs",
        [dict(num_hyponyms=0), dict(cue_probability=1.5), dict(context_max=4),
         dict(degree_weights=(0, 0, 0)), dict(pos_weights=(1, -1, 1)), dict(counts={"repetition": -1})],
    )
    def test_rejected(self, kwargs):
        with pytest.raises(ValueError):
            GenerationConfig(**kwargs)


def _one(kind, rng, corpus, lex, vectors, cues, connectives):
    cfg = GenerationConfig()
    s = rng.choice(corpus)
    if kind == "repetition":
        return s, gen_repetition(s, rng.choice((1, 2, 3)), rng)
    if kind == "replacement":
        return s, gen_replacement(s, rng.choice(("noun", "verb", "adjective")), cfg, lex, vectors,
                                  rng, cues)
    s2 = rng.choice([x for x in corpus if x.id != s.id])
    return s2, gen_restart(s, s2, cfg, connectives, rng)


class TestInvariants:
    @settings(max_examples=400, deadline=None)
    @given(st.sampled_from(["repetition", "replacement", "restart"]), st.integers(0, 2**32))
    def test_generated_items(self, fuzz_small, lex, vectors, cues, connectives, kind, seed):
        rng = random.Random(seed)
        try:
            target, s = _one(kind, rng, fuzz_small, lex, vectors, cues, connectives)
        except GenerationFailure:
            return
        assert remaining_after_deletion(s) == folded(target.tokens)
        assert check_item(s, cues, connectives, {sid: target for sid in s.provenance.sources}) == []
        ann = s.annotation
        if kind == "repetition":
            assert folded(s.span_tokens(ann.reparandum)) == folded(s.span_tokens(ann.repair))
        if kind == "replacement":
            d = ann.repair.end - ann.repair.start - 1
            rep = folded(s.span_tokens(ann.reparandum))
            fix = folded(s.span_tokens(ann.repair))
            assert rep[:d] == fix[:d] and rep[d:] != fix[d:]
            assert 1 <= len(rep) - d <= 4


def _corpus(n, seed):
    from conftest import fluent_corpus

    return fluent_corpus(n, seed)


class TestBatch:
    def test_exact_counts_and_determinism(self, lex, vectors, cues, connectives):
        corpus = _corpus(1500, 11)
        counts = {"repetition": 120, "replacement": 120, "restart": 60}
        cfg = GenerationConfig(counts=counts, seed=42)
        part = partition(corpus, [counts[k] for k in ("repetition", "replacement", "restart")], 42)
        outputs = []
        for threads in (1, 8):
            items, report = generate_batch(part, cfg, lex, vectors, cues, connectives, threads=threads)
            buf = io.StringIO()
            write_jsonl(items, buf)
            outputs.append(buf.getvalue())
            assert report.per_kind == counts
            assert sum(report.per_subclass.values()) == 300
        assert outputs[0] == outputs[1]
        ids = [line.split('"id": "')[1].split('"')[0] for line in outputs[0].splitlines()]
        assert ids[:2] == ["repetition-000000", "repetition-000001"] and ids[-1] == "restart-000059"

    def test_item_independent_of_thread_schedule(self):
        assert item_seed(1, "restart", 3) == item_seed(1, "restart", 3)
        assert item_seed(1, "restart", 3) != item_seed(1, "restart", 4)

    def test_empty_subset(self, lex, vectors, cues, connectives):
        part = partition(_corpus(20, 1), (1, 0, 0), 0)
        cfg = GenerationConfig(counts={"restart": 1})
        with pytest.raises(InsufficientCorpus):
            generate_batch(part, cfg, lex, vectors, cues, connectives)

    def test_unusable_subset_exhausts_budget(self, lex, vectors, cues, connectives):
        part = partition([FluentSentence.from_text("0", "?"), FluentSentence.from_text("1", "!")],
                         (1, 0, 0), 0)
        cfg = GenerationConfig(counts={"repetition": 1}, retry_budget=3)
        with pytest.raises(InsufficientCorpus):
            generate_batch(part, cfg, lex, vectors, cues, connectives)

    def test_short_sentence_warning(self, connectives):
        corpus = [FluentSentence.from_text(str(i), f"{w} is fine") for i, w in enumerate(["apple", "bread", "cake", "dog", "egg", "fig"])]
        part = partition(corpus, (0, 0, 1), 0)
        _, report = generate_batch(part, GenerationConfig(counts={"restart": 3}), None, None, None,
                                   connectives)
        assert report.warnings and "average" in report.warnings[0]

    def test_report_ratio(self, connectives):
        corpus = _corpus(200, 3)
        part = partition(corpus, (1, 0, 0), 0)
        items, report = generate_batch(part, GenerationConfig(counts={"repetition": 50}), None,
                                       None, None, connectives)
        disfluent = sum(len(s.annotation.reparandum) for s in items)
        assert report.disfluent_tokens == disfluent
        assert report.total_tokens == sum(len(s.tokens) for s in items)
        assert dataclasses.asdict(report)["per_kind"]["repetition"] == 50
