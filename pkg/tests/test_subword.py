import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from termident.subword import (
    DROP,
    EMIT_UNKNOWN,
    BpeFormatError,
    BpeModel,
    UNKNOWN_ELEMENT,
    load_bpe,
    save_bpe,
    tokenize,
    tokenize_test,
    tokenize_train,
    train_bpe,
)


def make_corpus(seed: int, size: int, alphabet: str, max_len: int = 10) -> list[str]:
    rng = random.Random(seed)
    return [
        "".join(rng.choice(alphabet) for _ in range(rng.randint(1, max_len)))
        for _ in range(size)
    ]


RPLUS_MODEL = BpeModel(
    base_chars=frozenset("Rplus"),
    merges=(("p", "l"), ("pl", "u"), ("plu", "s")),
)


def test_single_merge_training_example():
    model = train_bpe(["aa", "aa", "ab"], 1)
    assert model.base_chars == frozenset("ab")
    assert model.merges == (("a", "a"),)
    assert model.vocab == frozenset({"a", "b", "aa"})


def test_zero_merges_gives_character_vocab():
    model = train_bpe(["alpha", "beta"], 0)
    assert model.merges == ()
    assert model.vocab == model.base_chars == frozenset("alphbet")


def test_base_chars_are_exactly_corpus_chars():
    model = train_bpe(["ab", "bc"], 3)
    assert model.base_chars == frozenset("abc")


def test_training_stops_when_no_pair_repeats():
    # every adjacent pair occurs once, so no merge is justified
    model = train_bpe(["ab", "cd", "ef"], 10)
    assert model.merges == ()


def test_merge_count_clamps_to_supported_merges():
    model = train_bpe(["aa", "aa"], 10)
    # (a,a) merges once; afterwards no pair occurs twice
    assert model.merges == (("a", "a"),)


def test_ties_break_on_lexicographic_pair_order():
    model = train_bpe(["cd", "cd", "ab", "ab"], 1)
    assert model.merges == (("a", "b"),)


def test_pairs_never_cross_identifier_boundaries():
    # "b" ends one identifier and "a" starts the next; (b,a) must not count
    model = train_bpe(["ab", "ab", "ba"], 1)
    assert model.merges == (("a", "b"),)


def test_twenty_merges_match_textbook_oracle():
    corpus = make_corpus(2024, 50, "abcde")
    expected = oracles.textbook_bpe_merges(corpus, 20)
    assert len(expected) == 20  # the corpus genuinely supports all 20 merges
    model = train_bpe(corpus, 20)
    assert list(model.merges) == expected


def test_training_ignores_stream_order():
    corpus = make_corpus(77, 60, "abcd")
    shuffled = list(corpus)
    random.Random(1).shuffle(shuffled)
    assert train_bpe(corpus, 15) == train_bpe(shuffled, 15)


def test_tokenize_splits_compound_global_name():
    assert tokenize(RPLUS_MODEL, "Rplus", 8) == ["R", "plus"]


def test_tokenize_prefers_longest_match():
    model = BpeModel(frozenset("abc"), (("a", "b"), ("ab", "c")))
    assert tokenize(RPLUS_MODEL, "plup", 8) == ["plu", "p"]
    assert tokenize(model, "abcab", 8) == ["abc", "ab"]


def test_tokenize_single_characters_without_merges():
    model = train_bpe(["xy"], 0)
    assert tokenize(model, "yx", 8) == ["y", "x"]


def test_tokenize_agrees_with_brute_force_matcher():
    corpus = make_corpus(501, 500, "abcdefghij", max_len=12)
    model = train_bpe(corpus, 50)
    for name in corpus:
        expected = oracles.brute_longest_match(
            set(model.vocab), set(model.base_chars), name
        )
        assert tokenize(model, name) == expected


def test_caps_keep_the_leading_tokens():
    model = train_bpe(["xy"], 0)
    name = "xyxyxy"
    assert tokenize(model, name) == list(name)
    assert tokenize_train(model, name) == list(name)[:4]
    assert tokenize_test(model, name) == list(name)[:6]
    assert tokenize(model, name, 1) == ["x"]


def test_train_and_test_caps_on_random_identifiers():
    corpus = make_corpus(88, 1000, "abcdef", max_len=14)
    model = train_bpe(corpus, 30)
    for name in corpus:
        train_toks = tokenize_train(model, name)
        test_toks = tokenize_test(model, name)
        assert len(train_toks) <= 4
        assert len(test_toks) <= 8
        assert train_toks == test_toks[: min(4, len(test_toks))]


def test_unseen_characters_dropped_by_default():
    model = train_bpe(["ax", "ax"], 1)
    assert model.unseen_char_mode == DROP
    # a dropped character still interrupts matching, same as an unknown marker
    assert tokenize(model, "a9x", 8) == ["a", "x"]
    assert tokenize(model, "αx", 8) == ["x"]
    assert tokenize(model, "αβ", 8) == []


def test_unseen_characters_emit_unknown_when_asked():
    model = train_bpe(["ax", "ax"], 1, unseen_char_mode=EMIT_UNKNOWN)
    assert tokenize(model, "αx", 8) == [UNKNOWN_ELEMENT, "x"]
    assert tokenize(model, "xαβ", 8) == ["x", UNKNOWN_ELEMENT, UNKNOWN_ELEMENT]


def test_drop_mode_coverage_invariant():
    model = train_bpe(make_corpus(11, 80, "abcd"), 10)
    for name in ["ab∀cd", "zzz", "a!b?c", "dcba"]:
        tokens = tokenize(model, name)
        kept = "".join(ch for ch in name if ch in model.base_chars)
        assert "".join(tokens) == kept


def test_unknown_mode_coverage_invariant():
    model = train_bpe(make_corpus(11, 80, "abcd"), 10, unseen_char_mode=EMIT_UNKNOWN)
    marker = "\x00"
    for name in ["ab∀cd", "zzz", "a!b?c", "dcba"]:
        tokens = tokenize(model, name)
        rebuilt = "".join(marker if t == UNKNOWN_ELEMENT else t for t in tokens)
        expected = "".join(ch if ch in model.base_chars else marker for ch in name)
        assert rebuilt == expected


def test_vocab_size_arithmetic():
    corpus = make_corpus(5, 100, "abcdef")
    for merges in (0, 5, 12):
        model = train_bpe(corpus, merges)
        assert len(model.vocab) == len(model.base_chars) + len(model.merges)
        assert len(model.merges) == merges


def test_element_ids_enumeration_order():
    model = BpeModel(frozenset("cab"), (("a", "b"), ("ab", "c")))
    assert model.element_ids == {"a": 0, "b": 1, "c": 2, "ab": 3, "abc": 4}
    unknown_model = BpeModel(
        frozenset("cab"), (("a", "b"),), unseen_char_mode=EMIT_UNKNOWN
    )
    assert unknown_model.element_ids[UNKNOWN_ELEMENT] == 4
    assert len(unknown_model.element_ids) == len(unknown_model.vocab) + 1


def test_model_validation():
    with pytest.raises(ValueError, match="unknown element"):
        BpeModel(frozenset("ab"), (("a", "z"),))
    with pytest.raises(ValueError, match="unknown element"):
        BpeModel(frozenset("ab"), (("ab", "a"),))  # merge result used before made
    with pytest.raises(ValueError, match="mode"):
        BpeModel(frozenset("ab"), (), unseen_char_mode="discard")
    with pytest.raises(ValueError, match="single"):
        BpeModel(frozenset({"ab"}), ())
    with pytest.raises(ValueError):
        train_bpe(["aa"], -1)
    with pytest.raises(ValueError):
        tokenize(RPLUS_MODEL, "Rplus", 0)


def test_merges_may_chain_on_earlier_results():
    model = BpeModel(frozenset("ab"), (("a", "b"), ("ab", "ab")))
    assert "abab" in model.vocab


def test_save_load_round_trip(tmp_path):
    model = train_bpe(make_corpus(31, 40, "abcXY_"), 8, EMIT_UNKNOWN)
    target = tmp_path / "subword.bpe"
    save_bpe(model, target)
    assert load_bpe(target) == model
    header = target.read_text(encoding="utf-8").splitlines()[0]
    assert header == (
        f"# base_chars={len(model.base_chars)} merges={len(model.merges)} mode=unknown"
    )


def test_save_escapes_awkward_characters(tmp_path):
    model = train_bpe(["\t\t", "\\n\\n", "éé"], 3)
    target = tmp_path / "escaped.bpe"
    save_bpe(model, target)
    assert load_bpe(target) == model
    raw = target.read_text(encoding="utf-8")
    assert "\\t" in raw and "\\\\" in raw and "\\xe9" in raw


def test_save_is_byte_deterministic(tmp_path):
    model = train_bpe(make_corpus(3, 30, "abc"), 5)
    save_bpe(model, tmp_path / "one")
    save_bpe(model, tmp_path / "two")
    assert (tmp_path / "one").read_bytes() == (tmp_path / "two").read_bytes()


@pytest.mark.parametrize(
    "text",
    [
        "",
        "# base_chars=1 merges=0 mode=maybe\na\n",
        "# base_chars=2 merges=0 mode=drop\na\n",  # wrong line count
        "# base_chars=1 merges=1 mode=drop\na\nnot-tab-separated\n",
        "# base_chars=1 merges=1 mode=drop\na\na\ta\textra\n",
    ],
)
def test_malformed_model_files_rejected(tmp_path, text):
    target = tmp_path / "bad.bpe"
    target.write_text(text, encoding="utf-8")
    with pytest.raises(BpeFormatError):
        load_bpe(target)


@settings(max_examples=50)
@given(
    st.lists(st.text(alphabet="abcd", min_size=1, max_size=8), min_size=1, max_size=30),
    st.integers(min_value=0, max_value=10),
)
def test_tokenize_covers_every_seen_character(corpus, merges):
    model = train_bpe(corpus, merges)
    for name in corpus:
        assert "".join(tokenize(model, name)) == name
