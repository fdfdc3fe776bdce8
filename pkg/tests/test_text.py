from parlor.text import (
    contains_phrase,
    content_tokens,
    first_sentence,
    normalize,
    overlap_ratio,
    token_set,
    tokens,
    word_count,
)


def test_normalize_lowercases_and_strips_punctuation():
    assert normalize("Hello, World!") == "hello world"
    assert normalize("  spaced\tout\n") == "spaced out"


def test_normalize_drops_apostrophes_inside_words():
    assert normalize("don't it's let's") == "dont its lets"


def test_normalize_strips_accents():
    assert normalize("Pokémon café") == "pokemon cafe"


def test_normalize_hyphen_becomes_space():
    assert normalize("T-Rex sci-fi") == "t rex sci fi"


def test_tokens_and_token_set():
    assert tokens("A b, a C") == ["a", "b", "a", "c"]
    assert token_set("A b, a C") == frozenset({"a", "b", "c"})


def test_content_tokens_drops_stopwords():
    assert content_tokens("the piano is an instrument") == frozenset({"piano", "instrument"})


def test_word_count_is_whitespace_tokens():
    assert word_count("one two  three") == 3
    assert word_count("") == 0
    assert word_count("hyphen-stays one") == 2


def test_contains_phrase_word_bounded():
    assert contains_phrase("i like classical cello music", "classical")
    assert contains_phrase("lets talk about lord of the rings", "lord of the rings")
    assert not contains_phrase("brontosaurus", "rex")
    assert not contains_phrase("a classless society", "class")


def test_contains_phrase_normalizes_both_sides():
    assert contains_phrase("I love SCI-FI!", "sci fi")
    assert not contains_phrase("anything", "")


def test_overlap_ratio_bounds_and_empty():
    assert overlap_ratio("", ["a b"]) == 0.0
    assert overlap_ratio("a b", []) == 0.0
    assert overlap_ratio("a b", ["a b c"]) == 1.0
    assert overlap_ratio("a x", ["a b"]) == 0.5


def test_first_sentence():
    assert first_sentence("One. Two. Three.") == "One."
    assert first_sentence("No terminator here") == "No terminator here"
    assert first_sentence("Really?! Yes.") == "Really?!"
