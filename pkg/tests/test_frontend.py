import numpy as np
import pytest

from multistyle_tts.tts.frontend import (
    LINGUISTIC_DIM,
    PHONEME_INVENTORY,
    default_lexicon,
    expand_number,
    text_to_linguistic,
)


def test_hello_from_shipped_lexicon():
    lex = default_lexicon()
    assert lex.phonemes("hello") == ["HH", "AH", "L", "OW"]
    ls = text_to_linguistic("hello")
    assert ls.phonemes == ("HH", "AH", "L", "OW")


def test_empty_text_rejected():
    with pytest.raises(ValueError):
        text_to_linguistic("")
    with pytest.raises(ValueError):
        text_to_linguistic("  ... ")


def test_number_expansion_and_trailing_pause():
    ls = text_to_linguistic("2 cats.")
    assert ls.words[0] == "two"
    assert ls.phonemes[:2] == ("T", "UW")
    # trailing punctuation: pause phoneme appended with the pause flag set
    assert ls.phonemes[-1] == "PAU"
    pause_col = len(PHONEME_INVENTORY) + 3
    assert ls.features[-1, pause_col] == 1.0


def test_expand_number_cases():
    assert expand_number(0) == "zero"
    assert expand_number(14) == "fourteen"
    assert expand_number(35) == "thirty five"
    assert expand_number(600) == "six hundred"
    assert expand_number(1234) == "one thousand two hundred thirty four"
    assert expand_number(9999) == "nine thousand nine hundred ninety nine"
    with pytest.raises(ValueError):
        expand_number(10000)


def test_oov_letter_fallback():
    ls = text_to_linguistic("zzyzx")
    assert all(p.startswith("#") for p in ls.phonemes)
    assert ls.phonemes == ("#Z", "#Z", "#Y", "#Z", "#X")


def test_feature_width_is_inventory_plus_five():
    assert LINGUISTIC_DIM == len(PHONEME_INVENTORY) + 5
    ls = text_to_linguistic("good morning")
    assert ls.features.shape == (len(ls.phonemes), LINGUISTIC_DIM)


def test_one_hot_rows():
    ls = text_to_linguistic("the cat")
    onehot = ls.features[:, : len(PHONEME_INVENTORY)]
    assert np.array_equal(onehot.sum(axis=1), np.ones(len(ls.phonemes)))
    for i, phon in enumerate(ls.phonemes):
        assert onehot[i, PHONEME_INVENTORY.index(phon)] == 1.0


def test_positions_normalized():
    ls = text_to_linguistic("wonderful")
    base = len(PHONEME_INVENTORY)
    pos_word = ls.features[:, base]
    pos_utt = ls.features[:, base + 1]
    assert pos_word[0] == 0.0 and pos_word[-1] == 1.0
    assert pos_utt[0] == 0.0 and pos_utt[-1] == 1.0
    assert ((pos_word >= 0) & (pos_word <= 1)).all()


def test_utterance_final_flag():
    ls = text_to_linguistic("good morning")
    final_col = len(PHONEME_INVENTORY) + 4
    assert ls.features[-1, final_col] == 1.0
    assert ls.features[:-1, final_col].sum() == 0.0


def test_lexicon_size():
    assert len(default_lexicon()) >= 200
