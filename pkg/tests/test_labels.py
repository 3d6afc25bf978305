import pytest

from multistyle_tts.corpus.labels import NUM_STYLES, StyleLabel, map_label, style_from_name


def test_canonical_order_is_fixed():
    assert NUM_STYLES == 6
    assert [s.name.lower() for s in StyleLabel] == ["rushed", "soft", "neutral", "happy", "angry", "sad"]
    assert int(StyleLabel.NEUTRAL) == 2 and int(StyleLabel.SAD) == 5


def test_excited_merges_into_happy():
    assert map_label("excited", "external") == StyleLabel.HAPPY
    assert map_label("exc", "external") == StyleLabel.HAPPY


def test_external_subset():
    assert map_label("neutral", "external") == StyleLabel.NEUTRAL
    assert map_label("angry", "external") == StyleLabel.ANGRY
    assert map_label("sad", "external") == StyleLabel.SAD
    # outside the supported subset -> excluded, not an error
    assert map_label("surprise", "external") is None
    assert map_label("fear", "external") is None
    assert map_label("rushed", "external") is None


def test_tts_labels_map_one_to_one():
    for style in StyleLabel:
        assert map_label(style.name.lower(), "tts") == style
    assert map_label("excited", "tts") is None


def test_map_label_never_raises():
    for raw in ("", "  ", "123", "HAPPY!", "\n", "None", "excited"):
        for kind in ("tts", "external"):
            result = map_label(raw, kind)
            assert result is None or isinstance(result, StyleLabel)


def test_external_mapping_stays_in_four_classes():
    mapped = {
        map_label(raw, "external")
        for raw in ("neutral", "happy", "excited", "sad", "angry", "anger", "neu", "hap", "ang", "exc")
    }
    assert mapped == {StyleLabel.NEUTRAL, StyleLabel.HAPPY, StyleLabel.SAD, StyleLabel.ANGRY}


def test_style_from_name_is_strict():
    assert style_from_name("Happy") == StyleLabel.HAPPY
    with pytest.raises(ValueError):
        style_from_name("excited")
