import pytest

from conftest import chain_sentence, english_sentence, german_sentence
from srlproj.conll import Sentence, Token
from srlproj.features import MAX_PATH, Stage, dependency_path, extract_features


def test_same_input_same_vector():
    s = english_sentence()
    for stage in Stage:
        pred = 3 if stage in (Stage.ARG_ID, Stage.ARG_CLS) else None
        a = extract_features(s, stage, 1, pred)
        b = extract_features(s, stage, 1, pred)
        assert a == b and list(a) == list(b)


def test_all_values_are_one():
    feats = extract_features(english_sentence(), Stage.ARG_CLS, 7, 6)
    assert feats and all(v == 1.0 for v in feats.values())


def test_root_token_has_root_feature():
    assert "root-deprel=ROOT" in extract_features(english_sentence(), Stage.PRED_ID, 3)
    assert not any(f.startswith("root-deprel") for f in extract_features(english_sentence(), Stage.PRED_ID, 6))


def test_german_subject_of_bitte():
    feats = extract_features(german_sentence(), Stage.ARG_ID, 1, 2)
    assert {"arg-deprel=nsubj", "pred-lemma=bitten", "path=nsubj↑"} <= set(feats)


def test_path_down_and_across():
    s = german_sentence()
    assert dependency_path(s, 5, 2) == "adpobj↑adpmod↑"
    assert dependency_path(s, 2, 5) == "adpmod↓adpobj↓"
    e = english_sentence()
    # "you" (under endorse) to urge: up to endorse, up to urge
    assert dependency_path(e, 4, 3) == "nsubj↑xcomp↑"
    # "I" to endorse: up to urge, down to endorse
    assert dependency_path(e, 1, 6) == "nsubj↑xcomp↓"


def test_long_path_is_capped():
    n = 12
    toks = [Token(1, "w1", "w1", "VERB", 0, "ROOT")] + [
        Token(i, f"w{i}", f"w{i}", "NOUN", i - 1, "dep") for i in range(2, n + 1)]
    path = dependency_path(Sentence(toks), n, 1)
    assert path.count("↑") == MAX_PATH and path.endswith("+")


def test_sense_stage_conjoins_lemma():
    feats = extract_features(german_sentence(), Stage.PRED_SENSE, 2)
    assert "child-deprel=nsubj|lemma=bitten" in feats
    assert "child-deprel=nsubj" in extract_features(german_sentence(), Stage.PRED_ID, 2)


def test_distance_direction_and_between():
    s = chain_sentence([("VERB", "ROOT"), ("DET", "det"), ("ADJ", "amod"), ("NOUN", "dobj")])
    feats = extract_features(s, Stage.ARG_ID, 4, 1)
    assert {"dist=3", "dir=R", "between-first-pos=DET", "between-last-pos=ADJ"} <= set(feats)
    feats = extract_features(s, Stage.ARG_ID, 1, 2)
    assert {"dist=1", "dir=L", "between-first-pos=-"} <= set(feats)


@pytest.mark.parametrize("tok, pred", [(0, 2), (6, 2), (1, None), (1, 9), (2, 2)])
def test_bad_indices(tok, pred):
    with pytest.raises(ValueError):
        extract_features(german_sentence(), Stage.ARG_ID, tok, pred)


def test_bad_predicate_stage_index():
    with pytest.raises(ValueError):
        extract_features(german_sentence(), Stage.PRED_ID, 6)
