import json

import pytest

from safetube.corpus import (Safety, dumps_corpus, load_corpus,
                             load_default_lexicon, load_lexicon, write_corpus)
from safetube.errors import ConfigurationError, IntegrityError, ParseError
from safetube import synth
from util import make_corpus, make_user, make_video

MINIMAL = {
    "format_version": 1,
    "videos": [{
        "video_id": "v1", "uploader_id": "u1", "title": "t", "description": "d",
        "duration_s": 10, "age_days": 1, "view_count": 0, "like_count": 0,
        "dislike_count": 0, "comment_count": 0, "related_ids": [],
        "label": None,
    }],
    "users": [{
        "user_id": "u1", "roles": ["uploader"], "total_videos": 1,
        "total_views": 0, "total_comments": 0, "subscriber_count": 0,
        "channel_title": "", "channel_description": "", "age_days": 5,
    }],
    "comments": [],
}


def write_doc(tmp_path, doc, name="corpus.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


def test_minimal_corpus(tmp_path):
    corpus = load_corpus(write_doc(tmp_path, MINIMAL))
    assert len(corpus.videos) == 1
    assert len(corpus.users) == 1
    assert len(corpus.comments) == 0


def test_duplicate_video_id_names_key(tmp_path):
    doc = json.loads(json.dumps(MINIMAL))
    doc["videos"].append(dict(doc["videos"][0]))
    with pytest.raises(IntegrityError, match="v1"):
        load_corpus(write_doc(tmp_path, doc))


def test_dangling_uploader_rejected_unless_tagged(tmp_path):
    doc = json.loads(json.dumps(MINIMAL))
    doc["videos"][0]["uploader_id"] = "ghost"
    with pytest.raises(IntegrityError, match="ghost"):
        load_corpus(write_doc(tmp_path, doc))
    doc["videos"][0]["uploader_id"] = {"id": "ghost", "external": True}
    corpus = load_corpus(write_doc(tmp_path, doc))
    assert corpus.videos["v1"].uploader_id == "ghost"


def test_dangling_liked_video_rejected_unless_tagged(tmp_path):
    doc = json.loads(json.dumps(MINIMAL))
    doc["users"][0]["liked_video_ids"] = ["nope"]
    with pytest.raises(IntegrityError, match="nope"):
        load_corpus(write_doc(tmp_path, doc))
    doc["users"][0]["liked_video_ids"] = [{"id": "nope", "external": True}]
    corpus = load_corpus(write_doc(tmp_path, doc))
    assert corpus.users["u1"].liked_video_ids == ["nope"]


def test_comment_references_must_resolve(tmp_path):
    doc = json.loads(json.dumps(MINIMAL))
    doc["comments"] = [{"comment_id": "c1", "video_id": "vX", "author_id": "u1",
                        "text": "", "like_count": 0, "reply_count": 0}]
    with pytest.raises(IntegrityError, match="vX"):
        load_corpus(write_doc(tmp_path, doc))


def test_malformed_json_reports_line(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n "videos": [,]\n}', encoding="utf-8")
    with pytest.raises(ParseError, match="line 2"):
        load_corpus(path)


def test_missing_file_is_parse_error(tmp_path):
    with pytest.raises(ParseError):
        load_corpus(tmp_path / "absent.json")


def test_negative_count_rejected(tmp_path):
    doc = json.loads(json.dumps(MINIMAL))
    doc["videos"][0]["view_count"] = -1
    with pytest.raises(ParseError, match="view_count"):
        load_corpus(write_doc(tmp_path, doc))


def test_unsupported_format_version(tmp_path):
    doc = json.loads(json.dumps(MINIMAL))
    doc["format_version"] = 99
    with pytest.raises(ParseError, match="format_version"):
        load_corpus(write_doc(tmp_path, doc))


def test_related_self_reference_rejected():
    video = make_video("v1", "u1", related_ids=["v1"])
    with pytest.raises(IntegrityError, match="itself"):
        make_corpus(videos=[video], users=[make_user("u1")])


def test_related_duplicates_rejected(tmp_path):
    doc = json.loads(json.dumps(MINIMAL))
    doc["videos"].append(dict(doc["videos"][0], video_id="v2",
                              related_ids=["v1", "v1"]))
    with pytest.raises(IntegrityError, match="duplicate related"):
        load_corpus(write_doc(tmp_path, doc))


def test_self_subscription_rejected():
    user = make_user("u1", subscribed_user_ids=["u1"])
    with pytest.raises(IntegrityError, match="subscribes"):
        make_corpus(users=[user])


def test_round_trip_synthetic(tmp_path):
    corpus, _ = synth.generate(synth.preset("tiny", 3))
    path = tmp_path / "round.json"
    write_corpus(corpus, path)
    reloaded = load_corpus(path)
    assert reloaded == corpus
    # write -> load -> write is byte stable
    assert dumps_corpus(reloaded) == dumps_corpus(corpus)


def test_loading_is_deterministic(tmp_path):
    corpus, _ = synth.generate(synth.preset("tiny", 3))
    path = tmp_path / "c.json"
    write_corpus(corpus, path)
    assert load_corpus(path) == load_corpus(path)


def test_corpus_indexes_follow_file_order(fixture_corpus):
    by_video = fixture_corpus.comments_by_video["vidA"]
    assert [c.comment_id for c in by_video] == ["c1", "c2", "c3"]
    by_uploader = fixture_corpus.videos_by_uploader["up1"]
    assert [v.video_id for v in by_uploader] == ["vidA", "vidC"]


def test_lexicon_case_folding_and_dedup(tmp_path):
    path = tmp_path / "lex.txt"
    path.write_text("Stupid\nIDIOT\nidiot\n", encoding="utf-8")
    lex = load_lexicon(path)
    assert lex.bad_words == {"stupid", "idiot"}


def test_lexicon_sections(tmp_path):
    path = tmp_path / "lex.txt"
    path.write_text("jerkface\n#positive\nGood\n#negative\nBAD\n",
                    encoding="utf-8")
    lex = load_lexicon(path)
    assert lex.bad_words == {"jerkface"}
    assert lex.positive_words == {"good"}
    assert lex.negative_words == {"bad"}


def test_lexicon_empty_is_configuration_error(tmp_path):
    path = tmp_path / "lex.txt"
    path.write_text("", encoding="utf-8")
    with pytest.raises(ConfigurationError):
        load_lexicon(path)


def test_lexicon_unknown_section(tmp_path):
    path = tmp_path / "lex.txt"
    path.write_text("#weird\nword\n", encoding="utf-8")
    with pytest.raises(ParseError, match="line 1"):
        load_lexicon(path)


def test_lexicon_polarity_overlap_rejected(tmp_path):
    path = tmp_path / "lex.txt"
    path.write_text("x\n#positive\nsame\n#negative\nsame\n", encoding="utf-8")
    with pytest.raises(ConfigurationError, match="same"):
        load_lexicon(path)


def test_default_lexicon_loads():
    lex = load_default_lexicon()
    assert lex.bad_words and lex.positive_words and lex.negative_words


def test_safety_parsing():
    assert Safety.parse("safe") is Safety.SAFE
    assert Safety.parse("UNSAFE") is Safety.UNSAFE
    with pytest.raises(ParseError):
        Safety.parse("maybe")
