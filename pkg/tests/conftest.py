import pytest

from safetube.corpus import CommentRecord, Sentiment
from util import make_corpus, make_lexicon, make_user, make_video


@pytest.fixture
def lexicon():
    return make_lexicon()


@pytest.fixture
def fixture_corpus():
    """Three videos with hand-computable features; see test_features."""
    up1 = make_user("up1", total_videos=5, total_views=1000, total_comments=50,
                    subscriber_count=7, channel_title="Toon Channel",
                    channel_description="all the toons", age_days=365,
                    circled_by_count=9, plus_one_count=4)
    up2 = make_user("up2", total_videos=2, total_views=10, total_comments=3,
                    subscriber_count=0, channel_title="X",
                    channel_description="", age_days=30)
    cm1 = make_user("cm1", roles=("commenter",))
    cm2 = make_user("cm2", roles=("commenter",))
    vid_a = make_video(
        "vidA", "up1",
        title="Tom AND Jerry 18+ special",
        description="Watch Tom and Jerry now? http://x.com :) great fun",
        duration_s=120, age_days=10, view_count=1000, like_count=10,
        dislike_count=4, comment_count=3, related_ids=["vidB"], category=2)
    vid_b = make_video(
        "vidB", "up2", title="stupid! walrus", description="",
        duration_s=60, age_days=200, view_count=5, like_count=0,
        dislike_count=0, comment_count=0)
    vid_c = make_video(
        "vidC", "up1", title="", description="good good bad",
        duration_s=300, age_days=99, view_count=50, like_count=3,
        dislike_count=0, comment_count=0, category=1)
    comments = [
        CommentRecord("c1", "vidA", "cm1", "so stupid and awful",
                      like_count=2, reply_count=1),
        CommentRecord("c2", "vidA", "cm2", "great fun!",
                      like_count=5, reply_count=0),
        CommentRecord("c3", "vidA", "cm1", "bad bad",
                      like_count=1, reply_count=2,
                      sentiment=Sentiment.POSITIVE),
    ]
    return make_corpus(videos=[vid_a, vid_b, vid_c],
                       users=[up1, up2, cm1, cm2], comments=comments)
