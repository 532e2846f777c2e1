"""34-feature vector for a video in its corpus context.

The schema has three groups: 19 video-level, 9 user-level and 6
comment-level features, named and ordered in FEATURE_NAMES.  Lengths count
characters; ratios guard their denominators with max(., 1); absent social
profile counts impute 0.  Comment-level entries aggregate over at most
``comment_cap`` comments of the video in corpus order.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .corpus import Corpus, Lexicon, Safety, Sentiment, VideoRecord
from .errors import ExtractionError
from .lexical import (bad_word_count, comment_sentiment, count_marks, jaccard,
                      tokenize)

VIDEO_FEATURES: tuple[str, ...] = (
    "video_category",
    "view_count",
    "comment_count",
    "dislike_count",
    "like_count",
    "like_dislike_ratio",
    "title_length",
    "description_length",
    "description_title_ratio",
    "duration_s",
    "video_age_days",
    "title_description_jaccard",
    "title_bad_words",
    "description_bad_words",
    "description_question_marks",
    "description_hyperlinks",
    "description_emoticons",
    "title_has_18",
    "title_description_common_words",
)

USER_FEATURES: tuple[str, ...] = (
    "uploader_total_videos",
    "uploader_total_views",
    "uploader_total_comments",
    "uploader_subscriber_count",
    "channel_title_length",
    "channel_description_length",
    "uploader_age_days",
    "uploader_circled_by_count",
    "uploader_plus_one_count",
)

COMMENT_FEATURES: tuple[str, ...] = (
    "comment_like_sum",
    "comment_reply_sum",
    "positive_comment_count",
    "negative_comment_count",
    "neutral_comment_count",
    "comment_bad_words",
)

FEATURE_NAMES: tuple[str, ...] = VIDEO_FEATURES + USER_FEATURES + COMMENT_FEATURES
N_FEATURES = len(FEATURE_NAMES)

FEATURE_VIEWS: dict[str, tuple[str, ...]] = {
    "video": VIDEO_FEATURES,
    "user": USER_FEATURES,
    "comment": COMMENT_FEATURES,
    "all": FEATURE_NAMES,
}

DEFAULT_COMMENT_CAP = 50


def extract(video: VideoRecord, corpus: Corpus, lexicon: Lexicon,
            comment_cap: int = DEFAULT_COMMENT_CAP) -> np.ndarray:
    """Feature vector (float64, length 34) for one video."""
    uploader = corpus.users.get(video.uploader_id)
    if uploader is None:
        raise ExtractionError(
            f"video {video.video_id!r}: uploader {video.uploader_id!r} "
            "does not resolve")

    title_tokens = tokenize(video.title)
    desc_tokens = tokenize(video.description)
    questions, links, emoticons = count_marks(video.description)

    video_part = (
        float(video.category),
        float(video.view_count),
        float(video.comment_count),
        float(video.dislike_count),
        float(video.like_count),
        video.like_count / max(video.dislike_count, 1),
        float(len(video.title)),
        float(len(video.description)),
        len(video.description) / max(len(video.title), 1),
        float(video.duration_s),
        float(video.age_days),
        jaccard(title_tokens, desc_tokens),
        float(bad_word_count(title_tokens, lexicon)),
        float(bad_word_count(desc_tokens, lexicon)),
        float(questions),
        float(links),
        float(emoticons),
        1.0 if "18" in video.title else 0.0,
        float(len(set(title_tokens) & set(desc_tokens))),
    )

    user_part = (
        float(uploader.total_videos),
        float(uploader.total_views),
        float(uploader.total_comments),
        float(uploader.subscriber_count),
        float(len(uploader.channel_title)),
        float(len(uploader.channel_description)),
        float(uploader.age_days),
        float(uploader.circled_by_count or 0),
        float(uploader.plus_one_count or 0),
    )

    like_sum = reply_sum = bad_total = 0
    sentiment_counts = {Sentiment.POSITIVE: 0, Sentiment.NEGATIVE: 0,
                        Sentiment.NEUTRAL: 0}
    for comment in corpus.comments_by_video.get(video.video_id, [])[:comment_cap]:
        like_sum += comment.like_count
        reply_sum += comment.reply_count
        sentiment_counts[comment_sentiment(comment, lexicon)] += 1
        bad_total += bad_word_count(tokenize(comment.text), lexicon)

    comment_part = (
        float(like_sum),
        float(reply_sum),
        float(sentiment_counts[Sentiment.POSITIVE]),
        float(sentiment_counts[Sentiment.NEGATIVE]),
        float(sentiment_counts[Sentiment.NEUTRAL]),
        float(bad_total),
    )

    return np.array(video_part + user_part + comment_part, dtype=np.float64)


def extract_batch(videos: Iterable[VideoRecord], corpus: Corpus, lexicon: Lexicon,
                  comment_cap: int = DEFAULT_COMMENT_CAP,
                  ) -> list[tuple[str, np.ndarray]]:
    """Order-preserving extract over ``videos``; errors carry the index."""
    out: list[tuple[str, np.ndarray]] = []
    for i, video in enumerate(videos):
        try:
            out.append((video.video_id, extract(video, corpus, lexicon, comment_cap)))
        except ExtractionError as exc:
            raise ExtractionError(f"videos[{i}]: {exc}") from exc
    return out


def view_indices(names: Iterable[str]) -> np.ndarray:
    """Column indices of the named features, in schema order."""
    wanted = set(names)
    unknown = wanted - set(FEATURE_NAMES)
    if unknown:
        raise KeyError(f"unknown feature names: {sorted(unknown)}")
    return np.array([i for i, n in enumerate(FEATURE_NAMES) if n in wanted],
                    dtype=int)


# --- tabular export ----------------------------------------------------------
#
# Tab-separated matrix: header row of the 34 feature names plus video_id and
# label; label cells are "safe", "unsafe" or empty for unlabeled videos.

def format_feature_matrix(rows: Iterable[tuple[str, np.ndarray]],
                          labels: dict[str, Safety | None]) -> str:
    lines = ["\t".join(FEATURE_NAMES + ("video_id", "label"))]
    for video_id, vector in rows:
        cells = [repr(float(v)) for v in vector]  # shortest exact round trip
        label = labels.get(video_id)
        cells.append(video_id)
        cells.append(str(label) if label is not None else "")
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"


def parse_feature_matrix(text: str) -> tuple[list[str], np.ndarray,
                                             list[Safety | None]]:
    from .errors import ParseError

    lines = [line for line in text.splitlines() if line]
    if not lines:
        raise ParseError("feature matrix is empty")
    header = tuple(lines[0].split("\t"))
    if header != FEATURE_NAMES + ("video_id", "label"):
        raise ParseError("feature matrix header does not match the schema")
    ids: list[str] = []
    labels: list[Safety | None] = []
    values: list[list[float]] = []
    for lineno, line in enumerate(lines[1:], 2):
        cells = line.split("\t")
        if len(cells) != N_FEATURES + 2:
            raise ParseError(f"feature matrix line {lineno}: wrong column count")
        values.append([float(c) for c in cells[:N_FEATURES]])
        ids.append(cells[N_FEATURES])
        labels.append(Safety.parse(cells[-1]) if cells[-1] else None)
    X = np.array(values, dtype=np.float64).reshape(len(values), N_FEATURES)
    return ids, X, labels
