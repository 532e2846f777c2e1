"""Uploader scoring and grading, the unsafe-commenter rule, and ECDF
characterization of safe vs unsafe uploaders.

Each uploader is scored over up to ``video_cap`` of their videos in corpus
order (per-uploader lists are stored newest-first), the fraction predicted
unsafe becomes their indecency ratio, and the ratio maps onto a grade.
The grade thresholds are configuration, defaulting to (1/3, 2/3, 0.9).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import features as feat
from .corpus import Corpus, Lexicon
from .errors import ParameterError, SchemaError
from .lexical import bad_word_count, tokenize


class Grade(str, enum.Enum):
    SAFE = "safe"
    MODERATE = "moderate"
    HIGH = "high"
    EXTREME = "extreme"

    def __str__(self) -> str:
        return self.value


DEFAULT_GRADE_THRESHOLDS: tuple[float, float, float] = (1 / 3, 2 / 3, 0.9)
DEFAULT_VIDEO_CAP = 50


def grade(ratio: float, thresholds: tuple[float, float, float]
          = DEFAULT_GRADE_THRESHOLDS) -> Grade:
    """Bucket an indecency ratio; boundaries are lower-inclusive upward."""
    t_mod, t_high, t_ext = thresholds
    if not 0 < t_mod <= t_high <= t_ext <= 1:
        raise ParameterError(f"unordered grade thresholds {thresholds}")
    if ratio < t_mod:
        return Grade.SAFE
    if ratio < t_high:
        return Grade.MODERATE
    if ratio < t_ext:
        return Grade.HIGH
    return Grade.EXTREME


@dataclass
class UploaderVerdict:
    user_id: str
    n_scored: int
    n_unsafe: int
    ratio: float
    grade: Grade


def detect_unsafe_uploaders(corpus: Corpus, model, lexicon: Lexicon,
                            video_cap: int = DEFAULT_VIDEO_CAP,
                            thresholds: tuple[float, float, float]
                            = DEFAULT_GRADE_THRESHOLDS,
                            comment_cap: int = feat.DEFAULT_COMMENT_CAP,
                            ) -> list[UploaderVerdict]:
    """Score every uploader with at least one video; sorted by user_id.

    ``model`` is an estimator with ``predict(X)`` or a plain callable
    ``(video_id, features) -> label``; the callable form lets callers
    substitute an oracle that returns known labels.
    """
    if video_cap < 1:
        raise ParameterError(f"video_cap must be >= 1, got {video_cap}")
    expected = getattr(model, "n_features_in_", None)
    if expected is not None and expected != feat.N_FEATURES:
        raise SchemaError(
            f"model expects {expected} features, schema has {feat.N_FEATURES}")
    use_predict = hasattr(model, "predict")
    verdicts: list[UploaderVerdict] = []
    for user_id in sorted(corpus.videos_by_uploader):
        videos = corpus.videos_by_uploader[user_id][:video_cap]
        if not videos:
            continue
        rows = feat.extract_batch(videos, corpus, lexicon, comment_cap)
        if use_predict:
            X = np.array([vec for _, vec in rows])
            labels = np.asarray(model.predict(X), dtype=int)
        else:
            labels = np.array([int(model(vid, vec)) for vid, vec in rows])
        n_scored = len(videos)
        n_unsafe = int(np.sum(labels == 1))
        ratio = n_unsafe / n_scored
        verdicts.append(UploaderVerdict(user_id, n_scored, n_unsafe, ratio,
                                        grade(ratio, thresholds)))
    return verdicts


def detect_unsafe_commenters(corpus: Corpus, lexicon: Lexicon) -> set[str]:
    """Authors with at least one comment containing a bad word."""
    lexicon.validate()
    flagged: set[str] = set()
    for comment in corpus.comments:
        if comment.author_id in flagged:
            continue
        if bad_word_count(tokenize(comment.text), lexicon) >= 1:
            flagged.add(comment.author_id)
    return flagged


@dataclass
class EcdfSummary:
    """Empirical CDF of one metric over one uploader group."""

    metric: str
    values: np.ndarray  # sorted ascending

    def evaluate(self, x: float) -> float:
        """Fraction of samples <= x; 0.0 for an empty summary."""
        if self.values.size == 0:
            return 0.0
        return float(np.searchsorted(self.values, x, side="right")) / self.values.size

    def table(self) -> list[tuple[float, float]]:
        """(x, F(x)) at each distinct sample value, plot-ready."""
        if self.values.size == 0:
            return []
        xs = np.unique(self.values)
        n = self.values.size
        counts = np.searchsorted(self.values, xs, side="right")
        return [(float(x), float(c) / n) for x, c in zip(xs, counts)]

    @classmethod
    def from_samples(cls, metric: str, samples: Iterable[float]) -> "EcdfSummary":
        return cls(metric, np.sort(np.asarray(list(samples), dtype=np.float64)))


CHARACTERIZATION_METRICS: tuple[str, ...] = (
    "subscriber_count",
    "total_views",
    "circled_by_count",
    "total_videos",
    "video_comments",
    "video_likes",
    "video_dislikes",
)


def characterize(corpus: Corpus, verdicts: Sequence[UploaderVerdict],
                 ) -> dict[str, tuple[EcdfSummary, EcdfSummary]]:
    """Paired (safe, unsafe) ECDFs per metric; safe means grade == safe."""
    if not verdicts:
        raise ParameterError("characterize needs at least one verdict")
    groups: Mapping[bool, list[str]] = {True: [], False: []}
    for verdict in verdicts:
        groups[verdict.grade == Grade.SAFE].append(verdict.user_id)

    def user_samples(attr: str, user_ids: list[str]) -> list[float]:
        out = []
        for uid in user_ids:
            user = corpus.users.get(uid)
            if user is None:
                continue
            value = getattr(user, attr)
            out.append(float(value if value is not None else 0))
        return out

    def video_samples(attr: str, user_ids: list[str]) -> list[float]:
        out = []
        for uid in user_ids:
            for video in corpus.videos_by_uploader.get(uid, []):
                out.append(float(getattr(video, attr)))
        return out

    per_metric = {
        "subscriber_count": lambda ids: user_samples("subscriber_count", ids),
        "total_views": lambda ids: user_samples("total_views", ids),
        "circled_by_count": lambda ids: user_samples("circled_by_count", ids),
        "total_videos": lambda ids: user_samples("total_videos", ids),
        "video_comments": lambda ids: video_samples("comment_count", ids),
        "video_likes": lambda ids: video_samples("like_count", ids),
        "video_dislikes": lambda ids: video_samples("dislike_count", ids),
    }
    result: dict[str, tuple[EcdfSummary, EcdfSummary]] = {}
    for metric in CHARACTERIZATION_METRICS:
        sampler = per_metric[metric]
        result[metric] = (EcdfSummary.from_samples(metric, sampler(groups[True])),
                          EcdfSummary.from_samples(metric, sampler(groups[False])))
    return result
