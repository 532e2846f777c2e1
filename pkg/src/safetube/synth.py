"""Deterministic synthetic corpus generator with planted ground truth.

Everything derives from one seed: promoter flags, per-video safety labels,
learnable feature shifts, bad-word comment plants, and a planted-partition
community structure realized through like/subscribe/playlist lists.  The
ground truth sidecar records every plant so downstream stages can be
checked against it exactly.

With ``popularity_ordering`` on, engagement and popularity values are
drawn once per metric, sorted, and the smallest assigned to unsafe
promoters (and their videos), which enforces first-order ECDF dominance
of the safe group at every sample point.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .corpus import (COMMENTER, UPLOADER, CommentRecord, Corpus, Safety,
                     UserRecord, VideoRecord, load_default_lexicon)
from .detect import (DEFAULT_GRADE_THRESHOLDS, DEFAULT_VIDEO_CAP, Grade,
                     UploaderVerdict, grade)
from .errors import ConfigurationError
from .netgraph import Relation

GROUND_TRUTH_FORMAT_VERSION = 1

# Neutral vocabulary, disjoint from every list in the default lexicon.
NEUTRAL_WORDS: tuple[str, ...] = (
    "episode", "cartoon", "video", "watch", "kids", "channel", "new", "full",
    "series", "toons", "part", "clip", "show", "animation", "drawing",
    "color", "song", "dance", "play", "game", "adventure", "story",
    "classic", "car", "train", "robot", "dinosaur", "puppy", "kitten",
    "space", "castle", "pirate", "princess", "dragon", "magic", "friends",
    "school", "morning", "today", "week", "official", "remix",
    "compilation", "learn", "count", "alphabet", "shapes", "balloon",
    "circus", "garden", "picnic", "river", "mountain", "island", "holiday",
    "winter", "summer", "again", "every", "little", "big",
)


@dataclass
class CommunityPlant:
    """Planted-partition spec over user nodes."""

    n_communities: int
    size: int
    p_in: float
    p_out: float


@dataclass
class SynthConfig:
    seed: int = 0
    n_uploaders: int = 10
    n_commenters: int = 40
    videos_per_uploader: tuple[int, int] = (1, 4)
    comments_per_video: tuple[int, int] = (0, 6)
    n_videos_total: int | None = None
    n_comments_total: int | None = None
    unsafe_uploader_fraction: float = 0.3
    unsafe_video_rate_unsafe: float = 0.75
    unsafe_video_rate_safe: float = 0.05
    unsafe_comment_rate: float = 0.05
    bad_comment_plant: tuple[int, int] | None = None  # (comments, authors)
    video_signal: float = 1.0
    user_signal: float = 1.0
    comment_signal: float = 1.0
    popularity_ordering: bool = True
    related_per_video: int = 10
    self_like_rate: float = 0.0
    external_ref_rate: float = 0.0
    communities: CommunityPlant | None = None

    def validate(self) -> None:
        if self.n_uploaders < 1 or self.n_commenters < 0:
            raise ConfigurationError("need at least one uploader")
        for name in ("unsafe_uploader_fraction", "unsafe_video_rate_unsafe",
                     "unsafe_video_rate_safe", "unsafe_comment_rate",
                     "self_like_rate", "external_ref_rate"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigurationError(f"{name}={value} outside [0, 1]")
        for name in ("videos_per_uploader", "comments_per_video"):
            lo, hi = getattr(self, name)
            if lo > hi or lo < 0:
                raise ConfigurationError(f"{name}={lo, hi} is an empty range")
        if self.videos_per_uploader[0] < 1:
            raise ConfigurationError("every uploader needs at least one video")
        if self.communities is not None:
            plant = self.communities
            if plant.n_communities < 1 or plant.size < 1:
                raise ConfigurationError("community plant needs positive sizes")
            if plant.n_communities * plant.size > self.n_uploaders + self.n_commenters:
                raise ConfigurationError("community plant exceeds the user count")
            if not 0 <= plant.p_out < plant.p_in <= 1:
                raise ConfigurationError("community plant needs p_in > p_out")
        if self.bad_comment_plant is not None:
            n_bad, n_authors = self.bad_comment_plant
            if not 1 <= n_authors <= n_bad:
                raise ConfigurationError("bad-comment plant needs authors <= comments")
            if n_authors > self.n_commenters:
                raise ConfigurationError("bad-comment plant exceeds commenter pool")


@dataclass
class GroundTruth:
    """Everything the generator planted, for oracle-based checks."""

    video_labels: dict[str, Safety]
    unsafe_uploaders: set[str]
    uploader_ratios: dict[str, float]
    uploader_grades: dict[str, Grade]
    unsafe_commenters: set[str]
    n_bad_comments: int
    communities: dict[str, int] = field(default_factory=dict)
    planted_edges: list[tuple[str, str, str]] = field(default_factory=list)

    def dumps(self) -> str:
        doc = {
            "format_version": GROUND_TRUTH_FORMAT_VERSION,
            "video_labels": {k: str(v) for k, v in self.video_labels.items()},
            "unsafe_uploaders": sorted(self.unsafe_uploaders),
            "uploader_ratios": self.uploader_ratios,
            "uploader_grades": {k: str(v) for k, v in self.uploader_grades.items()},
            "unsafe_commenters": sorted(self.unsafe_commenters),
            "n_bad_comments": self.n_bad_comments,
            "communities": self.communities,
            "planted_edges": [list(edge) for edge in self.planted_edges],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "GroundTruth":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        if doc.get("format_version") != GROUND_TRUTH_FORMAT_VERSION:
            raise ConfigurationError("unsupported ground-truth format_version")
        return cls(
            video_labels={k: Safety.parse(v)
                          for k, v in doc["video_labels"].items()},
            unsafe_uploaders=set(doc["unsafe_uploaders"]),
            uploader_ratios=doc["uploader_ratios"],
            uploader_grades={k: Grade(v) for k, v in doc["uploader_grades"].items()},
            unsafe_commenters=set(doc["unsafe_commenters"]),
            n_bad_comments=doc["n_bad_comments"],
            communities={k: int(v) for k, v in doc["communities"].items()},
            planted_edges=[tuple(edge) for edge in doc["planted_edges"]],
        )


def oracle_classifier(ground_truth: GroundTruth) -> Callable:
    """Classifier substitute returning the planted label of each video."""
    labels = ground_truth.video_labels

    def predict(video_id: str, _vector) -> int:
        return int(labels[video_id])

    return predict


def oracle_verdicts(corpus: Corpus, ground_truth: GroundTruth,
                    video_cap: int = DEFAULT_VIDEO_CAP,
                    thresholds: tuple[float, float, float]
                    = DEFAULT_GRADE_THRESHOLDS) -> list[UploaderVerdict]:
    """Verdicts recomputed directly from planted labels (no features)."""
    verdicts = []
    for user_id in sorted(corpus.videos_by_uploader):
        videos = corpus.videos_by_uploader[user_id][:video_cap]
        if not videos:
            continue
        n_unsafe = sum(1 for v in videos
                       if ground_truth.video_labels[v.video_id] is Safety.UNSAFE)
        ratio = n_unsafe / len(videos)
        verdicts.append(UploaderVerdict(user_id, len(videos), n_unsafe, ratio,
                                        grade(ratio, thresholds)))
    return verdicts


# --- low-level draws ---------------------------------------------------------

def _phrase(rng: np.random.Generator, lo: int, hi: int) -> list[str]:
    n = int(rng.integers(lo, hi + 1))
    picks = rng.integers(0, len(NEUTRAL_WORDS), n)
    return [NEUTRAL_WORDS[int(i)] for i in picks]


def _counts(rng: np.random.Generator, n: int, mean: float,
            sigma: float) -> np.ndarray:
    return np.floor(rng.lognormal(mean, sigma, n)).astype(np.int64)


def _assign_ordered(rng: np.random.Generator, values: np.ndarray,
                    low_mask: np.ndarray) -> np.ndarray:
    """Sorted values: smallest block to the masked (unsafe) positions."""
    values = np.sort(values)
    n_low = int(low_mask.sum())
    low, high = values[:n_low].copy(), values[n_low:].copy()
    rng.shuffle(low)
    rng.shuffle(high)
    out = np.empty(values.size, dtype=values.dtype)
    out[low_mask] = low
    out[~low_mask] = high
    return out


def _metric(rng: np.random.Generator, n: int, mean: float, sigma: float,
            low_mask: np.ndarray, ordered: bool, signal: float) -> np.ndarray:
    """One engagement/popularity metric over n items."""
    values = _counts(rng, n, mean, sigma)
    if ordered:
        return _assign_ordered(rng, values, low_mask)
    if signal > 0:
        scale = np.where(low_mask, np.exp(-signal), 1.0)
        values = np.floor(values * scale).astype(np.int64)
    return values


def _repair_total(rng: np.random.Generator, counts: np.ndarray, target: int,
                  lo: int, hi: int) -> np.ndarray:
    n = counts.size
    if not lo * n <= target <= hi * n:
        raise ConfigurationError(
            f"total {target} infeasible for {n} draws in [{lo}, {hi}]")
    counts = counts.copy()
    diff = target - int(counts.sum())
    while diff != 0:
        i = int(rng.integers(n))
        if diff > 0 and counts[i] < hi:
            counts[i] += 1
            diff -= 1
        elif diff < 0 and counts[i] > lo:
            counts[i] -= 1
            diff += 1
    return counts


def _allocate_videos(rng: np.random.Generator, cfg: SynthConfig) -> np.ndarray:
    lo, hi = cfg.videos_per_uploader
    n = cfg.n_uploaders
    if cfg.n_videos_total is None:
        return rng.integers(lo, hi + 1, n)
    total = cfg.n_videos_total
    if not lo * n <= total <= hi * n:
        raise ConfigurationError(
            f"n_videos_total {total} infeasible for {n} uploaders in [{lo}, {hi}]")
    # most uploaders stay at the minimum; a prolific fifth absorbs the rest
    counts = np.full(n, lo, dtype=np.int64)
    prolific = rng.permutation(n)[:max(1, n // 5)]
    remaining = total - int(counts.sum())
    while remaining > 0:
        i = int(prolific[int(rng.integers(prolific.size))])
        if counts[i] >= hi:
            i = int(rng.integers(n))
            if counts[i] >= hi:
                continue
        counts[i] += 1
        remaining -= 1
    return counts


def _pair_block(rng: np.random.Generator, n_pairs: int, p: float) -> np.ndarray:
    count = int(rng.binomial(n_pairs, p)) if p > 0 else 0
    if count == 0:
        return np.empty(0, dtype=np.int64)
    return rng.choice(n_pairs, size=count, replace=False)


def _plant_video_labels(rng: np.random.Generator, cfg: SynthConfig,
                        video_counts: np.ndarray,
                        promoter: np.ndarray) -> np.ndarray:
    """Per-video unsafe flags, one uploader block at a time.

    The unsafe count inside each uploader's scored prefix (the first
    ``DEFAULT_VIDEO_CAP`` videos) is clamped so a promoter's indecency
    ratio grades non-safe and a clean uploader's grades safe at the
    default thresholds; this keeps planted flags, planted grades and the
    popularity ordering consistent with each other.
    """
    t_mod = DEFAULT_GRADE_THRESHOLDS[0]
    unsafe = np.zeros(int(video_counts.sum()), dtype=bool)
    start = 0
    for ui, n in enumerate(video_counts):
        n = int(n)
        n_scored = min(n, DEFAULT_VIDEO_CAP)
        cutoff = math.ceil(t_mod * n_scored)
        rate = (cfg.unsafe_video_rate_unsafe if promoter[ui]
                else cfg.unsafe_video_rate_safe)
        k_prefix = int(rng.binomial(n_scored, rate))
        if promoter[ui]:
            k_prefix = max(k_prefix, cutoff)
        else:
            k_prefix = min(k_prefix, max(cutoff - 1, 0))
        if k_prefix:
            picks = rng.choice(n_scored, size=k_prefix, replace=False)
            unsafe[start + picks] = True
        if n > n_scored:
            rest = rng.random(n - n_scored) < rate
            unsafe[start + n_scored:start + n] = rest
        start += n
    return unsafe


# --- generator ---------------------------------------------------------------

def generate(cfg: SynthConfig) -> tuple[Corpus, GroundTruth]:
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    lexicon = load_default_lexicon()
    bad_pool = sorted(lexicon.bad_words)
    pos_pool = sorted(lexicon.positive_words)
    neg_pool = sorted(lexicon.negative_words)

    uploader_ids = [f"u{i + 1:05d}" for i in range(cfg.n_uploaders)]
    commenter_ids = [f"c{i + 1:06d}" for i in range(cfg.n_commenters)]
    promoter = rng.random(cfg.n_uploaders) < cfg.unsafe_uploader_fraction
    unsafe_uploaders = {uid for uid, flag in zip(uploader_ids, promoter) if flag}

    video_counts = _allocate_videos(rng, cfg)
    n_videos = int(video_counts.sum())

    # per-video skeleton, grouped by uploader, newest first
    video_ids: list[str] = []
    video_uploader: list[int] = []
    video_age: list[int] = []
    serial = 0
    for ui in range(cfg.n_uploaders):
        ages = np.sort(rng.integers(1, 2000, int(video_counts[ui])))
        for age in ages:
            serial += 1
            video_ids.append(f"v{serial:06d}")
            video_uploader.append(ui)
            video_age.append(int(age))
    video_uploader = np.array(video_uploader)
    from_promoter = promoter[video_uploader]
    unsafe_video = _plant_video_labels(rng, cfg, video_counts, promoter)

    ordered = cfg.popularity_ordering
    views = _metric(rng, n_videos, 8.0, 1.6, from_promoter, ordered,
                    cfg.video_signal)
    likes = _metric(rng, n_videos, 4.5, 1.3, from_promoter, ordered,
                    cfg.video_signal)
    dislikes = _metric(rng, n_videos, 2.0, 1.1, from_promoter, ordered,
                       cfg.video_signal)

    c_lo, c_hi = cfg.comments_per_video
    comment_counts = rng.integers(c_lo, c_hi + 1, n_videos)
    if cfg.n_comments_total is not None:
        comment_counts = _repair_total(rng, comment_counts, cfg.n_comments_total,
                                       c_lo, c_hi)
    if ordered:
        comment_counts = _assign_ordered(rng, comment_counts, from_promoter)

    # view-specific blind spots: some unsafe videos look clean in one view,
    # so no single feature group separates perfectly but their union does
    text_clean = unsafe_video & (rng.random(n_videos) < 0.25)
    comment_clean = unsafe_video & (rng.random(n_videos) < 0.35)
    comment_magnet = ~unsafe_video & (rng.random(n_videos) < 0.08)

    videos: dict[str, VideoRecord] = {}
    vs = cfg.video_signal
    for i, vid in enumerate(video_ids):
        title_words = _phrase(rng, 3, 6)
        desc_words = _phrase(rng, 6, 18)
        if unsafe_video[i] and not text_clean[i]:
            if rng.random() < min(1.0, 0.55 * vs):
                title_words.append(bad_pool[int(rng.integers(len(bad_pool)))])
            if rng.random() < min(1.0, 0.45 * vs):
                title_words.append("18+")
            for _ in range(int(rng.poisson(1.3 * vs))):
                desc_words.append(bad_pool[int(rng.integers(len(bad_pool)))])
        elif not unsafe_video[i]:
            if rng.random() < 0.02:
                desc_words.append(bad_pool[int(rng.integers(len(bad_pool)))])
        if rng.random() < 0.3:
            desc_words.append("what?")
        if rng.random() < 0.2:
            desc_words.append("http://example.com/more")
        if rng.random() < 0.3:
            desc_words.append(":)")
        videos[vid] = VideoRecord(
            video_id=vid,
            uploader_id=uploader_ids[int(video_uploader[i])],
            title=" ".join(title_words),
            description=" ".join(desc_words),
            duration_s=int(rng.integers(45, 1500)),
            age_days=video_age[i],
            view_count=int(views[i]),
            like_count=int(likes[i]),
            dislike_count=int(dislikes[i]),
            comment_count=int(comment_counts[i]),
            related_ids=[],
            label=Safety.UNSAFE if unsafe_video[i] else Safety.SAFE,
            category=int(rng.integers(0, 3)),
        )

    # related-video suggestions: assortative by label, occasionally external
    label_pools = (np.flatnonzero(~unsafe_video), np.flatnonzero(unsafe_video))
    for i, vid in enumerate(video_ids):
        max_rel = min(cfg.related_per_video, n_videos - 1)
        if max_rel <= 0:
            continue
        n_rel = int(rng.integers(0, max_rel + 1))
        chosen: list[str] = []
        seen = {i}
        for _ in range(6 * n_rel):
            if len(chosen) == n_rel:
                break
            pool = (label_pools[int(unsafe_video[i])] if rng.random() < 0.7
                    else None)
            j = (int(pool[int(rng.integers(pool.size))]) if pool is not None
                 and pool.size else int(rng.integers(n_videos)))
            if j not in seen:
                seen.add(j)
                chosen.append(video_ids[j])
        if chosen and cfg.external_ref_rate and rng.random() < cfg.external_ref_rate:
            chosen[-1] = f"ext_video_{i}"
        videos[vid].related_ids = chosen

    # uploader profile stats
    subs = _metric(rng, cfg.n_uploaders, 6.0, 1.5, promoter, ordered,
                   cfg.user_signal)
    channel_views = _metric(rng, cfg.n_uploaders, 10.0, 1.6, promoter, ordered,
                            cfg.user_signal)
    channel_videos = _metric(rng, cfg.n_uploaders, 3.0, 1.0, promoter, ordered,
                             cfg.user_signal) + video_counts
    circled_raw = _counts(rng, cfg.n_uploaders, 4.0, 1.4)
    circled_raw[rng.random(cfg.n_uploaders) < 0.2] = 0  # 0 becomes "no profile"
    circled = (_assign_ordered(rng, circled_raw, promoter) if ordered
               else circled_raw)
    plus_one = _counts(rng, cfg.n_uploaders, 3.0, 1.2)

    users: dict[str, UserRecord] = {}
    for ui, uid in enumerate(uploader_ids):
        users[uid] = UserRecord(
            user_id=uid,
            roles=frozenset({UPLOADER}),
            total_videos=int(channel_videos[ui]),
            total_views=int(channel_views[ui]),
            total_comments=int(rng.integers(0, 5000)),
            subscriber_count=int(subs[ui]),
            channel_title=" ".join(_phrase(rng, 2, 4)),
            channel_description=" ".join(_phrase(rng, 4, 12)),
            age_days=int(rng.integers(30, 4000)),
            circled_by_count=int(circled[ui]) if circled[ui] > 0 else None,
            plus_one_count=int(plus_one[ui]) if rng.random() > 0.2 else None,
        )
    for ci, cid in enumerate(commenter_ids):
        users[cid] = UserRecord(
            user_id=cid,
            roles=frozenset({COMMENTER}),
            total_videos=0,
            total_views=int(rng.integers(0, 2000)),
            total_comments=int(rng.integers(1, 300)),
            subscriber_count=int(rng.integers(0, 50)),
            channel_title=" ".join(_phrase(rng, 1, 3)),
            channel_description="",
            age_days=int(rng.integers(10, 3000)),
        )

    # comments: pool coverage first, then extras; authorship reshuffled
    total_comments = int(comment_counts.sum())
    authors: list[str] = []
    if cfg.n_commenters and total_comments:
        coverage = rng.permutation(cfg.n_commenters)
        authors = [commenter_ids[int(i)] for i in coverage[:total_comments]]
        extra = total_comments - len(authors)
        if extra > 0:
            picks = rng.integers(0, cfg.n_commenters, extra)
            authors.extend(commenter_ids[int(i)] for i in picks)
        rng.shuffle(authors)
    elif total_comments:
        raise ConfigurationError("comments require a nonempty commenter pool")

    cs = cfg.comment_signal
    comment_video: list[int] = []
    for i in range(n_videos):
        comment_video.extend([i] * int(comment_counts[i]))

    comments: list[CommentRecord] = []
    for ci in range(total_comments):
        vi = comment_video[ci]
        on_unsafe = bool(unsafe_video[vi]) and not comment_clean[vi]
        words = _phrase(rng, 3, 8)
        p_pos = min(1.0, max(0.0, 0.25 + (0.2 * cs if not on_unsafe else -0.1 * cs)))
        p_neg = min(1.0, max(0.0, 0.25 + (0.2 * cs if on_unsafe else -0.1 * cs)))
        roll = rng.random()
        if roll < p_pos:
            words.append(pos_pool[int(rng.integers(len(pos_pool)))])
        elif roll < p_pos + p_neg:
            words.append(neg_pool[int(rng.integers(len(neg_pool)))])
        lam_like = 1.0 + (1.2 * cs if not on_unsafe else 0.0)
        lam_reply = 0.4 + (0.6 * cs if not on_unsafe else 0.0)
        comments.append(CommentRecord(
            comment_id=f"m{ci + 1:07d}",
            video_id=video_ids[vi],
            author_id=authors[ci],
            text=" ".join(words),
            like_count=int(rng.poisson(lam_like)),
            reply_count=int(rng.poisson(lam_reply)),
        ))

    # bad-word plants
    unsafe_commenters: set[str] = set()
    n_bad_comments = 0
    def _slot_weight(vi: int) -> float:
        if comment_clean[vi]:
            return 0.0
        if comment_magnet[vi]:
            return 6.0
        return 3.0 if unsafe_video[vi] else 1.0

    if cfg.bad_comment_plant is not None:
        n_bad, n_authors = cfg.bad_comment_plant
        if n_bad > total_comments:
            raise ConfigurationError(
                f"cannot plant {n_bad} bad comments into {total_comments}")
        weights = np.array([_slot_weight(comment_video[i])
                            for i in range(total_comments)])
        if np.count_nonzero(weights) < n_bad:
            weights = np.maximum(weights, 1e-9)
        slots = rng.choice(total_comments, size=n_bad, replace=False,
                           p=weights / weights.sum())
        slots = [int(s) for s in slots]
        chosen = [commenter_ids[int(i)]
                  for i in rng.choice(cfg.n_commenters, size=n_authors,
                                      replace=False)]
        slot_authors = list(chosen)
        extra = n_bad - n_authors
        if extra > 0:
            picks = rng.integers(0, n_authors, extra)
            slot_authors.extend(chosen[int(i)] for i in picks)
        rng.shuffle(slot_authors)
        for slot, author in zip(slots, slot_authors):
            comments[slot].author_id = author
            _inject_bad_words(rng, comments[slot], bad_pool)
        unsafe_commenters = set(chosen)
        n_bad_comments = n_bad
    elif cfg.unsafe_comment_rate > 0:
        for ci, comment in enumerate(comments):
            boost = _slot_weight(comment_video[ci]) * (1.0 + cs) / 2.0
            if rng.random() < min(1.0, cfg.unsafe_comment_rate * boost):
                _inject_bad_words(rng, comment, bad_pool)
                unsafe_commenters.add(comment.author_id)
                n_bad_comments += 1

    # behavioral lists: planted communities plus self/external noise
    communities: dict[str, int] = {}
    planted_edges: list[tuple[str, str, str]] = []
    uploader_video_ids: dict[str, list[str]] = {uid: [] for uid in uploader_ids}
    for vid, video in videos.items():
        uploader_video_ids[video.uploader_id].append(vid)

    if cfg.communities is not None:
        plant = cfg.communities
        all_users = uploader_ids + commenter_ids
        picked = [all_users[int(i)] for i in
                  rng.permutation(len(all_users))[:plant.n_communities * plant.size]]
        for i, uid in enumerate(picked):
            communities[uid] = i // plant.size
        blocks = [picked[b * plant.size:(b + 1) * plant.size]
                  for b in range(plant.n_communities)]
        tri = np.triu_indices(plant.size, k=1)
        for block in blocks:
            n_pairs = plant.size * (plant.size - 1) // 2
            for idx in _pair_block(rng, n_pairs, plant.p_in):
                a, b = block[int(tri[0][idx])], block[int(tri[1][idx])]
                planted_edges.append(
                    _realize_edge(rng, users, uploader_video_ids, a, b))
        for bi in range(plant.n_communities):
            for bj in range(bi + 1, plant.n_communities):
                for idx in _pair_block(rng, plant.size * plant.size, plant.p_out):
                    a = blocks[bi][int(idx) // plant.size]
                    b = blocks[bj][int(idx) % plant.size]
                    planted_edges.append(
                        _realize_edge(rng, users, uploader_video_ids, a, b))

    if cfg.self_like_rate > 0:
        for uid in uploader_ids:
            if rng.random() < cfg.self_like_rate and uploader_video_ids[uid]:
                own = uploader_video_ids[uid]
                users[uid].liked_video_ids.append(own[int(rng.integers(len(own)))])
    if cfg.external_ref_rate > 0:
        for i, uid in enumerate(uploader_ids + commenter_ids):
            if rng.random() < cfg.external_ref_rate:
                users[uid].liked_video_ids.append(f"ext_video_b{i}")
            if rng.random() < cfg.external_ref_rate:
                users[uid].subscribed_user_ids.append(f"ext_user_b{i}")

    corpus = Corpus(videos=videos, users=users, comments=comments)
    corpus.validate()

    video_labels = {vid: (Safety.UNSAFE if unsafe_video[i] else Safety.SAFE)
                    for i, vid in enumerate(video_ids)}
    truth = GroundTruth(
        video_labels=video_labels,
        unsafe_uploaders=unsafe_uploaders,
        uploader_ratios={},
        uploader_grades={},
        unsafe_commenters=unsafe_commenters,
        n_bad_comments=n_bad_comments,
        communities=communities,
        planted_edges=planted_edges,
    )
    for verdict in oracle_verdicts(corpus, truth):
        truth.uploader_ratios[verdict.user_id] = verdict.ratio
        truth.uploader_grades[verdict.user_id] = verdict.grade
    return corpus, truth


def _inject_bad_words(rng: np.random.Generator, comment: CommentRecord,
                      bad_pool: list[str]) -> None:
    words = comment.text.split()
    for _ in range(int(rng.integers(1, 4))):
        word = bad_pool[int(rng.integers(len(bad_pool)))]
        words.insert(int(rng.integers(len(words) + 1)), word)
    comment.text = " ".join(words)


def _realize_edge(rng: np.random.Generator, users: dict[str, UserRecord],
                  uploader_video_ids: dict[str, list[str]], a: str, b: str,
                  ) -> tuple[str, str, str]:
    """Wire one planted (a, b) pair into behavioral lists; returns the edge."""
    if rng.random() < 0.5:
        a, b = b, a
    target_videos = uploader_video_ids.get(b, [])
    if target_videos:
        relation = (Relation.LIKE, Relation.SUBSCRIBE,
                    Relation.PLAYLIST)[int(rng.integers(3))]
    else:
        relation = Relation.SUBSCRIBE
    if relation is Relation.LIKE:
        users[a].liked_video_ids.append(
            target_videos[int(rng.integers(len(target_videos)))])
    elif relation is Relation.PLAYLIST:
        users[a].playlist_video_ids.append(
            target_videos[int(rng.integers(len(target_videos)))])
    else:
        users[a].subscribed_user_ids.append(b)
    return a, b, relation.value


# --- presets -----------------------------------------------------------------

def preset(name: str, seed: int = 0) -> SynthConfig:
    """Named configurations: tiny, paper-scale, planted, stress."""
    if name == "tiny":
        return SynthConfig(
            seed=seed, n_uploaders=10, n_commenters=40,
            videos_per_uploader=(1, 5), n_videos_total=28,
            comments_per_video=(0, 6), n_comments_total=90,
            unsafe_comment_rate=0.08,
            communities=CommunityPlant(3, 10, 0.5, 0.02),
            self_like_rate=0.2, external_ref_rate=0.1,
        )
    if name == "paper-scale":
        return SynthConfig(
            seed=seed, n_uploaders=275, n_commenters=19099,
            videos_per_uploader=(1, 30), n_videos_total=408,
            comments_per_video=(0, 100), n_comments_total=21268,
            bad_comment_plant=(1814, 1755),
            communities=CommunityPlant(12, 30, 0.25, 0.01),
            self_like_rate=0.3, external_ref_rate=0.05,
        )
    if name == "planted":
        return SynthConfig(
            seed=seed, n_uploaders=40, n_commenters=200,
            videos_per_uploader=(1, 3),
            comments_per_video=(0, 3),
            communities=CommunityPlant(8, 30, 0.3, 0.01),
        )
    if name == "spread":
        # larger corpus with signal spread across all three feature views
        return SynthConfig(
            seed=seed, n_uploaders=220, n_commenters=2500,
            videos_per_uploader=(2, 8), comments_per_video=(5, 30),
            unsafe_uploader_fraction=0.35, unsafe_comment_rate=0.04,
        )
    if name == "stress":
        return SynthConfig(
            seed=seed, n_uploaders=2000, n_commenters=8000,
            videos_per_uploader=(1, 1),
            comments_per_video=(0, 1),
            communities=CommunityPlant(50, 200, 0.09, 0.0002),
        )
    raise ConfigurationError(f"unknown preset {name!r}")


PRESET_NAMES: tuple[str, ...] = ("tiny", "paper-scale", "planted", "spread",
                                 "stress")
