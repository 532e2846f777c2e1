"""Data model for videos, users and comments, plus corpus/lexicon file I/O.

A corpus is a single self-describing JSON document (``format_version`` 1)
holding one record per video, user and comment.  References that point
outside the corpus (the wider platform) are written as
``{"id": ..., "external": true}``; a bare string reference must resolve
within the corpus or loading fails with an integrity error.

A lexicon is a plain-text word list, one token per line, split into
sections by ``#bad``, ``#positive`` and ``#negative`` headers.  Lines
before any header belong to the bad-word section.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from .errors import ConfigurationError, IntegrityError, ParseError

FORMAT_VERSION = 1

UPLOADER = "uploader"
COMMENTER = "commenter"


class Safety(enum.IntEnum):
    SAFE = 0
    UNSAFE = 1

    def __str__(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, text: str) -> "Safety":
        try:
            return cls[text.upper()]
        except KeyError:
            raise ParseError(f"unknown safety label {text!r}") from None


class Sentiment(enum.Enum):
    POSITIVE = "positive"
    NEUTRAL = "neutral"
    NEGATIVE = "negative"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, text: str) -> "Sentiment":
        try:
            return cls(text.lower())
        except ValueError:
            raise ParseError(f"unknown sentiment {text!r}") from None


@dataclass
class VideoRecord:
    video_id: str
    uploader_id: str
    title: str = ""
    description: str = ""
    duration_s: int = 0
    age_days: int = 0
    view_count: int = 0
    like_count: int = 0
    dislike_count: int = 0
    comment_count: int = 0
    related_ids: list[str] = field(default_factory=list)
    label: Safety | None = None
    category: int = 0  # optional categorical passthrough, 0 = unset


@dataclass
class UserRecord:
    user_id: str
    roles: frozenset[str] = frozenset()
    total_videos: int = 0
    total_views: int = 0
    total_comments: int = 0
    subscriber_count: int = 0
    channel_title: str = ""
    channel_description: str = ""
    age_days: int = 0
    circled_by_count: int | None = None  # absent when no linked social profile
    plus_one_count: int | None = None
    liked_video_ids: list[str] = field(default_factory=list)
    playlist_video_ids: list[str] = field(default_factory=list)
    subscribed_user_ids: list[str] = field(default_factory=list)


@dataclass
class CommentRecord:
    comment_id: str
    video_id: str
    author_id: str
    text: str = ""
    like_count: int = 0
    reply_count: int = 0
    sentiment: Sentiment | None = None  # precomputed override


@dataclass
class Corpus:
    """Immutable-by-convention container; maps preserve file order."""

    videos: dict[str, VideoRecord]
    users: dict[str, UserRecord]
    comments: list[CommentRecord]

    @cached_property
    def comments_by_video(self) -> dict[str, list[CommentRecord]]:
        index: dict[str, list[CommentRecord]] = {vid: [] for vid in self.videos}
        for comment in self.comments:
            index.setdefault(comment.video_id, []).append(comment)
        return index

    @cached_property
    def videos_by_uploader(self) -> dict[str, list[VideoRecord]]:
        # per-uploader lists keep corpus order, i.e. newest-first
        index: dict[str, list[VideoRecord]] = {}
        for video in self.videos.values():
            index.setdefault(video.uploader_id, []).append(video)
        return index

    def validate(self) -> None:
        """Raise IntegrityError/ParseError on any invariant violation."""
        for vid, video in self.videos.items():
            if not vid:
                raise IntegrityError("empty video_id")
            if vid != video.video_id:
                raise IntegrityError(f"video key {vid!r} does not match record id")
            if video.video_id in video.related_ids:
                raise IntegrityError(f"video {vid!r} lists itself as related")
            if len(set(video.related_ids)) != len(video.related_ids):
                raise IntegrityError(f"video {vid!r} has duplicate related_ids")
            for name in ("duration_s", "age_days", "view_count", "like_count",
                         "dislike_count", "comment_count"):
                if getattr(video, name) < 0:
                    raise ParseError(f"video {vid!r}: negative {name}")
        for uid, user in self.users.items():
            if not uid:
                raise IntegrityError("empty user_id")
            if uid != user.user_id:
                raise IntegrityError(f"user key {uid!r} does not match record id")
            if uid in user.subscribed_user_ids:
                raise IntegrityError(f"user {uid!r} subscribes to itself")
            if not user.roles <= {UPLOADER, COMMENTER}:
                raise ParseError(f"user {uid!r}: unknown role in {sorted(user.roles)}")
            for name in ("total_videos", "total_views", "total_comments",
                         "subscriber_count", "age_days"):
                if getattr(user, name) < 0:
                    raise ParseError(f"user {uid!r}: negative {name}")
        seen_comments: set[str] = set()
        for comment in self.comments:
            if comment.comment_id in seen_comments:
                raise IntegrityError(f"duplicate comment_id {comment.comment_id!r}")
            seen_comments.add(comment.comment_id)
            if comment.video_id not in self.videos:
                raise IntegrityError(
                    f"comment {comment.comment_id!r} references unknown video "
                    f"{comment.video_id!r}")
            if comment.author_id not in self.users:
                raise IntegrityError(
                    f"comment {comment.comment_id!r} references unknown author "
                    f"{comment.author_id!r}")
            if comment.like_count < 0 or comment.reply_count < 0:
                raise ParseError(f"comment {comment.comment_id!r}: negative count")


@dataclass
class Lexicon:
    bad_words: frozenset[str]
    positive_words: frozenset[str] = frozenset()
    negative_words: frozenset[str] = frozenset()

    def validate(self) -> None:
        if not self.bad_words:
            raise ConfigurationError("lexicon has an empty bad-word list")
        overlap = self.positive_words & self.negative_words
        if overlap:
            raise ConfigurationError(
                f"lexicon words appear in both polarity lists: {sorted(overlap)[:5]}")
        for word in (self.bad_words | self.positive_words | self.negative_words):
            if word != word.lower() or any(ch.isspace() for ch in word) or not word:
                raise ConfigurationError(f"bad lexicon entry {word!r}")


# --- reference (de)coding -------------------------------------------------
#
# A reference in the file is either "id" (must resolve) or
# {"id": ..., "external": true} (allowed to dangle).  In memory only the id
# string is kept; externality is re-derived from corpus membership on write.

def _decode_ref(value, where: str) -> tuple[str, bool]:
    if isinstance(value, str):
        return value, False
    if isinstance(value, dict) and isinstance(value.get("id"), str):
        return value["id"], bool(value.get("external", False))
    raise ParseError(f"{where}: malformed reference {value!r}")


def _encode_ref(ref_id: str, resolvable: bool):
    return ref_id if resolvable else {"id": ref_id, "external": True}


def _decode_ref_list(values, where: str, resolved: set[str]) -> list[str]:
    ids: list[str] = []
    for i, value in enumerate(values):
        ref_id, external = _decode_ref(value, f"{where}[{i}]")
        if not external and ref_id not in resolved:
            raise IntegrityError(f"{where}[{i}]: dangling reference {ref_id!r}")
        ids.append(ref_id)
    return ids


def _require(record: dict, key: str, kind, where: str):
    if key not in record:
        raise ParseError(f"{where}: missing field {key!r}")
    value = record[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ParseError(f"{where}: field {key!r} has wrong type")
    return value


def corpus_to_dict(corpus: Corpus) -> dict:
    """Plain-dict form of a corpus, ready for JSON serialization."""
    videos = []
    for video in corpus.videos.values():
        videos.append({
            "video_id": video.video_id,
            "uploader_id": _encode_ref(video.uploader_id,
                                       video.uploader_id in corpus.users),
            "title": video.title,
            "description": video.description,
            "duration_s": video.duration_s,
            "age_days": video.age_days,
            "view_count": video.view_count,
            "like_count": video.like_count,
            "dislike_count": video.dislike_count,
            "comment_count": video.comment_count,
            "related_ids": [_encode_ref(r, r in corpus.videos)
                            for r in video.related_ids],
            "label": str(video.label) if video.label is not None else None,
            "category": video.category,
        })
    users = []
    for user in corpus.users.values():
        users.append({
            "user_id": user.user_id,
            "roles": sorted(user.roles),
            "total_videos": user.total_videos,
            "total_views": user.total_views,
            "total_comments": user.total_comments,
            "subscriber_count": user.subscriber_count,
            "channel_title": user.channel_title,
            "channel_description": user.channel_description,
            "age_days": user.age_days,
            "circled_by_count": user.circled_by_count,
            "plus_one_count": user.plus_one_count,
            "liked_video_ids": [_encode_ref(r, r in corpus.videos)
                                for r in user.liked_video_ids],
            "playlist_video_ids": [_encode_ref(r, r in corpus.videos)
                                   for r in user.playlist_video_ids],
            "subscribed_user_ids": [_encode_ref(r, r in corpus.users)
                                    for r in user.subscribed_user_ids],
        })
    comments = []
    for comment in corpus.comments:
        comments.append({
            "comment_id": comment.comment_id,
            "video_id": comment.video_id,
            "author_id": comment.author_id,
            "text": comment.text,
            "like_count": comment.like_count,
            "reply_count": comment.reply_count,
            "sentiment": str(comment.sentiment) if comment.sentiment else None,
        })
    return {"format_version": FORMAT_VERSION, "videos": videos,
            "users": users, "comments": comments}


def corpus_from_dict(doc: dict) -> Corpus:
    if not isinstance(doc, dict):
        raise ParseError("corpus document is not a JSON object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ParseError(f"unsupported format_version {version!r}")

    video_ids = set()
    for i, rec in enumerate(doc.get("videos", [])):
        vid = _require(rec, "video_id", str, f"videos[{i}]")
        if vid in video_ids:
            raise IntegrityError(f"duplicate video_id {vid!r}")
        video_ids.add(vid)
    user_ids = set()
    for i, rec in enumerate(doc.get("users", [])):
        uid = _require(rec, "user_id", str, f"users[{i}]")
        if uid in user_ids:
            raise IntegrityError(f"duplicate user_id {uid!r}")
        user_ids.add(uid)

    videos: dict[str, VideoRecord] = {}
    for i, rec in enumerate(doc.get("videos", [])):
        where = f"videos[{i}]"
        vid = rec["video_id"]
        uploader_id, ext = _decode_ref(rec.get("uploader_id"), f"{where}.uploader_id")
        if not ext and uploader_id not in user_ids:
            raise IntegrityError(f"{where}: dangling uploader_id {uploader_id!r}")
        label = rec.get("label")
        videos[vid] = VideoRecord(
            video_id=vid,
            uploader_id=uploader_id,
            title=_require(rec, "title", str, where),
            description=_require(rec, "description", str, where),
            duration_s=_require(rec, "duration_s", int, where),
            age_days=_require(rec, "age_days", int, where),
            view_count=_require(rec, "view_count", int, where),
            like_count=_require(rec, "like_count", int, where),
            dislike_count=_require(rec, "dislike_count", int, where),
            comment_count=_require(rec, "comment_count", int, where),
            related_ids=_decode_ref_list(rec.get("related_ids", []),
                                         f"{where}.related_ids", video_ids),
            label=Safety.parse(label) if label is not None else None,
            category=int(rec.get("category", 0)),
        )

    users: dict[str, UserRecord] = {}
    for i, rec in enumerate(doc.get("users", [])):
        where = f"users[{i}]"
        uid = rec["user_id"]
        circled = rec.get("circled_by_count")
        plus = rec.get("plus_one_count")
        users[uid] = UserRecord(
            user_id=uid,
            roles=frozenset(rec.get("roles", [])),
            total_videos=_require(rec, "total_videos", int, where),
            total_views=_require(rec, "total_views", int, where),
            total_comments=_require(rec, "total_comments", int, where),
            subscriber_count=_require(rec, "subscriber_count", int, where),
            channel_title=rec.get("channel_title", ""),
            channel_description=rec.get("channel_description", ""),
            age_days=_require(rec, "age_days", int, where),
            circled_by_count=int(circled) if circled is not None else None,
            plus_one_count=int(plus) if plus is not None else None,
            liked_video_ids=_decode_ref_list(rec.get("liked_video_ids", []),
                                             f"{where}.liked_video_ids", video_ids),
            playlist_video_ids=_decode_ref_list(rec.get("playlist_video_ids", []),
                                                f"{where}.playlist_video_ids",
                                                video_ids),
            subscribed_user_ids=_decode_ref_list(rec.get("subscribed_user_ids", []),
                                                 f"{where}.subscribed_user_ids",
                                                 user_ids),
        )

    comments: list[CommentRecord] = []
    for i, rec in enumerate(doc.get("comments", [])):
        where = f"comments[{i}]"
        sentiment = rec.get("sentiment")
        comments.append(CommentRecord(
            comment_id=_require(rec, "comment_id", str, where),
            video_id=_require(rec, "video_id", str, where),
            author_id=_require(rec, "author_id", str, where),
            text=_require(rec, "text", str, where),
            like_count=_require(rec, "like_count", int, where),
            reply_count=_require(rec, "reply_count", int, where),
            sentiment=Sentiment.parse(sentiment) if sentiment is not None else None,
        ))

    corpus = Corpus(videos=videos, users=users, comments=comments)
    corpus.validate()
    return corpus


def load_corpus(path: str | Path) -> Corpus:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} col {exc.colno}: {exc.msg}") from exc
    return corpus_from_dict(doc)


def dumps_corpus(corpus: Corpus) -> str:
    return json.dumps(corpus_to_dict(corpus), indent=2, sort_keys=True) + "\n"


def write_corpus(corpus: Corpus, path: str | Path) -> None:
    Path(path).write_text(dumps_corpus(corpus), encoding="utf-8")


_LEXICON_SECTIONS = {"#bad": "bad", "#positive": "positive", "#negative": "negative"}


def load_lexicon(path: str | Path) -> Lexicon:
    path = Path(path)
    sections: dict[str, set[str]] = {"bad": set(), "positive": set(), "negative": set()}
    current = "bad"
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line not in _LEXICON_SECTIONS:
                raise ParseError(f"{path}: line {lineno}: unknown section {line!r}")
            current = _LEXICON_SECTIONS[line]
            continue
        token = line.lower()
        if any(ch.isspace() for ch in token):
            raise ParseError(f"{path}: line {lineno}: token contains whitespace")
        sections[current].add(token)
    lexicon = Lexicon(bad_words=frozenset(sections["bad"]),
                      positive_words=frozenset(sections["positive"]),
                      negative_words=frozenset(sections["negative"]))
    lexicon.validate()
    return lexicon


def default_lexicon_path() -> Path:
    return Path(__file__).parent / "data" / "default_lexicon.txt"


def load_default_lexicon() -> Lexicon:
    return load_lexicon(default_lexicon_path())
