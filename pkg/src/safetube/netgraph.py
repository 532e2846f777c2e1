"""Safety-labeled graphs: video suggestion, uploader, commenter engagement
and behavioral (like/subscribe/playlist) networks, plus 2x2 transition
counts over edge endpoint safety.

Edges are stored (src, dst, relation) and deduplicated within a relation;
distinct relations between the same pair stay distinct edges.  Isolated
nodes are excluded by default.  Self-loops are never added to a graph;
behavioral self-references are tallied separately.
"""

from __future__ import annotations

import enum
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple, Sequence

from .corpus import UPLOADER, Corpus, Safety
from .detect import Grade, UploaderVerdict
from .errors import IntegrityError, LabelingError


class NodeKind(str, enum.Enum):
    VIDEO = "video"
    UPLOADER = "uploader"
    COMMENTER = "commenter"

    def __str__(self) -> str:
        return self.value


class Relation(str, enum.Enum):
    RELATED = "related"
    COMMENT = "comment"
    LIKE = "like"
    SUBSCRIBE = "subscribe"
    PLAYLIST = "playlist"

    def __str__(self) -> str:
        return self.value


BEHAVIOR_RELATIONS: tuple[Relation, ...] = (Relation.LIKE, Relation.SUBSCRIBE,
                                            Relation.PLAYLIST)


class GraphNode(NamedTuple):
    kind: NodeKind
    safety: Safety


class Edge(NamedTuple):
    src: str
    dst: str
    relation: Relation


@dataclass
class LabeledGraph:
    nodes: dict[str, GraphNode]
    edges: list[Edge]
    directed: bool = True

    def validate(self) -> None:
        seen: set[Edge] = set()
        for edge in self.edges:
            if edge.src not in self.nodes or edge.dst not in self.nodes:
                raise IntegrityError(f"edge {edge} has an endpoint outside the graph")
            if edge.src == edge.dst:
                raise IntegrityError(f"self-loop {edge}")
            if edge in seen:
                raise IntegrityError(f"duplicate edge {edge}")
            seen.add(edge)

    def drop_isolated(self) -> "LabeledGraph":
        used = {e.src for e in self.edges} | {e.dst for e in self.edges}
        nodes = {nid: node for nid, node in self.nodes.items() if nid in used}
        return LabeledGraph(nodes, list(self.edges), self.directed)


@dataclass
class TransitionMatrix:
    """Edge census by (source safety, destination safety)."""

    ss: int = 0
    su: int = 0
    us: int = 0
    uu: int = 0

    @property
    def total(self) -> int:
        return self.ss + self.su + self.us + self.uu

    def as_tuple(self) -> tuple[int, int, int, int]:
        return self.ss, self.su, self.us, self.uu


def transitions(graph: LabeledGraph) -> TransitionMatrix:
    """Count every edge by endpoint safety; sums to the edge count."""
    tm = TransitionMatrix()
    for edge in graph.edges:
        src_unsafe = graph.nodes[edge.src].safety is Safety.UNSAFE
        dst_unsafe = graph.nodes[edge.dst].safety is Safety.UNSAFE
        if src_unsafe and dst_unsafe:
            tm.uu += 1
        elif src_unsafe:
            tm.us += 1
        elif dst_unsafe:
            tm.su += 1
        else:
            tm.ss += 1
    assert tm.total == len(graph.edges)
    return tm


DEFAULT_RELATED_TH = 10
DEFAULT_MIN_COMMENTS = 4

TRANSITION_LABELS: tuple[str, ...] = (
    "Safe to Safe Transition",
    "Safe to Unsafe Transition",
    "Unsafe to Safe Transition",
    "Unsafe to Unsafe Transition",
)

COMMENTER_TRANSITION_LABELS: tuple[str, ...] = (
    "Safe Commenter to Safe Uploader",
    "Unsafe Commenter to Safe Uploader",
    "Safe Commenter to Unsafe Uploader",
    "Unsafe Commenter to Unsafe Uploader",
)


def format_transitions(tm: TransitionMatrix, style: str = "generic") -> str:
    """Plain-text transition report; ``commenter`` style uses the
    commenter-to-uploader row labels."""
    if style == "commenter":
        rows = zip(COMMENTER_TRANSITION_LABELS, (tm.ss, tm.us, tm.su, tm.uu))
    else:
        rows = zip(TRANSITION_LABELS, tm.as_tuple())
    lines = [f"{label}\t{count}" for label, count in rows]
    return "\n".join(lines) + "\n"


def build_video_graph(corpus: Corpus, labels: Mapping[str, Safety],
                      th: int = DEFAULT_RELATED_TH,
                      keep_isolated: bool = False) -> LabeledGraph:
    """Directed video graph from the first ``th`` related ids of each video;
    an edge is added only when the target is itself a corpus video."""
    nodes: dict[str, GraphNode] = {}
    for vid in corpus.videos:
        if vid not in labels:
            raise LabelingError(f"video {vid!r} has no safety label")
        nodes[vid] = GraphNode(NodeKind.VIDEO, labels[vid])
    edges: list[Edge] = []
    seen: set[tuple[str, str]] = set()
    for vid, video in corpus.videos.items():
        for related in video.related_ids[:th]:
            if related in corpus.videos and (vid, related) not in seen:
                seen.add((vid, related))
                edges.append(Edge(vid, related, Relation.RELATED))
    graph = LabeledGraph(nodes, edges, directed=True)
    if not keep_isolated:
        graph = graph.drop_isolated()
    graph.validate()
    return graph


def _verdict_safety(verdicts: Iterable[UploaderVerdict]) -> dict[str, Safety]:
    return {v.user_id: Safety.SAFE if v.grade is Grade.SAFE else Safety.UNSAFE
            for v in verdicts}


def _user_safety(user_id: str, verdict_map: Mapping[str, Safety],
                 commenter_flags: set[str]) -> Safety:
    """Unsafe if graded unsafe as an uploader or flagged as a commenter."""
    if verdict_map.get(user_id) is Safety.UNSAFE or user_id in commenter_flags:
        return Safety.UNSAFE
    return Safety.SAFE


def build_uploader_graph(video_graph: LabeledGraph, corpus: Corpus,
                         verdicts: Sequence[UploaderVerdict],
                         keep_isolated: bool = False) -> LabeledGraph:
    """Collapse video edges onto uploaders, deduplicating and dropping
    self-loops; node safety comes from the uploader verdicts."""
    verdict_map = _verdict_safety(verdicts)

    def uploader_of(vid: str) -> str:
        return corpus.videos[vid].uploader_id

    nodes: dict[str, GraphNode] = {}
    for vid in video_graph.nodes:
        uid = uploader_of(vid)
        if uid not in verdict_map:
            raise LabelingError(f"uploader {uid!r} has no verdict")
        nodes.setdefault(uid, GraphNode(NodeKind.UPLOADER, verdict_map[uid]))
    edges: list[Edge] = []
    seen: set[tuple[str, str]] = set()
    for edge in video_graph.edges:
        src, dst = uploader_of(edge.src), uploader_of(edge.dst)
        if src == dst or (src, dst) in seen:
            continue
        seen.add((src, dst))
        edges.append(Edge(src, dst, Relation.RELATED))
    graph = LabeledGraph(nodes, edges, directed=True)
    if not keep_isolated:
        graph = graph.drop_isolated()
    graph.validate()
    return graph


def build_commenter_graph(corpus: Corpus, verdicts: Sequence[UploaderVerdict],
                          commenter_flags: set[str],
                          min_comments: int = DEFAULT_MIN_COMMENTS,
                          keep_isolated: bool = False) -> LabeledGraph:
    """Bipartite commenter-uploader graph over commenting relationships.

    Only commenters with at least ``min_comments`` comments qualify; edges
    are stored commenter -> uploader (the orientation transition counts
    use) and the graph is viewed as undirected.  Commenting on one's own
    video adds no edge.
    """
    verdict_map = _verdict_safety(verdicts)
    counts: dict[str, int] = {}
    for comment in corpus.comments:
        counts[comment.author_id] = counts.get(comment.author_id, 0) + 1

    nodes: dict[str, GraphNode] = {}
    for verdict in verdicts:
        nodes[verdict.user_id] = GraphNode(
            NodeKind.UPLOADER,
            _user_safety(verdict.user_id, verdict_map, commenter_flags))
    for author, n in counts.items():
        if n >= min_comments and author not in nodes:
            nodes[author] = GraphNode(
                NodeKind.COMMENTER,
                _user_safety(author, verdict_map, commenter_flags))

    edges: list[Edge] = []
    seen: set[tuple[str, str]] = set()
    for comment in corpus.comments:
        author = comment.author_id
        if counts[author] < min_comments:
            continue
        uploader = corpus.videos[comment.video_id].uploader_id
        if uploader == author or uploader not in nodes:
            continue
        if (author, uploader) in seen:
            continue
        seen.add((author, uploader))
        edges.append(Edge(author, uploader, Relation.COMMENT))
    graph = LabeledGraph(nodes, edges, directed=False)
    if not keep_isolated:
        graph = graph.drop_isolated()
    graph.validate()
    return graph


@dataclass
class BehaviorStats:
    """Per-relation tallies of references that do not become edges."""

    external: dict[Relation, int] = field(
        default_factory=lambda: {r: 0 for r in BEHAVIOR_RELATIONS})
    self_refs: dict[Relation, int] = field(
        default_factory=lambda: {r: 0 for r in BEHAVIOR_RELATIONS})


def build_behavior_graph(corpus: Corpus, verdicts: Sequence[UploaderVerdict],
                         commenter_flags: set[str],
                         relations: Sequence[Relation] = BEHAVIOR_RELATIONS,
                         keep_isolated: bool = False,
                         ) -> tuple[LabeledGraph, BehaviorStats]:
    """Combined engagement graph over likes, subscriptions and playlists.

    Liked/playlisted videos reverse-resolve to their uploader; references
    that leave the seed user set are tallied as external, own-video
    references as self, neither becomes an edge.
    """
    relations = tuple(relations)
    if not relations:
        raise LabelingError("behavior graph needs at least one relation")
    verdict_map = _verdict_safety(verdicts)
    nodes: dict[str, GraphNode] = {}
    for uid, user in corpus.users.items():
        kind = NodeKind.UPLOADER if UPLOADER in user.roles else NodeKind.COMMENTER
        nodes[uid] = GraphNode(kind, _user_safety(uid, verdict_map, commenter_flags))

    stats = BehaviorStats()
    edges: list[Edge] = []
    seen: set[tuple[str, str, Relation]] = set()

    def add(src: str, dst: str, relation: Relation) -> None:
        key = (src, dst, relation)
        if key not in seen:
            seen.add(key)
            edges.append(Edge(src, dst, relation))

    def video_targets(user_id: str, video_ids: list[str], relation: Relation) -> None:
        for vid in video_ids:
            video = corpus.videos.get(vid)
            owner = video.uploader_id if video is not None else None
            if owner == user_id:
                stats.self_refs[relation] += 1
            elif owner is not None and owner in nodes:
                add(user_id, owner, relation)
            else:
                stats.external[relation] += 1

    for uid, user in corpus.users.items():
        if Relation.LIKE in relations:
            video_targets(uid, user.liked_video_ids, Relation.LIKE)
        if Relation.PLAYLIST in relations:
            video_targets(uid, user.playlist_video_ids, Relation.PLAYLIST)
        if Relation.SUBSCRIBE in relations:
            for target in user.subscribed_user_ids:
                if target in nodes:
                    add(uid, target, Relation.SUBSCRIBE)
                else:
                    stats.external[Relation.SUBSCRIBE] += 1

    graph = LabeledGraph(nodes, edges, directed=True)
    if not keep_isolated:
        graph = graph.drop_isolated()
    graph.validate()
    return graph, stats


# --- exports ----------------------------------------------------------------

def format_edge_list(graph: LabeledGraph) -> str:
    lines = [f"{e.src}\t{e.dst}\t{e.relation}" for e in graph.edges]
    return "\n".join(lines) + ("\n" if lines else "")


def write_edge_list(graph: LabeledGraph, path: str | Path) -> None:
    Path(path).write_text(format_edge_list(graph), encoding="utf-8")


def graphml_bytes(graph: LabeledGraph,
                  partition: Mapping[str, int] | None = None) -> bytes:
    """Attributed GraphML (nodes carry kind/safety, optionally community)."""
    root = ET.Element("graphml", xmlns="http://graphml.graphdrawing.org/xmlns")
    keys = [("d_kind", "node", "kind", "string"),
            ("d_safety", "node", "safety", "string"),
            ("d_relation", "edge", "relation", "string")]
    if partition is not None:
        keys.insert(2, ("d_community", "node", "community", "int"))
    for key_id, domain, name, kind in keys:
        ET.SubElement(root, "key", id=key_id, attrib={
            "for": domain, "attr.name": name, "attr.type": kind})
    graph_el = ET.SubElement(
        root, "graph", id="G",
        edgedefault="directed" if graph.directed else "undirected")
    for node_id, node in graph.nodes.items():
        node_el = ET.SubElement(graph_el, "node", id=node_id)
        ET.SubElement(node_el, "data", key="d_kind").text = str(node.kind)
        ET.SubElement(node_el, "data", key="d_safety").text = str(node.safety)
        if partition is not None:
            ET.SubElement(node_el, "data",
                          key="d_community").text = str(partition[node_id])
    for i, edge in enumerate(graph.edges):
        edge_el = ET.SubElement(graph_el, "edge", id=f"e{i}",
                                source=edge.src, target=edge.dst)
        ET.SubElement(edge_el, "data", key="d_relation").text = str(edge.relation)
    ET.indent(root)
    return ET.tostring(root, encoding="utf-8", xml_declaration=True) + b"\n"


def write_graphml(graph: LabeledGraph, path: str | Path,
                  partition: Mapping[str, int] | None = None) -> None:
    Path(path).write_bytes(graphml_bytes(graph, partition))
