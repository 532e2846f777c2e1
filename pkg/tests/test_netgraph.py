import xml.etree.ElementTree as ET

import numpy as np
import pytest

from safetube import synth
from safetube.corpus import CommentRecord, Safety
from safetube.detect import Grade, UploaderVerdict, detect_unsafe_commenters
from safetube.errors import LabelingError
from safetube.netgraph import (COMMENTER_TRANSITION_LABELS, Edge, GraphNode,
                               LabeledGraph, NodeKind, Relation,
                               TRANSITION_LABELS, TransitionMatrix,
                               build_behavior_graph, build_commenter_graph,
                               build_uploader_graph, build_video_graph,
                               format_edge_list, format_transitions,
                               graphml_bytes, transitions)
from util import (make_corpus, make_user, make_video,
                  random_labeled_graph)

SAFE, UNSAFE = Safety.SAFE, Safety.UNSAFE


def verdict(user_id, grade):
    return UploaderVerdict(user_id, 1, 0, 0.0, grade)


def test_video_graph_single_edge():
    corpus = make_corpus(videos=[make_video("v1", "u", related_ids=["v2"]),
                                 make_video("v2", "u")],
                         users=[make_user("u")])
    graph = build_video_graph(corpus, {"v1": SAFE, "v2": UNSAFE})
    assert set(graph.nodes) == {"v1", "v2"}
    assert graph.edges == [Edge("v1", "v2", Relation.RELATED)]


def test_video_graph_external_target_ignored(tmp_path):
    corpus = make_corpus(videos=[make_video("v1", "u")], users=[make_user("u")])
    corpus.videos["v1"].related_ids = ["elsewhere"]
    graph = build_video_graph(corpus, {"v1": SAFE}, keep_isolated=True)
    assert graph.edges == []
    assert set(graph.nodes) == {"v1"}


def test_video_graph_th_prefix():
    related = [f"v{i}" for i in range(2, 14)]
    videos = [make_video("v1", "u", related_ids=related)]
    videos += [make_video(f"v{i}", "u") for i in range(2, 14)]
    corpus = make_corpus(videos=videos, users=[make_user("u")])
    labels = {v: SAFE for v in corpus.videos}
    graph = build_video_graph(corpus, labels, th=10)
    assert len(graph.edges) == 10
    assert {e.dst for e in graph.edges} == set(related[:10])


def test_video_graph_requires_labels():
    corpus = make_corpus(videos=[make_video("v1", "u")], users=[make_user("u")])
    with pytest.raises(LabelingError, match="v1"):
        build_video_graph(corpus, {})


def test_video_graph_drops_isolated_by_default():
    videos = [make_video("v1", "u", related_ids=["v2"]), make_video("v2", "u"),
              make_video("v3", "u")]
    corpus = make_corpus(videos=videos, users=[make_user("u")])
    labels = {v: SAFE for v in corpus.videos}
    dropped = build_video_graph(corpus, labels)
    kept = build_video_graph(corpus, labels, keep_isolated=True)
    assert set(dropped.nodes) == {"v1", "v2"}
    assert set(kept.nodes) == {"v1", "v2", "v3"}


def test_video_graph_edges_invariant_to_corpus_order():
    corpus, truth = synth.generate(synth.preset("tiny", 5))
    labels = truth.video_labels
    forward = build_video_graph(corpus, labels)
    reordered = make_corpus(videos=list(corpus.videos.values())[::-1],
                            users=list(corpus.users.values()),
                            comments=corpus.comments)
    backward = build_video_graph(reordered, labels)
    assert set(forward.edges) == set(backward.edges)


def uploader_fixture():
    videos = [make_video("v1", "a", related_ids=["v2"]),
              make_video("v2", "b"),
              make_video("v3", "a", related_ids=["v2", "v1"])]
    corpus = make_corpus(videos=videos, users=[make_user("a"), make_user("b")])
    labels = {"v1": SAFE, "v2": UNSAFE, "v3": SAFE}
    return corpus, build_video_graph(corpus, labels, keep_isolated=True)


def test_uploader_graph_collapses_and_dedups():
    corpus, video_graph = uploader_fixture()
    verdicts = [verdict("a", Grade.SAFE), verdict("b", Grade.HIGH)]
    graph = build_uploader_graph(video_graph, corpus, verdicts)
    # v1->v2 and v3->v2 collapse to one a->b edge; v3->v1 is a self loop
    assert graph.edges == [Edge("a", "b", Relation.RELATED)]
    assert graph.nodes["a"].safety is SAFE
    assert graph.nodes["b"].safety is UNSAFE


def test_uploader_graph_missing_verdict():
    corpus, video_graph = uploader_fixture()
    with pytest.raises(LabelingError, match="b"):
        build_uploader_graph(video_graph, corpus, [verdict("a", Grade.SAFE)])


def commenter_fixture(n_comments_c1=4):
    users = [make_user("up"), make_user("c1", roles=("commenter",)),
             make_user("c2", roles=("commenter",))]
    videos = [make_video("v1", "up"), make_video("v2", "up")]
    comments = [CommentRecord(f"m{i}", "v1" if i % 2 else "v2", "c1", "words")
                for i in range(n_comments_c1)]
    comments += [CommentRecord("mx", "v1", "c2", "hello"),
                 CommentRecord("my", "v2", "c2", "there")]
    return make_corpus(videos=videos, users=users, comments=comments)


def test_commenter_graph_threshold():
    corpus = commenter_fixture(n_comments_c1=3)
    verdicts = [verdict("up", Grade.SAFE)]
    graph = build_commenter_graph(corpus, verdicts, set())
    assert graph.nodes == {}  # 3 comments < 4: excluded; uploader isolated
    corpus = commenter_fixture(n_comments_c1=4)
    graph = build_commenter_graph(corpus, verdicts, set())
    assert set(graph.nodes) == {"up", "c1"}
    assert graph.edges == [Edge("c1", "up", Relation.COMMENT)]
    assert graph.directed is False


def test_commenter_graph_safety_from_flags():
    corpus = commenter_fixture()
    verdicts = [verdict("up", Grade.SAFE)]
    graph = build_commenter_graph(corpus, verdicts, {"c1"})
    assert graph.nodes["c1"].safety is UNSAFE
    assert graph.nodes["up"].safety is SAFE


def test_commenter_graph_self_comment_no_edge():
    users = [make_user("dual", roles=("uploader", "commenter"))]
    videos = [make_video("v1", "dual")]
    comments = [CommentRecord(f"m{i}", "v1", "dual", "hi") for i in range(5)]
    corpus = make_corpus(videos=videos, users=users, comments=comments)
    graph = build_commenter_graph(corpus, [verdict("dual", Grade.SAFE)], set())
    assert graph.edges == []


def behavior_fixture():
    users = [make_user("a"), make_user("b"),
             make_user("c", roles=("commenter",))]
    videos = [make_video("v1", "a"), make_video("v2", "b")]
    corpus = make_corpus(videos=videos, users=users)
    corpus.users["a"].liked_video_ids = ["v2", "v1", "external_vid"]
    corpus.users["c"].subscribed_user_ids = ["a", "ghost_user"]
    corpus.users["b"].playlist_video_ids = ["v1"]
    verdicts = [verdict("a", Grade.SAFE), verdict("b", Grade.EXTREME)]
    return corpus, verdicts


def test_behavior_graph_edges_and_tallies():
    corpus, verdicts = behavior_fixture()
    graph, stats = build_behavior_graph(corpus, verdicts, set())
    assert set(graph.edges) == {Edge("a", "b", Relation.LIKE),
                                Edge("c", "a", Relation.SUBSCRIBE),
                                Edge("b", "a", Relation.PLAYLIST)}
    assert stats.self_refs[Relation.LIKE] == 1  # a likes own v1
    assert stats.external[Relation.LIKE] == 1
    assert stats.external[Relation.SUBSCRIBE] == 1
    assert graph.nodes["c"].kind is NodeKind.COMMENTER
    assert graph.nodes["b"].safety is UNSAFE


def test_behavior_graph_relation_subset():
    corpus, verdicts = behavior_fixture()
    graph, _ = build_behavior_graph(corpus, verdicts, set(),
                                    relations=(Relation.SUBSCRIBE,))
    assert set(graph.edges) == {Edge("c", "a", Relation.SUBSCRIBE)}


def test_behavior_graph_matches_planted_edges():
    corpus, truth = synth.generate(synth.preset("planted", 3))
    verdicts = synth.oracle_verdicts(corpus, truth)
    flags = detect_unsafe_commenters(corpus, synth.load_default_lexicon())
    graph, stats = build_behavior_graph(corpus, verdicts, flags)
    built = {(e.src, e.dst, e.relation.value) for e in graph.edges}
    assert built == set(truth.planted_edges)
    assert len(graph.edges) == len(truth.planted_edges)
    assert sum(stats.external.values()) == 0


def test_transitions_counts():
    nodes = {"s1": GraphNode(NodeKind.VIDEO, SAFE),
             "s2": GraphNode(NodeKind.VIDEO, SAFE),
             "u1": GraphNode(NodeKind.VIDEO, UNSAFE),
             "u2": GraphNode(NodeKind.VIDEO, UNSAFE)}
    edges = [Edge("s1", "s2", Relation.RELATED),
             Edge("s1", "u1", Relation.RELATED),
             Edge("u1", "u2", Relation.RELATED)]
    tm = transitions(LabeledGraph(nodes, edges))
    assert tm.as_tuple() == (1, 1, 0, 1)


def test_transitions_empty_graph():
    tm = transitions(LabeledGraph({}, []))
    assert tm.as_tuple() == (0, 0, 0, 0)


def test_transitions_match_recount_on_random_graphs():
    rng = np.random.default_rng(0)
    for _ in range(5):
        graph = random_labeled_graph(rng, 30, 200)
        tm = transitions(graph)
        counts = {"ss": 0, "su": 0, "us": 0, "uu": 0}
        for edge in graph.edges:
            key = ("u" if graph.nodes[edge.src].safety is UNSAFE else "s") + \
                  ("u" if graph.nodes[edge.dst].safety is UNSAFE else "s")
            counts[key] += 1
        assert tm.as_tuple() == (counts["ss"], counts["su"], counts["us"],
                                 counts["uu"])
        assert tm.total == len(graph.edges)


def test_transitions_isomorphism_invariance():
    rng = np.random.default_rng(4)
    graph = random_labeled_graph(rng, 20, 60)
    relabel = {name: f"z{i}" for i, name in enumerate(sorted(graph.nodes))}
    mapped = LabeledGraph(
        {relabel[n]: node for n, node in graph.nodes.items()},
        [Edge(relabel[e.src], relabel[e.dst], e.relation) for e in graph.edges],
        graph.directed)
    assert transitions(mapped).as_tuple() == transitions(graph).as_tuple()


def test_transition_labels_verbatim():
    assert TRANSITION_LABELS == ("Safe to Safe Transition",
                                 "Safe to Unsafe Transition",
                                 "Unsafe to Safe Transition",
                                 "Unsafe to Unsafe Transition")
    assert COMMENTER_TRANSITION_LABELS == ("Safe Commenter to Safe Uploader",
                                           "Unsafe Commenter to Safe Uploader",
                                           "Safe Commenter to Unsafe Uploader",
                                           "Unsafe Commenter to Unsafe Uploader")
    report = format_transitions(TransitionMatrix(1, 2, 3, 4))
    for label in TRANSITION_LABELS:
        assert label in report
    report = format_transitions(TransitionMatrix(1, 2, 3, 4), style="commenter")
    assert "Unsafe Commenter to Safe Uploader\t3" in report
    assert "Safe Commenter to Unsafe Uploader\t2" in report


def test_edge_list_format():
    corpus, _ = behavior_fixture()
    graph = LabeledGraph({"a": GraphNode(NodeKind.UPLOADER, SAFE),
                          "b": GraphNode(NodeKind.UPLOADER, UNSAFE)},
                         [Edge("a", "b", Relation.LIKE)])
    assert format_edge_list(graph) == "a\tb\tlike\n"


def test_graphml_parses_and_carries_attributes():
    nodes = {"a": GraphNode(NodeKind.UPLOADER, SAFE),
             "b": GraphNode(NodeKind.COMMENTER, UNSAFE)}
    graph = LabeledGraph(nodes, [Edge("b", "a", Relation.COMMENT)],
                         directed=False)
    data = graphml_bytes(graph, partition={"a": 0, "b": 0})
    root = ET.fromstring(data)
    ns = "{http://graphml.graphdrawing.org/xmlns}"
    graph_el = root.find(f"{ns}graph")
    assert graph_el.get("edgedefault") == "undirected"
    node_els = graph_el.findall(f"{ns}node")
    assert {n.get("id") for n in node_els} == {"a", "b"}
    texts = {d.text for n in node_els for d in n.findall(f"{ns}data")}
    assert {"uploader", "commenter", "safe", "unsafe", "0"} <= texts
    edge = graph_el.find(f"{ns}edge")
    assert (edge.get("source"), edge.get("target")) == ("b", "a")
