"""Independent reference implementations used as test oracles.

Everything here is written naively (plain loops, no shared code with the
package) so the tests check the real implementations against a second,
obviously-correct route.
"""

from __future__ import annotations

import math

import numpy as np

from safetube.corpus import (Corpus, Lexicon, Safety, UserRecord,
                             VideoRecord)
from safetube.lexical import EMOTICONS
from safetube.netgraph import Edge, GraphNode, LabeledGraph, NodeKind, Relation


def make_lexicon(bad=("stupid", "idiot"), positive=("good", "great"),
                 negative=("bad", "awful")) -> Lexicon:
    return Lexicon(bad_words=frozenset(bad), positive_words=frozenset(positive),
                   negative_words=frozenset(negative))


def make_video(video_id, uploader_id, **kwargs) -> VideoRecord:
    return VideoRecord(video_id=video_id, uploader_id=uploader_id, **kwargs)


def make_user(user_id, roles=("uploader",), **kwargs) -> UserRecord:
    return UserRecord(user_id=user_id, roles=frozenset(roles), **kwargs)


def make_corpus(videos=(), users=(), comments=()) -> Corpus:
    corpus = Corpus(videos={v.video_id: v for v in videos},
                    users={u.user_id: u for u in users},
                    comments=list(comments))
    corpus.validate()
    return corpus


# --- lexical references -------------------------------------------------------

def ref_bad_word_count(tokens, lexicon) -> int:
    count = 0
    for token in tokens:
        while token and token[-1] in ".,!?;:":
            token = token[:-1]
        if token in lexicon.bad_words:
            count += 1
    return count


def _ref_scan(text: str, patterns: list[str]) -> int:
    patterns = sorted(patterns, key=len, reverse=True)
    count = 0
    i = 0
    while i < len(text):
        for pattern in patterns:
            if text[i:i + len(pattern)] == pattern:
                count += 1
                i += len(pattern)
                break
        else:
            i += 1
    return count


def ref_count_marks(text: str) -> tuple[int, int, int]:
    questions = sum(1 for ch in text if ch == "?")
    lower = text.lower()
    links = _ref_scan(lower, ["http://", "https://", "www."])
    emoticons = _ref_scan(text, list(EMOTICONS))
    return questions, links, emoticons


# --- evaluation reference -----------------------------------------------------

def ref_confusion(y_true, y_pred) -> tuple[int, int, int, int]:
    tp = fp = fn = tn = 0
    for truth, pred in zip(y_true, y_pred):
        if truth == 1 and pred == 1:
            tp += 1
        elif truth == 0 and pred == 1:
            fp += 1
        elif truth == 1 and pred == 0:
            fn += 1
        else:
            tn += 1
    return tp, fp, fn, tn


# --- decision tree reference ---------------------------------------------------

def _ref_gini(labels, n_classes) -> float:
    n = len(labels)
    counts = [0.0] * n_classes
    for label in labels:
        counts[label] += 1.0
    return 1.0 - sum((c / n) ** 2 for c in counts)


def _ref_best_split(rows, labels, n_classes, min_leaf):
    n = len(rows)
    d = len(rows[0])
    best = None
    for f in range(d):
        values = sorted(set(row[f] for row in rows))
        for lo, hi in zip(values, values[1:]):
            threshold = (lo + hi) / 2.0
            left = [i for i in range(n) if rows[i][f] <= threshold]
            right = [i for i in range(n) if rows[i][f] > threshold]
            if len(left) < min_leaf or len(right) < min_leaf:
                continue
            g_left = _ref_gini([labels[i] for i in left], n_classes)
            g_right = _ref_gini([labels[i] for i in right], n_classes)
            weighted = (len(left) * g_left + len(right) * g_right) / n
            if best is None or weighted < best[0]:
                best = (weighted, f, threshold)
    return best


class RefTree:
    """Plain-loop greedy Gini tree with the same documented conventions."""

    def __init__(self, max_depth=None, min_leaf=1):
        self.max_depth = max_depth
        self.min_leaf = min_leaf

    def fit(self, X, y):
        self.classes = sorted(set(int(v) for v in y))
        index = {c: i for i, c in enumerate(self.classes)}
        rows = [list(map(float, row)) for row in X]
        labels = [index[int(v)] for v in y]
        self.root = self._grow(rows, labels, 0)
        return self

    def _leaf(self, labels):
        counts = [0] * len(self.classes)
        for label in labels:
            counts[label] += 1
        best = max(range(len(counts)), key=lambda i: (counts[i], i))
        return ("leaf", best)

    def _grow(self, rows, labels, depth):
        pure = len(set(labels)) <= 1
        depth_done = self.max_depth is not None and depth >= self.max_depth
        if pure or depth_done or len(rows) <= self.min_leaf:
            return self._leaf(labels)
        found = _ref_best_split(rows, labels, len(self.classes), self.min_leaf)
        if found is None:
            return self._leaf(labels)
        _, f, t = found
        left_i = [i for i in range(len(rows)) if rows[i][f] <= t]
        right_i = [i for i in range(len(rows)) if rows[i][f] > t]
        return ("split", f, t,
                self._grow([rows[i] for i in left_i],
                           [labels[i] for i in left_i], depth + 1),
                self._grow([rows[i] for i in right_i],
                           [labels[i] for i in right_i], depth + 1))

    def predict_one(self, row):
        node = self.root
        while node[0] == "split":
            _, f, t, left, right = node
            node = left if row[f] <= t else right
        return self.classes[node[1]]

    def predict(self, X):
        return [self.predict_one(list(map(float, row))) for row in X]


# --- knn reference --------------------------------------------------------------

def ref_knn_predict(train_X, train_y, queries, k):
    train_X = [list(map(float, row)) for row in train_X]
    d = len(train_X[0])
    mins = [min(row[j] for row in train_X) for j in range(d)]
    maxs = [max(row[j] for row in train_X) for j in range(d)]

    def scale(row):
        out = []
        for j in range(d):
            span = maxs[j] - mins[j]
            out.append((row[j] - mins[j]) / span if span else 0.0)
        return out

    scaled = [scale(row) for row in train_X]
    preds = []
    for query in queries:
        q = scale(list(map(float, query)))
        dists = []
        for i, row in enumerate(scaled):
            dist = math.sqrt(sum((a - b) ** 2 for a, b in zip(row, q)))
            dists.append((dist, i))
        dists.sort()
        votes = {}
        for _, i in dists[:k]:
            votes[int(train_y[i])] = votes.get(int(train_y[i]), 0) + 1
        preds.append(max(votes, key=lambda c: (votes[c], c)))
    return preds


# --- graph helpers ---------------------------------------------------------------

def random_labeled_graph(rng: np.random.Generator, n_nodes: int,
                         n_edges: int) -> LabeledGraph:
    nodes = {f"n{i}": GraphNode(NodeKind.UPLOADER,
                                Safety(int(rng.integers(2))))
             for i in range(n_nodes)}
    names = list(nodes)
    edges = []
    seen = set()
    attempts = 0
    while len(edges) < n_edges and attempts < n_edges * 50:
        attempts += 1
        a, b = rng.integers(n_nodes), rng.integers(n_nodes)
        if a == b:
            continue
        key = (int(a), int(b))
        if key in seen:
            continue
        seen.add(key)
        edges.append(Edge(names[int(a)], names[int(b)], Relation.RELATED))
    return LabeledGraph(nodes, edges, directed=True)


def graph_from_pairs(pairs, n_nodes=None, safety=None) -> LabeledGraph:
    names = sorted({a for a, _ in pairs} | {b for _, b in pairs})
    if n_nodes is not None:
        names = [f"n{i}" for i in range(n_nodes)]
    nodes = {}
    for name in names:
        node_safety = Safety.SAFE if safety is None else safety.get(name, Safety.SAFE)
        nodes[name] = GraphNode(NodeKind.UPLOADER, node_safety)
    edges = [Edge(a, b, Relation.RELATED) for a, b in pairs]
    return LabeledGraph(nodes, edges, directed=True)


def ref_modularity(graph: LabeledGraph, assignment) -> float:
    """Naive O(n*m) recount of Q straight from its definition."""
    m = len(graph.edges)
    if m == 0:
        return 0.0
    q = 0.0
    for c in sorted(set(assignment.values())):
        members = {n for n in graph.nodes if assignment[n] == c}
        e_c = sum(1 for e in graph.edges if e.src in members and e.dst in members)
        d_c = sum((e.src in members) + (e.dst in members) for e in graph.edges)
        q += e_c / m - (d_c / (2.0 * m)) ** 2
    return q


def all_partitions(items):
    """Every set partition of ``items`` (Bell number growth; keep items few)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in all_partitions(rest):
        for i in range(len(partition)):
            yield partition[:i] + [[first] + partition[i]] + partition[i + 1:]
        yield [[first]] + partition


def brute_force_best_modularity(graph: LabeledGraph) -> float:
    best = -math.inf
    for blocks in all_partitions(list(graph.nodes)):
        assignment = {}
        for c, block in enumerate(blocks):
            for node in block:
                assignment[node] = c
        best = max(best, ref_modularity(graph, assignment))
    return best
