"""From-scratch classifiers (decision tree, random forest, k-NN) with a
scikit-learn estimator surface, plus dataset handling and evaluation.

All estimators follow the fit/predict/get_params protocol so they compose
with the wider ecosystem (clone, pipelines).  Training and prediction are
fully deterministic for a fixed ``random_state``.  Ties are always broken
toward the highest encoded class, which for safe=0/unsafe=1 labels means
toward unsafe.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, clone
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from . import features as feat
from .corpus import Corpus, Lexicon
from .errors import ParameterError, ParseError, SchemaError

MODEL_FORMAT_VERSION = 1


# --- dataset ---------------------------------------------------------------

@dataclass
class Dataset:
    """Feature matrix with labels; columns are named by ``feature_names``."""

    X: np.ndarray
    y: np.ndarray
    feature_names: tuple[str, ...]
    video_ids: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        self.X = np.asarray(self.X, dtype=np.float64)
        self.y = np.asarray(self.y, dtype=np.int64)
        if self.X.ndim != 2 or self.X.shape[0] != self.y.shape[0]:
            raise ParameterError("dataset rows and labels do not line up")
        if self.X.shape[1] != len(self.feature_names):
            raise ParameterError("dataset width does not match feature names")

    def __len__(self) -> int:
        return self.X.shape[0]

    def view(self, names: Iterable[str]) -> "Dataset":
        """Dataset restricted to the named feature columns (schema order)."""
        names = tuple(names)
        if not names:
            raise ParameterError("feature view is empty")
        idx = [self.feature_names.index(n) for n in names]
        ordered = tuple(self.feature_names[i] for i in sorted(idx))
        return Dataset(self.X[:, sorted(idx)], self.y, ordered, self.video_ids)

    @classmethod
    def from_corpus(cls, corpus: Corpus, lexicon: Lexicon,
                    comment_cap: int = feat.DEFAULT_COMMENT_CAP) -> "Dataset":
        """Rows for every labeled video, in corpus order."""
        labeled = [v for v in corpus.videos.values() if v.label is not None]
        rows = feat.extract_batch(labeled, corpus, lexicon, comment_cap)
        X = np.array([vec for _, vec in rows], dtype=np.float64)
        X = X.reshape(len(rows), feat.N_FEATURES)
        y = np.array([int(v.label) for v in labeled], dtype=np.int64)
        return cls(X, y, feat.FEATURE_NAMES, tuple(v.video_id for v in labeled))


def split(data: Dataset, train_fraction: float = 0.8, seed: int = 0,
          ) -> tuple[Dataset, Dataset]:
    """Stratified-by-label split after a seeded shuffle.

    Per-class train sizes are the rounded fraction, so they differ from the
    exact fraction by at most one row per class.
    """
    if not 0 < train_fraction < 1:
        raise ParameterError(f"train_fraction {train_fraction} not in (0, 1)")
    if len(data) == 0:
        raise ParameterError("cannot split an empty dataset")
    rng = np.random.default_rng(seed)
    labels = np.unique(data.y)
    if labels.size < 2:
        raise ParameterError("stratification failed: a class has 0 rows")
    train_idx: list[np.ndarray] = []
    for cls_label in labels:
        idx = rng.permutation(np.flatnonzero(data.y == cls_label))
        n_train = int(math.floor(train_fraction * idx.size + 0.5))
        train_idx.append(idx[:n_train])
    train_mask = np.zeros(len(data), dtype=bool)
    train_mask[np.concatenate(train_idx)] = True
    ids = data.video_ids

    def _take(mask: np.ndarray) -> Dataset:
        sel = np.flatnonzero(mask)
        sub_ids = tuple(ids[i] for i in sel) if ids is not None else None
        return Dataset(data.X[sel], data.y[sel], data.feature_names, sub_ids)

    return _take(train_mask), _take(~train_mask)


# --- decision tree ----------------------------------------------------------

@dataclass
class _Node:
    n: int
    proba: np.ndarray
    value: int
    feature: int | None = None
    threshold: float = 0.0
    left: "_Node | None" = None
    right: "_Node | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None


def _gini(counts: np.ndarray) -> float:
    n = counts.sum()
    if n == 0:
        return 0.0
    p = counts / n
    return float(1.0 - np.sum(p * p))


def _best_split(X: np.ndarray, y: np.ndarray, n_classes: int,
                feature_ids: np.ndarray, min_leaf: int):
    """(impurity, feature, threshold) of the best valid split, or None.

    Ties go to the lowest feature index, then the lowest threshold.
    """
    n = y.size
    best = None
    for f in feature_ids:
        order = np.argsort(X[:, f], kind="stable")
        xs = X[order, f]
        ys = y[order]
        bounds = np.flatnonzero(xs[1:] != xs[:-1])
        if bounds.size == 0:
            continue
        onehot = np.zeros((n, n_classes), dtype=np.float64)
        onehot[np.arange(n), ys] = 1.0
        prefix = np.cumsum(onehot, axis=0)
        n_left = (bounds + 1).astype(np.float64)
        n_right = n - n_left
        valid = (n_left >= min_leaf) & (n_right >= min_leaf)
        if not valid.any():
            continue
        counts_left = prefix[bounds]
        counts_right = prefix[-1] - counts_left
        g_left = 1.0 - np.sum((counts_left / n_left[:, None]) ** 2, axis=1)
        g_right = 1.0 - np.sum((counts_right / n_right[:, None]) ** 2, axis=1)
        weighted = (n_left * g_left + n_right * g_right) / n
        weighted[~valid] = np.inf
        i = int(np.argmin(weighted))
        impurity = float(weighted[i])
        threshold = float((xs[bounds[i]] + xs[bounds[i] + 1]) / 2.0)
        if best is None or impurity < best[0]:
            best = (impurity, int(f), threshold)
    return best


class DecisionTreeClassifier(ClassifierMixin, BaseEstimator):
    """Greedy binary CART-style tree minimizing Gini impurity.

    Thresholds are midpoints between consecutive sorted values; a row goes
    left when ``x[feature] <= threshold``.  With ``max_features`` set, each
    node considers a random feature subset (seeded by ``random_state``).
    """

    def __init__(self, max_depth: int | None = None, min_leaf: int = 1,
                 max_features: int | None = None,
                 random_state: int | np.random.Generator | None = None):
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.max_features = max_features
        self.random_state = random_state

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        if self.min_leaf < 1:
            raise ParameterError("min_leaf must be >= 1")
        self.classes_, y_enc = np.unique(y, return_inverse=True)
        self.n_features_in_ = X.shape[1]
        n_features = X.shape[1]
        if self.max_features is not None and not 1 <= self.max_features <= n_features:
            raise ParameterError(
                f"max_features {self.max_features} outside 1..{n_features}")
        rng = np.random.default_rng(self.random_state)
        self.root_ = self._grow(X, y_enc, depth=0, rng=rng)
        return self

    def _grow(self, X: np.ndarray, y: np.ndarray, depth: int,
              rng: np.random.Generator) -> _Node:
        n = y.size
        counts = np.bincount(y, minlength=self.classes_.size).astype(np.float64)
        node = _Node(n=n, proba=counts / n,
                     value=int(np.flatnonzero(counts == counts.max())[-1]))
        pure = np.count_nonzero(counts) <= 1
        depth_done = self.max_depth is not None and depth >= self.max_depth
        if pure or depth_done or n <= self.min_leaf:
            return node
        if self.max_features is None or self.max_features >= X.shape[1]:
            feature_ids = np.arange(X.shape[1])
        else:
            feature_ids = np.sort(rng.choice(X.shape[1], size=self.max_features,
                                             replace=False))
        found = _best_split(X, y, self.classes_.size, feature_ids, self.min_leaf)
        if found is None:
            return node
        _, f, t = found
        mask = X[:, f] <= t
        node.feature = f
        node.threshold = t
        node.left = self._grow(X[mask], y[mask], depth + 1, rng)
        node.right = self._grow(X[~mask], y[~mask], depth + 1, rng)
        return node

    def _leaf(self, row: np.ndarray) -> _Node:
        node = self.root_
        while not node.is_leaf:
            node = node.left if row[node.feature] <= node.threshold else node.right
        return node

    def predict(self, X):
        check_is_fitted(self, "root_")
        X = check_array(X)
        self._check_width(X)
        return self.classes_[np.array([self._leaf(row).value for row in X])]

    def predict_proba(self, X):
        check_is_fitted(self, "root_")
        X = check_array(X)
        self._check_width(X)
        return np.array([self._leaf(row).proba for row in X])

    def _check_width(self, X: np.ndarray) -> None:
        if X.shape[1] != self.n_features_in_:
            raise SchemaError(
                f"model expects {self.n_features_in_} features, got {X.shape[1]}")


# --- random forest ----------------------------------------------------------

class RandomForestClassifier(ClassifierMixin, BaseEstimator):
    """Bagged Gini trees with per-node feature subsampling.

    Each tree trains on a bootstrap sample (n rows with replacement) drawn
    from a per-tree generator spawned off ``random_state``, so models are
    reproducible and tree training could run in parallel.  Prediction is a
    majority vote; a tied vote goes to the highest class (unsafe).
    """

    def __init__(self, n_trees: int = 100, features_per_split: int | None = None,
                 max_depth: int | None = None, min_leaf: int = 1,
                 bootstrap: bool = True, random_state: int = 0):
        self.n_trees = n_trees
        self.features_per_split = features_per_split
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.bootstrap = bootstrap
        self.random_state = random_state

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        if self.n_trees < 1:
            raise ParameterError("n_trees must be >= 1")
        n_features = X.shape[1]
        per_split = self.features_per_split
        if per_split is None:
            per_split = math.ceil(math.sqrt(n_features))
        if not 1 <= per_split <= n_features:
            raise ParameterError(
                f"features_per_split {per_split} outside 1..{n_features}")
        self.classes_ = np.unique(y)
        self.n_features_in_ = n_features
        seeds = np.random.SeedSequence(self.random_state).spawn(self.n_trees)
        self.trees_: list[DecisionTreeClassifier] = []
        n = X.shape[0]
        for seq in seeds:
            rng = np.random.default_rng(seq)
            if self.bootstrap:
                idx = rng.integers(0, n, size=n)
                Xb, yb = X[idx], y[idx]
            else:
                Xb, yb = X, y
            tree = DecisionTreeClassifier(max_depth=self.max_depth,
                                          min_leaf=self.min_leaf,
                                          max_features=per_split,
                                          random_state=rng)
            tree.fit(Xb, yb)
            self.trees_.append(tree)
        return self

    def predict(self, X):
        check_is_fitted(self, "trees_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise SchemaError(
                f"model expects {self.n_features_in_} features, got {X.shape[1]}")
        votes = np.zeros((X.shape[0], self.classes_.size), dtype=np.int64)
        class_pos = {c: i for i, c in enumerate(self.classes_)}
        for tree in self.trees_:
            pred = tree.predict(X)
            for j, label in enumerate(pred):
                votes[j, class_pos[label]] += 1
        # argmax of reversed row picks the highest class on ties
        best = votes.shape[1] - 1 - np.argmax(votes[:, ::-1], axis=1)
        return self.classes_[best]


# --- k nearest neighbors ----------------------------------------------------

class KnnClassifier(ClassifierMixin, BaseEstimator):
    """k-nearest-neighbor vote over min/max-scaled features.

    Scaling maps each training feature to [0, 1]; constant features map to
    0.  ``k`` must be odd so two-class votes cannot tie.  Equal distances
    are broken by training-row order.
    """

    def __init__(self, k: int = 5):
        self.k = k

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        if self.k % 2 == 0:
            raise ParameterError(f"k must be odd, got {self.k}")
        if not 1 <= self.k <= X.shape[0]:
            raise ParameterError(f"k {self.k} outside 1..{X.shape[0]} training rows")
        self.classes_, self.y_ = np.unique(y, return_inverse=True)
        self.n_features_in_ = X.shape[1]
        self.min_ = X.min(axis=0)
        span = X.max(axis=0) - self.min_
        span[span == 0.0] = 1.0  # constant features scale to 0
        self.span_ = span
        self.X_ = (X - self.min_) / self.span_
        return self

    def _scale(self, X: np.ndarray) -> np.ndarray:
        return (X - self.min_) / self.span_

    def predict(self, X):
        check_is_fitted(self, "X_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise SchemaError(
                f"model expects {self.n_features_in_} features, got {X.shape[1]}")
        Q = self._scale(X)
        out = np.empty(Q.shape[0], dtype=np.int64)
        for i, q in enumerate(Q):
            dist = np.sqrt(((self.X_ - q) ** 2).sum(axis=1))
            nearest = np.argsort(dist, kind="stable")[:self.k]
            counts = np.bincount(self.y_[nearest], minlength=self.classes_.size)
            out[i] = int(np.flatnonzero(counts == counts.max())[-1])
        return self.classes_[out]


# --- evaluation -------------------------------------------------------------

@dataclass
class EvalReport:
    """Confusion counts with unsafe (label 1) as the positive class."""

    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 0.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 0.0

    @property
    def accuracy(self) -> float:
        total = self.tp + self.fp + self.fn + self.tn
        return (self.tp + self.tn) / total if total else 0.0

    @classmethod
    def from_predictions(cls, y_true: Sequence[int], y_pred: Sequence[int],
                         ) -> "EvalReport":
        y_true = np.asarray(y_true, dtype=np.int64)
        y_pred = np.asarray(y_pred, dtype=np.int64)
        return cls(tp=int(np.sum((y_true == 1) & (y_pred == 1))),
                   fp=int(np.sum((y_true == 0) & (y_pred == 1))),
                   fn=int(np.sum((y_true == 1) & (y_pred == 0))),
                   tn=int(np.sum((y_true == 0) & (y_pred == 0))))


def evaluate(model, test: Dataset) -> EvalReport:
    if len(test) == 0:
        raise ParameterError("cannot evaluate on an empty dataset")
    return EvalReport.from_predictions(test.y, model.predict(test.X))


CLASSIFIER_ORDER: tuple[str, ...] = ("Random Forest", "K-Nearest Neighbor",
                                     "Decision Tree")
VIEW_ORDER: tuple[str, ...] = ("video", "user", "comment", "all")
VIEW_LABELS: dict[str, str] = {"video": "Video-Level", "user": "User-Level",
                               "comment": "Comment-Level", "all": "All Features"}


@dataclass
class GridRow:
    classifier: str
    view: str
    report: EvalReport


def default_classifiers(seed: int = 0) -> dict[str, BaseEstimator]:
    return {
        "Random Forest": RandomForestClassifier(random_state=seed),
        "K-Nearest Neighbor": KnnClassifier(),
        "Decision Tree": DecisionTreeClassifier(),
    }


def compare_feature_views(data: Dataset, seed: int = 0,
                          train_fraction: float = 0.8,
                          classifiers: dict[str, BaseEstimator] | None = None,
                          views: Sequence[str] = VIEW_ORDER) -> list[GridRow]:
    """Classifier x feature-view grid evaluated on one shared split."""
    if classifiers is None:
        classifiers = default_classifiers(seed)
    train, test = split(data, train_fraction, seed)
    rows: list[GridRow] = []
    for name in CLASSIFIER_ORDER:
        if name not in classifiers:
            continue
        for view in views:
            names = feat.FEATURE_VIEWS[view]
            model = clone(classifiers[name])
            model.fit(train.view(names).X, train.y)
            rows.append(GridRow(name, view, evaluate(model, test.view(names))))
    return rows


# --- model persistence -------------------------------------------------------

def _node_to_dict(node: _Node) -> dict:
    if node.is_leaf:
        return {"n": node.n, "proba": node.proba.tolist(), "value": node.value}
    return {"n": node.n, "proba": node.proba.tolist(), "value": node.value,
            "feature": node.feature, "threshold": node.threshold,
            "left": _node_to_dict(node.left), "right": _node_to_dict(node.right)}


def _node_from_dict(doc: dict) -> _Node:
    node = _Node(n=doc["n"], proba=np.array(doc["proba"]), value=doc["value"])
    if "feature" in doc:
        node.feature = doc["feature"]
        node.threshold = doc["threshold"]
        node.left = _node_from_dict(doc["left"])
        node.right = _node_from_dict(doc["right"])
    return node


def _tree_to_dict(tree: DecisionTreeClassifier) -> dict:
    return {"classes": tree.classes_.tolist(),
            "n_features": tree.n_features_in_,
            "root": _node_to_dict(tree.root_)}


def _tree_from_dict(doc: dict, params: dict) -> DecisionTreeClassifier:
    tree = DecisionTreeClassifier(**params)
    tree.classes_ = np.array(doc["classes"])
    tree.n_features_in_ = doc["n_features"]
    tree.root_ = _node_from_dict(doc["root"])
    return tree


def dumps_model(model) -> str:
    """Serialize a fitted classifier as a self-describing JSON document."""
    if isinstance(model, RandomForestClassifier):
        doc = {"kind": "random_forest", "params": model.get_params(),
               "classes": model.classes_.tolist(),
               "n_features": model.n_features_in_,
               "trees": [_tree_to_dict(t) for t in model.trees_]}
    elif isinstance(model, DecisionTreeClassifier):
        params = model.get_params()
        if not isinstance(params.get("random_state"), (int, type(None))):
            params["random_state"] = None
        doc = {"kind": "decision_tree", "params": params, **_tree_to_dict(model)}
    elif isinstance(model, KnnClassifier):
        doc = {"kind": "knn", "params": model.get_params(),
               "classes": model.classes_.tolist(),
               "n_features": model.n_features_in_,
               "min": model.min_.tolist(), "span": model.span_.tolist(),
               "X": model.X_.tolist(), "y": model.y_.tolist()}
    else:
        raise ParameterError(f"cannot serialize model of type {type(model).__name__}")
    doc["format_version"] = MODEL_FORMAT_VERSION
    return json.dumps(doc, sort_keys=True) + "\n"


def save_model(model, path: str | Path) -> None:
    Path(path).write_text(dumps_model(model), encoding="utf-8")


def load_model(path: str | Path):
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    if doc.get("format_version") != MODEL_FORMAT_VERSION:
        raise SchemaError(f"unsupported model format_version "
                          f"{doc.get('format_version')!r}")
    kind = doc.get("kind")
    if kind == "decision_tree":
        params = {k: v for k, v in doc["params"].items() if k != "random_state"}
        return _tree_from_dict(doc, {**params, "random_state": None})
    if kind == "random_forest":
        model = RandomForestClassifier(**doc["params"])
        model.classes_ = np.array(doc["classes"])
        model.n_features_in_ = doc["n_features"]
        tree_params = {"max_depth": doc["params"]["max_depth"],
                       "min_leaf": doc["params"]["min_leaf"]}
        model.trees_ = [_tree_from_dict(t, tree_params) for t in doc["trees"]]
        return model
    if kind == "knn":
        model = KnnClassifier(**doc["params"])
        model.classes_ = np.array(doc["classes"])
        model.n_features_in_ = doc["n_features"]
        model.min_ = np.array(doc["min"])
        model.span_ = np.array(doc["span"])
        model.X_ = np.array(doc["X"])
        model.y_ = np.array(doc["y"], dtype=np.int64)
        return model
    raise SchemaError(f"unknown model kind {kind!r}")
