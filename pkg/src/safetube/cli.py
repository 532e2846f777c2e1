"""Command-line driver wiring corpus -> features -> classifiers -> detection
-> graphs -> communities into reproducible runs.

Exit codes: 0 ok, 2 usage, 3 data integrity, 4 numeric/parameter, 5
internal.  Errors print one machine-parseable line to stderr.  All
randomness flows from ``--seed``; artifacts are written atomically and
contain no timestamps, so identical invocations produce byte-identical
output directories.  ``SAFETUBE_OUT`` overrides the output directory when
``--out`` is omitted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import community as communitymod
from . import detect as detectmod
from . import features as featuresmod
from . import learn as learnmod
from . import netgraph as netmod
from . import reports
from . import synth as synthmod
from .corpus import (Corpus, Lexicon, Safety, default_lexicon_path,
                     dumps_corpus, load_corpus, load_default_lexicon,
                     load_lexicon)
from .errors import (DATA_ERRORS, PARAMETER_ERRORS, LabelingError,
                     ParameterError, ParseError, SafeTubeError)

MANIFEST_FORMAT_VERSION = 1

GRAPH_KINDS = ("video", "uploader", "commenter", "behavior")


def _parse_thresholds(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise ParameterError(f"thresholds need 3 comma-separated values: {text!r}")
    try:
        t_mod, t_high, t_ext = (float(p) for p in parts)
    except ValueError as exc:
        raise ParameterError(f"thresholds must be numeric: {text!r}") from exc
    return t_mod, t_high, t_ext  # ordering validated by detect.grade


def _out_dir(args) -> Path:
    out = args.out or os.environ.get("SAFETUBE_OUT")
    if not out:
        raise ParameterError("no output directory: pass --out or set SAFETUBE_OUT")
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _load_lexicon(args) -> Lexicon:
    if getattr(args, "lexicon", None):
        return load_lexicon(args.lexicon)
    return load_default_lexicon()


def _write_manifest(out: Path, subcommand: str, options: dict) -> None:
    doc = {"format_version": MANIFEST_FORMAT_VERSION, "tool": "safetube",
           "tool_version": __version__, "subcommand": subcommand,
           "options": options}
    reports.atomic_write_text(out / "manifest.json",
                              json.dumps(doc, indent=2, sort_keys=True) + "\n")


# --- label / verdict plumbing -------------------------------------------------

def _resolve_labels(corpus: Corpus, model, lexicon: Lexicon,
                    comment_cap: int) -> dict[str, Safety]:
    """Corpus labels, with model predictions filling any gaps."""
    labels = {vid: v.label for vid, v in corpus.videos.items()
              if v.label is not None}
    missing = [v for vid, v in corpus.videos.items() if vid not in labels]
    if missing:
        if model is None:
            raise LabelingError(
                f"{len(missing)} videos are unlabeled and no model was given")
        rows = featuresmod.extract_batch(missing, corpus, lexicon, comment_cap)
        X = np.array([vec for _, vec in rows])
        for (vid, _), pred in zip(rows, model.predict(X)):
            labels[vid] = Safety(int(pred))
    return labels


def _resolve_verdicts(corpus: Corpus, model, lexicon: Lexicon,
                      labels: dict[str, Safety], video_cap: int,
                      thresholds, comment_cap: int):
    if model is not None:
        return detectmod.detect_unsafe_uploaders(
            corpus, model, lexicon, video_cap, thresholds, comment_cap)
    return detectmod.detect_unsafe_uploaders(
        corpus, lambda vid, _vec: int(labels[vid]), lexicon,
        video_cap, thresholds, comment_cap)


def _build_graph(kind: str, corpus: Corpus, lexicon: Lexicon, model, args):
    """(graph, behavior_stats | None) for the requested kind."""
    comment_cap = args.comment_cap
    labels = _resolve_labels(corpus, model, lexicon, comment_cap)
    if kind == "video":
        return netmod.build_video_graph(corpus, labels, args.th,
                                        args.keep_isolated), None
    thresholds = _parse_thresholds(args.thresholds)
    verdicts = _resolve_verdicts(corpus, model, lexicon, labels,
                                 args.video_cap, thresholds, comment_cap)
    flags = detectmod.detect_unsafe_commenters(corpus, lexicon)
    if kind == "uploader":
        video_graph = netmod.build_video_graph(corpus, labels, args.th,
                                               args.keep_isolated)
        return netmod.build_uploader_graph(video_graph, corpus, verdicts,
                                           args.keep_isolated), None
    if kind == "commenter":
        return netmod.build_commenter_graph(corpus, verdicts, flags,
                                            args.min_comments,
                                            args.keep_isolated), None
    if kind == "behavior":
        try:
            relations = tuple(netmod.Relation(r)
                              for r in args.relations.split(","))
        except ValueError as exc:
            raise ParameterError(f"unknown relation in {args.relations!r}") from exc
        return netmod.build_behavior_graph(corpus, verdicts, flags, relations,
                                           args.keep_isolated)
    raise ParameterError(f"unknown graph kind {kind!r}")


def _write_graph_artifacts(out: Path, kind: str, graph, stats) -> None:
    reports.atomic_write_text(out / f"{kind}_edges.tsv",
                              netmod.format_edge_list(graph))
    reports.atomic_write_bytes(out / f"{kind}.graphml",
                               netmod.graphml_bytes(graph))
    style = "commenter" if kind == "commenter" else "generic"
    reports.atomic_write_text(
        out / f"{kind}_transitions.txt",
        netmod.format_transitions(netmod.transitions(graph), style))
    if stats is not None:
        reports.atomic_write_text(out / f"{kind}_stats.txt",
                                  reports.format_behavior_stats(stats))


# --- subcommands --------------------------------------------------------------

def cmd_synth(args) -> int:
    out = _out_dir(args)
    cfg = synthmod.preset(args.preset, args.seed)
    corpus, truth = synthmod.generate(cfg)
    reports.atomic_write_text(out / "corpus.json", dumps_corpus(corpus))
    reports.atomic_write_text(out / "ground_truth.json", truth.dumps())
    reports.atomic_write_text(
        out / "lexicon.txt",
        default_lexicon_path().read_text(encoding="utf-8"))
    _write_manifest(out, "synth", {"preset": args.preset, "seed": args.seed})
    return 0


def cmd_extract(args) -> int:
    corpus = load_corpus(args.corpus)
    lexicon = _load_lexicon(args)
    rows = featuresmod.extract_batch(list(corpus.videos.values()), corpus,
                                     lexicon, args.comment_cap)
    labels = {vid: video.label for vid, video in corpus.videos.items()}
    reports.atomic_write_text(args.out,
                              featuresmod.format_feature_matrix(rows, labels))
    return 0


def _labeled_dataset(matrix_path: str) -> learnmod.Dataset:
    try:
        text = Path(matrix_path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{matrix_path}: {exc.strerror or exc}") from exc
    ids, X, labels = featuresmod.parse_feature_matrix(text)
    keep = [i for i, label in enumerate(labels) if label is not None]
    if not keep:
        raise ParameterError("feature matrix has no labeled rows")
    y = np.array([int(labels[i]) for i in keep])
    return learnmod.Dataset(X[keep], y, featuresmod.FEATURE_NAMES,
                            tuple(ids[i] for i in keep))


def _make_classifier(args):
    if args.classifier == "forest":
        return learnmod.RandomForestClassifier(
            n_trees=args.n_trees, features_per_split=args.features_per_split,
            max_depth=args.max_depth, min_leaf=args.min_leaf,
            random_state=args.seed)
    if args.classifier == "tree":
        return learnmod.DecisionTreeClassifier(max_depth=args.max_depth,
                                               min_leaf=args.min_leaf)
    if args.classifier == "knn":
        return learnmod.KnnClassifier(k=args.k)
    raise ParameterError(f"unknown classifier {args.classifier!r}")


def cmd_train(args) -> int:
    data = _labeled_dataset(args.matrix)
    view = featuresmod.FEATURE_VIEWS[args.features]
    model = _make_classifier(args)
    model.fit(data.view(view).X, data.y)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    learnmod.save_model(model, args.out)
    return 0


def cmd_eval(args) -> int:
    data = _labeled_dataset(args.matrix)
    views = (learnmod.VIEW_ORDER if args.features == "grid"
             else (args.features,))
    rows = learnmod.compare_feature_views(data, args.seed,
                                          args.train_fraction, views=views)
    reports.atomic_write_text(args.out, reports.format_eval_grid(rows))
    return 0


def cmd_detect(args) -> int:
    out = _out_dir(args)
    corpus = load_corpus(args.corpus)
    lexicon = _load_lexicon(args)
    model = learnmod.load_model(args.model)
    thresholds = _parse_thresholds(args.thresholds)
    verdicts = detectmod.detect_unsafe_uploaders(
        corpus, model, lexicon, args.video_cap, thresholds, args.comment_cap)
    flags = detectmod.detect_unsafe_commenters(corpus, lexicon)
    reports.atomic_write_text(out / "verdicts.tsv",
                              reports.format_verdicts(verdicts))
    reports.atomic_write_text(out / "commenters.txt",
                              reports.format_flagged_commenters(flags))
    for metric, (safe, unsafe) in detectmod.characterize(corpus, verdicts).items():
        reports.atomic_write_text(out / "ecdf" / f"{metric}_safe.tsv",
                                  reports.format_ecdf(safe))
        reports.atomic_write_text(out / "ecdf" / f"{metric}_unsafe.tsv",
                                  reports.format_ecdf(unsafe))
    return 0


def cmd_graph(args) -> int:
    out = _out_dir(args)
    corpus = load_corpus(args.corpus)
    lexicon = _load_lexicon(args)
    model = learnmod.load_model(args.model) if args.model else None
    graph, stats = _build_graph(args.kind, corpus, lexicon, model, args)
    _write_graph_artifacts(out, args.kind, graph, stats)
    return 0


def cmd_communities(args) -> int:
    out = _out_dir(args)
    corpus = load_corpus(args.corpus)
    lexicon = _load_lexicon(args)
    model = learnmod.load_model(args.model) if args.model else None
    graph, _stats = _build_graph(args.kind, corpus, lexicon, model, args)
    partition = communitymod.louvain(graph, args.seed)
    composition = communitymod.community_composition(graph, partition)
    reports.atomic_write_text(out / f"{args.kind}_partition.tsv",
                              reports.format_partition(partition))
    reports.atomic_write_text(out / f"{args.kind}_composition.tsv",
                              reports.format_composition(composition))
    reports.atomic_write_bytes(out / f"{args.kind}.graphml",
                               netmod.graphml_bytes(graph, partition.assignment))
    return 0


def cmd_report(args) -> int:
    run = Path(args.run)
    if not run.is_dir():
        raise ParameterError(f"run directory {args.run!r} does not exist")
    sections: list[str] = []

    def add_file(title: str, name: str) -> None:
        path = run / name
        if path.is_file():
            sections.append(f"== {title} ==\n{path.read_text(encoding='utf-8')}")

    add_file("Run manifest", "manifest.json")
    add_file("Classifier evaluation", "eval_grid.tsv")
    add_file("Uploader verdicts", "verdicts.tsv")
    for kind in GRAPH_KINDS:
        add_file(f"{kind} graph transitions", f"graphs/{kind}_transitions.txt")
        add_file(f"{kind} graph communities",
                 f"communities/{kind}_composition.tsv")
    if not sections:
        raise ParameterError(f"no artifacts found under {args.run!r}")
    reports.atomic_write_text(run / "report.txt", "\n".join(sections))
    return 0


def cmd_pipeline(args) -> int:
    out = _out_dir(args)
    seed = args.seed
    thresholds = _parse_thresholds(args.thresholds)
    cfg = synthmod.preset(args.preset, seed)
    corpus, truth = synthmod.generate(cfg)
    lexicon = load_default_lexicon()
    reports.atomic_write_text(out / "corpus.json", dumps_corpus(corpus))
    reports.atomic_write_text(out / "ground_truth.json", truth.dumps())
    reports.atomic_write_text(
        out / "lexicon.txt", default_lexicon_path().read_text(encoding="utf-8"))

    rows = featuresmod.extract_batch(list(corpus.videos.values()), corpus,
                                     lexicon, args.comment_cap)
    labels_by_vid = {vid: video.label for vid, video in corpus.videos.items()}
    reports.atomic_write_text(
        out / "features.tsv",
        featuresmod.format_feature_matrix(rows, labels_by_vid))

    labeled = [video for video in corpus.videos.values()
               if video.label is not None]
    vectors = dict(rows)
    X = np.array([vectors[v.video_id] for v in labeled])
    X = X.reshape(len(labeled), featuresmod.N_FEATURES)
    y = np.array([int(video.label) for video in labeled])
    data = learnmod.Dataset(X, y, featuresmod.FEATURE_NAMES,
                            tuple(v.video_id for v in labeled))

    grid = learnmod.compare_feature_views(data, seed)
    reports.atomic_write_text(out / "eval_grid.tsv",
                              reports.format_eval_grid(grid))

    train, _test = learnmod.split(data, args.train_fraction, seed)
    forest = learnmod.RandomForestClassifier(random_state=seed)
    forest.fit(train.X, train.y)
    reports.atomic_write_text(out / "model.json", learnmod.dumps_model(forest))

    verdicts = detectmod.detect_unsafe_uploaders(
        corpus, forest, lexicon, args.video_cap, thresholds, args.comment_cap)
    flags = detectmod.detect_unsafe_commenters(corpus, lexicon)
    reports.atomic_write_text(out / "verdicts.tsv",
                              reports.format_verdicts(verdicts))
    reports.atomic_write_text(out / "commenters.txt",
                              reports.format_flagged_commenters(flags))
    for metric, (safe, unsafe) in detectmod.characterize(corpus, verdicts).items():
        reports.atomic_write_text(out / "ecdf" / f"{metric}_safe.tsv",
                                  reports.format_ecdf(safe))
        reports.atomic_write_text(out / "ecdf" / f"{metric}_unsafe.tsv",
                                  reports.format_ecdf(unsafe))

    labels = {vid: label for vid, label in labels_by_vid.items()
              if label is not None}
    video_graph = netmod.build_video_graph(corpus, labels, args.th)
    graphs: dict[str, tuple] = {"video": (video_graph, None)}
    graphs["uploader"] = (netmod.build_uploader_graph(video_graph, corpus,
                                                      verdicts), None)
    graphs["commenter"] = (netmod.build_commenter_graph(corpus, verdicts, flags,
                                                        args.min_comments), None)
    graphs["behavior"] = netmod.build_behavior_graph(corpus, verdicts, flags)

    graph_dir = out / "graphs"
    community_dir = out / "communities"
    for kind, (graph, stats) in graphs.items():
        _write_graph_artifacts(graph_dir, kind, graph, stats)
        partition = communitymod.louvain(graph, seed)
        composition = communitymod.community_composition(graph, partition)
        reports.atomic_write_text(community_dir / f"{kind}_partition.tsv",
                                  reports.format_partition(partition))
        reports.atomic_write_text(community_dir / f"{kind}_composition.tsv",
                                  reports.format_composition(composition))

    _write_manifest(out, "pipeline", {
        "preset": args.preset, "seed": seed, "thresholds": list(thresholds),
        "train_fraction": args.train_fraction, "video_cap": args.video_cap,
        "comment_cap": args.comment_cap, "related_th": args.th,
        "min_comments": args.min_comments,
    })
    return 0


# --- parser -------------------------------------------------------------------

def _add_common_caps(p: argparse.ArgumentParser) -> None:
    p.add_argument("--video-cap", type=int, default=detectmod.DEFAULT_VIDEO_CAP,
                   help="max videos scored per uploader")
    p.add_argument("--comment-cap", type=int,
                   default=featuresmod.DEFAULT_COMMENT_CAP,
                   help="max comments aggregated per video")
    p.add_argument("--thresholds", default="0.3333333333333333,0.6666666666666666,0.9",
                   help="grade thresholds t_mod,t_high,t_ext")


def _add_graph_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kind", choices=GRAPH_KINDS, required=True)
    p.add_argument("--th", type=int, default=netmod.DEFAULT_RELATED_TH,
                   help="related-video suggestions considered per video")
    p.add_argument("--min-comments", type=int,
                   default=netmod.DEFAULT_MIN_COMMENTS,
                   help="comment threshold for commenter nodes")
    p.add_argument("--relations", default="like,subscribe,playlist",
                   help="behavior graph relations (comma-separated)")
    p.add_argument("--keep-isolated", action="store_true",
                   help="keep nodes that end up with no edges")
    p.add_argument("--model", help="model file for predicting unlabeled videos")
    _add_common_caps(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="safetube",
        description="Detect and analyze unsafe-content promoters on an "
                    "offline video-platform corpus.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("synth", help="generate a synthetic corpus")
    p.add_argument("--preset", choices=synthmod.PRESET_NAMES, default="tiny")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("extract", help="write the feature matrix for a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--lexicon")
    p.add_argument("--comment-cap", type=int,
                   default=featuresmod.DEFAULT_COMMENT_CAP)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("train", help="train one classifier on a feature matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--features", choices=tuple(featuresmod.FEATURE_VIEWS),
                   default="all")
    p.add_argument("--classifier", choices=("forest", "tree", "knn"),
                   default="forest")
    p.add_argument("--n-trees", type=int, default=100)
    p.add_argument("--features-per-split", type=int, default=None)
    p.add_argument("--max-depth", type=int, default=None)
    p.add_argument("--min-leaf", type=int, default=1)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="classifier x feature-view evaluation grid")
    p.add_argument("--matrix", required=True)
    p.add_argument("--features",
                   choices=tuple(featuresmod.FEATURE_VIEWS) + ("grid",),
                   default="grid")
    p.add_argument("--train-fraction", type=float, default=0.8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("detect", help="grade uploaders and flag commenters")
    p.add_argument("--corpus", required=True)
    p.add_argument("--lexicon")
    p.add_argument("--model", required=True)
    p.add_argument("--out")
    _add_common_caps(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("graph", help="build one safety-labeled graph")
    p.add_argument("--corpus", required=True)
    p.add_argument("--lexicon")
    p.add_argument("--out")
    _add_graph_opts(p)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("communities", help="graph plus Louvain communities")
    p.add_argument("--corpus", required=True)
    p.add_argument("--lexicon")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    _add_graph_opts(p)
    p.set_defaults(func=cmd_communities)

    p = sub.add_parser("report", help="aggregate run artifacts into report.txt")
    p.add_argument("--run", required=True)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("pipeline", help="full synth-to-communities run")
    p.add_argument("--preset", choices=synthmod.PRESET_NAMES, default="tiny")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--train-fraction", type=float, default=0.8)
    p.add_argument("--th", type=int, default=netmod.DEFAULT_RELATED_TH)
    p.add_argument("--min-comments", type=int,
                   default=netmod.DEFAULT_MIN_COMMENTS)
    p.add_argument("--out")
    _add_common_caps(p)
    p.set_defaults(func=cmd_pipeline)

    return parser


def _origin_module(exc: BaseException) -> str:
    tb = exc.__traceback__
    module = "cli"
    while tb is not None:
        name = tb.tb_frame.f_globals.get("__name__", "")
        if name.startswith("safetube."):
            module = name.split(".", 1)[1]
        tb = tb.tb_next
    return module


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - every failure maps to an exit code
        if isinstance(exc, DATA_ERRORS):
            code = 3
        elif isinstance(exc, PARAMETER_ERRORS):
            code = 4
        elif isinstance(exc, SafeTubeError):
            code = 5
        else:
            code = 5
        message = " ".join(str(exc).split())
        print(f"safetube: error code={code} module={_origin_module(exc)} "
              f"kind={type(exc).__name__} msg={message!r}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
