"""Detection, characterization and network analysis of child-unsafe content
promoters on a video platform, at desk scale on offline/synthetic corpora."""

__version__ = "0.1.0"

from .corpus import (CommentRecord, Corpus, Lexicon, Safety, Sentiment,
                     UserRecord, VideoRecord, load_corpus, load_lexicon,
                     write_corpus)
from .detect import (EcdfSummary, Grade, UploaderVerdict, characterize,
                     detect_unsafe_commenters, detect_unsafe_uploaders, grade)
from .features import FEATURE_NAMES, FEATURE_VIEWS, extract, extract_batch
from .learn import (Dataset, DecisionTreeClassifier, EvalReport, KnnClassifier,
                    RandomForestClassifier, compare_feature_views, evaluate,
                    load_model, save_model, split)
from .community import Partition, community_composition, louvain, modularity
from .netgraph import (LabeledGraph, Relation, TransitionMatrix,
                       build_behavior_graph, build_commenter_graph,
                       build_uploader_graph, build_video_graph, transitions)
from .synth import GroundTruth, SynthConfig, generate, preset

__all__ = [
    "CommentRecord", "Corpus", "Lexicon", "Safety", "Sentiment", "UserRecord",
    "VideoRecord", "load_corpus", "load_lexicon", "write_corpus",
    "EcdfSummary", "Grade", "UploaderVerdict", "characterize",
    "detect_unsafe_commenters", "detect_unsafe_uploaders", "grade",
    "FEATURE_NAMES", "FEATURE_VIEWS", "extract", "extract_batch",
    "Dataset", "DecisionTreeClassifier", "EvalReport", "KnnClassifier",
    "RandomForestClassifier", "compare_feature_views", "evaluate",
    "load_model", "save_model", "split",
    "Partition", "community_composition", "louvain", "modularity",
    "LabeledGraph", "Relation", "TransitionMatrix", "build_behavior_graph",
    "build_commenter_graph", "build_uploader_graph", "build_video_graph",
    "transitions",
    "GroundTruth", "SynthConfig", "generate", "preset",
]
