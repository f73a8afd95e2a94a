"""Fake-news-spreader author profiling from character n-grams."""

from .corpus import (
    AuthorDocument,
    Corpus,
    Label,
    Language,
    SplitSpec,
    load_corpus,
    parse_author_xml,
    parse_truth_file,
    render_author_xml,
    split_corpus,
)
from .preprocess import (
    StopwordList,
    TokenStream,
    load_stopwords,
    preprocess_author,
    preprocess_corpus,
)
from .vectorize import (
    Analyzer,
    NgramRange,
    SparseVector,
    VectorizerConfig,
    Vocabulary,
    Weighting,
    extract_char_ngrams,
    feature_union,
    fit_vocabulary,
    transform,
    union_transform,
)
from .models import (
    LinearModel,
    LossKind,
    ModelKind,
    TrainConfig,
    decision_value,
    load_model,
    predict,
    predict_proba,
    save_model,
    train,
    train_logreg,
    train_svm,
)
from .evaluation import (
    ConfusionMatrix,
    EvalReport,
    GridResult,
    PipelineConfig,
    confusion,
    default_grid,
    evaluate_model,
    evaluate_pipeline,
    final_config,
    fit_pipeline,
    grid_search,
    metrics,
)
from .analysis import ClassStats, CorpusStats, corpus_stats, render_stats_table

__version__ = "0.1.0"

__all__ = [
    "AuthorDocument",
    "Analyzer",
    "ClassStats",
    "ConfusionMatrix",
    "Corpus",
    "CorpusStats",
    "EvalReport",
    "GridResult",
    "Label",
    "Language",
    "LinearModel",
    "LossKind",
    "ModelKind",
    "NgramRange",
    "PipelineConfig",
    "SparseVector",
    "SplitSpec",
    "StopwordList",
    "TokenStream",
    "TrainConfig",
    "VectorizerConfig",
    "Vocabulary",
    "Weighting",
    "confusion",
    "corpus_stats",
    "decision_value",
    "default_grid",
    "evaluate_model",
    "evaluate_pipeline",
    "extract_char_ngrams",
    "feature_union",
    "final_config",
    "fit_pipeline",
    "fit_vocabulary",
    "grid_search",
    "load_corpus",
    "load_model",
    "load_stopwords",
    "metrics",
    "parse_author_xml",
    "parse_truth_file",
    "predict",
    "predict_proba",
    "preprocess_author",
    "preprocess_corpus",
    "render_author_xml",
    "render_stats_table",
    "save_model",
    "split_corpus",
    "train",
    "train_logreg",
    "train_svm",
    "transform",
    "union_transform",
]
