"""Model evaluation and hyperparameter search.

Confusion-matrix metrics over a declared positive class, a train/test
driver that fits vocabularies strictly on the training corpus, and a
deterministic grid-search runner over the vectorizer/model space.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from .corpus import Corpus, Label, Language, SplitSpec, split_corpus
from .errors import EmptyGrid, EmptyMatrix, LengthMismatch, UnlabeledCorpus
from .models import (
    LinearModel,
    LossKind,
    ModelKind,
    TrainConfig,
    decision_value,
    train,
)
from .preprocess import StopwordList, load_stopwords, preprocess_corpus
from .vectorize import (
    Analyzer,
    NgramRange,
    VectorizerConfig,
    Weighting,
    fit_vocabulary,
    union_transform,
)


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    tn: int
    fp: int
    fn: int
    positive_class: Label = Label.FAKE_NEWS_SPREADER

    def __post_init__(self) -> None:
        for name in ("tp", "tn", "fp", "fn"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    def reoriented(self, positive_class: Label) -> "ConfusionMatrix":
        """The same predictions counted with the other class as positive:
        tp and tn swap, fp and fn swap."""
        if positive_class == self.positive_class:
            return self
        return ConfusionMatrix(
            tp=self.tn, tn=self.tp, fp=self.fn, fn=self.fp, positive_class=positive_class
        )


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f1: float
    accuracy: float
    degenerate: bool = False


@dataclass(frozen=True)
class EvalReport:
    confusion: ConfusionMatrix
    precision: float
    recall: float
    f1: float
    accuracy: float
    degenerate: bool
    predictions: tuple[tuple[str, Label, Label], ...]  # (author_id, predicted, actual)
    ties: int = 0


@dataclass(frozen=True)
class PipelineConfig:
    """Everything needed to go from a corpus to a trained model: one or
    more vectorizer blocks (feature union) plus the classifier."""

    vectorizers: tuple[VectorizerConfig, ...]
    model_kind: ModelKind
    train: TrainConfig = field(default_factory=TrainConfig)

    def __post_init__(self) -> None:
        if not self.vectorizers:
            raise ValueError("pipeline needs at least one vectorizer block")

    def key(self) -> str:
        """Canonical description; doubles as the deterministic sort key."""
        blocks = "+".join(v.key() for v in self.vectorizers)
        return f"{self.model_kind.value}|{blocks}"


@dataclass(frozen=True)
class GridResult:
    config: PipelineConfig
    mean_accuracy: float
    reports: tuple[EvalReport, ...]


def confusion(
    preds: list[Label],
    truth: list[Label],
    positive_class: Label = Label.FAKE_NEWS_SPREADER,
) -> ConfusionMatrix:
    if len(preds) != len(truth):
        raise LengthMismatch(f"{len(preds)} predictions vs {len(truth)} labels")
    if not preds:
        raise EmptyMatrix("cannot build a confusion matrix from zero predictions")
    tp = tn = fp = fn = 0
    for predicted, actual in zip(preds, truth):
        if predicted == positive_class:
            if actual == positive_class:
                tp += 1
            else:
                fp += 1
        else:
            if actual == positive_class:
                fn += 1
            else:
                tn += 1
    return ConfusionMatrix(tp=tp, tn=tn, fp=fp, fn=fn, positive_class=positive_class)


def metrics(cm: ConfusionMatrix) -> Metrics:
    """Precision, recall, F1 and accuracy from a confusion matrix.

    Undefined ratios (zero denominators) come back as 0.0 with the
    ``degenerate`` flag raised rather than as an error.
    """
    if cm.total == 0:
        raise EmptyMatrix("confusion matrix is empty")
    degenerate = False
    if cm.tp + cm.fp > 0:
        precision = cm.tp / (cm.tp + cm.fp)
    else:
        precision, degenerate = 0.0, True
    if cm.tp + cm.fn > 0:
        recall = cm.tp / (cm.tp + cm.fn)
    else:
        recall, degenerate = 0.0, True
    if precision + recall > 0:
        f1 = 2 * precision * recall / (precision + recall)
    else:
        f1, degenerate = 0.0, True
    accuracy = (cm.tp + cm.tn) / cm.total
    return Metrics(
        precision=precision, recall=recall, f1=f1, accuracy=accuracy, degenerate=degenerate
    )


def fit_pipeline(
    train_corpus: Corpus,
    config: PipelineConfig,
    stopwords: StopwordList | None = None,
) -> LinearModel:
    """Preprocess the training corpus, fit every vectorizer block on it,
    and train the classifier. Nothing outside ``train_corpus`` is seen."""
    if not train_corpus.is_labeled:
        raise UnlabeledCorpus("training needs labels")
    if stopwords is None:
        stopwords = load_stopwords(train_corpus.language)
    streams = preprocess_corpus(train_corpus, stopwords)
    vocabularies = tuple(fit_vocabulary(streams, vc) for vc in config.vectorizers)
    X = [union_transform(stream, vocabularies) for stream in streams]
    y = [author.label for author in train_corpus]
    loss = LossKind.SQUARED_HINGE if config.model_kind is ModelKind.SVM else LossKind.LOGISTIC
    return train(
        X,
        y,
        replace(config.train, loss=loss),
        feature_spec=vocabularies,
        language=train_corpus.language,
    )


def evaluate_model(
    model: LinearModel,
    test_corpus: Corpus,
    positive_class: Label = Label.FAKE_NEWS_SPREADER,
    stopwords: StopwordList | None = None,
) -> EvalReport:
    """Score a labeled corpus with a trained model."""
    if not test_corpus.is_labeled:
        raise UnlabeledCorpus("evaluation needs labels")
    if stopwords is None:
        stopwords = load_stopwords(model.language)
    streams = preprocess_corpus(test_corpus, stopwords)
    predictions = []
    ties = 0
    for author, stream in zip(test_corpus, streams):
        value = decision_value(model, model.vectorize(stream))
        if value == 0.0:
            ties += 1
        predicted = Label.FAKE_NEWS_SPREADER if value > 0.0 else Label.TRUE_NEWS_SPREADER
        predictions.append((author.author_id, predicted, author.label))
    cm = confusion([p for _, p, _ in predictions], [a for _, _, a in predictions], positive_class)
    m = metrics(cm)
    return EvalReport(
        confusion=cm,
        precision=m.precision,
        recall=m.recall,
        f1=m.f1,
        accuracy=m.accuracy,
        degenerate=m.degenerate,
        predictions=tuple(predictions),
        ties=ties,
    )


def evaluate_pipeline(
    train_corpus: Corpus,
    test_corpus: Corpus,
    config: PipelineConfig,
    positive_class: Label = Label.FAKE_NEWS_SPREADER,
) -> EvalReport:
    """Fit on the training corpus only, then score the test corpus."""
    stopwords = load_stopwords(train_corpus.language)
    model = fit_pipeline(train_corpus, config, stopwords=stopwords)
    return evaluate_model(model, test_corpus, positive_class, stopwords=stopwords)


def _stratified_folds(corpus: Corpus, folds: int, seed: int) -> list[tuple[Corpus, Corpus]]:
    rng = random.Random(seed)
    buckets: list[list[str]] = [[] for _ in range(folds)]
    for label in (Label.TRUE_NEWS_SPREADER, Label.FAKE_NEWS_SPREADER):
        members = [a.author_id for a in corpus if a.label == label]
        rng.shuffle(members)
        for position, author_id in enumerate(members):
            buckets[position % folds].append(author_id)
    pairs = []
    for fold in range(folds):
        held_out = set(buckets[fold])
        train_part = Corpus(
            corpus.language, tuple(a for a in corpus if a.author_id not in held_out)
        )
        test_part = Corpus(corpus.language, tuple(a for a in corpus if a.author_id in held_out))
        pairs.append((train_part, test_part))
    return pairs


def grid_search(
    corpus: Corpus,
    grid: list[PipelineConfig],
    spec: SplitSpec = SplitSpec(),
    positive_class: Label = Label.FAKE_NEWS_SPREADER,
    folds: int = 1,
) -> list[GridResult]:
    """Evaluate every configuration and rank by mean accuracy.

    By default each configuration is scored on the single seeded
    train/test split given by ``spec``; pass ``folds > 1`` for
    stratified cross-validation instead. Ties in accuracy break on the
    lexicographic order of the configuration key.
    """
    if not grid:
        raise EmptyGrid("grid search needs at least one configuration")
    if not corpus.is_labeled:
        raise UnlabeledCorpus("grid search needs labels")
    if folds < 1:
        raise ValueError("folds must be >= 1")

    if folds == 1:
        pairs = [split_corpus(corpus, spec)]
    else:
        pairs = _stratified_folds(corpus, folds, spec.seed)

    results = []
    for config in grid:
        reports = tuple(
            evaluate_pipeline(train_part, test_part, config, positive_class)
            for train_part, test_part in pairs
        )
        mean_accuracy = sum(r.accuracy for r in reports) / len(reports)
        results.append(GridResult(config=config, mean_accuracy=mean_accuracy, reports=reports))
    results.sort(key=lambda r: (-r.mean_accuracy, r.config.key()))
    return results


# ----------------------------------------------------------------------
# Stock configurations.

FINAL_EN_CONFIG = PipelineConfig(
    vectorizers=(
        VectorizerConfig(
            analyzer=Analyzer.CHAR,
            range=NgramRange(1, 3),
            max_features=3000,
            min_df=1,
            weighting=Weighting.TFIDF,
        ),
    ),
    model_kind=ModelKind.SVM,
)

FINAL_ES_CONFIG = PipelineConfig(
    vectorizers=(
        VectorizerConfig(
            analyzer=Analyzer.CHAR,
            range=NgramRange(1, 3),
            max_features=5000,
            min_df=1,
            weighting=Weighting.TFIDF,
        ),
        VectorizerConfig(
            analyzer=Analyzer.CHAR,
            range=NgramRange(3, 7),
            max_features=50000,
            min_df=1,
            weighting=Weighting.COUNT,
        ),
    ),
    model_kind=ModelKind.LOGREG,
)


def final_config(language: Language) -> PipelineConfig:
    """The submitted per-language system configuration."""
    return FINAL_EN_CONFIG if language is Language.EN else FINAL_ES_CONFIG


GRID_NGRAM_RANGES = (NgramRange(1, 3), NgramRange(2, 7), NgramRange(3, 7))
GRID_MIN_DF = (1, 2, 3)
GRID_MAX_FEATURES = (1000, 3000, 5000, 10000, 50000)
GRID_WEIGHTINGS = (Weighting.TFIDF, Weighting.COUNT)
GRID_MODELS = (ModelKind.SVM, ModelKind.LOGREG)


def default_grid(
    ranges=GRID_NGRAM_RANGES,
    min_dfs=GRID_MIN_DF,
    max_features=GRID_MAX_FEATURES,
    weightings=GRID_WEIGHTINGS,
    models=GRID_MODELS,
) -> list[PipelineConfig]:
    """The full sweep over the documented hyperparameter ranges:
    n-gram range x min_df x max_features x weighting x model."""
    grid = []
    for weighting in weightings:
        for ngram_range in ranges:
            for cap in max_features:
                for min_df in min_dfs:
                    for model_kind in models:
                        grid.append(
                            PipelineConfig(
                                vectorizers=(
                                    VectorizerConfig(
                                        analyzer=Analyzer.CHAR,
                                        range=ngram_range,
                                        max_features=cap,
                                        min_df=min_df,
                                        weighting=weighting,
                                    ),
                                ),
                                model_kind=model_kind,
                            )
                        )
    grid.sort(key=lambda c: c.key())
    return grid


# ----------------------------------------------------------------------
# Deterministic plain-text rendering (no timestamps anywhere).


def render_report(report: EvalReport, heading: str = "") -> str:
    cm = report.confusion
    lines = []
    if heading:
        lines.append(heading)
    lines.append(f"positive class: {cm.positive_class.value} ({cm.positive_class.name.lower()})")
    lines.append("TP\tTN\tFP\tFN\tP\tR\tF1\tAcc")
    lines.append(
        f"{cm.tp}\t{cm.tn}\t{cm.fp}\t{cm.fn}\t"
        f"{report.precision:.4f}\t{report.recall:.4f}\t{report.f1:.4f}\t{report.accuracy:.4f}"
    )
    if report.degenerate:
        lines.append("note: one or more metrics had a zero denominator and report 0.0")
    if report.ties:
        lines.append(f"ties at the decision boundary: {report.ties}")
    return "\n".join(lines) + "\n"


def render_grid_tsv(results: list[GridResult]) -> str:
    """One tab-separated row per configuration, best first."""
    lines = ["rank\tmean_accuracy\tmodel\tfeatures\tsplits"]
    for rank, result in enumerate(results, start=1):
        blocks = "+".join(v.key() for v in result.config.vectorizers)
        lines.append(
            f"{rank}\t{result.mean_accuracy:.4f}\t{result.config.model_kind.value}\t"
            f"{blocks}\t{len(result.reports)}"
        )
    return "\n".join(lines) + "\n"


def render_grid_report(results: list[GridResult]) -> str:
    """Structured per-configuration blocks with full metrics."""
    sections = []
    for rank, result in enumerate(results, start=1):
        section = [f"config {rank}", f"key: {result.config.key()}",
                   f"mean_accuracy: {result.mean_accuracy:.4f}"]
        for position, report in enumerate(result.reports):
            cm = report.confusion
            section.append(
                f"split {position}: tp={cm.tp} tn={cm.tn} fp={cm.fp} fn={cm.fn} "
                f"p={report.precision:.4f} r={report.recall:.4f} "
                f"f1={report.f1:.4f} acc={report.accuracy:.4f}"
            )
        sections.append("\n".join(section))
    return "\n\n".join(sections) + "\n"
