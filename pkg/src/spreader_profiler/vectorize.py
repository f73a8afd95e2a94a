"""Character and token n-gram vectorization.

A vocabulary is fitted over the preprocessed token streams of the
training corpus: n-grams are counted, rare ones dropped via
``min_df``, the vocabulary optionally capped to the ``max_features``
most frequent terms, and feature indices assigned in lexicographic
term order. Documents then become sparse vectors, either raw counts
or L2-normalized TF-IDF with the smooth IDF ``ln((1+N)/(1+df)) + 1``.

Character n-grams are read from the space-joined token stream, so the
space is part of the alphabet and n-grams may straddle token
boundaries. The alphabet is Unicode codepoints, never bytes.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field

from .errors import EmptyVocabulary
from .preprocess import TokenStream

MAX_NGRAM_LENGTH = 16
MAX_FEATURE_CAP = 10**7


class Analyzer(enum.Enum):
    CHAR = "char"
    WORD_TOKEN = "word"


class Weighting(enum.Enum):
    TFIDF = "tfidf"
    COUNT = "count"


@dataclass(frozen=True)
class NgramRange:
    min_n: int
    max_n: int

    def __post_init__(self) -> None:
        if self.min_n < 1:
            raise ValueError(f"min_n must be >= 1, got {self.min_n}")
        if self.max_n < self.min_n:
            raise ValueError(f"max_n must be >= min_n, got [{self.min_n};{self.max_n}]")
        if self.max_n > MAX_NGRAM_LENGTH:
            raise ValueError(f"max_n above sanity bound {MAX_NGRAM_LENGTH}")

    def __str__(self) -> str:
        return f"[{self.min_n};{self.max_n}]"


@dataclass(frozen=True)
class VectorizerConfig:
    analyzer: Analyzer = Analyzer.CHAR
    range: NgramRange = NgramRange(1, 3)
    max_features: int | None = None
    min_df: int = 1
    weighting: Weighting = Weighting.TFIDF

    def __post_init__(self) -> None:
        if self.max_features is not None and not (1 <= self.max_features <= MAX_FEATURE_CAP):
            raise ValueError(f"max_features out of [1; {MAX_FEATURE_CAP}]: {self.max_features}")
        if self.min_df < 1:
            raise ValueError(f"min_df must be >= 1, got {self.min_df}")

    def key(self) -> str:
        """Canonical compact description, also used for deterministic sorting."""
        cap = self.max_features if self.max_features is not None else "all"
        return (
            f"{self.weighting.value},{self.analyzer.value},{self.range},"
            f"max_features={cap},min_df={self.min_df}"
        )


@dataclass(frozen=True)
class SparseVector:
    """Index/value pairs sorted by strictly increasing index."""

    entries: tuple[tuple[int, float], ...]
    dimension: int

    def __post_init__(self) -> None:
        last = -1
        for index, value in self.entries:
            if index <= last:
                raise ValueError("entries must be strictly increasing by index")
            if not (0 <= index < self.dimension):
                raise ValueError(f"index {index} outside dimension {self.dimension}")
            if value == 0:
                raise ValueError("zero-valued entries are not stored")
            last = index

    def norm(self) -> float:
        return math.sqrt(sum(v * v for _, v in self.entries))


@dataclass(frozen=True)
class Vocabulary:
    """A fitted term → index mapping plus the statistics behind it."""

    config: VectorizerConfig
    term_to_index: dict[str, int]
    document_frequency: dict[str, int]
    corpus_size: int
    idf: dict[str, float] | None = field(default=None)

    def __len__(self) -> int:
        return len(self.term_to_index)

    @property
    def dimension(self) -> int:
        return len(self.term_to_index)

    def terms(self) -> list[str]:
        """Terms in index order."""
        ordered = [""] * len(self.term_to_index)
        for term, index in self.term_to_index.items():
            ordered[index] = term
        return ordered


def extract_char_ngrams(text: str, ngram_range: NgramRange) -> Counter:
    """Count every contiguous codepoint n-gram of the configured lengths."""
    counts: Counter = Counter()
    size = len(text)
    for n in range(ngram_range.min_n, ngram_range.max_n + 1):
        if n > size:
            break
        counts.update(text[i : i + n] for i in range(size - n + 1))
    return counts


def extract_token_ngrams(tokens: tuple[str, ...], ngram_range: NgramRange) -> Counter:
    """Count token n-grams; multi-token grams join with single spaces."""
    counts: Counter = Counter()
    size = len(tokens)
    for n in range(ngram_range.min_n, ngram_range.max_n + 1):
        if n > size:
            break
        if n == 1:
            counts.update(tokens)
        else:
            counts.update(" ".join(tokens[i : i + n]) for i in range(size - n + 1))
    return counts


def _analyze(stream: TokenStream, config: VectorizerConfig) -> Counter:
    if config.analyzer is Analyzer.CHAR:
        return extract_char_ngrams(stream.joined_text, config.range)
    return extract_token_ngrams(stream.tokens, config.range)


def smooth_idf(corpus_size: int, df: int) -> float:
    return math.log((1 + corpus_size) / (1 + df)) + 1.0


def fit_vocabulary(streams: list[TokenStream], config: VectorizerConfig) -> Vocabulary:
    """Fit a vocabulary over the given streams.

    Terms below ``min_df`` documents are dropped first; if
    ``max_features`` is set, the survivors are ranked by total corpus
    term frequency (ties broken toward the lexicographically smaller
    term) and the top slice kept. Indices run lexicographically.
    """
    if not streams:
        raise ValueError("fit_vocabulary needs at least one stream")
    term_frequency: Counter = Counter()
    document_frequency: Counter = Counter()
    for stream in streams:
        doc_counts = _analyze(stream, config)
        term_frequency.update(doc_counts)
        document_frequency.update(doc_counts.keys())

    kept = [t for t, df in document_frequency.items() if df >= config.min_df]
    if config.max_features is not None and len(kept) > config.max_features:
        kept.sort(key=lambda t: (-term_frequency[t], t))
        kept = kept[: config.max_features]
    kept.sort()
    if not kept:
        raise EmptyVocabulary(f"no term survived min_df={config.min_df}")

    term_to_index = {term: index for index, term in enumerate(kept)}
    corpus_size = len(streams)
    idf = None
    if config.weighting is Weighting.TFIDF:
        idf = {term: smooth_idf(corpus_size, document_frequency[term]) for term in kept}
    return Vocabulary(
        config=config,
        term_to_index=term_to_index,
        document_frequency={term: document_frequency[term] for term in kept},
        corpus_size=corpus_size,
        idf=idf,
    )


def transform(stream: TokenStream, vocab: Vocabulary) -> SparseVector:
    """Vectorize one stream against a fitted vocabulary.

    Count weighting stores raw occurrence counts; TF-IDF weighting
    multiplies counts by the term IDF and L2-normalizes the whole
    vector. Unknown terms are ignored; a fully out-of-vocabulary
    stream becomes a legal empty vector.
    """
    doc_counts = _analyze(stream, vocab.config)
    pairs = []
    for term, count in doc_counts.items():
        index = vocab.term_to_index.get(term)
        if index is not None:
            pairs.append((index, float(count), term))
    pairs.sort()
    dimension = vocab.dimension
    if vocab.config.weighting is Weighting.COUNT or not pairs:
        return SparseVector(entries=tuple((i, v) for i, v, _ in pairs), dimension=dimension)
    weighted = [(i, v * vocab.idf[t]) for i, v, t in pairs]
    norm = math.sqrt(sum(v * v for _, v in weighted))
    entries = tuple((i, v / norm) for i, v in weighted)
    return SparseVector(entries=entries, dimension=dimension)


def feature_union(a: SparseVector, b: SparseVector) -> SparseVector:
    """Concatenate two feature blocks; indices of ``b`` shift by dim(a)."""
    shifted = tuple((index + a.dimension, value) for index, value in b.entries)
    return SparseVector(entries=a.entries + shifted, dimension=a.dimension + b.dimension)


def union_transform(stream: TokenStream, vocabs: tuple[Vocabulary, ...]) -> SparseVector:
    """Transform against each vocabulary block and concatenate."""
    vector = transform(stream, vocabs[0])
    for vocab in vocabs[1:]:
        vector = feature_union(vector, transform(stream, vocab))
    return vector
