import os
from pathlib import Path

import pytest

from spreader_profiler.corpus import AuthorDocument, Corpus, Label, Language
from spreader_profiler.preprocess import load_stopwords
from spreader_profiler.synth import generate_corpus_dir


def pan_data_dir():
    """Directory holding the real shared-task corpora (en/ and es/
    subdirectories), taken from $SPREADER_PAN_DATA. Tests needing the
    real data skip when it is unset or missing."""
    root = os.environ.get("SPREADER_PAN_DATA")
    if not root:
        return None
    path = Path(root)
    return path if path.is_dir() else None


@pytest.fixture(scope="session")
def en_stopwords():
    return load_stopwords(Language.EN)


@pytest.fixture(scope="session")
def es_stopwords():
    return load_stopwords(Language.ES)


@pytest.fixture(scope="session")
def synth_dir(tmp_path_factory):
    """The desk-scale corpus: 60 authors per class, 100 tweets each."""
    path = tmp_path_factory.mktemp("synth") / "en"
    generate_corpus_dir(path, authors_per_class=60, tweets_per_author=100, seed=7, language="en")
    return path


@pytest.fixture(scope="session")
def small_synth_dir(tmp_path_factory):
    """A quick corpus for CLI plumbing tests: 12 per class, 20 tweets."""
    path = tmp_path_factory.mktemp("synth-small") / "en"
    generate_corpus_dir(path, authors_per_class=12, tweets_per_author=20, seed=3, language="en")
    return path


def make_author(author_id: str, tweets, label=None) -> AuthorDocument:
    return AuthorDocument(author_id=author_id, tweets=tuple(tweets), label=label)


def make_corpus(pairs, language=Language.EN, labeled=True) -> Corpus:
    """pairs: iterable of (author_id, tweets, label_int_or_None)."""
    authors = []
    for author_id, tweets, label in pairs:
        authors.append(
            make_author(author_id, tweets, Label(label) if labeled and label is not None else None)
        )
    return Corpus(language=language, authors=tuple(authors))
