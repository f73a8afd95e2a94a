"""Tweet normalization pipeline.

Turns an author's 100 raw tweets into one stream of clean lowercase
tokens: concatenate, collapse whitespace, swap numbers and emojis for
placeholders, delete noise signs, squeeze character repeats, tokenize
Twitter-style, then drop short words and stopwords.

The corpus providers already replaced URLs, hashtags and user mentions
with ``#URL#``, ``#HASHTAG#`` and ``#USER#``; those placeholders (plus
our own ``#NUMBER#`` and ``#EMOJI#``) pass through every stage intact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from .corpus import AuthorDocument, Language

PLACEHOLDER_TOKENS = frozenset({"#URL#", "#HASHTAG#", "#USER#", "#NUMBER#", "#EMOJI#"})

NUMBER_PLACEHOLDER = "#NUMBER#"
EMOJI_PLACEHOLDER = "#EMOJI#"

# Characters treated as noise and removed before tokenization. '#' is
# deliberately absent: it delimits placeholders.
DEFAULT_SIGN_DELETION_SET = frozenset("+*/\\|~^=<>{}[]()")

# Unicode blocks counted as emoji, plus variation selector / zero-width
# joiner, which ride along with an adjacent emoji codepoint.
_EMOJI_RANGES = (
    "\U0001F300-\U0001F5FF"
    "\U0001F600-\U0001F64F"
    "\U0001F680-\U0001F6FF"
    "\U0001F900-\U0001F9FF"
    "☀-➿"
)
_EMOJI_JOINERS = "️‍"
EMOJI_RE = re.compile(f"[{_EMOJI_JOINERS}]*[{_EMOJI_RANGES}][{_EMOJI_JOINERS}]*")

_NUMBER_RE = re.compile(r"\d+(?:[.,]\d+)*")

# Run squeezing compares characters case-insensitively: the final
# lowercasing step must not be able to create new long runs (otherwise
# preprocessing would not be idempotent on its own output).
_REPEAT_RE = re.compile(r"(.)\1{2,}", re.DOTALL | re.IGNORECASE)

# Token shapes, tried in order: placeholder-like #word#, emoticons,
# words (apostrophes and combining marks allowed inside), any other
# single non-space character. Combining marks U+0300-U+036F belong to
# words because lowercasing can produce them (e.g. 'İ' → 'i̇').
_WORD_CHAR = r"[\ẁ-ͯ]"
TOKEN_RE = re.compile(
    r"#[A-Za-z]+#"
    r"|[<>]?[:;=][\-o\*']?[\)\]\(\[dDpP3/\\|{}]"
    r"|[\)\]\(\[dDpP/\\|{}][\-o\*']?[:;=][<>]?"
    r"|<3"
    rf"|{_WORD_CHAR}+(?:['’]{_WORD_CHAR}+)*"
    r"|\S"
)


@dataclass(frozen=True)
class TokenStream:
    """Preprocessed tokens for one author, plus their space-joined form
    (the surface that character n-grams are read from)."""

    author_id: str
    tokens: tuple[str, ...]

    @property
    def joined_text(self) -> str:
        return " ".join(self.tokens)


@dataclass(frozen=True)
class StopwordList:
    language: Language
    words: frozenset[str]

    def __post_init__(self) -> None:
        if not self.words:
            raise ValueError(f"stopword list for {self.language.value} is empty")


def load_stopwords(language: Language | str) -> StopwordList:
    """Load the bundled stopword list for a language.

    The lists live under ``resources/`` as plain UTF-8 text, one
    lowercase word per line, ``#`` starting a comment line. They are
    vendored copies of the standard NLTK-style lists so the package
    has no runtime download.
    """
    if isinstance(language, str):
        language = Language.parse(language)
    name = f"stopwords_{language.value}.txt"
    text = resources.files("spreader_profiler.resources").joinpath(name).read_text("utf-8")
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        words.add(line.lower())
    return StopwordList(language=language, words=frozenset(words))


def concatenate_tweets(doc: AuthorDocument) -> str:
    """Join all tweets of one author into a single text, in order."""
    return " ".join(doc.tweets)


def normalize_whitespace(text: str) -> str:
    """Collapse every run of Unicode whitespace to one ASCII space."""
    return " ".join(text.split())


def replace_numbers_and_emojis(text: str) -> str:
    """Replace digit runs with ``#NUMBER#`` and emoji with ``#EMOJI#``.

    A digit run may contain internal ``.``/``,`` group punctuation
    ("1,000" is one number). Variation selectors and zero-width
    joiners attached to an emoji are absorbed into its placeholder.
    """
    text = _NUMBER_RE.sub(NUMBER_PLACEHOLDER, text)
    return EMOJI_RE.sub(EMOJI_PLACEHOLDER, text)


def strip_irrelevant_signs(text: str, deletion_set: frozenset[str] = DEFAULT_SIGN_DELETION_SET) -> str:
    """Delete noise characters such as ``+ * / | ~``.

    ``#`` is never deleted (placeholder integrity) and apostrophes and
    sentence punctuation stay for the tokenizer to handle.
    """
    return text.translate({ord(c): None for c in deletion_set})


def squeeze_repeats(text: str) -> str:
    """Shorten runs of more than two repeated characters to exactly two.

    Repeats are matched case-insensitively ("LOOOOoool" squeezes like
    "loooooool") so that lowercasing afterwards cannot reintroduce a
    long run.
    """
    return _REPEAT_RE.sub(lambda m: m.group(0)[:2], text)


def tokenize(text: str) -> list[str]:
    """Split text into Twitter-style tokens.

    Keeps intact: ``#WORD#`` placeholders, common emoticons (``:)``,
    ``:-(``, ``:D``, ``;)``, …), and words with internal apostrophes
    ("don't"). Everything else that is not a word character becomes a
    single-character token.
    """
    return TOKEN_RE.findall(text)


def filter_and_lowercase(tokens: list[str], stopwords: StopwordList) -> list[str]:
    """Lowercase tokens and drop short words and stopwords.

    The five canonical placeholders are exempt from all three rules;
    every other token is lowercased, then dropped when shorter than
    three characters or present in the stopword list.
    """
    kept = []
    for token in tokens:
        if token in PLACEHOLDER_TOKENS:
            kept.append(token)
            continue
        lowered = token.lower()
        if len(lowered) < 3:
            continue
        if lowered in stopwords.words:
            continue
        kept.append(lowered)
    return kept


def preprocess_author(doc: AuthorDocument, stopwords: StopwordList) -> TokenStream:
    """Run the full normalization pipeline on one author.

    An author whose tokens are all filtered away yields an empty
    stream, which is legal.
    """
    text = concatenate_tweets(doc)
    text = normalize_whitespace(text)
    text = replace_numbers_and_emojis(text)
    text = strip_irrelevant_signs(text)
    text = squeeze_repeats(text)
    tokens = filter_and_lowercase(tokenize(text), stopwords)
    return TokenStream(author_id=doc.author_id, tokens=tuple(tokens))


def preprocess_corpus(corpus, stopwords: StopwordList) -> list[TokenStream]:
    """Preprocess every author of a corpus, keeping corpus order."""
    return [preprocess_author(doc, stopwords) for doc in corpus]
