"""Deterministic text normalization and tokenization.

The pipeline applies, in this fixed order: URL removal, lowercasing,
punctuation-to-space replacement, digit removal, whitespace tokenization,
stopword removal. URL removal runs first because punctuation stripping
would destroy URL structure; punctuation becomes a space (not deleted) so
"don't" splits into the stopwords "don" and "t" instead of merging.

The stopword list ships with the package (data/stopwords.txt, one term per
line) so results are reproducible without any external resource.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .corpus import CorpusSlice

# http(s)/www URLs plus bare domains with a path; matched case-insensitively
# because removal happens before lowercasing.
_URL_RE = re.compile(
    r"(?i)\b(?:https?://\S+|www\.\S+|[a-z0-9][a-z0-9.\-]*\.[a-z]{2,}/\S*)"
)
# Any non-word non-space character is punctuation; underscore counts too.
# \w keeps Unicode letters, so non-ASCII text degrades gracefully while
# emoji and symbols are stripped.
_PUNCT_RE = re.compile(r"[^\w\s]|_")
_DIGIT_RE = re.compile(r"\d+")

DEFAULT_BOT_AUTHORS = frozenset({"AutoModerator"})


@lru_cache(maxsize=1)
def builtin_stopwords() -> frozenset[str]:
    """The stopword inventory shipped with the package."""
    text = resources.files("commhate").joinpath("data/stopwords.txt").read_text("utf-8")
    return frozenset(w for w in text.split() if w)


def load_stopwords(path: str) -> frozenset[str]:
    """Load a stopword list from a plain-text file, one term per line."""
    with open(path, encoding="utf-8") as fh:
        return frozenset(w.strip().lower() for w in fh if w.strip())


@dataclass(frozen=True)
class PreprocessConfig:
    stopwords: frozenset[str] = field(default_factory=builtin_stopwords)
    bot_authors: frozenset[str] = DEFAULT_BOT_AUTHORS
    strip_urls: bool = True
    strip_digits: bool = True
    strip_punct: bool = True
    lowercase: bool = True


def default_config() -> PreprocessConfig:
    return PreprocessConfig()


def preprocess(body: str, config: PreprocessConfig | None = None) -> list[str]:
    """Normalize and tokenize one comment body.

    Total function: any input (including empty) yields a token list, possibly
    empty. Output tokens never contain whitespace and, under the default
    config, never contain uppercase letters, digits, or stopwords.
    """
    cfg = config or default_config()
    text = body
    if cfg.strip_urls:
        text = _URL_RE.sub(" ", text)
    if cfg.lowercase:
        text = text.lower()
    if cfg.strip_punct:
        text = _PUNCT_RE.sub(" ", text)
    if cfg.strip_digits:
        text = _DIGIT_RE.sub("", text)
    tokens = text.split()
    if cfg.strip_digits:
        # \d only covers decimal digits; superscripts, fractions and other
        # numeric characters are word chars and need the slow per-char path.
        tokens = [
            tok if tok.isascii() else "".join(c for c in tok if not c.isnumeric())
            for tok in tokens
        ]
    return [tok for tok in tokens if tok and tok not in cfg.stopwords]


def filter_noise(slice_: CorpusSlice, config: PreprocessConfig | None = None) -> CorpusSlice:
    """Drop bot-authored and deleted comments, preserving order."""
    cfg = config or default_config()
    kept = tuple(
        c for c in slice_.comments if not c.deleted and c.author not in cfg.bot_authors
    )
    return CorpusSlice(kept, slice_.source_label, slice_.target_group)
