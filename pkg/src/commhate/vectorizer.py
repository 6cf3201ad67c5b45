"""Sparse bag-of-words vectors and a from-scratch tf-idf model.

Weighting is raw term count times a smoothed inverse document frequency,

    idf(t) = ln((1 + n_docs) / (1 + df(t))) + 1

followed by L2 normalization of each document vector. The vocabulary is the
set of training terms with df >= min_df, ordered lexicographically by
code point, so index assignment is reproducible across runs and platforms.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class SparseVector:
    """Immutable sparse vector: strictly increasing indices, positive values.

    Zeros are represented by absence, so stored values must be > 0; both the
    count and the tf-idf representations satisfy that by construction.
    """

    indices: tuple[int, ...]
    values: tuple[float, ...]
    dim: int

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.indices) != len(self.values):
            raise ValueError("indices and values must have equal length")
        prev = -1
        for i in self.indices:
            if i <= prev:
                raise ValueError("indices must be strictly increasing")
            prev = i
        if self.indices and (self.indices[0] < 0 or self.indices[-1] >= self.dim):
            raise ValueError(f"index out of range for dim={self.dim}")
        for v in self.values:
            if not math.isfinite(v) or v <= 0.0:
                raise ValueError("values must be positive and finite")

    @property
    def nnz(self) -> int:
        return len(self.indices)

    def norm(self) -> float:
        return math.sqrt(sum(v * v for v in self.values))

    def dot(self, other: "SparseVector") -> float:
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        total, i, j = 0.0, 0, 0
        while i < len(self.indices) and j < len(other.indices):
            a, b = self.indices[i], other.indices[j]
            if a == b:
                total += self.values[i] * other.values[j]
                i += 1
                j += 1
            elif a < b:
                i += 1
            else:
                j += 1
        return total

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.dim)
        if self.indices:
            dense[list(self.indices)] = self.values
        return dense


@dataclass(frozen=True)
class TfidfModel:
    """Fitted vocabulary with document frequencies. Fit once on training
    text only; apply to held-out text via transform."""

    vocabulary: tuple[str, ...]
    doc_freq: tuple[int, ...]
    n_docs: int
    min_df: int

    def __post_init__(self):
        if len(self.vocabulary) != len(self.doc_freq):
            raise ValueError("vocabulary and doc_freq must have equal length")
        if list(self.vocabulary) != sorted(self.vocabulary):
            raise ValueError("vocabulary must be sorted")

    @property
    def dim(self) -> int:
        return len(self.vocabulary)

    def index_of(self, term: str) -> int | None:
        lo, hi = 0, len(self.vocabulary)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.vocabulary[mid] < term:
                lo = mid + 1
            else:
                hi = mid
        if lo < len(self.vocabulary) and self.vocabulary[lo] == term:
            return lo
        return None

    def idf(self) -> np.ndarray:
        df = np.asarray(self.doc_freq, dtype=float)
        return np.log((1.0 + self.n_docs) / (1.0 + df)) + 1.0

    def _count_indices(self, tokens: Sequence[str]) -> tuple[list[int], list[int]]:
        counts: dict[int, int] = {}
        for tok in tokens:
            idx = self.index_of(tok)
            if idx is not None:
                counts[idx] = counts.get(idx, 0) + 1
        indices = sorted(counts)
        return indices, [counts[i] for i in indices]

    def transform_counts(self, tokens: Sequence[str]) -> SparseVector:
        """Raw term counts over the fitted vocabulary (no idf, no norm)."""
        indices, counts = self._count_indices(tokens)
        return SparseVector(tuple(indices), tuple(float(c) for c in counts), self.dim)

    def transform(self, tokens: Sequence[str]) -> SparseVector:
        """L2-normalized tf-idf vector. Documents whose terms are all out of
        vocabulary map to the zero vector rather than raising."""
        indices, counts = self._count_indices(tokens)
        if not indices:
            return SparseVector((), (), self.dim)
        idf = self.idf()
        weights = [c * idf[i] for i, c in zip(indices, counts)]
        scale = math.sqrt(sum(w * w for w in weights))
        return SparseVector(tuple(indices), tuple(w / scale for w in weights), self.dim)

    def transform_all(self, documents: Iterable[Sequence[str]]) -> list[SparseVector]:
        return [self.transform(doc) for doc in documents]

    def transform_counts_all(self, documents: Iterable[Sequence[str]]) -> list[SparseVector]:
        return [self.transform_counts(doc) for doc in documents]


def fit_tfidf(documents: Iterable[Sequence[str]], min_df: int = 2) -> TfidfModel:
    """Fit a tf-idf model on tokenized documents.

    df counts document presence, not term occurrences. Terms with
    df < min_df are dropped from the vocabulary entirely.
    """
    if min_df < 1:
        raise ValueError("min_df must be >= 1")
    df: dict[str, int] = {}
    n_docs = 0
    for doc in documents:
        n_docs += 1
        for term in set(doc):
            df[term] = df.get(term, 0) + 1
    if n_docs == 0:
        raise ValueError("cannot fit on an empty document collection")
    vocab = sorted(t for t, d in df.items() if d >= min_df)
    return TfidfModel(
        vocabulary=tuple(vocab),
        doc_freq=tuple(df[t] for t in vocab),
        n_docs=n_docs,
        min_df=min_df,
    )


# ---------------------------------------------------------------------------
# Persistence
# ---------------------------------------------------------------------------


def model_to_dict(model: TfidfModel) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "n_docs": model.n_docs,
        "min_df": model.min_df,
        "terms": [
            {"term": t, "df": d} for t, d in zip(model.vocabulary, model.doc_freq)
        ],
    }


def model_from_dict(obj: dict) -> TfidfModel:
    if obj.get("version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported vectorizer schema version: {obj.get('version')!r}")
    terms = obj["terms"]
    return TfidfModel(
        vocabulary=tuple(str(e["term"]) for e in terms),
        doc_freq=tuple(int(e["df"]) for e in terms),
        n_docs=int(obj["n_docs"]),
        min_df=int(obj["min_df"]),
    )


def save_tfidf(model: TfidfModel, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, ensure_ascii=False, sort_keys=True)
        fh.write("\n")


def load_tfidf(path: str) -> TfidfModel:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON: {exc}") from exc
    return model_from_dict(obj)


def model_fingerprint(model: TfidfModel) -> str:
    """SHA-256 of the canonical serialization; ties classifiers to the exact
    vocabulary they were trained against."""
    blob = json.dumps(model_to_dict(model), ensure_ascii=False, sort_keys=True,
                      separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()
