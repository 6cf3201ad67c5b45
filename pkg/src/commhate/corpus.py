"""Comment corpora: JSONL ingestion, sampling, dataset assembly, fold splits.

Reads the monthly Reddit dump format (one JSON object per line, optionally
gzip-compressed) as well as generic JSONL from other platforms. Sampling
uses CPython's Mersenne Twister (``random.Random``) with explicit partial
Fisher-Yates selection, so every draw is a pure function of (input, seed).
"""

from __future__ import annotations

import gzip
import hashlib
import json
import random
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Iterator

POSITIVE = "positive"
NEGATIVE = "negative"

_DELETED_SENTINELS = ("[deleted]", "[removed]")


class Platform(str, Enum):
    REDDIT = "reddit"
    VOAT = "voat"
    FORUM = "forum"
    OTHER = "other"


class SourceLabel(str, Enum):
    HATE = "hate"
    SUPPORT = "support"
    BACKGROUND = "background"


@dataclass(frozen=True)
class Comment:
    """One post or comment together with its community of origin."""

    id: str
    body: str
    community: str
    platform: Platform = Platform.OTHER
    created_at: int = 0
    author: str = ""
    deleted: bool = False

    def __post_init__(self):
        if not self.id:
            raise ValueError("comment id must be non-empty")
        if not self.community:
            raise ValueError(f"comment {self.id!r}: community must be non-empty")
        if self.body in _DELETED_SENTINELS and not self.deleted:
            object.__setattr__(self, "deleted", True)
        if not self.body and not self.deleted:
            raise ValueError(f"comment {self.id!r}: empty body on a non-deleted record")


@dataclass(frozen=True)
class CorpusSlice:
    """An ordered run of comments sharing one source label."""

    comments: tuple[Comment, ...]
    source_label: SourceLabel = SourceLabel.BACKGROUND
    target_group: str = ""

    def __post_init__(self):
        object.__setattr__(self, "comments", tuple(self.comments))

    def __len__(self) -> int:
        return len(self.comments)

    def communities(self) -> set[str]:
        return {c.community for c in self.comments}


@dataclass(frozen=True)
class LabeledDataset:
    """Tokenized documents with binary labels and per-document provenance."""

    documents: tuple[tuple[str, ...], ...]
    labels: tuple[str, ...]
    provenance: tuple[tuple[str, str], ...]  # (comment id, source community)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "documents", tuple(tuple(d) for d in self.documents))
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "provenance", tuple(tuple(p) for p in self.provenance))
        if not (len(self.documents) == len(self.labels) == len(self.provenance)):
            raise ValueError("documents, labels and provenance must have equal length")
        bad = {l for l in self.labels} - {POSITIVE, NEGATIVE}
        if bad:
            raise ValueError(f"unknown labels: {sorted(bad)}")

    def __len__(self) -> int:
        return len(self.documents)

    def counts(self) -> tuple[int, int]:
        n_pos = sum(1 for l in self.labels if l == POSITIVE)
        return n_pos, len(self.labels) - n_pos

    def subset(self, indices: Iterable[int]) -> "LabeledDataset":
        idx = list(indices)
        return LabeledDataset(
            tuple(self.documents[i] for i in idx),
            tuple(self.labels[i] for i in idx),
            tuple(self.provenance[i] for i in idx),
            self.seed,
        )


# ---------------------------------------------------------------------------
# JSONL ingestion
# ---------------------------------------------------------------------------

# Reddit dumps use subreddit/created_utc; generic files use the field names
# of Comment itself. Unknown fields are ignored either way.
_COMMUNITY_KEYS = ("community", "subreddit", "subverse", "board")
_CREATED_KEYS = ("created_at", "created_utc")


def comment_from_record(obj: dict, platform: Platform) -> Comment:
    """Map one parsed JSONL record to a Comment. Raises ValueError if malformed."""
    if not isinstance(obj, dict):
        raise ValueError("record is not a JSON object")
    community = ""
    keys = _COMMUNITY_KEYS if platform != Platform.REDDIT else ("subreddit", "community")
    for key in keys:
        if obj.get(key):
            community = str(obj[key])
            break
    created = 0
    for key in _CREATED_KEYS:
        if obj.get(key) is not None:
            created = int(obj[key])
            break
    body = obj.get("body")
    if body is None:
        raise ValueError("record has no body field")
    return Comment(
        id=str(obj.get("id") or ""),
        body=str(body),
        community=community,
        platform=platform,
        created_at=created,
        author=str(obj.get("author") or ""),
    )


def _open_text(path: str):
    if str(path).endswith(".gz"):
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, encoding="utf-8")


def iter_jsonl(
    path: str,
    community_filter: set[str] | None = None,
    platform: Platform = Platform.REDDIT,
    strict: bool = False,
    on_skip: Callable[[int], None] | None = None,
) -> Iterator[Comment]:
    """Stream comments from a JSONL (optionally .gz) file, one at a time.

    Lazy: a Table-1-scale dump can be filtered down to one community without
    ever materializing the rest. In lenient mode malformed lines are skipped
    (``on_skip`` is called with the 1-based line number); in strict mode they
    raise with the line number.
    """
    with _open_text(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                comment = comment_from_record(json.loads(line), platform)
            except (json.JSONDecodeError, ValueError, TypeError) as exc:
                if strict:
                    raise ValueError(f"{path}:{lineno}: malformed record: {exc}") from exc
                if on_skip is not None:
                    on_skip(lineno)
                continue
            if community_filter is None or comment.community in community_filter:
                yield comment


def load_jsonl(
    path: str,
    community_filter: set[str] | None = None,
    platform: Platform = Platform.REDDIT,
    source_label: SourceLabel = SourceLabel.BACKGROUND,
    target_group: str = "",
    strict: bool = False,
) -> tuple[CorpusSlice, int]:
    """Load a JSONL dump into a CorpusSlice, preserving line order.

    Returns (slice, number of skipped malformed lines).
    """
    skipped = [0]

    def bump(_lineno: int) -> None:
        skipped[0] += 1

    comments = tuple(
        iter_jsonl(path, community_filter, platform, strict=strict, on_skip=bump)
    )
    return CorpusSlice(comments, source_label, target_group), skipped[0]


def write_jsonl(slice_: CorpusSlice, path: str) -> None:
    """Write a slice back out in the generic schema; round-trips losslessly."""
    opener = gzip.open(path, "wt", encoding="utf-8") if str(path).endswith(".gz") else open(
        path, "w", encoding="utf-8"
    )
    with opener as fh:
        for c in slice_.comments:
            fh.write(
                json.dumps(
                    {
                        "id": c.id,
                        "body": c.body,
                        "community": c.community,
                        "platform": c.platform.value,
                        "created_at": c.created_at,
                        "author": c.author,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


# ---------------------------------------------------------------------------
# Seeded sampling
# ---------------------------------------------------------------------------


def sample_without_replacement(items: list, n: int, rng: random.Random) -> list:
    """Uniform sample of n items via partial Fisher-Yates on an index array."""
    idx = list(range(len(items)))
    for i in range(n):
        j = rng.randrange(i, len(idx))
        idx[i], idx[j] = idx[j], idx[i]
    return [items[i] for i in idx[:n]]


def sample_background(
    slice_: CorpusSlice,
    n: int,
    exclude_communities: set[str] | frozenset[str] = frozenset(),
    seed: int = 0,
) -> CorpusSlice:
    """Sample n comments uniformly, never drawing from excluded communities."""
    pool = [c for c in slice_.comments if c.community not in exclude_communities]
    if len(pool) < n:
        raise ValueError(
            f"requested {n} comments but only {len(pool)} available "
            f"after excluding {sorted(exclude_communities)}"
        )
    rng = random.Random(seed)
    chosen = sample_without_replacement(pool, n, rng)
    return CorpusSlice(tuple(chosen), slice_.source_label, slice_.target_group)


# ---------------------------------------------------------------------------
# Dataset assembly
# ---------------------------------------------------------------------------


def _tokenized(slice_: CorpusSlice, config) -> tuple[list, int]:
    """Preprocess a slice into (comment, tokens) pairs, dropping deleted and
    empty-token documents. Returns the kept pairs and the drop tally."""
    from . import textprep  # local import to avoid a cycle at module load

    cfg = config or textprep.default_config()
    kept, dropped = [], 0
    for c in slice_.comments:
        if c.deleted:
            dropped += 1
            continue
        tokens = textprep.preprocess(c.body, cfg)
        if not tokens:
            dropped += 1
            continue
        kept.append((c, tokens))
    return kept, dropped


def build_balanced(
    positive: CorpusSlice,
    negative: CorpusSlice,
    seed: int = 0,
    config=None,
) -> tuple[LabeledDataset, int]:
    """Build an exactly balanced dataset, downsampling the majority side.

    Returns (dataset, drop tally) where the tally counts deleted and
    empty-after-preprocessing documents removed before balancing.
    """
    pos, dropped_p = _tokenized(positive, config)
    neg, dropped_n = _tokenized(negative, config)
    if not pos or not neg:
        raise ValueError("both slices must be non-empty after preprocessing")
    m = min(len(pos), len(neg))
    rng = random.Random(seed)
    pos_sel = pos if len(pos) == m else sample_without_replacement(pos, m, rng)
    neg_sel = neg if len(neg) == m else sample_without_replacement(neg, m, rng)
    documents, labels, provenance = [], [], []
    for side, label in ((pos_sel, POSITIVE), (neg_sel, NEGATIVE)):
        for comment, tokens in side:
            documents.append(tuple(tokens))
            labels.append(label)
            provenance.append((comment.id, comment.community))
    return (
        LabeledDataset(tuple(documents), tuple(labels), tuple(provenance), seed),
        dropped_p + dropped_n,
    )


def build_imbalanced_testset(
    positive: CorpusSlice,
    negative: CorpusSlice,
    ratio: int,
    seed: int = 0,
    config=None,
) -> tuple[LabeledDataset, int]:
    """Build a 1:ratio positive:negative test set (all positives kept)."""
    if ratio < 1:
        raise ValueError("ratio must be >= 1")
    pos, dropped_p = _tokenized(positive, config)
    neg, dropped_n = _tokenized(negative, config)
    if not pos:
        raise ValueError("positive slice empty after preprocessing")
    required = ratio * len(pos)
    if len(neg) < required:
        raise ValueError(
            f"1:{ratio} ratio needs {required} negatives for {len(pos)} positives, "
            f"only {len(neg)} available"
        )
    rng = random.Random(seed)
    neg_sel = sample_without_replacement(neg, required, rng)
    documents, labels, provenance = [], [], []
    for side, label in ((pos, POSITIVE), (neg_sel, NEGATIVE)):
        for comment, tokens in side:
            documents.append(tuple(tokens))
            labels.append(label)
            provenance.append((comment.id, comment.community))
    return (
        LabeledDataset(tuple(documents), tuple(labels), tuple(provenance), seed),
        dropped_p + dropped_n,
    )


def imbalanced_subset(dataset: LabeledDataset, ratio: int, seed: int = 0) -> LabeledDataset:
    """Resample an existing dataset to a 1:ratio class balance.

    Same contract as build_imbalanced_testset but at the dataset level; used
    to derive the imbalance grid from one held-out test set.
    """
    if ratio < 1:
        raise ValueError("ratio must be >= 1")
    pos_idx = [i for i, l in enumerate(dataset.labels) if l == POSITIVE]
    neg_idx = [i for i, l in enumerate(dataset.labels) if l == NEGATIVE]
    required = ratio * len(pos_idx)
    if len(neg_idx) < required:
        raise ValueError(
            f"1:{ratio} ratio needs {required} negatives for {len(pos_idx)} positives, "
            f"only {len(neg_idx)} available"
        )
    rng = random.Random(seed)
    neg_sel = sample_without_replacement(neg_idx, required, rng)
    return dataset.subset(pos_idx + neg_sel)


def shuffle_labels(dataset: LabeledDataset, seed: int = 0) -> LabeledDataset:
    """Permute labels relative to documents; destroys any real signal while
    preserving both marginals. Used for chance-level checks."""
    idx = list(range(len(dataset)))
    random.Random(seed).shuffle(idx)
    return LabeledDataset(
        dataset.documents,
        tuple(dataset.labels[i] for i in idx),
        dataset.provenance,
        dataset.seed,
    )


def kfold_split(
    dataset: LabeledDataset, k: int, seed: int = 0
) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Stratified k-fold split: disjoint test folds covering [0, n).

    Fold sizes differ by at most one and each fold's class ratio matches the
    dataset's within one item per class.
    """
    n = len(dataset)
    if k < 2:
        raise ValueError("k must be >= 2")
    if k > n:
        raise ValueError(f"k={k} exceeds dataset size {n}")
    rng = random.Random(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    for label in (POSITIVE, NEGATIVE):
        idx = [i for i, l in enumerate(dataset.labels) if l == label]
        rng.shuffle(idx)
        base, rem = divmod(len(idx), k)
        # Hand the remainder to the currently smallest folds so overall fold
        # sizes stay within one of each other across classes.
        order = sorted(range(k), key=lambda f: (len(folds[f]), f))
        pos = 0
        for rank, f in enumerate(order):
            take = base + (1 if rank < rem else 0)
            folds[f].extend(idx[pos : pos + take])
            pos += take
    splits = []
    for f in range(k):
        test = sorted(folds[f])
        test_set = set(test)
        train = tuple(i for i in range(n) if i not in test_set)
        splits.append((train, tuple(test)))
    return splits


# ---------------------------------------------------------------------------
# Dataset persistence and fingerprints
# ---------------------------------------------------------------------------


def write_dataset(dataset: LabeledDataset, path: str) -> None:
    """Persist a dataset as JSONL rows {tokens, label, id, community}."""
    with open(path, "w", encoding="utf-8") as fh:
        for tokens, label, (cid, community) in zip(
            dataset.documents, dataset.labels, dataset.provenance
        ):
            fh.write(
                json.dumps(
                    {"tokens": list(tokens), "label": label, "id": cid, "community": community},
                    ensure_ascii=False,
                )
                + "\n"
            )


def load_dataset(path: str) -> LabeledDataset:
    """Load a dataset written by write_dataset. The construction seed of the
    original run is not part of the file format; loaded datasets carry seed 0."""
    documents, labels, provenance = [], [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                documents.append(tuple(str(t) for t in obj["tokens"]))
                labels.append(str(obj["label"]))
                provenance.append((str(obj["id"]), str(obj["community"])))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ValueError(f"{path}:{lineno}: malformed dataset row: {exc}") from exc
    return LabeledDataset(tuple(documents), tuple(labels), tuple(provenance), 0)


def dataset_fingerprint(dataset: LabeledDataset) -> str:
    """SHA-256 over the canonical row serialization; stable across runs."""
    h = hashlib.sha256()
    for tokens, label, (cid, community) in zip(
        dataset.documents, dataset.labels, dataset.provenance
    ):
        row = json.dumps(
            [list(tokens), label, cid, community], ensure_ascii=False, separators=(",", ":")
        )
        h.update(row.encode("utf-8"))
        h.update(b"\n")
    return h.hexdigest()
