"""Labeled LDA over a labeled corpus, one topic per label.

Inference is collapsed Gibbs sampling with each token's topic restricted to
its document's label set. With exactly one label per document (the only case
the public API admits) every restricted conditional is a point mass, so the
chain is absorbed at its initial state: the fitted phi equals the
beta-smoothed label-conditional term frequencies. The sampler detects this
fixed point after one sweep and accounts the remaining sweeps arithmetically,
which is exact, not an approximation.

Top terms are ranked by a distinctiveness score (the label's phi minus the
best competing label's phi) so generic high-frequency terms shared by all
labels drop out; raw-phi ranking is available via ``ranking="phi"``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .seeding import derive_seed


@dataclass(frozen=True)
class LldaConfig:
    alpha: float = 0.5
    beta: float = 0.1
    iterations: int = 1000
    burn_in: int = 200
    seed: int = 0

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be positive")
        if self.burn_in < 0:
            raise ValueError("burn_in must be non-negative")
        if self.iterations <= self.burn_in:
            raise ValueError("iterations must exceed burn_in")


@dataclass(frozen=True)
class LldaModel:
    labels: tuple[str, ...]
    vocabulary: tuple[str, ...]
    topic_word_counts: tuple[tuple[float, ...], ...]  # post-burn-in averages
    phi: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        if len(self.labels) != len(self.phi) or len(self.labels) != len(
            self.topic_word_counts
        ):
            raise ValueError("one count row and one phi row per label required")
        for row in self.phi:
            if len(row) != len(self.vocabulary):
                raise ValueError("phi rows must span the vocabulary")
            total = sum(row)
            if abs(total - 1.0) > 1e-9 or any(p < 0 for p in row):
                raise ValueError("phi rows must be distributions summing to 1")

    def label_index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"unknown label {label!r}; have {list(self.labels)}") from None


def fit_llda(
    documents: Sequence[Sequence[str]],
    doc_labels: Sequence[str],
    config: LldaConfig,
) -> LldaModel:
    """Fit the one-topic-per-label model by label-constrained collapsed Gibbs.

    Every document must carry one label and the corpus must contain at least
    two distinct labels; empty vocabularies are rejected.
    """
    if len(documents) != len(doc_labels):
        raise ValueError("documents and doc_labels must have equal length")
    if not documents:
        raise ValueError("corpus is empty")
    for i, label in enumerate(doc_labels):
        if not label:
            raise ValueError(f"document {i} has an absent label")
    labels = tuple(sorted(set(doc_labels)))
    if len(labels) < 2:
        raise ValueError(f"need at least 2 distinct labels, got {list(labels)}")
    vocab = tuple(sorted({t for doc in documents for t in doc}))
    if not vocab:
        raise ValueError("empty vocabulary: no document contains any token")
    term_index = {t: i for i, t in enumerate(vocab)}
    label_index = {l: i for i, l in enumerate(labels)}
    n_labels, n_terms = len(labels), len(vocab)

    # Token stream as (admissible topic tuple, term index); single-label docs
    # always yield singleton admissible sets.
    tokens: list[tuple[tuple[int, ...], int]] = []
    for doc, label in zip(documents, doc_labels):
        admissible = (label_index[label],)
        for term in doc:
            tokens.append((admissible, term_index[term]))

    rng = random.Random(derive_seed(config.seed, "llda", "gibbs"))
    counts = np.zeros((n_labels, n_terms))
    topic_totals = np.zeros(n_labels)
    assignment = []
    for admissible, w in tokens:
        z = admissible[0] if len(admissible) == 1 else rng.choice(admissible)
        assignment.append(z)
        counts[z, w] += 1
        topic_totals[z] += 1

    def sweep() -> int:
        """One full Gibbs sweep; returns the number of reassigned tokens."""
        changed = 0
        beta = config.beta
        for pos, (admissible, w) in enumerate(tokens):
            old = assignment[pos]
            if len(admissible) == 1:
                continue  # point-mass conditional, nothing to sample
            counts[old, w] -= 1
            topic_totals[old] -= 1
            weights = [
                (counts[z, w] + beta) / (topic_totals[z] + beta * n_terms)
                for z in admissible
            ]
            total = sum(weights)
            r = rng.random() * total
            acc = 0.0
            new = admissible[-1]
            for z, wt in zip(admissible, weights):
                acc += wt
                if r < acc:
                    new = z
                    break
            counts[new, w] += 1
            topic_totals[new] += 1
            assignment[pos] = new
            if new != old:
                changed += 1
        return changed

    acc_counts = np.zeros_like(counts)
    n_samples = 0
    absorbed = False
    for it in range(1, config.iterations + 1):
        if not absorbed:
            changed = sweep()
            if changed == 0 and all(len(a) == 1 for a, _ in tokens):
                # Fixed point: every later sweep leaves counts unchanged, so
                # averaging further snapshots is arithmetic, not sampling.
                absorbed = True
        if it > config.burn_in:
            acc_counts += counts
            n_samples += 1
            if absorbed:
                remaining = config.iterations - it
                acc_counts += counts * remaining
                n_samples += remaining
                break
        elif absorbed:
            # Absorbed before burn-in ends: every post-burn-in snapshot will
            # equal the current counts, so account them all at once.
            n_after = config.iterations - config.burn_in
            acc_counts += counts * n_after
            n_samples += n_after
            break

    mean_counts = acc_counts / n_samples
    denom = mean_counts.sum(axis=1, keepdims=True) + config.beta * n_terms
    phi = (mean_counts + config.beta) / denom
    phi = phi / phi.sum(axis=1, keepdims=True)  # absorb rounding in the tail
    return LldaModel(
        labels=labels,
        vocabulary=vocab,
        topic_word_counts=tuple(tuple(float(c) for c in row) for row in mean_counts),
        phi=tuple(tuple(float(p) for p in row) for row in phi),
    )


def top_terms(
    model: LldaModel, label: str, k: int, ranking: str = "distinctiveness"
) -> list[str]:
    """k highest-ranked terms for a label; ties broken lexicographically.

    Distinctiveness of term t is phi(label)[t] minus the largest phi any
    other label gives t, which suppresses corpus-wide frequent terms.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if ranking not in ("distinctiveness", "phi"):
        raise ValueError(f"unknown ranking {ranking!r}")
    li = model.label_index(label)
    own = model.phi[li]
    if ranking == "phi" or len(model.labels) == 1:
        scores = own
    else:
        others = [model.phi[j] for j in range(len(model.labels)) if j != li]
        scores = tuple(
            own[t] - max(row[t] for row in others) for t in range(len(own))
        )
    ranked = sorted(zip(model.vocabulary, scores), key=lambda e: (-e[1], e[0]))
    return [term for term, _ in ranked[:k]]


def term_scores(model: LldaModel, label: str) -> dict[str, float]:
    """Distinctiveness score per vocabulary term for one label."""
    li = model.label_index(label)
    own = model.phi[li]
    others = [model.phi[j] for j in range(len(model.labels)) if j != li]
    return {
        term: own[t] - (max(row[t] for row in others) if others else 0.0)
        for t, term in enumerate(model.vocabulary)
    }


def jaccard_index(a: set, b: set) -> float:
    """|a & b| / |a | b|, taking the empty/empty case to be 0."""
    if not a and not b:
        return 0.0
    sa, sb = set(a), set(b)
    return len(sa & sb) / len(sa | sb)


# ---------------------------------------------------------------------------
# Two-sided convenience wrapper and reports
# ---------------------------------------------------------------------------


def fit_two_sides(
    pos_docs: Sequence[Sequence[str]],
    neg_docs: Sequence[Sequence[str]],
    config: LldaConfig,
    pos_label: str = "community",
    neg_label: str = "background",
    subsample: bool = True,
) -> LldaModel:
    """Fit community-vs-background topics, downsampling the larger side so
    both contribute equally (seeded from config.seed)."""
    pos = [list(d) for d in pos_docs if d]
    neg = [list(d) for d in neg_docs if d]
    if not pos or not neg:
        raise ValueError("both sides must contain at least one non-empty document")
    if subsample:
        m = min(len(pos), len(neg))
        rng = random.Random(derive_seed(config.seed, "llda", "subsample"))
        from .corpus import sample_without_replacement

        if len(pos) > m:
            pos = sample_without_replacement(pos, m, rng)
        if len(neg) > m:
            neg = sample_without_replacement(neg, m, rng)
    documents = pos + neg
    labels = [pos_label] * len(pos) + [neg_label] * len(neg)
    return fit_llda(documents, labels, config)


def topic_report(model: LldaModel, k: int, ranking: str = "distinctiveness") -> dict:
    """Per-label top-k terms plus pairwise Jaccard overlap, as plain data."""
    per_label = []
    term_lists: dict[str, list[str]] = {}
    for label in model.labels:
        terms = top_terms(model, label, k, ranking=ranking)
        term_lists[label] = terms
        li = model.label_index(label)
        scores = term_scores(model, label)
        per_label.append(
            {
                "label": label,
                "terms": [
                    {
                        "term": t,
                        "phi": model.phi[li][model.vocabulary.index(t)],
                        "distinctiveness": scores[t],
                    }
                    for t in terms
                ],
            }
        )
    pairs = []
    for i, a in enumerate(model.labels):
        for b in model.labels[i + 1 :]:
            pairs.append(
                {
                    "labels": [a, b],
                    "jaccard": jaccard_index(set(term_lists[a]), set(term_lists[b])),
                }
            )
    return {"k": k, "ranking": ranking, "topics": per_label, "overlap": pairs}


def format_topic_table(report: dict) -> str:
    """Aligned text rendering of a topic_report: one column per label."""
    labels = [entry["label"] for entry in report["topics"]]
    columns = [[e["term"] for e in entry["terms"]] for entry in report["topics"]]
    widths = [
        max(len(label), *(len(t) for t in col)) if col else len(label)
        for label, col in zip(labels, columns)
    ]
    lines = ["  ".join(label.ljust(w) for label, w in zip(labels, widths))]
    lines.append("  ".join("-" * w for w in widths))
    depth = max((len(c) for c in columns), default=0)
    for r in range(depth):
        row = [
            (col[r] if r < len(col) else "").ljust(w)
            for col, w in zip(columns, widths)
        ]
        lines.append("  ".join(row).rstrip())
    for pair in report["overlap"]:
        a, b = pair["labels"]
        lines.append(f"JI({a}, {b}) = {pair['jaccard']:.2f}")
    return "\n".join(lines) + "\n"
