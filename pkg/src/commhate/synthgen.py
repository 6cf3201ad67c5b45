"""Deterministic synthetic two-sided corpora with known ground truth.

Each side draws tokens from its own planted core vocabulary plus a shared
vocabulary; ``overlap_weight`` is the probability mass on shared terms. Core
terms never appear on the opposite side, which is what makes generated
corpora usable as oracles: topical-term recovery, separability, and
vocabulary-overlap behavior all follow from the construction.

Term names are purely alphabetic so they pass through preprocessing intact
(digit stripping would otherwise mangle them).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .corpus import Comment, CorpusSlice, Platform, SourceLabel
from .seeding import derive_seed

POS_COMMUNITY = "synthhate"
NEG_COMMUNITY = "synthsupport"


def _alpha_suffix(i: int, width: int) -> str:
    """Base-26 alphabetic rendering of i, zero-padded with 'a' to width."""
    digits = []
    while i:
        i, r = divmod(i, 26)
        digits.append(chr(ord("a") + r))
    s = "".join(reversed(digits)) or "a"
    return "a" * (width - len(s)) + s


def _term_block(prefix: str, count: int) -> tuple[str, ...]:
    width = 1
    while 26**width < count:
        width += 1
    return tuple(prefix + _alpha_suffix(i, width) for i in range(count))


@dataclass(frozen=True)
class SynthSpec:
    n_docs: int = 500  # per side
    vocab_core: int = 50  # planted distinctive terms per side
    vocab_shared: int = 50
    overlap_weight: float = 0.0
    doc_len_min: int = 5
    doc_len_max: int = 15
    seed: int = 0
    zipf: bool = False  # rank-weighted draws within each term block

    def __post_init__(self):
        if self.n_docs < 1 or self.vocab_core < 1 or self.vocab_shared < 1:
            raise ValueError("n_docs, vocab_core and vocab_shared must be >= 1")
        if not 0.0 <= self.overlap_weight <= 1.0:
            raise ValueError("overlap_weight must lie in [0, 1]")
        if not 1 <= self.doc_len_min <= self.doc_len_max:
            raise ValueError("need 1 <= doc_len_min <= doc_len_max")


def _pick(block: tuple[str, ...], rng: random.Random, zipf: bool) -> str:
    if not zipf:
        return block[rng.randrange(len(block))]
    # P(rank r) proportional to 1/(r+1); inverse-CDF over the cumulative sum.
    weights = [1.0 / (r + 1) for r in range(len(block))]
    total = sum(weights)
    x = rng.random() * total
    acc = 0.0
    for term, w in zip(block, weights):
        acc += w
        if x < acc:
            return term
    return block[-1]


def generate(spec: SynthSpec) -> tuple[CorpusSlice, CorpusSlice, dict]:
    """Generate (positive slice, negative slice, ground truth).

    Ground truth lists the planted core vocabularies and the shared block;
    identical specs yield byte-identical corpora.
    """
    pos_terms = _term_block("hat", spec.vocab_core)
    neg_terms = _term_block("sup", spec.vocab_core)
    shared_terms = _term_block("shr", spec.vocab_shared)
    sides = []
    for side_name, community, core in (
        ("pos", POS_COMMUNITY, pos_terms),
        ("neg", NEG_COMMUNITY, neg_terms),
    ):
        rng = random.Random(derive_seed(spec.seed, "synthgen", side_name))
        comments = []
        for i in range(spec.n_docs):
            length = rng.randint(spec.doc_len_min, spec.doc_len_max)
            tokens = []
            for _ in range(length):
                if rng.random() < spec.overlap_weight:
                    tokens.append(_pick(shared_terms, rng, spec.zipf))
                else:
                    tokens.append(_pick(core, rng, spec.zipf))
            comments.append(
                Comment(
                    id=f"{side_name}{i:06d}",
                    body=" ".join(tokens),
                    community=community,
                    platform=Platform.OTHER,
                    created_at=i,
                    author="synthgen",
                )
            )
        sides.append(tuple(comments))
    ground_truth = {
        "positive_terms": list(pos_terms),
        "negative_terms": list(neg_terms),
        "shared_terms": list(shared_terms),
        "overlap_weight": spec.overlap_weight,
        "n_docs_per_side": spec.n_docs,
        "seed": spec.seed,
    }
    positive = CorpusSlice(sides[0], SourceLabel.HATE, "synthetic")
    negative = CorpusSlice(sides[1], SourceLabel.SUPPORT, "synthetic")
    return positive, negative, ground_truth


def write_ground_truth(ground_truth: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(ground_truth, fh, ensure_ascii=False, sort_keys=True, indent=2)
        fh.write("\n")
