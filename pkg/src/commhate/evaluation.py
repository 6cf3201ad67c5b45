"""Metrics, cross-validation, experiment orchestration and reports.

All ratio metrics are computed from the integer confusion counts in one
final division each, so hand-checkable cases come out exact (the canonical
worked example tp=40 fn=10 fp=20 tn=30 gives kappa 2000/5000 = 0.4, no
rounding). Zero-division conventions are fixed and documented on
metrics_from_counts so degenerate folds never crash a run.

Reports are plain dicts serialized with sorted keys; everything except the
"timestamp" field is a pure function of (spec, data, seed), which is what
makes byte-level reproducibility checkable.
"""

from __future__ import annotations

import csv
import io
import json
import os
import statistics
import time
from dataclasses import dataclass, replace
from typing import Sequence

from .classifiers import Algorithm, TrainConfig, train
from .corpus import (
    NEGATIVE,
    POSITIVE,
    LabeledDataset,
    dataset_fingerprint,
    imbalanced_subset,
    kfold_split,
    load_dataset,
)
from .seeding import derive_seed
from .vectorizer import TfidfModel, fit_tfidf, model_fingerprint

REPORT_SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self):
        for name in ("tp", "fp", "tn", "fn"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {v!r}")
        if self.total == 0:
            raise ValueError("confusion counts must cover at least one instance")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class EvalMetrics:
    accuracy: float
    precision: float
    recall: float
    f1: float
    kappa: float
    counts: ConfusionCounts


@dataclass(frozen=True)
class MetricSummary:
    """The five ratio metrics without counts; used for fold means."""

    accuracy: float
    precision: float
    recall: float
    f1: float
    kappa: float


def tally_counts(predicted: Sequence[str], expected: Sequence[str]) -> ConfusionCounts:
    if len(predicted) != len(expected):
        raise ValueError(
            f"length mismatch: {len(predicted)} predictions vs {len(expected)} truths"
        )
    if not predicted:
        raise ValueError("cannot tally empty label sequences")
    tp = fp = tn = fn = 0
    for p, e in zip(predicted, expected):
        if p not in (POSITIVE, NEGATIVE) or e not in (POSITIVE, NEGATIVE):
            raise ValueError(f"unknown label in pair ({p!r}, {e!r})")
        if p == POSITIVE:
            if e == POSITIVE:
                tp += 1
            else:
                fp += 1
        else:
            if e == POSITIVE:
                fn += 1
            else:
                tn += 1
    return ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn)


def metrics_from_counts(counts: ConfusionCounts) -> EvalMetrics:
    """Accuracy, precision, recall, F1 and Cohen's kappa from counts.

    Conventions: precision is 0 when tp+fp = 0, recall is 0 when tp+fn = 0,
    F1 is 0 when precision and recall are both 0. Kappa's chance agreement
    p_e comes from the marginal products; when p_e = 1 kappa is 1 if
    observed agreement is also 1, else 0.
    """
    tp, fp, tn, fn = counts.tp, counts.fp, counts.tn, counts.fn
    n = counts.total
    accuracy = (tp + tn) / n
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * tp / (2 * tp + fp + fn) if 2 * tp + fp + fn else 0.0
    # kappa = (p_o - p_e) / (1 - p_e), scaled by n^2 to stay in integers.
    agree = n * (tp + tn)
    chance = (tp + fp) * (tp + fn) + (fn + tn) * (fp + tn)
    denom = n * n - chance
    if denom == 0:
        kappa = 1.0 if tp + tn == n else 0.0
    else:
        kappa = (agree - chance) / denom
    return EvalMetrics(accuracy, precision, recall, f1, kappa, counts)


def compute_metrics(predicted: Sequence[str], expected: Sequence[str]) -> EvalMetrics:
    return metrics_from_counts(tally_counts(predicted, expected))


def mean_of(per_fold: Sequence[EvalMetrics]) -> MetricSummary:
    k = len(per_fold)
    if k == 0:
        raise ValueError("no fold metrics to average")
    return MetricSummary(
        accuracy=sum(m.accuracy for m in per_fold) / k,
        precision=sum(m.precision for m in per_fold) / k,
        recall=sum(m.recall for m in per_fold) / k,
        f1=sum(m.f1 for m in per_fold) / k,
        kappa=sum(m.kappa for m in per_fold) / k,
    )


def pooled_of(per_fold: Sequence[EvalMetrics]) -> EvalMetrics:
    return metrics_from_counts(
        ConfusionCounts(
            tp=sum(m.counts.tp for m in per_fold),
            fp=sum(m.counts.fp for m in per_fold),
            tn=sum(m.counts.tn for m in per_fold),
            fn=sum(m.counts.fn for m in per_fold),
        )
    )


def metrics_to_dict(m: EvalMetrics) -> dict:
    return {
        "accuracy": m.accuracy,
        "precision": m.precision,
        "recall": m.recall,
        "f1": m.f1,
        "kappa": m.kappa,
        "counts": {
            "tp": m.counts.tp,
            "fp": m.counts.fp,
            "tn": m.counts.tn,
            "fn": m.counts.fn,
        },
    }


def summary_to_dict(s: MetricSummary) -> dict:
    return {
        "accuracy": s.accuracy,
        "precision": s.precision,
        "recall": s.recall,
        "f1": s.f1,
        "kappa": s.kappa,
    }


# ---------------------------------------------------------------------------
# Training plumbing
# ---------------------------------------------------------------------------


def vectors_for(kind: Algorithm, model: TfidfModel, documents) -> list:
    """NB consumes raw counts; the linear models consume tf-idf vectors."""
    if kind is Algorithm.NB:
        return model.transform_counts_all(documents)
    return model.transform_all(documents)


def train_and_eval(
    train_ds: LabeledDataset,
    test_ds: LabeledDataset,
    kind: Algorithm,
    seed: int,
    min_df: int = 2,
    base_config: TrainConfig | None = None,
) -> tuple[EvalMetrics, str]:
    """Fit the vectorizer on the training split only, train one classifier,
    and score the test split. Returns (metrics, vectorizer fingerprint)."""
    vec = fit_tfidf(train_ds.documents, min_df=min_df)
    cfg = replace(base_config or TrainConfig(), algorithm=kind, seed=seed)
    model = train(vectors_for(kind, vec, train_ds.documents), train_ds.labels, cfg)
    predicted = model.predict_all(vectors_for(kind, vec, test_ds.documents))
    return compute_metrics(predicted, test_ds.labels), model_fingerprint(vec)


@dataclass(frozen=True)
class CvResult:
    algorithm: Algorithm
    per_fold: tuple[EvalMetrics, ...]
    mean: MetricSummary
    pooled: EvalMetrics
    vectorizer_fingerprints: tuple[str, ...]


def cross_validate(
    dataset: LabeledDataset,
    k: int,
    kinds: Sequence[Algorithm],
    seed: int = 0,
    min_df: int = 2,
    base_config: TrainConfig | None = None,
) -> dict[Algorithm, CvResult]:
    """Stratified k-fold CV with a fresh vectorizer per fold (train side
    only, so folds cannot leak vocabulary into each other)."""
    kinds = tuple(dict.fromkeys(Algorithm(x) for x in kinds))
    if not kinds:
        raise ValueError("at least one classifier kind required")
    splits = kfold_split(dataset, k, derive_seed(seed, "cv", "folds"))
    results: dict[Algorithm, CvResult] = {}
    for kind in sorted(kinds, key=lambda a: a.value):
        fold_metrics: list[EvalMetrics] = []
        fingerprints: list[str] = []
        for fold_index, (train_idx, test_idx) in enumerate(splits):
            m, fp = train_and_eval(
                dataset.subset(train_idx),
                dataset.subset(test_idx),
                kind,
                seed=derive_seed(seed, "cv", kind.value, fold_index),
                min_df=min_df,
                base_config=base_config,
            )
            fold_metrics.append(m)
            fingerprints.append(fp)
        results[kind] = CvResult(
            algorithm=kind,
            per_fold=tuple(fold_metrics),
            mean=mean_of(fold_metrics),
            pooled=pooled_of(fold_metrics),
            vectorizer_fingerprints=tuple(fingerprints),
        )
    return results


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------

_SPEC_KEYS = {"name", "train_source", "test_source", "kinds", "seed", "imbalance_ratio"}


@dataclass(frozen=True)
class ExperimentSpec:
    """One train/test arrangement: either CV on a single dataset
    (test_source "cv:k", train and test coincide) or a held-out test set,
    optionally resampled to a 1:ratio class imbalance."""

    name: str
    train_source: str
    test_source: str
    kinds: tuple[Algorithm, ...] = (Algorithm.NB, Algorithm.LR, Algorithm.SVM)
    seed: int = 0
    imbalance_ratio: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kinds", tuple(Algorithm(x) for x in self.kinds))
        if not self.name:
            raise ValueError("experiment name must be non-empty")
        if not self.train_source or not self.test_source:
            raise ValueError("train_source and test_source must be non-empty")
        if not self.kinds:
            raise ValueError("at least one classifier kind required")
        if self.cv_k is not None:
            if self.cv_k < 2:
                raise ValueError("cv fold count must be >= 2")
            if self.imbalance_ratio is not None:
                raise ValueError("imbalance_ratio requires a held-out test set")
        if self.imbalance_ratio is not None and self.imbalance_ratio < 1:
            raise ValueError("imbalance_ratio must be >= 1")

    @property
    def cv_k(self) -> int | None:
        if self.test_source.startswith("cv:"):
            try:
                return int(self.test_source[3:])
            except ValueError:
                raise ValueError(f"malformed cv test_source {self.test_source!r}") from None
        return None


def experiment_from_dict(obj: dict) -> ExperimentSpec:
    unknown = set(obj) - _SPEC_KEYS
    if unknown:
        raise ValueError(f"unknown experiment config keys: {sorted(unknown)}")
    missing = {"name", "train_source", "test_source"} - set(obj)
    if missing:
        raise ValueError(f"missing experiment config keys: {sorted(missing)}")
    kwargs = dict(
        name=str(obj["name"]),
        train_source=str(obj["train_source"]),
        test_source=str(obj["test_source"]),
        seed=int(obj.get("seed", 0)),
    )
    if "kinds" in obj:
        kwargs["kinds"] = tuple(Algorithm(k) for k in obj["kinds"])
    if obj.get("imbalance_ratio") is not None:
        kwargs["imbalance_ratio"] = int(obj["imbalance_ratio"])
    return ExperimentSpec(**kwargs)


def experiment_to_dict(spec: ExperimentSpec) -> dict:
    return {
        "name": spec.name,
        "train_source": spec.train_source,
        "test_source": spec.test_source,
        "kinds": [k.value for k in spec.kinds],
        "seed": spec.seed,
        "imbalance_ratio": spec.imbalance_ratio,
    }


def _dataset_entry(path: str, ds: LabeledDataset) -> dict:
    n_pos, n_neg = ds.counts()
    return {
        "path": path,
        "n": len(ds),
        "n_pos": n_pos,
        "n_neg": n_neg,
        "fingerprint": dataset_fingerprint(ds),
    }


def run_experiment(
    spec: ExperimentSpec,
    base_dir: str = ".",
    min_df: int = 2,
    base_config: TrainConfig | None = None,
) -> dict:
    """Execute one experiment and return the full report as plain data.

    Everything but the timestamp is deterministic given the experiment
    spec argument and the dataset files it names.
    """

    def resolve(p: str) -> str:
        return p if os.path.isabs(p) else os.path.join(base_dir, p)

    train_ds = load_dataset(resolve(spec.train_source))
    report: dict = {
        "version": REPORT_SCHEMA_VERSION,
        "name": spec.name,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "spec": experiment_to_dict(spec),
        "min_df": min_df,
        "datasets": {"train": _dataset_entry(spec.train_source, train_ds)},
        "results": {},
    }
    if spec.cv_k is not None:
        cv = cross_validate(
            train_ds, spec.cv_k, spec.kinds, seed=spec.seed,
            min_df=min_df, base_config=base_config,
        )
        for kind, res in cv.items():
            report["results"][kind.value] = {
                "mode": f"cv:{spec.cv_k}",
                "per_fold": [metrics_to_dict(m) for m in res.per_fold],
                "mean": summary_to_dict(res.mean),
                "pooled": metrics_to_dict(res.pooled),
                "vectorizer_fingerprints": list(res.vectorizer_fingerprints),
            }
        return report

    test_ds = load_dataset(resolve(spec.test_source))
    if spec.imbalance_ratio is not None:
        test_ds = imbalanced_subset(
            test_ds, spec.imbalance_ratio,
            seed=derive_seed(spec.seed, "imbalance", spec.imbalance_ratio),
        )
    report["datasets"]["test"] = _dataset_entry(spec.test_source, test_ds)
    for kind in sorted(set(spec.kinds), key=lambda a: a.value):
        m, fp = train_and_eval(
            train_ds, test_ds, kind,
            seed=derive_seed(spec.seed, "holdout", kind.value),
            min_df=min_df, base_config=base_config,
        )
        report["results"][kind.value] = {
            "mode": "holdout",
            "metrics": metrics_to_dict(m),
            "vectorizer_fingerprint": fp,
        }
    return report


def report_json(report: dict) -> str:
    return json.dumps(report, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def save_report(report: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(report_json(report))


# ---------------------------------------------------------------------------
# Baseline comparison
# ---------------------------------------------------------------------------


def _test_fingerprint(report: dict) -> str:
    datasets = report["datasets"]
    entry = datasets.get("test", datasets["train"])
    return entry["fingerprint"]


def _headline_metrics(report: dict, kind: str) -> dict:
    entry = report["results"][kind]
    if entry["mode"].startswith("cv:"):
        return dict(entry["mean"])
    m = dict(entry["metrics"])
    m.pop("counts", None)
    return m


def compare_baseline(community_report: dict, baseline_reports: Sequence[dict]) -> dict:
    """Side-by-side metric deltas of a community-trained report against
    keyword-baseline reports over the same test set."""
    ref = _test_fingerprint(community_report)
    comparisons = []
    for baseline in baseline_reports:
        if _test_fingerprint(baseline) != ref:
            raise ValueError(
                f"baseline report {baseline.get('name')!r} was evaluated on a "
                "different test set; comparison would be invalid"
            )
        for kind in sorted(community_report["results"]):
            if kind not in baseline["results"]:
                continue
            community = _headline_metrics(community_report, kind)
            base = _headline_metrics(baseline, kind)
            comparisons.append(
                {
                    "baseline_name": baseline.get("name", ""),
                    "algorithm": kind,
                    "community": community,
                    "baseline": base,
                    "delta": {m: community[m] - base[m] for m in community},
                    "precision_exceeds": community["precision"] > base["precision"],
                }
            )
    return {"test_fingerprint": ref, "comparisons": comparisons}


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

_COLUMNS = ("accuracy", "precision", "recall", "f1", "kappa")


def format_metrics_table(report: dict) -> str:
    """Aligned text grid, one row per classifier kind."""
    header = ["algorithm"] + list(_COLUMNS)
    rows = [header]
    for kind in sorted(report["results"]):
        m = _headline_metrics(report, kind)
        rows.append([kind] + [f"{m[c]:.2f}" for c in _COLUMNS])
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    lines = []
    for i, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def report_to_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["algorithm", *_COLUMNS])
    for kind in sorted(report["results"]):
        m = _headline_metrics(report, kind)
        writer.writerow([kind] + [repr(m[c]) for c in _COLUMNS])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Synthetic-corpus claim pipelines
# ---------------------------------------------------------------------------


def overlap_curve(
    overlaps: Sequence[float] = (0.0, 0.3, 0.7),
    n_docs: int = 500,
    k: int = 15,
    vocab_core: int = 15,
    vocab_shared: int = 20,
    seed: int = 0,
) -> list[dict]:
    """Top-k vocabulary overlap between the two sides as a function of the
    planted shared-mass weight.

    Uses raw-phi ranking: with shared terms carrying most of the mass both
    sides surface them, which is exactly the overlap being measured
    (distinctiveness ranking would subtract it away by design).
    """
    from . import textprep
    from .synthgen import SynthSpec, generate
    from .topics import LldaConfig, fit_two_sides, jaccard_index, top_terms

    cfg = textprep.default_config()
    out = []
    for w in overlaps:
        spec = SynthSpec(
            n_docs=n_docs, vocab_core=vocab_core, vocab_shared=vocab_shared,
            overlap_weight=w, seed=derive_seed(seed, "curve", repr(w)),
        )
        pos, neg, _gt = generate(spec)
        pos_docs = [textprep.preprocess(c.body, cfg) for c in pos.comments]
        neg_docs = [textprep.preprocess(c.body, cfg) for c in neg.comments]
        model = fit_two_sides(
            pos_docs, neg_docs, LldaConfig(seed=derive_seed(seed, "curve", "llda", repr(w)))
        )
        top_pos = top_terms(model, "community", k, ranking="phi")
        top_neg = top_terms(model, "background", k, ranking="phi")
        out.append(
            {"overlap_weight": w, "jaccard": jaccard_index(set(top_pos), set(top_neg))}
        )
    return out


def community_vs_keyword_gap(
    seed: int = 0,
    n_docs_per_side: int = 5000,
    overlap_weight: float = 0.6,
    keyword_k: int = 30,
    kind: Algorithm = Algorithm.LR,
) -> dict:
    """Train one classifier on community labels and one on keyword-matched
    labels over the same pool; score both on a held-out truth-labeled test.

    Keyword matching labels every comment containing a keyword as positive.
    When the two sides share vocabulary (and chi-square, being symmetric,
    surfaces both sides' distinctive terms), those matches sweep in genuine
    negatives, so the keyword-trained model inherits a corrupted boundary.
    """
    from . import textprep
    from .corpus import CorpusSlice, build_balanced
    from .keywords import KeywordMethod, build_keyword_set, keyword_match_dataset
    from .synthgen import SynthSpec, generate

    if n_docs_per_side < 50:
        raise ValueError("n_docs_per_side too small to partition")
    spec = SynthSpec(
        n_docs=n_docs_per_side, vocab_core=50, vocab_shared=50,
        overlap_weight=overlap_weight, seed=derive_seed(seed, "gap", "corpus"),
    )
    pos, neg, _gt = generate(spec)
    kw_n = n_docs_per_side // 5
    test_n = n_docs_per_side // 5
    pool_lo, pool_hi = kw_n, n_docs_per_side - test_n
    cfg = textprep.default_config()

    def docs(comments) -> list[list[str]]:
        return [textprep.preprocess(c.body, cfg) for c in comments]

    keyword_set = build_keyword_set(
        KeywordMethod.CHI2_I,
        docs(pos.comments[:kw_n]),
        docs(neg.comments[:kw_n]),
        k=keyword_k,
    )
    pool_pos = CorpusSlice(pos.comments[pool_lo:pool_hi], pos.source_label)
    pool_neg = CorpusSlice(neg.comments[pool_lo:pool_hi], neg.source_label)
    pool_mixed = CorpusSlice(pool_pos.comments + pool_neg.comments)
    community_train, _ = build_balanced(
        pool_pos, pool_neg, seed=derive_seed(seed, "gap", "community")
    )
    n_side = (pool_hi - pool_lo) * 2 // 5
    baseline_train = keyword_match_dataset(
        pool_mixed, keyword_set, n_pos=n_side, n_neg=n_side,
        seed=derive_seed(seed, "gap", "kwmatch"),
    )
    test_ds, _ = build_balanced(
        CorpusSlice(pos.comments[pool_hi:], pos.source_label),
        CorpusSlice(neg.comments[pool_hi:], neg.source_label),
        seed=derive_seed(seed, "gap", "test"),
    )
    community_metrics, _ = train_and_eval(
        community_train, test_ds, kind, seed=derive_seed(seed, "gap", "train", "community")
    )
    baseline_metrics, _ = train_and_eval(
        baseline_train, test_ds, kind, seed=derive_seed(seed, "gap", "train", "baseline")
    )
    return {
        "seed": seed,
        "keywords": [t for t, _ in keyword_set.terms],
        "community": metrics_to_dict(community_metrics),
        "baseline": metrics_to_dict(baseline_metrics),
        "precision_gap": community_metrics.precision - baseline_metrics.precision,
    }


def median_precision_gap(
    seeds: Sequence[int] = (0, 1, 2, 3, 4), **kwargs
) -> dict:
    """community_vs_keyword_gap across seeds, reduced to the median gap."""
    runs = [community_vs_keyword_gap(seed=s, **kwargs) for s in seeds]
    return {
        "runs": runs,
        "median_precision_gap": statistics.median(r["precision_gap"] for r in runs),
    }
