"""End-to-end training, evaluation, and prediction glue.

One code path serves both the command line and the HTTP service: take the
manually labeled summaries, top the labeled categories up with synthetic
ones, split, embed, fit the seeded model, and report held-out metrics in
the per-category report shape.
"""

import datetime
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .augment import TemplateSet, augment_dataset
from .clustering import ClusterModel, predict_category, seeded_fit
from .dataset import LabeledSummary, split_train_test
from .embeddings import DEFAULT_DIM, as_matrix, embed_hashed, embed_hashed_batch, embed_remote
from .metrics import clustering_accuracy, nmi
from .summaries import clean_summary
from .taxonomy import ALL_CATEGORY_IDS, describe

DEFAULT_PER_CATEGORY_TARGET = 40
DEFAULT_SPLIT_RATIO = 0.8

Embedder = Callable[[list[str]], np.ndarray]


def hashed_embedder(dim: int = DEFAULT_DIM) -> Embedder:
    """The offline fallback embedder as a batch callable."""
    return lambda texts: as_matrix(embed_hashed_batch(texts, dim))


def remote_embedder(endpoint: str, dim: int = DEFAULT_DIM) -> Embedder:
    return lambda texts: as_matrix(embed_remote(endpoint, texts, dim=dim))


def build_metrics_report(true_labels, predicted_labels, accuracy_mode: str = "fixed") -> dict:
    """Per-category agreement report: {accuracy, accuracy_mode, nmi, n, per_category}."""
    true_labels = list(true_labels)
    predicted_labels = list(predicted_labels)
    n = len(true_labels)
    if n == 0:
        return {
            "accuracy": None,
            "accuracy_mode": accuracy_mode,
            "nmi": None,
            "n": 0,
            "per_category": [],
        }
    if accuracy_mode == "fixed":
        identity = {c: c for c in ALL_CATEGORY_IDS}
        accuracy = clustering_accuracy(predicted_labels, true_labels, mapping=identity)
    elif accuracy_mode == "optimal":
        accuracy = clustering_accuracy(predicted_labels, true_labels)
    else:
        raise ValueError(f"accuracy_mode must be 'fixed' or 'optimal', got {accuracy_mode!r}")
    per_category = []
    for cid in sorted(set(true_labels)):
        members = [i for i, t in enumerate(true_labels) if t == cid]
        agree = sum(1 for i in members if predicted_labels[i] == true_labels[i])
        per_category.append(
            {"id": int(cid), "size": len(members), "accuracy": agree / len(members)}
        )
    return {
        "accuracy": accuracy,
        "accuracy_mode": accuracy_mode,
        "nmi": nmi(true_labels, predicted_labels),
        "n": n,
        "per_category": per_category,
    }


@dataclass
class TrainResult:
    model: ClusterModel
    report: dict
    train_size: int
    test_size: int


def new_model_version(seed: int) -> str:
    stamp = datetime.datetime.now(datetime.timezone.utc).strftime("%Y%m%dT%H%M%SZ")
    return f"seeded-{seed}-{stamp}"


def train_from_summaries(
    seeds: list[LabeledSummary],
    templates: TemplateSet,
    per_category_target: int = DEFAULT_PER_CATEGORY_TARGET,
    seed: int = 42,
    ratio: float = DEFAULT_SPLIT_RATIO,
    embedder: Embedder | None = None,
    categories=None,
    model_version: str | None = None,
) -> TrainResult:
    """Augment, split, embed, and fit the seeded classifier.

    Only the categories present in ``seeds`` are trained (all 18 when no
    seeds are given), so a sparsely labeled dataset yields a small-k model
    rather than one padded with purely synthetic classes. Held-out metrics
    use the fixed identity mapping, which is the honest score for a seeded
    model.
    """
    if embedder is None:
        embedder = hashed_embedder()
    if categories is None:
        categories = sorted({s.category for s in seeds}) or list(ALL_CATEGORY_IDS)
    corpus = augment_dataset(seeds, templates, per_category_target, seed, categories)
    train, test = split_train_test(corpus, ratio=ratio, seed=seed)

    train_matrix = embedder([s.text for s in train])
    labeled = [(train_matrix[i], s.category) for i, s in enumerate(train)]
    model, _ = seeded_fit(
        labeled,
        seed=seed,
        model_version=model_version or new_model_version(seed),
    )
    model.metadata.update(
        {
            "per_category_target": per_category_target,
            "split_ratio": ratio,
            "corpus_size": len(corpus),
        }
    )

    if test:
        test_matrix = embedder([s.text for s in test])
        predicted = [predict_category(model, test_matrix[i])[0] for i in range(len(test))]
        report = build_metrics_report([s.category for s in test], predicted)
    else:
        report = build_metrics_report([], [])
    report["model_version"] = model.model_version
    return TrainResult(model=model, report=report, train_size=len(train), test_size=len(test))


def predict_summary(model: ClusterModel, text: str, embedder: Embedder | None = None) -> dict:
    """Classify one summary: clean it, embed it, take the nearest centroid."""
    cleaned = clean_summary(text)
    if embedder is None:
        matrix = as_matrix([embed_hashed(cleaned, dim=model.dim)])
    else:
        matrix = embedder([cleaned])
    category, distances = predict_category(model, matrix[0])
    return {
        "category": category,
        "description": describe(category),
        "distances": distances,
        "summary_clean": cleaned,
    }


def evaluate_records(records) -> dict:
    """Auto-vs-manual agreement report over records carrying both labels."""
    pairs = [
        (r.category_manual, r.category_auto)
        for r in records
        if r.category_manual is not None and r.category_auto is not None
    ]
    manual = [m for m, _ in pairs]
    auto = [a for _, a in pairs]
    return build_metrics_report(manual, auto)
