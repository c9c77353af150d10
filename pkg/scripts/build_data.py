"""Rebuild the bundled data files: demo model and taxonomy mirror.

Both outputs are deterministic. The demo model is trained on the full
synthetic corpus (empty seed set, 40 summaries per category, seed 42) so
rebuilding after a template change refreshes the frozen expectations.

Run from the repository root:

    python3 scripts/build_data.py
"""

import json
import pathlib
import sys

from patchtriage.augment import augment_dataset, default_templates
from patchtriage.clustering import save_model, seeded_fit
from patchtriage.embeddings import embed_hashed_batch
from patchtriage.pipeline import predict_summary
from patchtriage.taxonomy import TAXONOMY_VERSION, export_taxonomy

DATA_DIR = pathlib.Path(__file__).resolve().parent.parent / "src" / "patchtriage" / "data"

# Known probe summaries; the demo model must map each to its category.
PROBES = [
    ("just added try and catch", 9),
    ("nothing much there is no difference really", 1),
    ("seems like there are only new comments", 2),
]


def build_taxonomy(path: pathlib.Path) -> None:
    doc = {"version": TAXONOMY_VERSION, "categories": export_taxonomy()}
    path.write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {path} (version {TAXONOMY_VERSION})")


def build_demo_model(path: pathlib.Path) -> None:
    templates = default_templates()
    corpus = augment_dataset([], templates, per_category_target=40, rng_seed=42)
    vectors = embed_hashed_batch([item.text for item in corpus])
    labeled = list(zip(vectors, (item.category for item in corpus)))
    # Fixed version string: the file must be byte-stable across rebuilds.
    model, _ = seeded_fit(labeled, seed=42, model_version="demo-1")
    model.metadata.update(
        {
            "corpus_size": len(corpus),
            "per_category_target": 40,
            "rng_seed": 42,
            "source": "synthetic templates",
        }
    )
    save_model(model, path)
    print(f"wrote {path} ({len(corpus)} training summaries, k={model.k})")

    failures = []
    for text, want in PROBES:
        got = predict_summary(model, text)["category"]
        status = "ok" if got == want else "MISMATCH"
        print(f"  probe {text!r} -> {got} (want {want}) {status}")
        if got != want:
            failures.append(text)
    if failures:
        sys.exit(f"demo model failed probes: {failures}")


def main() -> None:
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    build_taxonomy(DATA_DIR / "taxonomy.json")
    build_demo_model(DATA_DIR / "demo_model.json")


if __name__ == "__main__":
    main()
