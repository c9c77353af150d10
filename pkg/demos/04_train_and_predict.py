# End-to-end classifier training, fully offline: synthesize a labeled
# corpus, embed it with the hashing embedder, fit seeded k-means, and
# score the held-out split. Runs in a few seconds.

from patchtriage.augment import default_templates
from patchtriage.pipeline import predict_summary, train_from_summaries

templates = default_templates()

# no manual seeds -> all 18 categories, 40 synthetic summaries each,
# 80/20 stratified split, one cluster per category pinned to its class mean
result = train_from_summaries([], templates, per_category_target=40, seed=42)

report = result.report
print(f"k={result.model.k} train={result.train_size} test={result.test_size}")
print(f"held-out accuracy={report['accuracy']:.3f} nmi={report['nmi']:.3f}")

# categories that lost any held-out point show up below 1.0 here
worst = sorted(report["per_category"], key=lambda row: row["accuracy"])[:3]
for row in worst:
    print(f"  category {row['id']:2d}: {row['accuracy']:.2f} over {row['size']} summaries")

# the model answers with the nearest centroid and its distances
for text in (
    "just added try and catch",
    "nothing much there is no difference really",
    "seems like there are only new comments",
):
    out = predict_summary(result.model, text)
    print(f"{text!r} -> {out['category']} ({out['description']})")
