"""
Topping up training data with template-generated summaries
==========================================================
"""

from patchtriage.augment import (
    augment_dataset,
    check_keyword_consistency,
    default_templates,
    expand_all,
)
from patchtriage.dataset import LabeledSummary
from patchtriage.taxonomy import describe

templates = default_templates()

# every category renders from sentence templates with named slots;
# category 9 is the exception-handling edit
print(describe(9))
for text in expand_all(templates, 9)[:5]:
    print(" ", text)

# hand-labeled summaries are scarce, so each category is topped up to a
# per-category target with unique synthetic entries; real labels are
# kept and counted toward the target
seeds = [
    LabeledSummary("just added try and catch", 9),
    LabeledSummary("wrapped the parser call in a try block", 9),
]
corpus = augment_dataset(seeds, templates, per_category_target=8, rng_seed=42,
                         categories=[2, 9])
print(f"{len(corpus)} summaries, first two are the manual seeds:")
for s in corpus[:4]:
    tag = "synthetic" if s.synthetic else "manual"
    print(f"  [{s.category:2d}] ({tag}) {s.text}")

# the keyword scanner is the automated stand-in for manually reviewing
# generated text: every summary must contain its category's vocabulary
print("violations:", check_keyword_consistency(templates, corpus))
