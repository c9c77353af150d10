"""
Deciding which patches deserve a test-suite run
===============================================

Test-suite evaluation dominates the cost of patch search. The triage
policy skips patches predicted into NoOp categories outright and, once
a category has enough history, skips categories whose pass rate sits
below a threshold. This replays a recorded stream to measure what that
policy would have saved and lost.
"""

import random

from patchtriage.dataset import PatchRecord
from patchtriage.triage import (
    NEUTRAL_POLICY,
    TriagePolicy,
    accumulate_stats,
    decide,
    replay,
)

# a synthetic recorded run: category 0 (copied-in code) almost never
# passes, categories 1/2/17 are NoOps, the rest are healthy
rng = random.Random(7)
population = [0] * 40 + [1, 2, 17] * 5 + [4, 9, 11] * 15
records = []
for i in range(200):
    category = rng.choice(population)
    compiled = rng.random() < 0.9
    passed = compiled and rng.random() < (0.03 if category == 0 else 0.5)
    records.append(
        PatchRecord(
            patch_id=f"r{i:03d}", project="demo", llm="mock", diff_raw="",
            category_auto=category, compiled=compiled, passed=passed,
            noop=category in (1, 2, 17),
        )
    )

# the per-category ledger the decisions are made from
stats = accumulate_stats(records, "auto")
row = stats.get(0)
print(f"category 0: {row.passed}/{row.total} passed ({row.pass_rate():.2f})")

# a single decision, given the history so far
print(decide(TriagePolicy(), stats, 0))   # skipped: pass rate below threshold
print(decide(TriagePolicy(), stats, 9))   # evaluated: healthy category
print(decide(TriagePolicy(), stats, 17))  # skipped: NoOp category

# prequential replay decides each record from earlier records only,
# then folds it in -- the honest model of in-search usage
report = replay(records, TriagePolicy())
print("with triage:   ", report.to_json())

# the neutral policy evaluates everything; the difference is the savings
baseline = replay(records, NEUTRAL_POLICY)
saved = report.evaluations_skipped
lost = report.passing_patches_lost
print(f"saved {saved}/{baseline.evaluations_run} evaluations, lost {lost} passing patches")
