"""Per-category quality statistics and the skip/evaluate triage filter.

The point of classifying patches at all: once a category's track record is
known (how often its patches compile, pass the full test suite, or change
nothing), newly generated patches predicted into hopeless categories can be
dropped before the expensive test-suite run. ``replay`` measures what that
filter would have done over a recorded patch stream.
"""

import csv
import io
import json
import warnings
from dataclasses import dataclass, field

from .errors import ExcludedRecordWarning, SchemaError
from .taxonomy import ALL_CATEGORY_IDS, NOOP_CATEGORIES, check_category

# decision reasons
NOOP_CATEGORY = "NoOpCategory"
LOW_PASS_RATE = "LowPassRate"
DEFAULT = "Default"

# verdicts
SKIP = "Skip"
EVALUATE = "Evaluate"

PASS_RATE_BASES = ("total", "compiled")


@dataclass
class CategoryCounts:
    total: int = 0
    compiled: int = 0
    passed: int = 0
    noop: int = 0

    def validate(self) -> "CategoryCounts":
        if not 0 <= self.passed <= self.compiled <= self.total:
            raise SchemaError(
                f"inconsistent counts: passed={self.passed} "
                f"compiled={self.compiled} total={self.total}"
            )
        if not 0 <= self.noop <= self.total:
            raise SchemaError(f"noop={self.noop} exceeds total={self.total}")
        return self

    @property
    def compile_rate(self) -> float:
        return self.compiled / self.total if self.total else 0.0

    @property
    def noop_rate(self) -> float:
        return self.noop / self.total if self.total else 0.0

    def pass_rate(self, basis: str = "total") -> float:
        if basis not in PASS_RATE_BASES:
            raise ValueError(f"basis must be one of {PASS_RATE_BASES}, got {basis!r}")
        denominator = self.total if basis == "total" else self.compiled
        return self.passed / denominator if denominator else 0.0


@dataclass
class CategoryStats:
    counts: dict[int, CategoryCounts] = field(default_factory=dict)
    excluded: int = 0

    def get(self, category: int) -> CategoryCounts:
        return self.counts.get(check_category(category), CategoryCounts())

    def add(self, category: int, compiled: bool, passed: bool, noop: bool) -> None:
        if passed and not compiled:
            raise SchemaError("a passing record must also compile")
        entry = self.counts.setdefault(check_category(category), CategoryCounts())
        entry.total += 1
        entry.compiled += int(compiled)
        entry.passed += int(passed)
        entry.noop += int(noop)

    def to_json(self, pass_rate_basis: str = "total") -> dict:
        categories = []
        for cid in ALL_CATEGORY_IDS:
            c = self.get(cid)
            categories.append(
                {
                    "id": cid,
                    "total": c.total,
                    "compiled": c.compiled,
                    "passed": c.passed,
                    "noop": c.noop,
                    "compile_rate": c.compile_rate,
                    "pass_rate": c.pass_rate(pass_rate_basis),
                    "noop_rate": c.noop_rate,
                }
            )
        return {
            "pass_rate_basis": pass_rate_basis,
            "excluded": self.excluded,
            "categories": categories,
        }


def _record_category(record, category_field: str):
    if category_field == "manual":
        return record.category_manual
    if category_field == "auto":
        return record.category_auto
    raise ValueError(f"category_field must be 'manual' or 'auto', got {category_field!r}")


def accumulate_stats(records, category_field: str = "manual") -> CategoryStats:
    """Exact per-category compile/pass/NoOp counts over a record list.

    Records missing the chosen category or any of the three flags are
    excluded from the counts and reported once via ExcludedRecordWarning.
    """
    stats = CategoryStats()
    for record in records:
        category = _record_category(record, category_field)
        flags = (record.compiled, record.passed, record.noop)
        if category is None or any(flag is None for flag in flags):
            stats.excluded += 1
            continue
        stats.add(category, record.compiled, record.passed, record.noop)
    if stats.excluded:
        warnings.warn(
            f"{stats.excluded} record(s) lacked {category_field} category or flags "
            "and were excluded from the statistics",
            ExcludedRecordWarning,
            stacklevel=2,
        )
    for entry in stats.counts.values():
        entry.validate()
    return stats


@dataclass(frozen=True)
class TriagePolicy:
    """When to skip evaluating a patch, given its predicted category."""

    skip_noop_categories: bool = True
    min_pass_rate: float = 0.10
    min_samples: int = 20
    pass_rate_basis: str = "total"

    def __post_init__(self):
        if not 0.0 <= self.min_pass_rate <= 1.0:
            raise ValueError(f"min_pass_rate must be in [0, 1], got {self.min_pass_rate}")
        if self.min_samples < 0:
            raise ValueError(f"min_samples must be >= 0, got {self.min_samples}")
        if self.pass_rate_basis not in PASS_RATE_BASES:
            raise ValueError(
                f"pass_rate_basis must be one of {PASS_RATE_BASES}, "
                f"got {self.pass_rate_basis!r}"
            )


NEUTRAL_POLICY = TriagePolicy(skip_noop_categories=False, min_pass_rate=0.0)


@dataclass(frozen=True)
class TriageDecision:
    verdict: str
    reason: str

    def __post_init__(self):
        if self.verdict not in (SKIP, EVALUATE):
            raise ValueError(f"bad verdict {self.verdict!r}")
        if self.reason not in (NOOP_CATEGORY, LOW_PASS_RATE, DEFAULT):
            raise ValueError(f"bad reason {self.reason!r}")
        # a skip must always be explainable
        if self.verdict == SKIP and self.reason == DEFAULT:
            raise ValueError("Skip requires a non-Default reason")

    @property
    def skip(self) -> bool:
        return self.verdict == SKIP


def decide(policy: TriagePolicy, stats: CategoryStats, predicted: int) -> TriageDecision:
    """Skip/evaluate verdict for a patch predicted into ``predicted``.

    NoOp categories are skipped outright under the default policy; otherwise
    a category is skipped only once it has at least min_samples observations
    and its pass rate sits below the threshold. Insufficient evidence never
    skips.
    """
    check_category(predicted)
    if policy.skip_noop_categories and predicted in NOOP_CATEGORIES:
        return TriageDecision(SKIP, NOOP_CATEGORY)
    counts = stats.get(predicted)
    if counts.total >= policy.min_samples and counts.pass_rate(policy.pass_rate_basis) < policy.min_pass_rate:
        return TriageDecision(SKIP, LOW_PASS_RATE)
    return TriageDecision(EVALUATE, DEFAULT)


@dataclass
class ReplayReport:
    evaluations_skipped: int = 0
    evaluations_run: int = 0
    passing_patches_lost: int = 0
    noops_avoided: int = 0
    skips_by_reason: dict[str, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return self.evaluations_skipped + self.evaluations_run

    def to_json(self) -> dict:
        return {
            "total": self.total,
            "evaluations_skipped": self.evaluations_skipped,
            "evaluations_run": self.evaluations_run,
            "passing_patches_lost": self.passing_patches_lost,
            "noops_avoided": self.noops_avoided,
            "skips_by_reason": dict(self.skips_by_reason),
        }


def replay(records, policy: TriagePolicy = TriagePolicy(), mode: str = "prequential") -> ReplayReport:
    """Simulate the triage filter over a recorded patch stream.

    Every record must carry category_auto and all three outcome flags.
    Prequential mode decides on record i using statistics from records
    0..i-1 only, then folds record i in (test-then-accumulate), the honest
    model of in-search usage, where evidence grows as the run proceeds.
    Oracle mode decides every record against full-dataset statistics, the
    upper bound on what the filter could save.
    """
    if mode not in ("prequential", "oracle"):
        raise ValueError(f"mode must be 'prequential' or 'oracle', got {mode!r}")
    records = list(records)
    for i, record in enumerate(records):
        missing = record.category_auto is None or any(
            flag is None for flag in (record.compiled, record.passed, record.noop)
        )
        if missing:
            raise SchemaError("replay needs category_auto and all outcome flags", i)

    report = ReplayReport()
    if mode == "oracle":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ExcludedRecordWarning)
            stats = accumulate_stats(records, "auto")
    else:
        stats = CategoryStats()
    for record in records:
        decision = decide(policy, stats, record.category_auto)
        if decision.skip:
            report.evaluations_skipped += 1
            report.skips_by_reason[decision.reason] = (
                report.skips_by_reason.get(decision.reason, 0) + 1
            )
            if record.passed:
                report.passing_patches_lost += 1
            if record.noop:
                report.noops_avoided += 1
        else:
            report.evaluations_run += 1
        if mode == "prequential":
            stats.add(record.category_auto, record.compiled, record.passed, record.noop)
    return report


def mismatch_matrix(records) -> dict[tuple[int, int], int]:
    """(auto, manual) -> count over records where the two labels disagree.

    Records lacking either label do not contribute.
    """
    matrix: dict[tuple[int, int], int] = {}
    for record in records:
        auto, manual = record.category_auto, record.category_manual
        if auto is None or manual is None or auto == manual:
            continue
        key = (check_category(auto), check_category(manual))
        matrix[key] = matrix.get(key, 0) + 1
    return matrix


def render_mismatches(matrix: dict[tuple[int, int], int]) -> list[dict]:
    """Mismatch pairs as JSON-ready rows, descending by count."""
    ordered = sorted(matrix.items(), key=lambda kv: (-kv[1], kv[0]))
    return [
        {"auto": auto, "manual": manual, "count": count}
        for (auto, manual), count in ordered
    ]


def mismatches_to_csv(matrix: dict[tuple[int, int], int]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["auto", "manual", "count"])
    for row in render_mismatches(matrix):
        writer.writerow([row["auto"], row["manual"], row["count"]])
    return buf.getvalue()


def report_to_json_text(report: ReplayReport) -> str:
    return json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n"
