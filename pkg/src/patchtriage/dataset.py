"""Patch records and labeled summaries: persistence, dedup, train/test split.

JSONL is the canonical on-disk format (one object per line, exact field
names); CSV with the same column order is provided for spreadsheet-based
manual tagging. In CSV an empty cell means an absent optional, so an
empty-string summary does not survive a CSV round-trip; use JSONL when that
distinction matters.
"""

import csv
import json
import random
import warnings
from dataclasses import dataclass, asdict, replace

from .errors import (
    ConflictingLabelWarning,
    InvalidRatio,
    SchemaError,
    SparseCategoryWarning,
)
from .taxonomy import check_category

RECORD_FIELDS = (
    "patch_id",
    "project",
    "llm",
    "diff_raw",
    "summary_raw",
    "summary_clean",
    "category_manual",
    "category_auto",
    "compiled",
    "passed",
    "noop",
)


@dataclass
class PatchRecord:
    """One patch instance as it moves through the pipeline.

    Optional fields stay None until the corresponding stage has run:
    summaries after the LLM pass, categories after tagging, the three flags
    after (or instead of) a test-suite evaluation.
    """

    patch_id: str
    project: str = ""
    llm: str = ""
    diff_raw: str = ""
    summary_raw: str | None = None
    summary_clean: str | None = None
    category_manual: int | None = None
    category_auto: int | None = None
    compiled: bool | None = None
    passed: bool | None = None
    noop: bool | None = None

    def validate(self, index: int | None = None) -> "PatchRecord":
        if not self.patch_id:
            raise SchemaError("patch_id must be non-empty", index)
        if self.passed is True and self.compiled is not True:
            raise SchemaError(
                "passed=true requires compiled=true (a patch cannot pass tests "
                "without compiling)",
                index,
            )
        if self.summary_clean is not None and self.summary_raw is None:
            raise SchemaError("summary_clean present without summary_raw", index)
        for name in ("category_manual", "category_auto"):
            value = getattr(self, name)
            if value is not None:
                try:
                    check_category(value)
                except ValueError as exc:
                    raise SchemaError(f"{name}: {exc}", index) from exc
        return self


@dataclass(frozen=True)
class LabeledSummary:
    """A cleaned summary with its category; synthetic marks augmented data."""

    text: str
    category: int
    synthetic: bool = False


_STR_FIELDS = {"patch_id", "project", "llm", "diff_raw"}
_OPT_STR_FIELDS = {"summary_raw", "summary_clean"}
_OPT_INT_FIELDS = {"category_manual", "category_auto"}
_OPT_BOOL_FIELDS = {"compiled", "passed", "noop"}


def _record_from_mapping(obj: dict, index: int) -> PatchRecord:
    unknown = set(obj) - set(RECORD_FIELDS)
    if unknown:
        raise SchemaError(f"unknown fields {sorted(unknown)}", index)
    kwargs = {}
    for name in RECORD_FIELDS:
        value = obj.get(name)
        if name in _STR_FIELDS:
            if value is None:
                value = ""
            if not isinstance(value, str):
                raise SchemaError(f"{name} must be a string", index)
        elif value is not None:
            if name in _OPT_STR_FIELDS and not isinstance(value, str):
                raise SchemaError(f"{name} must be a string or null", index)
            if name in _OPT_INT_FIELDS and (
                isinstance(value, bool) or not isinstance(value, int)
            ):
                raise SchemaError(f"{name} must be an integer or null", index)
            if name in _OPT_BOOL_FIELDS and not isinstance(value, bool):
                raise SchemaError(f"{name} must be a boolean or null", index)
        kwargs[name] = value
    return PatchRecord(**kwargs).validate(index)


def _record_from_csv_row(row: dict, index: int) -> PatchRecord:
    obj: dict = {}
    for name in RECORD_FIELDS:
        cell = row.get(name)
        if cell is None or (cell == "" and name not in _STR_FIELDS):
            obj[name] = None
            continue
        if name in _OPT_INT_FIELDS:
            try:
                obj[name] = int(cell)
            except ValueError:
                raise SchemaError(f"{name} must be an integer, got {cell!r}", index)
        elif name in _OPT_BOOL_FIELDS:
            if cell not in ("true", "false"):
                raise SchemaError(f"{name} must be true/false, got {cell!r}", index)
            obj[name] = cell == "true"
        else:
            obj[name] = cell
    return _record_from_mapping(obj, index)


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def load_records(path, format: str = "jsonl") -> list[PatchRecord]:
    """Load a dataset, validating every record. Order is preserved."""
    records: list[PatchRecord] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        if format == "jsonl":
            for index, line in enumerate(line for line in fh if line.strip()):
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise SchemaError(f"invalid JSON: {exc}", index) from exc
                if not isinstance(obj, dict):
                    raise SchemaError("each line must be a JSON object", index)
                records.append(_record_from_mapping(obj, index))
        elif format == "csv":
            reader = csv.DictReader(fh)
            if reader.fieldnames is not None and tuple(reader.fieldnames) != RECORD_FIELDS:
                raise SchemaError(
                    f"CSV header must be {','.join(RECORD_FIELDS)}", index=None
                )
            for index, row in enumerate(reader):
                records.append(_record_from_csv_row(row, index))
        else:
            raise ValueError(f"unknown format {format!r} (expected jsonl or csv)")
    seen: dict[str, int] = {}
    for index, rec in enumerate(records):
        if rec.patch_id in seen:
            raise SchemaError(
                f"duplicate patch_id {rec.patch_id!r} (first at record {seen[rec.patch_id]})",
                index,
            )
        seen[rec.patch_id] = index
    return records


def save_records(records: list[PatchRecord], path, format: str = "jsonl") -> None:
    """Write a dataset so that load_records reads back field-equal records."""
    if format == "jsonl":
        with open(path, "w", encoding="utf-8") as fh:
            for rec in records:
                fh.write(json.dumps(asdict(rec), ensure_ascii=False) + "\n")
    elif format == "csv":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(RECORD_FIELDS)
            for rec in records:
                writer.writerow([_csv_cell(getattr(rec, name)) for name in RECORD_FIELDS])
    else:
        raise ValueError(f"unknown format {format!r} (expected jsonl or csv)")


def dedup_summaries(items: list[LabeledSummary]) -> list[LabeledSummary]:
    """Drop exact-text duplicates, keeping the first occurrence in order.

    Identical text under two different categories keeps the first label and
    emits a ConflictingLabelWarning.
    """
    seen: dict[str, int] = {}
    out: list[LabeledSummary] = []
    for item in items:
        first = seen.get(item.text)
        if first is None:
            seen[item.text] = item.category
            out.append(item)
        elif first != item.category:
            warnings.warn(
                f"summary {item.text!r} labeled both {first} and {item.category}; "
                f"keeping {first}",
                ConflictingLabelWarning,
                stacklevel=2,
            )
    return out


def split_train_test(
    items: list[LabeledSummary], ratio: float = 0.8, seed: int = 42
) -> tuple[list[LabeledSummary], list[LabeledSummary]]:
    """Deterministic stratified split; per-category proportions hold within one item.

    A category with fewer than 2 items cannot be split and goes entirely to
    train (with a SparseCategoryWarning). Output lists preserve input order;
    the seed only decides membership.
    """
    if not 0 < ratio < 1:
        raise InvalidRatio(f"ratio must be in (0, 1), got {ratio}")
    by_category: dict[int, list[int]] = {}
    for idx, item in enumerate(items):
        by_category.setdefault(item.category, []).append(idx)

    rng = random.Random(seed)
    train_idx: set[int] = set()
    for category in sorted(by_category):
        indices = by_category[category]
        if len(indices) < 2:
            warnings.warn(
                f"category {category} has {len(indices)} item(s); all go to train",
                SparseCategoryWarning,
                stacklevel=2,
            )
            train_idx.update(indices)
            continue
        shuffled = list(indices)
        rng.shuffle(shuffled)
        n_train = int(ratio * len(indices) + 0.5)
        train_idx.update(shuffled[:n_train])

    train = [item for idx, item in enumerate(items) if idx in train_idx]
    test = [item for idx, item in enumerate(items) if idx not in train_idx]
    return train, test


def labeled_summaries_from_records(
    records: list[PatchRecord], which: str = "manual"
) -> list[LabeledSummary]:
    """Extract (cleaned summary, category) pairs from records that carry both."""
    attr = f"category_{which}"
    out = []
    for rec in records:
        category = getattr(rec, attr)
        text = rec.summary_clean
        if category is not None and text:
            out.append(LabeledSummary(text=text, category=category, synthetic=False))
    return out


def update_record(record: PatchRecord, **changes) -> PatchRecord:
    """Copy a record with fields changed, re-validating the result."""
    return replace(record, **changes).validate()
