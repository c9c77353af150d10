import json

import pytest

from patchtriage.dataset import (
    RECORD_FIELDS,
    LabeledSummary,
    PatchRecord,
    dedup_summaries,
    labeled_summaries_from_records,
    load_records,
    save_records,
    split_train_test,
    update_record,
)
from patchtriage.errors import (
    ConflictingLabelWarning,
    InvalidRatio,
    SchemaError,
    SparseCategoryWarning,
)


def sample_records():
    return [
        PatchRecord(
            patch_id="p1",
            project="gson",
            llm="llama3",
            diff_raw="1c1\n< a\n---\n> b\n",
            summary_raw="Changed one line",
            summary_clean="Changed one line",
            category_manual=5,
            category_auto=5,
            compiled=True,
            passed=False,
            noop=False,
        ),
        PatchRecord(patch_id="p2", diff_raw="0a1\n> x\n"),
        PatchRecord(
            patch_id="p3",
            diff_raw="",
            summary_raw="nothing",
            category_auto=1,
            compiled=True,
            passed=True,
            noop=True,
        ),
    ]


@pytest.mark.parametrize("format", ["jsonl", "csv"])
def test_save_load_roundtrip(tmp_path, format):
    path = tmp_path / f"data.{format}"
    records = sample_records()
    save_records(records, path, format)
    assert load_records(path, format) == records


def test_jsonl_empty_string_summary_survives(tmp_path):
    path = tmp_path / "data.jsonl"
    records = [PatchRecord(patch_id="p1", summary_raw="")]
    save_records(records, path, "jsonl")
    assert load_records(path, "jsonl")[0].summary_raw == ""


def test_csv_empty_string_summary_becomes_none(tmp_path):
    # documented CSV caveat: an empty cell reads back as an absent optional
    path = tmp_path / "data.csv"
    save_records([PatchRecord(patch_id="p1", summary_raw="")], path, "csv")
    assert load_records(path, "csv")[0].summary_raw is None


def test_unknown_format_raises(tmp_path):
    with pytest.raises(ValueError):
        save_records([], tmp_path / "x", "yaml")
    (tmp_path / "x").write_text("")
    with pytest.raises(ValueError):
        load_records(tmp_path / "x", "yaml")


def write_jsonl(path, objects):
    path.write_text("".join(json.dumps(o) + "\n" for o in objects), encoding="utf-8")


def test_load_rejects_unknown_field(tmp_path):
    path = tmp_path / "bad.jsonl"
    write_jsonl(path, [{"patch_id": "p1", "bogus": 1}])
    with pytest.raises(SchemaError) as exc:
        load_records(path)
    assert exc.value.index == 0


def test_load_rejects_bad_types(tmp_path):
    path = tmp_path / "bad.jsonl"
    for bad in [
        {"patch_id": 7},
        {"patch_id": "p", "category_auto": "5"},
        {"patch_id": "p", "category_auto": True},
        {"patch_id": "p", "compiled": "yes"},
        {"patch_id": "p", "summary_raw": 3},
    ]:
        write_jsonl(path, [bad])
        with pytest.raises(SchemaError):
            load_records(path)


def test_load_rejects_invalid_category_value(tmp_path):
    path = tmp_path / "bad.jsonl"
    write_jsonl(path, [{"patch_id": "p", "category_manual": 18}])
    with pytest.raises(SchemaError):
        load_records(path)


def test_load_rejects_passed_without_compiled(tmp_path):
    path = tmp_path / "bad.jsonl"
    write_jsonl(path, [{"patch_id": "p", "compiled": False, "passed": True}])
    with pytest.raises(SchemaError):
        load_records(path)


def test_load_rejects_clean_without_raw(tmp_path):
    path = tmp_path / "bad.jsonl"
    write_jsonl(path, [{"patch_id": "p", "summary_clean": "x"}])
    with pytest.raises(SchemaError):
        load_records(path)


def test_load_rejects_duplicate_patch_id(tmp_path):
    path = tmp_path / "bad.jsonl"
    write_jsonl(path, [{"patch_id": "p"}, {"patch_id": "p"}])
    with pytest.raises(SchemaError) as exc:
        load_records(path)
    assert exc.value.index == 1


def test_load_rejects_invalid_json_line(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"patch_id": "p"}\nnot json\n', encoding="utf-8")
    with pytest.raises(SchemaError):
        load_records(path)


def test_load_skips_blank_lines(tmp_path):
    path = tmp_path / "data.jsonl"
    path.write_text('\n{"patch_id": "p"}\n\n', encoding="utf-8")
    assert len(load_records(path)) == 1


def test_csv_header_checked(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("patch_id,wrong\np1,x\n", encoding="utf-8")
    with pytest.raises(SchemaError):
        load_records(path, "csv")


def test_record_fields_order_is_stable():
    assert RECORD_FIELDS == (
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


def test_dedup_keeps_first_occurrence():
    items = [
        LabeledSummary("a", 1),
        LabeledSummary("b", 2),
        LabeledSummary("a", 1),
    ]
    assert dedup_summaries(items) == [LabeledSummary("a", 1), LabeledSummary("b", 2)]


def test_dedup_warns_on_conflicting_labels():
    items = [LabeledSummary("a", 1), LabeledSummary("a", 2)]
    with pytest.warns(ConflictingLabelWarning):
        out = dedup_summaries(items)
    assert out == [LabeledSummary("a", 1)]


def test_split_ratio_validation():
    items = [LabeledSummary(f"t{i}", 0) for i in range(4)]
    for bad in (0.0, 1.0, -0.5, 2.0):
        with pytest.raises(InvalidRatio):
            split_train_test(items, ratio=bad)


def test_split_stratified_counts():
    items = [LabeledSummary(f"a{i}", 0) for i in range(10)] + [
        LabeledSummary(f"b{i}", 3) for i in range(7)
    ]
    train, test = split_train_test(items, ratio=0.8, seed=42)
    train_counts = {c: sum(1 for s in train if s.category == c) for c in (0, 3)}
    # rounded per-category: int(0.8*10+0.5)=8, int(0.8*7+0.5)=6
    assert train_counts == {0: 8, 3: 6}
    assert len(train) + len(test) == len(items)
    assert set(s.text for s in train).isdisjoint(s.text for s in test)


def test_split_preserves_input_order():
    items = [LabeledSummary(f"t{i}", i % 3) for i in range(30)]
    train, test = split_train_test(items, seed=1)
    positions = {s.text: i for i, s in enumerate(items)}
    assert [positions[s.text] for s in train] == sorted(positions[s.text] for s in train)
    assert [positions[s.text] for s in test] == sorted(positions[s.text] for s in test)


def test_split_deterministic_and_seed_sensitive():
    items = [LabeledSummary(f"t{i}", i % 2) for i in range(40)]
    first = split_train_test(items, seed=42)
    assert split_train_test(items, seed=42) == first
    assert any(
        split_train_test(items, seed=other) != first for other in (1, 2, 3, 4, 5)
    )


def test_split_sparse_category_goes_to_train():
    items = [LabeledSummary(f"t{i}", 0) for i in range(6)] + [LabeledSummary("only", 9)]
    with pytest.warns(SparseCategoryWarning):
        train, test = split_train_test(items)
    assert LabeledSummary("only", 9) in train
    assert all(s.category != 9 for s in test)


def test_labeled_summaries_from_records():
    records = sample_records()
    manual = labeled_summaries_from_records(records, "manual")
    assert manual == [LabeledSummary("Changed one line", 5, synthetic=False)]
    # p3 has category_auto but no summary_clean, so auto extraction skips it too
    auto = labeled_summaries_from_records(records, "auto")
    assert auto == [LabeledSummary("Changed one line", 5, synthetic=False)]


def test_update_record_revalidates():
    record = PatchRecord(patch_id="p1", summary_raw="x")
    updated = update_record(record, summary_clean="x", category_manual=4)
    assert updated.category_manual == 4
    assert record.category_manual is None  # original untouched
    with pytest.raises(SchemaError):
        update_record(record, passed=True)


def test_validate_requires_patch_id():
    with pytest.raises(SchemaError):
        PatchRecord(patch_id="").validate()
