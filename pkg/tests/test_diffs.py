import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from patchtriage.diffs import (
    KIND_ADD,
    KIND_CHANGE,
    KIND_DELETE,
    PatchDiff,
    SourcePair,
    apply_diff,
    compute_diff,
    diff_pair,
    is_textual_noop,
    join_lines,
    parse_diff,
    render_hunks,
    split_lines,
)
from patchtriage.errors import DiffApplyError, DiffParseError

from oracles import random_file_pair


def java_fixture() -> tuple[str, str]:
    """A 320-line file whose line 312 is replaced by two lines."""
    lines = [f"    int statement{i};" for i in range(1, 321)]
    lines[311] = "            throw new ParseException(msg, pp.getErrorIndex());"
    original = join_lines(lines)
    patched_lines = list(lines)
    patched_lines[311:312] = [
        "            String errorMessage = msg;",
        "            throw new ParseException(errorMessage, pp.getErrorIndex());",
    ]
    return original, join_lines(patched_lines)


def test_split_join_roundtrip():
    assert split_lines("") == []
    assert split_lines("a\nb\n") == ["a", "b"]
    assert split_lines("a\nb") == ["a", "b"]
    assert join_lines([]) == ""
    assert join_lines(["a", "b"]) == "a\nb\n"


def test_identical_texts_give_empty_diff():
    diff = compute_diff("a\nb\n", "a\nb\n")
    assert diff.hunks == ()
    assert diff.raw == ""
    assert is_textual_noop(diff)


def test_trailing_newline_is_not_a_change():
    assert compute_diff("a\nb", "a\nb\n").hunks == ()


def test_change_hunk_line_312():
    original, patched = java_fixture()
    diff = compute_diff(original, patched)
    assert len(diff.hunks) == 1
    hunk = diff.hunks[0]
    assert hunk.kind == KIND_CHANGE
    assert hunk.header == "312c312,313"
    assert diff.raw == (
        "312c312,313\n"
        "<             throw new ParseException(msg, pp.getErrorIndex());\n"
        "---\n"
        ">             String errorMessage = msg;\n"
        ">             throw new ParseException(errorMessage, pp.getErrorIndex());\n"
    )
    assert parse_diff(diff.raw) == diff
    assert apply_diff(diff, original) == patched


def test_add_hunk_format():
    diff = compute_diff("a\nb\n", "a\nb\nc\nd\n")
    assert [h.header for h in diff.hunks] == ["2a3,4"]
    assert diff.hunks[0].kind == KIND_ADD
    assert diff.raw == "2a3,4\n> c\n> d\n"


def test_delete_hunk_format():
    diff = compute_diff("a\nb\nc\n", "a\n")
    assert [h.header for h in diff.hunks] == ["2,3d1"]
    assert diff.hunks[0].kind == KIND_DELETE
    assert diff.raw == "2,3d1\n< b\n< c\n"


def test_insertion_before_first_line():
    diff = compute_diff("b\n", "a\nb\n")
    assert [h.header for h in diff.hunks] == ["0a1"]
    assert apply_diff(diff, "b\n") == "a\nb\n"


def test_multi_hunk_diff():
    original = "a\nb\nc\nd\ne\n"
    patched = "a\nX\nc\ne\nf\n"
    diff = compute_diff(original, patched)
    assert len(diff.hunks) >= 2
    assert apply_diff(diff, original) == patched
    assert parse_diff(diff.raw) == diff


def test_diff_pair_uses_pair_texts():
    pair = SourcePair(original="a\n", patched="b\n", patch_id="p1")
    assert diff_pair(pair).raw == "1c1\n< a\n---\n> b\n"


def test_render_empty():
    assert render_hunks(()) == ""
    assert parse_diff("") == PatchDiff()


def test_parse_errors():
    with pytest.raises(DiffParseError):
        parse_diff("not a header\n")
    with pytest.raises(DiffParseError):
        parse_diff("1c1\n< a\n")  # missing separator and added line
    with pytest.raises(DiffParseError):
        parse_diff("1c1\n< a\n---\n")  # missing added line
    with pytest.raises(DiffParseError):
        parse_diff("3,1d0\n< a\n")  # descending range
    with pytest.raises(DiffParseError):
        parse_diff("1,2a3\n> x\n")  # range on the anchor side of an add
    with pytest.raises(DiffParseError):
        parse_diff("1d2,3\n< a\n")  # range on the anchor side of a delete
    with pytest.raises(DiffParseError):
        parse_diff("2c2\n< b\n---\n> B\n1c1\n< a\n---\n> A\n")  # out of order
    with pytest.raises(DiffParseError):
        parse_diff("1c1\n> wrong marker\n---\n> b\n")


def test_parse_error_carries_line_number():
    with pytest.raises(DiffParseError) as exc:
        parse_diff("garbage\n")
    assert exc.value.line == 1


def test_apply_rejects_mismatched_original():
    diff = parse_diff("1c1\n< a\n---\n> b\n")
    with pytest.raises(DiffApplyError):
        apply_diff(diff, "different\n")


def test_apply_rejects_out_of_range_hunk():
    diff = parse_diff("5d4\n< e\n")
    with pytest.raises(DiffApplyError):
        apply_diff(diff, "a\nb\n")


def test_randomized_roundtrip_and_apply():
    rng = random.Random(99)
    for _ in range(60):
        original, patched = random_file_pair(rng)
        diff = compute_diff(original, patched)
        assert parse_diff(diff.raw) == diff
        assert apply_diff(diff, original) == patched


_line = st.text(alphabet="abcXYZ _;", min_size=0, max_size=8)
_doc = st.lists(_line, min_size=0, max_size=12).map(
    lambda lines: "".join(line + "\n" for line in lines)
)


@given(_doc, _doc)
@settings(max_examples=60, deadline=None)
def test_property_roundtrip(original, patched):
    diff = compute_diff(original, patched)
    assert parse_diff(diff.raw) == diff
    assert apply_diff(diff, original) == patched
