"""Line-level diffs in POSIX normal format.

``compute_diff`` runs a Myers shortest-edit-script over whole lines and
renders the result the way ``diff`` does without flags::

    312c312,313
    <             throw new ParseException(msg, pp.getErrorIndex());
    ---
    >             String errorMessage = msg;
    >             throw new ParseException(errorMessage, pp.getErrorIndex());

Hunk headers are ``NcN,M`` / ``NaN`` / ``NdN``; removed lines carry a ``< ``
marker, added lines ``> ``, and change hunks separate the two with ``---``.
``parse_diff`` is the exact inverse on anything ``compute_diff`` can emit.

Text is split on ``"\\n"``; a final line without a trailing newline is
treated as a line (no ``\\ No newline at end of file`` marker is emitted or
understood), so ``"a"`` and ``"a\\n"`` diff identically and
``apply_diff`` always returns newline-terminated text.
"""

from dataclasses import dataclass

from .errors import DiffApplyError, DiffParseError

_MARK_REMOVED = "< "
_MARK_ADDED = "> "
_SEPARATOR = "---"

KIND_CHANGE = "change"
KIND_ADD = "add"
KIND_DELETE = "delete"


@dataclass(frozen=True)
class SourcePair:
    """An original/patched source text pair plus provenance."""

    original: str
    patched: str
    patch_id: str
    project: str = ""
    llm: str = ""


@dataclass(frozen=True)
class Hunk:
    """One contiguous edit.

    Ranges are 1-based and inclusive. An add hunk has an empty original
    range anchored *after* line ``orig_start`` (``orig_end == orig_start - 1``,
    with ``orig_start == 0`` for an insertion before the first line); a delete
    hunk mirrors that on the patched side.
    """

    kind: str
    orig_start: int
    orig_end: int
    patched_start: int
    patched_end: int
    removed: tuple[str, ...] = ()
    added: tuple[str, ...] = ()

    @property
    def header(self) -> str:
        if self.kind == KIND_ADD:
            return f"{self.orig_start}a{_format_range(self.patched_start, self.patched_end)}"
        if self.kind == KIND_DELETE:
            return f"{_format_range(self.orig_start, self.orig_end)}d{self.patched_start}"
        return (
            f"{_format_range(self.orig_start, self.orig_end)}"
            f"c{_format_range(self.patched_start, self.patched_end)}"
        )


@dataclass(frozen=True)
class PatchDiff:
    """A parsed diff plus its canonical normal-format rendering."""

    hunks: tuple[Hunk, ...] = ()
    raw: str = ""


def _format_range(start: int, end: int) -> str:
    return str(start) if start == end else f"{start},{end}"


def split_lines(text: str) -> list[str]:
    """Split text into lines, dropping the empty tail of a trailing newline."""
    if not text:
        return []
    lines = text.split("\n")
    if lines[-1] == "":
        lines.pop()
    return lines


def join_lines(lines: list[str]) -> str:
    """Inverse of split_lines under the always-newline-terminated convention."""
    if not lines:
        return ""
    return "\n".join(lines) + "\n"


def _myers_edits(a: list[str], b: list[str]) -> list[tuple[str, int, int]]:
    """Shortest edit script as ("keep"|"del"|"ins", a_index, b_index) tuples.

    Standard greedy forward search over diagonals with a per-round trace for
    backtracking. Indices are 0-based positions in ``a`` and ``b``.
    """
    n, m = len(a), len(b)
    if n == 0 and m == 0:
        return []
    v: dict[int, int] = {1: 0}
    trace: list[dict[int, int]] = []
    found = False
    for d in range(n + m + 1):
        trace.append(dict(v))
        for k in range(-d, d + 1, 2):
            if k == -d or (k != d and v.get(k - 1, 0) < v.get(k + 1, 0)):
                x = v.get(k + 1, 0)
            else:
                x = v.get(k - 1, 0) + 1
            y = x - k
            while x < n and y < m and a[x] == b[y]:
                x += 1
                y += 1
            v[k] = x
            if x >= n and y >= m:
                found = True
                break
        if found:
            break

    edits: list[tuple[str, int, int]] = []
    x, y = n, m
    for d in range(len(trace) - 1, -1, -1):
        vd = trace[d]
        k = x - y
        if k == -d or (k != d and vd.get(k - 1, 0) < vd.get(k + 1, 0)):
            prev_k = k + 1
        else:
            prev_k = k - 1
        prev_x = vd.get(prev_k, 0)
        prev_y = prev_x - prev_k
        while x > prev_x and y > prev_y:
            edits.append(("keep", x - 1, y - 1))
            x -= 1
            y -= 1
        if d > 0:
            if x == prev_x:
                edits.append(("ins", x, y - 1))
            else:
                edits.append(("del", x - 1, y))
        x, y = prev_x, prev_y
    edits.reverse()
    return edits


def _hunks_from_edits(
    edits: list[tuple[str, int, int]], a: list[str], b: list[str]
) -> list[Hunk]:
    hunks: list[Hunk] = []
    run_del: list[int] = []
    run_ins: list[int] = []
    # a/b line counts consumed before the current run started
    anchor_a = 0
    anchor_b = 0

    def flush() -> None:
        if not run_del and not run_ins:
            return
        removed = tuple(a[i] for i in run_del)
        added = tuple(b[j] for j in run_ins)
        if removed and added:
            hunks.append(
                Hunk(
                    KIND_CHANGE,
                    run_del[0] + 1,
                    run_del[-1] + 1,
                    run_ins[0] + 1,
                    run_ins[-1] + 1,
                    removed,
                    added,
                )
            )
        elif removed:
            hunks.append(
                Hunk(
                    KIND_DELETE,
                    run_del[0] + 1,
                    run_del[-1] + 1,
                    anchor_b,
                    anchor_b - 1,
                    removed,
                    (),
                )
            )
        else:
            hunks.append(
                Hunk(
                    KIND_ADD,
                    anchor_a,
                    anchor_a - 1,
                    run_ins[0] + 1,
                    run_ins[-1] + 1,
                    (),
                    added,
                )
            )
        run_del.clear()
        run_ins.clear()

    pos_a = 0
    pos_b = 0
    for op, i, j in edits:
        if op == "keep":
            flush()
            pos_a = i + 1
            pos_b = j + 1
            anchor_a = pos_a
            anchor_b = pos_b
        elif op == "del":
            run_del.append(i)
            pos_a = i + 1
        else:
            run_ins.append(j)
            pos_b = j + 1
    flush()
    return hunks


def render_hunks(hunks: tuple[Hunk, ...] | list[Hunk]) -> str:
    """Canonical normal-format text for a hunk sequence; "" when empty."""
    out: list[str] = []
    for h in hunks:
        out.append(h.header)
        for line in h.removed:
            out.append(_MARK_REMOVED + line)
        if h.kind == KIND_CHANGE:
            out.append(_SEPARATOR)
        for line in h.added:
            out.append(_MARK_ADDED + line)
    if not out:
        return ""
    return "\n".join(out) + "\n"


def compute_diff(original: str, patched: str) -> PatchDiff:
    """Diff two source texts into normal format. Identical texts give 0 hunks."""
    a = split_lines(original)
    b = split_lines(patched)
    if a == b:
        return PatchDiff()
    hunks = tuple(_hunks_from_edits(_myers_edits(a, b), a, b))
    return PatchDiff(hunks=hunks, raw=render_hunks(hunks))


def diff_pair(pair: SourcePair) -> PatchDiff:
    return compute_diff(pair.original, pair.patched)


_HEADER_LETTERS = ("a", "c", "d")


def _parse_header(line: str, lineno: int) -> tuple[str, int, int, int, int]:
    letter = None
    for cand in _HEADER_LETTERS:
        if cand in line:
            letter = cand
            break
    if letter is None:
        raise DiffParseError(f"expected a hunk header, got {line!r}", lineno)
    left, _, right = line.partition(letter)

    def parse_side(side: str, single_only: bool) -> tuple[int, int]:
        parts = side.split(",")
        if not all(p.isdigit() for p in parts) or len(parts) > 2:
            raise DiffParseError(f"bad line range {side!r} in {line!r}", lineno)
        if single_only and len(parts) != 1:
            raise DiffParseError(
                f"range {side!r} not allowed on this side of {letter!r}", lineno
            )
        start = int(parts[0])
        end = int(parts[-1])
        if end < start:
            raise DiffParseError(f"descending range {side!r}", lineno)
        return start, end

    orig = parse_side(left, single_only=letter == "a")
    patched = parse_side(right, single_only=letter == "d")
    return letter, orig[0], orig[1], patched[0], patched[1]


def parse_diff(raw: str) -> PatchDiff:
    """Parse normal-format diff text. Inverse of rendering for computed diffs."""
    lines = split_lines(raw)
    hunks: list[Hunk] = []
    i = 0

    def take_marked(count: int, marker: str, what: str) -> tuple[str, ...]:
        nonlocal i
        taken: list[str] = []
        for _ in range(count):
            if i >= len(lines):
                raise DiffParseError(f"unexpected end of diff, wanted {what}", len(lines))
            line = lines[i]
            if line.startswith(marker):
                taken.append(line[len(marker):])
            elif line == marker.rstrip():
                taken.append("")
            else:
                raise DiffParseError(f"expected {what}, got {line!r}", i + 1)
            i += 1
        return tuple(taken)

    last_consumed = 0
    while i < len(lines):
        header_line = i + 1
        letter, os_, oe, ps, pe = _parse_header(lines[i], i + 1)
        position = os_ if letter == "a" else os_ - 1
        if position < last_consumed:
            raise DiffParseError("hunks overlap or are out of order", header_line)
        last_consumed = os_ if letter == "a" else oe
        i += 1
        if letter == "a":
            added = take_marked(pe - ps + 1, _MARK_ADDED, "an added line")
            hunks.append(Hunk(KIND_ADD, os_, os_ - 1, ps, pe, (), added))
        elif letter == "d":
            removed = take_marked(oe - os_ + 1, _MARK_REMOVED, "a removed line")
            hunks.append(Hunk(KIND_DELETE, os_, oe, ps, ps - 1, removed, ()))
        else:
            removed = take_marked(oe - os_ + 1, _MARK_REMOVED, "a removed line")
            if i >= len(lines) or lines[i] != _SEPARATOR:
                raise DiffParseError("expected --- separator", i + 1)
            i += 1
            added = take_marked(pe - ps + 1, _MARK_ADDED, "an added line")
            hunks.append(Hunk(KIND_CHANGE, os_, oe, ps, pe, removed, added))
    parsed = tuple(hunks)
    return PatchDiff(hunks=parsed, raw=render_hunks(parsed))


def is_textual_noop(diff: PatchDiff) -> bool:
    """True iff the diff contains no hunks at all.

    Whitespace-only edits are still textual changes; only the classifier can
    call those semantically neutral.
    """
    return len(diff.hunks) == 0


def apply_diff(diff: PatchDiff, original: str) -> str:
    """Apply the edit script to the original text, reproducing the patched text.

    Removed lines are checked against the original; a mismatch raises
    DiffApplyError. Output follows the newline-terminated convention.
    """
    src = split_lines(original)
    out: list[str] = []
    pos = 0  # 0-based index of the next original line to copy
    for h in diff.hunks:
        keep_until = h.orig_start if h.kind == KIND_ADD else h.orig_start - 1
        if keep_until < pos or keep_until > len(src):
            raise DiffApplyError(f"hunk {h.header} out of order or past end of file")
        out.extend(src[pos:keep_until])
        pos = keep_until
        if h.removed:
            actual = tuple(src[pos : pos + len(h.removed)])
            if actual != h.removed:
                raise DiffApplyError(
                    f"hunk {h.header}: original lines do not match the edit script"
                )
            pos += len(h.removed)
        out.extend(h.added)
    out.extend(src[pos:])
    return join_lines(out)
