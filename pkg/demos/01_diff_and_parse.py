"""
Computing and parsing patch diffs
=================================

A patch is stored as a POSIX normal-format diff between the original
source file and its patched version. This walkthrough produces one,
takes it apart, and applies it back.
"""

from patchtriage.diffs import apply_diff, compute_diff, parse_diff

original = """\
public double parse(String text) {
    try {
        return format.parse(text).doubleValue();
    } catch (ParseException e) {
        throw new RuntimeException(e);
    }
}
"""

# the patch replaces one line with two
patched = original.replace(
    "        throw new RuntimeException(e);\n",
    "        String message = e.getMessage();\n"
    "        throw new RuntimeException(message);\n",
)

diff = compute_diff(original, patched)
print(diff.raw)
# 5c5,6
# <         throw new RuntimeException(e);
# ---
# >         String message = e.getMessage();
# >         throw new RuntimeException(message);

# structured access: each hunk knows its kind and line ranges
for hunk in diff.hunks:
    print(hunk.header, hunk.kind, "removed:", hunk.removed, "added:", hunk.added)

# round trip: the raw text parses back to the same hunks
reparsed = parse_diff(diff.raw)
print("round-trip ok:", reparsed.hunks == diff.hunks)

# and the edit script reproduces the patched file exactly
print("apply ok:", apply_diff(diff, original) == patched)

# identical inputs produce an empty diff, which is how no-change
# patches are detected before wasting an LLM call on them
print("empty diff is noop:", compute_diff(original, original).raw == "")
