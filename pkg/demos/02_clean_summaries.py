# LLM summaries arrive with boilerplate, quotes, and inconsistent verbs.
# clean_summary normalizes them deterministically so the same edit always
# produces the same text, whatever mood the model was in.

from patchtriage.summaries import build_prompt, clean_summary, word_count

raw_outputs = [
    'Here is a 15-word summary: "Updated the loop bound to avoid an off-by-one error"',
    "Java diff: `added a null check before dereferencing the parser result`",
    "  updates   the   comparator “to use reverse order”  ",
]

for raw in raw_outputs:
    cleaned = clean_summary(raw)
    print(f"{raw!r}\n  -> {cleaned!r}  ({word_count(cleaned)} words)")

# cleanup is idempotent: cleaning a cleaned summary changes nothing
once = clean_summary(raw_outputs[0])
print("idempotent:", clean_summary(once) == once)

# the prompt sent to the LLM is a fixed prefix plus the diff text
print(build_prompt("5c5\n< old line\n---\n> new line\n")[:60] + "...")
