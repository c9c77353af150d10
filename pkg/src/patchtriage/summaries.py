"""Short natural-language summaries of diffs: prompt, backend client, cleanup.

The LLM backend is a JSON-over-HTTP completion endpoint configured at
runtime, never a code dependency; tests run against mocks. Cleanup is the
deterministic scrub applied before a summary reaches the classifier:
padded lead-in phrases go, quotation marks and backticks go, whitespace is
collapsed, and a small verb table maps e.g. "update" onto "modify".
"""

import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import requests

from .errors import (
    BackendUnavailable,
    EmptyCompletion,
    EmptyDiff,
    EmptySummary,
)

PROMPT_PREFIX = "Summarize the following Java diff in exactly 15 words: "

DEFAULT_STRIP_PREFIXES = (
    "here is a 15-word summary:",
    "here is a 15 word summary:",
    "java diff:",
)
DEFAULT_STRIP_CHARS = frozenset('"\'`“”‘’')
DEFAULT_VERB_MAP = {
    "update": "modify",
    "updates": "modifies",
    "updated": "modified",
    "updating": "modifying",
}

DEFAULT_PARALLELISM = 4


@dataclass(frozen=True)
class SummarizerConfig:
    endpoint: str
    model_name: str = "llama3"
    timeout: float = 60.0
    max_retries: int = 2
    temperature: float = 0.0

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError("timeout must be > 0")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")


@dataclass(frozen=True)
class CleanupRules:
    """Deterministic cleanup configuration.

    The verb map must be chain-free (no value may itself be a key with a
    different target); that is what makes the cleanup idempotent.
    """

    strip_prefixes: tuple[str, ...] = DEFAULT_STRIP_PREFIXES
    strip_chars: frozenset[str] = DEFAULT_STRIP_CHARS
    verb_map: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_VERB_MAP))

    def __post_init__(self):
        for word, target in self.verb_map.items():
            low_target = target.lower()
            if low_target in self.verb_map and self.verb_map[low_target] != target:
                raise ValueError(
                    f"verb_map is not idempotent: {word!r} -> {target!r} -> "
                    f"{self.verb_map[low_target]!r}"
                )


def build_prompt(diff_raw: str) -> str:
    """The fixed summarization instruction with the raw diff appended."""
    if not diff_raw:
        raise EmptyDiff(
            "an empty diff needs no summary; treat the patch as a textual no-op"
        )
    return PROMPT_PREFIX + diff_raw


def _completion_text(payload) -> str | None:
    """Pull the completion string out of the common local-server response shapes."""
    if isinstance(payload, str):
        return payload
    if not isinstance(payload, dict):
        return None
    for key in ("response", "text", "completion", "content"):
        value = payload.get(key)
        if isinstance(value, str):
            return value
    choices = payload.get("choices")
    if isinstance(choices, list) and choices:
        first = choices[0]
        if isinstance(first, dict):
            if isinstance(first.get("text"), str):
                return first["text"]
            message = first.get("message")
            if isinstance(message, dict) and isinstance(message.get("content"), str):
                return message["content"]
    return None


def summarize(config: SummarizerConfig, diff_raw: str) -> str:
    """Ask the backend for a summary of the diff; returns the completion verbatim."""
    prompt = build_prompt(diff_raw)
    body = {
        "model": config.model_name,
        "prompt": prompt,
        "temperature": config.temperature,
    }
    last_error: Exception | None = None
    for _ in range(config.max_retries + 1):
        try:
            response = requests.post(config.endpoint, json=body, timeout=config.timeout)
            if response.status_code >= 500:
                last_error = BackendUnavailable(
                    f"backend returned {response.status_code}"
                )
                continue
            response.raise_for_status()
            payload = response.json()
        except requests.RequestException as exc:
            last_error = exc
            continue
        except ValueError as exc:
            raise BackendUnavailable(f"backend sent non-JSON response: {exc}") from exc
        text = _completion_text(payload)
        if text is None:
            raise BackendUnavailable(
                "backend response has no recognizable completion field"
            )
        if not text.strip():
            raise EmptyCompletion("backend returned an empty completion")
        return text
    raise BackendUnavailable(
        f"backend unreachable after {config.max_retries + 1} attempt(s): {last_error}"
    ) from last_error


def summarize_batch(
    config: SummarizerConfig,
    diffs: list[str],
    parallelism: int = DEFAULT_PARALLELISM,
) -> list[str]:
    """Summarize many diffs with bounded concurrency; results in input order."""
    if not diffs:
        return []
    with ThreadPoolExecutor(max_workers=max(1, parallelism)) as pool:
        return list(pool.map(lambda d: summarize(config, d), diffs))


_WORD = re.compile(r"\w+")


def _map_words(text: str, verb_map: dict[str, str]) -> str:
    if not verb_map:
        return text

    def repl(match: re.Match) -> str:
        word = match.group(0)
        target = verb_map.get(word.lower())
        if target is None:
            return word
        if word[:1].isupper():
            return target[:1].upper() + target[1:]
        return target

    return _WORD.sub(repl, text)


def _cleanup_pass(text: str, rules: CleanupRules) -> str:
    s = text.strip()
    stripped = True
    while stripped:
        stripped = False
        low = s.lower()
        for prefix in rules.strip_prefixes:
            if prefix and low.startswith(prefix.lower()):
                s = s[len(prefix):].strip()
                low = s.lower()
                stripped = True
    if rules.strip_chars:
        s = s.translate({ord(c): None for c in rules.strip_chars})
    s = " ".join(s.split())
    return _map_words(s, rules.verb_map)


def clean_summary(raw: str, rules: CleanupRules | None = None) -> str:
    """Scrub a raw summary into the form the classifier was trained on.

    The pass order is: trim, strip lead-in phrases, delete quote characters,
    collapse whitespace, map verbs. Passes repeat until the text is stable,
    so a padded phrase revealed by quote deletion still gets stripped and the
    whole cleanup is idempotent.
    """
    rules = rules if rules is not None else CleanupRules()
    s = raw
    for _ in range(16):
        nxt = _cleanup_pass(s, rules)
        if nxt == s:
            break
        s = nxt
    if not s:
        raise EmptySummary(f"nothing left of summary {raw!r} after cleanup")
    return s


def word_count(summary: str) -> int:
    """Number of whitespace-separated words; recorded as metadata only."""
    return len(summary.split())
