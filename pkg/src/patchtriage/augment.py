"""Template-based synthetic summary generation.

Training data for the summary classifier is scarce (hand-labeling is the
bottleneck), so each category's corpus is topped up with synthetic summaries
rendered from sentence templates with named slots. The bundled template file
keeps each category's slot vocabulary discriminative: a category's keywords
appear in its own fillers and nowhere else, which is what makes the synthetic
corpus near-separable for the offline hashing embedder.

Template file layout (JSON): {"<category id>": {"templates": [...],
"slots": {name: [fillers...]}, "keywords": [...]}}. The ``keywords`` list
drives the consistency scanner that stands in for manual review of the
generated data.
"""

import itertools
import json
import random
import re
from dataclasses import dataclass
from importlib import resources

from .dataset import LabeledSummary, dedup_summaries
from .embeddings import tokenize
from .errors import InvalidCategory, SchemaError
from .summaries import clean_summary
from .taxonomy import ALL_CATEGORY_IDS, check_category

_PLACEHOLDER = re.compile(r"\{([A-Za-z_][A-Za-z0-9_]*)\}")

# distinct primes keep per-category RNG streams apart for a shared user seed
_SEED_MIX = 1_000_003


@dataclass(frozen=True)
class CategoryTemplates:
    templates: tuple[str, ...]
    slots: dict[str, tuple[str, ...]]
    keywords: tuple[str, ...]


@dataclass(frozen=True)
class TemplateSet:
    categories: dict[int, CategoryTemplates]

    def validate(self) -> "TemplateSet":
        if sorted(self.categories) != list(ALL_CATEGORY_IDS):
            raise SchemaError("template file must cover every taxonomy category exactly once")
        seen_templates: dict[str, int] = {}
        for cid, entry in self.categories.items():
            if len(entry.templates) < 3:
                raise SchemaError(f"category {cid}: needs at least 3 templates")
            if not entry.keywords:
                raise SchemaError(f"category {cid}: empty keyword list")
            for name, fillers in entry.slots.items():
                if len(fillers) < 2:
                    raise SchemaError(f"category {cid}: slot {name!r} needs at least 2 fillers")
            for template in entry.templates:
                if template in seen_templates and seen_templates[template] != cid:
                    raise SchemaError(
                        f"template {template!r} appears in categories "
                        f"{seen_templates[template]} and {cid}"
                    )
                seen_templates[template] = cid
                for name in _PLACEHOLDER.findall(template):
                    if name not in entry.slots:
                        raise SchemaError(
                            f"category {cid}: template references unknown slot {name!r}"
                        )
        keyword_owner: dict[str, int] = {}
        for cid, entry in self.categories.items():
            for kw in entry.keywords:
                if kw in keyword_owner:
                    raise SchemaError(
                        f"keyword {kw!r} claimed by categories {keyword_owner[kw]} and {cid}"
                    )
                keyword_owner[kw] = cid
        for cid in self.categories:
            for text in expand_all(self, cid):
                if clean_summary(text) != text:
                    raise SchemaError(f"category {cid}: {text!r} is not in cleaned form")
                if not set(tokenize(text)) & set(self.categories[cid].keywords):
                    raise SchemaError(
                        f"category {cid}: expansion {text!r} contains none of its keywords"
                    )
        return self


def _parse_template_set(doc: dict) -> TemplateSet:
    if not isinstance(doc, dict):
        raise SchemaError("template file must be a JSON object keyed by category id")
    categories: dict[int, CategoryTemplates] = {}
    for key, entry in doc.items():
        try:
            cid = check_category(int(key))
        except (ValueError, InvalidCategory) as exc:
            raise SchemaError(f"bad category key {key!r}") from exc
        if not isinstance(entry, dict):
            raise SchemaError(f"category {key}: entry must be an object")
        categories[cid] = CategoryTemplates(
            templates=tuple(str(t) for t in entry.get("templates", [])),
            slots={
                str(name): tuple(str(f) for f in fillers)
                for name, fillers in entry.get("slots", {}).items()
            },
            keywords=tuple(str(k) for k in entry.get("keywords", [])),
        )
    return TemplateSet(categories).validate()


def load_templates(path) -> TemplateSet:
    with open(path, "r", encoding="utf-8") as fh:
        return _parse_template_set(json.load(fh))


def default_templates() -> TemplateSet:
    """The template set bundled with the package."""
    text = resources.files("patchtriage.data").joinpath("templates.json").read_text("utf-8")
    return _parse_template_set(json.loads(text))


def _slot_order(template: str) -> list[str]:
    order = []
    for name in _PLACEHOLDER.findall(template):
        if name not in order:
            order.append(name)
    return order


def _render(template: str, values: dict[str, str]) -> str:
    rendered = _PLACEHOLDER.sub(lambda m: values[m.group(1)], template)
    return " ".join(rendered.split())


def expand_all(templates: TemplateSet, category: int) -> list[str]:
    """Every distinct summary the category can produce, in a fixed order."""
    entry = _entry(templates, category)
    out: dict[str, None] = {}
    for template in entry.templates:
        names = _slot_order(template)
        for combo in itertools.product(*(entry.slots[n] for n in names)):
            out[_render(template, dict(zip(names, combo)))] = None
    return list(out)


def _entry(templates: TemplateSet, category: int) -> CategoryTemplates:
    check_category(category)
    try:
        return templates.categories[category]
    except KeyError:
        raise InvalidCategory(f"category {category} missing from template set") from None


def generate_summaries(
    templates: TemplateSet, category: int, n: int, seed: int = 42
) -> list[LabeledSummary]:
    """n independent seeded-random draws (template, then one filler per slot).

    Draws are with replacement; use augment_dataset when uniqueness matters.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    entry = _entry(templates, category)
    rng = random.Random(_SEED_MIX * seed + category)
    out = []
    for _ in range(n):
        template = rng.choice(entry.templates)
        values = {name: rng.choice(entry.slots[name]) for name in _slot_order(template)}
        out.append(LabeledSummary(_render(template, values), category, synthetic=True))
    return out


def augment_dataset(
    seeds,
    templates: TemplateSet,
    per_category_target: int,
    rng_seed: int = 42,
    categories=None,
) -> list[LabeledSummary]:
    """Top every category up to the target count with unique synthetic entries.

    Seeds are kept (deduplicated, first occurrence wins); each category in
    ``categories`` (default: all 18) is then filled to
    min(target, achievable-unique) by walking a seeded shuffle of the
    category's full expansion space and skipping texts already present.
    Output lists the deduplicated seeds first, then generated entries grouped
    by ascending category.
    """
    if per_category_target < 0:
        raise ValueError(f"per_category_target must be >= 0, got {per_category_target}")
    if categories is None:
        categories = ALL_CATEGORY_IDS
    categories = sorted({check_category(int(c)) for c in categories})

    kept = dedup_summaries(list(seeds))
    texts = {s.text for s in kept}
    counts: dict[int, int] = {}
    for s in kept:
        counts[s.category] = counts.get(s.category, 0) + 1

    generated: list[LabeledSummary] = []
    for category in categories:
        need = per_category_target - counts.get(category, 0)
        if need <= 0:
            continue
        pool = expand_all(templates, category)
        random.Random(_SEED_MIX * rng_seed + category).shuffle(pool)
        for text in pool:
            if need == 0:
                break
            if text in texts:
                continue
            texts.add(text)
            generated.append(LabeledSummary(text, category, synthetic=True))
            need -= 1
    return kept + generated


def check_keyword_consistency(templates: TemplateSet, summaries) -> list[tuple[int, str]]:
    """Scan labeled summaries for ones lacking their category's keywords.

    Returns (index, text) pairs for every summary whose token set misses all
    of its labeled category's keywords, the automated stand-in for a human
    review of the synthetic corpus. An empty list means the corpus passed.
    """
    violations = []
    for i, summary in enumerate(summaries):
        entry = _entry(templates, summary.category)
        if not set(tokenize(summary.text)) & set(entry.keywords):
            violations.append((i, summary.text))
    return violations
