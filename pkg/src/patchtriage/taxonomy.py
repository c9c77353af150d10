"""The fixed 18-category taxonomy of patch edit types.

The categories are compiled-in constant data; ``data/taxonomy.json`` mirrors
them (with a version string) for consumers that want a file, e.g. the
annotation frontend.
"""

from .errors import InvalidCategory

TAXONOMY_VERSION = "1"

DESCRIPTIONS: tuple[str, ...] = (
    "Added (some arbitrary) code from GitHub",
    "No change",
    "Modified a comment (add/remove/edit)",
    "Deleted blocks in a method (all/most/some)",
    "Duplicate code",
    "Modifications to return statements (add/remove/edit)",
    "Changes to method names",
    "Changed data types or type usage and generics",
    "Includes inlining of implementations (sort, methods...)",
    "Added exception-handling constructs (unreachable or reachable)",
    "Added extra brackets",
    "Added synchronization logic",
    "Modified Variable/Class/Object Name",
    "Modified Control Flow Structure",
    "Modified Object/Primitive Creation or Initialization",
    "Split a statement into multiple lines",
    "Arithmetic manipulation (boolean var. or expr. manipulations)",
    "Added dead code",
)

NUM_CATEGORIES = len(DESCRIPTIONS)

# Edits with no observable behavioral effect: no change, comment-only, dead code.
NOOP_CATEGORIES = frozenset({1, 2, 17})

ALL_CATEGORY_IDS = tuple(range(NUM_CATEGORIES))


def check_category(category: int) -> int:
    """Return ``category`` unchanged, raising InvalidCategory when out of range."""
    if not isinstance(category, int) or isinstance(category, bool):
        raise InvalidCategory(f"category id must be an integer, got {category!r}")
    if not 0 <= category < NUM_CATEGORIES:
        raise InvalidCategory(
            f"category id {category} out of range 0..{NUM_CATEGORIES - 1}"
        )
    return category


def describe(category: int) -> str:
    """Human-readable description of a category id."""
    return DESCRIPTIONS[check_category(category)]


def is_noop_category(category: int) -> bool:
    """True when patches of this category have no observable behavioral effect."""
    return check_category(category) in NOOP_CATEGORIES


def export_taxonomy() -> list[dict]:
    """Taxonomy as plain JSON-ready data: [{"id", "description", "noop"}, ...]."""
    return [
        {"id": i, "description": DESCRIPTIONS[i], "noop": i in NOOP_CATEGORIES}
        for i in ALL_CATEGORY_IDS
    ]
