import random
import socket

import pytest

from patchtriage.augment import default_templates
from patchtriage.dataset import PatchRecord


@pytest.fixture(autouse=True, scope="session")
def no_network():
    """The whole suite must pass offline; fail fast if anything opens a socket."""
    real_connect = socket.socket.connect

    def blocked(self, address):
        raise RuntimeError(f"network access attempted during tests: {address!r}")

    socket.socket.connect = blocked
    try:
        yield
    finally:
        socket.socket.connect = real_connect


@pytest.fixture(scope="session")
def templates():
    return default_templates()


def make_replay_records(n: int = 100, seed: int = 7) -> list[PatchRecord]:
    """Deterministic replay stream exercising every decision reason.

    Category 0 dominates with a 5% pass rate so the pass-rate rule engages
    once its sample count crosses the threshold; categories 1/2/17 exercise
    the NoOp rule; the rest stay under the sample minimum.
    """
    population = [0] * 30 + [4] * 25 + [1] * 10 + [2] * 8 + [17] * 7 + [5, 6, 7, 9, 13] * 4
    rng = random.Random(seed)
    records = []
    for i in range(n):
        category = rng.choice(population)
        compiled = rng.random() < 0.85
        pass_chance = 0.05 if category == 0 else 0.45
        passed = compiled and rng.random() < pass_chance
        noop = category in (1, 2, 17) and rng.random() < 0.7
        records.append(
            PatchRecord(
                patch_id=f"p{i:03d}",
                project="demo",
                llm="mock",
                diff_raw="",
                category_auto=category,
                compiled=compiled,
                passed=passed,
                noop=noop,
            )
        )
    return records


@pytest.fixture(scope="session")
def replay_records():
    return make_replay_records()
