import itertools

import pytest

from lieforest.forest import (
    NonplanarForest,
    PlanarForest,
    PlanarTree,
    enumerate_planar_forests,
    enumerate_planar_trees,
    parse_forest,
    to_nonplanar,
)
from lieforest.series import Series

ACCEPTANCE_RESULTS: dict = {}


def S(text, coeff=1, truncation=12, planar=True):
    """Single-term series from bracket text."""
    f = parse_forest(text, planar=planar)
    return Series({f: coeff}, truncation=truncation)


def forests_upto(n, planar=True):
    out = []
    for d in range(n + 1):
        fs = enumerate_planar_forests(d)
        out.extend(fs if planar else sorted(set(map(to_nonplanar, fs)), key=lambda f: f.key))
    return out


def trees_upto(n):
    return [t for d in range(1, n + 1) for t in enumerate_planar_trees(d)]


def tree_series(t, truncation=12):
    return Series({PlanarForest((t,)): 1}, truncation=truncation)


def forest_series(f, truncation=12):
    return Series({f: 1}, truncation=truncation)


def brute_planar_trees(n):
    """Every bracket string '[' + w + ']' with w balanced of length 2(n-1)."""
    out = set()
    for letters in itertools.product("[]", repeat=2 * (n - 1)):
        depth = 0
        ok = True
        for ch in letters:
            depth += 1 if ch == "[" else -1
            if depth < 0:
                ok = False
                break
        if ok and depth == 0:
            out.add("[" + "".join(letters) + "]")
    return out


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        ok, title = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key:2d}: {title}")


@pytest.fixture
def leaf():
    return Series({PlanarForest((PlanarTree(),)): 1}, truncation=12)


__all__ = ["S", "forests_upto", "trees_upto", "tree_series", "forest_series", "NonplanarForest"]
