"""Independent oracles shared by the test modules.

These never call the package's matching or search kernels: squares are found
by a quadratic scan and occurrences by Python's backtracking regex engine.
"""
from __future__ import annotations

import itertools
import re
from functools import lru_cache

import pytest


def brute_square(text: str, tmin: int = 1, tmax: int | None = None):
    n = len(text)
    tmax = n // 2 if tmax is None else tmax
    for p in range(tmin, tmax + 1):
        for i in range(n - 2 * p + 1):
            if text[i:i + p] == text[i + p:i + 2 * p]:
                return i, p
    return None


def brute_square_free(k: int, n: int) -> list[str]:
    letters = "0123456789"[:k]
    return ["".join(t) for t in itertools.product(letters, repeat=n)
            if brute_square("".join(t)) is None]


@lru_cache(maxsize=None)
def formula_regex(formula: str) -> re.Pattern:
    """Match ``w#w#...#w`` (one copy per fragment) iff ``w`` contains an occurrence."""
    seen: set[str] = set()
    parts = []
    for frag in formula.split("."):
        body = ""
        for v in frag:
            if v in seen:
                body += f"(?P={v})"
            else:
                seen.add(v)
                body += f"(?P<{v}>[0-9]+)"
        parts.append(f"[0-9]*?{body}[0-9]*")
    return re.compile("#".join(parts))


def regex_contains(word: str, formula: str) -> bool:
    n = formula.count(".") + 1
    return formula_regex(formula).fullmatch("#".join([word] * n)) is not None


def all_binary(n: int):
    for t in itertools.product("01", repeat=n):
        yield "".join(t)


@pytest.fixture(scope="session")
def oracle():
    class Oracle:
        square = staticmethod(brute_square)
        square_free = staticmethod(brute_square_free)
        contains = staticmethod(regex_contains)
        binary = staticmethod(all_binary)
    return Oracle


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    import sys
    mod = sys.modules.get("test_acceptance")
    outcomes = {}
    for key in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(key, []):
            name = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" in name and rep.when == "call":
                outcomes[int(name.split("test_criterion_")[1][:2])] = rep.passed
    if not outcomes:
        return
    results = getattr(mod, "RESULTS", {})
    terminalreporter.section("acceptance criteria")
    for n in sorted(outcomes):
        detail = results.get(n, (None, "raised before reporting"))[1]
        terminalreporter.write_line(f"{'PASS' if outcomes[n] else 'FAIL'} criterion {n}: {detail}")
