from __future__ import annotations

import functools

import pytest

from hyperocc import hardcore
from hyperocc.constructions import Family, FamilySpec, build
from hyperocc.hypergraph import Hypergraph

_ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {detail}"
    _ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def cycle4() -> Hypergraph:
    return Hypergraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


def disjoint_edges(m: int, r: int = 3) -> Hypergraph:
    return Hypergraph.from_edges(m * r, [tuple(range(i * r, (i + 1) * r)) for i in range(m)])


def family(name: str, d: int, r=None) -> Hypergraph:
    return build(FamilySpec(Family(name), d, r))


@functools.lru_cache(maxsize=None)
def poly_of(name: str, d: int, r, k: int) -> hardcore.IndependencePolynomial:
    """Cached independence polynomial of a named construction."""
    return hardcore.independence_polynomial(family(name, d, r), k)


def small_corpus() -> dict[str, Hypergraph]:
    """Hypergraphs small enough (n <= 15) for the subset-scan oracle."""
    return {
        "C4": cycle4(),
        "KRRT(3)": family("KRRT", 2, 3),
        "TRIPARTITE_K(2)": family("TRIPARTITE_K", 2),
        "MOD3(2)": family("MOD3", 2),
        "MOD3(3)": family("MOD3", 3),
        "KDD(3)": family("KDD", 3),
        "HRD(3,5)": family("HRD", 5, 3),
        "edges x2": disjoint_edges(2),
    }


@pytest.fixture(scope="session")
def corpus() -> dict[str, Hypergraph]:
    return small_corpus()
