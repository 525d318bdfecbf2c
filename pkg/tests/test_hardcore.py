from fractions import Fraction
from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conftest import cycle4, disjoint_edges, family, small_corpus
from hyperocc import hardcore
from hyperocc.constructions import Family, FamilySpec, predicted_count
from hyperocc.hypergraph import Hypergraph


def test_cycle4_polynomial():
    P = hardcore.independence_polynomial(cycle4(), 2)
    assert P.coeffs == (1, 4, 2) and P.total == 7 and P.degree == 2
    assert P.to_json() == ["1", "4", "2"]
    assert P(1) == 7 and P(Fraction(1, 2)) == Fraction(7, 2)


def test_edgeless_binomial_row():
    for n in range(6):
        P = hardcore.independence_polynomial(Hypergraph.from_edges(n, []), 3)
        assert list(P.coeffs) == [comb(n, m) for m in range(n + 1)]


def test_named_counts():
    assert hardcore.count(family("MOD3", 2), 2) == 10
    assert hardcore.count(family("KDD", 3), 2) == 15
    assert hardcore.count(family("HRD", 5, 3), 2) == 94
    assert hardcore.count(family("KRRT", 2, 3), 2) == 34


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_mod3_strong_formula(d):
    assert hardcore.count(family("MOD3", d), 2) == predicted_count(FamilySpec(Family.MOD3, d), 2).value


@pytest.mark.parametrize("d", [3, 5])
def test_h4_strong_formula(d):
    assert hardcore.count(family("H4", d), 2) == 4 * 2 ** d - 3


def test_hrd_strong_formula():
    assert hardcore.count(family("HRD", 7, 5), 2) == 636


@pytest.mark.parametrize("d", [2, 3, 4])
def test_kdd_formula(d):
    assert hardcore.count(family("KDD", d), 2) == 2 ** (d + 1) - 1


def test_h4_weak_count_exceeds_formula():
    # The closed form 4*2^{3d} - 6*2^{2d} + 4*2^d - 1 only counts sets that miss a whole part.
    H = family("H4", 3)
    n = hardcore.count(H, 4)
    assert n == 2550 > 1695
    # a weak-independent set meeting all four parts
    witness = (0, 3, 7, 10)
    assert hardcore.is_k_independent(H, 4, witness)
    assert {v // 3 for v in witness} == {0, 1, 2, 3}


@pytest.mark.parametrize("name", list(small_corpus()))
def test_polynomial_matches_subset_scan(name):
    H = small_corpus()[name]
    kmax = max(len(e) for e in H.edges)
    for k in range(2, kmax + 1):
        P = hardcore.independence_polynomial(H, k)
        assert list(P.coeffs) == oracles.scan_poly(H, k)
        assert hardcore.count(H, k) == P.total


def test_iter_sets_are_independent_and_complete():
    H = family("MOD3", 3)
    sets = list(hardcore.iter_independent_sets(H, 3))
    assert len(sets) == len(set(sets)) == oracles.scan_count(H, 3)
    assert all(hardcore.is_k_independent(H, 3, s) for s in sets)


def test_budget_exceeded():
    with pytest.raises(hardcore.EnumerationBudgetExceeded, match="sampler"):
        hardcore.count(family("TRIPARTITE_K", 3), 3, budget=1000)


def test_level_checks():
    with pytest.raises(ValueError, match=">= 2"):
        hardcore.count(cycle4(), 1)
    with pytest.raises(ValueError, match="exceeds"):
        hardcore.count(cycle4(), 3)


def test_occupancy_examples():
    P = hardcore.independence_polynomial(cycle4(), 2)
    assert hardcore.occupancy_exact(P, 1) == Fraction(2, 7)
    assert hardcore.occupancy_exact(P, 0) == 0
    assert hardcore.occupancy_exact(P, "1/2") == oracles.poly_occupancy([1, 4, 2], 4, Fraction(1, 2))
    E = hardcore.independence_polynomial(Hypergraph.from_edges(3, []), 2)
    assert hardcore.occupancy_exact(E, Fraction(3, 5)) == Fraction(3, 8)
    with pytest.raises(ValueError):
        hardcore.occupancy_exact(P, -1)


def test_occupancy_float_path():
    P = hardcore.independence_polynomial(family("MOD3", 3), 2)
    x = hardcore.occupancy_exact(P, 0.3)
    assert isinstance(x, float)
    assert x == pytest.approx(float(hardcore.occupancy_exact(P, Fraction(0.3))), rel=1e-15)


@pytest.mark.parametrize("name", list(small_corpus()))
@pytest.mark.parametrize("lam", [Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(7, 3)])
def test_two_way_occupancy(name, lam):
    H = small_corpus()[name]
    P = hardcore.independence_polynomial(H, 2)
    assert hardcore.occupancy_exact(P, lam) == hardcore.occupancy_direct(H, 2, lam) == oracles.scan_occupancy(H, 2, lam)


@st.composite
def hypergraphs(draw):
    n = draw(st.integers(1, 9))
    pool = [c for size in (2, 3, 4) for c in combinations(range(n), size)]
    edges = draw(st.lists(st.sampled_from(pool), unique=True, max_size=8)) if pool else []
    return Hypergraph.from_edges(n, edges)


@settings(max_examples=120, deadline=None)
@given(hypergraphs(), st.fractions(min_value=0, max_value=5, max_denominator=20))
def test_universal_occupancy_bound(H, lam):
    k = max([2] + [len(e) for e in H.edges])
    P = hardcore.independence_polynomial(H, k)
    assert hardcore.occupancy_exact(P, lam) <= lam / (1 + lam)


@settings(max_examples=120, deadline=None)
@given(hypergraphs())
def test_counts_match_scan_and_monotone_in_k(H):
    kmax = max([2] + [len(e) for e in H.edges])
    counts = [hardcore.count(H, k) for k in range(2, kmax + 1)]
    assert counts == [oracles.scan_count(H, k) for k in range(2, kmax + 1)]
    assert counts == sorted(counts)


@settings(max_examples=60, deadline=None)
@given(hypergraphs(), st.fractions(min_value=0, max_value=3, max_denominator=10),
       st.fractions(min_value=Fraction(1, 10), max_value=1, max_denominator=10))
def test_partition_function_increasing(H, a, delta):
    P = hardcore.independence_polynomial(H, 2)
    assert P(a + delta) > P(a)


def test_as_fugacity():
    assert hardcore.as_fugacity("3/4") == Fraction(3, 4)
    assert hardcore.as_fugacity(2) == 2 and isinstance(hardcore.as_fugacity(2), Fraction)
    assert isinstance(hardcore.as_fugacity(0.5), float)
    with pytest.raises(ValueError):
        hardcore.as_fugacity("-1/2")
    with pytest.raises(ValueError):
        hardcore.as_fugacity(float("nan"))


def test_glauber_cycle_and_reproducible():
    H = cycle4()
    a = hardcore.glauber_estimate(H, 2, 1.0, 200_000, 5_000, seed=7)
    b = hardcore.glauber_estimate(H, 2, 1.0, 200_000, 5_000, seed=7)
    assert a == b
    assert abs(a.mean - 2 / 7) <= 4 * a.stderr
    assert a.stderr > 0


def test_glauber_trivial_cases():
    assert hardcore.glauber_estimate(cycle4(), 2, 0.0, 1000, 10).mean == 0.0
    est = hardcore.glauber_estimate(Hypergraph.from_edges(6, []), 2, 1.0, 100_000, 100, seed=1)
    assert abs(est.mean - 0.5) < 5 * est.stderr + 1e-3


def test_glauber_weak_sets():
    H = disjoint_edges(3)
    exact = float(hardcore.occupancy_exact(hardcore.independence_polynomial(H, 3), 1))
    est = hardcore.glauber_estimate(H, 3, 1.0, 200_000, 1000, seed=3)
    assert abs(est.mean - exact) <= 4 * est.stderr


def test_glauber_rejects_bad_parameters():
    with pytest.raises(ValueError):
        hardcore.glauber_estimate(cycle4(), 2, 1.0, 0, 10)
