import json
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from conftest import cycle4, family
from hyperocc import hypergraph as hg
from hyperocc.hypergraph import Hypergraph, StructuralError


def test_cycle4_report():
    rep = hg.validate(cycle4())
    assert (rep.uniform_r, rep.regular_d, rep.is_linear, rep.is_cross_edge_free) == (2, 2, True, True)
    assert rep.witnesses == {}


def test_mod3_not_cross_edge_free():
    rep = hg.validate(family("MOD3", 3))
    assert (rep.uniform_r, rep.regular_d, rep.is_linear) == (3, 3, True)
    assert not rep.is_cross_edge_free
    w = rep.witnesses["cross_edge"]
    H = family("MOD3", 3)
    e = H.edges[w["edge"]]
    assert w["vertex"] not in e
    assert len(set(e) & hg.neighborhood(H, w["vertex"])) >= 2


def test_tripartite_cross_edge_free():
    rep = hg.validate(family("TRIPARTITE_K", 2))
    assert (rep.uniform_r, rep.regular_d, rep.is_linear, rep.is_cross_edge_free) == (3, 2, True, True)


def test_triangle_has_cross_edge():
    rep = hg.validate(Hypergraph.from_edges(3, [(0, 1), (1, 2), (0, 2)]))
    assert not rep.is_cross_edge_free and "cross_edge" in rep.witnesses


def test_nonlinear_witness():
    H = Hypergraph.from_edges(4, [(0, 1, 2), (0, 1, 3)])
    rep = hg.validate(H)
    assert not rep.is_linear
    assert rep.witnesses["linear"]["pair"] == [0, 1]


def test_nonuniform_irregular_witnesses():
    H = Hypergraph.from_edges(4, [(0, 1, 2), (2, 3)])
    rep = hg.validate(H)
    assert rep.uniform_r is None and rep.regular_d is None
    assert set(rep.witnesses) >= {"uniform", "regular"}


def test_edgeless_is_valid():
    rep = hg.validate(Hypergraph.from_edges(5, []))
    assert rep.uniform_r is None and rep.regular_d is None
    assert rep.is_linear and rep.is_cross_edge_free
    assert hg.validate(Hypergraph(0, ())).is_linear


def test_neighborhoods():
    assert hg.neighborhood(cycle4(), 0) == {1, 3}
    assert hg.neighborhood(Hypergraph.from_edges(3, [(0, 1, 2)]), 0) == {1, 2}
    H = family("TRIPARTITE_K", 2)
    for v in range(H.n):
        N = hg.neighborhood(H, v)
        assert len(N) == 4
        # the two pairs are the rest of the two edges through v, disjoint
        pairs = [set(e) - {v} for e in H.edges if v in e]
        assert len(pairs) == 2 and not pairs[0] & pairs[1]
    with pytest.raises(StructuralError):
        hg.neighborhood(H, H.n)


@pytest.mark.parametrize(
    "edges, needle",
    [
        ([[0, 0]], "repeated vertex 0"),
        ([[0, 5]], "out of range"),
        ([[]], "empty"),
        ([[0, 1], [1, 0]], "duplicates edge 0"),
    ],
)
def test_structural_errors_name_the_edge(edges, needle):
    with pytest.raises(StructuralError, match=needle):
        Hypergraph.from_edges(3, edges)


def test_loads_examples():
    H = hg.loads(b'{"n":3,"edges":[[0,1,2]]}')
    assert H.n == 3 and H.edges == ((0, 1, 2),)
    with pytest.raises(StructuralError, match="repeated vertex"):
        hg.loads('{"n":2,"edges":[[0,0]]}')


def test_loads_errors_have_locus():
    with pytest.raises(StructuralError, match="line 2, column"):
        hg.loads('{"n": 3,\n "edges": [[0,1,]]}')
    with pytest.raises(StructuralError, match="missing field 'edges'"):
        hg.loads('{"n": 3}')
    with pytest.raises(StructuralError, match=r"edges\[1\]"):
        hg.loads('{"n": 3, "edges": [[0,1], [1, "x"]]}')
    with pytest.raises(StructuralError, match="field 'n'"):
        hg.loads('{"n": true, "edges": []}')


def test_round_trip_file(tmp_path):
    H = family("MOD3", 2)
    path = tmp_path / "m.json"
    hg.save(H, path)
    G = hg.load(path)
    assert G == H and G.same_as(H)
    doc = json.loads(path.read_text())
    assert doc["meta"] == {"family": "MOD3", "r": 3, "d": 2}
    assert all(e == sorted(e) for e in doc["edges"])


@st.composite
def hypergraphs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    pool = [c for size in (2, 3) for c in combinations(range(n), size)]
    edges = draw(st.lists(st.sampled_from(pool), unique=True, max_size=10)) if pool else []
    return Hypergraph.from_edges(n, edges)


@settings(max_examples=150, deadline=None)
@given(hypergraphs(), st.randoms())
def test_round_trip_any_order(H, rnd):
    doc = hg.to_document(H)
    shuffled = [list(e) for e in doc["edges"]]
    rnd.shuffle(shuffled)
    for e in shuffled:
        rnd.shuffle(e)
    G = hg.from_document({"n": H.n, "edges": shuffled})
    assert G.same_as(H)
    assert hg.loads(hg.dumps(H)).same_as(H)


@settings(max_examples=150, deadline=None)
@given(hypergraphs())
def test_validate_matches_definitions(H):
    rep = hg.validate(H)
    # linear: every pair in at most one edge
    linear = all(len(set(a) & set(b)) <= 1 for a, b in combinations(H.edges, 2))
    assert rep.is_linear == linear
    # cross edge: v outside e with two neighbours inside e
    nb = [hg.neighborhood(H, v) for v in range(H.n)]
    cross = any(v not in e and len(set(e) & nb[v]) >= 2 for e in H.edges for v in range(H.n))
    assert rep.is_cross_edge_free == (not cross)
    # flag false iff witness present
    assert ("linear" in rep.witnesses) == (not rep.is_linear)
    assert ("cross_edge" in rep.witnesses) == (not rep.is_cross_edge_free)
    assert hg.validate(H) == rep


@settings(max_examples=100, deadline=None)
@given(hypergraphs())
def test_degree_sum_identity(H):
    assert sum(H.degrees()) == sum(len(e) for e in H.edges)
    rep = hg.validate(H)
    if rep.uniform_r and rep.regular_d:
        assert rep.uniform_r * H.num_edges == H.n * rep.regular_d


@settings(max_examples=100, deadline=None)
@given(hypergraphs())
def test_linear_star_property(H):
    if hg.validate(H).is_linear:
        for v in range(H.n):
            through = [set(e) for e in H.edges if v in e]
            for a, b in combinations(through, 2):
                assert a & b == {v}
