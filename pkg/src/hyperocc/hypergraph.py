"""Hypergraph data model, structural validation and JSON I/O.

Vertices are the integers ``0..n-1``. Edges are stored as sorted tuples so
that equality and hashing do not depend on the order vertices were listed.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Iterable, Optional


class StructuralError(ValueError):
    """Raised for malformed hypergraph input (bad ids, repeated vertices, ...)."""


@dataclass(frozen=True)
class Hypergraph:
    n: int
    edges: tuple[tuple[int, ...], ...]
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise StructuralError(f"vertex count must be a non-negative integer, got {self.n!r}")
        canon = []
        seen = {}
        for idx, e in enumerate(self.edges):
            e = tuple(sorted(int(v) for v in e))
            if not e:
                raise StructuralError(f"edge {idx} is empty")
            for v in e:
                if not 0 <= v < self.n:
                    raise StructuralError(f"edge {idx} {list(e)}: vertex {v} out of range [0, {self.n})")
            for a, b in zip(e, e[1:]):
                if a == b:
                    raise StructuralError(f"edge {idx} {list(e)}: repeated vertex {a}")
            if e in seen:
                raise StructuralError(f"edge {idx} {list(e)} duplicates edge {seen[e]}")
            seen[e] = idx
            canon.append(e)
        object.__setattr__(self, "edges", tuple(canon))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]], **meta) -> "Hypergraph":
        return cls(n, tuple(tuple(e) for e in edges), dict(meta))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return deg

    def incidence(self) -> list[list[int]]:
        """For each vertex, the indices of the edges containing it."""
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for i, e in enumerate(self.edges):
            for v in e:
                inc[v].append(i)
        return inc

    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def same_as(self, other: "Hypergraph") -> bool:
        """Equality up to edge order (edges are already canonical)."""
        return self.n == other.n and self.edge_set() == other.edge_set()


@dataclass(frozen=True)
class ValidationReport:
    uniform_r: Optional[int]
    regular_d: Optional[int]
    is_linear: bool
    is_cross_edge_free: bool
    witnesses: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "uniform_r": self.uniform_r,
            "regular_d": self.regular_d,
            "is_linear": self.is_linear,
            "is_cross_edge_free": self.is_cross_edge_free,
            "witnesses": self.witnesses,
        }


def neighborhood(H: Hypergraph, v: int) -> frozenset[int]:
    """All u != v sharing at least one edge with v."""
    if not 0 <= v < H.n:
        raise StructuralError(f"vertex {v} out of range [0, {H.n})")
    out = set()
    for e in H.edges:
        if v in e:
            out.update(e)
    out.discard(v)
    return frozenset(out)


def _neighborhoods(H: Hypergraph) -> list[set[int]]:
    nbrs: list[set[int]] = [set() for _ in range(H.n)]
    for e in H.edges:
        for v in e:
            nbrs[v].update(e)
    for v in range(H.n):
        nbrs[v].discard(v)
    return nbrs


def validate(H: Hypergraph) -> ValidationReport:
    witnesses: dict[str, Any] = {}

    uniform_r = None
    if H.edges:
        sizes = {len(e) for e in H.edges}
        if len(sizes) == 1:
            uniform_r = sizes.pop()
        else:
            e0 = H.edges[0]
            e1 = next(i for i, e in enumerate(H.edges) if len(e) != len(e0))
            witnesses["uniform"] = {"edges": [0, e1], "sizes": [len(e0), len(H.edges[e1])]}

    regular_d = None
    if H.edges:
        deg = H.degrees()
        if len(set(deg)) == 1:
            regular_d = deg[0]
        else:
            u = next(v for v in range(H.n) if deg[v] != deg[0])
            witnesses["regular"] = {"vertices": [0, u], "degrees": [deg[0], deg[u]]}

    # pair -> first edge containing it; a second hit breaks linearity
    pair_edge: dict[tuple[int, int], int] = {}
    is_linear = True
    for i, e in enumerate(H.edges):
        for pair in combinations(e, 2):
            j = pair_edge.setdefault(pair, i)
            if j != i and is_linear:
                is_linear = False
                witnesses["linear"] = {"pair": list(pair), "edges": [j, i]}

    # e is a cross edge for v iff v is outside e and adjacent to two members of e
    is_cross_edge_free = True
    nbrs = _neighborhoods(H)
    for i, e in enumerate(H.edges):
        members = set(e)
        first_hit: dict[int, int] = {}
        for u in e:
            for v in nbrs[u]:
                if v in members:
                    continue
                if v in first_hit:
                    is_cross_edge_free = False
                    witnesses["cross_edge"] = {"vertex": v, "edge": i, "neighbors": [first_hit[v], u]}
                    break
                first_hit[v] = u
            if not is_cross_edge_free:
                break
        if not is_cross_edge_free:
            break

    return ValidationReport(uniform_r, regular_d, is_linear, is_cross_edge_free, witnesses)


def to_document(H: Hypergraph) -> dict:
    doc: dict[str, Any] = {"n": H.n, "edges": [list(e) for e in sorted(H.edges)]}
    if H.meta:
        doc["meta"] = dict(H.meta)
    return doc


def from_document(doc: Any) -> Hypergraph:
    if not isinstance(doc, dict):
        raise StructuralError("document must be a JSON object with fields 'n' and 'edges'")
    if "n" not in doc:
        raise StructuralError("missing field 'n'")
    if "edges" not in doc:
        raise StructuralError("missing field 'edges'")
    n = doc["n"]
    if isinstance(n, bool) or not isinstance(n, int):
        raise StructuralError(f"field 'n': expected integer, got {n!r}")
    edges = doc["edges"]
    if not isinstance(edges, list):
        raise StructuralError("field 'edges': expected array of arrays")
    for idx, e in enumerate(edges):
        if not isinstance(e, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in e):
            raise StructuralError(f"field 'edges[{idx}]': expected array of integers, got {e!r}")
    meta = doc.get("meta") or {}
    if not isinstance(meta, dict):
        raise StructuralError("field 'meta': expected object")
    return Hypergraph(n, tuple(tuple(e) for e in edges), dict(meta))


def loads(data: bytes | str) -> Hypergraph:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise StructuralError(f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_document(doc)


def dumps(H: Hypergraph) -> bytes:
    return json.dumps(to_document(H), separators=(",", ":")).encode("utf-8")


def load(path) -> Hypergraph:
    with open(path, "rb") as fh:
        return loads(fh.read())


def save(H: Hypergraph, path) -> None:
    with open(path, "wb") as fh:
        fh.write(dumps(H))
        fh.write(b"\n")
