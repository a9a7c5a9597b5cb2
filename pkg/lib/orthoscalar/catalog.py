"""Separated single quivers and the Dynkin / extended Dynkin catalog."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Any, Iterable, Mapping

import networkx as nx

from .errors import InvalidQuiver, InvalidSize, UnknownGraph


EVEN = "even"
ODD = "odd"
PARITIES = (EVEN, ODD)

_NAME_PATTERN = re.compile(
    r"^(?P<family>[ADE])(?P<tilde_pre>~)?\(?(?P<n>\d+)?\)?(?P<tilde_post>~)?$"
)


@dataclass(frozen=True)
class Quiver:
    """Vertices in display order, one parity per vertex, arrows as (tail, head)."""

    name: str
    vertices: tuple[str, ...]
    parities: tuple[str, ...]
    arrows: tuple[tuple[str, str], ...]

    @classmethod
    def from_edges(
        cls,
        name: str,
        vertices: Iterable[str],
        parity: Mapping[str, str],
        edges: Iterable[tuple[str, str]],
    ) -> Quiver:
        """Orient every edge from its even end to its odd end."""
        vertices = tuple(vertices)
        arrows: list[tuple[str, str]] = []
        for left, right in edges:
            if parity[left] == EVEN and parity[right] == ODD:
                arrows.append((left, right))
            elif parity[left] == ODD and parity[right] == EVEN:
                arrows.append((right, left))
            else:
                raise InvalidQuiver(f"edge {left}-{right} joins two {parity[left]} vertices", {"graph": name})
        return cls(name, vertices, tuple(parity[v] for v in vertices), tuple(arrows))

    @cached_property
    def index(self) -> dict[str, int]:
        return {vertex: position for position, vertex in enumerate(self.vertices)}

    @cached_property
    def parity_map(self) -> dict[str, str]:
        return dict(zip(self.vertices, self.parities))

    def parity_of(self, vertex: str) -> str:
        return self.parity_map[vertex]

    def vertices_of(self, parity: str) -> tuple[str, ...]:
        return tuple(v for v, p in zip(self.vertices, self.parities) if p == parity)

    @cached_property
    def odd_vertices(self) -> tuple[str, ...]:
        return self.vertices_of(ODD)

    @cached_property
    def even_vertices(self) -> tuple[str, ...]:
        return self.vertices_of(EVEN)

    @cached_property
    def block_order(self) -> tuple[str, ...]:
        return self.odd_vertices + self.even_vertices

    @cached_property
    def neighbors(self) -> dict[str, tuple[str, ...]]:
        adjacent: dict[str, set[str]] = {v: set() for v in self.vertices}
        for tail, head in self.arrows:
            adjacent.setdefault(tail, set()).add(head)
            adjacent.setdefault(head, set()).add(tail)
        return {v: tuple(sorted(adjacent[v], key=lambda u: self.index.get(u, len(self.index)))) for v in adjacent}

    @cached_property
    def arrow_set(self) -> frozenset[tuple[str, str]]:
        return frozenset(self.arrows)

    def arrow_between(self, u: str, v: str) -> tuple[str, str] | None:
        if (u, v) in self.arrow_set:
            return (u, v)
        if (v, u) in self.arrow_set:
            return (v, u)
        return None

    def graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(self.arrows)
        return graph

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "vertices": [{"id": v, "parity": p} for v, p in zip(self.vertices, self.parities)],
            "arrows": [{"tail": tail, "head": head} for tail, head in self.arrows],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> Quiver:
        try:
            vertices = tuple(str(item["id"]) for item in data["vertices"])
            parities = tuple(str(item["parity"]) for item in data["vertices"])
            arrows = tuple((str(item["tail"]), str(item["head"])) for item in data["arrows"])
        except (KeyError, TypeError) as exc:
            raise InvalidQuiver(f"malformed quiver document: {exc}") from exc
        return cls(str(data.get("name", "custom")), vertices, parities, arrows)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    quiver: Quiver
    delta: tuple[int, ...] | None = None

    @property
    def extended(self) -> bool:
        return self.delta is not None

    def delta_map(self) -> dict[str, int]:
        if self.delta is None:
            return {}
        return dict(zip(self.quiver.vertices, self.delta))

    def to_dict(self) -> dict[str, Any]:
        payload = self.quiver.to_dict()
        payload["name"] = self.name
        if self.delta is not None:
            payload["delta"] = list(self.delta)
        return payload


def validate_quiver(q: Quiver) -> list[str]:
    """Every violated structural invariant; an empty list means the quiver is valid."""
    violations: list[str] = []
    if len(set(q.vertices)) != len(q.vertices):
        violations.append("duplicate vertex ids")
    if len(q.parities) != len(q.vertices):
        violations.append("parity list does not match vertex list")
    for vertex, parity in zip(q.vertices, q.parities):
        if parity not in PARITIES:
            violations.append(f"bad parity '{parity}' at vertex {vertex}")

    known = set(q.vertices)
    parity = dict(zip(q.vertices, q.parities))
    seen: set[tuple[str, str]] = set()
    for tail, head in q.arrows:
        if tail not in known or head not in known:
            violations.append(f"unknown vertex in arrow {tail}->{head}")
            continue
        if tail == head:
            violations.append(f"not separated: loop at {tail}")
        elif parity[tail] != EVEN or parity[head] != ODD:
            violations.append(f"not separated: arrow {tail}->{head} runs {parity[tail]}->{parity[head]}")
        if (tail, head) in seen:
            violations.append(f"not single: repeated arrow {tail}->{head}")
        seen.add((tail, head))

    if q.vertices:
        graph = nx.Graph()
        graph.add_nodes_from(q.vertices)
        graph.add_edges_from((t, h) for t, h in q.arrows if t in known and h in known)
        if not nx.is_connected(graph):
            parts = sorted(len(component) for component in nx.connected_components(graph))
            violations.append(f"disconnected: {len(parts)} components of sizes {parts}")
    else:
        violations.append("disconnected: no vertices")
    return violations


def require_valid(q: Quiver) -> Quiver:
    violations = validate_quiver(q)
    if violations:
        raise InvalidQuiver("; ".join(violations), {"graph": q.name})
    return q


def parse_graph_name(text: str) -> tuple[str, int, bool]:
    """`D~5` -> ("D", 5, True); `E6` -> ("E", 6, False); `A~(4)` -> ("A", 4, True)."""
    match = _NAME_PATTERN.match(text.strip().replace(" ", ""))
    if not match or match.group("n") is None:
        raise UnknownGraph(f"unknown graph name '{text}'", {"graph": text})
    if match.group("tilde_pre") and match.group("tilde_post"):
        raise UnknownGraph(f"unknown graph name '{text}'", {"graph": text})
    family = match.group("family")
    n = int(match.group("n"))
    extended = bool(match.group("tilde_pre") or match.group("tilde_post"))
    if family == "E" and n not in (6, 7, 8):
        raise UnknownGraph(f"no exceptional graph E{n}", {"graph": text})
    return family, n, extended


def canonical_name(family: str, n: int, extended: bool) -> str:
    if family == "E":
        return f"E{n}~" if extended else f"E{n}"
    return f"{family}~{n}" if extended else f"{family}{n}"


def _alternating(vertices: list[str], first: str = ODD) -> dict[str, str]:
    other = EVEN if first == ODD else ODD
    return {v: (first if k % 2 == 0 else other) for k, v in enumerate(vertices)}


def _build_a(n: int, extended: bool) -> CatalogEntry:
    if extended:
        if n < 4 or n % 2:
            raise InvalidSize(f"A~(n) needs an even n >= 4, got {n}", {"graph": f"A~{n}"})
    elif n < 1:
        raise InvalidSize(f"A(n) needs n >= 1, got {n}", {"graph": f"A{n}"})
    vertices = [f"a{k}" for k in range(1, n + 1)]
    edges = [(vertices[k], vertices[k + 1]) for k in range(n - 1)]
    if extended:
        edges.append((vertices[-1], vertices[0]))
    name = canonical_name("A", n, extended)
    quiver = Quiver.from_edges(name, vertices, _alternating(vertices), edges)
    return CatalogEntry(name, quiver, tuple([1] * n) if extended else None)


def _build_d(n: int, extended: bool) -> CatalogEntry:
    if n < 4:
        label = "D~" if extended else "D"
        raise InvalidSize(f"{label}(n) needs n >= 4, got {n}", {"graph": f"{label}{n}"})
    chain_length = n - 3 if extended else n - 2
    chain = [f"c{k}" for k in range(1, chain_length + 1)]
    parity = _alternating(chain)
    parity.update({"a1": EVEN, "a2": EVEN})
    edges = [("a1", "c1"), ("a2", "c1")] + [(chain[k], chain[k + 1]) for k in range(chain_length - 1)]
    name = canonical_name("D", n, extended)
    if not extended:
        vertices = ["a1", "a2"] + chain
        return CatalogEntry(name, Quiver.from_edges(name, vertices, parity, edges))

    leaf_parity = EVEN if parity[chain[-1]] == ODD else ODD
    parity.update({"b1": leaf_parity, "b2": leaf_parity})
    edges += [(chain[-1], "b1"), (chain[-1], "b2")]
    vertices = ["a1", "a2", "b1", "b2"] + chain
    delta = tuple([1, 1, 1, 1] + [2] * chain_length)
    return CatalogEntry(name, Quiver.from_edges(name, vertices, parity, edges), delta)


_EXCEPTIONAL: dict[int, dict[str, Any]] = {
    6: {
        "vertices": ["a1", "a2", "b1", "b2", "c1", "c2", "z"],
        "odd": {"a1", "b1", "c1", "z"},
        "edges": [("a1", "a2"), ("a2", "z"), ("b1", "b2"), ("b2", "z"), ("c1", "c2"), ("c2", "z")],
        "delta": (1, 2, 1, 2, 1, 2, 3),
        "extending": "c1",
    },
    7: {
        "vertices": ["a1", "a2", "a3", "z", "b3", "b2", "b1", "c1"],
        "odd": {"a2", "z", "b2"},
        "edges": [("a1", "a2"), ("a2", "a3"), ("a3", "z"), ("z", "b3"), ("b3", "b2"), ("b2", "b1"), ("z", "c1")],
        "delta": (1, 2, 3, 4, 3, 2, 1, 2),
        "extending": "a1",
    },
    8: {
        "vertices": ["a1", "a2", "a3", "a4", "a5", "z", "c1", "b2", "b1"],
        "odd": {"a2", "a4", "z", "b1"},
        "edges": [
            ("a1", "a2"), ("a2", "a3"), ("a3", "a4"), ("a4", "a5"),
            ("a5", "z"), ("z", "c1"), ("z", "b2"), ("b2", "b1"),
        ],
        "delta": (1, 2, 3, 4, 5, 6, 3, 4, 2),
        "extending": "a1",
    },
}


def _build_e(n: int, extended: bool) -> CatalogEntry:
    data = _EXCEPTIONAL[n]
    parity = {v: (ODD if v in data["odd"] else EVEN) for v in data["vertices"]}
    name = canonical_name("E", n, extended)
    if extended:
        quiver = Quiver.from_edges(name, data["vertices"], parity, data["edges"])
        return CatalogEntry(name, quiver, data["delta"])
    dropped = data["extending"]
    vertices = [v for v in data["vertices"] if v != dropped]
    edges = [edge for edge in data["edges"] if dropped not in edge]
    return CatalogEntry(name, Quiver.from_edges(name, vertices, parity, edges))


@lru_cache(maxsize=None)
def _build(family: str, n: int, extended: bool) -> CatalogEntry:
    if family == "A":
        return _build_a(n, extended)
    if family == "D":
        return _build_d(n, extended)
    return _build_e(n, extended)


def build_catalog_quiver(name: str, n: int | None = None) -> CatalogEntry:
    """Catalog entry by name; `n` may be given separately (`("A~", 4)`) or inline (`"A~4"`)."""
    text = name.strip()
    if n is not None:
        text = text.replace("(", "").replace(")", "")
        if text.startswith("E"):
            raise UnknownGraph(f"exceptional names carry their own size: '{name}'", {"graph": name})
        text = f"{text}{n}" if text.endswith("~") or text in ("A", "D") else text
    family, size, extended = parse_graph_name(text)
    entry = _build(family, size, extended)
    require_valid(entry.quiver)
    return entry


def lookup_entry(q: Quiver) -> CatalogEntry | None:
    """The catalog entry whose quiver equals `q`, if any."""
    try:
        family, size, extended = parse_graph_name(q.name)
        entry = _build(family, size, extended)
    except (UnknownGraph, InvalidSize):
        return None
    return entry if entry.quiver == q else None


def catalog_names(max_n: int = 8) -> list[str]:
    names = [f"A{n}" for n in range(1, max_n + 1)]
    names += [f"D{n}" for n in range(4, max_n + 1)]
    names += ["E6", "E7", "E8"]
    names += [f"A~{n}" for n in range(4, max_n + 1, 2)]
    names += [f"D~{n}" for n in range(4, max_n + 1)]
    names += ["E6~", "E7~", "E8~"]
    return names


def support_subquiver(q: Quiver, vertices: Iterable[str]) -> Quiver:
    """Induced subquiver on `vertices`, keeping display order and parities."""
    keep = set(vertices)
    ordered = tuple(v for v in q.vertices if v in keep)
    parity = tuple(q.parity_of(v) for v in ordered)
    arrows = tuple((t, h) for t, h in q.arrows if t in keep and h in keep)
    return Quiver(f"{q.name}|{','.join(ordered)}", ordered, parity, arrows)


def nodal_vertices(q: Quiver) -> list[str]:
    return [v for v in q.vertices if len(q.neighbors.get(v, ())) >= 3]
