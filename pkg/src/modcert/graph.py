"""Simple undirected graphs with dense ids, bit-packed rows, and induced-degree queries.

Vertices are the integers 0..n-1.  Input files may name vertices arbitrarily;
the original names are kept so reports and certificates can refer back to the
input.  Adjacency is stored both as one bit-mask per vertex (the hot path for
trace extraction) and as sorted neighbor tuples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

from .errors import ParseError


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph. Build via :meth:`from_edges` or :func:`load_graph`."""

    n: int
    names: tuple[str, ...]
    adj_masks: tuple[int, ...]
    adj_lists: tuple[tuple[int, ...], ...] = field(repr=False)

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        names: Iterable[str] | None = None,
    ) -> "Graph":
        name_tuple = tuple(names) if names is not None else tuple(str(v) for v in range(n))
        if len(name_tuple) != n:
            raise ValueError(f"expected {n} names, got {len(name_tuple)}")
        masks = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        lists = tuple(tuple(_bits(m)) for m in masks)
        return cls(n=n, names=name_tuple, adj_masks=tuple(masks), adj_lists=lists)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj_lists[v]

    def neighbor_mask(self, v: int) -> int:
        return self.adj_masks[v]

    def degree(self, v: int) -> int:
        return self.adj_masks[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj_masks[u] >> v & 1)

    @property
    def vertices(self) -> range:
        return range(self.n)

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in self.adj_lists[u]:
                if u < v:
                    yield (u, v)

    def edge_count(self) -> int:
        return sum(self.degree(v) for v in range(self.n)) // 2

    def name_of(self, v: int) -> str:
        return self.names[v]

    def names_of(self, members: Iterable[int]) -> list[str]:
        return [self.names[v] for v in sorted(members)]

    def ids_of(self, names: Iterable[str]) -> list[int]:
        index = {name: v for v, name in enumerate(self.names)}
        out = []
        for name in names:
            if name not in index:
                raise ValueError(f"unknown vertex name {name!r}")
            out.append(index[name])
        return out


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(members: Iterable[int]) -> int:
    out = 0
    for v in members:
        out |= 1 << v
    return out


def check_subset(graph: Graph, members: Iterable[int]) -> frozenset[int]:
    """Validate a vertex set against the graph and return it as a frozenset."""
    s = frozenset(members)
    for v in s:
        if not (0 <= v < graph.n):
            raise ValueError(f"vertex {v} out of range for n={graph.n}")
    return s


def load_graph(stream: IO[str], fmt: str = "edge-list") -> Graph:
    """Parse an edge-list or DIMACS stream into a :class:`Graph`.

    Edge list: optional first line ``n <count>``; then ``u v`` per line;
    ``#`` starts a comment.  With a header, endpoints must be integers in
    range; without one, tokens are arbitrary names assigned dense ids in
    order of first appearance.

    DIMACS: ``c`` comments, one ``p edge <n> <m>`` header, ``e u v`` lines
    with 1-based endpoints.
    """
    if fmt == "edge-list":
        return _load_edge_list(stream)
    if fmt == "dimacs":
        return _load_dimacs(stream)
    raise ValueError(f"unknown graph format {fmt!r}")


def _load_edge_list(stream: IO[str]) -> Graph:
    declared_n: int | None = None
    names: list[str] = []
    ids: dict[str, int] = {}
    edges: list[tuple[int, int]] = []
    saw_content = False

    def vertex_id(token: str, lineno: int) -> int:
        if declared_n is not None:
            try:
                v = int(token)
            except ValueError:
                raise ParseError(f"expected integer vertex id, got {token!r}", lineno)
            if not (0 <= v < declared_n):
                raise ParseError(f"vertex id {v} out of declared range 0..{declared_n - 1}", lineno)
            return v
        if token not in ids:
            ids[token] = len(names)
            names.append(token)
        return ids[token]

    for lineno, raw in enumerate(stream, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if not saw_content and tokens[0] == "n" and len(tokens) == 2:
            try:
                declared_n = int(tokens[1])
            except ValueError:
                raise ParseError(f"bad vertex count {tokens[1]!r}", lineno)
            if declared_n < 0:
                raise ParseError(f"negative vertex count {declared_n}", lineno)
            saw_content = True
            continue
        saw_content = True
        if len(tokens) != 2:
            raise ParseError(f"expected 'u v', got {line!r}", lineno)
        u = vertex_id(tokens[0], lineno)
        v = vertex_id(tokens[1], lineno)
        if u == v:
            raise ParseError(f"self-loop at vertex {tokens[0]!r}", lineno)
        edges.append((u, v))

    if declared_n is not None:
        return Graph.from_edges(declared_n, edges)
    return Graph.from_edges(len(names), edges, names=names)


def _load_dimacs(stream: IO[str]) -> Graph:
    declared_n: int | None = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        tokens = line.split()
        if tokens[0] == "p":
            if declared_n is not None:
                raise ParseError("duplicate problem line", lineno)
            if len(tokens) != 4 or tokens[1] != "edge":
                raise ParseError(f"expected 'p edge <n> <m>', got {line!r}", lineno)
            try:
                declared_n = int(tokens[2])
            except ValueError:
                raise ParseError(f"bad vertex count {tokens[2]!r}", lineno)
            continue
        if tokens[0] == "e":
            if declared_n is None:
                raise ParseError("edge before problem line", lineno)
            if len(tokens) != 3:
                raise ParseError(f"expected 'e u v', got {line!r}", lineno)
            try:
                u, v = int(tokens[1]), int(tokens[2])
            except ValueError:
                raise ParseError(f"bad edge endpoints in {line!r}", lineno)
            if not (1 <= u <= declared_n and 1 <= v <= declared_n):
                raise ParseError(f"vertex id out of declared range 1..{declared_n}", lineno)
            if u == v:
                raise ParseError(f"self-loop at vertex {u}", lineno)
            edges.append((u - 1, v - 1))
            continue
        raise ParseError(f"unrecognized line {line!r}", lineno)
    if declared_n is None:
        raise ParseError("missing problem line")
    return Graph.from_edges(declared_n, edges, names=[str(v + 1) for v in range(declared_n)])


def induced_degrees(graph: Graph, members: Iterable[int]) -> dict[int, int]:
    """Degree of each member inside the induced subgraph on ``members``."""
    s = check_subset(graph, members)
    mask = mask_of(s)
    return {v: (graph.adj_masks[v] & mask).bit_count() for v in sorted(s)}


def is_regular(graph: Graph, members: Iterable[int]) -> tuple[bool, int | None]:
    """Whether the induced subgraph is regular, and its degree when it is.

    The empty set is vacuously regular with no reported degree.
    """
    degs = induced_degrees(graph, members)
    if not degs:
        return True, None
    values = set(degs.values())
    if len(values) == 1:
        return True, values.pop()
    return False, None
