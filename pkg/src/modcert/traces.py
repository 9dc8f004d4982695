"""Trace tables over a fixed core and the exact deletion-tail obstruction.

The trace of a tail vertex is its neighborhood inside the core, stored as a
bit-mask over the core's sorted vertex ids.  The per-core-vertex tail counts
determine the obstruction to lifting a degree congruence one bit: modulo
constant vectors the obstruction is controlled by the oriented differences
n_B - n_{complement}, never by complement sums (those double-count the
constant part and produce phantom obstructions).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Sequence, Union

from .gf2 import BitVector
from .graph import Graph, check_subset, mask_of
from .witness import quotient_coords


@dataclass(frozen=True)
class TraceTable:
    """Multiplicities and realizers of every trace occurring in a tail.

    ``entries`` maps a trace mask (bit i set = i-th smallest core vertex is a
    neighbor) to the sorted tail vertices realizing it; absent masks have
    multiplicity zero.
    """

    core: tuple[int, ...]
    entries: dict[int, tuple[int, ...]]

    @property
    def size(self) -> int:
        return len(self.core)

    def count(self, mask: int) -> int:
        return len(self.entries.get(mask, ()))

    def tail_size(self) -> int:
        return sum(len(r) for r in self.entries.values())

    def tail_vertices(self) -> tuple[int, ...]:
        return tuple(sorted(v for r in self.entries.values() for v in r))

    def masks(self) -> list[int]:
        return sorted(self.entries)

    def available_masks(self, q: int) -> list[int]:
        """Masks whose multiplicity supports at least one q-tuple deletion."""
        return sorted(m for m, r in self.entries.items() if len(r) >= q)

    def position_of(self, vertex: int) -> int:
        return self.core.index(vertex)

    def members_of(self, mask: int) -> tuple[int, ...]:
        return tuple(self.core[i] for i in range(self.size) if mask >> i & 1)

    def to_json_dict(self, name_of: Callable[[int], str] = str) -> dict:
        return {
            "core": [name_of(v) for v in self.core],
            "tail_size": self.tail_size(),
            "entries": [
                {
                    "trace": [name_of(v) for v in self.members_of(mask)],
                    "count": self.count(mask),
                    "realizers": [name_of(v) for v in self.entries[mask]],
                }
                for mask in self.masks()
            ],
        }


def compute_traces(graph: Graph, core, tail) -> TraceTable:
    """Exact trace table of ``tail`` against ``core`` (disjoint vertex sets)."""
    core_set = check_subset(graph, core)
    tail_set = check_subset(graph, tail)
    if core_set & tail_set:
        raise ValueError("core and tail must be disjoint")
    core_sorted = tuple(sorted(core_set))
    index = {v: i for i, v in enumerate(core_sorted)}
    grouped: dict[int, list[int]] = defaultdict(list)
    for x in sorted(tail_set):
        neighbors = graph.adj_masks[x] & mask_of(core_set)
        mask = 0
        while neighbors:
            low = neighbors & -neighbors
            mask |= 1 << index[low.bit_length() - 1]
            neighbors ^= low
        grouped[mask].append(x)
    return TraceTable(core=core_sorted, entries={m: tuple(r) for m, r in grouped.items()})


def tail_degrees(table: TraceTable) -> tuple[int, ...]:
    """Number of tail neighbors of each core vertex, in core order.

    Equals the sum of n_B over the traces containing the vertex, which is the
    same as counting tail neighbors directly.
    """
    out = [0] * table.size
    for mask, realizers in table.entries.items():
        count = len(realizers)
        for i in range(table.size):
            if mask >> i & 1:
                out[i] += count
    return tuple(out)


@dataclass(frozen=True)
class QuotientClass:
    """An element of GF(2)^core modulo the constant line.

    ``coords`` are relative to the first core position, so the zero class is
    exactly the constant vectors.
    """

    core: tuple[int, ...]
    coords: BitVector

    @classmethod
    def from_bits(cls, core: tuple[int, ...], bits: Sequence[int]) -> "QuotientClass":
        vec = BitVector.from_bits(b & 1 for b in bits)
        if vec.length != len(core):
            raise ValueError("bit count does not match core size")
        return cls(core=core, coords=quotient_coords(vec, 0))

    def is_zero(self) -> bool:
        return self.coords.is_zero()


@dataclass(frozen=True)
class NotConstantModulo:
    modulus: int


@dataclass(frozen=True)
class DivisibilityFails:
    modulus: int
    mask: int


def _orbit_representatives(table: TraceTable) -> list[int]:
    """One mask per complement orbit, excluding {empty, full}; smaller mask wins."""
    full = (1 << table.size) - 1
    reps = set()
    for mask in table.entries:
        if mask in (0, full):
            continue
        reps.add(min(mask, full ^ mask))
    return sorted(reps)


def complement_difference(table: TraceTable) -> tuple[tuple[int, ...], QuotientClass]:
    """Integer representative of the tail-count class modulo constants.

    Sums (n_B - n_{complement}) over one representative per complement orbit.
    The result agrees with the tail-degree vector up to a constant vector,
    which is asserted, and its mod-2 quotient class is returned alongside.
    """
    if table.size < 1:
        raise ValueError("core must be nonempty")
    full = (1 << table.size) - 1
    vector = [0] * table.size
    for rep in _orbit_representatives(table):
        diff = table.count(rep) - table.count(full ^ rep)
        for i in range(table.size):
            if rep >> i & 1:
                vector[i] += diff
    rho = tail_degrees(table)
    deltas = {rho[i] - vector[i] for i in range(table.size)}
    if len(deltas) != 1:
        raise AssertionError("oriented-difference representative is not a constant shift of the tail counts")
    cls = QuotientClass.from_bits(table.core, [v % 2 for v in vector])
    return tuple(vector), cls


def next_bit_obstruction(
    rho: Sequence[int],
    m: int,
    core: tuple[int, ...] | None = None,
) -> Union[QuotientClass, NotConstantModulo]:
    """Mod-2 class of (rho - c)/2^m modulo constants, when defined.

    Requires the tail counts to be constant modulo 2^m; the reference value c
    is taken at the first core position, and any other valid choice shifts
    the quotient by a constant, leaving the class unchanged.  The class is
    zero exactly when the counts are already constant modulo 2^(m+1).
    """
    if m < 0:
        raise ValueError(f"bit index must be >= 0, got {m}")
    if not rho:
        raise ValueError("tail-count vector must be nonempty")
    actual_core = core if core is not None else tuple(range(len(rho)))
    if len(actual_core) != len(rho):
        raise ValueError("core size does not match vector length")
    modulus = 1 << m
    c = rho[0]
    for value in rho:
        if (value - c) % modulus:
            return NotConstantModulo(modulus=modulus)
    bits = [((value - c) // modulus) % 2 for value in rho]
    return QuotientClass.from_bits(actual_core, bits)


def oriented_orbit_form(
    table: TraceTable,
    m: int,
) -> Union[QuotientClass, DivisibilityFails]:
    """The next-bit class computed orbit by orbit from oriented differences.

    Defined when every oriented difference is divisible by 2^m; it then
    matches the direct tail-count computation, which is asserted.
    """
    if m < 0:
        raise ValueError(f"bit index must be >= 0, got {m}")
    modulus = 1 << m
    full = (1 << table.size) - 1
    acc = 0
    for rep in _orbit_representatives(table):
        diff = table.count(rep) - table.count(full ^ rep)
        if diff % modulus:
            return DivisibilityFails(modulus=modulus, mask=rep)
        if (diff // modulus) % 2:
            acc ^= rep
    cls = QuotientClass.from_bits(table.core, [acc >> i & 1 for i in range(table.size)])
    direct = next_bit_obstruction(tail_degrees(table), m, core=table.core)
    if not isinstance(direct, QuotientClass) or direct != cls:
        raise AssertionError("orbit-difference class disagrees with the direct tail-count class")
    return cls


@dataclass(frozen=True)
class PairTraceView:
    """The graph of q-heavy two-point traces on the core, with its key flags."""

    graph: Graph
    connected: bool
    has_odd_heavy_trace: bool


def pair_trace_graph(table: TraceTable, q: int, name_of: Callable[[int], str] = str) -> PairTraceView:
    """Edges are core pairs realized by at least q tail vertices."""
    if table.size < 2:
        raise ValueError("pair-trace graph needs a core of size >= 2")
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    m = table.size
    edges = []
    for mask in table.available_masks(q):
        if mask.bit_count() == 2:
            i = (mask & -mask).bit_length() - 1
            j = (mask ^ (mask & -mask)).bit_length() - 1
            edges.append((i, j))
    h2 = Graph.from_edges(m, edges, names=[name_of(v) for v in table.core])
    seen = 1
    frontier = [0]
    while frontier:
        v = frontier.pop()
        fresh = h2.adj_masks[v] & ~seen
        while fresh:
            low = fresh & -fresh
            seen |= low
            frontier.append(low.bit_length() - 1)
            fresh ^= low
    connected = seen == (1 << m) - 1
    odd_heavy = any(mask.bit_count() % 2 == 1 for mask in table.available_masks(q))
    return PairTraceView(graph=h2, connected=connected, has_odd_heavy_trace=odd_heavy)


@dataclass(frozen=True)
class TypePartition:
    """Twin-type classes: within a class, vertices look alike to everyone else."""

    t: int
    classes: tuple[tuple[int, ...], ...]


def neighborhood_diversity(graph: Graph) -> TypePartition:
    """Partition vertices into twin classes and count them.

    Two vertices have the same type when their neighborhoods agree away from
    the pair itself (covering both adjacent and non-adjacent twins).  Each
    class induces a clique or an independent set, and distinct classes are
    joined completely or not at all; both facts are asserted.
    """
    classes: list[list[int]] = []
    for v in range(graph.n):
        placed = False
        for cls in classes:
            u = cls[0]
            strip = ~((1 << u) | (1 << v))
            if graph.adj_masks[u] & strip == graph.adj_masks[v] & strip:
                cls.append(v)
                placed = True
                break
        if not placed:
            classes.append([v])
    result = tuple(tuple(cls) for cls in classes)
    for cls in result:
        internal = [graph.has_edge(a, b) for i, a in enumerate(cls) for b in cls[i + 1:]]
        if internal and len(set(internal)) != 1:
            raise AssertionError("a twin class must induce a clique or an independent set")
    for i, first in enumerate(result):
        for second in result[i + 1:]:
            across = {graph.has_edge(a, b) for a in first for b in second}
            if len(across) > 1:
                raise AssertionError("distinct twin classes must be joined completely or not at all")
    return TypePartition(t=len(result), classes=result)
