"""Degree-congruence witnesses and the dyadic lifting predicates.

A set is q-modular when all its induced degrees agree modulo q.  Once such a
set is no larger than its modulus, the induced subgraph is outright regular:
degrees live in an interval shorter than q, so congruent means equal.  For a
power-of-two modulus the residue lifts to modulo 2q with one extra bit per
vertex, the top-bit label; everything downstream manipulates that label in
the quotient of GF(2)^U by the constant vectors, whose coordinates relative
to a base vertex are computed here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union

from .gf2 import BitVector
from .graph import Graph, check_subset, induced_degrees, is_regular, mask_of


class ModularityCheck(NamedTuple):
    modular: bool
    residue: int | None
    conflict: tuple[int, int] | None


def is_q_modular(graph: Graph, members, q: int) -> ModularityCheck:
    """Do all induced degrees on ``members`` agree modulo q?

    Returns the common residue on success, or a witnessing pair of vertices
    with different residues on failure.  Any q >= 1 is accepted here; the
    power-of-two restriction applies only to the dyadic machinery.
    """
    if q < 1:
        raise ValueError(f"modulus must be >= 1, got {q}")
    degs = induced_degrees(graph, members)
    if not degs:
        return ModularityCheck(True, None, None)
    items = sorted(degs.items())
    first_v, first_deg = items[0]
    residue = first_deg % q
    for v, deg in items[1:]:
        if deg % q != residue:
            return ModularityCheck(False, None, (first_v, v))
    return ModularityCheck(True, residue, None)


def _is_power_of_two(q: int) -> bool:
    return q >= 1 and q & (q - 1) == 0


@dataclass(frozen=True)
class ModularWitness:
    """A vertex set whose induced degrees all agree modulo a power of two."""

    graph: Graph
    members: frozenset[int]
    q: int
    residue: int | None

    @classmethod
    def build(cls, graph: Graph, members, q: int) -> "ModularWitness":
        if not _is_power_of_two(q):
            raise ValueError(f"witness modulus must be a power of two, got {q}")
        s = check_subset(graph, members)
        check = is_q_modular(graph, s, q)
        if not check.modular:
            u, v = check.conflict  # type: ignore[misc]
            raise ValueError(
                f"set is not {q}-modular: vertices {graph.name_of(u)!r} and "
                f"{graph.name_of(v)!r} have different degree residues"
            )
        return cls(graph=graph, members=s, q=q, residue=check.residue)

    def degrees(self) -> dict[int, int]:
        return induced_degrees(self.graph, self.members)


@dataclass(frozen=True)
class Regular:
    degree: int | None


@dataclass(frozen=True)
class TooLarge:
    size: int
    q: int


TerminalResult = Union[Regular, TooLarge]


def terminal_check(witness: ModularWitness) -> TerminalResult:
    """Report the guaranteed-regular degree once the witness fits its modulus."""
    size = len(witness.members)
    if size > witness.q:
        return TooLarge(size=size, q=witness.q)
    regular, degree = is_regular(witness.graph, witness.members)
    if not regular:
        raise AssertionError(
            "a q-modular set of size <= q must induce a regular subgraph"
        )
    return Regular(degree=degree)


@dataclass(frozen=True)
class TopBitLabel:
    """Per-vertex bit lifting degrees from modulo q to modulo 2q.

    For every labeled vertex, deg(v) within the witness is congruent to
    base_lift + q * labels[v] modulo 2q.
    """

    base_lift: int
    q: int
    labels: dict[int, int]

    def bits_over(self, core: tuple[int, ...]) -> BitVector:
        return BitVector.from_bits(self.labels[v] for v in core)


def top_bit_label(witness: ModularWitness, members) -> TopBitLabel:
    """Labels on a subset of the witness, using the canonical lift.

    The lift is the witness residue itself (the smallest nonnegative one).
    Any other lift differs by q and just flips every label, so quotient
    classes downstream do not depend on this choice.
    """
    s = check_subset(witness.graph, members)
    if not s <= witness.members:
        raise ValueError("labeled subset must lie inside the witness")
    d = witness.residue if witness.residue is not None else 0
    degs = induced_degrees(witness.graph, witness.members)
    labels = {v: (degs[v] - d) // witness.q % 2 for v in sorted(s)}
    for v in sorted(s):
        if degs[v] % (2 * witness.q) != (d + witness.q * labels[v]) % (2 * witness.q):
            raise AssertionError("top-bit label failed its defining congruence")
    return TopBitLabel(base_lift=d, q=witness.q, labels=labels)


def quotient_coords(x: BitVector, base_index: int) -> BitVector:
    """Coordinates of a vector modulo the constant line, relative to a base entry.

    Entry i of the result is x[i] + x[base] with the base position dropped;
    two vectors map to the same coordinates exactly when they differ by a
    constant vector.
    """
    if not 0 <= base_index < x.length:
        raise ValueError(f"base index {base_index} out of range for length {x.length}")
    base = x.bits >> base_index & 1
    bits = []
    for i in range(x.length):
        if i == base_index:
            continue
        bits.append((x.bits >> i & 1) ^ base)
    return BitVector.from_bits(bits)


def affine_lift_check(witness: ModularWitness, members) -> bool:
    """Is the subset 2q-modular, tested through the tail-corrected form?

    Equivalent to a direct degree check at modulus 2q: the subset's degrees
    are the witness degrees minus the tail-neighbor counts, so the subset is
    2q-modular exactly when tail count minus q times the top-bit label is
    constant modulo 2q on it.
    """
    s = check_subset(witness.graph, members)
    if not s <= witness.members:
        raise ValueError("subset must lie inside the witness")
    if not s:
        return True
    tail = witness.members - s
    tail_mask = mask_of(tail)
    label = top_bit_label(witness, s)
    two_q = 2 * witness.q
    seen: int | None = None
    for v in sorted(s):
        tail_count = (witness.graph.adj_masks[v] & tail_mask).bit_count()
        value = (tail_count - witness.q * label.labels[v]) % two_q
        if seen is None:
            seen = value
        elif value != seen:
            return False
    return True
