"""Absorption-or-obstruction engine for one dyadic lifting step.

Deleting q tail vertices of a common trace shifts every core degree inside
that trace by exactly q, so modulo 2q it flips the top bit on the trace and
nothing else.  Whether some family of disjoint equal-trace q-tuples can make
the core degrees agree modulo 2q is therefore a linear system over GF(2) in
the quotient modulo constant vectors: columns are the classes of the traces
with multiplicity at least q, the target is the class of the top-bit label.
A solution yields a deletion certificate; inconsistency yields an even
parity cut of the core that meets every available trace evenly but the
defect oddly.  Both outputs are re-verified before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import InternalInvariantError
from .gf2 import BitMatrix, BitVector, Dual, Solution, pivot_columns, rank, solve_or_dual
from .graph import check_subset, mask_of
from .traces import TraceTable, compute_traces, pair_trace_graph
from .witness import ModularWitness, TopBitLabel, is_q_modular, quotient_coords, top_bit_label

SCHEMA_VERSION = "modcert-v1"


@dataclass(frozen=True)
class AbsorptionProblem:
    """A witness, a retained core, the top-bit label, and the tail's traces."""

    witness: ModularWitness
    core: tuple[int, ...]
    label: TopBitLabel
    table: TraceTable

    @classmethod
    def build(cls, witness: ModularWitness, core) -> "AbsorptionProblem":
        core_set = check_subset(witness.graph, core)
        if not core_set:
            raise ValueError("core must be nonempty")
        if not core_set <= witness.members:
            raise ValueError("core must lie inside the witness")
        label = top_bit_label(witness, core_set)
        table = compute_traces(witness.graph, core_set, witness.members - core_set)
        return cls(witness=witness, core=tuple(sorted(core_set)), label=label, table=table)

    @property
    def q(self) -> int:
        return self.witness.q

    @property
    def lift(self) -> int:
        return self.label.base_lift

    @property
    def graph(self):
        return self.witness.graph

    def label_bits(self) -> BitVector:
        return self.label.bits_over(self.core)


@dataclass(frozen=True)
class DeletionCertificate:
    """Chosen traces and, for each, the concrete q-tuple of deleted tail vertices."""

    q: int
    lift: int
    core: tuple[int, ...]
    chosen: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    residue_achieved: int | None

    def deleted_vertices(self) -> tuple[int, ...]:
        return tuple(sorted(v for _, deleted in self.chosen for v in deleted))


@dataclass(frozen=True)
class ParityCut:
    """Even core subset meeting every available trace evenly but the defect oddly."""

    q: int
    lift: int
    core: tuple[int, ...]
    members: tuple[int, ...]


Certificate = Union[DeletionCertificate, ParityCut]


@dataclass(frozen=True)
class TraceSelection:
    masks: tuple[int, ...]
    deletions: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class CutPositions:
    positions: tuple[int, ...]


def trace_class_matrix(table: TraceTable, q: int) -> tuple[list[int], BitMatrix]:
    """Quotient coordinates of the available trace classes, one column per mask."""
    masks = table.available_masks(q)
    m = table.size
    columns = [
        quotient_coords(BitVector(m, mask), 0)
        for mask in masks
    ]
    return masks, BitMatrix.from_columns(columns, rows=max(m - 1, 0))


def solve_defect(table: TraceTable, q: int, label_bits: BitVector) -> Union[TraceSelection, CutPositions]:
    """Table-level core correction: choose q-tuples or produce a cut.

    Works on trace data alone (no graph needed), so it also serves sampled
    reservoirs.  Deterministic: columns in mask order, elimination pivots on
    the lowest available row, free variables zero, q lowest realizers per
    chosen trace.
    """
    if table.size < 1:
        raise ValueError("core must be nonempty")
    if label_bits.length != table.size:
        raise ValueError("label length does not match core size")
    if q < 1 or q & (q - 1):
        raise ValueError(f"q must be a positive power of two, got {q}")
    masks, matrix = trace_class_matrix(table, q)
    target = quotient_coords(label_bits, 0)
    outcome = solve_or_dual(matrix, target)
    if isinstance(outcome, Solution):
        chosen = [masks[j] for j in range(len(masks)) if outcome.x.bits >> j & 1]
        deletions = tuple(table.entries[mask][:q] for mask in chosen)
        return TraceSelection(masks=tuple(chosen), deletions=deletions)
    cut = _cut_from_dual(table, outcome, label_bits, q)
    return cut


def _cut_from_dual(table: TraceTable, dual: Dual, label_bits: BitVector, q: int) -> CutPositions:
    # Row i of the system is core position i+1 (position 0 is the base).
    positions = {i + 1 for i in range(dual.y.length) if dual.y.bits >> i & 1}
    if len(positions) % 2:
        positions.add(0)
    cut = CutPositions(positions=tuple(sorted(positions)))
    _assert_cut_valid(table, q, label_bits, cut)
    return cut


def _assert_cut_valid(table: TraceTable, q: int, label_bits: BitVector, cut: CutPositions) -> None:
    cut_mask = 0
    for p in cut.positions:
        cut_mask |= 1 << p
    if not cut.positions or len(cut.positions) % 2:
        raise InternalInvariantError("parity cut must be nonempty and even")
    if (label_bits.bits & cut_mask).bit_count() % 2 == 0:
        raise InternalInvariantError("parity cut fails to detect the defect")
    for mask in table.available_masks(q):
        if (mask & cut_mask).bit_count() % 2:
            raise InternalInvariantError("parity cut meets an available trace oddly")


def solve_core_correction(problem: AbsorptionProblem) -> Certificate:
    """Emit a verified deletion certificate or a verified parity cut."""
    outcome = solve_defect(problem.table, problem.q, problem.label_bits())
    if isinstance(outcome, TraceSelection):
        chosen = tuple(
            (problem.table.members_of(mask), deletion)
            for mask, deletion in zip(outcome.masks, outcome.deletions)
        )
        cert = DeletionCertificate(
            q=problem.q,
            lift=problem.lift,
            core=problem.core,
            chosen=chosen,
            residue_achieved=None,
        )
        ok, residue = _deletion_outcome(problem, cert)
        if not ok:
            raise InternalInvariantError("deletion certificate failed independent verification")
        return DeletionCertificate(
            q=cert.q, lift=cert.lift, core=cert.core, chosen=cert.chosen,
            residue_achieved=residue,
        )
    cut = ParityCut(
        q=problem.q,
        lift=problem.lift,
        core=problem.core,
        members=tuple(problem.core[p] for p in outcome.positions),
    )
    if not verify_parity_cut(problem, cut.members):
        raise InternalInvariantError("parity cut failed independent verification")
    return cut


def _deletion_outcome(problem: AbsorptionProblem, cert: DeletionCertificate) -> tuple[bool, int | None]:
    """Physically delete the cited q-tuples and recheck the mod-2q congruence."""
    if cert.q != problem.q:
        raise ValueError(f"certificate modulus {cert.q} does not match the problem's {problem.q}")
    if tuple(cert.core) != problem.core:
        raise ValueError("certificate core does not match the problem core")
    graph = problem.graph
    tail = set(problem.table.tail_vertices())
    deleted: set[int] = set()
    for trace_members, tuple_members in cert.chosen:
        if len(tuple_members) != cert.q:
            raise ValueError(
                f"trace {trace_members}: expected a q-tuple of size {cert.q}, got {len(tuple_members)}"
            )
        for v in tuple_members:
            if v not in tail:
                raise ValueError(f"deleted vertex {v} is not a tail vertex")
            if v in deleted:
                raise ValueError(f"deleted vertex {v} cited twice; q-tuples must be disjoint")
            deleted.add(v)
    retained = problem.witness.members - deleted
    retained_mask = mask_of(retained)
    two_q = 2 * cert.q
    residues = {
        (graph.adj_masks[u] & retained_mask).bit_count() % two_q
        for u in problem.core
    }
    if len(residues) == 1:
        return True, residues.pop()
    return False, None


def verify_deletion_certificate(problem: AbsorptionProblem, cert: DeletionCertificate) -> bool:
    """Independent recheck: delete the cited vertices, recompute degrees directly."""
    ok, _ = _deletion_outcome(problem, cert)
    return ok


def verify_parity_cut(problem: AbsorptionProblem, members) -> bool:
    """Check the three cut conditions directly against the problem data."""
    cut_set = check_subset(problem.graph, members)
    core_set = set(problem.core)
    if not cut_set <= core_set:
        raise ValueError("parity cut must be a subset of the core")
    if len(cut_set) % 2:
        return False
    label_sum = sum(problem.label.labels[u] for u in cut_set) % 2
    if label_sum == 0:
        return False
    positions = {problem.table.position_of(u) for u in cut_set}
    cut_mask = 0
    for p in positions:
        cut_mask |= 1 << p
    for mask in problem.table.available_masks(problem.q):
        if (mask & cut_mask).bit_count() % 2:
            return False
    return True


@dataclass(frozen=True)
class Holds:
    pass


@dataclass(frozen=True)
class Fails:
    reason: str


def all_tail_identity_check(problem: AbsorptionProblem) -> Union[Holds, Fails]:
    """Does deleting the whole tail leave exactly the core synchronized mod 2q?

    Requires every multiplicity divisible by q, and the parity-weighted sum
    of all trace classes to equal the top-bit defect.  When it holds, the
    conclusion is re-derived by direct degree recomputation on the bare core.
    """
    q = problem.q
    for mask in problem.table.masks():
        if problem.table.count(mask) % q:
            return Fails(
                reason=f"multiplicity of trace {problem.table.members_of(mask)} is not divisible by q"
            )
    acc = 0
    for mask in problem.table.masks():
        if (problem.table.count(mask) // q) % 2:
            acc ^= mask
    defect = quotient_coords(problem.label_bits(), 0)
    achieved = quotient_coords(BitVector(problem.table.size, acc), 0)
    if defect != achieved:
        return Fails(reason="block-parity sum of trace classes misses the top-bit defect")
    check = is_q_modular(problem.graph, problem.core, 2 * q)
    if not check.modular:
        raise InternalInvariantError(
            "all-tail identity held but the bare core is not 2q-modular"
        )
    return Holds()


def self_layer_check(problem: AbsorptionProblem, cert: DeletionCertificate) -> tuple[int, ...]:
    """Retained tail vertices whose mod-2q residue misses the core residue.

    An empty result means the whole retained set, not just the core, is
    2q-modular.  The certificate must verify first.
    """
    ok, residue = _deletion_outcome(problem, cert)
    if not ok:
        raise ValueError("certificate failed verification; self-layer check needs a valid deletion")
    graph = problem.graph
    retained = problem.witness.members - set(cert.deleted_vertices())
    retained_mask = mask_of(retained)
    two_q = 2 * problem.q
    violating = []
    for y in sorted(retained - set(problem.core)):
        if (graph.adj_masks[y] & retained_mask).bit_count() % two_q != residue:
            violating.append(y)
    return tuple(violating)


def rank_rich(table: TraceTable, q: int) -> tuple[bool, tuple[int, ...]]:
    """Do the available trace classes span the whole quotient?

    When they do, the pivot columns give a spanning subfamily of at most
    |core|-1 traces, so every defect is absorbable by that many q-tuples.
    """
    if table.size < 1:
        raise ValueError("core must be nonempty")
    masks, matrix = trace_class_matrix(table, q)
    spanning = rank(matrix) == table.size - 1
    if not spanning:
        return False, ()
    return True, tuple(masks[j] for j in pivot_columns(matrix))


def rank_rich_check(problem: AbsorptionProblem) -> tuple[bool, tuple[tuple[int, ...], ...]]:
    ok, masks = rank_rich(problem.table, problem.q)
    return ok, tuple(problem.table.members_of(mask) for mask in masks)


@dataclass(frozen=True)
class Applies:
    pass


@dataclass(frozen=True)
class DoesNotApply:
    reason: str


def pair_trace_sufficiency(table: TraceTable, q: int) -> Union[Applies, DoesNotApply]:
    """Connected heavy-pair graph, plus an odd heavy trace on even cores.

    A sufficient condition for the rank-rich property: summing pair traces
    along paths produces every even-weight vector, and the odd trace leaves
    the even-weight subspace when the core has even size.  The implication
    is asserted whenever the condition applies.
    """
    view = pair_trace_graph(table, q)
    if not view.connected:
        return DoesNotApply(reason="heavy pair-trace graph is disconnected")
    if table.size % 2 == 0 and not view.has_odd_heavy_trace:
        return DoesNotApply(reason="even core with no odd-cardinality heavy trace")
    spanning, _ = rank_rich(table, q)
    if not spanning:
        raise InternalInvariantError(
            "pair-trace condition held but the available classes do not span"
        )
    return Applies()


def pair_trace_sufficiency_check(problem: AbsorptionProblem) -> Union[Applies, DoesNotApply]:
    return pair_trace_sufficiency(problem.table, problem.q)


@dataclass(frozen=True)
class TwinTailBlocks:
    """Tail partitioned into size-q blocks of identical trace, lowest ids first."""

    blocks: tuple[tuple[int, tuple[int, ...]], ...]


@dataclass(frozen=True)
class NotTwinTail:
    mask: int


def twin_tail_decompose(table: TraceTable, q: int) -> Union[TwinTailBlocks, NotTwinTail]:
    """Group realizers into q-blocks per trace when every multiplicity allows it."""
    if q < 1 or q & (q - 1):
        raise ValueError(f"q must be a positive power of two, got {q}")
    for mask in table.masks():
        if table.count(mask) % q:
            return NotTwinTail(mask=mask)
    blocks = []
    for mask in table.masks():
        realizers = table.entries[mask]
        for start in range(0, len(realizers), q):
            blocks.append((mask, realizers[start:start + q]))
    return TwinTailBlocks(blocks=tuple(blocks))


def basis_tail_check(
    problem: AbsorptionProblem,
    blocks: TwinTailBlocks,
    base_vertex: int | None = None,
) -> Union[Holds, Fails]:
    """Singleton-block parity pattern sufficient for the all-tail identity.

    Condition 1: for each core vertex u other than the base, the number of
    blocks with trace {u} has the parity of label(u) + label(base).
    Condition 2: all remaining block traces cancel in the quotient.
    This is sufficient, not necessary; the base vertex defaults to the lowest
    core id but may be chosen freely, and the conditions depend on it.
    """
    _validate_blocks(problem, blocks)
    core = problem.core
    u0 = core[0] if base_vertex is None else base_vertex
    if u0 not in core:
        raise ValueError(f"base vertex {u0} is not in the core")
    u0_pos = problem.table.position_of(u0)
    labels = problem.label.labels
    singleton_counts = {pos: 0 for pos in range(len(core))}
    remainder_acc = 0
    for mask, _members in blocks.blocks:
        if mask.bit_count() == 1 and mask != 1 << u0_pos:
            singleton_counts[mask.bit_length() - 1] += 1
        else:
            remainder_acc ^= mask
    for pos, u in enumerate(core):
        if u == u0:
            continue
        expected = (labels[u] + labels[u0]) % 2
        if singleton_counts[pos] % 2 != expected:
            return Fails(
                reason=f"singleton-block count at vertex {u} has the wrong parity"
            )
    full = (1 << len(core)) - 1
    if remainder_acc not in (0, full):
        return Fails(reason="remaining block traces do not cancel in the quotient")
    check = is_q_modular(problem.graph, problem.core, 2 * problem.q)
    if not check.modular:
        raise InternalInvariantError(
            "basis-tail conditions held but the bare core is not 2q-modular"
        )
    return Holds()


def _validate_blocks(problem: AbsorptionProblem, blocks: TwinTailBlocks) -> None:
    q = problem.q
    seen: set[int] = set()
    tail = set(problem.table.tail_vertices())
    for mask, members in blocks.blocks:
        if len(members) != q:
            raise ValueError(f"block {members} does not have size q={q}")
        for v in members:
            if v in seen:
                raise ValueError(f"vertex {v} appears in two blocks")
            if v not in tail:
                raise ValueError(f"block vertex {v} is not a tail vertex")
            seen.add(v)
            if v not in problem.table.entries.get(mask, ()):
                raise ValueError(f"vertex {v} does not have the block's declared trace")
    if seen != tail:
        raise ValueError("blocks must partition the whole tail")


def certificate_to_json(cert: Certificate, name_of=str) -> dict:
    """Serialize to the versioned wire format; vertices go out by name."""
    base = {
        "version": SCHEMA_VERSION,
        "q": cert.q,
        "d": cert.lift,
        "core": [name_of(v) for v in cert.core],
    }
    if isinstance(cert, DeletionCertificate):
        base["kind"] = "deletion"
        base["chosen_traces"] = [
            {
                "trace": [name_of(v) for v in trace_members],
                "deleted_vertices": [name_of(v) for v in deleted],
            }
            for trace_members, deleted in cert.chosen
        ]
        base["parity_cut_Y"] = None
        base["residue_achieved"] = cert.residue_achieved
    else:
        base["kind"] = "parity-cut"
        base["chosen_traces"] = None
        base["parity_cut_Y"] = [name_of(v) for v in cert.members]
        base["residue_achieved"] = None
    return base


def certificate_from_json(payload: dict, ids_of) -> Certificate:
    """Parse the wire format back; ``ids_of`` maps name lists to id lists."""
    if payload.get("version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported certificate version {payload.get('version')!r}")
    q = int(payload["q"])
    lift = int(payload["d"])
    core = tuple(sorted(ids_of(payload["core"])))
    kind = payload.get("kind")
    if kind == "deletion":
        chosen = tuple(
            (
                tuple(sorted(ids_of(entry["trace"]))),
                tuple(sorted(ids_of(entry["deleted_vertices"]))),
            )
            for entry in payload["chosen_traces"]
        )
        residue = payload.get("residue_achieved")
        return DeletionCertificate(
            q=q, lift=lift, core=core, chosen=chosen,
            residue_achieved=None if residue is None else int(residue),
        )
    if kind == "parity-cut":
        members = tuple(sorted(ids_of(payload["parity_cut_Y"])))
        return ParityCut(q=q, lift=lift, core=core, members=members)
    raise ValueError(f"unknown certificate kind {kind!r}")
