"""Modular obstruction calculus for regular induced subgraphs.

Core pipeline: parity partition as the base congruence, trace tables over a
retained core, exact next-bit obstruction classes, and an absorption engine
that emits either a verified deletion certificate or a verified parity-cut
obstruction, with brute-force oracles and a reservoir simulator alongside.
"""

from .absorb import (
    AbsorptionProblem,
    Applies,
    Certificate,
    DeletionCertificate,
    DoesNotApply,
    Fails,
    Holds,
    NotTwinTail,
    ParityCut,
    TwinTailBlocks,
    all_tail_identity_check,
    basis_tail_check,
    certificate_from_json,
    certificate_to_json,
    pair_trace_sufficiency,
    rank_rich,
    rank_rich_check,
    self_layer_check,
    solve_core_correction,
    solve_defect,
    twin_tail_decompose,
    verify_deletion_certificate,
    verify_parity_cut,
)
from .errors import InternalInvariantError, ParseError
from .gf2 import BitMatrix, BitVector, Dual, Solution, dot, mat_vec, rank, solve_or_dual, vec_add
from .graph import Graph, induced_degrees, is_regular, load_graph
from .oracle import brute_force_absorption, brute_force_alpha_omega, brute_force_max_regular
from .parity import parity_partition, two_modular_part, verify_even_partition
from .reservoir import AvailabilityReport, ReservoirSpec, estimate_availability, sample_reservoir
from .synth import path_pair_trace_problem, realize_problem, twin_pair_example
from .traces import (
    DivisibilityFails,
    NotConstantModulo,
    QuotientClass,
    TraceTable,
    complement_difference,
    compute_traces,
    neighborhood_diversity,
    next_bit_obstruction,
    oriented_orbit_form,
    pair_trace_graph,
    tail_degrees,
)
from .witness import (
    ModularWitness,
    Regular,
    TooLarge,
    TopBitLabel,
    affine_lift_check,
    is_q_modular,
    quotient_coords,
    terminal_check,
    top_bit_label,
)

__version__ = "0.1.0"
