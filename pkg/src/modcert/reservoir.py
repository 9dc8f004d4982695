"""Monte-Carlo study of random trace reservoirs against the availability bound.

Samples N traces independently from a distribution over core subsets and
measures how often some basis trace falls below multiplicity q, the failure
event of the reservoir absorption guarantee.  The guarantee: when each of
the m-1 basis traces has probability at least p and Np >= 2q, all of them
reach multiplicity q except with probability (m-1) exp(-Np/8); with a full
basis available, the trace classes span the quotient and every defect is
absorbable.

Randomness is Mersenne Twister with per-trial streams derived from
(seed, trial index), so serial and parallel execution agree and identical
specs reproduce identical output byte for byte.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from typing import Sequence, Union

from .gf2 import BitMatrix, BitVector, rank
from .traces import TraceTable
from .witness import quotient_coords

RNG_ALGORITHM = "mt19937"

Distribution = Union[str, tuple[tuple[int, float], ...]]


@dataclass(frozen=True)
class ReservoirSpec:
    """Sampling plan: core size, modulus, distribution, sample and trial counts."""

    core_size: int
    q: int
    samples: int
    trials: int
    seed: int
    distribution: Distribution = "uniform"

    def __post_init__(self):
        if self.core_size < 1:
            raise ValueError(f"core size must be >= 1, got {self.core_size}")
        if self.q < 1 or self.q & (self.q - 1):
            raise ValueError(f"q must be a positive power of two, got {self.q}")
        if self.samples < 1:
            raise ValueError(f"sample count must be >= 1, got {self.samples}")
        if self.trials < 1:
            raise ValueError(f"trial count must be >= 1, got {self.trials}")
        if self.distribution != "uniform":
            total = 0.0
            full = (1 << self.core_size) - 1
            for mask, prob in self.distribution:
                if not 0 <= mask <= full:
                    raise ValueError(f"trace mask {mask:#x} out of range")
                if prob < 0:
                    raise ValueError("trace probabilities must be nonnegative")
                total += prob
            if abs(total - 1.0) > 1e-12:
                raise ValueError(f"trace probabilities sum to {total!r}, not 1")

    def to_json_dict(self) -> dict:
        dist = (
            "uniform"
            if self.distribution == "uniform"
            else [[mask, prob] for mask, prob in self.distribution]
        )
        return {
            "core_size": self.core_size,
            "q": self.q,
            "samples": self.samples,
            "trials": self.trials,
            "seed": self.seed,
            "distribution": dist,
        }


def trial_rng(seed: int, trial: int) -> random.Random:
    """Independent stream per (seed, trial); stable across run orders."""
    return random.Random((seed << 32) + trial)


def _draw_counts(spec: ReservoirSpec, rng: random.Random) -> Counter:
    counts: Counter = Counter()
    if spec.distribution == "uniform":
        m = spec.core_size
        for _ in range(spec.samples):
            counts[rng.getrandbits(m)] += 1
        return counts
    masks = [mask for mask, _ in spec.distribution]
    cumulative = []
    acc = 0.0
    for _, prob in spec.distribution:
        acc += prob
        cumulative.append(acc)
    for _ in range(spec.samples):
        u = rng.random()
        index = next((i for i, bound in enumerate(cumulative) if u < bound), len(masks) - 1)
        counts[masks[index]] += 1
    return counts


def sample_reservoir(spec: ReservoirSpec, trial: int = 0) -> TraceTable:
    """One sampled tail as a trace table over a synthetic core 0..m-1.

    Realizer ids start at m and follow draw order, so the table is a
    deterministic function of (spec, trial).
    """
    rng = trial_rng(spec.seed, trial)
    m = spec.core_size
    draws: list[int] = []
    if spec.distribution == "uniform":
        draws = [rng.getrandbits(m) for _ in range(spec.samples)]
    else:
        counts = _draw_counts(spec, rng)
        for mask in sorted(counts):
            draws.extend([mask] * counts[mask])
    grouped: dict[int, list[int]] = {}
    for index, mask in enumerate(draws):
        grouped.setdefault(mask, []).append(m + index)
    return TraceTable(core=tuple(range(m)), entries={k: tuple(v) for k, v in grouped.items()})


def uniform_basis(core_size: int) -> tuple[tuple[int, ...], float]:
    """Singleton traces off the base vertex; each has probability 2^-m."""
    masks = tuple(1 << i for i in range(1, core_size))
    return masks, 2.0 ** -core_size


def _verify_basis(core_size: int, basis: Sequence[int]) -> None:
    if len(basis) != core_size - 1:
        raise ValueError(f"basis must have {core_size - 1} traces, got {len(basis)}")
    columns = [quotient_coords(BitVector(core_size, mask), 0) for mask in basis]
    matrix = BitMatrix.from_columns(columns, rows=core_size - 1)
    if rank(matrix) != core_size - 1:
        raise ValueError("declared basis traces do not span the quotient")


def _spans(core_size: int, masks: Sequence[int]) -> bool:
    columns = [quotient_coords(BitVector(core_size, mask), 0) for mask in masks]
    matrix = BitMatrix.from_columns(columns, rows=max(core_size - 1, 0))
    return rank(matrix) == core_size - 1


@dataclass(frozen=True)
class AvailabilityReport:
    spec: ReservoirSpec
    basis: tuple[int, ...]
    min_probability: float
    failures: int
    empirical_failure_rate: float
    bound: float
    rank_rich_fraction: float
    advisory_small_sample: bool
    per_trial_failures: str

    def to_json_dict(self) -> dict:
        return {
            "spec": self.spec.to_json_dict(),
            "rng": RNG_ALGORITHM,
            "basis": [mask for mask in self.basis],
            "min_probability": self.min_probability,
            "failures": self.failures,
            "empirical_failure_rate": self.empirical_failure_rate,
            "bound": self.bound,
            "rank_rich_fraction": self.rank_rich_fraction,
            "advisory_small_sample": self.advisory_small_sample,
            "per_trial_failures": self.per_trial_failures,
        }


def estimate_availability(
    spec: ReservoirSpec,
    basis: Sequence[int] | None = None,
) -> AvailabilityReport:
    """Fraction of trials where some basis trace stays below multiplicity q.

    Compared against the theoretical bound (m-1) exp(-Np/8).  With N p below
    2q the guarantee's hypothesis fails; the run still executes but is
    marked advisory.  Also reports how often the full available family spans.
    """
    m = spec.core_size
    if basis is None:
        if spec.distribution == "uniform":
            basis_masks, p = uniform_basis(m)
        else:
            raise ValueError("an explicit distribution needs an explicit basis")
    else:
        basis_masks = tuple(basis)
        if spec.distribution == "uniform":
            p = 2.0 ** -m
        else:
            probs = dict(spec.distribution)
            missing = [mask for mask in basis_masks if probs.get(mask, 0.0) <= 0.0]
            if missing:
                raise ValueError(f"basis traces with zero probability: {missing}")
            p = min(probs[mask] for mask in basis_masks)
    if m > 1:
        _verify_basis(m, basis_masks)
    failures = 0
    spanning = 0
    bits = []
    for trial in range(spec.trials):
        counts = _draw_counts(spec, trial_rng(spec.seed, trial))
        failed = any(counts.get(mask, 0) < spec.q for mask in basis_masks)
        failures += failed
        bits.append("1" if failed else "0")
        available = [mask for mask, count in counts.items() if count >= spec.q]
        spanning += _spans(m, available)
    bound = (m - 1) * math.exp(-spec.samples * p / 8.0)
    return AvailabilityReport(
        spec=spec,
        basis=basis_masks,
        min_probability=p,
        failures=failures,
        empirical_failure_rate=failures / spec.trials,
        bound=bound,
        rank_rich_fraction=spanning / spec.trials,
        advisory_small_sample=spec.samples * p < 2 * spec.q,
        per_trial_failures="".join(bits),
    )


def uniform_sample_size(core_size: int, q: int, delta: float) -> int:
    """Smallest N meeting the uniform-reservoir guarantee at confidence 1 - delta."""
    if not 0 < delta < 1:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    m = core_size
    lower = max(
        2 ** (m + 1) * q,
        8.0 * 2 ** m * math.log((m - 1) / delta),
    )
    return math.ceil(lower)
