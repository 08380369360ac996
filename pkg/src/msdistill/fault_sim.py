"""Fault-injection simulation of the check-and-post-select semantics.

Faults live on the data magic states and on the two T-type slots of every
physical qubit in every check. A check rejects when the inner code sees a
detectable residual, flips its recorded outcome when a qubit has both slots
faulty, and is corrupted when the residual reaches the code distance.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .gf2 import BinMatrix, row_space
from .inner_codes import WeaklySelfDualCode
from .outer_codes import OuterCode, check_sensitivity

DEFAULT_BLOCK_SIZE = 1 << 16
ENUMERATION_SITE_GUARD = 64
ENUMERATION_WEIGHT_GUARD = 6


@dataclass(frozen=True)
class ProtocolInstance:
    """A desk-scale inner code plus outer schedule, ready for fault injection."""

    inner: WeaklySelfDualCode
    outer: OuterCode
    strict: bool = True

    def __post_init__(self) -> None:
        if self.strict:
            k, d = self.inner.params.k_q, self.inner.params.d_q
            if self.outer.check_degree != k:
                raise ValueError(
                    f"outer check degree {self.outer.check_degree} != inner k {k}"
                )
            ok, witness = check_sensitivity(self.outer.matrix, d - 1, (d - 1) // 2)
            if not ok:
                raise ValueError(f"outer schedule fails sensitivity: {witness}")

    @property
    def num_data(self) -> int:
        return self.outer.num_bits

    @property
    def num_checks(self) -> int:
        return self.outer.num_checks

    @property
    def fault_sites(self) -> int:
        return self.num_data + 2 * self.inner.params.n_q * self.num_checks


@dataclass(frozen=True)
class FaultAssignment:
    """Concrete fault pattern: data flips plus per-check, per-qubit slot faults."""

    data: np.ndarray  # (a_n,) 0/1
    slots: np.ndarray  # (m, n_q, 2) 0/1

    @property
    def weight(self) -> int:
        return int(self.data.sum()) + int(self.slots.sum())


@dataclass(frozen=True)
class CheckVerdict:
    rejected: bool
    outcome: int
    corrupted: bool


def run_check(
    instance: ProtocolInstance,
    check_index: int,
    faults: FaultAssignment,
    mode: str = "idealized",
) -> CheckVerdict:
    """Evaluate one check of the schedule against a fault assignment.

    Idealized mode uses only the inner distance: a residual of weight
    1..d-1 rejects, weight >= d is a logical-corruption event. Exact mode
    computes the residual's syndrome against the inner check matrix.
    """
    inner = instance.inner
    n_q, d = inner.params.n_q, inner.params.d_q
    slot1 = faults.slots[check_index, :, 0]
    slot2 = faults.slots[check_index, :, 1]
    single = slot1 ^ slot2
    doubles = int((slot1 & slot2).sum())

    row = instance.outer.matrix.row_bits[check_index]
    data_parity = 0
    for i in range(instance.num_data):
        if (row >> i) & 1:
            data_parity ^= int(faults.data[i])
    outcome = data_parity ^ (doubles & 1)

    residual_weight = int(single.sum())
    if mode == "idealized":
        if 1 <= residual_weight <= d - 1:
            return CheckVerdict(True, 0, False)
        return CheckVerdict(False, outcome, residual_weight >= d)
    if mode == "exact":
        packed = 0
        for q in range(n_q):
            packed |= int(single[q]) << q
        from .gf2 import syndrome as gf2_syndrome

        if gf2_syndrome(inner.check, packed) != 0:
            return CheckVerdict(True, 0, False)
        corrupted = packed != 0 and packed not in row_space(inner.check)
        return CheckVerdict(False, outcome, corrupted)
    raise ValueError(f"unknown mode {mode!r}")


def _wilson_interval(successes: int, total: int) -> tuple[float, float, float]:
    """(point estimate, low, high) 95% Wilson interval."""
    if total == 0:
        return (math.nan, 0.0, 1.0)
    z = 1.959963984540054
    p = successes / total
    denom = 1.0 + z * z / total
    center = (p + z * z / (2 * total)) / denom
    half = (z / denom) * math.sqrt(p * (1 - p) / total + z * z / (4 * total * total))
    return (p, max(0.0, center - half), min(1.0, center + half))


@dataclass(frozen=True)
class SimReport:
    """Monte Carlo verdict statistics with 95% Wilson intervals."""

    trials: int
    accepted: int
    erroneous_accepted: int
    data_flips_accepted: int
    eps: float
    seed: int
    mode: str
    corruption: str

    @property
    def accept_prob(self) -> tuple[float, float, float]:
        return _wilson_interval(self.accepted, self.trials)

    @property
    def eps_out_total(self) -> tuple[float, float, float]:
        return _wilson_interval(self.erroneous_accepted, self.accepted)

    @property
    def eps_out_per_copy(self) -> tuple[float, float, float]:
        # counts data flips only; scaled Wilson over accepted copies
        if self.accepted == 0:
            return (math.nan, 0.0, 1.0)
        return _wilson_interval(self.data_flips_accepted, self.accepted)

    def to_json_dict(self) -> dict[str, object]:
        point, lo, hi = self.eps_out_total
        a_point, a_lo, a_hi = self.accept_prob
        return {
            "trials": self.trials,
            "accepted": self.accepted,
            "erroneous_accepted": self.erroneous_accepted,
            "data_flips_accepted": self.data_flips_accepted,
            "eps": self.eps,
            "seed": self.seed,
            "mode": self.mode,
            "corruption": self.corruption,
            "eps_out_total": point,
            "eps_out_ci": [lo, hi],
            "accept_prob": a_point,
            "accept_prob_ci": [a_lo, a_hi],
        }


@dataclass(frozen=True)
class _Kernel:
    """Precomputed arrays shared by all Monte Carlo blocks of one instance."""

    outer: np.ndarray  # (m, a_n) uint8
    inner_check: np.ndarray | None  # (rows, n_q) uint8, exact mode only
    row_span: np.ndarray | None  # sorted packed row-space vectors
    n_q: int
    d_q: int

    @classmethod
    def build(cls, instance: ProtocolInstance, mode: str) -> "_Kernel":
        outer = instance.outer.matrix.to_array()
        if mode == "exact":
            check = instance.inner.check
            span = np.array(sorted(row_space(check)), dtype=np.int64)
            return cls(outer, check.to_array(), span, instance.inner.params.n_q,
                       instance.inner.params.d_q)
        return cls(outer, None, None, instance.inner.params.n_q, instance.inner.params.d_q)


def _simulate_block(
    kernel: _Kernel,
    eps: float,
    seed: int,
    block_index: int,
    block_size: int,
    mode: str,
    corruption: str,
) -> tuple[int, int, int]:
    """Returns (accepted, erroneous_accepted, data_flips_accepted) for one block."""
    m, a_n = kernel.outer.shape
    n_q, d = kernel.n_q, kernel.d_q
    n_sites = a_n + 2 * m * n_q

    key = ((seed & ((1 << 64) - 1)) << 64) | (block_index & ((1 << 64) - 1))
    rng = np.random.Generator(np.random.Philox(key=key))
    # float32 draws: half the memory traffic of float64, and eps values of
    # interest (>= 1e-6) are far above the 2^-24 uniform granularity
    faults = rng.random((block_size, n_sites), dtype=np.float32) < eps

    data = faults[:, :a_n]
    slots = faults[:, a_n:].reshape(block_size, m, n_q, 2)
    single = slots[..., 0] ^ slots[..., 1]
    doubles = slots[..., 0] & slots[..., 1]
    double_parity = doubles.sum(axis=2, dtype=np.int64) & 1
    data_parity = (data.astype(np.uint8) @ kernel.outer.T.astype(np.int64)) & 1
    outcomes = data_parity ^ double_parity

    if mode == "idealized":
        residual = single.sum(axis=2, dtype=np.int64)
        reject = ((residual >= 1) & (residual <= d - 1)).any(axis=1)
        corrupt = (residual >= d).any(axis=1)
    else:
        syndromes = (single.astype(np.int64) @ kernel.inner_check.T.astype(np.int64)) & 1
        check_reject = syndromes.any(axis=2)
        reject = check_reject.any(axis=1)
        powers = (1 << np.arange(n_q, dtype=np.int64))
        packed = single.astype(np.int64) @ powers
        in_span = np.isin(packed, kernel.row_span)
        corrupt = (~check_reject & (packed != 0) & ~in_span).any(axis=1)

    accept = ~reject & (outcomes == 0).all(axis=1)
    if corruption == "reject":
        accept &= ~corrupt
        erroneous = accept & data.any(axis=1)
    else:  # "erroneous": corrupted trials stay in, counted as output errors
        erroneous = accept & (data.any(axis=1) | corrupt)

    flips = int(data.sum(axis=1, dtype=np.int64)[accept].sum())
    return int(accept.sum()), int(erroneous.sum()), flips


def monte_carlo(
    instance: ProtocolInstance,
    eps: float,
    trials: int,
    seed: int,
    *,
    mode: str = "idealized",
    corruption: str = "erroneous",
    workers: int | None = None,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> SimReport:
    """Sample independent faults on every site and tally post-selection verdicts.

    The RNG is counter-based and keyed by (seed, block index) with a fixed
    block size, so results are bit-identical for any worker count.
    """
    if not 0 <= eps < 0.5:
        raise ValueError("eps must be in [0, 0.5)")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if corruption not in ("erroneous", "reject"):
        raise ValueError(f"unknown corruption convention {corruption!r}")
    if mode not in ("idealized", "exact"):
        raise ValueError(f"unknown mode {mode!r}")

    kernel = _Kernel.build(instance, mode)
    n_blocks = (trials + block_size - 1) // block_size
    sizes = [block_size] * (n_blocks - 1) + [trials - block_size * (n_blocks - 1)]

    def job(index: int) -> tuple[int, int, int]:
        return _simulate_block(kernel, eps, seed, index, sizes[index], mode, corruption)

    if workers is None:
        workers = min(n_blocks, os.cpu_count() or 1)
    if workers <= 1 or n_blocks == 1:
        results = [job(i) for i in range(n_blocks)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, range(n_blocks)))

    accepted = sum(r[0] for r in results)
    erroneous = sum(r[1] for r in results)
    flips = sum(r[2] for r in results)
    return SimReport(trials, accepted, erroneous, flips, eps, seed, mode, corruption)


def make_single_check_instance(
    inner: WeaklySelfDualCode, data_count: int = 4
) -> ProtocolInstance:
    """One all-ones check over ``data_count`` states, with no outer protection."""
    row = (1 << data_count) - 1
    outer = OuterCode(BinMatrix(1, data_count, (row,)), data_count, 1)
    return ProtocolInstance(inner, outer, strict=False)


def single_check_order(
    inner: WeaklySelfDualCode,
    eps: float,
    trials: int,
    seed: int,
    *,
    data_count: int = 4,
    **kwargs: object,
) -> SimReport:
    """Monte Carlo for the unprotected single-check baseline (quadratic error floor)."""
    instance = make_single_check_instance(inner, data_count)
    return monte_carlo(instance, eps, trials, seed, **kwargs)  # type: ignore[arg-type]


@dataclass(frozen=True)
class SlopeFit:
    """Weighted least-squares fit of log eps_out against log eps."""

    slope: float
    intercept: float
    points: tuple[tuple[float, float, int], ...]  # (eps, eps_out, events)


def fit_error_order(
    instance: ProtocolInstance,
    eps_values: list[float],
    trials: int,
    seed: int,
    **kwargs: object,
) -> SlopeFit:
    """Estimate the error-suppression order from a Monte Carlo sweep.

    Points are weighted by their erroneous-accept counts (the inverse variance
    of a log-Poisson estimate); zero-event points are dropped.
    """
    points = []
    for i, eps in enumerate(eps_values):
        report = monte_carlo(instance, eps, trials, seed + i, **kwargs)  # type: ignore[arg-type]
        if report.accepted and report.erroneous_accepted:
            points.append((eps, report.eps_out_total[0], report.erroneous_accepted))
    if len(points) < 2:
        raise RuntimeError("not enough nonzero points for a slope fit")
    x = np.log([p[0] for p in points])
    y = np.log([p[1] for p in points])
    w = np.array([p[2] for p in points], dtype=float)
    slope, intercept = np.polyfit(x, y, 1, w=np.sqrt(w))
    return SlopeFit(float(slope), float(intercept), tuple(points))


def min_undetected_weight(
    instance: ProtocolInstance, weight_max: int
) -> int | None:
    """Lightest accepted fault pattern leaving a data error, or None if > weight_max.

    Enumerates data patterns by ascending weight; for each one, a candidate
    assignment hides every violated check with a slot double and is verified
    through run_check. Guarded to desk scale.
    """
    if instance.fault_sites > ENUMERATION_SITE_GUARD and weight_max > ENUMERATION_WEIGHT_GUARD:
        raise ValueError(
            f"enumeration guard: need fault sites <= {ENUMERATION_SITE_GUARD} "
            f"or weight_max <= {ENUMERATION_WEIGHT_GUARD}"
        )
    a_n = instance.num_data
    m = instance.num_checks
    n_q = instance.inner.params.n_q
    cols = instance.outer.matrix.column_bits()

    best: int | None = None
    for weight in range(1, min(weight_max, a_n) + 1):
        if best is not None and weight >= best:
            break
        for support in combinations(range(a_n), weight):
            acc = 0
            for j in support:
                acc ^= cols[j]
            cost = weight + 2 * acc.bit_count()
            if cost > weight_max or (best is not None and cost >= best):
                continue
            data = np.zeros(a_n, dtype=np.uint8)
            for j in support:
                data[j] = 1
            slot_faults = np.zeros((m, n_q, 2), dtype=np.uint8)
            for check in range(m):
                if (acc >> check) & 1:
                    slot_faults[check, 0, :] = 1  # a double on the first qubit
            assignment = FaultAssignment(data, slot_faults)
            verdicts = [run_check(instance, j, assignment) for j in range(m)]
            if any(v.rejected or v.outcome for v in verdicts):
                continue
            best = cost
    return best
