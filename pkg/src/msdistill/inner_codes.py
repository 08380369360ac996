"""Weakly self-dual CSS inner codes: parameters, validation, and GV families."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

from .gf2 import BinMatrix, is_self_orthogonal, rank2, row_space, syndrome

EXHAUSTIVE_DISTANCE_LIMIT = 20


@dataclass(frozen=True)
class CssCodeParams:
    """[[n, k, d]] parameters of the inner quantum code."""

    n_q: int
    k_q: int
    d_q: int
    odd_distance: bool = False

    def __post_init__(self) -> None:
        if not (1 <= self.k_q < self.n_q):
            raise ValueError(f"need 1 <= k < n, got [[{self.n_q},{self.k_q},{self.d_q}]]")
        if self.d_q < 1:
            raise ValueError("distance must be >= 1")
        if self.odd_distance and self.d_q % 2 == 0:
            raise ValueError("odd-distance tag on an even distance")

    def __str__(self) -> str:
        return f"[[{self.n_q},{self.k_q},{self.d_q}]]"


@dataclass(frozen=True)
class WeaklySelfDualCode:
    """A CSS code whose X and Z stabilizers share one check matrix."""

    params: CssCodeParams
    check: BinMatrix


def binary_entropy(x: float) -> float:
    """h(x) = -x log2 x - (1-x) log2 (1-x), with h(0) = h(1) = 0."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary entropy needs x in [0,1], got {x}")
    if x in (0.0, 1.0):
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def ln_rule_distance(n_q: int) -> int:
    """Largest odd integer <= floor(ln n); the distance schedule for GV families."""
    d = math.floor(math.log(n_q))
    return d if d % 2 else d - 1


def gv_params(
    n_q: int,
    d: int | None = None,
    *,
    entropy_variant: str = "single",
) -> CssCodeParams:
    """Parameters of a GV-existence weakly self-dual code.

    ``d=None`` applies the natural-log distance rule. ``entropy_variant`` is
    "single" (k = floor(n(1-h(d/n))), the default used by every headline
    number) or "double" (k = floor(n(1-2h(d/n)))).
    """
    if n_q < 4:
        raise ValueError("need n >= 4")
    if d is None:
        d = ln_rule_distance(n_q)
    if d < 1:
        raise ValueError(f"distance rule gives d={d} at n={n_q}")
    if 2 * d >= n_q:
        raise ValueError(f"need d < n/2, got d={d}, n={n_q}")
    h = binary_entropy(d / n_q)
    factor = {"single": 1.0, "double": 2.0}[entropy_variant]
    k = math.floor(n_q * (1.0 - factor * h))
    if k <= 0:
        raise ValueError(f"parameters give k={k} <= 0")
    return CssCodeParams(n_q, k, d, odd_distance=(d % 2 == 1))


def distance_family(n_max: int, *, entropy_variant: str = "single") -> list[CssCodeParams]:
    """Smallest n per odd distance under the ln rule, for n <= n_max.

    This is the candidate family the finite-size search sweeps: for each odd d
    the cheapest code is the first n with floor(ln n) = d.
    """
    out = []
    d = 3
    while True:
        n = math.ceil(math.exp(d))
        while math.floor(math.log(n)) < d:
            n += 1
        if n > n_max:
            break
        out.append(gv_params(n, d, entropy_variant=entropy_variant))
        d += 2
    return out


NO_LOGICAL_SENTINEL_OFFSET = 1  # min_distance_css returns cols+1 when k = 0


def min_distance_css(check: BinMatrix) -> int:
    """Exhaustive CSS distance: lightest zero-syndrome vector outside the row space.

    Refuses above EXHAUSTIVE_DISTANCE_LIMIT columns; returns cols+1 when no
    logical operator exists (k = 0 codes).
    """
    n = check.cols
    if n > EXHAUSTIVE_DISTANCE_LIMIT:
        raise ValueError(f"exhaustive distance limited to {EXHAUSTIVE_DISTANCE_LIMIT} columns")
    span = row_space(check)
    for weight in range(1, n + 1):
        for support in combinations(range(n), weight):
            e = 0
            for j in support:
                e |= 1 << j
            if syndrome(check, e) == 0 and e not in span:
                return weight
    return n + NO_LOGICAL_SENTINEL_OFFSET


@dataclass(frozen=True)
class ValidationReport:
    """Pass/fail entries from validate_code."""

    self_orthogonal: bool
    k_consistent: bool
    distance_ok: bool | None  # None when the exhaustive check is out of range
    measured_distance: int | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def all_passed(self) -> bool:
        return self.self_orthogonal and self.k_consistent and self.distance_ok is not False


def validate_code(code: WeaklySelfDualCode) -> ValidationReport:
    """Check self-orthogonality, k = n - 2 rank, and (small codes) the distance claim."""
    check = code.check
    params = code.params
    notes: list[str] = []
    ortho = is_self_orthogonal(check)
    k_ok = params.k_q == params.n_q - 2 * rank2(check)
    if check.cols != params.n_q:
        k_ok = False
        notes.append(f"matrix width {check.cols} != n_q {params.n_q}")
    if params.n_q <= EXHAUSTIVE_DISTANCE_LIMIT:
        measured = min_distance_css(check)
        dist_ok: bool | None = measured >= params.d_q
    else:
        measured = None
        dist_ok = None
        notes.append("distance unverified (exhaustive regime is n <= 20)")
    return ValidationReport(ortho, k_ok, dist_ok, measured, tuple(notes))


# Golden codes shipped with the repo, in the matrix literal format.
_STEANE_TEXT = """
0001111
0110011
1010101
"""

# 15-qubit code in weakly self-dual form: 7x15 self-orthogonal matrix with
# k = 15 - 2*7 = 1 and exhaustive distance 3.
_FIFTEEN_TEXT = """
101010101010101
011001100110011
000111100001111
000000011111111
011110000000000
101101000000000
110100100000000
"""

STEANE = WeaklySelfDualCode(
    CssCodeParams(7, 1, 3, odd_distance=True), BinMatrix.from_text(_STEANE_TEXT)
)
RM15 = WeaklySelfDualCode(
    CssCodeParams(15, 1, 3, odd_distance=True), BinMatrix.from_text(_FIFTEEN_TEXT)
)

CODE_LIBRARY: dict[str, WeaklySelfDualCode] = {
    "steane": STEANE,
    "rm15": RM15,
}


def load_named_code(name: str) -> WeaklySelfDualCode:
    try:
        return CODE_LIBRARY[name.lower()]
    except KeyError:
        raise KeyError(
            f"unknown code {name!r}; known codes: {sorted(CODE_LIBRARY)}"
        ) from None
