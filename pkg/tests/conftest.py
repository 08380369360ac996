"""Shared test helpers, including independent oracles for the fault model.

The oracle here deliberately re-derives the check semantics from scratch with
plain Python loops over explicit fault patterns, so it shares no code with the
vectorized simulator it cross-checks.
"""
from __future__ import annotations

import math
from itertools import combinations

from msdistill.fault_sim import ProtocolInstance


def enumerate_truncated(
    instance: ProtocolInstance,
    eps: float,
    weight_max: int = 4,
    corruption: str = "erroneous",
) -> tuple[float, float, float]:
    """Exact (accept, erroneous-accept) probability over patterns of weight <= weight_max.

    Returns (p_accept, p_erroneous, tail) where tail bounds the total probability
    of all heavier patterns: sum_{w>weight_max} C(S,w) eps^w <= C(S,w+1) eps^(w+1) / (1-S*eps).
    """
    a_n = instance.num_data
    m = instance.num_checks
    n_q = instance.inner.params.n_q
    d = instance.inner.params.d_q
    row_support = [
        [i for i in range(a_n) if instance.outer.matrix.entry(j, i)] for j in range(m)
    ]

    sites: list[tuple] = [("data", i) for i in range(a_n)]
    for j in range(m):
        for q in range(n_q):
            for slot in (0, 1):
                sites.append(("slot", j, q, slot))
    n_sites = len(sites)

    p_accept = 0.0
    p_err = 0.0
    for weight in range(0, weight_max + 1):
        base = eps**weight * (1 - eps) ** (n_sites - weight)
        for chosen in combinations(range(n_sites), weight):
            data = set()
            slots: dict[tuple[int, int], set[int]] = {}
            for idx in chosen:
                site = sites[idx]
                if site[0] == "data":
                    data.add(site[1])
                else:
                    slots.setdefault((site[1], site[2]), set()).add(site[3])
            ok = True
            erroneous = bool(data)
            for j in range(m):
                singles = sum(
                    1 for q in range(n_q) if len(slots.get((j, q), ())) == 1
                )
                doubles = sum(
                    1 for q in range(n_q) if len(slots.get((j, q), ())) == 2
                )
                if 1 <= singles <= d - 1:
                    ok = False
                    break
                outcome = (sum(1 for i in row_support[j] if i in data) + doubles) % 2
                if outcome:
                    ok = False
                    break
                if singles >= d:
                    if corruption == "reject":
                        ok = False
                        break
                    erroneous = True
            if ok:
                p_accept += base
                if erroneous:
                    p_err += base
    geometric = 1.0 - n_sites * eps
    tail = math.comb(n_sites, weight_max + 1) * eps ** (weight_max + 1) / max(geometric, 0.5)
    return p_accept, p_err, tail


def oracle_min_weight(instance: ProtocolInstance, weight_max: int) -> int | None:
    """min over nonzero v of |v| + 2|Mv|, the arithmetic form of the weight bound."""
    a_n = instance.num_data
    matrix = instance.outer.matrix
    best = None
    for weight in range(1, a_n + 1):
        for support in combinations(range(a_n), weight):
            violated = 0
            for j in range(matrix.rows):
                parity = sum(matrix.entry(j, i) for i in support) % 2
                violated += parity
            cost = weight + 2 * violated
            if cost <= weight_max and (best is None or cost < best):
                best = cost
    return best
