"""Deterministic streams of index tuples for condition assembly."""
from __future__ import annotations

import itertools
import random

__all__ = ["order_types", "tuple_stream"]


def _weak_orders(arity: int):
    # surjections positions -> 0..m-1, i.e. ordered set partitions
    for m in range(1, arity + 1):
        for ranks in itertools.product(range(m), repeat=arity):
            if len(set(ranks)) == m:
                yield m, ranks


def order_types(arity: int, N: int) -> list:
    """One or more representatives of every pattern of equalities and
    inequalities among the indices, placed low, high and spread out."""
    out = []
    seen = set()
    for m, ranks in _weak_orders(arity):
        if m > N:
            continue
        placements = [
            list(range(1, m + 1)),
            list(range(N - m + 1, N + 1)),
            [1 + (r * (N - 1)) // max(m - 1, 1) for r in range(m)],
        ]
        for vals in placements:
            t = tuple(vals[r] for r in ranks)
            if t not in seen:
                seen.add(t)
                out.append(t)
    return out


def tuple_stream(arity: int, N: int, seed: int = 0, exhaustive_limit: int = 1296,
                 structured: bool = True):
    """Yield (tuple, structured_flag).

    Small index spaces are enumerated completely.  Otherwise the order-type
    representatives come first, then seeded random tuples without repeats.
    """
    total = N ** arity
    if total <= exhaustive_limit:
        for t in itertools.product(range(1, N + 1), repeat=arity):
            yield t, True
        return
    seen = set()
    if structured:
        for t in order_types(arity, N):
            seen.add(t)
            yield t, True
    rng = random.Random(seed * 1000003 + arity * 101 + N)
    while len(seen) < total:
        t = tuple(rng.randint(1, N) for _ in range(arity))
        if t in seen:
            continue
        seen.add(t)
        yield t, False
