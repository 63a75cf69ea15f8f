"""Counting Motzkin bridges: lattice paths with up, down and flat steps.

A bridge runs from height 0 back to height 0 with no positivity
constraint, so with l flat and m down steps it is just an arbitrary
arrangement of l + 2m steps.  Three step-count families appear as
weights on the corners of black mobile vertices:

    bridge_count(l, m)            paths 0 -> 0, l flats, m downs
    bridge_plus_count(l, m)       paths 0 -> +1, l flats, m downs
    bridge_firstdown_count(l, m)  bridges whose first step is flat or down

The closed forms are quotients of factorials; bridge_firstdown_count is
defined through the first-step decomposition

    Bbar(l, m) = B(l-1, m) + Bplus(l, m-1)

with terms at negative indices counting zero, so Bbar(0, 0) = 0.  A
plain dynamic program over step multisets serves as an independent
check and as the small-case oracle in the tests.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

__all__ = [
    "bridge_count",
    "bridge_plus_count",
    "bridge_firstdown_count",
    "valency_pairs",
    "motzkin_dp_oracle",
    "excursion_series",
]


def bridge_count(l: int, m: int) -> int:
    """Arrangements of l flat, m down and m up steps."""
    if l < 0 or m < 0:
        return 0
    return factorial(l + 2 * m) // (factorial(l) * factorial(m) ** 2)


def bridge_plus_count(l: int, m: int) -> int:
    """Arrangements of l flat, m down and m+1 up steps (paths to +1)."""
    if l < 0 or m < 0:
        return 0
    return factorial(l + 2 * m + 1) // (
        factorial(l) * factorial(m) * factorial(m + 1))


def bridge_firstdown_count(l: int, m: int) -> int:
    """Bridges with l flats and m downs whose first step is not up."""
    return bridge_count(l - 1, m) + bridge_plus_count(l, m - 1)


def valency_pairs(i: int, kind: str, cap: int) -> list[tuple[int, int, int]]:
    """The (l, m, weight) triples a face of valency i contributes to one
    of the three mobile kernels.

    kind "L": l + 2m + 1 = i weighted by bridge_count;
    kind "Q": l + 2m + 2 = i weighted by bridge_plus_count;
    kind "T": l + 2m = i weighted by bridge_firstdown_count.

    Pairs with l + m > cap are dropped: they multiply monomials whose
    z-valuation already exceeds the working truncation order.
    """
    shift = {"L": 1, "Q": 2, "T": 0}[kind]
    fn = {"L": bridge_count, "Q": bridge_plus_count,
          "T": bridge_firstdown_count}[kind]
    out = []
    for m in range((i - shift) // 2 + 1):
        l = i - shift - 2 * m
        if l < 0 or l + m > cap:
            continue
        c = fn(l, m)
        if c:
            out.append((l, m, c))
    return out


@lru_cache(maxsize=None)
def _arrangements(f: int, d: int, u: int) -> int:
    """Number of step sequences with f flats, d downs, u ups, by the
    Pascal-style recurrence on the last step.  No factorials involved."""
    if f < 0 or d < 0 or u < 0:
        return 0
    if f == 0 and d == 0 and u == 0:
        return 1
    return (_arrangements(f - 1, d, u)
            + _arrangements(f, d - 1, u)
            + _arrangements(f, d, u - 1))


def motzkin_dp_oracle(l: int, m: int, kind: str = "bridge") -> int:
    """Count the same three families by exhaustive step DP.

    kind is one of "bridge", "plus", "firstdown".
    """
    if l < 0 or m < 0:
        return 0
    if kind == "bridge":
        return _arrangements(l, m, m)
    if kind == "plus":
        return _arrangements(l, m, m + 1)
    if kind == "firstdown":
        # first step flat, rest a bridge; or first step down, rest a path
        # from -1 up to 0, i.e. an arrangement with one extra up
        total = 0
        if l >= 1:
            total += _arrangements(l - 1, m, m)
        if m >= 1:
            total += _arrangements(l, m - 1, m)
        return total
    raise ValueError(f"unknown bridge kind: {kind!r}")


def excursion_series(order: int) -> list[list[Fraction]]:
    """Truncated bivariate series E(t, u) of Motzkin excursions,
    E = 1 + t E + u E^2, as a table E[i][j] = [t^i u^j] E.

    Kept here because the closed forms used by the singular analysis
    ((1-t)^2 - 4u under a square root) are most easily sanity-checked
    against this recursive expansion.
    """
    n = order + 1
    e = [[Fraction(0)] * n for _ in range(n)]
    e[0][0] = Fraction(1)
    # iterate to the fixed point; each pass fixes one more total degree
    for _ in range(n * 2):
        sq = [[Fraction(0)] * n for _ in range(n)]
        for i1 in range(n):
            for j1 in range(n):
                if e[i1][j1]:
                    for i2 in range(n - i1):
                        for j2 in range(n - j1):
                            if e[i2][j2]:
                                sq[i1 + i2][j1 + j2] += e[i1][j1] * e[i2][j2]
        nxt = [[Fraction(0)] * n for _ in range(n)]
        nxt[0][0] = Fraction(1)
        for i in range(n):
            for j in range(n):
                v = Fraction(0)
                if i >= 1:
                    v += e[i - 1][j]
                if j >= 1:
                    v += sq[i][j - 1]
                nxt[i][j] += v
        if nxt == e:
            break
        e = nxt
    return e
