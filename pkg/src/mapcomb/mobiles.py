"""Mobile equations for face-valency-restricted rooted planar maps.

Two routes to the same numbers.  solve_bipartite_R handles all-even
degree sets through the one-unknown equation

    R = t z + z * sum over allowed valencies 2i of
                 x_{2i} * binom(2i-1, i) * R^i,

and general degree sets go through the four-series system in L (legged
half-mobiles), Q (leg pairs), R and T, with bridge-count weights on the
black corners.  Map series follow by integrating the pointing relation
in t.  Both solvers run on the exact engine from series.py; the count
and distribution front ends below switch to the packed engine once n
gets large, and the test suite holds the two engines to exact
agreement.

The z^0 coefficient of every map series here is zero: the edgeless map
has one face of valency zero, which no admissible degree set contains.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .degrees import DegreeSet
from .errors import NotBipartite, ValidationError
from .fastseries import packed_counts_all, packed_map_series
from .motzkin import valency_pairs
from .series import (MultiPoly, Series, extract, integrate_in_t,
                     solve_fixed_point, solve_fixed_point_system)

__all__ = [
    "MobileSolution",
    "DistributionTable",
    "solve_bipartite_R",
    "bipartite_map_series",
    "solve_general_LQRT",
    "general_map_series",
    "map_series",
    "count_maps",
    "count_table",
    "joint_distribution",
]


@dataclass(frozen=True)
class MobileSolution:
    """Fixed point of the mobile equations, truncated in z.

    Bipartite runs fill only R; the general system also carries L, Q
    and T.  Variable slot 0 of every coefficient is t; slot 1 + j marks
    faces of valency tracked[j].
    """
    R: Series
    tracked: Tuple[int, ...] = ()
    L: Optional[Series] = None
    Q: Optional[Series] = None
    T: Optional[Series] = None


def _check_tracked(dset: DegreeSet, tracked) -> Tuple[int, ...]:
    tracked = tuple(tracked)
    if len(set(tracked)) != len(tracked):
        raise ValidationError(f"tracked valencies repeat: {tracked!r}")
    for d in tracked:
        if d not in dset:
            raise ValidationError(
                f"tracked valency {d} lies outside the degree set")
    return tracked


def _marker_expo(nvars: int, slot: Optional[int]) -> Tuple[int, ...]:
    e = [0] * nvars
    e[0] = 1
    if slot is not None:
        e[slot] = 1
    return tuple(e)


def solve_bipartite_R(dset: DegreeSet, order: int,
                      tracked: Sequence[int] = ()) -> MobileSolution:
    """Solve the one-unknown bipartite mobile equation mod z^(order+1)."""
    if not dset.all_even():
        raise NotBipartite(
            f"degree set {dset.spec_string()!r} allows an odd valency")
    tracked = _check_tracked(dset, tracked)
    nvars = 1 + len(tracked)
    slot = {d: 1 + j for j, d in enumerate(tracked)}

    # z * R^i has valuation i + 1, so valencies above 2(order - 1) are
    # invisible at this truncation
    weights = []
    for v in dset.members(max(0, 2 * (order - 1))):
        i = v // 2
        expo = [0] * nvars
        if v in slot:
            expo[slot[v]] = 1
        weights.append((i, MultiPoly.monomial(nvars, tuple(expo),
                                              comb(2 * i - 1, i))))
    tz = Series.term(order, nvars, 1, _marker_expo(nvars, None), 1)

    def phi(r: Series) -> Series:
        acc = Series.zero(order, nvars)
        power = Series.const(order, nvars, 1)
        k = 0
        for i, mono in sorted(weights):
            while k < i:
                power = power * r
                k += 1
            acc = acc + Series(order, nvars,
                               [c * mono for c in power.coeffs])
        return tz + acc.shift_z(1)

    return MobileSolution(R=solve_fixed_point(phi, order, nvars),
                          tracked=tracked)


def bipartite_map_series(dset: DegreeSet, order: int,
                         tracked: Sequence[int] = ()) -> Series:
    """Generating series of rooted bipartite maps: [t^v z^n] counts maps
    with n edges and v vertices, face valencies in dset, with marker
    exponents giving the number of faces of each tracked valency."""
    sol = solve_bipartite_R(dset, order + 1, tracked)
    nvars = sol.R.nvars
    # pointing relation: dM/dt = 2 (R/z - t); the z^0 term cancels since
    # [z^1] R = t
    dm = sol.R.div_z().truncate(order).scale(2) \
        - Series.term(order, nvars, 0, _marker_expo(nvars, None), 2)
    return integrate_in_t(dm)


def solve_general_LQRT(dset: DegreeSet, order: int,
                       tracked: Sequence[int] = ()) -> MobileSolution:
    """Solve the general mobile system mod z^(order+1).

    L collects mobiles hanging off a single leg, Q off an up-down leg
    pair, R is the root series and T the root-vertex corner sum; the
    bridge counts weight how legs and submobile slots interleave around
    a black vertex of given valency.
    """
    tracked = _check_tracked(dset, tracked)
    nvars = 1 + len(tracked)
    slot = {d: 1 + j for j, d in enumerate(tracked)}

    def mark(v: int) -> Tuple[int, ...]:
        e = [0] * nvars
        if v in slot:
            e[slot[v]] = 1
        return tuple(e)

    # aggregated kernel terms: (l, m) -> MultiPoly weight
    kernels: Dict[str, Dict[Tuple[int, int], MultiPoly]] = {
        "L": {}, "Q": {}, "T": {}}
    caps = {"L": order - 1, "Q": order - 1, "T": order}
    for v in dset.members(2 * order):
        for kind in ("L", "Q", "T"):
            for l, m, c in valency_pairs(v, kind, caps[kind]):
                mono = MultiPoly.monomial(nvars, mark(v), c)
                cur = kernels[kind].get((l, m))
                kernels[kind][(l, m)] = mono if cur is None else cur + mono

    lmax = max((l for tab in kernels.values() for l, _ in tab), default=0)
    mmax = max((m for tab in kernels.values() for _, m in tab), default=0)
    tz = Series.term(order, nvars, 1, _marker_expo(nvars, None), 1)

    def powers(s: Series, top: int) -> List[Series]:
        out = [Series.const(order, nvars, 1)]
        for _ in range(top):
            out.append(out[-1] * s)
        return out

    def kernel_sum(kind: str, lp: List[Series], rp: List[Series]) -> Series:
        acc = Series.zero(order, nvars)
        for (l, m), w in kernels[kind].items():
            prod = lp[l] * rp[m] if l and m else (lp[l] if l else rp[m])
            acc = acc + Series(order, nvars, [c * w for c in prod.coeffs])
        return acc

    def phi(state):
        L, Q, R = state
        lp = powers(L, lmax)
        rp = powers(R, mmax)
        new_l = kernel_sum("L", lp, rp).shift_z(1)
        new_q = kernel_sum("Q", lp, rp).shift_z(1)
        new_r = tz + Q * R
        return new_l, new_q, new_r

    L, Q, R = solve_fixed_point_system(phi, order, nvars, 3)
    T = Series.const(order, nvars, 1) \
        + kernel_sum("T", powers(L, lmax), powers(R, mmax))
    return MobileSolution(R=R, tracked=tracked, L=L, Q=Q, T=T)


def general_map_series(dset: DegreeSet, order: int,
                       tracked: Sequence[int] = ()) -> Series:
    """Map series for an arbitrary degree set, via the general system."""
    sol = solve_general_LQRT(dset, order + 1, tracked)
    nvars = sol.R.nvars
    dm = sol.R.div_z().truncate(order) + sol.T.truncate(order) \
        - Series.term(order, nvars, 0, _marker_expo(nvars, None), 1)
    # kill the z^0 bookkeeping term (= 1): no edgeless maps
    dm.coeffs[0] = MultiPoly.zero(nvars)
    return integrate_in_t(dm)


def map_series(dset: DegreeSet, order: int,
               tracked: Sequence[int] = ()) -> Series:
    """Dispatch to the bipartite solver when every valency is even."""
    if dset.all_even():
        return bipartite_map_series(dset, order, tracked)
    return general_map_series(dset, order, tracked)


# --- counts and distributions -------------------------------------------

_count_cache: Dict[tuple, List[int]] = {}
_dist_cache: Dict[tuple, "DistributionTable"] = {}

# below this edge count the exact engine is fast enough and serves as
# one more cross-check in everyday use
_EXACT_DIST_LIMIT = 8


def count_table(dset: DegreeSet, upto: int) -> List[int]:
    """Exact rooted-map counts [M_0, M_1, ..., M_upto] (M_0 = 0)."""
    if upto < 0:
        raise ValidationError("count table bound must be >= 0")
    key = dset.key()
    have = _count_cache.get(key)
    if have is None or len(have) <= upto:
        if dset.tail == "all":
            # scalar engine plus self-duality unpointing; far faster
            # than dragging the vertex refinement to order 300
            have = packed_counts_all(max(upto, 1))
        else:
            per_order = packed_map_series(dset, max(upto, 1))
            have = [sum(d.values()) for d in per_order]
        _count_cache[key] = have
    return have[:upto + 1]


def count_maps(dset: DegreeSet, n: int) -> int:
    """Number of rooted planar maps with n edges, all face valencies in
    dset.  Zero whenever the period does not divide n."""
    if n < 1:
        raise ValidationError("edge count must be >= 1")
    return count_table(dset, n)[n]


class DistributionTable:
    """Exact joint law of tracked face-valency counts at fixed n.

    rows maps a tuple (one exponent per tracked valency, in order) to
    the number of rooted maps realizing it; the total mass is the full
    map count.
    """

    __slots__ = ("degrees", "n", "tracked", "rows")

    def __init__(self, degrees: DegreeSet, n: int,
                 tracked: Tuple[int, ...], rows: Dict[Tuple[int, ...], int]):
        self.degrees = degrees
        self.n = n
        self.tracked = tuple(tracked)
        clean = {}
        for key, w in rows.items():
            if len(key) != len(self.tracked):
                raise ValidationError("row key does not match tracked tuple")
            if w < 0:
                raise ValidationError("negative weight in distribution")
            if w:
                clean[tuple(key)] = int(w)
        self.rows = clean

    def total(self) -> int:
        return sum(self.rows.values())

    def __len__(self) -> int:
        return len(self.rows)

    def items(self):
        return self.rows.items()

    def marginal(self, valency: int) -> "DistributionTable":
        """Forget one tracked valency (sum its marker out)."""
        if valency not in self.tracked:
            raise ValidationError(f"valency {valency} is not tracked here")
        j = self.tracked.index(valency)
        rows: Dict[Tuple[int, ...], int] = {}
        for key, w in self.rows.items():
            nk = key[:j] + key[j + 1:]
            rows[nk] = rows.get(nk, 0) + w
        return DistributionTable(self.degrees, self.n,
                                 self.tracked[:j] + self.tracked[j + 1:], rows)

    def counts_of(self, valency: int) -> Dict[int, int]:
        """One-dimensional law of a single tracked valency."""
        if valency not in self.tracked:
            raise ValidationError(f"valency {valency} is not tracked here")
        j = self.tracked.index(valency)
        out: Dict[int, int] = {}
        for key, w in self.rows.items():
            out[key[j]] = out.get(key[j], 0) + w
        return out

    def mean(self, valency: int) -> Fraction:
        """E[X^(valency)] under the uniform law on the n-edge maps."""
        tot = self.total()
        if not tot:
            raise ValidationError("distribution has no mass")
        j = self.tracked.index(valency)
        return Fraction(sum(k[j] * w for k, w in self.rows.items()), tot)

    def __repr__(self) -> str:
        return (f"DistributionTable(n={self.n}, tracked={self.tracked}, "
                f"{len(self.rows)} rows, total={self.total()})")


def joint_distribution(dset: DegreeSet, n: int,
                       tracked: Sequence[int]) -> DistributionTable:
    """Joint distribution of the tracked face-valency counts over all
    rooted n-edge maps with face valencies in dset."""
    tracked = _check_tracked(dset, tracked)
    if n < 1:
        raise ValidationError("edge count must be >= 1")
    key = (dset.key(), n, tracked)
    hit = _dist_cache.get(key)
    if hit is not None:
        return hit
    rows: Dict[Tuple[int, ...], int] = {}
    if n <= _EXACT_DIST_LIMIT:
        poly = extract(map_series(dset, n, tracked), n).specialize(0, 1)
        for expo, w in poly.terms.items():
            k = expo[1:]
            rows[k] = rows.get(k, 0) + w
    else:
        per_order = packed_map_series(dset, n, marked=tracked)
        for expo, w in per_order[n].items():
            k = expo[1:]
            rows[k] = rows.get(k, 0) + w
    table = DistributionTable(dset, n, tracked, rows)
    _dist_cache[key] = table
    return table
