"""Rooted bipartite maps on the torus, counted through their mobile
skeletons.

A genus-1 mobile stripped of its legs, its dangling subtrees and its
degree-2 chains leaves a colored one-faced map with every vertex of
degree 3 or more: its scheme.  There are finitely many of these per
genus, so counting splits into one finite enumeration and, per scheme,
a sum over integer labellings of series built from three ingredients:

  * the planar root series R of the bipartite mobile equation,
  * a cell series P for one step along a contracted degree-2 chain,
    Laurent in a marker s that records how much the label shifts,
  * per-corner binomial sums for the legs and subtrees squeezed in
    around the scheme's black vertices.

Chains between two scheme vertices become geometric series in P, with
an end correction that depends on the colors of the two ends; an edge
carrying label shift i contributes the [s^i] part.  Everything runs on
the exact engine from series.py with t marking map vertices, so the
final series integrates in t exactly as in the planar pipeline.

Labels are enumerated relative to a fixed reference site (weights only
ever see label differences), and every candidate is pruned by the
z-valuation it would force, which keeps the sum finite per order.
Cost still climbs quickly with the truncation order; this module is
built for exactness at small n, not for asymptotics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .degrees import DegreeSet
from .errors import NotBipartite, ValidationError
from .mobiles import solve_bipartite_R
from .oracle import RotationMap, one_faced_maps
from .series import MultiPoly, Series, extract, integrate_in_t

__all__ = [
    "SLaurent",
    "GScheme",
    "LabelledScheme",
    "CellSeries",
    "DoublyRootedSeries",
    "enumerate_schemes",
    "cell_series",
    "doubly_rooted_series",
    "scheme_series",
    "genus1_map_series",
    "genus1_count",
]

WHITE, BLACK = 0, 1

# extra z-orders carried internally so the div-by-z steps stay exact
_MARGIN = 4


class SLaurent:
    """Laurent polynomial in the shift marker s with Series coefficients.

    Only finitely many s-exponents survive at a given truncation order:
    each unit of shift is paid by at least one leg or mobile somewhere
    along the chain of cells, and those carry z.  Construction drops
    parts that are identically zero mod z^(order+1), which is what keeps
    products and geometric sums finite.
    """

    __slots__ = ("order", "nvars", "parts")

    def __init__(self, order: int, nvars: int,
                 parts: Optional[Dict[int, Series]] = None):
        self.order = order
        self.nvars = nvars
        self.parts: Dict[int, Series] = {}
        for m, s in (parts or {}).items():
            if s.valuation() <= order:
                self.parts[m] = s

    def coeff(self, m: int) -> Series:
        s = self.parts.get(m)
        return s if s is not None else Series.zero(self.order, self.nvars)

    def window(self) -> Tuple[int, int]:
        """Smallest and largest s-exponent present (0, 0 when empty)."""
        if not self.parts:
            return (0, 0)
        return (min(self.parts), max(self.parts))

    def __add__(self, other: "SLaurent") -> "SLaurent":
        if self.order != other.order or self.nvars != other.nvars:
            raise ValidationError("mixing incompatible Laurent series")
        out = dict(self.parts)
        for m, s in other.parts.items():
            out[m] = out[m] + s if m in out else s
        return SLaurent(self.order, self.nvars, out)

    def mul(self, other: "SLaurent") -> "SLaurent":
        if self.order != other.order or self.nvars != other.nvars:
            raise ValidationError("mixing incompatible Laurent series")
        out: Dict[int, Series] = {}
        for ma, sa in self.parts.items():
            for mb, sb in other.parts.items():
                prod = sa * sb
                m = ma + mb
                out[m] = out[m] + prod if m in out else prod
        return SLaurent(self.order, self.nvars, out)

    def mul_series(self, s: Series) -> "SLaurent":
        return SLaurent(self.order, self.nvars,
                        {m: p * s for m, p in self.parts.items()})

    def shift_s(self, k: int) -> "SLaurent":
        return SLaurent(self.order, self.nvars,
                        {m + k: p for m, p in self.parts.items()})

    def geometric(self) -> "SLaurent":
        """1 + A + A^2 + ...; every part of A must vanish at z = 0."""
        one = SLaurent(self.order, self.nvars,
                       {0: Series.const(self.order, self.nvars, 1)})
        if not self.parts:
            return one
        if min(p.valuation() for p in self.parts.values()) < 1:
            raise ValidationError("cell series must vanish at z = 0")
        acc = one
        term = self
        while term.parts:
            acc = acc + term
            term = term.mul(self)
        return acc

    def __repr__(self) -> str:
        lo, hi = self.window()
        return (f"SLaurent(order={self.order}, "
                f"s-window=[{lo}, {hi}], {len(self.parts)} parts)")


# --- schemes --------------------------------------------------------------

def _cycles_of(sigma: Sequence[int]) -> List[List[int]]:
    seen = [False] * len(sigma)
    out = []
    for start in range(len(sigma)):
        if not seen[start]:
            c = []
            d = start
            while not seen[d]:
                seen[d] = True
                c.append(d)
                d = sigma[d]
            out.append(c)
    return out


class GScheme:
    """A one-faced rotation system with a black/white coloring.

    colors holds one entry per vertex, indexed like the sigma-cycles of
    the underlying map (0 = white, 1 = black).  Corners are identified
    with darts: the corner written after dart d is the one between d and
    the next dart of its rotation cycle.
    """

    __slots__ = ("rm", "colors", "cycles", "vid", "genus")

    def __init__(self, rm: RotationMap, colors: Sequence[int]):
        self.rm = rm
        self.cycles = _cycles_of(rm.sigma)
        if len(colors) != len(self.cycles):
            raise ValidationError("one color per vertex is required")
        self.colors = tuple(WHITE if not c else BLACK for c in colors)
        vid = [-1] * (2 * rm.n)
        for i, cyc in enumerate(self.cycles):
            for d in cyc:
                vid[d] = i
        self.vid = tuple(vid)
        self.genus = rm.genus()
        if len(rm.face_valencies()) != 1:
            raise ValidationError("schemes are one-faced by definition")
        excess = sum(len(c) - 2 for c in self.cycles)
        if excess != 4 * self.genus - 2:
            raise ValidationError("vertex degrees do not fit the genus")

    @property
    def edge_count(self) -> int:
        return self.rm.n

    def degree(self, v: int) -> int:
        return len(self.cycles[v])

    def white_vertices(self) -> List[int]:
        return [v for v, c in enumerate(self.colors) if c == WHITE]

    def black_vertices(self) -> List[int]:
        return [v for v, c in enumerate(self.colors) if c == BLACK]

    def white_corner_count(self) -> int:
        return sum(self.degree(v) for v in self.white_vertices())

    def automorphism_order(self) -> int:
        """Color-preserving automorphisms of the scheme.

        One-faced maps admit no automorphism fixing a dart, so the
        group acts freely on darts and its order is the number of root
        darts reproducing the canonical encoding.
        """
        dart_color = [self.colors[self.vid[d]] for d in range(2 * self.rm.n)]
        counts: Dict[tuple, int] = {}
        for r in range(2 * self.rm.n):
            enc = _encode_from(self.rm.sigma, dart_color, r)
            counts[enc] = counts.get(enc, 0) + 1
        return counts[min(counts)]

    def label_sites(self) -> Tuple[Dict[int, int], Dict[int, int]]:
        """(white vertex -> site, black dart -> site of its corner).

        Sites index white vertices first, then corners of black
        vertices in rotation order; the corner paired with dart d sits
        between d and the next dart around the vertex.
        """
        white_site: Dict[int, int] = {}
        corner_site: Dict[int, int] = {}
        k = 0
        for v in self.white_vertices():
            white_site[v] = k
            k += 1
        for v in self.black_vertices():
            for d in self.cycles[v]:
                corner_site[d] = k
                k += 1
        return white_site, corner_site

    def site_count(self) -> int:
        return (len(self.white_vertices())
                + sum(self.degree(v) for v in self.black_vertices()))

    def end_site(self, d: int) -> int:
        """Label site governing dart d when it ends a scheme edge: the
        white vertex itself, or the next clockwise corner at a black."""
        white_site, corner_site = self.label_sites()
        v = self.vid[d]
        if self.colors[v] == WHITE:
            return white_site[v]
        return corner_site[d]

    def __eq__(self, other) -> bool:
        if not isinstance(other, GScheme):
            return NotImplemented
        return self.rm.sigma == other.rm.sigma and self.colors == other.colors

    def __hash__(self):
        return hash((self.rm.sigma, self.colors))

    def __repr__(self) -> str:
        cols = "".join("bw"[c == WHITE] for c in self.colors)
        return (f"GScheme(edges={self.rm.n}, "
                f"degrees={self.rm.vertex_degrees()}, colors={cols})")


@dataclass(frozen=True)
class LabelledScheme:
    """A scheme together with one label per site, in translation
    normal form (smallest label zero, all labels non-negative).

    Sites follow GScheme.label_sites: white vertices first, then black
    corners per vertex in rotation order.
    """
    scheme: GScheme
    labels: Tuple[int, ...]

    def __post_init__(self):
        if len(self.labels) != self.scheme.site_count():
            raise ValidationError("one label per site is required")
        if not self.labels or min(self.labels) != 0:
            raise ValidationError("labels must be >= 0 with smallest 0")

    def end_label(self, d: int) -> int:
        return self.labels[self.scheme.end_site(d)]

    def increment(self, e: int) -> int:
        """Label shift along edge e, oriented from dart 2e to 2e+1."""
        tail = 2 * e
        step = 1 if self.scheme.colors[self.scheme.vid[tail]] == WHITE else -1
        return self.end_label(2 * e + 1) - self.end_label(tail) + step

    def corner_deltas(self, v: int) -> Tuple[int, ...]:
        """Clockwise label differences around black vertex v."""
        if self.scheme.colors[v] != BLACK:
            raise ValidationError("corner labels live on black vertices")
        _, corner_site = self.scheme.label_sites()
        cyc = self.scheme.cycles[v]
        ring = [self.labels[corner_site[d]] for d in cyc]
        m = len(ring)
        return tuple(ring[(p + 1) % m] - ring[p] for p in range(m))


def _encode_from(sigma: Sequence[int], dart_color: Sequence[int], r: int):
    seen = {r: 0}
    order = [r]
    i = 0
    while i < len(order):
        d = order[i]
        i += 1
        for e in (sigma[d], d ^ 1):
            if e not in seen:
                seen[e] = len(order)
                order.append(e)
    return (tuple(seen[sigma[d]] for d in order),
            tuple(dart_color[d] for d in order))


def _canon_colored(sigma: Sequence[int], dart_color: Sequence[int]):
    """Canonical encoding of a colored rotation system, minimized over
    all root darts; equal encodings mean isomorphic colored maps."""
    return min(_encode_from(sigma, dart_color, r) for r in range(len(sigma)))


def enumerate_schemes(genus: int) -> List[GScheme]:
    """All colored schemes of the given genus, up to isomorphism.

    The underlying maps come from the one-faced oracle enumeration;
    colorings are deduplicated with a canonical form, so a vertex swap
    that preserves the rotation system identifies mirror colorings.
    """
    if genus < 0:
        raise ValidationError("genus must be >= 0")
    if genus == 0:
        return []
    out: List[GScheme] = []
    for rm in one_faced_maps(genus):
        cycles = _cycles_of(rm.sigma)
        nv = len(cycles)
        vid = [-1] * (2 * rm.n)
        for i, cyc in enumerate(cycles):
            for d in cyc:
                vid[d] = i
        seen = set()
        for mask in range(1 << nv):
            colors = tuple((mask >> i) & 1 for i in range(nv))
            canon = _canon_colored(rm.sigma, [colors[vid[d]]
                                             for d in range(2 * rm.n)])
            if canon in seen:
                continue
            seen.add(canon)
            out.append(GScheme(rm, colors))
    return out


# --- cell and chain series ------------------------------------------------

@dataclass(frozen=True)
class CellSeries:
    """One step of a contracted chain: a black vertex and the white
    vertex after it, with all decorations, s marking the label shift."""
    degrees: DegreeSet
    order: int
    P: SLaurent
    # the bare black step that ends a white-to-white chain (no trailing
    # white vertex, so one fewer downward shift than a full cell)
    end_step: SLaurent


@dataclass(frozen=True)
class DoublyRootedSeries:
    """Chains replacing a scheme edge, by the colors of its two ends."""
    degrees: DegreeSet
    order: int
    mixed: SLaurent          # one end white, one end black
    white_white: SLaurent
    black_black: SLaurent

    def for_colors(self, cu: int, cv: int) -> SLaurent:
        if cu == cv == WHITE:
            return self.white_white
        if cu == cv == BLACK:
            return self.black_black
        return self.mixed


class _Context:
    """Everything order-dependent a scheme series needs, built once."""

    def __init__(self, dset: DegreeSet, order: int):
        if not dset.all_even():
            raise NotBipartite(
                f"degree set {dset.spec_string()!r} allows an odd valency")
        self.dset = dset
        self.order = order
        self.R = solve_bipartite_R(dset, order).R
        # R/(tz): the decoration of one white corner; exact to order-1,
        # which the _MARGIN at the call sites absorbs
        self.W = self.R.div_z().div_t()
        self._rpow: List[Series] = [Series.const(order, 1, 1)]
        self._wpow: Dict[int, Series] = {0: Series.const(order, 1, 1)}
        self._corner_cache: Dict[tuple, Series] = {}
        self._build_cells()
        self._coeff_val: Dict[tuple, Dict[int, int]] = {}

    def rpow(self, k: int) -> Series:
        while len(self._rpow) <= k:
            self._rpow.append(self._rpow[-1] * self.R)
        return self._rpow[k]

    def wpow(self, k: int) -> Series:
        if k not in self._wpow:
            self._wpow[k] = self.wpow(k - 1) * self.W
        return self._wpow[k]

    def _build_cells(self) -> None:
        No = self.order
        # end_step collects binom(j+k, j) * binom(k+2l-j+2, l) * s^(j-k)
        # * R^(k+l) over admissible black degrees 2(k+l+2); the full cell
        # multiplies in the white vertex and shifts s down once
        parts: Dict[int, Series] = {}
        for tot in range(0, No):
            if 2 * (tot + 2) not in self.dset:
                continue
            rp = self.rpow(tot)
            for k in range(tot + 1):
                l = tot - k
                for j in range(0, tot + 3):
                    c = comb(j + k, j) * comb(k + 2 * l - j + 2, l)
                    m = j - k
                    add = rp.scale(c)
                    parts[m] = parts[m] + add if m in parts else add
        end_step = SLaurent(No, 1, parts)
        # the cell's white vertex with its two corner decorations is
        # z^2 t (R/tz)^2 = R^2/t; one z is the joining edge, the other
        # the internal one, so a cell costs exactly two mobile edges
        pref = (self.R * self.R).div_t()
        self.P = end_step.mul_series(pref).shift_s(-1)
        self.end_step = end_step
        chain = self.P.geometric()                        # 1/(1 - P)
        self.S_mixed = chain
        self.S_ww = chain.mul(end_step).mul_series(
            Series.term(No, 1, 1))                        # z * end / (1-P)
        # bare interior white closing a black-to-black chain: z^2 t W^2
        # with one z already counted by the scheme edge
        tail = (self.R * self.R).div_z().div_t()
        self.S_bb = chain.mul_series(tail).shift_s(-1)

    def chain_series(self, cu: int, cv: int) -> SLaurent:
        if cu == cv == WHITE:
            return self.S_ww
        if cu == cv == BLACK:
            return self.S_bb
        return self.S_mixed

    def coeff_valuations(self, cu: int, cv: int) -> Dict[int, int]:
        key = (cu, cv)
        have = self._coeff_val.get(key)
        if have is None:
            sl = self.chain_series(cu, cv)
            have = {m: p.valuation() for m, p in sl.parts.items()}
            self._coeff_val[key] = have
        return have

    def corner_sum(self, degree: int, deltas: Tuple[int, ...]) -> Series:
        """Decorated black scheme vertex of the given degree.

        Sums over the subtree counts i_k per corner: interleaving the
        i_k subtrees with the i_k + delta_k + 1 legs gives the binomial,
        each subtree carries R, and the final valency 2(degree + sum i)
        must belong to the degree set.
        """
        key = (degree, deltas)
        have = self._corner_cache.get(key)
        if have is not None:
            return have
        cap = self.order
        conv = [1]
        for dlt in deltas:
            nxt = [0] * (cap + 1)
            for m0, c0 in enumerate(conv):
                if not c0:
                    continue
                for i in range(cap + 1 - m0):
                    if i + dlt + 1 < 0:
                        continue
                    w = comb(2 * i + dlt + 1, i)
                    if w:
                        nxt[m0 + i] += c0 * w
            conv = nxt
        acc = Series.zero(self.order, 1)
        for m, c in enumerate(conv):
            if c and 2 * (degree + m) in self.dset:
                acc = acc + self.rpow(m).scale(c)
        self._corner_cache[key] = acc
        return acc


_context_cache: Dict[tuple, _Context] = {}


def _context(dset: DegreeSet, order: int) -> _Context:
    key = (dset.key(), order)
    ctx = _context_cache.get(key)
    if ctx is None:
        ctx = _Context(dset, order)
        _context_cache[key] = ctx
    return ctx


def cell_series(dset: DegreeSet, order: int) -> CellSeries:
    ctx = _context(dset, order)
    return CellSeries(degrees=dset, order=order, P=ctx.P,
                      end_step=ctx.end_step)


def doubly_rooted_series(dset: DegreeSet, order: int) -> DoublyRootedSeries:
    ctx = _context(dset, order)
    return DoublyRootedSeries(degrees=dset, order=order,
                              mixed=ctx.S_mixed, white_white=ctx.S_ww,
                              black_black=ctx.S_bb)


# --- labelled schemes -----------------------------------------------------

class _LabelPlan:
    """Static data for summing one scheme over its labellings.

    Label sites are the white vertices plus every corner of a black
    vertex.  Edges tie the site at one end to the site at the other (at
    a black end, the label is read off the next corner clockwise), and
    the sum runs over site assignments relative to site 0.
    """

    def __init__(self, scheme: GScheme):
        self.scheme = scheme
        white_site, corner_site = scheme.label_sites()
        self.sites = scheme.site_count()

        # end_site[d]: the label site governing dart d as an edge end
        end_site = {}
        self.black_corner_rings: List[Tuple[int, Tuple[int, ...]]] = []
        for v, cyc in enumerate(scheme.cycles):
            if scheme.colors[v] == WHITE:
                for d in cyc:
                    end_site[d] = white_site[v]
            else:
                ring = tuple(corner_site[d] for d in cyc)
                for p, d in enumerate(cyc):
                    end_site[d] = ring[p]
                self.black_corner_rings.append((len(cyc), ring))

        self.edges = []
        for e in range(scheme.rm.n):
            a, b = 2 * e, 2 * e + 1
            cu = scheme.colors[scheme.vid[a]]
            cv = scheme.colors[scheme.vid[b]]
            base = 1 if cu == WHITE else -1
            self.edges.append((end_site[a], end_site[b], cu, cv, base))

        # visit order: site 0 first, then breadth-first along edges;
        # sites in a second component (possible around a lone black
        # vertex) come last and range freely within the pruning slack
        adj: Dict[int, List[tuple]] = {i: [] for i in range(self.sites)}
        for (sa, sb, cu, cv, base) in self.edges:
            adj[sa].append((sb, cu, cv, base, False))
            adj[sb].append((sa, cu, cv, base, True))
        order = [0]
        placed = {0}
        via: Dict[int, tuple] = {}
        i = 0
        while len(order) < self.sites:
            if i < len(order):
                cur = order[i]
                i += 1
                for (nb, cu, cv, base, flip) in adj[cur]:
                    if nb not in placed:
                        placed.add(nb)
                        via[nb] = (cur, cu, cv, base, flip)
                        order.append(nb)
            else:
                free = min(s for s in range(self.sites) if s not in placed)
                placed.add(free)
                order.append(free)
        self.order = order
        self.via = via


def _labelling_sum(ctx: _Context, scheme: GScheme) -> Series:
    plan = _LabelPlan(scheme)
    No = ctx.order
    acc = Series.zero(No, 1)
    labels = [0] * plan.sites

    # factor completion: after assigning the k-th site in visit order,
    # which edges and which black rings have all their sites known?
    rank = {s: k for k, s in enumerate(plan.order)}
    edge_done: List[List[tuple]] = [[] for _ in range(plan.sites)]
    ring_done: List[List[tuple]] = [[] for _ in range(plan.sites)]
    for ed in plan.edges:
        edge_done[max(rank[ed[0]], rank[ed[1]])].append(ed)
    for (deg, ring) in plan.black_corner_rings:
        ring_done[max(rank[s] for s in ring)].append((deg, ring))

    slack = No + 2

    def descend(k: int, partial: Series, val: int) -> None:
        nonlocal acc
        if k == plan.sites:
            acc = acc + partial
            return
        s = plan.order[k]
        if k == 0:
            candidates = [0]
        elif s in plan.via:
            (anchor, cu, cv, base, flip) = plan.via[s]
            vals = ctx.coeff_valuations(cu, cv)
            candidates = []
            for m in vals:
                # incr = l[end+] - l[end-] + base
                lab = labels[anchor] + (base - m if flip else m - base)
                candidates.append(lab)
        else:
            lo = min(labels[plan.order[j]] for j in range(k))
            hi = max(labels[plan.order[j]] for j in range(k))
            candidates = list(range(lo - slack, hi + slack + 1))
        for lab in candidates:
            labels[s] = lab
            nxt = partial
            v2 = val
            dead = False
            for (sa, sb, cu, cv, base) in edge_done[k]:
                m = labels[sb] - labels[sa] + base
                vmap = ctx.coeff_valuations(cu, cv)
                if m not in vmap or v2 + vmap[m] > No:
                    dead = True
                    break
                v2 += vmap[m]
                nxt = nxt * ctx.chain_series(cu, cv).coeff(m)
            if dead:
                continue
            for (deg, ring) in ring_done[k]:
                deltas = tuple(labels[ring[(p + 1) % deg]] - labels[ring[p]]
                               for p in range(deg))
                cs = ctx.corner_sum(deg, deltas)
                cv_ = cs.valuation()
                if v2 + cv_ > No:
                    dead = True
                    break
                v2 += cv_
                nxt = nxt * cs
            if dead:
                continue
            descend(k + 1, nxt, v2)

    base_val = scheme.rm.n
    descend(0, Series.const(No, 1, 1), base_val)
    return acc


def scheme_series(scheme: GScheme, dset: DegreeSet, order: int) -> Series:
    """Series of rooted genus-g mobiles with the given scheme, graded
    by z per mobile edge and t per non-root white vertex.

    The labelling sum is dressed with z per scheme edge, t per scheme
    white vertex and a corner decoration per white corner.  Rooting at
    an oriented mobile edge is the z-degree rescaling times two, and
    dividing by the scheme's automorphisms removes the overcount from
    symmetric decorations.
    """
    big = order + _MARGIN
    ctx = _context(dset, big)
    rooted = _scheme_series_at(ctx, scheme)
    return rooted.truncate(order)


def genus1_map_series(dset: DegreeSet, order: int) -> Series:
    """Generating series of rooted bipartite genus-1 maps with all face
    valencies in dset: [t^v z^n] counts maps with v vertices, n edges.

    Rooted mobiles correspond to rooted vertex-pointed maps, so the sum
    of the scheme series is the t-derivative of the map series and one
    exact integration finishes the job.
    """
    if not dset.all_even():
        raise NotBipartite(
            f"degree set {dset.spec_string()!r} allows an odd valency")
    if order < 0:
        raise ValidationError("truncation order must be >= 0")
    big = order + _MARGIN
    ctx = _context(dset, big)
    dm = Series.zero(big, 1)
    for scheme in enumerate_schemes(1):
        dm = dm + _scheme_series_at(ctx, scheme)
    return integrate_in_t(dm).truncate(order)


def _scheme_series_at(ctx: _Context, scheme: GScheme) -> Series:
    body = _labelling_sum(ctx, scheme)
    pref = Series.term(ctx.order, 1, scheme.edge_count,
                       (len(scheme.white_vertices()),))
    raw = (pref * ctx.wpow(scheme.white_corner_count())) * body
    return raw.z_derivative_scaled().scale(
        Fraction(2, scheme.automorphism_order()))


_count_cache: Dict[tuple, Series] = {}


def genus1_count(dset: DegreeSet, n: int) -> int:
    """Number of rooted bipartite genus-1 maps with n edges and all
    face valencies in dset."""
    if n < 1:
        raise ValidationError("edge count must be >= 1")
    key = dset.key()
    have = _count_cache.get(key)
    if have is None or have.order < n:
        have = genus1_map_series(dset, n)
        _count_cache[key] = have
    poly = extract(have, n).specialize(0, 1)
    val = poly.value()
    f = Fraction(val)
    if f.denominator != 1:
        raise ArithmeticError(f"genus-1 count came out non-integral: {f}")
    return f.numerator
