"""Brute-force ground truth for rooted maps of any genus.

A map with n edges is a pair of permutations on the darts 0..2n-1: the
vertex rotation sigma and the edge involution, which we fix once and
for all as alpha0: d <-> d XOR 1.  Faces are the cycles of
d -> sigma(alpha0(d)), vertices the cycles of sigma, and the genus
comes out of the Euler relation.  Scanning all sigma in S_{2n} and
keeping a tally by (genus, face multiset, vertex multiset, bipartite)
answers every counting question we throw at it; the rooted count of
any isomorphism-closed family is

    (number of admissible sigma) * (2n-1)!! / (2n-1)!

because conjugation moves the (2n-1)!! possible involutions onto
alpha0 while each rooted map corresponds to (2n-1)! labelled pairs.
The quotient is asserted to be integral on every call.

Full scans stop at n = 5 (10! permutations, about a minute, cached for
the whole process).  n = 6 works when the face valencies are pinned to
a degree set, by generating only the face permutations of admissible
cycle type and recovering sigma from them.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .degrees import DegreeSet
from .errors import OracleBound, ValidationError
from .mobiles import DistributionTable

__all__ = [
    "RotationMap",
    "rooted_map_count",
    "distribution_oracle",
    "oracle_refined_rows",
    "one_faced_maps",
]

FULL_SCAN_LIMIT = 5
# cap on generated face permutations for the pruned n = 6 route
DEFAULT_PERM_BUDGET = 6_000_000


class RotationMap:
    """A rotation system over darts 0..2n-1 with the fixed involution."""

    __slots__ = ("n", "sigma")

    def __init__(self, n: int, sigma: Sequence[int]):
        if len(sigma) != 2 * n or sorted(sigma) != list(range(2 * n)):
            raise ValidationError("sigma is not a permutation of the darts")
        self.n = n
        self.sigma = tuple(sigma)

    def _cycles(self, perm: Sequence[int]) -> List[List[int]]:
        seen = [False] * (2 * self.n)
        out = []
        for start in range(2 * self.n):
            if not seen[start]:
                c = []
                d = start
                while not seen[d]:
                    seen[d] = True
                    c.append(d)
                    d = perm[d]
                out.append(c)
        return out

    def vertex_degrees(self) -> List[int]:
        return sorted(len(c) for c in self._cycles(self.sigma))

    def face_valencies(self) -> List[int]:
        s = self.sigma
        return sorted(len(c) for c in self._cycles([s[d ^ 1] for d in range(2 * self.n)]))

    def is_connected(self) -> bool:
        s = self.sigma
        seen = {0}
        stack = [0]
        while stack:
            d = stack.pop()
            for e in (s[d], d ^ 1):
                if e not in seen:
                    seen.add(e)
                    stack.append(e)
        return len(seen) == 2 * self.n

    def is_bipartite(self) -> bool:
        """Whether the underlying graph admits a proper 2-coloring."""
        if not self.is_connected():
            raise ValidationError("bipartiteness is only tested on maps")
        _, bip = _vertex_info(self.sigma, 2 * self.n)
        return bip

    def genus(self) -> int:
        v = len(self._cycles(self.sigma))
        f = len(self.face_valencies())
        euler = v - self.n + f
        g2, rem = divmod(2 - euler, 2)
        if rem or g2 < 0 or not self.is_connected():
            raise ValidationError("not a connected orientable map")
        return g2

    def __repr__(self) -> str:
        return f"RotationMap(n={self.n}, sigma={self.sigma})"


# --- scanning ------------------------------------------------------------

# n -> {(genus, faces tuple, vertices tuple, bipartite): number of sigma}
_full_tally: Dict[int, Dict[tuple, int]] = {}
# (n, faces tuple) -> {(genus, vertices tuple, bipartite): number of sigma}
_pruned_tally: Dict[tuple, Dict[tuple, int]] = {}


def _vertex_info(p: Sequence[int], nd: int) -> Tuple[Tuple[int, ...], bool]:
    """Sorted vertex degrees of sigma = p, plus graph bipartiteness.

    Assumes the map is connected, so color propagation along the darts
    reaches every vertex in a bounded number of sweeps.
    """
    vid = [-1] * nd
    lens = []
    for s in range(nd):
        if vid[s] < 0:
            v = len(lens)
            ln = 0
            d = s
            while vid[d] < 0:
                vid[d] = v
                ln += 1
                d = p[d]
            lens.append(ln)
    nv = len(lens)
    color = [-1] * nv
    color[vid[0]] = 0
    assigned = 1
    while assigned < nv:
        for d in range(nd):
            a, b = vid[d], vid[d ^ 1]
            if color[a] >= 0 and color[b] < 0:
                color[b] = color[a] ^ 1
                assigned += 1
            elif color[b] >= 0 and color[a] < 0:
                color[a] = color[b] ^ 1
                assigned += 1
    bip = all(color[vid[d]] != color[vid[d ^ 1]] for d in range(nd))
    lens.sort()
    return tuple(lens), bip


def _cycle_lengths(perm: Sequence[int], nd: int) -> Tuple[int, ...]:
    seen = [False] * nd
    out = []
    for start in range(nd):
        if not seen[start]:
            ln = 0
            d = start
            while not seen[d]:
                seen[d] = True
                ln += 1
                d = perm[d]
            out.append(ln)
    out.sort()
    return tuple(out)


def _scan_full(n: int) -> Dict[tuple, int]:
    tally = _full_tally.get(n)
    if tally is not None:
        return tally
    nd = 2 * n
    tally = {}
    for p in permutations(range(nd)):
        # connectivity under the group generated by sigma and alpha0
        seen = 1
        stack = [0]
        count = 1
        while stack:
            d = stack.pop()
            for e in (p[d], d ^ 1):
                b = 1 << e
                if not seen & b:
                    seen |= b
                    count += 1
                    stack.append(e)
        if count != nd:
            continue
        verts, bip = _vertex_info(p, nd)
        faces = _cycle_lengths([p[d ^ 1] for d in range(nd)], nd)
        genus = (2 - (len(verts) - n + len(faces))) // 2
        key = (genus, faces, verts, bip)
        tally[key] = tally.get(key, 0) + 1
    _full_tally[n] = tally
    return tally


def _face_type_multisets(n: int, allowed: List[int]):
    """Multisets over `allowed` with element sum 2n, descending order."""
    out: List[Tuple[int, ...]] = []
    allowed = sorted(set(allowed), reverse=True)

    def rec(idx: int, remaining: int, acc: List[int]):
        if remaining == 0:
            out.append(tuple(acc))
            return
        if idx == len(allowed):
            return
        v = allowed[idx]
        top = remaining // v
        for k in range(top, -1, -1):
            rec(idx + 1, remaining - k * v, acc + [v] * k)

    rec(0, 2 * n, [])
    return out


def _perms_of_cycle_type(parts: Tuple[int, ...], nd: int):
    """Yield all permutations of 0..nd-1 whose cycle type is `parts`.

    Built recursively: close a cycle of each still-needed length through
    the smallest unplaced element, so nothing is generated twice.
    """
    from collections import Counter

    need = Counter(parts)
    perm = [-1] * nd
    used = [False] * nd

    def rec(remaining: int):
        if remaining == 0:
            yield tuple(perm)
            return
        start = used.index(False)
        used[start] = True
        for ln in sorted(need):
            if not need[ln]:
                continue
            need[ln] -= 1
            # choose the rest of the cycle from unused elements
            pool = [x for x in range(start + 1, nd) if not used[x]]
            for rest in permutations(pool, ln - 1):
                prev = start
                for x in rest:
                    perm[prev] = x
                    used[x] = True
                    prev = x
                perm[prev] = start
                yield from rec(remaining - ln)
                for x in rest:
                    used[x] = False
            need[ln] += 1
        used[start] = False

    yield from rec(nd)


def _count_perms_of_type(parts: Tuple[int, ...], nd: int) -> int:
    from collections import Counter
    c = Counter(parts)
    denom = 1
    for ln, mult in c.items():
        denom *= ln ** mult * factorial(mult)
    return factorial(nd) // denom


def _scan_pruned(n: int, faces: Tuple[int, ...]) -> Dict[tuple, int]:
    """Tally over sigma whose face multiset is exactly `faces`, keyed by
    (genus, vertex multiset).  Iterates face permutations phi of that
    cycle type and recovers sigma = phi o alpha0."""
    key = (n, faces)
    tally = _pruned_tally.get(key)
    if tally is not None:
        return tally
    nd = 2 * n
    tally = {}
    for phi in _perms_of_cycle_type(faces, nd):
        p = [phi[d ^ 1] for d in range(nd)]    # sigma = phi o alpha0
        seen = 1
        stack = [0]
        count = 1
        while stack:
            d = stack.pop()
            for e in (p[d], d ^ 1):
                b = 1 << e
                if not seen & b:
                    seen |= b
                    count += 1
                    stack.append(e)
        if count != nd:
            continue
        verts, bip = _vertex_info(p, nd)
        genus = (2 - (len(verts) - n + len(faces))) // 2
        k = (genus, verts, bip)
        tally[k] = tally.get(k, 0) + 1
    _pruned_tally[key] = tally
    return tally


def _norm_factor(n: int) -> Fraction:
    # (2n-1)!! / (2n-1)!
    dbl = factorial(2 * n) // (2 ** n * factorial(n))
    return Fraction(dbl, factorial(2 * n - 1))


def _as_multiset_pred(pred) -> Callable[[Tuple[int, ...]], bool]:
    if pred is None:
        return lambda ms: True
    if isinstance(pred, DegreeSet):
        return lambda ms: all(v in pred for v in ms)
    return pred


def _to_int(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise ArithmeticError(f"{what} came out non-integral: {x}")
    return x.numerator


def _classes(n: int, face_pred, perm_budget: int):
    """Yield ((genus, faces, verts, bip), sigma_count) for admissible faces."""
    fp = _as_multiset_pred(face_pred)
    if n <= FULL_SCAN_LIMIT:
        for (g, faces, verts, bip), cnt in _scan_full(n).items():
            if fp(faces):
                yield (g, faces, verts, bip), cnt
        return
    if n == 6 and isinstance(face_pred, DegreeSet):
        types = _face_type_multisets(n, face_pred.members(2 * n))
        total = sum(_count_perms_of_type(t, 2 * n) for t in types)
        if total > perm_budget:
            raise OracleBound(
                f"pruned scan would generate {total} permutations "
                f"(budget {perm_budget})")
        for faces in types:
            for (g, verts, bip), cnt in _scan_pruned(n, faces).items():
                yield (g, faces, verts, bip), cnt
        return
    raise OracleBound(
        f"oracle scans stop at n = {FULL_SCAN_LIMIT} "
        "(n = 6 needs a degree set to prune the face cycle type)")


def rooted_map_count(n: int, genus: Optional[int] = None,
                     face_pred=None, vertex_pred=None,
                     bipartite: Optional[bool] = None,
                     perm_budget: int = DEFAULT_PERM_BUDGET) -> int:
    """Rooted maps with n edges, filtered by genus, by predicates on the
    face-valency and vertex-degree multisets, and optionally by graph
    bipartiteness.

    Predicates may be None (no constraint), a DegreeSet (membership for
    every element), or a callable on the sorted multiset.
    """
    if n < 1:
        raise ValidationError("edge count must be >= 1")
    vp = _as_multiset_pred(vertex_pred)
    sigma_total = 0
    for (g, faces, verts, bip), cnt in _classes(n, face_pred, perm_budget):
        if genus is not None and g != genus:
            continue
        if bipartite is not None and bip != bipartite:
            continue
        if vp(verts):
            sigma_total += cnt
    return _to_int(sigma_total * _norm_factor(n), "rooted map count")


def oracle_refined_rows(dset: DegreeSet, n: int, genus: int,
                        tracked: Sequence[int] = (),
                        bipartite: Optional[bool] = None,
                        perm_budget: int = DEFAULT_PERM_BUDGET,
                        ) -> Dict[Tuple[int, ...], int]:
    """Rows {(vertex count, tracked valency counts...): rooted count}
    for genus-`genus` maps with all face valencies in dset."""
    tracked = tuple(tracked)
    norm = _norm_factor(n)
    acc: Dict[Tuple[int, ...], Fraction] = {}
    for (g, faces, verts, bip), cnt in _classes(n, dset, perm_budget):
        if g != genus:
            continue
        if bipartite is not None and bip != bipartite:
            continue
        marks = tuple(sum(1 for f in faces if f == d) for d in tracked)
        key = (len(verts),) + marks
        acc[key] = acc.get(key, 0) + cnt * norm
    return {k: _to_int(v, "refined oracle row") for k, v in acc.items() if v}


def distribution_oracle(dset: DegreeSet, n: int, genus: int,
                        tracked: Sequence[int],
                        bipartite: Optional[bool] = None,
                        perm_budget: int = DEFAULT_PERM_BUDGET,
                        ) -> DistributionTable:
    """Joint law of tracked face-valency counts, straight from the scan."""
    refined = oracle_refined_rows(dset, n, genus, tracked, bipartite,
                                  perm_budget)
    rows: Dict[Tuple[int, ...], int] = {}
    for key, w in refined.items():
        marks = key[1:]
        rows[marks] = rows.get(marks, 0) + w
    return DistributionTable(dset, n, tuple(tracked), rows)


# --- one-faced maps ------------------------------------------------------

def one_faced_maps(genus: int, min_degree: int = 3,
                   max_edges: Optional[int] = None,
                   degree_pred=None) -> List[RotationMap]:
    """All connected maps with a single face and the given genus, up to
    relabelling, as rotation systems over the standard involution.

    Enumerated through chord diagrams: fix the face permutation as the
    full cycle on 2n darts and let the edge involution range over
    fixed-point-free matchings; two matchings give the same map exactly
    when a rotation of the cycle relates them.  Vertex degrees are the
    cycle lengths of (full cycle) o (matching).

    With min_degree >= 3 the edge count is bounded by 6g - 3 and the
    list is complete; otherwise an explicit max_edges is required.
    """
    if genus < 0:
        raise ValidationError("genus must be >= 0")
    dp = _as_multiset_pred(degree_pred)
    out: List[RotationMap] = []
    if genus == 0 and min_degree >= 3:
        return out      # a planar one-faced map is a tree; it has leaves
    if max_edges is None:
        if min_degree < 3:
            raise ValidationError(
                "min_degree < 3 gives no edge bound; pass max_edges")
        max_edges = 6 * genus - 3
    for n in range(1, max_edges + 1):
        nd = 2 * n
        seen_canon = set()
        for matching in _matchings(nd):
            canon = min(_rotate_matching(matching, r, nd) for r in range(nd))
            if canon in seen_canon:
                continue
            seen_canon.add(canon)
            # vertices: cycles of c o matching, where c(d) = d+1 mod nd
            perm = [(matching[d] + 1) % nd for d in range(nd)]
            verts = _cycle_lengths(perm, nd)
            g = (n + 1 - len(verts)) // 2
            if g != genus:
                continue
            if verts[0] < min_degree or not dp(verts):
                continue
            out.append(_standard_labels(matching, nd))
    return out


def _matchings(nd: int):
    """Fixed-point-free involutions of 0..nd-1 as tuples."""
    pairing = [-1] * nd

    def rec(free: List[int]):
        if not free:
            yield tuple(pairing)
            return
        a = free[0]
        for idx in range(1, len(free)):
            b = free[idx]
            pairing[a], pairing[b] = b, a
            yield from rec(free[1:idx] + free[idx + 1:])
        pairing[a] = -1

    yield from rec(list(range(nd)))


def _rotate_matching(matching: Tuple[int, ...], r: int, nd: int) -> Tuple[int, ...]:
    return tuple((matching[(d - r) % nd] + r) % nd for d in range(nd))


def _standard_labels(matching: Tuple[int, ...], nd: int) -> RotationMap:
    """Relabel darts so the edge involution becomes d <-> d XOR 1."""
    relab = [-1] * nd
    nxt = 0
    for d in range(nd):
        if relab[d] < 0:
            relab[d] = nxt
            relab[matching[d]] = nxt + 1
            nxt += 2
    # sigma = c o matching in the old labels; push through relab
    sigma = [-1] * nd
    for d in range(nd):
        sigma[relab[d]] = relab[(matching[d] + 1) % nd]
    return RotationMap(nd // 2, sigma)
