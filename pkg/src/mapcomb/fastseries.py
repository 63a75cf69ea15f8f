"""Packed-integer solver for the mobile equations.

The reference engine in series.py keeps exact dict-based polynomials and
is quadratic-with-large-constants; fine up to order ~15, far too slow
for growth-rate fits that need exact counts to order 300.  Here the
whole polynomial coefficient of z^n (a polynomial in t and the tracked
markers) is packed into a single big integer, slot i holding the
coefficient of the i-th monomial in a fixed mixed-radix layout.  Ring
operations then ride on GMP integer arithmetic, which is fast enough
that the order-300 count tables take seconds.

Slots are read back in a balanced fashion (an offset of 2^(bits-1) is
added per slot before decoding), so intermediate polynomials with
negative coefficients are fine as long as no slot magnitude ever
reaches 2^(bits-1); `bits` is sized from the coefficient growth of the
target series with a wide margin.

Everything computed here is cross-checked against the exact engine in
the test suite; the two must agree coefficient for coefficient.
"""

from __future__ import annotations

from math import comb, prod
from typing import Dict, List, Sequence, Tuple

from gmpy2 import mpz

from .degrees import DegreeSet
from .errors import NotBipartite
from .motzkin import valency_pairs

__all__ = ["PackedRing", "packed_map_series", "packed_counts_all"]


class PackedRing:
    """Fixed layout for polynomials in (t, marker_1, ..., marker_k)."""

    def __init__(self, dims: Sequence[int], bits: int):
        if bits % 8:
            raise ValueError("bits must be a multiple of 8")
        self.dims = tuple(dims)
        self.bits = bits
        strides = []
        acc = 1
        for d in self.dims:
            strides.append(acc)
            acc *= d
        self.strides = tuple(strides)
        self.nslots = acc
        self.half = 1 << (bits - 1)
        one_per_slot = (mpz(1) << (bits * acc)) - 1
        one_per_slot //= (mpz(1) << bits) - 1
        self._offset = self.half * one_per_slot
        self._nbytes = bits // 8 * acc

    def index(self, expo: Sequence[int]) -> int:
        return sum(e * s for e, s in zip(expo, self.strides))

    def shift_bits(self, var: int, by: int = 1) -> int:
        return self.bits * self.strides[var] * by

    def pack(self, terms: Dict[Tuple[int, ...], int]) -> mpz:
        x = mpz(0)
        for expo, c in terms.items():
            for e, d in zip(expo, self.dims):
                if not 0 <= e < d:
                    raise ValueError(f"exponent {expo} outside layout {self.dims}")
            x += mpz(c) << (self.bits * self.index(expo))
        return x

    def unpack(self, x: mpz) -> Dict[Tuple[int, ...], int]:
        """Balanced per-slot decode; raises if a slot saturates the layout."""
        y = int(x + self._offset)
        if y < 0:
            raise OverflowError("packed value escaped the slot budget")
        raw = y.to_bytes(self._nbytes + 1, "little")
        if raw[self._nbytes]:
            raise OverflowError("packed value escaped the slot budget")
        nb = self.bits // 8
        out: Dict[Tuple[int, ...], int] = {}
        quarter = self.half >> 1
        for i in range(self.nslots):
            c = int.from_bytes(raw[i * nb:(i + 1) * nb], "little") - self.half
            if c:
                if not -quarter < c < quarter:
                    # a genuine coefficient this close to the slot bound
                    # almost certainly means silent wraparound upstream
                    raise OverflowError("slot magnitude too close to the bound")
                expo = []
                r = i
                for d in self.dims:
                    expo.append(r % d)
                    r //= d
                out[tuple(expo)] = c
        return out


def _slot_caps(order: int, marked: Sequence[int]) -> List[int]:
    # t-degree of any coefficient stays <= its z-order; markers obey the
    # valency-sum bound (sum of d * exponent <= twice the edge count)
    caps = [order + 3]
    for d in marked:
        caps.append(2 * (order + 1) // d + 3)
    return caps


def _ring_for(order: int, marked: Sequence[int]) -> PackedRing:
    dims = _slot_caps(order, marked)
    n = prod(dims)
    bits = 4 * (order + 2) + 2 * max(1, n.bit_length() + order.bit_length()) + 96
    bits += (-bits) % 8
    return PackedRing(dims, bits)


def _integrate_t(terms: Dict[Tuple[int, ...], int]) -> Dict[Tuple[int, ...], int]:
    """Map t^v -> t^(v+1)/(v+1); every division must be exact."""
    out = {}
    for expo, c in terms.items():
        v = expo[0]
        q, r = divmod(c, v + 1)
        if r:
            raise ArithmeticError("vertex-pointed count not divisible; "
                                  "engine inconsistency")
        out[(v + 1,) + expo[1:]] = q
    return out


def _conv(a: List[mpz], b: List[mpz], n: int, lo: int, hi: int) -> mpz:
    """sum of a[k] * b[n-k] for k in [lo, hi]."""
    acc = mpz(0)
    for k in range(lo, hi + 1):
        ak = a[k]
        if ak:
            bk = b[n - k]
            if bk:
                acc += ak * bk
    return acc


# --- bipartite engine ----------------------------------------------------

def _bipartite_dmdt(dset: DegreeSet, order: int, marked: Sequence[int],
                    ring: PackedRing) -> List[mpz]:
    """Packed coefficients of dM/dt + 2t for an all-even degree set,
    i.e. of 2 R/z, up to z^order."""
    if not dset.all_even():
        raise NotBipartite(f"{dset!r} allows an odd valency")
    nq = order + 1
    t_sh = ring.shift_bits(0)
    mark_sh = {d: ring.shift_bits(1 + i) for i, d in enumerate(marked)}

    tail = dset.tail == "even"
    fin_halves = sorted(v // 2 for v in dset.finite) if not tail else []
    need_pows = sorted(set(fin_halves) | {d // 2 for d in marked})
    pmax = max(need_pows, default=0)

    zero = mpz(0)
    R = [zero] * (nq + 1)
    K = [zero] * (nq + 1)
    pows: List[List[mpz]] = [[zero] * (nq + 1) for _ in range(pmax + 1)]
    if tail:
        u = [zero] * (nq + 1)   # 1/(1-4R)
        s = [zero] * (nq + 1)   # (1-4R)^(-1/2)
        u[0] = mpz(1)
        s[0] = mpz(1)

    for n in range(1, nq + 1):
        R[n] = (mpz(1) << t_sh) if n == 1 else zero
        R[n] = R[n] + K[n - 1]
        if pmax >= 1:
            pows[1][n] = R[n]
            for i in range(2, pmax + 1):
                pows[i][n] = _conv(pows[i - 1], R, n, 1, n - 1)
        if tail:
            u[n] = 4 * _conv(R, u, n, 1, n)
            s[n] = (u[n] - _conv(s, s, n, 1, n - 1)) >> 1
        kn = mpz(0)
        if tail:
            kn += s[n] >> 1            # (s - 1)/2 at order n >= 1
        for i in fin_halves:
            kn += comb(2 * i - 1, i) * pows[i][n]
        for d in marked:
            i = d // 2
            base = comb(2 * i - 1, i) * pows[i][n]
            kn += (base << mark_sh[d]) - base
        K[n] = kn

    # dM/dt = 2(R/z - t); we return 2 R/z and let the caller drop the
    # constant-order term (it only affects z^0)
    return [2 * R[n + 1] if n + 1 <= nq else zero for n in range(order + 1)]


# --- general engine ------------------------------------------------------

def _general_dmdt(dset: DegreeSet, order: int, marked: Sequence[int],
                  ring: PackedRing) -> List[mpz]:
    """Packed coefficients of dM/dt + t = R/z + T for a general degree
    set, up to z^order."""
    nq = order + 1
    t_sh = ring.shift_bits(0)
    mark_sh = {d: ring.shift_bits(1 + i) for i, d in enumerate(marked)}

    mode = dset.tail            # "all", "even" (+finite odds), "none"
    odd_extras = list(dset.finite) if mode == "even" else []
    finite_all = dset.members(2 * nq) if mode == "none" else []

    # which explicit (l, m) monomials we must maintain
    pair_lists: Dict[int, Dict[str, list]] = {}
    explicit = odd_extras if mode == "even" else finite_all
    for i in set(explicit) | set(marked):
        pair_lists[i] = {k: valency_pairs(i, k, nq) for k in ("L", "Q", "T")}

    lmax = mmax = 0
    needed_pairs = set()
    for table in pair_lists.values():
        for plist in table.values():
            for l, m, _ in plist:
                lmax = max(lmax, l)
                mmax = max(mmax, m)
                if l and m:
                    needed_pairs.add((l, m))

    zero = mpz(0)

    def fresh():
        return [zero] * (nq + 1)

    L, R, Q, Kv = fresh(), fresh(), fresh(), fresh()
    Kv[0] = mpz(1)
    KL, KQ, KT = fresh(), fresh(), fresh()
    Lp = [fresh() for _ in range(lmax + 1)]
    Rp = [fresh() for _ in range(mmax + 1)]
    Lp[0][0] = mpz(1)
    Rp[0][0] = mpz(1)
    LRp = {p: fresh() for p in needed_pairs}

    closed = mode in ("all", "even")
    if closed:
        V, W, E, X = fresh(), fresh(), fresh(), fresh()
        V[0] = W[0] = mpz(1)
        E[0] = mpz(1)
        Lsq = fresh()
        S = fresh()             # L + conv(R, E), the T-kernel cofactor
    if mode == "even":
        Vb, Wb, Eb, Xb = fresh(), fresh(), fresh(), fresh()
        Vb[0] = Wb[0] = mpz(1)
        Eb[0] = mpz(1)
        Sb = fresh()            # conv(R, Ebar) - L

    def pairsum(i: int, kind: str, n: int) -> mpz:
        acc = mpz(0)
        for l, m, c in pair_lists[i][kind]:
            if l == 0:
                sval = Rp[m][n]
            elif m == 0:
                sval = Lp[l][n]
            else:
                sval = LRp[(l, m)][n]
            if sval:
                acc += c * sval
        return acc

    # the L-kernel is the only one with a constant term (a lone leg,
    # i.e. the valency-1 slice); Q and T kernels start at order 1
    if mode == "all" or 1 in explicit:
        KL[0] = mpz(1)
    if 1 in marked:
        KL[0] += (mpz(1) << mark_sh[1]) - 1

    for n in range(1, nq + 1):
        # new orders of the unknown series from kernels one order back
        R[n] = (Kv[n - 1] << t_sh)
        L[n] = KL[n - 1]
        # maintained monomials at order n
        if lmax >= 1:
            Lp[1][n] = L[n]
            for l in range(2, lmax + 1):
                Lp[l][n] = _conv(Lp[l - 1], L, n, 1, n - 1)
        if mmax >= 1:
            Rp[1][n] = R[n]
            for m in range(2, mmax + 1):
                Rp[m][n] = _conv(Rp[m - 1], R, n, 1, n - 1)
        for (l, m) in needed_pairs:
            LRp[(l, m)][n] = _conv(Lp[l], Rp[m], n, l, n - m)
        if closed:
            Lsq[n] = _conv(L, L, n, 1, n - 1)
            a_n = -2 * L[n] + Lsq[n] - 4 * R[n]
            V[n] = (a_n - _conv(V, V, n, 1, n - 1)) >> 1
            W[n] = -_conv(V, W, n, 1, n)
            X[n] = -L[n] - V[n]
            # 2 conv(R, E)[n] = X[n] pins E at order n-1, and hands us
            # conv(R, E)[n] itself for free
            E[n - 1] = (X[n] - 2 * _conv(R, E, n, 2, n)) >> (t_sh + 1)
            S[n] = L[n] + (X[n] >> 1)
        if mode == "even":
            ab_n = 2 * L[n] + Lsq[n] - 4 * R[n]
            Vb[n] = (ab_n - _conv(Vb, Vb, n, 1, n - 1)) >> 1
            Wb[n] = -_conv(Vb, Wb, n, 1, n)
            Xb[n] = L[n] - Vb[n]
            Eb[n - 1] = (Xb[n] - 2 * _conv(R, Eb, n, 2, n)) >> (t_sh + 1)
            Sb[n] = (Xb[n] >> 1) - L[n]

        # kernels at the orders now determined
        if mode == "all":
            kq = _conv(E, W, n - 1, 0, n - 1)
            kl = W[n]
            kt = _conv(W, S, n, 0, n - 1)
        elif mode == "even":
            kq = (_conv(E, W, n - 1, 0, n - 1)
                  + _conv(Eb, Wb, n - 1, 0, n - 1)) >> 1
            kl = (W[n] - Wb[n]) >> 1
            kt = (_conv(W, S, n, 0, n - 1) + _conv(Wb, Sb, n, 0, n - 1)) >> 1
            for i in odd_extras:
                kq += pairsum(i, "Q", n - 1)
                kl += pairsum(i, "L", n)
                kt += pairsum(i, "T", n)
        else:
            kq = mpz(0)
            kl = mpz(0)
            kt = mpz(0)
            for i in finite_all:
                kq += pairsum(i, "Q", n - 1)
                kl += pairsum(i, "L", n)
                kt += pairsum(i, "T", n)
        for d in marked:
            for kind, idx in (("L", n), ("T", n), ("Q", n - 1)):
                base = pairsum(d, kind, idx)
                corr = (base << mark_sh[d]) - base
                if kind == "L":
                    kl += corr
                elif kind == "T":
                    kt += corr
                else:
                    kq += corr
        KL[n] = kl
        KQ[n - 1] = kq
        KT[n] = kt
        Q[n] = KQ[n - 1]
        Kv[n] = _conv(Q, Kv, n, 1, n)

    # dM/dt = R/z - t + T with T = 1 + KT; the -t + 1 parts only touch
    # z^0, which is dropped by every caller
    return [R[n + 1] + KT[n] if n + 1 <= nq else zero
            for n in range(order + 1)]


def packed_counts_all(order: int) -> List[int]:
    """Rooted map counts for unrestricted face valencies, 0..order.

    Runs the closed-kernel recurrences at the scalar point t = 1, so
    every coefficient is a single integer and the whole table to order
    300 takes a couple of seconds.  Unpointing uses self-duality: the
    family with no valency restriction is closed under taking duals, so
    summing vertex counts over all n-edge maps equals summing face
    counts, and with v + f = n + 2 per map the pointed total is
    (n + 2)/2 times the plain count.  Only valid for this degree set;
    restricted families are not closed under duality.
    """
    nq = order + 1
    zero = mpz(0)

    def fresh():
        return [zero] * (nq + 1)

    L, R, Q, Kv = fresh(), fresh(), fresh(), fresh()
    Kv[0] = mpz(1)
    V, W, E, S = fresh(), fresh(), fresh(), fresh()
    V[0] = W[0] = E[0] = mpz(1)
    KL, KT = fresh(), fresh()
    KL[0] = mpz(1)

    for n in range(1, nq + 1):
        R[n] = Kv[n - 1]
        L[n] = KL[n - 1]
        a_n = -2 * L[n] + _conv(L, L, n, 1, n - 1) - 4 * R[n]
        V[n] = (a_n - _conv(V, V, n, 1, n - 1)) >> 1
        W[n] = -_conv(V, W, n, 1, n)
        x_n = -L[n] - V[n]
        E[n - 1] = (x_n - 2 * _conv(R, E, n, 2, n)) >> 1
        S[n] = L[n] + (x_n >> 1)
        KL[n] = W[n]
        KT[n] = _conv(W, S, n, 0, n - 1)
        Q[n] = _conv(E, W, n - 1, 0, n - 1)
        Kv[n] = _conv(Q, Kv, n, 1, n)

    out = [0] * (order + 1)
    for n in range(1, order + 1):
        pointed = R[n + 1] + KT[n]
        q, r = divmod(2 * pointed, n + 2)
        if r:
            raise ArithmeticError("pointed total not divisible by (n+2)/2; "
                                  "engine inconsistency")
        out[n] = int(q)
    return out


# --- public entry --------------------------------------------------------

def packed_map_series(dset: DegreeSet, order: int,
                      marked: Sequence[int] = ()) -> List[Dict[Tuple[int, ...], int]]:
    """Map generating function per order: a list indexed by edge count n
    of dicts {(vertices, marker exponents...): exact count}.

    Entry 0 is empty; entry n collects rooted maps with n edges whose
    face valencies all lie in `dset`, refined by vertex count and by the
    exponents of the marked valencies.
    """
    marked = tuple(marked)
    for d in marked:
        if d not in dset:
            raise ValueError(f"marked valency {d} is not in the degree set")
    ring = _ring_for(order, marked)
    if dset.all_even():
        dmdt = _bipartite_dmdt(dset, order, marked, ring)
    else:
        dmdt = _general_dmdt(dset, order, marked, ring)
    out: List[Dict[Tuple[int, ...], int]] = [dict() for _ in range(order + 1)]
    for n in range(1, order + 1):
        out[n] = _integrate_t(ring.unpack(dmdt[n]))
    return out
