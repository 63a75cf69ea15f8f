"""Singular points, growth constants and per-valency means.

Everything here works at a configurable binary precision through mpmath.
Counts stay exact integers elsewhere; this module is the one place where
floating point enters, and each returned object carries its residuals so
callers can judge the quality of a solve.

Infinite valency sets are handled by straight term summation.  The slice
of kernel weights at valency s is bounded by (x + 2*sqrt(y))**(s-shift)
(expand the trinomial and compare factorials), so once that ratio is
below 1 the tails are certified geometric and we can stop summing at any
prescribed tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import mpmath as mp

from .degrees import DegreeSet
from .errors import (
    InsufficientData,
    NoSingularity,
    RegionViolation,
    UnsupportedDegreeSet,
    ValidationError,
)
from .motzkin import valency_pairs

__all__ = [
    "BipartiteSingularity",
    "GeneralSingularity",
    "AsymptoticFit",
    "TightnessReport",
    "bipartite_singularity",
    "general_singularity",
    "fit_growth",
    "mean_coefficients",
    "handshake_total",
    "tightness_report",
]


@dataclass(frozen=True)
class BipartiteSingularity:
    r0: mp.mpf
    rho: mp.mpf
    residual: mp.mpf


@dataclass(frozen=True)
class GeneralSingularity:
    l0: mp.mpf
    r0: mp.mpf
    rho: mp.mpf
    residual_fixed_point: mp.mpf
    residual_char: mp.mpf
    # one minus (2L - L^2 + 2R); positive means inside the stated region
    region_margin: mp.mpf
    # the tighter variant with 4R, which also keeps the kernels real
    region_margin_alt: mp.mpf
    tail_ratio: mp.mpf


@dataclass(frozen=True)
class AsymptoticFit:
    rho_fit: mp.mpf
    c_fit: mp.mpf
    exponent: Fraction
    period: int
    points_used: int


# --- bipartite branch ----------------------------------------------------

def _bip_weight(i: int) -> int:
    # faces of valency 2i contribute C(2i-1, i) per white corner
    return comb(2 * i - 1, i)


def _bip_halves(dset: DegreeSet) -> Optional[List[int]]:
    """Half-valencies of a finite all-even set, or None for the full
    even tail."""
    if dset.tail == "even" and not dset.finite:
        return None
    if dset.tail != "none":
        raise UnsupportedDegreeSet("bipartite solver needs an all-even set")
    halves = []
    for d in dset.finite:
        if d % 2:
            raise UnsupportedDegreeSet("bipartite solver needs an all-even set")
        halves.append(d // 2)
    return sorted(halves)


def _bip_sum(halves: Optional[List[int]], x: mp.mpf, factor,
             stop_tol: mp.mpf) -> mp.mpf:
    """Sum factor(i) * C(2i-1,i) * x**i over the half-valencies."""
    total = mp.mpf(0)
    if halves is not None:
        for i in halves:
            total += factor(i) * _bip_weight(i) * x ** i
        return total
    q = 4 * x
    if q >= 1:
        return mp.inf
    i = 1
    xp = x
    while True:
        total += factor(i) * _bip_weight(i) * xp
        # C(2i-1,i) <= 4^i / 2, so the tail is geometric in q
        if i > 2 and (i + 1) * q ** (i + 1) / (2 * (1 - q)) < stop_tol:
            return total
        i += 1
        xp *= x


def bipartite_singularity(dset: DegreeSet, precision: int = 128,
                          tol: Optional[float] = None) -> BipartiteSingularity:
    """Solve sum (i-1) C(2i-1,i) R0^i = 1 by bisection and read off the
    radius of convergence from the closed form."""
    halves = _bip_halves(dset)
    if halves == [1]:
        raise UnsupportedDegreeSet(
            "valency set {2} has no branch point of this kind")
    with mp.workprec(precision):
        stop = mp.mpf(2) ** (-(precision - 16))
        tol_v = mp.mpf(tol) if tol is not None else stop

        def H(x):
            return _bip_sum(halves, x, lambda i: i - 1, stop)

        # bracket: H is strictly increasing with H(0) = 0
        if halves is None:
            lo, hi = mp.mpf(1) / 8, mp.mpf(1) / 4
            while H(lo) >= 1:
                lo /= 2
        else:
            lo, hi = mp.mpf("0.01"), mp.mpf(1)
            while H(lo) >= 1:
                lo /= 2
            tries = 0
            while H(hi) <= 1:
                hi *= 2
                tries += 1
                if tries > 64:
                    raise NoSingularity("no bracket for the branch equation")
        for _ in range(precision + 16):
            mid = (lo + hi) / 2
            hm = H(mid)
            if hm < 1:
                lo = mid
            else:
                hi = mid
            if not (H(lo) < 1 or lo == mid) or hi - lo <= 0:
                raise NoSingularity("bisection bracket collapsed")
        r0 = (lo + hi) / 2
        residual = H(r0) - 1
        if abs(residual) > max(tol_v, stop * 64):
            raise NoSingularity(f"branch equation residual {residual}")
        dsum = _bip_sum(halves, r0, lambda i: i, stop) / r0
        rho = 1 / dsum
        return BipartiteSingularity(r0=r0, rho=rho, residual=residual)


# --- general branch ------------------------------------------------------

_SHIFT = {"L": 1, "Q": 2}


def _members_iter(dset: DegreeSet):
    if dset.tail == "none":
        yield from sorted(dset.finite)
        return
    d = 1
    while True:
        if d in dset:
            yield d
        d += 1


class _KernelPoint:
    """All kernel sums and first/second derivatives at one point (x, y),
    where x carries the leg count and y the half-edge pair count."""

    __slots__ = ("S", "Sx", "Sy", "Sxx", "Sxy", "Syy")

    def __init__(self):
        z = mp.mpf(0)
        self.S = z
        self.Sx = z
        self.Sy = z
        self.Sxx = z
        self.Sxy = z
        self.Syy = z


def _slice_terms(i: int, kind: str) -> List[Tuple[int, int, int]]:
    return valency_pairs(i, kind, i)


class _SliceWalker:
    """Valency slices of the weight sums by recurrence.

    T_s(x, y) = sum over l + 2m = s of (l+2m)!/(l! m! m!) x^l y^m obeys

        s T_s = (2s-1) x T_{s-1} - (s-1) (x^2 - 4y) T_{s-2},

    and differentiating the recurrence in x and y walks the five
    derivative slices along for free.  The pair-kernel slice at valency
    i falls out of the same data as (T_i - x T_{i-1}) / (2y).  One pass
    therefore prices every admissible valency at a handful of
    multiplications instead of a quadratic pile of monomials.
    """

    __slots__ = ("x", "y", "q", "s", "cur", "prev")

    def __init__(self, x, y):
        self.x = x
        self.y = y
        self.q = x * x - 4 * y
        self.s = 0
        one, zero = mp.mpf(1), mp.mpf(0)
        # slice vectors: (T, Tx, Ty, Txx, Txy, Tyy)
        self.cur = (one, zero, zero, zero, zero, zero)
        self.prev = None

    def advance(self):
        """Step to the next slice index."""
        x, q = self.x, self.q
        s = self.s + 1
        a, b = self.cur, self.prev
        if b is None:
            b = (mp.mpf(0),) * 6
        t, tx, ty, txx, txy, tyy = a
        p, px, py, pxx, pxy, pyy = b
        c1, c2 = 2 * s - 1, s - 1
        nt = (c1 * x * t - c2 * q * p) / s
        ntx = (c1 * (t + x * tx) - c2 * (2 * x * p + q * px)) / s
        nty = (c1 * x * ty - c2 * (-4 * p + q * py)) / s
        ntxx = (c1 * (2 * tx + x * txx)
                - c2 * (2 * p + 4 * x * px + q * pxx)) / s
        ntxy = (c1 * (ty + x * txy)
                - c2 * (2 * x * py - 4 * px + q * pxy)) / s
        ntyy = (c1 * x * tyy - c2 * (-8 * py + q * pyy)) / s
        self.prev = a
        self.cur = (nt, ntx, nty, ntxx, ntxy, ntyy)
        self.s = s


def _kernel_pair(dset: DegreeSet, x: mp.mpf, y: mp.mpf,
                 stop_tol: mp.mpf) -> Tuple[_KernelPoint, _KernelPoint]:
    """Both kernel sums (leg kind and pair kind) in one recurrence pass,
    with the certified geometric cut-off for infinite sets."""
    if y <= 0:
        raise ValidationError("pair variable must be positive")
    infinite = dset.tail != "none"
    r = x + 2 * mp.sqrt(y)
    if infinite and r >= mp.mpf("0.999999"):
        raise RegionViolation("outside the convergence region of the kernels")
    P = _KernelPoint()
    # raw accumulators for the pair kernel: sums of T-slices at i, i-1
    A2 = [mp.mpf(0)] * 6
    A1 = [mp.mpf(0)] * 6
    top = None if infinite else (max(dset.finite) if dset.finite else 0)
    walker = _SliceWalker(x, y)
    while True:
        i = walker.s + 1          # valency served by the leg kernel
        if i in dset:
            t = walker.cur
            P.S += t[0]
            P.Sx += t[1]
            P.Sy += t[2]
            P.Sxx += t[3]
            P.Sxy += t[4]
            P.Syy += t[5]
        j = walker.s              # valency served by the pair kernel
        if j >= 2 and j in dset:
            for k in range(6):
                A2[k] += walker.cur[k]
                A1[k] += walker.prev[k]
        if infinite:
            if walker.s >= 4:
                tail = (walker.s + 3) ** 2 * r ** (walker.s - 2) / (1 - r)
                if tail < stop_tol:
                    break
        elif walker.s >= top:
            break
        walker.advance()
    Q = _KernelPoint()
    B = A2[0] - x * A1[0]
    Bx = A2[1] - A1[0] - x * A1[1]
    By = A2[2] - x * A1[2]
    Bxx = A2[3] - 2 * A1[1] - x * A1[3]
    Bxy = A2[4] - A1[2] - x * A1[4]
    Byy = A2[5] - x * A1[5]
    y2 = 2 * y
    Q.S = B / y2
    Q.Sx = Bx / y2
    Q.Sy = By / y2 - B / (y2 * y)
    Q.Sxx = Bxx / y2
    Q.Sxy = Bxy / y2 - Bx / (y2 * y)
    Q.Syy = Byy / y2 - By / (y * y) + B / (y * y * y)
    return P, Q


class _SystemPoint:
    """The reduced two-equation system and every partial the solver and
    the mean formulas need, evaluated at (z, L, R)."""

    def __init__(self, dset: DegreeSet, z, L, R, stop_tol):
        P, QK = _kernel_pair(dset, L, R, stop_tol)
        self.z, self.L, self.R = z, L, R
        self.F = z * P.S
        self.F_z = P.S
        self.F_L = z * P.Sx
        self.F_R = z * P.Sy
        self.F_zL = P.Sx
        self.F_zR = P.Sy
        self.F_LL = z * P.Sxx
        self.F_LR = z * P.Sxy
        self.F_RR = z * P.Syy
        Q = z * QK.S
        if Q >= 1:
            raise RegionViolation("leg generating sum reached its pole")
        u = 1 / (1 - Q)
        self.Q, self.u = Q, u
        Q_z, Q_L, Q_R = QK.S, z * QK.Sx, z * QK.Sy
        Q_zL, Q_zR = QK.Sx, QK.Sy
        Q_LL, Q_LR, Q_RR = z * QK.Sxx, z * QK.Sxy, z * QK.Syy
        u2, u3 = u * u, u * u * u

        def u_d(a):
            return u2 * a

        def u_dd(a, b, ab):
            return 2 * u3 * a * b + u2 * ab

        self.G = z * u
        self.G_z = u + z * u_d(Q_z)
        self.G_L = z * u_d(Q_L)
        self.G_R = z * u_d(Q_R)
        self.G_zL = u_d(Q_L) + z * u_dd(Q_z, Q_L, Q_zL)
        self.G_zR = u_d(Q_R) + z * u_dd(Q_z, Q_R, Q_zR)
        self.G_LL = z * u_dd(Q_L, Q_L, Q_LL)
        self.G_LR = z * u_dd(Q_L, Q_R, Q_LR)
        self.G_RR = z * u_dd(Q_R, Q_R, Q_RR)

    def det(self):
        return (1 - self.F_L) * (1 - self.G_R) - self.F_R * self.G_L

    def det_grad(self):
        out = []
        for (F_La, G_Ra, F_Ra, G_La) in (
                (self.F_zL, self.G_zR, self.F_zR, self.G_zL),
                (self.F_LL, self.G_LR, self.F_LR, self.G_LL),
                (self.F_LR, self.G_RR, self.F_RR, self.G_LR)):
            out.append(-F_La * (1 - self.G_R) - (1 - self.F_L) * G_Ra
                       - F_Ra * self.G_L - self.F_R * G_La)
        return out

    def char_residual(self):
        return abs(1 - (self.G_L * self.F_R / (1 - self.F_L) + self.G_R))


def _solve2(dset, z, L, R, stop_tol, ntol, max_iter=30, max_halve=12):
    """Newton on (L, R) at fixed z.  Returns the system point or None."""
    try:
        p = _SystemPoint(dset, z, L, R, stop_tol)
    except (RegionViolation, ValidationError):
        return None
    for _ in range(max_iter):
        e1 = p.F - L
        e2 = p.G - R
        res = max(abs(e1), abs(e2))
        if res < ntol:
            return p
        a, b = 1 - p.F_L, -p.F_R
        c, d = -p.G_L, 1 - p.G_R
        den = a * d - b * c
        if den == 0:
            return None
        dL = (d * e1 - b * e2) / den
        dR = (a * e2 - c * e1) / den
        scale = mp.mpf(1)
        nxt = None
        for _h in range(max_halve):
            nL, nR = L + scale * dL, R + scale * dR
            if nL >= 0 and nR > 0:
                try:
                    q = _SystemPoint(dset, z, nL, nR, stop_tol)
                    if max(abs(q.F - nL), abs(q.G - nR)) < res:
                        nxt = (nL, nR, q)
                        break
                except (RegionViolation, ValidationError):
                    pass
            scale /= 2
        if nxt is None:
            return None
        L, R, p = nxt
    return None


def _solve3(dset, z, L, R, stop_tol, ntol, max_iter=80):
    """Newton on (z, L, R) for the fold point: fixed point plus vanishing
    Jacobian determinant."""

    def residuals(pt):
        return (pt.F - pt.L, pt.G - pt.R, pt.det())

    p = _SystemPoint(dset, z, L, R, stop_tol)
    for _ in range(max_iter):
        e = residuals(p)
        res = max(abs(v) for v in e)
        if res < ntol:
            return p
        # Jacobian of (F - L, G - R, det) with respect to (z, L, R)
        M = [[p.F_z, p.F_L - 1, p.F_R],
             [p.G_z, p.G_L, p.G_R - 1],
             list(p.det_grad())]
        rhs = [e[0], e[1], e[2]]
        delta = _gauss3(M, rhs)
        if delta is None:
            raise NoSingularity("fold system became singular")
        scale = mp.mpf(1)
        stepped = None
        while scale > mp.mpf(2) ** -40:
            nz = z - scale * delta[0]
            nL = L - scale * delta[1]
            nR = R - scale * delta[2]
            if nz > 0 and nL >= 0 and nR > 0:
                try:
                    q = _SystemPoint(dset, nz, nL, nR, stop_tol)
                except (RegionViolation, ValidationError):
                    scale /= 2
                    continue
                if max(abs(v) for v in residuals(q)) < res:
                    stepped = (nz, nL, nR, q)
                    break
            scale /= 2
        if stepped is None:
            raise NoSingularity("fold refinement stalled")
        z, L, R, p = stepped
    raise NoSingularity("fold refinement did not converge")


def _gauss3(M, rhs):
    idx = [0, 1, 2]
    for col in range(3):
        piv = max(range(col, 3), key=lambda r: abs(M[r][col]))
        if M[piv][col] == 0:
            return None
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            rhs[col], rhs[piv] = rhs[piv], rhs[col]
        for r in range(col + 1, 3):
            f = M[r][col] / M[col][col]
            for c in range(col, 3):
                M[r][c] -= f * M[col][c]
            rhs[r] -= f * rhs[col]
    out = [mp.mpf(0)] * 3
    for r in (2, 1, 0):
        s = rhs[r] - sum(M[r][c] * out[c] for c in range(r + 1, 3))
        out[r] = s / M[r][r]
    return out


def general_singularity(dset: DegreeSet, precision: int = 128,
                        tol: Optional[float] = None) -> GeneralSingularity:
    """Fold point of the leg/pair system for a set with odd valencies.

    Path-following in z with warm-started Newton solves of the pair of
    fixed-point equations; once the Jacobian determinant drops low the
    fold is polished with a three-variable Newton iteration."""
    if all(d % 2 == 0 for d in dset.finite) and dset.tail != "all" \
            and (dset.tail == "even" or dset.finite):
        raise UnsupportedDegreeSet(
            "all-even sets take the bipartite route")
    with mp.workprec(precision + 16):
        stop = mp.mpf(2) ** (-(precision - 8))
        ntol = mp.mpf(2) ** (-(precision - 24))
        # loose tolerances carry the path march; only the final fold
        # polish runs at full depth
        stop_path = mp.mpf(2) ** -64
        ntol_path = mp.mpf(2) ** -48
        tol_v = mp.mpf(tol) if tol is not None else ntol
        z = mp.mpf("0.02")
        L, R = mp.mpf(0), z
        p = _solve2(dset, z, L, R, stop_path, ntol_path)
        while p is None:
            z /= 2
            if z < mp.mpf("1e-30"):
                raise NoSingularity("no starting point for path-following")
            p = _solve2(dset, z, mp.mpf(0), z, stop_path, ntol_path)
        hist: List[Tuple[mp.mpf, mp.mpf]] = [(z, p.det())]
        step = z / 2
        while p.det() > mp.mpf("0.4"):
            trial = _solve2(dset, z + step, p.L, p.R, stop_path, ntol_path)
            if trial is not None and trial.det() > 0:
                z, p = z + step, trial
                hist.append((z, p.det()))
                if p.det() > mp.mpf("0.6"):
                    step *= mp.mpf("1.6")
            else:
                step /= 2
                if step < z * mp.mpf(2) ** -60:
                    break
        # the determinant vanishes like sqrt(z* - z): extrapolate z*
        z1, d1 = hist[-1]
        if len(hist) > 1:
            z0, d0 = hist[-2]
            denom = d0 * d0 - d1 * d1
            z_guess = z1 + d1 * d1 * (z1 - z0) / denom if denom else z1
        else:
            z_guess = z1 * mp.mpf("1.05")
        p = _solve3(dset, z_guess, p.L, p.R, stop, ntol)
        margin = 1 - (2 * p.L - p.L * p.L + 2 * p.R)
        margin_alt = 1 - (2 * p.L - p.L * p.L + 4 * p.R)
        # polynomial kernels are entire, so finite sets may legitimately
        # fold outside the region; only infinite sums depend on it
        if margin <= 0 and dset.tail != "none":
            raise RegionViolation(
                "fold point left the stated convergence region")
        out = GeneralSingularity(
            l0=p.L, r0=p.R, rho=p.z,
            residual_fixed_point=max(abs(p.F - p.L), abs(p.G - p.R)),
            residual_char=p.char_residual(),
            region_margin=margin,
            region_margin_alt=margin_alt,
            tail_ratio=p.L + 2 * mp.sqrt(p.R),
        )
        if out.residual_char > max(tol_v, mp.mpf("1e-10")):
            raise NoSingularity(
                f"characteristic residual {out.residual_char} too large")
        return out


# --- growth fitting ------------------------------------------------------

def _richardson(seq: List[mp.mpf], exponents: Iterable[int],
                start: int = 1) -> mp.mpf:
    """Eliminate error terms 1/k^j for the given j in order; the k index
    of seq[i] is i + start."""
    vals = list(seq)
    offset = start - 1
    for j in exponents:
        if len(vals) < 2:
            break
        nxt = []
        for i in range(1, len(vals)):
            k = i + 1 + offset
            km = k - 1
            w1, w0 = mp.mpf(k) ** j, mp.mpf(km) ** j
            nxt.append((w1 * vals[i] - w0 * vals[i - 1]) / (w1 - w0))
        vals = nxt
        offset += 1
    return vals[-1]


def fit_growth(counts: Sequence[int], period: Optional[int] = None,
               precision: int = 128) -> AsymptoticFit:
    """Fit c * n^(-5/2) * rho^(-n) to a count table along the residue
    class n = 0 mod period.  The exponent is not fitted; it is fixed.
    """
    support = [n for n in range(1, len(counts)) if counts[n]]
    if not support:
        raise InsufficientData("count table has no nonzero entries")
    d_inf = gcd(*support) if len(support) > 1 else support[0]
    d = period if period is not None else d_inf
    if d < 1 or d_inf % d:
        raise ValidationError(
            f"period {d} does not match the count support (gcd {d_inf})")
    if d != d_inf:
        d = d_inf     # counts vanish off the support lattice
    K = (len(counts) - 1) // d
    # small families may start a few lattice steps in
    k0 = next(k for k in range(1, K + 1) if counts[k * d])
    if K - k0 + 1 < 40:
        raise InsufficientData(
            f"need counts to at least n = {(k0 + 39) * d}, have n = {K * d}")
    with mp.workprec(precision):
        ratios = []
        for k in range(k0, K):
            a, b = counts[k * d], counts[(k + 1) * d]
            if not a or not b:
                raise InsufficientData(f"zero count at n = {k * d} inside fit")
            ratios.append(mp.mpf(b) / a * (mp.mpf(k + 1) / k) ** mp.mpf("2.5"))
        # ratios tend to rho^(-d) with error expansion in 1/k^2, 1/k^3, ...
        growth = _richardson(ratios, (2, 3, 4), start=k0)
        rho_fit = growth ** (mp.mpf(-1) / d)
        cs = []
        for k in range(k0, K + 1):
            n = k * d
            cs.append(counts[n] * rho_fit ** n * mp.mpf(n) ** mp.mpf("2.5"))
        c_fit = _richardson(cs, (1, 2, 3), start=k0)
        return AsymptoticFit(rho_fit=rho_fit, c_fit=c_fit,
                             exponent=Fraction(-5, 2), period=d,
                             points_used=K - k0 + 1)


# --- per-valency means ---------------------------------------------------

def _is_bipartite_set(dset: DegreeSet) -> bool:
    if dset.tail == "all":
        return False
    if dset.tail == "even":
        return all(d % 2 == 0 for d in dset.finite)
    return bool(dset.finite) and all(d % 2 == 0 for d in dset.finite)


def _marker_slice(dset: DegreeSet, kind: str, i: int, L, R):
    """Value, and R-derivative, of the valency-i weight slice."""
    shift = _SHIFT[kind]
    if i - shift < 0 or i not in dset:
        z = mp.mpf(0)
        return z, z
    val = mp.mpf(0)
    dR = mp.mpf(0)
    for (l, m, w) in _slice_terms(i, kind):
        c = w * L ** l * R ** m
        val += c
        if m:
            dR += m * c / R
    return val, dR


def _general_mu(dset: DegreeSet, p: _SystemPoint, i: int):
    """Mean coefficient of valency i through the reduced one-equation
    view: eliminate the leg series and differentiate implicitly."""
    z, u = p.z, p.u
    sliceL, _ = _marker_slice(dset, "L", i, p.L, p.R)
    sliceQ, _ = _marker_slice(dset, "Q", i, p.L, p.R)
    F_xi = z * sliceL
    G_xi = z * u * u * (z * sliceQ)
    lever = p.G_L / (1 - p.F_L)
    H_xi = G_xi + lever * F_xi
    H_z = p.G_z + lever * p.F_z
    return H_xi / (p.z * H_z)


def mean_coefficients(dset: DegreeSet, tracked: Sequence[int],
                      precision: int = 128,
                      sing=None) -> Dict[int, mp.mpf]:
    """Linear growth rates of the per-valency face counts: the expected
    number of valency-d faces in a large map is mu_d * n + O(1).

    Bipartite sets use the closed form rho * C(d-1, d/2) * R0^(d/2 - 1);
    sets with odd valencies go through the reduced derivative quotient.
    The two agree on their common domain.
    """
    tracked = list(tracked)
    with mp.workprec(precision + 16):
        out: Dict[int, mp.mpf] = {}
        if _is_bipartite_set(dset):
            bp = sing if isinstance(sing, BipartiteSingularity) else \
                bipartite_singularity(dset, precision)
            for d in tracked:
                if d in dset:
                    i = d // 2
                    out[d] = bp.rho * _bip_weight(i) * bp.r0 ** (i - 1)
                else:
                    out[d] = mp.mpf(0)
            return out
        gs = sing if isinstance(sing, GeneralSingularity) else \
            general_singularity(dset, precision)
        stop = mp.mpf(2) ** (-(precision - 8))
        p = _SystemPoint(dset, gs.rho, gs.l0, gs.r0, stop)
        for d in tracked:
            if d in dset:
                mu = _general_mu(dset, p, d)
                if not mu > 0:
                    raise NoSingularity(f"mean coefficient for {d} not positive")
                out[d] = mu
            else:
                out[d] = mp.mpf(0)
        return out


def handshake_total(dset: DegreeSet, precision: int = 128,
                    tail_tol: float = 1e-14) -> mp.mpf:
    """Sum of d * mu_d over the valency set; equals 2 because every edge
    contributes two face corners."""
    with mp.workprec(precision + 16):
        if _is_bipartite_set(dset):
            sing = bipartite_singularity(dset, precision)
            point = None
        else:
            sing = general_singularity(dset, precision)
            stop = mp.mpf(2) ** (-(precision - 8))
            point = _SystemPoint(dset, sing.rho, sing.l0, sing.r0, stop)
        total = mp.mpf(0)
        tol_v = mp.mpf(tail_tol)
        for d in _members_iter(dset):
            if point is None:
                i = d // 2
                term = d * sing.rho * _bip_weight(i) * sing.r0 ** (i - 1)
            else:
                term = d * _general_mu(dset, point, d)
            total += term
            if dset.tail != "none" and d > 4 and term < tol_v:
                break
            if dset.tail == "none" and d >= max(dset.finite):
                break
        return total


# --- tightness diagnostics ----------------------------------------------

@dataclass(frozen=True)
class SumFamily:
    partial_half: mp.mpf
    partial_full: mp.mpf
    gap: mp.mpf


@dataclass(frozen=True)
class DecayFamily:
    first_term: mp.mpf
    last_term: mp.mpf
    decreasing: bool


@dataclass(frozen=True)
class TightnessReport:
    degrees: DegreeSet
    cutoff: int
    sums: Dict[str, SumFamily]
    decays: Dict[str, DecayFamily]


def _tightness_terms(dset: DegreeSet, d: int, sing, point) -> Dict[str, mp.mpf]:
    """One valency's contribution to each diagnostic family."""
    if point is None:
        i = d // 2
        w = _bip_weight(i)
        f_x = sing.rho * w * sing.r0 ** i
        f_rx = sing.rho * i * w * sing.r0 ** (i - 1)
        f_zx = w * sing.r0 ** i
        f_xx = mp.mpf(0)
    else:
        z, u = point.z, point.u
        sliceL, sliceL_R = _marker_slice(dset, "L", d, point.L, point.R)
        sliceQ, sliceQ_R = _marker_slice(dset, "Q", d, point.L, point.R)
        lever = point.G_L / (1 - point.F_L)
        Q_x = z * sliceQ
        Q_R = point.G_R / (z * u * u)
        G_x = z * u * u * Q_x
        G_xR = z * (2 * u ** 3 * Q_R * Q_x + u * u * z * sliceQ_R)
        f_x = G_x + lever * z * sliceL
        f_rx = G_xR + lever * z * sliceL_R
        f_zx = f_x / z
        f_xx = 2 * z * u ** 3 * Q_x * Q_x
    return {
        "marker": f_x,
        "marker_pair_sq": f_rx * f_rx,
        "marker_second": f_xx,
        "edge_marker": f_zx,
        "pair_marker": abs(f_rx),
    }


def tightness_report(dset: DegreeSet, cutoff: int = 200,
                     precision: int = 128) -> TightnessReport:
    """Partial sums and decay flags for the derivative families that
    control tightness of the face-count process."""
    if cutoff < 8:
        raise ValidationError("cutoff too small to say anything")
    with mp.workprec(precision + 16):
        if _is_bipartite_set(dset):
            sing = bipartite_singularity(dset, precision)
            point = None
        else:
            sing = general_singularity(dset, precision)
            stop = mp.mpf(2) ** (-(precision - 8))
            point = _SystemPoint(dset, sing.rho, sing.l0, sing.r0, stop)
        sum_names = ("marker", "marker_pair_sq", "marker_second")
        decay_names = ("marker", "edge_marker", "pair_marker")
        half_at = cutoff // 2
        window_lo = max(1, cutoff // 4)
        acc = {k: mp.mpf(0) for k in sum_names}
        half = {k: mp.mpf(0) for k in sum_names}
        window: Dict[str, List[mp.mpf]] = {k: [] for k in decay_names}
        first: Dict[str, mp.mpf] = {}
        last: Dict[str, mp.mpf] = {}
        # the summation index is the marker index: half-valencies on the
        # bipartite route, valencies on the general one
        for d in _members_iter(dset):
            i = d // 2 if point is None else d
            if i > cutoff:
                break
            if i < 1:
                continue
            terms = _tightness_terms(dset, d, sing, point)
            for k in sum_names:
                acc[k] += terms[k]
                if i <= half_at:
                    half[k] += terms[k]
            for k in decay_names:
                v = abs(terms[k])
                if not first.get(k):
                    first[k] = v
                last[k] = v
                if i >= window_lo:
                    window[k].append(v)
        sums = {k: SumFamily(partial_half=half[k], partial_full=acc[k],
                             gap=abs(acc[k] - half[k]))
                for k in sum_names}
        decays = {}
        for k in decay_names:
            w = window[k]
            decreasing = len(w) < 2 or all(b <= a for a, b in zip(w, w[1:]))
            decays[k] = DecayFamily(first_term=first.get(k, mp.mpf(0)),
                                    last_term=last.get(k, mp.mpf(0)),
                                    decreasing=decreasing)
        return TightnessReport(degrees=dset, cutoff=cutoff,
                               sums=sums, decays=decays)
