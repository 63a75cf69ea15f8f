"""Exact truncated power series in z with multivariate polynomial coefficients.

All series here are truncated at a fixed order N and keep one coefficient
per power z^0 .. z^N.  A coefficient is a MultiPoly: a sparse polynomial
with exact rational coefficients in a fixed tuple of auxiliary variables.
Variable slot 0 is reserved for t (marking vertices); the remaining slots
are free markers, one per tracked valency.

The arithmetic is deliberately plain: dict convolution, no laziness, no
floating point.  Everything downstream that needs speed goes through the
packed integer engine instead and is cross-checked against this one.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Tuple

from .errors import NoContraction, OrderExceeded, OrderMismatch

__all__ = [
    "MultiPoly",
    "Series",
    "mul_truncated",
    "solve_fixed_point",
    "integrate_in_t",
    "extract",
]

Coeff = "int | Fraction"
Expo = Tuple[int, ...]


def _norm(v):
    # keep plain ints where the value is integral; Fraction only when needed
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


class MultiPoly:
    """Sparse polynomial in nvars variables with int/Fraction coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Dict[Expo, object] | None = None):
        self.nvars = nvars
        # do not store zero values
        self.terms = {e: v for e, v in (terms or {}).items() if v}

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, value) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: _norm(value)})

    @classmethod
    def monomial(cls, nvars: int, expo: Expo, value=1) -> "MultiPoly":
        if len(expo) != nvars:
            raise ValueError("exponent tuple has wrong length")
        return cls(nvars, {tuple(expo): _norm(value)})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        if self.nvars != other.nvars:
            raise ValueError("mixing polynomials over different variable sets")
        t = dict(self.terms)
        for e, v in other.terms.items():
            w = t.get(e, 0) + v
            if w:
                t[e] = _norm(w)
            elif e in t:
                del t[e]
        return MultiPoly(self.nvars, t)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.nvars, {e: -v for e, v in self.terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        if self.nvars != other.nvars:
            raise ValueError("mixing polynomials over different variable sets")
        if not self.terms or not other.terms:
            return MultiPoly(self.nvars)
        t: Dict[Expo, object] = {}
        for ea, va in self.terms.items():
            for eb, vb in other.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                w = t.get(e, 0) + va * vb
                if w:
                    t[e] = w
                elif e in t:
                    del t[e]
        return MultiPoly(self.nvars, {e: _norm(v) for e, v in t.items()})

    def scale(self, c) -> "MultiPoly":
        if not c:
            return MultiPoly(self.nvars)
        return MultiPoly(self.nvars, {e: _norm(v * c) for e, v in self.terms.items()})

    def shift(self, var: int, by: int = 1) -> "MultiPoly":
        """Multiply by variable `var` raised to `by` (by may be negative)."""
        t = {}
        for e, v in self.terms.items():
            ne = e[var] + by
            if ne < 0:
                raise ValueError("negative exponent after shift")
            t[e[:var] + (ne,) + e[var + 1:]] = v
        return MultiPoly(self.nvars, t)

    def degree(self, var: int) -> int:
        """Largest exponent of variable `var`; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(e[var] for e in self.terms)

    def coeff_of(self, var: int, k: int) -> "MultiPoly":
        """Polynomial coefficient of variable `var` to the power k."""
        t = {}
        for e, v in self.terms.items():
            if e[var] == k:
                t[e[:var] + (0,) + e[var + 1:]] = v
        return MultiPoly(self.nvars, t)

    def specialize(self, var: int, value=1) -> "MultiPoly":
        """Substitute a rational value for one variable (slot kept, at 0)."""
        t: Dict[Expo, object] = {}
        for e, v in self.terms.items():
            ne = e[:var] + (0,) + e[var + 1:]
            w = t.get(ne, 0) + v * value ** e[var]
            if w:
                t[ne] = w
            elif ne in t:
                del t[ne]
        return MultiPoly(self.nvars, {e: _norm(v) for e, v in t.items()})

    def value(self):
        """The constant term, asserting there is nothing else."""
        if not self.terms:
            return 0
        if set(self.terms) != {(0,) * self.nvars}:
            raise ValueError("polynomial is not constant")
        return self.terms[(0,) * self.nvars]

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms):
            v = self.terms[e]
            mono = "*".join(
                f"v{i}^{k}" if k != 1 else f"v{i}"
                for i, k in enumerate(e) if k
            )
            bits.append(f"{v}*{mono}" if mono else f"{v}")
        return " + ".join(bits)


class Series:
    """Power series in z truncated at order N, MultiPoly coefficients."""

    __slots__ = ("order", "nvars", "coeffs")

    def __init__(self, order: int, nvars: int, coeffs: List[MultiPoly] | None = None):
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        self.order = order
        self.nvars = nvars
        if coeffs is None:
            coeffs = [MultiPoly(nvars) for _ in range(order + 1)]
        if len(coeffs) != order + 1:
            raise ValueError("coefficient list does not match order")
        self.coeffs = coeffs

    @classmethod
    def zero(cls, order: int, nvars: int) -> "Series":
        return cls(order, nvars)

    @classmethod
    def const(cls, order: int, nvars: int, value) -> "Series":
        s = cls(order, nvars)
        s.coeffs[0] = MultiPoly.const(nvars, value)
        return s

    @classmethod
    def term(cls, order: int, nvars: int, zexp: int, expo: Expo | None = None,
             value=1) -> "Series":
        """value * z^zexp * (monomial in the auxiliary variables)."""
        s = cls(order, nvars)
        if zexp <= order:
            if expo is None:
                expo = (0,) * nvars
            s.coeffs[zexp] = MultiPoly.monomial(nvars, expo, value)
        return s

    def _check(self, other: "Series") -> None:
        if self.order != other.order:
            raise OrderMismatch(
                f"series orders differ: {self.order} vs {other.order}")
        if self.nvars != other.nvars:
            raise ValueError("series over different variable sets")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return (self.order == other.order and self.nvars == other.nvars
                and self.coeffs == other.coeffs)

    def __add__(self, other: "Series") -> "Series":
        self._check(other)
        return Series(self.order, self.nvars,
                      [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "Series":
        return Series(self.order, self.nvars, [-c for c in self.coeffs])

    def __sub__(self, other: "Series") -> "Series":
        self._check(other)
        return Series(self.order, self.nvars,
                      [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __mul__(self, other: "Series") -> "Series":
        return mul_truncated(self, other)

    def scale(self, c) -> "Series":
        return Series(self.order, self.nvars, [p.scale(c) for p in self.coeffs])

    def valuation(self) -> int:
        """Index of the first nonzero coefficient; order+1 if all vanish."""
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return self.order + 1

    def shift_z(self, k: int) -> "Series":
        """Multiply by z^k (k >= 0), truncating at the top."""
        if k < 0:
            raise ValueError("use div_z for negative shifts")
        out = Series(self.order, self.nvars)
        for n in range(self.order + 1 - k):
            out.coeffs[n + k] = self.coeffs[n]
        return out

    def div_z(self, k: int = 1) -> "Series":
        """Divide by z^k.  The low coefficients must vanish; the truncation
        order is kept, so the top k coefficients of the result are unknown
        and set to zero.  Callers must account for the lost orders."""
        for n in range(k):
            if self.coeffs[n]:
                raise ValueError("series is not divisible by z^%d" % k)
        out = Series(self.order, self.nvars)
        for n in range(k, self.order + 1):
            out.coeffs[n - k] = self.coeffs[n]
        return out

    def mul_var(self, var: int, by: int = 1) -> "Series":
        return Series(self.order, self.nvars,
                      [c.shift(var, by) for c in self.coeffs])

    def div_t(self) -> "Series":
        """Divide by t (variable slot 0); every term must carry a t."""
        return self.mul_var(0, -1)

    def pow(self, k: int) -> "Series":
        """k-th power by binary exponentiation, truncated throughout."""
        if k < 0:
            raise ValueError("negative powers are not defined here")
        result = Series.const(self.order, self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = mul_truncated(result, base)
            base_needed = k >> 1
            if base_needed:
                base = mul_truncated(base, base)
            k = base_needed
        return result

    def inverse_one_minus(self) -> "Series":
        """1/(1 - A) for a series A with zero constant term.

        Computed by the usual convolution recurrence, so one pass of
        quadratic cost rather than summing powers of A."""
        if self.coeffs[0]:
            raise ValueError("expected zero constant term")
        inv = Series(self.order, self.nvars)
        inv.coeffs[0] = MultiPoly.const(self.nvars, 1)
        for n in range(1, self.order + 1):
            acc = MultiPoly(self.nvars)
            for k in range(1, n + 1):
                if self.coeffs[k]:
                    acc = acc + self.coeffs[k] * inv.coeffs[n - k]
            inv.coeffs[n] = acc
        return inv

    def z_derivative_scaled(self) -> "Series":
        """z * d/dz, which just multiplies coefficient n by n."""
        return Series(self.order, self.nvars,
                      [c.scale(n) for n, c in enumerate(self.coeffs)])

    def t_derivative(self) -> "Series":
        out = Series(self.order, self.nvars)
        for n, c in enumerate(self.coeffs):
            t: Dict[Expo, object] = {}
            for e, v in c.terms.items():
                if e[0]:
                    t[(e[0] - 1,) + e[1:]] = _norm(v * e[0])
            out.coeffs[n] = MultiPoly(self.nvars, t)
        return out

    def specialize(self, var: int, value=1) -> "Series":
        return Series(self.order, self.nvars,
                      [c.specialize(var, value) for c in self.coeffs])

    def truncate(self, order: int) -> "Series":
        """Copy with a lower (or equal) truncation order."""
        if order > self.order:
            raise OrderExceeded("cannot extend a truncated series")
        return Series(order, self.nvars, self.coeffs[: order + 1])

    def __repr__(self) -> str:
        bits = [f"({c})*z^{n}" for n, c in enumerate(self.coeffs) if c]
        return " + ".join(bits) if bits else "0"


def mul_truncated(a: Series, b: Series) -> Series:
    """Product of two series truncated at their common order."""
    a._check(b)
    out = Series(a.order, a.nvars)
    # skip zero coefficients up front: mobile series are sparse in z early on
    nza = [n for n, c in enumerate(a.coeffs) if c]
    for n in nza:
        ca = a.coeffs[n]
        for m in range(a.order + 1 - n):
            cb = b.coeffs[m]
            if cb:
                out.coeffs[n + m] = out.coeffs[n + m] + ca * cb
    return out


def solve_fixed_point(phi: Callable[[Series], Series], order: int, nvars: int,
                      start: Series | None = None) -> Series:
    """Solve Y = phi(Y) by iteration from the zero series.

    phi must gain at least one order of z-accuracy per application (true
    of all the mobile equations, which carry a z prefactor), so the
    iteration stabilizes after at most order+1 steps; if it does not,
    NoContraction is raised rather than returning a wrong answer.
    """
    cur = start if start is not None else Series.zero(order, nvars)
    for _ in range(order + 2):
        nxt = phi(cur)
        if nxt.order != order or nxt.nvars != nvars:
            raise OrderMismatch("phi changed the series shape")
        if nxt == cur:
            return cur
        cur = nxt
    raise NoContraction(
        "fixed point not reached in %d iterations" % (order + 2))


def solve_fixed_point_system(phi, order: int, nvars: int, arity: int):
    """Vector version: phi maps a tuple of `arity` series to a new tuple."""
    cur = tuple(Series.zero(order, nvars) for _ in range(arity))
    for _ in range(order + 2):
        nxt = tuple(phi(cur))
        if nxt == cur:
            return cur
        cur = nxt
    raise NoContraction(
        "fixed point system not reached in %d iterations" % (order + 2))


def integrate_in_t(s: Series) -> Series:
    """Antiderivative in t with constant of integration zero.

    Sends t^v to t^(v+1)/(v+1) in every coefficient; the result has no
    t-free part, matching a generating function that counts at least one
    vertex with t.
    """
    out = Series(s.order, s.nvars)
    for n, c in enumerate(s.coeffs):
        t: Dict[Expo, object] = {}
        for e, v in c.terms.items():
            t[(e[0] + 1,) + e[1:]] = _norm(Fraction(v) / (e[0] + 1))
        out.coeffs[n] = MultiPoly(s.nvars, t)
    return out


def extract(s: Series, n: int, v: int | None = None,
            marks: Expo | None = None):
    """Coefficient access.

    extract(s, n)             -> MultiPoly coefficient of z^n
    extract(s, n, v)          -> coefficient of t^v z^n (a MultiPoly with t=0 slot)
    extract(s, n, v, marks)   -> the rational coefficient of t^v z^n * markers
    """
    if n < 0:
        raise ValueError("negative z exponent")
    if n > s.order:
        raise OrderExceeded(
            f"coefficient of z^{n} requested from a series of order {s.order}")
    c = s.coeffs[n]
    if v is None:
        return c
    c = c.coeff_of(0, v)
    if marks is None:
        return c
    expo = (0,) + tuple(marks)
    if len(expo) != s.nvars:
        raise ValueError("marker tuple has wrong length")
    return c.terms.get(expo, 0)
