"""Degree sets: which face valencies a map family may use.

A degree set is one of
    all                every valency 1, 2, 3, ...
    even               every even valency 2, 4, 6, ...
    finite list        e.g. {4} or {3, 4}
    list + even        a finite list together with all even valencies

written in the command-line grammar as "all", "even", "3,4" or "3+even".
Sets contained in {1, 2} are rejected outright: the matching map
families are paths and cycles and the machinery here does not apply.
"""

from __future__ import annotations

from math import gcd
from typing import Iterator, Tuple

from .errors import ParseError, UnsupportedDegreeSet

__all__ = ["DegreeSet", "parse_degree_set"]


class DegreeSet:
    """An immutable set of allowed face valencies."""

    __slots__ = ("finite", "tail")

    def __init__(self, finite: Tuple[int, ...] = (), tail: str = "none"):
        if tail not in ("none", "even", "all"):
            raise ValueError("tail must be 'none', 'even' or 'all'")
        for v in finite:
            if v < 1:
                raise ParseError(f"valency {v} out of range")
        if tail == "all":
            finite = ()
        elif tail == "even":
            # members of the even tail are implicit
            finite = tuple(v for v in finite if v % 2 == 1)
        self.finite = tuple(sorted(set(finite)))
        self.tail = tail
        if not self._supported():
            raise UnsupportedDegreeSet(
                f"degree set {self.spec_string()!r} lies inside {{1, 2}}")

    def _supported(self) -> bool:
        if self.tail != "none":
            return True
        return any(v > 2 for v in self.finite)

    # -- membership ------------------------------------------------------

    def __contains__(self, v: int) -> bool:
        if v < 1:
            return False
        if self.tail == "all":
            return True
        if self.tail == "even" and v % 2 == 0:
            return True
        return v in self.finite

    def members(self, bound: int) -> list[int]:
        """All members up to and including `bound`, ascending."""
        out = set(v for v in self.finite if v <= bound)
        if self.tail == "all":
            out.update(range(1, bound + 1))
        elif self.tail == "even":
            out.update(range(2, bound + 1, 2))
        return sorted(out)

    def is_finite(self) -> bool:
        return self.tail == "none"

    def all_even(self) -> bool:
        """True when every allowed valency is even (bipartite territory)."""
        if self.tail == "all":
            return False
        return all(v % 2 == 0 for v in self.finite)

    def period(self) -> int:
        """The period d: counts vanish unless n is a multiple of d.

        For all-even sets this is gcd{i : 2i allowed}; any odd valency
        (or the full set) forces d = 1.
        """
        if not self.all_even():
            return 1
        if self.tail == "even":
            return 1  # gcd over all halves 1, 2, 3, ... is 1
        return gcd(*(v // 2 for v in self.finite))

    def spec_string(self) -> str:
        base = ",".join(str(v) for v in self.finite)
        if self.tail == "all":
            return "all"
        if self.tail == "even":
            return base + "+even" if base else "even"
        return base

    def key(self):
        return (self.finite, self.tail)

    def __eq__(self, other):
        return isinstance(other, DegreeSet) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"DegreeSet({self.spec_string()!r})"


def parse_degree_set(text: str) -> DegreeSet:
    """Parse the grammar described in the module docstring."""
    s = text.strip().lower()
    if not s:
        raise ParseError("empty degree set")
    if s == "all":
        return DegreeSet(tail="all")
    if s == "even":
        return DegreeSet(tail="even")
    tail = "none"
    if s.endswith("+even"):
        tail = "even"
        s = s[: -len("+even")]
    parts = [p.strip() for p in s.split(",")]
    vals = []
    for p in parts:
        if not p:
            raise ParseError(f"empty entry in degree list: {text!r}")
        try:
            v = int(p)
        except ValueError:
            raise ParseError(f"bad valency {p!r} in {text!r}") from None
        if v < 1:
            raise ParseError(f"valency must be >= 1, got {v}")
        vals.append(v)
    return DegreeSet(tuple(vals), tail)
