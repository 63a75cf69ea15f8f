from fractions import Fraction

import pytest

from mapcomb.motzkin import (
    bridge_count,
    bridge_firstdown_count,
    bridge_plus_count,
    excursion_series,
    motzkin_dp_oracle,
)


def test_small_values():
    assert bridge_count(1, 1) == 6
    assert bridge_plus_count(1, 0) == 2
    assert bridge_plus_count(0, 1) == 3
    assert bridge_firstdown_count(1, 1) == 4
    assert bridge_firstdown_count(0, 0) == 0
    assert bridge_count(0, 0) == 1
    assert bridge_plus_count(0, 0) == 1


def test_negative_indices_count_zero():
    assert bridge_count(-1, 2) == 0
    assert bridge_plus_count(3, -1) == 0
    assert bridge_firstdown_count(0, 1) == bridge_plus_count(0, 0)


def test_closed_forms_match_dp():
    # exhaustive comparison for l + 2m <= 24
    for l in range(25):
        for m in range((24 - l) // 2 + 1):
            assert bridge_count(l, m) == motzkin_dp_oracle(l, m, "bridge")
            assert bridge_plus_count(l, m) == motzkin_dp_oracle(l, m, "plus")
            assert bridge_firstdown_count(l, m) == motzkin_dp_oracle(l, m, "firstdown")


def test_firstdown_both_decompositions():
    # first-step split equals the weighted form (l+m)/(l+2m) * bridges
    for l in range(12):
        for m in range(12):
            if l + m == 0:
                continue
            weighted = Fraction(l + m, l + 2 * m) * bridge_count(l, m)
            assert bridge_firstdown_count(l, m) == weighted


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        motzkin_dp_oracle(1, 1, "excursion")


def test_generating_identities():
    # E = 1 + tE + uE^2 termwise, and B, Bplus, Bbar against their
    # defining identities B = 1 + (t + 2u E) B, Bplus = E B,
    # Bbar = B (t + u E), expanded to total degree 12
    deg = 12
    n = deg + 1
    e = excursion_series(deg)
    assert e[0][0] == 1
    assert e[1][0] == 1 and e[0][1] == 1  # one flat step / up-down

    def mul(a, b):
        c = [[Fraction(0)] * n for _ in range(n)]
        for i1 in range(n):
            for j1 in range(n):
                if a[i1][j1]:
                    for i2 in range(n - i1):
                        for j2 in range(n - j1):
                            if b[i2][j2]:
                                c[i1 + i2][j1 + j2] += a[i1][j1] * b[i2][j2]
        return c

    def shift(a, di, dj):
        c = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n - di):
            for j in range(n - dj):
                c[i + di][j + dj] = a[i][j]
        return c

    b = [[Fraction(bridge_count(i, j)) for j in range(n)] for i in range(n)]
    bp = [[Fraction(bridge_plus_count(i, j)) for j in range(n)] for i in range(n)]
    bb = [[Fraction(bridge_firstdown_count(i, j)) for j in range(n)] for i in range(n)]

    # compare only inside the triangle i + 2j <= deg, where truncation
    # of the products cannot interfere
    def agree(x, y):
        for i in range(n):
            for j in range((deg - i) // 2 + 1):
                assert x[i][j] == y[i][j], (i, j)

    # B = 1 + t B + 2u E B
    tB = shift(b, 1, 0)
    uEB = shift(mul(e, b), 0, 1)
    rhs = [[(Fraction(1) if (i, j) == (0, 0) else Fraction(0))
            + tB[i][j] + 2 * uEB[i][j] for j in range(n)] for i in range(n)]
    agree(b, rhs)

    agree(bp, mul(e, b))

    # Bbar = B (t + u E)
    t_plus_uE = shift([[Fraction(1) if (i, j) == (0, 0) else Fraction(0)
                        for j in range(n)] for i in range(n)], 1, 0)
    uE = shift(e, 0, 1)
    t_plus_uE = [[t_plus_uE[i][j] + uE[i][j] for j in range(n)] for i in range(n)]
    agree(bb, mul(b, t_plus_uE))
