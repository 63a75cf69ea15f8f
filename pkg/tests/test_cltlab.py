"""Exact moment reports and Gaussian trend diagnostics."""

from fractions import Fraction

import pytest

from mapcomb.asymptotics import mean_coefficients
from mapcomb.cltlab import covariance, exact_moments, gaussian_diagnostics
from mapcomb.degrees import DegreeSet
from mapcomb.errors import DegenerateLaw, EmptyDistribution, ValidationError

ALL = DegreeSet(tail="all")
EVEN = DegreeSet(tail="even")
QUAD = DegreeSet(finite=(4,))
TRI = DegreeSet(finite=(3,))


def test_quadrangular_count_is_deterministic():
    rep = exact_moments(QUAD, 4, 8)
    assert rep.mean == 4          # every face is a square, f = n/2
    assert rep.variance == 0
    assert rep.skewness is None
    assert rep.excess_kurtosis is None


def test_smallest_even_maps():
    rep = exact_moments(EVEN, 2, 2)
    # three maps with two edges: two without a digon face, one with two
    assert rep.total == 3
    assert rep.mean == Fraction(2, 3)


def test_one_edge_maps():
    rep = exact_moments(ALL, 1, 1)
    # loop (two monogon faces) and link (none)
    assert rep.total == 2
    assert rep.mean == 1
    assert rep.variance == 1


def test_monogon_digon_covariance():
    rep = covariance(ALL, 1, 2, 1)
    assert rep.covariance == Fraction(-1, 2)
    assert rep.mean == 1
    assert rep.mean2 == Fraction(1, 2)


def test_diagonal_covariance_is_variance():
    pair = covariance(EVEN, 2, 2, 6)
    single = exact_moments(EVEN, 2, 6)
    assert pair.covariance == single.variance
    assert pair.mean2 == single.mean


def test_covariance_matrix_is_psd():
    rep = covariance(EVEN, 2, 4, 20)
    det = rep.variance * rep.variance2 - rep.covariance ** 2
    assert det >= 0
    assert rep.covariance_rate == rep.covariance / 20


def test_empty_distribution_raised():
    # triangulations only exist at multiples of three edges
    with pytest.raises(EmptyDistribution):
        exact_moments(TRI, 3, 4)


def test_degenerate_law_raised():
    with pytest.raises(DegenerateLaw):
        gaussian_diagnostics(QUAD, 4, [4, 8])


def test_trend_needs_two_sizes():
    with pytest.raises(ValidationError):
        gaussian_diagnostics(ALL, 3, [10])


def test_triangle_count_skew_shrinks():
    g = gaussian_diagnostics(ALL, 3, [10, 20, 40])
    assert g.skew_improved
    s = [r.skewness_squared for r in g.reports]
    assert s[2] < s[1] < s[0]


def test_digon_count_kurtosis_shrinks():
    g = gaussian_diagnostics(EVEN, 2, [10, 20, 40])
    assert g.kurtosis_improved
    k = [abs(r.excess_kurtosis) for r in g.reports]
    assert k[2] < k[1] < k[0]
    assert g.variance_rate_drift < Fraction(1, 10)


def test_mean_approaches_linear_growth():
    mu = float(mean_coefficients(ALL, (3,))[3])
    small = exact_moments(ALL, 3, 10)
    large = exact_moments(ALL, 3, 40)
    err_small = abs(float(small.mean) / 10 - mu)
    err_large = abs(float(large.mean) / 40 - mu)
    assert err_large < err_small


def test_reports_are_deterministic():
    a = exact_moments(EVEN, 2, 12)
    b = exact_moments(EVEN, 2, 12)
    assert (a.mean, a.variance, a.m3, a.m4) == (b.mean, b.variance, b.m3, b.m4)
