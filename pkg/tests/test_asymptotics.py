"""Singularity solvers, growth fits, means, tightness diagnostics."""

import mpmath as mp
import pytest

from mapcomb.degrees import parse_degree_set
from mapcomb.errors import (
    InsufficientData,
    UnsupportedDegreeSet,
    ValidationError,
)
from mapcomb.mobiles import count_table, joint_distribution
from mapcomb.asymptotics import (
    bipartite_singularity,
    fit_growth,
    general_singularity,
    handshake_total,
    mean_coefficients,
    tightness_report,
)

ALL = parse_degree_set("all")
EVEN = parse_degree_set("even")
QUAD = parse_degree_set("4")
TRI = parse_degree_set("3")


def test_quadrangular_closed_forms():
    bp = bipartite_singularity(QUAD)
    assert abs(bp.r0 - 1 / mp.sqrt(3)) < 1e-10
    assert abs(bp.rho - 1 / (2 * mp.sqrt(3))) < 1e-10
    assert abs(bp.residual) < 1e-12


def test_all_even_branch_point():
    bp = bipartite_singularity(EVEN)
    assert 0 < bp.r0 < mp.mpf(1) / 4
    assert abs(bp.residual) < 1e-12
    # this root and radius are classical for the all-even family
    assert abs(bp.r0 - mp.mpf(3) / 16) < 1e-20
    assert abs(bp.rho - mp.mpf(1) / 8) < 1e-20


def test_bipartite_rejects_digons_only():
    with pytest.raises(UnsupportedDegreeSet):
        bipartite_singularity(parse_degree_set("2"))


def test_bipartite_rejects_odd():
    with pytest.raises(UnsupportedDegreeSet):
        bipartite_singularity(TRI)


def test_general_rejects_all_even():
    with pytest.raises(UnsupportedDegreeSet):
        general_singularity(EVEN)
    with pytest.raises(UnsupportedDegreeSet):
        general_singularity(QUAD)


def test_unrestricted_radius():
    gs = general_singularity(ALL)
    assert abs(gs.rho - mp.mpf(1) / 12) < 1e-8
    assert gs.residual_char < 1e-10
    assert gs.residual_fixed_point < 1e-10
    assert gs.region_margin > 0
    assert gs.region_margin_alt > 0
    # the fold lands on known rationals
    with mp.workprec(200):
        assert abs(gs.l0 - mp.mpf(1) / 6) < 1e-30
        assert abs(gs.r0 - mp.mpf(1) / 9) < 1e-30


def test_triangular_fold_closed_form():
    gs = general_singularity(TRI)
    # eliminating the system by hand gives w^3 = 4 z^3 at the fold
    assert abs(gs.rho - 1 / (mp.sqrt(3) * mp.mpf(2) ** (mp.mpf(2) / 3))) < 1e-12
    assert abs(gs.r0 - mp.mpf(2) ** (-mp.mpf(2) / 3)) < 1e-12
    assert gs.residual_char < 1e-10
    # finite kernels are polynomials; this fold sits outside the region
    assert gs.region_margin < 0


def test_triangular_mean_is_deterministic():
    # every face has valency 3, so the face count is exactly 2n/3 and
    # the derivative-quotient formula must land on 2/3 on the nose
    mu = mean_coefficients(TRI, [3])[3]
    with mp.workprec(200):
        assert abs(mu - mp.mpf(2) / 3) < 1e-30
    t = joint_distribution(TRI, 12, (3,))
    assert t.mean(3) == 8


def test_mixed_mean_drift_is_bounded():
    dset = parse_degree_set("3,4")
    mus = mean_coefficients(dset, [3, 4])
    drifts = []
    for n in (12, 24, 36):
        t = joint_distribution(dset, n, (3, 4))
        drifts.append(abs(float(t.mean(3)) - float(mus[3]) * n))
    assert max(drifts) < 1.0
    assert drifts[2] <= drifts[0]


def test_mean_examples():
    mu = mean_coefficients(QUAD, [4, 2])
    assert abs(mu[4] - mp.mpf(1) / 2) < 1e-12
    assert mu[2] == 0
    mu_even = mean_coefficients(EVEN, [2])
    assert abs(mu_even[2] - mp.mpf(1) / 8) < 1e-20
    mu_all = mean_coefficients(ALL, [1, 2, 3])
    assert all(v > 0 for v in mu_all.values())


@pytest.mark.parametrize("spec", ["all", "even", "4", "3", "2,4", "3,4"])
def test_handshake(spec):
    total = handshake_total(parse_degree_set(spec))
    assert abs(total - 2) < 1e-8


@pytest.mark.parametrize("spec", ["all", "even", "4", "3", "2,4", "3,4"])
def test_solver_fit_consistency(spec):
    dset = parse_degree_set(spec)
    fit = fit_growth(count_table(dset, 300))
    if all(d % 2 == 0 for d in dset.members(60)) and spec != "all":
        rho = bipartite_singularity(dset).rho
    else:
        rho = general_singularity(dset).rho
    assert abs(fit.rho_fit - rho) / rho < 1e-4
    assert fit.c_fit > 0
    assert fit.exponent == __import__("fractions").Fraction(-5, 2)


def test_unrestricted_amplitude():
    fit = fit_growth(count_table(ALL, 300))
    target = 2 / mp.sqrt(mp.pi)
    assert abs(fit.c_fit - target) / target < 0.05
    assert abs(fit.rho_fit - mp.mpf(1) / 12) / (mp.mpf(1) / 12) < 1e-4


def test_quadrangular_fit_runs_on_even_lattice():
    fit = fit_growth(count_table(QUAD, 300))
    assert fit.period == 2
    rho = bipartite_singularity(QUAD).rho
    assert abs(fit.rho_fit - rho) / rho < 1e-4


def test_fit_insufficient_data():
    with pytest.raises(InsufficientData):
        fit_growth(count_table(TRI, 60))     # only 20 lattice points
    with pytest.raises(ValidationError):
        fit_growth(count_table(ALL, 50), period=7)


def test_tightness_all_even():
    rep = tightness_report(EVEN, cutoff=200)
    assert rep.sums["marker"].gap < 1e-10
    assert rep.sums["marker_pair_sq"].gap < 1e-10
    assert rep.sums["marker_second"].partial_full == 0
    for fam in rep.decays.values():
        assert fam.decreasing
        assert fam.last_term < 1e-10


def test_tightness_finite_is_trivial():
    rep = tightness_report(QUAD, cutoff=16)
    # one valency only: the full sum is that single term
    assert rep.sums["marker"].partial_full == rep.sums["marker"].partial_half
    assert rep.sums["marker"].gap == 0


def test_tightness_general_route():
    rep = tightness_report(ALL, cutoff=64)
    assert rep.sums["marker"].partial_full > 0
    assert mp.isfinite(rep.sums["marker_pair_sq"].partial_full)
    assert rep.decays["edge_marker"].decreasing
