"""Acceptance battery: thirteen gates covering exact counts, oracle
equivalence, singularity constants, moment laws, tightness sums, the
bridge-count cross-check, the toroidal pipeline and output determinism.

Each test prints one pass/fail line (run pytest with -s to see them
all) and then asserts, so a red gate is visible both ways.
"""

import json
import os
import subprocess
import sys
from fractions import Fraction
from math import comb, factorial
from time import perf_counter

from mpmath import mp

from mapcomb.asymptotics import (bipartite_singularity, fit_growth,
                                 general_singularity, handshake_total,
                                 mean_coefficients, tightness_report)
from mapcomb.cltlab import exact_moments
from mapcomb.degrees import parse_degree_set
from mapcomb.genus1 import enumerate_schemes, genus1_map_series
from mapcomb.mobiles import count_maps, count_table, joint_distribution
from mapcomb.motzkin import (bridge_count, bridge_firstdown_count,
                             bridge_plus_count, motzkin_dp_oracle)
from mapcomb.oracle import oracle_refined_rows
from mapcomb.series import extract

ALL = parse_degree_set("all")
EVEN = parse_degree_set("even")
QUAD = parse_degree_set("4")
TRI = parse_degree_set("3")
D24 = parse_degree_set("2,4")
D34 = parse_degree_set("3,4")

BATTERY = (ALL, EVEN, QUAD, TRI, D24, D34)

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def gate(num: int, name: str, ok: bool) -> None:
    print(f"criterion {num:02d} {'PASS' if ok else 'FAIL'}  {name}")
    assert ok, f"acceptance criterion {num} ({name}) failed"


def general_count(n: int) -> int:
    # closed form for unrestricted rooted planar maps by edges
    return 2 * 3 ** n * factorial(2 * n) // (factorial(n + 2) * factorial(n))


def test_criterion_01_unrestricted_counts():
    t0 = perf_counter()
    table = count_table(ALL, 40)
    elapsed = perf_counter() - t0
    exact = all(table[n] == general_count(n) for n in range(1, 41))
    gate(1, "closed-form counts n <= 40", exact and elapsed < 1.0)


def test_criterion_02_planar_oracle_equivalence():
    t0 = perf_counter()
    ok = True
    for dset in BATTERY:
        for n in range(1, 6):
            brute = sum(oracle_refined_rows(dset, n, 0).values())
            ok = ok and brute == count_maps(dset, n)
    elapsed = perf_counter() - t0
    gate(2, "planar oracle equivalence n <= 5", ok and elapsed < 120.0)


def test_criterion_03_quadrangulation_correspondence():
    ok = all(count_maps(QUAD, 2 * n) == general_count(n)
             for n in range(1, 7))
    gate(3, "quadrangulations vs unrestricted counts", ok)


def test_criterion_04_general_singularity_and_growth():
    t0 = perf_counter()
    sing = general_singularity(ALL)
    fit = fit_growth(count_table(ALL, 300))
    elapsed = perf_counter() - t0
    with mp.workprec(96):
        rho_ok = abs(sing.rho - mp.mpf(1) / 12) < mp.mpf("1e-8")
        c_ref = 2 / mp.sqrt(mp.pi)
        c_ok = abs(fit.c_fit - c_ref) / c_ref < mp.mpf("0.05")
    gate(4, "rho = 1/12 and fitted amplitude",
         bool(rho_ok and c_ok) and elapsed < 60.0)


def test_criterion_05_bipartite_singularity():
    quad = bipartite_singularity(QUAD)
    even = bipartite_singularity(EVEN)
    with mp.workprec(160):
        r_ok = abs(quad.r0 - 1 / mp.sqrt(3)) < mp.mpf("1e-10")
        rho_ok = abs(quad.rho - 1 / (2 * mp.sqrt(3))) < mp.mpf("1e-10")
        # independent branch-equation check for the full even tail
        x = +even.r0
        h = mp.mpf(0)
        i, xp = 1, x
        while i < 400:
            h += (i - 1) * comb(2 * i - 1, i) * xp
            xp *= x
            i += 1
        even_ok = even.r0 < 0.25 and abs(h - 1) < mp.mpf("1e-12")
    gate(5, "bipartite branch points", bool(r_ok and rho_ok and even_ok))


def test_criterion_06_periodicity():
    table = count_table(QUAD, 41)
    odd_zero = all(table[n] == 0 for n in range(1, 42, 2))
    even_live = all(table[n] > 0 for n in range(2, 42, 2))
    gate(6, "quadrangulation parity lattice", odd_zero and even_live)


def test_criterion_07_handshake():
    ok = True
    n = 4
    for dset in BATTERY:
        tracked = dset.members(2 * n)
        table = joint_distribution(dset, n, tracked)
        for key in table.rows:
            ok = ok and sum(d * k for d, k in zip(tracked, key)) == 2 * n
    with mp.workprec(96):
        for dset in BATTERY:
            total = handshake_total(dset)
            ok = ok and abs(total - 2) < mp.mpf("1e-8")
    gate(7, "face-valency handshake", ok)


def test_criterion_08_mean_law():
    ok = True
    with mp.workprec(96):
        for dset, d in ((ALL, 3), (EVEN, 2), (QUAD, 4)):
            mu = mean_coefficients(dset, [d])[d]
            devs = []
            for n in (10, 20, 40, 80):
                m = exact_moments(dset, d, n)
                mean = mp.mpf(m.mean.numerator) / m.mean.denominator
                devs.append(abs(mean - mu * n))
            # an O(1) remainder: small throughout and not growing
            ok = ok and max(devs) < 1 and \
                devs[-1] <= devs[0] * mp.mpf("1.05")
    for n in (10, 20, 40, 80):
        ok = ok and exact_moments(QUAD, 4, n).mean == Fraction(n, 2)
    gate(8, "linear mean law with bounded remainder", ok)


def test_criterion_09_gaussian_trend():
    t0 = perf_counter()
    ok = True
    for dset, d in ((ALL, 3), (EVEN, 2)):
        r10 = exact_moments(dset, d, 10)
        r40 = exact_moments(dset, d, 40)
        r80 = exact_moments(dset, d, 80)
        ok = ok and abs(r40.skewness) < abs(r10.skewness)
        ok = ok and abs(r40.excess_kurtosis) < abs(r10.excess_kurtosis)
        va, vb = r40.variance_rate, r80.variance_rate
        ok = ok and abs(vb - va) / va < Fraction(1, 10)
    elapsed = perf_counter() - t0
    gate(9, "standardized moments move the Gaussian way",
         ok and elapsed < 300.0)


def test_criterion_10_tightness_sums():
    report = tightness_report(EVEN, cutoff=200)
    with mp.workprec(96):
        sums_ok = all(abs(fam.gap) < mp.mpf("1e-10")
                      for fam in report.sums.values())
    decays_ok = all(fam.decreasing for fam in report.decays.values())
    gate(10, "control sums converge and terms decay",
         len(report.sums) == 3 and sums_ok and decays_ok)


def test_criterion_11_bridge_counts():
    ok = True
    for total in range(0, 25):
        for m in range(0, total // 2 + 1):
            l = total - 2 * m
            ok = ok and bridge_count(l, m) == motzkin_dp_oracle(l, m)
            ok = ok and bridge_plus_count(l, m) == \
                motzkin_dp_oracle(l, m, "plus")
            first = bridge_firstdown_count(l, m)
            ok = ok and first == motzkin_dp_oracle(l, m, "firstdown")
            if (l, m) != (0, 0):
                # the single-quotient form of the same count
                num = (l + m) * factorial(l + 2 * m - 1)
                den = factorial(l) * factorial(m) ** 2
                ok = ok and num % den == 0 and first == num // den
    gate(11, "bridge closed forms vs step DP", ok)


def test_criterion_12_toroidal_oracle_equivalence():
    t0 = perf_counter()
    schemes_ok = all(
        sum(s.degree(v) - 2 for v in range(len(s.cycles))) == 2
        for s in enumerate_schemes(1))
    ok = schemes_ok
    for dset in (EVEN, QUAD, D24):
        series = genus1_map_series(dset, 5)
        for n in (3, 4, 5):
            mine = {e[0]: v for e, v in extract(series, n).terms.items()}
            brute = {k[0]: v for k, v in
                     oracle_refined_rows(dset, n, 1, (),
                                         bipartite=True).items()}
            ok = ok and mine == brute
    elapsed = perf_counter() - t0
    gate(12, "toroidal counts match the oracle", ok and elapsed < 600.0)


def test_criterion_13_deterministic_output():
    commands = (
        ("count", "--degrees", "all", "--max-edges", "8"),
        ("dist", "--degrees", "even", "--max-edges", "5",
         "--track", "2,4"),
        ("moments", "--degrees", "all", "--track", "3", "--max-edges", "6"),
        ("sing", "--degrees", "4"),
        ("schemes",),
        ("genus-count", "--degrees", "even", "--max-edges", "4"),
    )
    ok = True
    for argv in commands:
        outs = []
        for seed, threads in (("0", "1"), ("424242", "4")):
            env = dict(os.environ, PYTHONHASHSEED=seed,
                       OMP_NUM_THREADS=threads)
            p = subprocess.run([sys.executable, "-m", "mapcomb.cli", *argv],
                               capture_output=True, env=env, cwd=REPO)
            ok = ok and p.returncode == 0
            outs.append(p.stdout)
        ok = ok and outs[0] == outs[1] and len(outs[0]) > 0
    gate(13, "byte-identical reports across runs", ok)
