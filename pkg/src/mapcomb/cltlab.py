"""Exact finite-size moments of the face-valency counts, and trend
diagnostics for their approach to a Gaussian.

All moments are computed from the exact joint distributions, so the only
approximation anywhere in this module is the final square root when a
standardized skewness is reported.  Squares of the skewness and the
excess kurtosis are exact rationals, and comparisons between sizes are
done on those.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import sqrt
from typing import Dict, List, Optional, Sequence, Tuple

from .degrees import DegreeSet
from .errors import DegenerateLaw, EmptyDistribution, ValidationError
from .mobiles import DistributionTable, joint_distribution

__all__ = [
    "MomentReport",
    "GaussianTrend",
    "exact_moments",
    "gaussian_diagnostics",
    "covariance",
]


@dataclass(frozen=True)
class MomentReport:
    degrees: DegreeSet
    n: int
    d: int
    total: int
    mean: Fraction
    variance: Fraction
    # central moments of orders three and four
    m3: Fraction
    m4: Fraction
    # second tracked valency, for covariance reports
    d2: Optional[int] = None
    mean2: Optional[Fraction] = None
    variance2: Optional[Fraction] = None
    covariance: Optional[Fraction] = None

    @property
    def skewness_squared(self) -> Optional[Fraction]:
        if self.variance == 0:
            return None
        return self.m3 * self.m3 / self.variance ** 3

    @property
    def skewness(self) -> Optional[float]:
        s2 = self.skewness_squared
        if s2 is None:
            return None
        return (-1 if self.m3 < 0 else 1) * sqrt(float(s2))

    @property
    def excess_kurtosis(self) -> Optional[Fraction]:
        if self.variance == 0:
            return None
        return self.m4 / self.variance ** 2 - 3

    @property
    def variance_rate(self) -> Fraction:
        return self.variance / self.n

    @property
    def covariance_rate(self) -> Optional[Fraction]:
        if self.covariance is None:
            return None
        return self.covariance / self.n


def _central_moments(weights: Dict[int, int]) -> Tuple[int, Fraction, Fraction,
                                                       Fraction, Fraction]:
    total = sum(weights.values())
    if total == 0:
        raise EmptyDistribution("no maps with this edge count")
    mean = Fraction(sum(v * w for v, w in weights.items()), total)
    m2 = m3 = m4 = Fraction(0)
    for v, w in weights.items():
        c = v - mean
        c2 = c * c
        m2 += w * c2
        m3 += w * c2 * c
        m4 += w * c2 * c2
    return total, mean, m2 / total, m3 / total, m4 / total


def exact_moments(dset: DegreeSet, d: int, n: int) -> MomentReport:
    """Moments of the number of valency-d faces among n-edge maps."""
    table = joint_distribution(dset, n, (d,))
    weights = table.counts_of(d)
    total, mean, m2, m3, m4 = _central_moments(weights)
    if m2 < 0:
        raise ArithmeticError("negative variance from exact arithmetic")
    return MomentReport(degrees=dset, n=n, d=d, total=total,
                        mean=mean, variance=m2, m3=m3, m4=m4)


def covariance(dset: DegreeSet, d1: int, d2: int, n: int) -> MomentReport:
    """Joint second-order report for a pair of tracked valencies."""
    if d1 == d2:
        rep = exact_moments(dset, d1, n)
        return MomentReport(degrees=dset, n=n, d=d1, total=rep.total,
                            mean=rep.mean, variance=rep.variance,
                            m3=rep.m3, m4=rep.m4, d2=d2, mean2=rep.mean,
                            variance2=rep.variance, covariance=rep.variance)
    table = joint_distribution(dset, n, (d1, d2))
    rows = table.rows
    total = sum(rows.values())
    if total == 0:
        raise EmptyDistribution("no maps with this edge count")
    s1 = sum(k[0] * w for k, w in rows.items())
    s2 = sum(k[1] * w for k, w in rows.items())
    mean1 = Fraction(s1, total)
    mean2 = Fraction(s2, total)
    var1 = var2 = cov = Fraction(0)
    m3 = m4 = Fraction(0)
    for (v1, v2), w in rows.items():
        c1 = v1 - mean1
        c2 = v2 - mean2
        var1 += w * c1 * c1
        var2 += w * c2 * c2
        cov += w * c1 * c2
        m3 += w * c1 ** 3
        m4 += w * c1 ** 4
    var1 /= total
    var2 /= total
    cov /= total
    m3 /= total
    m4 /= total
    # positive semidefiniteness of the 2x2 covariance matrix
    if var1 * var2 - cov * cov < 0:
        raise ArithmeticError("covariance matrix lost semidefiniteness")
    return MomentReport(degrees=dset, n=n, d=d1, total=total, mean=mean1,
                        variance=var1, m3=m3, m4=m4, d2=d2, mean2=mean2,
                        variance2=var2, covariance=cov)


@dataclass(frozen=True)
class GaussianTrend:
    degrees: DegreeSet
    d: int
    reports: Tuple[MomentReport, ...]
    skew_improved: bool
    kurtosis_improved: bool
    # relative drift of variance/n between the two largest sizes
    variance_rate_drift: Fraction


def gaussian_diagnostics(dset: DegreeSet, d: int,
                         n_list: Sequence[int]) -> GaussianTrend:
    """Standardized shape statistics over a ladder of sizes, with flags
    for whether they move the Gaussian way as n doubles."""
    ns = sorted(set(n_list))
    if len(ns) < 2:
        raise ValidationError("need at least two sizes to see a trend")
    reports = []
    for n in ns:
        rep = exact_moments(dset, d, n)
        if rep.variance == 0:
            raise DegenerateLaw(
                f"valency {d} count is deterministic at n = {n}")
        reports.append(rep)
    first, last = reports[0], reports[-1]
    skew_improved = last.skewness_squared < first.skewness_squared
    kurtosis_improved = abs(last.excess_kurtosis) < abs(first.excess_kurtosis)
    ra, rb = reports[-2].variance_rate, reports[-1].variance_rate
    drift = abs(rb - ra) / ra
    return GaussianTrend(degrees=dset, d=d, reports=tuple(reports),
                         skew_improved=skew_improved,
                         kurtosis_improved=kurtosis_improved,
                         variance_rate_drift=drift)
