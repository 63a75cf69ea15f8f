"""mapcomb: exact enumeration and limit laws for rooted maps with
restricted face valencies, via labelled trees with legs (mobiles).

The headline entry points are re-exported here; each submodule carries
the full surface.

    degrees      face-valency set expressions
    series       truncated multivariate series, exact coefficients
    fastseries   packed big-integer engine for large orders
    motzkin      bridge counts weighting black corners
    mobiles      planar map series, counts and joint laws
    oracle       brute-force rotation-system cross-checks
    asymptotics  singularities, growth fits, tightness sums
    cltlab       exact moments and Gaussian-trend diagnostics
    genus1       bipartite toroidal maps through scheme decomposition
    cli          machine-readable command line front end
"""

__version__ = "0.1.0"

from .asymptotics import (bipartite_singularity, fit_growth,
                          general_singularity, handshake_total,
                          mean_coefficients, tightness_report)
from .cltlab import covariance, exact_moments, gaussian_diagnostics
from .degrees import DegreeSet, parse_degree_set
from .genus1 import enumerate_schemes, genus1_count, genus1_map_series
from .mobiles import (bipartite_map_series, count_maps, count_table,
                      general_map_series, joint_distribution, map_series)
from .motzkin import (bridge_count, bridge_firstdown_count,
                      bridge_plus_count)
from .oracle import one_faced_maps, oracle_refined_rows, rooted_map_count

__all__ = [
    "__version__",
    "DegreeSet", "parse_degree_set",
    "bridge_count", "bridge_plus_count", "bridge_firstdown_count",
    "map_series", "bipartite_map_series", "general_map_series",
    "count_maps", "count_table", "joint_distribution",
    "rooted_map_count", "oracle_refined_rows", "one_faced_maps",
    "bipartite_singularity", "general_singularity", "fit_growth",
    "mean_coefficients", "handshake_total", "tightness_report",
    "exact_moments", "covariance", "gaussian_diagnostics",
    "enumerate_schemes", "genus1_map_series", "genus1_count",
]
