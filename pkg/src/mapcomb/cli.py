"""Command line front end.

Every subcommand prints one machine-readable report to stdout, JSON by
default or CSV on request.  Exact integers and rationals travel as
decimal strings so no count ever passes through a binary float, and
approximate values are rendered at the working precision; the "fields"
object tags each payload entry as exact or approx.

Exit codes: 0 success, 2 malformed request, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from mpmath import mp

from . import __version__
from .asymptotics import (bipartite_singularity, fit_growth,
                          general_singularity, tightness_report)
from .cltlab import covariance, exact_moments, gaussian_diagnostics
from .degrees import DegreeSet, parse_degree_set
from .errors import (DegenerateLaw, NumericError, ValidationError)
from .genus1 import enumerate_schemes, genus1_count
from .mobiles import count_table, joint_distribution
from .oracle import oracle_refined_rows

__all__ = ["RunConfig", "run_command", "main"]

SCHEMA = "mapcomb/1"
DEFAULT_ORDER = 64
DEFAULT_PRECISION = 128
DEFAULT_TOL = 1e-12

# per-command default for the size knob, where 64 would be either
# wasteful or unaffordable
_SIZE_DEFAULTS = {
    "clt": 40,
    "fit": 200,
    "tightness": 200,
    "oracle": 5,
    "genus-count": 8,
}


@dataclass(frozen=True)
class RunConfig:
    """One validated request: everything a handler needs to run."""

    command: str
    degrees: Optional[DegreeSet]
    size: int
    tracked: Tuple[int, ...]
    genus: int
    precision: int
    tol: float
    fmt: str
    oracle_budget: int


@dataclass
class _Report:
    """Payload under assembly: scalars plus homogeneous rows, with an
    exact/approx tag for every field name."""

    d: Optional[int] = None
    scalars: Dict[str, object] = dc_field(default_factory=dict)
    rows: List[Dict[str, object]] = dc_field(default_factory=list)
    fields: Dict[str, str] = dc_field(default_factory=dict)

    def put(self, key: str, value, kind: str) -> None:
        self.scalars[key] = value
        self.fields[key] = kind

    def row_schema(self, **kinds: str) -> None:
        self.fields.update(kinds)


# --- value formatting -----------------------------------------------------

def _exact_int(v) -> str:
    return str(int(v))


def _exact_fraction(f: Fraction) -> str:
    f = Fraction(f)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def _approx(x, precision: int) -> str:
    """Decimal rendering of an approximate value at the working
    precision; same value and precision give the same bytes."""
    with mp.workprec(precision):
        return mp.nstr(mp.mpf(x), int(mp.dps), strip_zeros=True)


def _approx_sqrt_signed(f: Fraction, sign: int, precision: int) -> str:
    with mp.workprec(precision):
        val = mp.sqrt(mp.mpf(f.numerator) / f.denominator)
        return mp.nstr(sign * val, int(mp.dps), strip_zeros=True)


# --- handlers -------------------------------------------------------------

def _need_degrees(cfg: RunConfig) -> DegreeSet:
    if cfg.degrees is None:
        raise ValidationError(f"{cfg.command} requires --degrees")
    return cfg.degrees


def _need_one_tracked(cfg: RunConfig) -> int:
    if len(cfg.tracked) != 1:
        raise ValidationError(
            f"{cfg.command} requires --track with exactly one valency")
    return cfg.tracked[0]


def _cmd_count(cfg: RunConfig) -> _Report:
    dset = _need_degrees(cfg)
    table = count_table(dset, cfg.size)
    rep = _Report()
    rep.rows = [{"n": n, "value": _exact_int(table[n])}
                for n in range(1, cfg.size + 1)]
    rep.row_schema(n="exact", value="exact")
    return rep


def _cmd_dist(cfg: RunConfig) -> _Report:
    dset = _need_degrees(cfg)
    if not cfg.tracked:
        raise ValidationError("dist requires --track")
    table = joint_distribution(dset, cfg.size, cfg.tracked)
    rep = _Report(d=cfg.tracked[0] if len(cfg.tracked) == 1 else None)
    rep.put("tracked", list(cfg.tracked), "exact")
    rep.put("total", _exact_int(table.total()), "exact")
    rep.rows = [{"counts": list(k), "value": _exact_int(w)}
                for k, w in sorted(table.items())]
    rep.row_schema(counts="exact", value="exact")
    return rep


def _moment_payload(rep: _Report, m, precision: int) -> None:
    rep.put("total", _exact_int(m.total), "exact")
    rep.put("mean", _exact_fraction(m.mean), "exact")
    rep.put("variance", _exact_fraction(m.variance), "exact")
    rep.put("m3", _exact_fraction(m.m3), "exact")
    rep.put("m4", _exact_fraction(m.m4), "exact")
    rep.put("variance_rate", _exact_fraction(m.variance_rate), "exact")
    s2 = m.skewness_squared
    if s2 is not None:
        rep.put("skewness",
                _approx_sqrt_signed(s2, -1 if m.m3 < 0 else 1, precision),
                "approx")
        rep.put("excess_kurtosis", _exact_fraction(m.excess_kurtosis),
                "exact")


def _cmd_moments(cfg: RunConfig) -> _Report:
    dset = _need_degrees(cfg)
    if len(cfg.tracked) == 1:
        m = exact_moments(dset, cfg.tracked[0], cfg.size)
    elif len(cfg.tracked) == 2:
        m = covariance(dset, cfg.tracked[0], cfg.tracked[1], cfg.size)
    else:
        raise ValidationError("moments requires --track with one or two "
                              "valencies")
    rep = _Report(d=cfg.tracked[0])
    rep.put("n", m.n, "exact")
    _moment_payload(rep, m, cfg.precision)
    if m.d2 is not None:
        rep.put("d2", m.d2, "exact")
        rep.put("mean2", _exact_fraction(m.mean2), "exact")
        rep.put("variance2", _exact_fraction(m.variance2), "exact")
        rep.put("covariance", _exact_fraction(m.covariance), "exact")
        rep.put("covariance_rate", _exact_fraction(m.covariance_rate),
                "exact")
    return rep


def _cmd_clt(cfg: RunConfig) -> _Report:
    dset = _need_degrees(cfg)
    d = _need_one_tracked(cfg)
    ladder = sorted({cfg.size // 8, cfg.size // 4, cfg.size // 2, cfg.size})
    ladder = [n for n in ladder if n >= 2]
    trend = gaussian_diagnostics(dset, d, ladder)
    rep = _Report(d=d)
    for m in trend.reports:
        row = {"n": m.n,
               "mean": _exact_fraction(m.mean),
               "variance_rate": _exact_fraction(m.variance_rate),
               "excess_kurtosis": _exact_fraction(m.excess_kurtosis)}
        s2 = m.skewness_squared
        row["skewness"] = _approx_sqrt_signed(
            s2, -1 if m.m3 < 0 else 1, cfg.precision)
        rep.rows.append(row)
    rep.row_schema(n="exact", mean="exact", variance_rate="exact",
                   excess_kurtosis="exact", skewness="approx")
    rep.put("skew_improved", trend.skew_improved, "flag")
    rep.put("kurtosis_improved", trend.kurtosis_improved, "flag")
    rep.put("variance_rate_drift",
            _exact_fraction(trend.variance_rate_drift), "exact")
    return rep


def _cmd_sing(cfg: RunConfig) -> _Report:
    dset = _need_degrees(cfg)
    rep = _Report()
    if dset.all_even():
        s = bipartite_singularity(dset, cfg.precision)
        rep.put("R0", _approx(s.r0, cfg.precision), "approx")
        rep.put("rho", _approx(s.rho, cfg.precision), "approx")
        rep.put("residual", _approx(s.residual, cfg.precision), "approx")
        worst = abs(s.residual)
    else:
        s = general_singularity(dset, cfg.precision)
        rep.put("L0", _approx(s.l0, cfg.precision), "approx")
        rep.put("R0", _approx(s.r0, cfg.precision), "approx")
        rep.put("rho", _approx(s.rho, cfg.precision), "approx")
        rep.put("residual_fixed_point",
                _approx(s.residual_fixed_point, cfg.precision), "approx")
        rep.put("residual_char",
                _approx(s.residual_char, cfg.precision), "approx")
        rep.put("region_margin",
                _approx(s.region_margin, cfg.precision), "approx")
        rep.put("tail_ratio", _approx(s.tail_ratio, cfg.precision), "approx")
        worst = max(abs(s.residual_fixed_point), abs(s.residual_char))
    if not worst < cfg.tol:
        raise NumericError(
            f"singularity residual {_approx(worst, 64)} is above the "
            f"tolerance {cfg.tol}")
    return rep


def _cmd_fit(cfg: RunConfig) -> _Report:
    dset = _need_degrees(cfg)
    counts = count_table(dset, cfg.size)
    f = fit_growth(counts, precision=cfg.precision)
    rep = _Report()
    rep.put("rho_fit", _approx(f.rho_fit, cfg.precision), "approx")
    rep.put("c_fit", _approx(f.c_fit, cfg.precision), "approx")
    rep.put("exponent", _exact_fraction(f.exponent), "exact")
    rep.put("period", f.period, "exact")
    rep.put("points_used", f.points_used, "exact")
    return rep


def _cmd_tightness(cfg: RunConfig) -> _Report:
    dset = _need_degrees(cfg)
    tr = tightness_report(dset, cutoff=cfg.size, precision=cfg.precision)
    rep = _Report()
    sums = {name: {"partial_half": _approx(fam.partial_half, cfg.precision),
                   "partial_full": _approx(fam.partial_full, cfg.precision),
                   "gap": _approx(fam.gap, cfg.precision)}
            for name, fam in sorted(tr.sums.items())}
    decays = {name: {"first_term": _approx(fam.first_term, cfg.precision),
                     "last_term": _approx(fam.last_term, cfg.precision),
                     "decreasing": fam.decreasing}
              for name, fam in sorted(tr.decays.items())}
    rep.put("cutoff", tr.cutoff, "exact")
    rep.put("sums", sums, "approx")
    rep.put("decays", decays, "approx")
    return rep


def _cmd_oracle(cfg: RunConfig) -> _Report:
    dset = _need_degrees(cfg)
    refined = oracle_refined_rows(dset, cfg.size, cfg.genus, cfg.tracked,
                                  perm_budget=cfg.oracle_budget)
    rep = _Report(d=cfg.tracked[0] if len(cfg.tracked) == 1 else None)
    total = 0
    for key, w in sorted(refined.items()):
        row = {"vertices": key[0], "value": _exact_int(w)}
        if cfg.tracked:
            row["marks"] = list(key[1:])
        rep.rows.append(row)
        total += w
    rep.row_schema(vertices="exact", marks="exact", value="exact")
    rep.put("genus", cfg.genus, "exact")
    rep.put("total", _exact_int(total), "exact")
    return rep


def _cmd_schemes(cfg: RunConfig) -> _Report:
    schemes = enumerate_schemes(cfg.genus)
    rep = _Report()
    for s in schemes:
        rep.rows.append({
            "vertices": len(s.cycles),
            "edges": s.edge_count,
            "degrees": [s.degree(v) for v in range(len(s.cycles))],
            "colors": "".join("wb"[c] for c in s.colors),
            "automorphisms": s.automorphism_order(),
        })
    rep.rows.sort(key=lambda r: (r["edges"], r["degrees"], r["colors"]))
    rep.row_schema(vertices="exact", edges="exact", degrees="exact",
                   colors="exact", automorphisms="exact")
    rep.put("genus", cfg.genus, "exact")
    rep.put("total", len(schemes), "exact")
    return rep


def _cmd_genus_count(cfg: RunConfig) -> _Report:
    dset = _need_degrees(cfg)
    genus1_count(dset, cfg.size)    # primes the cache at the top size
    rep = _Report()
    rep.rows = [{"n": n, "value": _exact_int(genus1_count(dset, n))}
                for n in range(1, cfg.size + 1)]
    rep.row_schema(n="exact", value="exact")
    rep.put("genus", 1, "exact")
    return rep


_HANDLERS = {
    "count": _cmd_count,
    "dist": _cmd_dist,
    "moments": _cmd_moments,
    "clt": _cmd_clt,
    "sing": _cmd_sing,
    "fit": _cmd_fit,
    "tightness": _cmd_tightness,
    "oracle": _cmd_oracle,
    "schemes": _cmd_schemes,
    "genus-count": _cmd_genus_count,
}


# --- argument plumbing ----------------------------------------------------

def _parse_tracked(text: str) -> Tuple[int, ...]:
    try:
        vals = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError as e:
        raise ValidationError(f"bad --track list {text!r}") from e
    if any(v < 1 for v in vals):
        raise ValidationError("tracked valencies must be >= 1")
    return vals


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mapcomb",
        description="Exact enumeration and limit laws for rooted maps "
                    "with restricted face valencies.")
    sub = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "count": "rooted map counts by edge number",
        "dist": "joint law of tracked face-valency counts at fixed n",
        "moments": "exact centered moments of one or two tracked counts",
        "clt": "Gaussian-trend diagnostics over a doubling size ladder",
        "sing": "dominant singularity of the map series",
        "fit": "growth-constant fit from the count table",
        "tightness": "partial sums and decay flags of the control series",
        "oracle": "brute-force rotation-system counts, genus-refined",
        "schemes": "one-faced cores for the higher-genus decomposition",
        "genus-count": "bipartite genus-1 map counts by edge number",
    }
    for name, desc in descriptions.items():
        p = sub.add_parser(name, help=desc, description=desc)
        p.add_argument("--degrees", type=str, default=None,
                       help="face valency set, e.g. 'all', 'even', '4', "
                            "'2,4', '3,even'")
        p.add_argument("--max-edges", type=int, default=None, dest="max_edges",
                       help="edge bound / report size (command-specific "
                            "default)")
        p.add_argument("--order", type=int, default=None,
                       help=f"synonym for --max-edges (default "
                            f"{DEFAULT_ORDER})")
        p.add_argument("--track", type=str, default="",
                       help="comma-separated valencies to mark")
        p.add_argument("--genus", type=int,
                       default=1 if name in ("schemes", "genus-count") else 0,
                       help="surface genus where it applies")
        p.add_argument("--precision", type=int, default=DEFAULT_PRECISION,
                       help=f"working precision in bits (default "
                            f"{DEFAULT_PRECISION})")
        p.add_argument("--tol", type=float, default=DEFAULT_TOL,
                       help=f"acceptance tolerance for residuals (default "
                            f"{DEFAULT_TOL})")
        p.add_argument("--format", choices=("json", "csv"), default="json",
                       dest="fmt", help="output format (default json)")
        p.add_argument("--oracle-budget", type=int, default=6_000_000,
                       dest="oracle_budget",
                       help="cap on rotation systems per oracle scan")
    return parser


def _config_from(argv: Sequence[str]) -> RunConfig:
    args = _build_parser().parse_args(list(argv))
    degrees = None
    if args.degrees is not None:
        degrees = parse_degree_set(args.degrees)
    size = args.max_edges if args.max_edges is not None else args.order
    if size is None:
        size = _SIZE_DEFAULTS.get(args.command, DEFAULT_ORDER)
    if size < 1:
        raise ValidationError("size bound must be >= 1")
    if args.precision < 16:
        raise ValidationError("precision below 16 bits is not meaningful")
    if not args.tol > 0:
        raise ValidationError("tolerance must be positive")
    if args.genus < 0:
        raise ValidationError("genus must be >= 0")
    if args.oracle_budget < 1:
        raise ValidationError("oracle budget must be >= 1")
    return RunConfig(command=args.command, degrees=degrees, size=size,
                     tracked=_parse_tracked(args.track), genus=args.genus,
                     precision=args.precision, tol=args.tol, fmt=args.fmt,
                     oracle_budget=args.oracle_budget)


# --- rendering ------------------------------------------------------------

def _envelope(cfg: RunConfig, rep: _Report) -> Dict[str, object]:
    out: Dict[str, object] = {
        "schema": SCHEMA,
        "version": __version__,
        "command": cfg.command,
        "degrees": cfg.degrees.spec_string() if cfg.degrees else None,
        "d": rep.d,
        "N": cfg.size,
        "fields": dict(sorted(rep.fields.items())),
    }
    out.update(rep.scalars)
    if rep.rows:
        out["rows"] = rep.rows
    return out


def _csv_cell(v) -> str:
    if isinstance(v, list):
        return "|".join(str(x) for x in v)
    if isinstance(v, dict):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    return str(v)


def _render(cfg: RunConfig, rep: _Report) -> str:
    if cfg.fmt == "json":
        return json.dumps(_envelope(cfg, rep), sort_keys=True, indent=2)
    if rep.rows:
        header = list(rep.rows[0].keys())
        lines = [",".join(header)]
        lines += [",".join(_csv_cell(row.get(h, "")) for h in header)
                  for row in rep.rows]
    else:
        lines = ["key,value"]
        lines += [f"{k},{_csv_cell(v)}" for k, v in rep.scalars.items()]
    return "\n".join(lines)


def _error_object(exc: Exception) -> str:
    body = {"schema": SCHEMA, "version": __version__,
            "error": {"type": type(exc).__name__, "message": str(exc)}}
    return json.dumps(body, sort_keys=True, indent=2)


def run_command(argv: Sequence[str]) -> int:
    """Parse argv, run the requested command, print one report.

    Returns the process exit code; argparse usage errors keep their
    conventional code 2.
    """
    try:
        cfg = _config_from(argv)
    except SystemExit as e:
        return int(e.code or 0)
    except ValidationError as e:
        print(_error_object(e))
        return 2
    try:
        rep = _HANDLERS[cfg.command](cfg)
    except ValidationError as e:
        print(_error_object(e))
        return 2
    except (NumericError, DegenerateLaw, ArithmeticError) as e:
        print(_error_object(e))
        return 3
    print(_render(cfg, rep))
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    raise SystemExit(main())
