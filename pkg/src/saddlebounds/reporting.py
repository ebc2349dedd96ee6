"""Run configuration, problem file ingestion, and report serialization.

Reports are written as a JSON envelope (problem metadata, configuration,
bound reports with their certifications, optional sweep rows) plus CSV
files for tabular consumers. All output is byte-stable for fixed inputs:
no timestamps, sorted keys, fixed float formatting.
"""

import json
import os
from dataclasses import dataclass

import numpy as np

from .bounds import SaddleProblem
from .errors import (
    ParameterOutOfRangeError,
    ProblemValidationError,
    StructureError,
)
from .linalg import default_rank_tol
from .mmio import read_matrix_market

BOUNDS_CSV_HEADER = "name,value,assumptions_met,status,slack,warnings"


@dataclass(frozen=True)
class RunConfig:
    """Knobs shared by the command-line entry points.

    ``rel_tol`` of None means each problem uses its own default
    n * machine epsilon.
    """

    rel_tol: float = None
    angle_tol: float = 1e-10
    cert_slack: float = 1e-8
    gamma_min: float = 1e-4
    gamma_max: float = 1e4
    gamma_points: int = 25
    output_format: str = "json"
    seed: int = 0
    size_cap: int = 2000

    def __post_init__(self):
        if self.rel_tol is not None and not self.rel_tol > 0:
            raise ParameterOutOfRangeError(f"rel_tol must be positive, got {self.rel_tol}")
        if not self.angle_tol > 0:
            raise ParameterOutOfRangeError(f"angle_tol must be positive, got {self.angle_tol}")
        if not self.cert_slack > 0:
            raise ParameterOutOfRangeError(f"cert_slack must be positive, got {self.cert_slack}")
        if not 0 < self.gamma_min < self.gamma_max:
            raise ParameterOutOfRangeError(
                f"need 0 < gamma_min < gamma_max, got {self.gamma_min}, {self.gamma_max}"
            )
        if self.gamma_points < 2:
            raise ParameterOutOfRangeError(
                f"need at least 2 gamma grid points, got {self.gamma_points}"
            )
        if self.output_format not in ("json", "csv"):
            raise ParameterOutOfRangeError(
                f"output format must be json or csv, got {self.output_format!r}"
            )
        if self.size_cap < 1:
            raise ParameterOutOfRangeError(f"size cap must be positive, got {self.size_cap}")


@dataclass(frozen=True)
class ProblemFileSet:
    """Either separate A and B files, or a whole-K file with the split
    index n that separates the leading block."""

    path_a: str = None
    path_b: str = None
    path_k: str = None
    split_n: int = None

    def __post_init__(self):
        ab = self.path_a is not None and self.path_b is not None
        k = self.path_k is not None
        if k and (self.path_a is not None or self.path_b is not None):
            raise ParameterOutOfRangeError("give either A and B files or a K file, not both")
        if k and self.split_n is None:
            raise ParameterOutOfRangeError("a K file needs the split index n")
        if not k and not ab:
            raise ParameterOutOfRangeError("need both A and B files, or a K file with n")


def read_problem(fileset, config=RunConfig()):
    """Load and validate a saddle problem from Matrix Market files.

    For a whole-K file the trailing block must be numerically zero and
    the off-diagonal blocks exact transposes, both within
    rel_tol * max|K|. Structural failures raise StructureError naming
    the violated invariant.
    """
    if fileset.path_k is not None:
        k = read_matrix_market(fileset.path_k)
        order = k.shape[0]
        if k.shape[0] != k.shape[1]:
            raise StructureError(f"K file must be square, got shape {k.shape}")
        n = int(fileset.split_n)
        if not 0 < n < order:
            raise StructureError(f"split index n = {n} outside 1..{order - 1}")
        rel_tol = config.rel_tol if config.rel_tol is not None else default_rank_tol(order)
        scale = float(np.abs(k).max())
        tol = rel_tol * scale
        trailing = float(np.abs(k[n:, n:]).max()) if order > n else 0.0
        if trailing > tol:
            raise StructureError(
                f"trailing (2,2) block is not zero: max entry {trailing:.6e} exceeds "
                f"rel_tol * max|K| = {tol:.6e}"
            )
        skew = float(np.abs(k[:n, n:] - k[n:, :n].T).max())
        if skew > tol:
            raise StructureError(
                f"off-diagonal blocks are not transposes: max deviation {skew:.6e} "
                f"exceeds rel_tol * max|K| = {tol:.6e}"
            )
        a = k[:n, :n]
        b = k[n:, :n]
    else:
        a = read_matrix_market(fileset.path_a)
        b = read_matrix_market(fileset.path_b)
    try:
        return SaddleProblem(a, b, rel_tol=config.rel_tol)
    except ProblemValidationError as exc:
        raise StructureError(f"invalid saddle problem: {exc}") from exc


def _jsonable(value):
    # bool first: it is an int subclass and must stay a JSON boolean
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def bound_entry(report, certification=None):
    entry = {
        "name": report.name,
        "value": report.value,
        "assumptions_met": report.assumptions_met,
        "details": dict(report.details),
        "warnings": list(report.warnings),
    }
    if report.intervals is not None:
        (neg_lo, neg_hi), (pos_lo, pos_hi) = report.intervals
        entry["intervals"] = {
            "negative": [neg_lo, neg_hi],
            "positive": [pos_lo, pos_hi],
        }
    if certification is not None:
        entry["certification"] = {
            "status": certification.status,
            "slack": certification.slack,
        }
    return _jsonable(entry)


def report_envelope(problem, config, reports, certifications=None, sweep=None,
                    oracle_result=None, source=None, notes=()):
    """Assemble the JSON report envelope."""
    s = problem.summary
    certs = certifications if certifications is not None else [None] * len(reports)
    bounds = [bound_entry(r, c) for r, c in zip(reports, certs)]
    cert_block = {"performed": oracle_result is not None}
    if oracle_result is not None:
        statuses = [b.get("certification", {}).get("status") for b in bounds]
        cert_block.update(
            {
                "mu_min_plus_k": oracle_result.mu_min_plus,
                "pos_count": oracle_result.pos_count,
                "neg_count": oracle_result.neg_count,
                "zero_count": oracle_result.zero_count,
                "inertia_ok": oracle_result.inertia_ok,
                "all_sound": all(st in ("sound", "vacuous") for st in statuses if st),
            }
        )
    envelope = {
        "problem": {
            "n": problem.n,
            "m": problem.m,
            "rank_a": s.rank_a,
            "nullity_a": s.nullity_a,
            "mu_max": s.mu_max,
            "mu_min_plus": s.mu_min_plus,
            "sigma_max": s.sigma_max,
            "sigma_min": s.sigma_min,
            "rel_tol": problem.rel_tol,
            "source": source if source is not None else {},
        },
        "config": {
            "rel_tol": config.rel_tol,
            "angle_tol": config.angle_tol,
            "cert_slack": config.cert_slack,
            "gamma_grid": {
                "min": config.gamma_min,
                "max": config.gamma_max,
                "points": config.gamma_points,
            },
            "output_format": config.output_format,
            "seed": config.seed,
            "size_cap": config.size_cap,
        },
        "bounds": bounds,
        "certification": cert_block,
        "sweep": None,
        "notes": list(notes),
    }
    if sweep is not None:
        envelope["sweep"] = {
            "crossing_index": sweep.crossing_index,
            "actual_mu_min_plus": sweep.actual_mu_min_plus,
            "rows": [
                {
                    "gamma": r.gamma,
                    "inv_gamma": r.inv_gamma,
                    "mu_min_A_gamma": r.mu_min_a_gamma,
                    "predicted_bound": r.predicted_bound,
                    "actual_min_pos_eig": r.actual_mu_min_plus,
                }
                for r in sweep.rows
            ],
        }
    return _jsonable(envelope)


def envelope_to_json(envelope):
    return json.dumps(envelope, sort_keys=True, indent=2) + "\n"


def bounds_to_csv(reports, certifications=None):
    """Bound reports as a small CSV table."""
    certs = certifications if certifications is not None else [None] * len(reports)
    lines = [BOUNDS_CSV_HEADER]
    for report, cert in zip(reports, certs):
        status = cert.status if cert is not None else ""
        slack = f"{cert.slack:.17g}" if cert is not None else ""
        warnings = ";".join(report.warnings)
        lines.append(
            f"{report.name},{report.value:.17g},{report.assumptions_met},"
            f"{status},{slack},{warnings}"
        )
    return "\n".join(lines) + "\n"


def write_report(out_dir, envelope, reports=None, certifications=None, sweep=None,
                 output_format="json"):
    """Write the report files into a directory and return their paths.

    Always writes report.json; adds sweep.csv when sweep rows exist and
    bounds.csv when the CSV format is selected.
    """
    os.makedirs(out_dir, exist_ok=True)
    written = []
    path = os.path.join(out_dir, "report.json")
    with open(path, "w", encoding="ascii") as fh:
        fh.write(envelope_to_json(envelope))
    written.append(path)
    if sweep is not None:
        path = os.path.join(out_dir, "sweep.csv")
        with open(path, "w", encoding="ascii") as fh:
            fh.write(sweep.to_csv())
        written.append(path)
    if output_format == "csv" and reports is not None:
        path = os.path.join(out_dir, "bounds.csv")
        with open(path, "w", encoding="ascii") as fh:
            fh.write(bounds_to_csv(reports, certifications))
        written.append(path)
    return written
