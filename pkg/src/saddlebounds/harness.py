"""Certification harness: dense eigenvalue oracle, soundness checks for
bound reports, the augmented-inverse identity residual, and the sweep of
the scalar-weight bound over a gamma grid.

The oracle is the ground truth every bound is checked against: a full
dense eigensolve of K, capped by default at order 2000.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bounds import (
    MatrixWeight,
    ScalarWeight,
    assemble_augmented,
    saddle_matrix,
)
from .errors import (
    ConvergenceError,
    ParameterOutOfRangeError,
    RankAssumptionError,
    SingularAugmentedError,
    SizeCapError,
)
from .linalg import SymmetricMatrix, _frozen, principal_angles

DEFAULT_SIZE_CAP = 2000
DEFAULT_CERT_SLACK = 1e-8
DEFAULT_COND_CAP = 1e12

SWEEP_CSV_HEADER = "gamma,inv_gamma,mu_min_A_gamma,predicted_bound,actual_min_pos_eig"


@dataclass(frozen=True, eq=False)
class OracleResult:
    """Dense spectrum of K with the positivity threshold applied.

    ``mu_min_plus`` is the smallest eigenvalue above
    rel_tol * ||K||. A valid problem has exactly n positive and m
    negative eigenvalues; ``inertia_ok`` records whether the counts came
    out that way rather than asserting it silently.
    """

    all_eigs: np.ndarray  # descending
    mu_min_plus: float
    pos_count: int
    neg_count: int
    zero_count: int
    inertia_ok: bool
    threshold: float


@dataclass(frozen=True)
class CertificationOutcome:
    """How a bound fared against the oracle.

    ``slack`` is oracle minus bound; ``status`` is "vacuous" when the
    bound is nonpositive, "sound" when it sits below the oracle within
    tolerance, "violated" otherwise.
    """

    status: str
    slack: float


@dataclass(frozen=True)
class SweepRow:
    gamma: float
    inv_gamma: float
    mu_min_a_gamma: float
    predicted_bound: float
    actual_mu_min_plus: float


@dataclass(frozen=True)
class SweepResult:
    """Scalar-weight bound evaluated over a gamma grid.

    ``crossing_index`` is the first grid index i where
    1/gamma - mu_min(A_gamma) changes sign between i and i + 1, or None
    when the grid never brackets the crossing.
    """

    rows: tuple
    crossing_index: object
    actual_mu_min_plus: float

    def to_csv(self):
        lines = [SWEEP_CSV_HEADER]
        for r in self.rows:
            lines.append(
                ",".join(
                    f"{v:.17g}"
                    for v in (
                        r.gamma,
                        r.inv_gamma,
                        r.mu_min_a_gamma,
                        r.predicted_bound,
                        r.actual_mu_min_plus,
                    )
                )
            )
        return "\n".join(lines) + "\n"


def assemble_K(problem):
    """The dense saddle matrix [[A, B^T], [B, 0]] of a problem."""
    return SymmetricMatrix.from_array(problem.k_matrix)


def oracle(problem, size_cap=DEFAULT_SIZE_CAP):
    """Full spectrum of K from a dense eigensolve (cached at problem
    construction), refusing problems above the size cap."""
    order = problem.n + problem.m
    if order > size_cap:
        raise SizeCapError(f"K has order {order}, above the size cap {size_cap}")
    vals = problem.k_eigs[::-1]  # descending
    threshold = problem.rel_tol * float(np.abs(vals).max())
    pos = vals > threshold
    neg = vals < -threshold
    pos_count = int(np.count_nonzero(pos))
    neg_count = int(np.count_nonzero(neg))
    zero_count = order - pos_count - neg_count
    mu_min_plus = float(vals[pos].min())  # nonempty: K is validated nonsingular
    inertia_ok = pos_count == problem.n and neg_count == problem.m and zero_count == 0
    return OracleResult(
        all_eigs=_frozen(vals),
        mu_min_plus=mu_min_plus,
        pos_count=pos_count,
        neg_count=neg_count,
        zero_count=zero_count,
        inertia_ok=inertia_ok,
        threshold=threshold,
    )


def certify(report, oracle_result, slack_tol=DEFAULT_CERT_SLACK):
    """Check one bound report against the oracle."""
    value = report.value
    slack = oracle_result.mu_min_plus - value
    if value <= 0.0:
        status = "vacuous"
    elif value <= oracle_result.mu_min_plus + slack_tol * max(1.0, oracle_result.mu_min_plus):
        status = "sound"
    else:
        status = "violated"
    return CertificationOutcome(status, slack)


def containment_violations(report, oracle_result, slack=DEFAULT_CERT_SLACK):
    """Eigenvalues of K outside the inclusion intervals of an interval
    report, allowing absolute slack at the endpoints. Empty means the
    containment holds."""
    if report.intervals is None:
        raise ParameterOutOfRangeError(f"report {report.name!r} carries no intervals")
    (neg_lo, neg_hi), (pos_lo, pos_hi) = report.intervals
    eigs = oracle_result.all_eigs
    in_neg = (eigs >= neg_lo - slack) & (eigs <= neg_hi + slack)
    in_pos = (eigs >= pos_lo - slack) & (eigs <= pos_hi + slack)
    return eigs[~(in_neg | in_pos)]


def _weight_dense(weight, m):
    if isinstance(weight, ScalarWeight):
        return weight.gamma * np.eye(m)
    if isinstance(weight, MatrixWeight):
        return np.asarray(weight.matrix.array)
    raise ParameterOutOfRangeError(f"unsupported weight type {type(weight).__name__}")


def _augmented_saddle(problem, weight):
    aw = assemble_augmented(problem, weight)
    return aw, saddle_matrix(aw.array, problem.B.array)


def augmented_condition(problem, weight):
    """Spectral condition number of the augmented saddle matrix; +inf
    when it is exactly singular."""
    _, kw = _augmented_saddle(problem, weight)
    vals = np.abs(np.linalg.eigvalsh(kw))
    lo = float(vals.min())
    hi = float(vals.max())
    if lo == 0.0:
        return float("inf")
    return hi / lo


def inverse_identity_residual(problem, weight):
    """Residual of the augmented-inverse identity, normalized by
    max(1, ||K^{-1}||_F).

    The identity says K^{-1} equals the inverse of the augmented saddle
    matrix plus blockdiag(0, W). When the augmented leading block A_W is
    numerically nonsingular the Schur-form consequence is checked too:
    the trailing block of K^{-1} must equal W - (B A_W^{-1} B^T)^{-1}.
    The returned value is the larger of the residuals checked.
    """
    n = problem.n
    m = problem.m
    aw, kw = _augmented_saddle(problem, weight)
    try:
        kw_vals = np.abs(np.linalg.eigvalsh(kw))
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigensolve of the augmented saddle matrix failed: {exc}") from exc
    if float(kw_vals.max()) == 0.0 or float(kw_vals.min()) <= problem.rel_tol * float(kw_vals.max()):
        raise SingularAugmentedError(
            f"augmented saddle matrix is numerically singular: min |eig| = "
            f"{kw_vals.min():.6e} vs rel_tol * max = {problem.rel_tol * kw_vals.max():.6e}"
        )
    eye = np.eye(n + m)
    k_inv = np.linalg.solve(problem.k_matrix, eye)
    kw_inv = np.linalg.solve(kw, eye)
    w_dense = _weight_dense(weight, m)
    block = np.zeros((n + m, n + m))
    block[n:, n:] = w_dense
    scale = max(1.0, float(np.linalg.norm(k_inv, "fro")))
    residual = float(np.linalg.norm(k_inv - kw_inv - block, "fro")) / scale

    aw_vals = np.linalg.eigvalsh(aw.array)
    if float(aw_vals[0]) > problem.rel_tol * max(float(aw_vals[-1]), 0.0):
        b = problem.B.array
        s_w = b @ np.linalg.solve(aw.array, b.T)
        trailing = k_inv[n:, n:]
        schur_residual = float(
            np.linalg.norm(trailing - (w_dense - np.linalg.inv(s_w)), "fro")
        ) / scale
        residual = max(residual, schur_residual)
    return residual


def log_gamma_grid(gamma_min, gamma_max, points):
    """Logarithmically spaced gamma grid, endpoints included."""
    if not 0 < gamma_min < gamma_max:
        raise ParameterOutOfRangeError(
            f"need 0 < gamma_min < gamma_max, got {gamma_min}, {gamma_max}"
        )
    if points < 2:
        raise ParameterOutOfRangeError(f"need at least 2 grid points, got {points}")
    return np.logspace(np.log10(gamma_min), np.log10(gamma_max), points)


def gamma_sweep(problem, grid, size_cap=DEFAULT_SIZE_CAP, workers=1):
    """Evaluate min{1/gamma, mu_min(A_gamma)} over a gamma grid.

    Rows are computed independently (optionally in a thread pool) and
    merged in grid order, so the result is deterministic for a fixed
    grid. The oracle value is computed once and repeated per row.
    """
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise ParameterOutOfRangeError("gamma grid must be a nonempty 1-D array")
    if not np.isfinite(g).all() or np.any(g <= 0):
        raise ParameterOutOfRangeError("gamma grid values must be finite and positive")
    if np.any(np.diff(g) <= 0):
        raise ParameterOutOfRangeError("gamma grid must be strictly increasing")
    actual = oracle(problem, size_cap).mu_min_plus
    bt_b = problem.B.array.T @ problem.B.array
    a = problem.A.array

    def mu_min_at(gamma):
        return float(np.linalg.eigvalsh(a + gamma * bt_b)[0])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            mu = list(pool.map(mu_min_at, g))
    else:
        mu = [mu_min_at(gamma) for gamma in g]

    rows = []
    for gamma, mu_min in zip(g, mu):
        inv = 1.0 / gamma
        rows.append(SweepRow(float(gamma), inv, mu_min, min(inv, mu_min), actual))
    diffs = np.array([r.inv_gamma - r.mu_min_a_gamma for r in rows])
    signs = np.sign(diffs)
    crossing = None
    for i in range(len(rows) - 1):
        if signs[i] != signs[i + 1]:
            crossing = i
            break
    return SweepResult(tuple(rows), crossing, actual)


def ptp_spectrum_deviation(problem):
    """Deviations of the stacked-basis Gram spectrum from its closed form.

    For a lowest-rank problem let P = [U V] stack orthonormal bases of
    range(A) and range(B^T). The eigenvalues of P^T P are 1 (with
    multiplicity n - 2k, k = min(m, n - m)) and 1 +/- cos(theta_i) for
    each principal angle, and the squared reciprocal of ||P^{-1}|| equals
    1 - cos(theta_min). Returns (max eigenvalue deviation, deviation of
    the inverse-norm identity).
    """
    if not problem.is_lowest_rank:
        raise RankAssumptionError(
            "the stacked-basis spectrum check needs rank(A) = n - m"
        )
    u = problem.range_a.columns
    v = problem.row_space_b.columns
    p = np.hstack([u, v])
    gram_eigs = np.sort(np.linalg.eigvalsh(p.T @ p))
    cos = principal_angles(problem.range_a, problem.row_space_b).cosines
    k = cos.shape[0]
    expected = np.sort(
        np.concatenate([np.ones(problem.n - 2 * k), 1.0 - cos, 1.0 + cos])
    )
    dev_spectrum = float(np.max(np.abs(gram_eigs - expected)))
    smin = float(np.linalg.svd(p, compute_uv=False)[-1])
    dev_inverse = abs(smin * smin - (1.0 - float(cos[0])))
    return dev_spectrum, dev_inverse
