"""Guaranteed eigenvalue bounds for symmetric saddle matrices
K = [[A, B^T], [B, 0]] with a positive semidefinite leading block A.

The bounds come in three flavors:

* classical inclusion intervals from the extreme eigenvalues of A and the
  extreme singular values of B ("rusten-winther");
* the augmented-block bound min{mu_min(A + B^T W B), 1/mu_max(W)} for a
  positive semidefinite weight W, with the scalar case W = gamma * I as
  the workhorse;
* principal-angle bounds that need no augmented eigensolve at all. In the
  lowest-rank case rank(A) = n - m the positive eigenvalues of K are at
  least min{mu_min_plus(A) * (1 - cos t), sigma_min(B) * sqrt(1 - cos t)}
  where t is the minimal angle between range(A) and range(B^T); for
  general rank the same shape holds with A replaced by its best
  rank-(n - m) spectral approximation.
"""

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import (
    AugmentedBlockSingularError,
    ConvergenceError,
    DegenerateSplitWarning,
    DimensionMismatchError,
    NotPositiveSemidefiniteError,
    ParameterOutOfRangeError,
    RankAssumptionError,
    RankDeficientError,
    RankTooLowError,
    SingularKError,
    ZeroAngleError,
)
from .linalg import (
    DEFAULT_SYM_TOL,
    RectMatrix,
    SubspaceBasis,
    SymmetricMatrix,
    _basis_from_eig,
    _frozen,
    default_rank_tol,
    kernel_basis_rect,
    principal_angles,
    svd,
    sym_eig,
)

DEFAULT_ANGLE_TOL = 1e-10


@dataclass(frozen=True)
class SpectralSummary:
    """Extreme spectral data of a saddle problem.

    ``mu`` values describe the (clamped) eigenvalues of A, ``sigma``
    values the singular values of B. ``mu_min_plus`` is the smallest
    eigenvalue above the rank threshold ``rel_tol * mu_max``.
    """

    mu_max: float
    mu_min: float
    mu_min_plus: float
    sigma_max: float
    sigma_min: float
    rank_a: int
    nullity_a: int
    rel_tol: float


@dataclass(frozen=True)
class ScalarWeight:
    """The weight gamma * I.  gamma = 0 is the trivial (zero) weight."""

    gamma: float

    def __post_init__(self):
        if not math.isfinite(self.gamma) or self.gamma < 0:
            raise ParameterOutOfRangeError(
                f"scalar weight needs a finite gamma >= 0, got {self.gamma}"
            )


@dataclass(frozen=True, eq=False)
class MatrixWeight:
    """A full positive semidefinite weight matrix W."""

    matrix: SymmetricMatrix

    @classmethod
    def from_array(cls, w, sym_tol=DEFAULT_SYM_TOL):
        return cls(SymmetricMatrix.from_array(w, sym_tol))


@dataclass(frozen=True)
class BoundReport:
    """One computed bound: its name, the certified value, and the
    quantities that produced it.

    ``value`` is a lower bound on the positive eigenvalues of K whenever
    ``assumptions_met`` is true. For the interval report ``intervals``
    holds ((neg_lo, neg_hi), (pos_lo, pos_hi)) and ``value`` is the lower
    endpoint of the positive interval.
    """

    name: str
    value: float
    assumptions_met: bool
    details: dict = field(default_factory=dict)
    warnings: tuple = ()
    intervals: tuple = None


def saddle_matrix(a, b):
    """Assemble the dense block matrix [[A, B^T], [B, 0]]."""
    n = a.shape[0]
    m = b.shape[0]
    k = np.zeros((n + m, n + m))
    k[:n, :n] = a
    k[:n, n:] = b.T
    k[n:, :n] = b
    return k


class SaddleProblem:
    """Validated pair (A, B) with cached decompositions.

    Construction enforces every structural invariant: A symmetric positive
    semidefinite (eigenvalues in [-rel_tol * mu_max, 0) are clamped to
    zero, or rejected when ``strict_psd`` is set), B full row rank with
    m < n, and the assembled saddle matrix nonsingular. The eigensolve of
    A, the SVD of B and the eigenvalues of K are computed once here and
    reused by every bound.
    """

    def __init__(self, a, b, rel_tol=None, sym_tol=DEFAULT_SYM_TOL, strict_psd=False):
        self.A = a if isinstance(a, SymmetricMatrix) else SymmetricMatrix.from_array(a, sym_tol)
        self.B = b if isinstance(b, RectMatrix) else RectMatrix.from_array(b)
        n = self.A.order
        m, nb = self.B.array.shape
        if nb != n:
            raise DimensionMismatchError(
                f"constraint block is {m}x{nb} but the leading block has order {n}"
            )
        if m >= n:
            raise DimensionMismatchError(
                f"need m < n for a saddle problem, got m = {m}, n = {n}"
            )
        self.n = n
        self.m = m
        self.rel_tol = float(rel_tol) if rel_tol is not None else default_rank_tol(n)
        if not self.rel_tol > 0:
            raise ParameterOutOfRangeError(f"rel_tol must be positive, got {rel_tol}")

        dec = sym_eig(self.A)
        top = float(dec.values[0])
        bottom = float(dec.values[-1])
        if top < 0 or bottom < -self.rel_tol * top:
            raise NotPositiveSemidefiniteError(
                f"leading block has eigenvalue {bottom:.6e} below "
                f"-rel_tol * mu_max = {-self.rel_tol * max(top, 0.0):.6e}"
            )
        if strict_psd and bottom < 0:
            raise NotPositiveSemidefiniteError(
                f"strict mode: leading block has negative eigenvalue {bottom:.6e}"
            )
        self.eig_a = dec
        # clamp the roundoff-negative tail so downstream summaries see >= 0
        self.a_values = _frozen(np.maximum(dec.values, 0.0))

        sdec = svd(self.B)
        smax = float(sdec.singular_values[0])
        smin = float(sdec.singular_values[-1])
        if smax == 0.0 or smin <= self.rel_tol * smax:
            raise RankDeficientError(
                f"constraint block is not full row rank: sigma_min = {smin:.6e}, "
                f"sigma_max = {smax:.6e}, rel_tol = {self.rel_tol:g}"
            )
        self.svd_b = sdec

        k = saddle_matrix(self.A.array, self.B.array)
        try:
            k_vals = np.linalg.eigvalsh(k)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(f"eigensolve of the saddle matrix failed: {exc}") from exc
        self.k_matrix = _frozen(k)
        self.k_eigs = _frozen(k_vals)  # ascending
        kmax = float(np.abs(k_vals).max())
        kmin = float(np.abs(k_vals).min())
        if kmax == 0.0 or kmin <= self.rel_tol * kmax:
            raise SingularKError(
                f"saddle matrix is numerically singular: min |eig| = {kmin:.6e} "
                f"vs rel_tol * ||K|| = {self.rel_tol * kmax:.6e}"
            )

    @cached_property
    def summary(self):
        vals = self.a_values
        rank = int(np.count_nonzero(vals > self.rel_tol * vals[0])) if vals[0] > 0 else 0
        mu_min_plus = float(vals[rank - 1]) if rank > 0 else 0.0
        s = self.svd_b.singular_values
        return SpectralSummary(
            mu_max=float(vals[0]),
            mu_min=float(vals[-1]),
            mu_min_plus=mu_min_plus,
            sigma_max=float(s[0]),
            sigma_min=float(s[-1]),
            rank_a=rank,
            nullity_a=self.n - rank,
            rel_tol=self.rel_tol,
        )

    @cached_property
    def range_a(self):
        return _basis_from_eig(self.eig_a, self.rel_tol, "range")

    @cached_property
    def kernel_a(self):
        return _basis_from_eig(self.eig_a, self.rel_tol, "kernel")

    @cached_property
    def row_space_b(self):
        # B is validated full row rank, so all m right singular vectors qualify
        return SubspaceBasis(self.n, self.m, self.svd_b.right_vectors, "range", self.rel_tol)

    @cached_property
    def kernel_b(self):
        return kernel_basis_rect(self.B, self.rel_tol)

    @property
    def is_lowest_rank(self):
        return self.summary.rank_a == self.n - self.m

    @property
    def k_norm(self):
        return float(np.abs(self.k_eigs).max())


def spectral_summary(problem):
    """Extreme eigen and singular value data of a validated problem."""
    return problem.summary


def rusten_winther(summary):
    """Classical inclusion intervals for the spectrum of K.

    The negative eigenvalues lie in
    [ (mu_min - sqrt(mu_min^2 + 4 sigma_max^2)) / 2,
      (mu_max - sqrt(mu_max^2 + 4 sigma_min^2)) / 2 ]
    and the positive ones in
    [ mu_min, (mu_max + sqrt(mu_max^2 + 4 sigma_max^2)) / 2 ].
    With a singular A the positive lower endpoint degenerates to zero and
    the report carries a vacuous-positive-lower warning.
    """
    s = summary
    neg_lo = 0.5 * (s.mu_min - math.sqrt(s.mu_min**2 + 4.0 * s.sigma_max**2))
    neg_hi = 0.5 * (s.mu_max - math.sqrt(s.mu_max**2 + 4.0 * s.sigma_min**2))
    pos_lo = s.mu_min
    pos_hi = 0.5 * (s.mu_max + math.sqrt(s.mu_max**2 + 4.0 * s.sigma_max**2))
    warns = ()
    if s.mu_min <= s.rel_tol * s.mu_max:
        warns = ("vacuous-positive-lower",)
    return BoundReport(
        name="rusten-winther",
        value=pos_lo,
        assumptions_met=True,
        details={
            "mu_max": s.mu_max,
            "mu_min": s.mu_min,
            "sigma_max": s.sigma_max,
            "sigma_min": s.sigma_min,
            "rel_tol": s.rel_tol,
        },
        warnings=warns,
        intervals=((neg_lo, neg_hi), (pos_lo, pos_hi)),
    )


def assemble_augmented(problem, weight):
    """A + B^T W B as a SymmetricMatrix (exactly symmetrized)."""
    b = problem.B.array
    if isinstance(weight, ScalarWeight):
        term = weight.gamma * (b.T @ b)
    elif isinstance(weight, MatrixWeight):
        w = weight.matrix.array
        if w.shape != (problem.m, problem.m):
            raise DimensionMismatchError(
                f"weight is {w.shape} but the constraint block has {problem.m} rows"
            )
        term = b.T @ w @ b
    else:
        raise ParameterOutOfRangeError(f"unsupported weight type {type(weight).__name__}")
    return SymmetricMatrix.from_array(problem.A.array + term)


def weight_mu_max(weight, rel_tol):
    """Largest eigenvalue of the weight; validates semidefiniteness for
    full weights."""
    if isinstance(weight, ScalarWeight):
        return weight.gamma
    vals = sym_eig(weight.matrix).values
    top = float(vals[0])
    if top < 0 or float(vals[-1]) < -rel_tol * max(top, 0.0):
        raise ParameterOutOfRangeError(
            f"weight must be positive semidefinite, got min eigenvalue {vals[-1]:.6e}"
        )
    return max(top, 0.0)


def wbound(problem, weight):
    """Augmented-block lower bound min{mu_min(A_W), 1/mu_max(W)}.

    A zero weight contributes no 1/mu_max term (the convention is
    +infinity), leaving mu_min(A) alone; that case needs A itself to be
    positive definite.
    """
    aw = assemble_augmented(problem, weight)
    try:
        vals = np.linalg.eigvalsh(aw.array)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigensolve of the augmented block failed: {exc}") from exc
    mu_min_aw = float(vals[0])
    mu_max_aw = float(vals[-1])
    if mu_min_aw <= problem.rel_tol * max(mu_max_aw, 0.0):
        raise AugmentedBlockSingularError(
            f"augmented block is not positive definite: mu_min = {mu_min_aw:.6e} "
            f"vs rel_tol * mu_max = {problem.rel_tol * max(mu_max_aw, 0.0):.6e}"
        )
    wmax = weight_mu_max(weight, problem.rel_tol)
    details = {
        "mu_min_augmented": mu_min_aw,
        "mu_max_augmented": mu_max_aw,
        "weight_mu_max": wmax,
        "rel_tol": problem.rel_tol,
    }
    if isinstance(weight, ScalarWeight):
        details["gamma"] = weight.gamma
    if wmax == 0.0:
        value = mu_min_aw
        details["active"] = "leading-block"
    else:
        inv = 1.0 / wmax
        value = min(mu_min_aw, inv)
        details["active"] = "leading-block" if mu_min_aw <= inv else "weight-inverse"
    return BoundReport("wbound", value, True, details)


def _require_lowest_rank(problem):
    want = problem.n - problem.m
    got = problem.summary.rank_a
    if got != want:
        raise RankAssumptionError(
            f"requires rank(A) = n - m = {want}, numerical rank is {got}"
        )


def rho_from_angles(problem):
    """(1 - cos(theta_min), theta_min) for the angle between range(A) and
    range(B^T). Meaningful as a bound ingredient only in the lowest-rank
    case; callers enforce that."""
    ang = principal_angles(problem.range_a, problem.row_space_b)
    cos_min = float(ang.cosines[0])
    theta_min = float(ang.angles[0])
    return 1.0 - cos_min, theta_min


def agamma_lower_bound(problem, gamma):
    """Lower bound on mu_min(A + gamma B^T B) without the augmented
    eigensolve: rho * min{mu_min_plus(A), gamma * sigma_min(B)^2}."""
    _require_lowest_rank(problem)
    if not math.isfinite(gamma) or gamma <= 0:
        raise ParameterOutOfRangeError(f"gamma must be positive, got {gamma}")
    rho, _ = rho_from_angles(problem)
    s = problem.summary
    return rho * min(s.mu_min_plus, gamma * s.sigma_min**2)


def optimal_gamma(problem, angle_tol=DEFAULT_ANGLE_TOL):
    """The gamma whose augmented bound matches the best angle bound:
    1/gamma = min{mu_min_plus * (1 - cos t), sigma_min * sqrt(1 - cos t)}."""
    _require_lowest_rank(problem)
    rho, theta_min = rho_from_angles(problem)
    if theta_min <= angle_tol:
        raise ZeroAngleError(
            f"minimal principal angle {theta_min:.6e} is at or below "
            f"angle_tol = {angle_tol:g}; no finite optimal gamma"
        )
    s = problem.summary
    inv_gamma = min(s.mu_min_plus * rho, s.sigma_min * math.sqrt(rho))
    return 1.0 / inv_gamma


def _angle_bound_report(name, mu, sigma_min, rho, theta_min, angle_tol, extra):
    arg_mu = mu * rho
    arg_sigma = sigma_min * math.sqrt(rho)
    if arg_mu <= arg_sigma:
        value, active = arg_mu, "mu"
    else:
        value, active = arg_sigma, "sigma"
    warns = ("zero-angle",) if theta_min <= angle_tol else ()
    details = dict(extra)
    details.update(
        {"rho": rho, "sigma_min": sigma_min, "active": active, "angle_tol": angle_tol}
    )
    return BoundReport(name, value, True, details, warns)


def lowest_rank_bound(problem, angle_tol=DEFAULT_ANGLE_TOL):
    """Angle bound for rank(A) = n - m:
    min{mu_min_plus * (1 - cos t), sigma_min * sqrt(1 - cos t)} with t the
    minimal angle between range(A) and range(B^T)."""
    _require_lowest_rank(problem)
    rho, theta_min = rho_from_angles(problem)
    s = problem.summary
    return _angle_bound_report(
        "lowest-rank",
        s.mu_min_plus,
        s.sigma_min,
        rho,
        theta_min,
        angle_tol,
        {"theta_min": theta_min, "mu_min_plus": s.mu_min_plus, "rel_tol": s.rel_tol},
    )


def kernel_angle_bound(problem, angle_tol=DEFAULT_ANGLE_TOL):
    """Same bound expressed through the minimal angle between ker(A) and
    ker(B); in the lowest-rank case the two formulations agree."""
    _require_lowest_rank(problem)
    ang = principal_angles(problem.kernel_a, problem.kernel_b)
    cos_min = float(ang.cosines[0])
    psi_min = float(ang.angles[0])
    s = problem.summary
    return _angle_bound_report(
        "kernel-angle",
        s.mu_min_plus,
        s.sigma_min,
        1.0 - cos_min,
        psi_min,
        angle_tol,
        {"psi_min": psi_min, "mu_min_plus": s.mu_min_plus, "rel_tol": s.rel_tol},
    )


def spectral_split(a, m, rel_tol=None):
    """Split a PSD matrix into its best rank-(n - m) part plus the rest.

    Returns (a_max, a_min) where a_max is built from the n - m largest
    eigenpairs and a_min from the m smallest. Warns with
    DegenerateSplitWarning when the boundary eigenvalues tie within
    rel_tol, since the retained subspace is then not unique.
    """
    sm = a if isinstance(a, SymmetricMatrix) else SymmetricMatrix.from_array(a)
    n = sm.order
    if not 0 < m < n:
        raise ParameterOutOfRangeError(f"need 0 < m < n = {n}, got m = {m}")
    if rel_tol is None:
        rel_tol = default_rank_tol(n)
    dec = sym_eig(sm)
    top = float(dec.values[0])
    if top < 0 or float(dec.values[-1]) < -rel_tol * max(top, 0.0):
        raise NotPositiveSemidefiniteError(
            f"spectral split needs a PSD matrix, got min eigenvalue {dec.values[-1]:.6e}"
        )
    k = n - m
    if abs(float(dec.values[k - 1]) - float(dec.values[k])) <= rel_tol * abs(top):
        warnings.warn(
            f"split boundary eigenvalues {dec.values[k - 1]:.6e} and "
            f"{dec.values[k]:.6e} tie within rel_tol = {rel_tol:g}",
            DegenerateSplitWarning,
            stacklevel=2,
        )
    vmax = dec.vectors[:, :k]
    vmin = dec.vectors[:, k:]
    a_max = SymmetricMatrix.from_array((vmax * dec.values[:k]) @ vmax.T)
    a_min = SymmetricMatrix.from_array((vmin * dec.values[k:]) @ vmin.T)
    return a_max, a_min


def _general_split_quantities(problem):
    """(mu_{n-m}, angles, degenerate) for the split-based bound: the
    (n - m)-th largest eigenvalue of A and the principal angles between
    the top-(n - m) eigenspace and range(B^T)."""
    k = problem.n - problem.m
    if problem.summary.rank_a < k:
        raise RankTooLowError(
            f"rank(A) = {problem.summary.rank_a} < n - m = {k}; "
            "the saddle matrix would be singular"
        )
    raw = problem.eig_a.values
    mu_nm = float(problem.a_values[k - 1])
    degenerate = abs(float(raw[k - 1]) - float(raw[k])) <= problem.rel_tol * abs(float(raw[0]))
    basis = SubspaceBasis(
        problem.n, k, problem.eig_a.vectors[:, :k], "range", problem.rel_tol
    )
    ang = principal_angles(basis, problem.row_space_b)
    return mu_nm, ang, degenerate


def general_rank_bound(problem, angle_tol=DEFAULT_ANGLE_TOL):
    """Split-based angle bound valid for any rank(A) >= n - m:
    min{mu_{n-m} * (1 - cos t), sigma_min * sqrt(1 - cos t)} with t the
    minimal angle between the top-(n - m) eigenspace of A and range(B^T).

    When that angle is numerically zero the bound degenerates to zero and
    the report carries a zero-angle warning; the value is still a valid
    (vacuous) lower bound.
    """
    mu_nm, ang, degenerate = _general_split_quantities(problem)
    cos_min = float(ang.cosines[0])
    theta_min = float(ang.angles[0])
    s = problem.summary
    report = _angle_bound_report(
        "general-rank",
        mu_nm,
        s.sigma_min,
        1.0 - cos_min,
        theta_min,
        angle_tol,
        {
            "theta_tilde_min": theta_min,
            "mu_n_minus_m": mu_nm,
            "rank_a": s.rank_a,
            "rel_tol": s.rel_tol,
        },
    )
    if degenerate:
        report = BoundReport(
            report.name,
            report.value,
            report.assumptions_met,
            report.details,
            report.warnings + ("degenerate-split",),
            report.intervals,
        )
    return report


def general_rank_optimal_gamma(problem, angle_tol=DEFAULT_ANGLE_TOL):
    """Optimal gamma computed from the split quantities; this is the
    fallback when rank(A) > n - m rules out the lowest-rank formula."""
    mu_nm, ang, _ = _general_split_quantities(problem)
    theta_min = float(ang.angles[0])
    if theta_min <= angle_tol:
        raise ZeroAngleError(
            f"minimal split angle {theta_min:.6e} is at or below "
            f"angle_tol = {angle_tol:g}; no finite optimal gamma"
        )
    rho = 1.0 - float(ang.cosines[0])
    s = problem.summary
    inv_gamma = min(mu_nm * rho, s.sigma_min * math.sqrt(rho))
    return 1.0 / inv_gamma


def agamma_bound(problem, gamma):
    """K-level bound at a given gamma that avoids the augmented
    eigensolve: min{1/gamma, rho * min{mu_min_plus, gamma * sigma_min^2}}.

    The inner term underestimates mu_min(A_gamma), so this is never
    tighter than wbound at the same gamma, but it is certified from the
    angle data alone."""
    inner = agamma_lower_bound(problem, gamma)
    rho, theta_min = rho_from_angles(problem)
    inv = 1.0 / gamma
    if inner <= inv:
        value, active = inner, "augmented-estimate"
    else:
        value, active = inv, "weight-inverse"
    return BoundReport(
        "agamma",
        value,
        True,
        {
            "gamma": gamma,
            "rho": rho,
            "theta_min": theta_min,
            "augmented_estimate": inner,
            "active": active,
            "rel_tol": problem.rel_tol,
        },
    )


def applicable_bounds(problem, gamma=None, weight=None, angle_tol=DEFAULT_ANGLE_TOL):
    """Every bound whose assumptions the problem satisfies, in a fixed
    deterministic order. ``gamma`` adds the scalar-weight reports,
    ``weight`` an additional full-weight report."""
    reports = [rusten_winther(problem.summary)]
    if problem.is_lowest_rank:
        reports.append(lowest_rank_bound(problem, angle_tol))
        reports.append(kernel_angle_bound(problem, angle_tol))
    reports.append(general_rank_bound(problem, angle_tol))
    if gamma is not None:
        reports.append(wbound(problem, ScalarWeight(gamma)))
        if problem.is_lowest_rank:
            reports.append(agamma_bound(problem, gamma))
    if weight is not None:
        reports.append(wbound(problem, weight))
    return reports
