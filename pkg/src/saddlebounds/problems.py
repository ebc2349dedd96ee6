"""Seeded generators for saddle problems with known structure.

Five families:

* ``toy-2x2``: A = diag(1, 0) with a unit-norm row B = [b1 b2]. The
  3x3 saddle matrix has characteristic polynomial
  l^3 - l^2 - l + b2^2, which makes it the standard closed-form check.
* ``remark-3x3``: A = diag(1, alpha, 0) with B = [[0, 0, 1], [1, 0, 0]].
  Positive eigenvalues are alpha, 1 and the golden ratio, yet the
  split-based bound collapses to zero because the top eigenvector of A
  lies inside range(B^T).
* ``prescribed-angles``: builds (A, B) whose principal angles between
  range(A) and range(B^T) equal a requested list exactly, up to
  orthogonal mixing. Needs n >= 2m.
* ``ipm-like``: A = H + D with H a seeded PSD matrix of rank n - m and D
  a diagonal perturbation of size delta on a seeded index subset, the
  shape that barrier methods produce as they converge.
* ``random-lowest-rank``: A = X X^T of exact rank n - m with a random
  full-row-rank B.

Identical specs (family, parameters, seed) yield bit-identical matrices.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import SaddleProblem
from .errors import (
    GenerationFailedError,
    InfeasibleDimensionsError,
    ParameterOutOfRangeError,
    ProblemValidationError,
)
from .linalg import principal_angles

FAMILIES = (
    "toy-2x2",
    "remark-3x3",
    "prescribed-angles",
    "ipm-like",
    "random-lowest-rank",
)

_NORM_TOL = 1e-12
_ALPHA_MARGIN = 1e-12
_ANGLE_ROUNDTRIP_TOL = 1e-8
_MAX_RETRIES = 16


@dataclass(frozen=True)
class GeneratorSpec:
    """JSON-serializable recipe: family name, parameter dict, seed."""

    family: str
    parameters: dict = field(default_factory=dict)
    seed: int = 0

    def to_json(self):
        return {"family": self.family, "parameters": dict(self.parameters), "seed": self.seed}

    def to_json_str(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, obj):
        if not isinstance(obj, dict):
            raise ParameterOutOfRangeError("generator spec must be a JSON object")
        family = obj.get("family")
        if family not in FAMILIES:
            raise ParameterOutOfRangeError(
                f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}"
            )
        params = obj.get("parameters", {})
        if not isinstance(params, dict):
            raise ParameterOutOfRangeError("parameters must be a JSON object")
        seed = obj.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
            raise ParameterOutOfRangeError(f"seed must be a nonnegative integer, got {seed!r}")
        return cls(family, dict(params), seed)


def _orthogonal(rng, dim):
    """Seeded Haar-like orthogonal factor: QR of a Gaussian matrix with
    the sign of R's diagonal fixed, so the result is deterministic."""
    g = rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


def gen_toy(b1, b2, allow_boundary=False):
    """The 3x3 closed-form problem: A = diag(1, 0), B = [b1 b2].

    Requires b1^2 + b2^2 = 1 with both entries positive; the boundary
    values b1 in {0, 1} are admitted only with ``allow_boundary`` (test
    use), and b2 = 0 then fails validation because K is singular.
    """
    b1 = float(b1)
    b2 = float(b2)
    if not (math.isfinite(b1) and math.isfinite(b2)):
        raise ParameterOutOfRangeError("b1 and b2 must be finite")
    if abs(b1 * b1 + b2 * b2 - 1.0) > _NORM_TOL:
        raise ParameterOutOfRangeError(
            f"need b1^2 + b2^2 = 1 within {_NORM_TOL:g}, got {b1 * b1 + b2 * b2!r}"
        )
    if b1 < 0 or b2 < 0:
        raise ParameterOutOfRangeError("b1 and b2 must be nonnegative")
    on_boundary = b1 == 0.0 or b2 == 0.0
    if on_boundary and not allow_boundary:
        raise ParameterOutOfRangeError(
            "b1 and b2 must be strictly positive (pass allow_boundary for the edge cases)"
        )
    a = np.diag([1.0, 0.0])
    b = np.array([[b1, b2]])
    return SaddleProblem(a, b)


def gen_remark(alpha):
    """The 5x5 counterexample shape: A = diag(1, alpha, 0) with
    B = [[0, 0, 1], [1, 0, 0]] and 0 < alpha < 1.

    Its positive eigenvalues are alpha, 1, (1 + sqrt(5))/2, but the
    split-based bound is zero: range(B^T) contains the top eigenvector
    of A. The upper end is enforced strictly at 1 - 1e-12 so the split
    boundary stays unambiguous.
    """
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= 0 or alpha >= 1.0 - _ALPHA_MARGIN:
        raise ParameterOutOfRangeError(
            f"alpha must lie in (0, 1 - {_ALPHA_MARGIN:g}), got {alpha!r}"
        )
    a = np.diag([1.0, alpha, 0.0])
    b = np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])
    return SaddleProblem(a, b)


def gen_prescribed_angles(n, m, a_eigs, b_sing_vals, thetas, seed=0):
    """Problem whose principal angles between range(A) and range(B^T)
    equal ``thetas`` (ascending, in (0, pi/2]) up to roundoff.

    The construction takes mutually orthonormal seeded frames E (n x m),
    F (n x m), G (n x (n - 2m)), sets V = E,
    U = [E diag(cos) + F diag(sin) | G], A = U diag(a_eigs) U^T and
    B = L diag(b_sing_vals) V^T with a seeded orthogonal L. Since U has
    orthonormal columns, a_eigs are exactly the nonzero eigenvalues of A
    and rank(A) = n - m. The measured angles are checked against the
    request before returning.
    """
    n = int(n)
    m = int(m)
    if m < 1 or n < 2 * m:
        raise InfeasibleDimensionsError(f"need n >= 2m with m >= 1, got n = {n}, m = {m}")
    a_eigs = np.asarray(a_eigs, dtype=float)
    b_sing_vals = np.asarray(b_sing_vals, dtype=float)
    thetas = np.asarray(thetas, dtype=float)
    if a_eigs.shape != (n - m,):
        raise ParameterOutOfRangeError(
            f"a_eigs must have length n - m = {n - m}, got {a_eigs.shape}"
        )
    if b_sing_vals.shape != (m,):
        raise ParameterOutOfRangeError(
            f"b_sing_vals must have length m = {m}, got {b_sing_vals.shape}"
        )
    if thetas.shape != (m,):
        raise ParameterOutOfRangeError(f"thetas must have length m = {m}, got {thetas.shape}")
    if not np.isfinite(a_eigs).all() or np.any(a_eigs <= 0):
        raise ParameterOutOfRangeError("a_eigs must be finite and strictly positive")
    if not np.isfinite(b_sing_vals).all() or np.any(b_sing_vals <= 0):
        raise ParameterOutOfRangeError("b_sing_vals must be finite and strictly positive")
    if not np.isfinite(thetas).all() or np.any(thetas <= 0) or np.any(thetas > np.pi / 2):
        raise ParameterOutOfRangeError("thetas must lie in (0, pi/2]")
    if np.any(np.diff(thetas) < 0):
        raise ParameterOutOfRangeError("thetas must be sorted ascending")

    rng = np.random.default_rng(seed)
    q = _orthogonal(rng, n)
    e = q[:, :m]
    f = q[:, m : 2 * m]
    g = q[:, 2 * m :]
    u = np.hstack([e * np.cos(thetas) + f * np.sin(thetas), g])
    a = (u * a_eigs) @ u.T
    left = _orthogonal(rng, m)
    b = left @ (b_sing_vals[:, None] * e.T)
    problem = SaddleProblem(a, b)

    measured = principal_angles(problem.range_a, problem.row_space_b).angles
    # measured ascending vs requested ascending
    err = float(np.max(np.abs(np.sort(measured) - thetas)))
    if err > _ANGLE_ROUNDTRIP_TOL:
        raise GenerationFailedError(
            f"constructed angles deviate from the request by {err:.3e} "
            f"(tolerance {_ANGLE_ROUNDTRIP_TOL:g})"
        )
    return problem


def gen_ipm_like(n, m, delta, seed=0):
    """A = H + D with H seeded PSD of rank n - m and D diagonal with a
    seeded subset of entries equal to delta; B is a seeded dense
    full-row-rank matrix. delta = 0 gives an exactly lowest-rank
    problem, small positive delta the nearly-rank-deficient shape that
    interior-point iterations approach."""
    n = int(n)
    m = int(m)
    if m < 1 or m >= n:
        raise ParameterOutOfRangeError(f"need 1 <= m < n, got n = {n}, m = {m}")
    delta = float(delta)
    if not math.isfinite(delta) or delta < 0:
        raise ParameterOutOfRangeError(f"delta must be finite and >= 0, got {delta!r}")
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, n - m))
    h = x @ x.T
    d = np.zeros(n)
    if delta > 0:
        count = int(rng.integers(1, m + 1))
        idx = rng.choice(n, size=count, replace=False)
        d[idx] = delta
    a = h + np.diag(d)
    b = rng.standard_normal((m, n))
    return SaddleProblem(a, b)


def gen_random_lowest_rank(n, m, seed=0):
    """A = X X^T of exact rank n - m with seeded Gaussian X and B; if
    validation fails the seed is incremented, up to 16 attempts."""
    n = int(n)
    m = int(m)
    if m < 1 or m >= n:
        raise ParameterOutOfRangeError(f"need 1 <= m < n, got n = {n}, m = {m}")
    last = None
    for attempt in range(_MAX_RETRIES):
        rng = np.random.default_rng(seed + attempt)
        x = rng.standard_normal((n, n - m))
        a = x @ x.T
        b = rng.standard_normal((m, n))
        try:
            return SaddleProblem(a, b)
        except ProblemValidationError as exc:
            last = exc
    raise GenerationFailedError(
        f"no valid problem after {_MAX_RETRIES} seeds starting at {seed}"
    ) from last


def _params(spec, required, optional=()):
    given = set(spec.parameters)
    missing = set(required) - given
    extra = given - set(required) - set(optional)
    if missing:
        raise ParameterOutOfRangeError(
            f"family {spec.family!r} is missing parameters: {', '.join(sorted(missing))}"
        )
    if extra:
        raise ParameterOutOfRangeError(
            f"family {spec.family!r} got unknown parameters: {', '.join(sorted(extra))}"
        )
    return spec.parameters


def generate_problem(spec):
    """Build the SaddleProblem a GeneratorSpec describes."""
    if spec.family == "toy-2x2":
        p = _params(spec, ("b1", "b2"), ("allow_boundary",))
        return gen_toy(p["b1"], p["b2"], bool(p.get("allow_boundary", False)))
    if spec.family == "remark-3x3":
        p = _params(spec, ("alpha",))
        return gen_remark(p["alpha"])
    if spec.family == "prescribed-angles":
        p = _params(spec, ("n", "m", "a_eigs", "b_sing_vals", "thetas"))
        return gen_prescribed_angles(
            p["n"], p["m"], p["a_eigs"], p["b_sing_vals"], p["thetas"], spec.seed
        )
    if spec.family == "ipm-like":
        p = _params(spec, ("n", "m", "delta"))
        return gen_ipm_like(p["n"], p["m"], p["delta"], spec.seed)
    if spec.family == "random-lowest-rank":
        p = _params(spec, ("n", "m"))
        return gen_random_lowest_rank(p["n"], p["m"], spec.seed)
    raise ParameterOutOfRangeError(
        f"unknown family {spec.family!r}; expected one of {', '.join(FAMILIES)}"
    )
