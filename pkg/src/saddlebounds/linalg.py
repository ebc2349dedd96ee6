"""Dense symmetric eigendecompositions, SVD, numerical rank, orthonormal
subspace bases, and principal angles.

Matrices are validated on entry and their backing arrays are marked
read-only, so every function in this module is a pure map from immutable
values to immutable values and results can be shared across threads.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceError,
    DimensionMismatchError,
    EmptySubspaceError,
    NonFiniteError,
    ParameterOutOfRangeError,
    StructureError,
)

EPS = float(np.finfo(float).eps)

DEFAULT_SYM_TOL = 1e-12


def default_rank_tol(dim):
    """Relative tolerance separating numerically nonzero values: dim * eps."""
    return dim * EPS


def _frozen(arr):
    out = np.array(arr, dtype=float, order="C")
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class SymmetricMatrix:
    """Square real matrix stored exactly symmetrized as (M + M^T) / 2."""

    array: np.ndarray

    @classmethod
    def from_array(cls, m, sym_tol=DEFAULT_SYM_TOL):
        arr = np.asarray(m, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise DimensionMismatchError(
                f"expected a nonempty square matrix, got shape {arr.shape}"
            )
        if not np.isfinite(arr).all():
            raise NonFiniteError("matrix contains NaN or Inf entries")
        scale = float(np.abs(arr).max())
        skew = float(np.abs(arr - arr.T).max())
        if skew > sym_tol * scale:
            raise StructureError(
                f"matrix is not symmetric: max |M - M^T| = {skew:.3e} exceeds "
                f"{sym_tol:g} * max|M| = {sym_tol * scale:.3e}"
            )
        return cls(_frozen((arr + arr.T) / 2.0))

    @property
    def order(self):
        return self.array.shape[0]


@dataclass(frozen=True, eq=False)
class RectMatrix:
    """Real m-by-n matrix with finite entries."""

    array: np.ndarray

    @classmethod
    def from_array(cls, m):
        arr = np.asarray(m, dtype=float)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise DimensionMismatchError(
                f"expected a nonempty 2-D matrix, got shape {arr.shape}"
            )
        if not np.isfinite(arr).all():
            raise NonFiniteError("matrix contains NaN or Inf entries")
        return cls(_frozen(arr))

    @property
    def rows(self):
        return self.array.shape[0]

    @property
    def cols(self):
        return self.array.shape[1]


@dataclass(frozen=True, eq=False)
class EigDecomposition:
    """Eigenpairs of a symmetric matrix, values sorted descending.

    Column i of ``vectors`` belongs to ``values[i]``. Ties keep the order
    in which the solver produced them.
    """

    values: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True, eq=False)
class SvdDecomposition:
    """Economy-size SVD: singular values descending, factor columns match."""

    singular_values: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """Orthonormal basis of a range or kernel, with the rank tolerance that
    selected it."""

    ambient_dim: int
    dim: int
    columns: np.ndarray
    kind: str  # "range" or "kernel"
    rank_tol: float


@dataclass(frozen=True, eq=False)
class PrincipalAngles:
    """Cosines descending in [0, 1] and the matching angles ascending."""

    cosines: np.ndarray
    angles: np.ndarray

    def __len__(self):
        return self.cosines.shape[0]


def _coerce_symmetric(m):
    return m if isinstance(m, SymmetricMatrix) else SymmetricMatrix.from_array(m)


def _coerce_rect(m):
    return m if isinstance(m, RectMatrix) else RectMatrix.from_array(m)


def sym_eig(m):
    """Full eigendecomposition of a symmetric matrix, values descending."""
    sm = _coerce_symmetric(m)
    try:
        values, vectors = np.linalg.eigh(sm.array)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"symmetric eigensolve failed: {exc}") from exc
    order = np.argsort(-values, kind="stable")
    return EigDecomposition(_frozen(values[order]), _frozen(vectors[:, order]))


def svd(m):
    """Economy-size singular value decomposition of a rectangular matrix."""
    rm = _coerce_rect(m)
    try:
        u, s, vh = np.linalg.svd(rm.array, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"singular value decomposition failed: {exc}") from exc
    return SvdDecomposition(_frozen(s), _frozen(u), _frozen(vh.T))


def numerical_rank(values, rel_tol):
    """Count the values strictly above rel_tol times the largest one.

    ``values`` must be sorted descending and nonnegative. An all-zero
    array has rank zero regardless of the tolerance.
    """
    vals = np.asarray(values, dtype=float)
    if vals.ndim != 1:
        raise DimensionMismatchError("numerical_rank expects a 1-D value array")
    if not rel_tol > 0:
        raise ParameterOutOfRangeError(f"rel_tol must be positive, got {rel_tol}")
    if vals.size == 0:
        return 0
    if not np.isfinite(vals).all():
        raise NonFiniteError("values contain NaN or Inf")
    if np.any(np.diff(vals) > 0):
        raise ParameterOutOfRangeError("values must be sorted descending")
    if vals[-1] < 0:
        raise ParameterOutOfRangeError("values must be nonnegative")
    top = float(vals[0])
    if top == 0.0:
        return 0
    return int(np.count_nonzero(vals > rel_tol * top))


def _abs_order(values):
    # stable, so strictly descending positives keep their positions
    return np.argsort(-np.abs(values), kind="stable")


def _basis_from_eig(dec, rel_tol, kind):
    n = dec.values.shape[0]
    order = _abs_order(dec.values)
    mags = np.abs(dec.values)[order]
    rank = numerical_rank(mags, rel_tol)
    if kind == "range":
        cols = dec.vectors[:, order[:rank]]
        dim = rank
    else:
        cols = dec.vectors[:, order[rank:]]
        dim = n - rank
    return SubspaceBasis(n, dim, _frozen(cols), kind, rel_tol)


def range_basis(m, rel_tol=None):
    """Orthonormal basis of the numerical range of a symmetric matrix."""
    sm = _coerce_symmetric(m)
    if rel_tol is None:
        rel_tol = default_rank_tol(sm.order)
    return _basis_from_eig(sym_eig(sm), rel_tol, "range")


def kernel_basis(m, rel_tol=None):
    """Orthonormal basis of the numerical null space of a symmetric matrix."""
    sm = _coerce_symmetric(m)
    if rel_tol is None:
        rel_tol = default_rank_tol(sm.order)
    return _basis_from_eig(sym_eig(sm), rel_tol, "kernel")


def kernel_basis_rect(m, rel_tol=None):
    """Orthonormal basis of the null space of a rectangular matrix."""
    rm = _coerce_rect(m)
    if rel_tol is None:
        rel_tol = default_rank_tol(max(rm.rows, rm.cols))
    try:
        _, s, vh = np.linalg.svd(rm.array, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"singular value decomposition failed: {exc}") from exc
    rank = numerical_rank(s, rel_tol)
    return SubspaceBasis(rm.cols, rm.cols - rank, _frozen(vh[rank:].T), "kernel", rel_tol)


def row_space_basis(m, rel_tol=None):
    """Orthonormal basis of the row space (range of the transpose)."""
    rm = _coerce_rect(m)
    if rel_tol is None:
        rel_tol = default_rank_tol(max(rm.rows, rm.cols))
    dec = svd(rm)
    rank = numerical_rank(dec.singular_values, rel_tol)
    return SubspaceBasis(rm.cols, rank, _frozen(dec.right_vectors[:, :rank]), "range", rel_tol)


def principal_angles(x, y):
    """Principal angles between two subspaces given by orthonormal bases.

    The cosines are the singular values of X^T Y clamped into [0, 1];
    their count is the smaller of the two subspace dimensions.
    """
    if x.ambient_dim != y.ambient_dim:
        raise DimensionMismatchError(
            f"subspaces live in different ambient spaces: {x.ambient_dim} vs {y.ambient_dim}"
        )
    if x.dim == 0 or y.dim == 0:
        raise EmptySubspaceError("principal angles need both subspaces nonempty")
    try:
        s = np.linalg.svd(x.columns.T @ y.columns, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"singular value decomposition failed: {exc}") from exc
    cos = np.clip(s, 0.0, 1.0)
    return PrincipalAngles(_frozen(cos), _frozen(np.arccos(cos)))


def eig_residuals(m, dec):
    """Frobenius residuals (reconstruction, orthogonality) of an
    eigendecomposition; callers compare them to their scaled tolerances."""
    arr = _coerce_symmetric(m).array
    recon = np.linalg.norm(arr @ dec.vectors - dec.vectors * dec.values, "fro")
    eye = np.eye(dec.vectors.shape[1])
    orth = np.linalg.norm(dec.vectors.T @ dec.vectors - eye, "fro")
    return float(recon), float(orth)


def svd_residuals(m, dec):
    """Frobenius residuals (reconstruction, left orthogonality, right
    orthogonality) of an economy SVD."""
    arr = _coerce_rect(m).array
    recon = np.linalg.norm(
        arr - (dec.left_vectors * dec.singular_values) @ dec.right_vectors.T, "fro"
    )
    k = dec.singular_values.shape[0]
    eye = np.eye(k)
    lorth = np.linalg.norm(dec.left_vectors.T @ dec.left_vectors - eye, "fro")
    rorth = np.linalg.norm(dec.right_vectors.T @ dec.right_vectors - eye, "fro")
    return float(recon), float(lorth), float(rorth)
