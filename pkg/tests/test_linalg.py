"""Decomposition layer: validation, ordering, residuals, subspaces."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from saddlebounds.errors import (
    DimensionMismatchError,
    EmptySubspaceError,
    NonFiniteError,
    ParameterOutOfRangeError,
    StructureError,
)
from saddlebounds.linalg import (
    RectMatrix,
    SubspaceBasis,
    SymmetricMatrix,
    default_rank_tol,
    eig_residuals,
    kernel_basis,
    kernel_basis_rect,
    numerical_rank,
    principal_angles,
    range_basis,
    row_space_basis,
    svd,
    svd_residuals,
    sym_eig,
)


def _random_symmetric(n, seed):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, n))
    return (g + g.T) / 2.0


def _orthonormal_columns(n, k, seed):
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.standard_normal((n, k)))
    return q


class TestMatrixWrappers:
    def test_symmetrizes_and_freezes(self):
        m = np.array([[1.0, 2.0 + 1e-14], [2.0, 3.0]])
        sm = SymmetricMatrix.from_array(m)
        assert np.array_equal(sm.array, (m + m.T) / 2.0)
        assert not sm.array.flags.writeable
        with pytest.raises(ValueError):
            sm.array[0, 0] = 5.0

    def test_rejects_nonsquare(self):
        with pytest.raises(DimensionMismatchError):
            SymmetricMatrix.from_array(np.ones((2, 3)))

    def test_rejects_empty(self):
        with pytest.raises(DimensionMismatchError):
            SymmetricMatrix.from_array(np.zeros((0, 0)))

    def test_rejects_nan(self):
        with pytest.raises(NonFiniteError):
            SymmetricMatrix.from_array(np.array([[1.0, np.nan], [np.nan, 1.0]]))

    def test_rejects_asymmetric(self):
        with pytest.raises(StructureError):
            SymmetricMatrix.from_array(np.array([[1.0, 1.0], [1.001, 1.0]]))

    def test_rect_rejects_inf(self):
        with pytest.raises(NonFiniteError):
            RectMatrix.from_array(np.array([[1.0, np.inf]]))

    def test_rect_rejects_empty_dims(self):
        with pytest.raises(DimensionMismatchError):
            RectMatrix.from_array(np.zeros((0, 3)))


class TestDecompositions:
    def test_sym_eig_descending(self):
        dec = sym_eig(_random_symmetric(12, 0))
        assert np.all(np.diff(dec.values) <= 0)

    def test_sym_eig_matches_eigvalsh(self):
        m = _random_symmetric(10, 1)
        dec = sym_eig(m)
        np.testing.assert_allclose(
            dec.values, np.linalg.eigvalsh((m + m.T) / 2.0)[::-1], atol=1e-12
        )

    def test_eig_residuals_small(self):
        m = _random_symmetric(15, 2)
        dec = sym_eig(m)
        recon, orth = eig_residuals(m, dec)
        scale = max(1.0, float(np.linalg.norm(m, "fro")))
        assert recon <= 1e-10 * scale
        assert orth <= 1e-10

    def test_svd_residuals_small(self):
        rng = np.random.default_rng(3)
        m = rng.standard_normal((4, 9))
        dec = svd(m)
        recon, lorth, rorth = svd_residuals(m, dec)
        scale = max(1.0, float(np.linalg.norm(m, "fro")))
        assert recon <= 1e-10 * scale
        assert lorth <= 1e-10
        assert rorth <= 1e-10
        assert np.all(np.diff(dec.singular_values) <= 0)


class TestNumericalRank:
    def test_plain_counts(self):
        assert numerical_rank(np.array([3.0, 2.0, 1.0]), 1e-8) == 3
        assert numerical_rank(np.array([1.0, 1e-10, 0.0]), 1e-8) == 1
        assert numerical_rank(np.array([0.0, 0.0]), 1e-8) == 0
        assert numerical_rank(np.array([]), 1e-8) == 0

    def test_threshold_is_strict(self):
        # values exactly at rel_tol * top do not count
        assert numerical_rank(np.array([1.0, 1e-8]), 1e-8) == 1

    def test_rejects_bad_input(self):
        with pytest.raises(ParameterOutOfRangeError):
            numerical_rank(np.array([1.0, 2.0]), 1e-8)  # ascending
        with pytest.raises(ParameterOutOfRangeError):
            numerical_rank(np.array([1.0, -1.0]), 1e-8)  # negative
        with pytest.raises(ParameterOutOfRangeError):
            numerical_rank(np.array([1.0]), 0.0)  # tolerance
        with pytest.raises(DimensionMismatchError):
            numerical_rank(np.ones((2, 2)), 1e-8)
        with pytest.raises(NonFiniteError):
            numerical_rank(np.array([np.nan]), 1e-8)

    @given(
        exps=st.lists(st.integers(-30, 30), min_size=1, max_size=8),
        scale_exp=st.integers(-40, 40),
    )
    def test_scale_invariant(self, exps, scale_exp):
        # powers of two make the scaling exact, so the count cannot move
        vals = np.array(sorted((2.0 ** e for e in exps), reverse=True))
        c = 2.0 ** scale_exp
        assert numerical_rank(vals, 1e-6) == numerical_rank(c * vals, 1e-6)


class TestSubspaces:
    def test_range_kernel_split_dims(self):
        rng = np.random.default_rng(4)
        x = rng.standard_normal((9, 5))
        a = x @ x.T  # exact rank 5
        r = range_basis(a)
        k = kernel_basis(a)
        assert (r.dim, k.dim) == (5, 4)
        assert r.kind == "range" and k.kind == "kernel"
        # the two bases are mutually orthogonal
        assert np.abs(r.columns.T @ k.columns).max() <= 1e-8

    def test_kernel_basis_rect_annihilates(self):
        rng = np.random.default_rng(5)
        b = rng.standard_normal((3, 7))
        nb = kernel_basis_rect(b)
        assert nb.dim == 4
        assert np.abs(b @ nb.columns).max() <= 1e-10
        gram = nb.columns.T @ nb.columns
        np.testing.assert_allclose(gram, np.eye(4), atol=1e-12)

    def test_row_space_basis_spans_rows(self):
        rng = np.random.default_rng(6)
        b = rng.standard_normal((4, 8))
        rb = row_space_basis(b)
        assert rb.dim == 4
        proj = rb.columns @ (rb.columns.T @ b.T)
        np.testing.assert_allclose(proj, b.T, atol=1e-10)

    def test_default_rank_tol(self):
        assert default_rank_tol(8) == 8 * np.finfo(float).eps


class TestPrincipalAngles:
    def test_one_dimensional_matches_inner_product(self):
        rng = np.random.default_rng(7)
        x = rng.standard_normal(6)
        y = rng.standard_normal(6)
        x /= np.linalg.norm(x)
        y /= np.linalg.norm(y)
        bx = SubspaceBasis(6, 1, x[:, None], "range", 1e-12)
        by = SubspaceBasis(6, 1, y[:, None], "range", 1e-12)
        ang = principal_angles(bx, by)
        assert len(ang) == 1
        assert abs(float(ang.cosines[0]) - abs(float(x @ y))) <= 1e-12

    def test_count_is_smaller_dimension(self):
        q = _orthonormal_columns(8, 5, 8)
        bx = SubspaceBasis(8, 3, q[:, :3], "range", 1e-12)
        by = SubspaceBasis(8, 2, q[:, 3:5], "range", 1e-12)
        assert len(principal_angles(bx, by)) == 2

    def test_orthogonal_subspaces_give_right_angles(self):
        q = _orthonormal_columns(7, 4, 9)
        bx = SubspaceBasis(7, 2, q[:, :2], "range", 1e-12)
        by = SubspaceBasis(7, 2, q[:, 2:4], "range", 1e-12)
        ang = principal_angles(bx, by)
        assert np.abs(ang.cosines).max() <= 1e-12
        np.testing.assert_allclose(ang.angles, np.pi / 2, atol=1e-10)

    @given(seed=st.integers(0, 2**32 - 1))
    def test_self_angles_are_zero(self, seed):
        rng = np.random.default_rng(seed)
        q = _orthonormal_columns(6, 2, seed)
        # mix the columns by a rotation: same subspace, different basis
        r, _ = np.linalg.qr(rng.standard_normal((2, 2)))
        bx = SubspaceBasis(6, 2, q, "range", 1e-12)
        by = SubspaceBasis(6, 2, q @ r, "range", 1e-12)
        ang = principal_angles(bx, by)
        assert np.min(ang.cosines) >= 1.0 - 1e-12
        assert np.max(ang.angles) <= 1e-5

    def test_cosines_clipped_to_unit_interval(self):
        q = _orthonormal_columns(5, 2, 10)
        b = SubspaceBasis(5, 2, q, "range", 1e-12)
        cos = principal_angles(b, b).cosines
        assert np.all(cos <= 1.0) and np.all(cos >= 0.0)

    def test_rejects_mismatched_ambient(self):
        bx = SubspaceBasis(5, 1, np.eye(5)[:, :1], "range", 1e-12)
        by = SubspaceBasis(6, 1, np.eye(6)[:, :1], "range", 1e-12)
        with pytest.raises(DimensionMismatchError):
            principal_angles(bx, by)

    def test_rejects_empty_subspace(self):
        bx = SubspaceBasis(5, 0, np.zeros((5, 0)), "kernel", 1e-12)
        by = SubspaceBasis(5, 1, np.eye(5)[:, :1], "range", 1e-12)
        with pytest.raises(EmptySubspaceError):
            principal_angles(bx, by)
