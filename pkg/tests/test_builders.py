import pytest
from hypothesis import given
from hypothesis import strategies as st

from stieltjes_schur.builders import (
    L, Lambda, MatSeq, L_alpha, Theta, Theta_alpha, d_matrices, direct_sum, hankel, hankel_alpha,
    hankel_block, hankel_g, hankel_k, resolvent, resolvent_inv, schur_complements, structural,
    toeplitz_lower, toeplitz_pair, toeplitz_upper, xi_block, y_stack, z_stack,
)
from stieltjes_schur.errors import IndexRangeError, ShapeError, UnknownNameError
from stieltjes_schur.matrix import (
    CMatrix, GaussRational, det, ker_included, mat, ran_included, rank,
)

from conftest import class_members, inverse_step_fixture, gauss, matrices, sequences
from stieltjes_schur.transforms import inverse1


class TestMatSeq:
    def test_shapes_validated(self):
        with pytest.raises(ShapeError):
            MatSeq(1, 1, GaussRational(0), (mat(1), mat([[1, 2]])))

    def test_prefix_and_kappa(self, s125):
        assert s125.kappa == 2 and len(s125) == 3
        assert s125.prefix(1).mats == (mat(1), mat(2))
        with pytest.raises(IndexRangeError):
            s125.prefix(3)

    def test_direct_sum(self):
        s = MatSeq.of([mat(1), mat(2)])
        t = MatSeq.of([mat([[3, 4]]), mat([[5, 6]])])
        d = direct_sum(s, t)
        assert (d.p, d.q) == (2, 3)
        assert d[1] == mat([[2, 0, 0], [0, 5, 6]])


class TestHankel:
    def test_examples(self, s125):
        assert hankel(s125, 1) == mat([[1, 2], [2, 5]])
        assert hankel_g(s125, 0) == mat(5)
        assert hankel_alpha(s125, 0) == mat(2)
        assert hankel_k(s125, 0) == mat(2)

    def test_bounds(self, s125):
        with pytest.raises(IndexRangeError):
            hankel(s125, 2)
        with pytest.raises(IndexRangeError):
            hankel_alpha(s125, 1)
        with pytest.raises(UnknownNameError):
            hankel_block(s125, "X", 0)

    def test_stacks(self, s125):
        assert y_stack(s125, 1, 2) == mat([[2], [5]])
        assert z_stack(s125, 0, 1) == mat([[1, 2]])

    @given(class_members())
    def test_hermitian_blocks(self, s):
        n = 0
        while 2 * n <= s.kappa:
            assert hankel(s, n).is_hermitian()
            n += 1


class TestToeplitz:
    def test_example(self):
        s = MatSeq.of([mat(1), mat(2)])
        assert toeplitz_lower(s, 1) == mat([[1, 0], [2, 1]])
        assert toeplitz_upper(s, 1) == mat([[1, 2], [0, 1]])
        assert toeplitz_pair(s, 1).lower == toeplitz_lower(s, 1)

    def test_block_structure(self):
        A, B, C = mat([[1, 2], [3, 4]]), mat([[0, 1], [1, 0]]), mat([[5, 0], [0, 6]])
        lo = toeplitz_lower(MatSeq.of([A, B, C]), 2)
        for j in range(3):
            for k in range(3):
                expect = [A, B, C][j - k] if j >= k else CMatrix.zeros(2)
                assert lo.block_at(j, k, 2, 2) == expect

    @given(class_members())
    def test_upper_is_adjoint_of_lower_for_hermitian(self, s):
        for m in range(len(s)):
            assert toeplitz_upper(s, m) == toeplitz_lower(s.adjoint(), m).H


class TestStructural:
    def test_examples(self):
        z = GaussRational("3/7")
        assert resolvent(1, 1, z) == CMatrix.from_rows([[1, 0], [z, 1]])
        assert structural(1, 1, "T") == mat([[0, 0], [1, 0]])
        assert structural(2, 1, "v") == CMatrix.vstack([CMatrix.identity(2), CMatrix.zeros(2)])
        with pytest.raises(IndexRangeError):
            structural(1, 0, "IO")

    @given(gauss(), st.integers(1, 2), st.integers(0, 3))
    def test_resolvent_inverse(self, z, q, n):
        assert resolvent(q, n, z) @ resolvent_inv(q, n, z) == CMatrix.identity((n + 1) * q)

    @given(gauss(), st.integers(0, 3), matrices(max_size=2))
    def test_commutation(self, w, n, s0):
        S = s0.kron_identity(n + 1)
        assert S @ resolvent(s0.cols, n, w) == resolvent(s0.rows, n, w) @ S
        assert resolvent(s0.rows, n, w).H @ S == S @ resolvent(s0.cols, n, w).H


class TestSchurComplements:
    def test_examples(self, s125):
        assert L(s125, 1) == mat(1)
        assert Theta(s125, 1) == mat(4)
        assert Lambda(s125, 1) == mat(1)
        assert L_alpha(s125, 0) == mat(2)
        assert Theta(s125, 0) == mat(0) and Theta_alpha(s125, 0) == mat(0)
        sc = schur_complements(s125, 1)
        assert sc.L == mat(1) and sc.L_alpha is None

    def test_inverse_step_fixture_fixture(self):
        t, A = inverse_step_fixture()
        assert L_alpha(inverse1(t, A), 1) == A

    def test_xi(self, s125):
        assert xi_block(s125, 1, 2) == CMatrix.zeros(2)
        s = MatSeq.of([CMatrix.diag(1, 0), mat([[0, 1], [1, 0]])])
        assert xi_block(s, 0, 1) == mat([[0, 1], [1, 0]])

    @given(sequences(min_len=3, max_len=5))
    def test_rank_bookkeeping_on_dominant(self, s):
        if not all(ker_included(s[0], m) and ran_included(s[0], m) for m in s):
            return
        n = 1
        while 2 * n <= s.kappa:
            assert rank(hankel(s, n)) == rank(s[0]) + rank(Lambda(s, n))
            n += 1


class TestDMatrices:
    def test_example(self):
        assert d_matrices(MatSeq.of([mat(1), mat(2)]), 1).left == mat([[1, 0], [-2, 1]])

    @given(sequences(max_len=4))
    def test_unit_triangular_group(self, s):
        for m in range(len(s)):
            for variant in ("plain", "plus_alpha"):
                D = d_matrices(s, m, variant)
                assert det(D.left) == GaussRational(1) and det(D.right) == GaussRational(1)
                prod = D.left @ d_matrices(s, m).left
                for j in range(m + 1):
                    assert prod.block_at(j, j, s.p, s.p) == CMatrix.identity(s.p)
                    for k in range(j + 1, m + 1):
                        assert prod.block_at(j, k, s.p, s.p).is_zero()

    @given(class_members())
    def test_hermitian_adjoint(self, s):
        for m in range(len(s)):
            D = d_matrices(s, m)
            assert D.right == D.left.H

    def test_unknown_variant(self, s125):
        with pytest.raises(UnknownNameError):
            d_matrices(s125, 0, "other")
