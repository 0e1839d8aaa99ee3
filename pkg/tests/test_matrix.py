import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stieltjes_schur.errors import ShapeError
from stieltjes_schur.matrix import (
    CMatrix, Definiteness, GaussRational, det, inverse, is_pd, is_psd, ker_included, mat, pinv,
    psd_check, ran_included, rank, rank_factorization, subspace_tests,
)

from conftest import hermitian, matrices
from oracles import leibniz_det, principal_minor_verdict, to_pairs

I = GaussRational(0, 1)


def penrose(A, X):
    return (A @ X @ A == A, X @ A @ X == X, (A @ X).H == A @ X, (X @ A).H == X @ A)


class TestGaussRational:
    def test_canonical_form(self):
        x = GaussRational("6/4", "-2/8")
        assert (str(x.re), str(x.im)) == ("3/2", "-1/4")
        assert x == GaussRational("3/2") - I * GaussRational("1/4")
        assert hash(GaussRational("2/4")) == hash(GaussRational("1/2"))

    def test_field_operations(self):
        z = GaussRational(1, 2)
        assert z * z.conjugate() == GaussRational(5)
        assert z * z.pinv() == GaussRational(1)
        assert GaussRational(0).pinv() == GaussRational(0)
        assert z ** 0 == GaussRational(1) and GaussRational(0) ** 0 == GaussRational(1)
        assert (z / 2) * 2 == z

    def test_floats_rejected(self):
        with pytest.raises(TypeError):
            GaussRational(0.5)

    def test_immutable(self):
        with pytest.raises(AttributeError):
            GaussRational(1).re = 2


class TestPinvExamples:
    def test_zero(self):
        assert pinv(CMatrix.zeros(2, 3)) == CMatrix.zeros(3, 2)

    def test_diagonal(self):
        assert pinv(CMatrix.diag(2, 0)) == CMatrix.diag(GaussRational("1/2"), 0)

    def test_rank_one(self):
        A = mat([[1, 1], [1, 1]])
        X = pinv(A)
        assert X == A.scale(GaussRational("1/4"))
        assert all(penrose(A, X))


class TestPsdExamples:
    @pytest.mark.parametrize("rows, verdict", [
        ([[1, 0], [0, 0]], Definiteness.PSD),
        ([[1, 2], [2, 1]], Definiteness.INDEFINITE),
        ([[2, 1], [1, 1]], Definiteness.PD),
        ([[1, 2], [0, 1]], Definiteness.NOT_HERMITIAN),
        ([[0, 1], [1, 0]], Definiteness.INDEFINITE),
        ([[0, 0], [0, 0]], Definiteness.PSD),
    ])
    def test_verdicts(self, rows, verdict):
        assert psd_check(mat(rows)) is verdict

    def test_complex_hermitian(self):
        A = CMatrix.from_rows([[2, I], [-I, 1]])
        assert psd_check(A) is Definiteness.PD
        assert psd_check(CMatrix.from_rows([[1, I], [-I, 1]])) is Definiteness.PSD

    def test_non_square(self):
        with pytest.raises(ShapeError):
            psd_check(CMatrix.zeros(2, 3))

    def test_wire_values(self):
        assert Definiteness.PSD.value == "psd" and Definiteness.NOT_HERMITIAN.value == "not-hermitian"


class TestSubspaces:
    def test_examples(self):
        assert ker_included(CMatrix.diag(1, 0), CMatrix.diag(2, 0))
        assert not ker_included(CMatrix.diag(1, 0), CMatrix.identity(2))
        assert ran_included(mat([[1, 1], [1, 1]]), mat([[1], [1]]))
        assert not ran_included(mat([[1, 1], [1, 1]]), mat([[1], [0]]))

    def test_subspace_tests_shapes(self):
        both = subspace_tests(CMatrix.diag(1, 0), CMatrix.diag(2, 0))
        assert both == (True, True)
        r = subspace_tests(mat([[1, 1], [1, 1]]), mat([[1], [1]]))
        assert r.ker_included is None and r.ran_included is True
        with pytest.raises(ShapeError):
            subspace_tests(CMatrix.zeros(2, 3), CMatrix.zeros(4, 5))


class TestDeterminantRankInverse:
    def test_small(self):
        A = mat([[1, 2], [3, 4]])
        assert det(A) == GaussRational(-2)
        assert inverse(A) @ A == CMatrix.identity(2)
        assert rank(mat([[1, 2], [2, 4]])) == 1
        with pytest.raises(ZeroDivisionError):
            inverse(mat([[1, 2], [2, 4]]))

    @given(matrices(max_size=4))
    def test_rank_factorization(self, A):
        F, G = rank_factorization(A)
        assert F @ G == A
        assert F.cols == G.rows == rank(A)

    @given(st.integers(1, 3).flatmap(lambda n: st.tuples(matrices(n, n), matrices(n, n))))
    def test_det_multiplicative(self, pair):
        A, B = pair
        assert det(A @ B) == det(A) * det(B)

    @given(st.integers(1, 3).flatmap(lambda n: matrices(n, n)))
    def test_det_against_leibniz(self, A):
        d = det(A)
        ref = leibniz_det(to_pairs(A))
        assert (str(d.re), str(d.im)) == (str(ref[0]), str(ref[1]))


class TestProperties:
    @given(matrices(max_size=4))
    def test_penrose(self, A):
        assert all(penrose(A, pinv(A)))

    @given(matrices(max_size=4))
    def test_pinv_involution_and_adjoint(self, A):
        assert pinv(pinv(A)) == A
        assert pinv(A).H == pinv(A.H)

    @given(matrices(max_size=3))
    def test_pinv_partial_isometries(self, A):
        U = CMatrix.vstack([CMatrix.identity(A.rows), CMatrix.zeros(1, A.rows)])
        V = CMatrix.hstack([CMatrix.identity(A.cols), CMatrix.zeros(A.cols, 2)])
        assert pinv(U @ A @ V) == V.H @ pinv(A) @ U.H

    @given(st.tuples(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.integers(1, 3))
           .flatmap(lambda d: st.tuples(matrices(d[0], d[1]), matrices(d[1], d[2]),
                                        matrices(d[2], d[3]))))
    def test_associativity(self, triple):
        A, B, C = triple
        assert (A @ B) @ C == A @ (B @ C)

    @given(matrices(max_size=4))
    def test_adjoint_involution(self, A):
        assert A.H.H == A

    @given(hermitian())
    def test_psd_agrees_with_minors(self, A):
        assert psd_check(A).value == principal_minor_verdict(to_pairs(A))

    @given(matrices(max_size=3))
    def test_gram_is_psd(self, B):
        G = B.H @ B
        assert is_psd(G)
        assert is_pd(G) == (rank(B) == B.cols)

    @given(st.integers(1, 3).flatmap(lambda n: st.tuples(matrices(n, n), matrices(n, n))))
    def test_subspace_identities(self, pair):
        A, B = pair
        assert ker_included(A, B @ A)
        assert ran_included(A, A @ B)
        assert ker_included(A, B) == (rank(CMatrix.vstack([A, B])) == rank(A))
        assert ran_included(A, B) == (rank(CMatrix.hstack([A, B])) == rank(A))


def test_exhaustive_real_2x2():
    for a, b, d in itertools.product(range(-2, 3), repeat=3):
        A = mat([[a, b], [b, d]])
        assert psd_check(A).value == principal_minor_verdict(to_pairs(A))
