import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from repunit_tridiag import (
    TridiagonalParams,
    det_bounds,
    dense_materialize,
    dense_symmetrized,
    determinant_continuant,
    eigenpair,
    eigenvalue,
    eigenvector,
    eigenvector_log,
    hyperbolic_product,
    hyperbolic_product_log,
    matvec_v,
    repunit_exact,
    repunit_float,
    spectral_product,
    spectrum,
    weighted_inner,
)
from repunit_tridiag.scalars import DomainError, log_fraction

GRID_B = [0.25, 0.5, 0.999, 1.0, 1.001, 2.0, 10.0]


def elimination_det(M):
    """Test-local oracle: rational Gaussian elimination."""
    A = [[Fraction(v) for v in row] for row in M]
    n, det = len(A), Fraction(1)
    for c in range(n):
        piv = next(r for r in range(c, n) if A[r][c] != 0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return det


class TestEigenvalue:
    def test_midpoint_angle(self):
        assert eigenvalue(TridiagonalParams(1, 9), 1) == pytest.approx(10, abs=1e-14)

    def test_two_by_two_oracle(self):
        oracle = sorted(np.linalg.eigvals(np.array([[5.0, 1.0], [4.0, 5.0]])).real, reverse=True)
        np.testing.assert_allclose(oracle, [7, 3])
        p = TridiagonalParams(2, 4)
        assert eigenvalue(p, 1) == pytest.approx(7, rel=1e-15)
        assert eigenvalue(p, 2) == pytest.approx(3, rel=1e-15)

    @pytest.mark.parametrize("k", [0, 3])
    def test_index_range(self, k):
        with pytest.raises(IndexError):
            eigenvalue(TridiagonalParams(2, 4), k)

    def test_general_eigensolver_on_nonsymmetric_v(self):
        for b in (0.3, 2.0, 7.5):
            p = TridiagonalParams(9, b)
            oracle = np.sort(np.linalg.eigvals(dense_materialize(p)).real)[::-1]
            np.testing.assert_allclose(spectrum(p).as_array(), oracle, rtol=1e-9)


class TestSpectrum:
    def test_scalar(self):
        assert spectrum(TridiagonalParams(1, 3.5)).values == pytest.approx((4.5,))

    def test_b_one_oracle(self):
        oracle = np.linalg.eigvalsh(dense_symmetrized(TridiagonalParams(3, 1.0)))[::-1]
        got = spectrum(TridiagonalParams(3, 1))
        np.testing.assert_allclose(got.as_array(), [2 + math.sqrt(2), 2, 2 - math.sqrt(2)], atol=1e-14)
        np.testing.assert_allclose(got.as_array(), oracle, atol=1e-14)

    def test_two_by_two(self):
        np.testing.assert_allclose(spectrum(TridiagonalParams(2, 4)).as_array(), [7, 3], rtol=1e-15)

    @pytest.mark.parametrize("b", GRID_B + [49 / 4])
    @pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 16])
    def test_dense_symmetric_oracle(self, n, b):
        p = TridiagonalParams(n, b)
        dense = np.linalg.eigvalsh(dense_symmetrized(p))
        got = np.sort(spectrum(p).as_array())
        assert np.max(np.abs(got - dense)) <= 1e-10

    @pytest.mark.parametrize("b", GRID_B)
    def test_strictly_decreasing_and_bounded(self, b):
        for n in (1, 2, 7, 64, 513):
            s = spectrum(TridiagonalParams(n, b))
            vals = list(s)
            assert all(x > y for x, y in zip(vals, vals[1:]))
            assert all(v > s.lower_bound for v in vals)
            assert s.lower_bound >= 0

    def test_textbook_formula(self):
        # agree with the unrearranged b + 1 + 2 sqrt(b) cos(k pi/(n+1)) where it is well conditioned
        p = TridiagonalParams(20, 3.0)
        k = np.arange(1, 21)
        naive = 4.0 + 2 * math.sqrt(3.0) * np.cos(k * math.pi / 21)
        np.testing.assert_allclose(spectrum(p).as_array(), naive, rtol=1e-14)

    def test_smallest_eigenvalue_near_one_is_accurate(self):
        # lambda_n = 4 sin^2(pi / (2(n+1))) at b = 1; the naive form loses ~10 digits here
        n = 10 ** 5
        want = 4 * math.sin(math.pi / (2 * (n + 1))) ** 2
        assert eigenvalue(TridiagonalParams(n, 1.0), n) == pytest.approx(want, rel=1e-14)

    def test_value_accessor(self):
        s = spectrum(TridiagonalParams(3, 2.0))
        assert s.value(1) == s.values[0]
        with pytest.raises(IndexError):
            s.value(4)


class TestEigenvector:
    def test_scalar(self):
        np.testing.assert_array_equal(eigenvector(TridiagonalParams(1, 5.0), 1), [1.0])

    def test_residual_oracle(self):
        p = TridiagonalParams(2, 4)
        v = eigenvector(p, 1)
        np.testing.assert_allclose(v, [math.sqrt(3) / 2, math.sqrt(3)], rtol=1e-15)
        assert np.max(np.abs(matvec_v(p, v, "float") - 7 * v)) <= 1e-12

    def test_exact_zero_entries(self):
        v = eigenvector(TridiagonalParams(3, 1), 2)
        np.testing.assert_array_equal(v, [1.0, 0.0, -1.0])
        dense = dense_materialize(TridiagonalParams(3, 1.0))
        np.testing.assert_allclose(dense @ v, 2 * v, atol=1e-15)

    @pytest.mark.parametrize("b", GRID_B)
    @pytest.mark.parametrize("n", [1, 2, 3, 10, 33, 64])
    def test_residual_bound(self, n, b):
        p = TridiagonalParams(n, b)
        for k in range(1, n + 1):
            lam, v = eigenvalue(p, k), eigenvector(p, k)
            res = np.max(np.abs(matvec_v(p, v, "float") - lam * v))
            assert res <= 1e-12 * lam * np.max(np.abs(v)), (k, res)

    @pytest.mark.parametrize("b", GRID_B)
    def test_weighted_orthogonality(self, b):
        p = TridiagonalParams(24, b)
        vs = [eigenvector(p, k) for k in range(1, 25)]
        norms = [math.sqrt(weighted_inner(p, v, v, "float")) for v in vs]
        for k in range(24):
            for l in range(k + 1, 24):
                ip = weighted_inner(p, vs[k], vs[l], "float")
                assert abs(ip) <= 1e-10 * norms[k] * norms[l]

    def test_orthogonality_exact_when_sines_rational(self):
        # n = 1, 2 (with b a square) give rational entries; check the identity with Fractions
        p = TridiagonalParams(2, Fraction(9, 4))
        v1, v2 = eigenvector(p, 1), eigenvector(p, 2)
        assert abs(weighted_inner(p, v1, v2, "float")) <= 1e-15

    def test_normalisation(self):
        p = TridiagonalParams(11, 3.0)
        for k in (1, 5, 11):
            v = eigenvector(p, k, normalize=True)
            assert weighted_inner(p, v, v, "float") == pytest.approx(1.0, rel=1e-14)

    def test_unnormalised_w_norm(self):
        # ||v||_W^2 = sum_j sin^2(jk pi/(n+1)) = (n+1)/2
        p = TridiagonalParams(9, 2.0)
        v = eigenvector(p, 4)
        assert weighted_inner(p, v, v, "float") == pytest.approx(5.0, rel=1e-14)

    def test_log_form_matches_float(self):
        p = TridiagonalParams(15, 6.0)
        for k in (1, 8, 15):
            lm, sign = eigenvector_log(p, k)
            with np.errstate(under="ignore"):
                back = sign * np.exp(lm)
            np.testing.assert_allclose(back, eigenvector(p, k), rtol=1e-13, atol=1e-300)

    def test_overflow_switches_to_log(self):
        p = TridiagonalParams(2000, 10.0)
        with pytest.raises(OverflowError):
            eigenvector(p, 3)
        pair = eigenpair(p, 3)
        assert pair.log_form and pair.vector is None
        lm, sign = pair.log_vector
        assert lm[-1] == pytest.approx(1999 / 2 * math.log(10) + math.log(abs(math.sin(2000 * 3 * math.pi / 2001))))
        assert not lm.flags.writeable

    def test_eigenpair_float(self):
        pair = eigenpair(TridiagonalParams(4, 2.0), 2, normalize=True)
        assert not pair.log_form
        assert pair.value == eigenvalue(TridiagonalParams(4, 2.0), 2)
        with pytest.raises(ValueError):
            pair.vector[0] = 1.0


class TestDeterminant:
    def test_scalar(self):
        assert determinant_continuant(TridiagonalParams(1, Fraction(7, 3))) == Fraction(10, 3)

    def test_dense_oracle(self):
        assert elimination_det([[5, 1], [4, 5]]) == 21
        assert determinant_continuant(TridiagonalParams(2, 4)) == 21
        assert determinant_continuant(TridiagonalParams(2, 4.0), "float") == 21.0

    def test_b_one(self):
        assert determinant_continuant(TridiagonalParams(3, 1)) == 4

    @given(n=st.integers(1, 14), b=st.builds(Fraction, st.integers(1, 30), st.integers(1, 9)))
    @settings(max_examples=40, deadline=None)
    def test_matches_elimination(self, n, b):
        p = TridiagonalParams(n, b)
        assert determinant_continuant(p) == elimination_det(dense_materialize(p).tolist())

    @pytest.mark.parametrize("b", ["1/4", "999/1000", "1", "10", "49/4"])
    def test_exact_equals_repunit(self, b):
        for n in range(1, 513, 7):
            p = TridiagonalParams(n, b)
            assert determinant_continuant(p, "exact") == repunit_exact(n + 1, p.b)

    @pytest.mark.parametrize("b", GRID_B)
    def test_float_and_log(self, b):
        for n in (1, 2, 10, 100, 250):
            p = TridiagonalParams(n, b)
            want = repunit_exact(n + 1, Fraction(b))
            assert determinant_continuant(p, "float") == pytest.approx(float(want), rel=1e-12)
            lm = determinant_continuant(p, "log")
            assert lm.sign == 1
            assert lm.log_magnitude == pytest.approx(log_fraction(want), rel=1e-13)

    @pytest.mark.parametrize("b", [1 - 2.0 ** -30, 0.999, 1.0, 1 + 2.0 ** -30])
    def test_float_no_cancellation_near_one(self, b):
        # the subtractive three-term recurrence drifts by ~n^2 ulps here
        n = 3000
        want = repunit_exact(n + 1, Fraction(b))
        got = determinant_continuant(TridiagonalParams(n, b), "float")
        assert abs(Fraction(got) - want) <= Fraction(2 * n * 2.0 ** -53) * want

    def test_float_overflow_reported(self):
        with pytest.raises(OverflowError):
            determinant_continuant(TridiagonalParams(400, 10.0), "float")

    def test_log_far_beyond_float(self):
        lm = determinant_continuant(TridiagonalParams(10000, 3.0), "log").log_magnitude
        assert lm == pytest.approx(log_fraction(repunit_exact(10001, 3)), rel=1e-13)

    def test_exact_mode_needs_rational(self):
        with pytest.raises(DomainError):
            determinant_continuant(TridiagonalParams(3, 2.0), "exact")


class TestSpectralProduct:
    def test_single_factor(self):
        assert spectral_product(TridiagonalParams(1, 9)) == pytest.approx(10, rel=1e-15)

    def test_two_by_two(self):
        assert spectral_product(TridiagonalParams(2, 4)) == pytest.approx(21, rel=1e-12)

    def test_b_one(self):
        assert spectral_product(TridiagonalParams(7, 1)) == pytest.approx(8, rel=1e-12)

    @pytest.mark.parametrize("b", GRID_B)
    def test_against_repunit(self, b):
        for n in (1, 3, 16, 100, 200):
            got = spectral_product(TridiagonalParams(n, b))
            want = repunit_float(n + 1, b)
            assert abs(got - want) <= 1e-11 * want

    def test_log_mode(self):
        lm = spectral_product(TridiagonalParams(512, 10.0), "log")
        assert lm.log_magnitude == pytest.approx(log_fraction(repunit_exact(513, 10)), rel=1e-11)

    def test_overflow(self):
        with pytest.raises(OverflowError):
            spectral_product(TridiagonalParams(400, 10.0))


class TestHyperbolic:
    def test_double_angle(self):
        lhs, rhs = hyperbolic_product(1, 1.0)
        assert lhs == pytest.approx(math.cosh(1.0), rel=1e-15)
        assert rhs == pytest.approx(math.sinh(2.0) / (2 * math.sinh(1.0)), rel=1e-15)

    def test_at_zero(self):
        lhs, rhs = hyperbolic_product(2, 0.0)
        assert rhs == 0.75
        assert lhs == pytest.approx(0.75, rel=1e-15)

    def test_generic(self):
        lhs, rhs = hyperbolic_product(4, 0.3)
        direct = math.prod(math.cosh(0.3) + math.cos(k * math.pi / 5) for k in range(1, 5))
        assert lhs == pytest.approx(direct, rel=1e-14)
        assert rhs == pytest.approx(math.sinh(1.5) / (16 * math.sinh(0.3)), rel=1e-15)
        assert abs(lhs - rhs) <= 1e-12 * rhs

    def test_even_in_x(self):
        assert hyperbolic_product(6, -1.3) == pytest.approx(hyperbolic_product(6, 1.3), rel=1e-15)

    def test_matches_spectral_product(self):
        # b = e^{2x}: prod lambda_k = (2 sqrt b)^n prod (cosh x + cos)
        x, n = 0.4, 12
        b = math.exp(2 * x)
        lhs, _ = hyperbolic_product(n, x)
        assert (2 * math.sqrt(b)) ** n * lhs == pytest.approx(spectral_product(TridiagonalParams(n, b)), rel=1e-13)

    def test_large_x_in_log_domain(self):
        lhs, rhs = hyperbolic_product_log(50, 40.0)
        assert lhs == pytest.approx(rhs, rel=1e-13)
        assert hyperbolic_product(50, 40.0) == (math.inf, math.inf)

    def test_rejects_nonfinite(self):
        with pytest.raises(DomainError):
            hyperbolic_product(3, math.nan)


class TestBounds:
    def test_plug_in(self):
        lo, hi = det_bounds(TridiagonalParams(2, 4))
        assert (lo, hi) == (1, 81)
        assert lo < 21 < hi

    def test_b_one(self):
        lo, hi = det_bounds(TridiagonalParams(3, 1))
        assert (lo, hi) == (0, 64)

    def test_scalar(self):
        assert det_bounds(TridiagonalParams(1, 9)) == (4, 16)

    @pytest.mark.parametrize("b", [0.25, 0.5, 0.999, 1.001, 2.0, 10.0, 3.3])
    def test_strict(self, b):
        for n in (1, 2, 5, 30, 64):
            p = TridiagonalParams(n, b)
            lo, hi = det_bounds(p, "float")
            det = repunit_float(n + 1, b)
            assert lo < det < hi

    def test_log_mode(self):
        lo, hi = det_bounds(TridiagonalParams(1000, 10.0), "log")
        det = log_fraction(repunit_exact(1001, 10))
        assert lo < det < hi
        assert det_bounds(TridiagonalParams(5, 1.0), "log")[0] == -math.inf

    def test_exact_requires_square(self):
        with pytest.raises(DomainError):
            det_bounds(TridiagonalParams(3, 2), "exact")
