from fractions import Fraction

import numpy as np
import pytest

from repunit_tridiag import TridiagonalParams, dense_materialize, dense_symmetrized
from repunit_tridiag.oracle import (
    CHECKS,
    VerificationReport,
    default_grid,
    dense_inverse,
    dense_lu_det,
    dense_solve,
    dense_sym_eigs,
    run_verification,
)
from repunit_tridiag.scalars import DomainError


class TestDenseDet:
    def test_identity(self):
        assert dense_lu_det(np.eye(4, dtype=int), "exact") == 1

    def test_two_by_two(self):
        assert dense_lu_det([[3, 1], [2, 3]], "exact") == 7
        assert dense_lu_det([[3, 1], [2, 3]]) == pytest.approx(7)

    def test_tridiagonal(self):
        assert dense_lu_det(dense_materialize(TridiagonalParams(3, 2)), "exact") == 15

    def test_needs_pivoting(self):
        assert dense_lu_det([[0, 1], [1, 0]], "exact") == -1
        assert dense_lu_det([[1, 2], [2, 4]], "exact") == 0

    def test_log_mode(self):
        lm = dense_lu_det(dense_materialize(TridiagonalParams(40, 10.0)), "log")
        assert lm.sign == 1
        # det = (10**41 - 1) / 9
        assert lm.log_magnitude == pytest.approx(41 * np.log(10) - np.log(9), rel=1e-12)

    def test_not_square(self):
        with pytest.raises(DomainError):
            dense_lu_det(np.ones((2, 3)))

    def test_det_of_inverse(self):
        M = dense_materialize(TridiagonalParams(7, Fraction(5, 3)))
        assert dense_lu_det(M, "exact") * dense_lu_det(dense_inverse(M, "exact"), "exact") == 1


class TestDenseInverse:
    def test_identity(self):
        assert dense_inverse(np.eye(3, dtype=int), "exact").tolist() == np.eye(3, dtype=int).tolist()

    def test_diagonal(self):
        assert dense_inverse([[2, 0], [0, 4]], "exact").tolist() == [[Fraction(1, 2), 0], [0, Fraction(1, 4)]]

    def test_two_by_two(self):
        inv = dense_inverse([[3, 1], [2, 3]], "exact")
        assert inv.tolist() == [[Fraction(3, 7), Fraction(-1, 7)], [Fraction(-2, 7), Fraction(3, 7)]]

    def test_float(self):
        M = dense_materialize(TridiagonalParams(20, 1.5))
        np.testing.assert_allclose(dense_inverse(M) @ M, np.eye(20), atol=1e-12)

    def test_singular(self):
        with pytest.raises(DomainError):
            dense_inverse([[1, 2], [2, 4]], "exact")
        with pytest.raises(DomainError):
            dense_inverse(np.zeros((2, 2)))

    def test_solve(self):
        np.testing.assert_allclose(dense_solve([[3, 1], [2, 3]], [1, 0]), [3 / 7, -2 / 7])


class TestDenseEigs:
    def test_diagonal(self):
        np.testing.assert_allclose(dense_sym_eigs(np.diag([3.0, 1.0, 2.0])), [1, 2, 3])

    def test_two_by_two(self):
        np.testing.assert_allclose(dense_sym_eigs([[5.0, 2.0], [2.0, 5.0]]), [3, 7])

    def test_symmetrized(self):
        got = dense_sym_eigs(dense_symmetrized(TridiagonalParams(3, 1.0)))
        np.testing.assert_allclose(got, [2 - np.sqrt(2), 2, 2 + np.sqrt(2)], atol=1e-14)

    def test_rejects_asymmetric(self):
        with pytest.raises(DomainError):
            dense_sym_eigs(dense_materialize(TridiagonalParams(3, 2.0)))

    def test_cap(self):
        with pytest.raises(DomainError):
            dense_sym_eigs(np.eye(5), cap=4)


class TestHarness:
    def test_single_point(self):
        (rep,) = run_verification([(1, Fraction(9))], checks=["product"])
        assert rep.passed and rep.check == "product" and rep.n == 1 and rep.b == "9"
        assert rep.rel_error <= rep.tolerance

    def test_scalar_point_all_checks(self):
        reports = run_verification([(1, 2)])
        assert len(reports) == len(CHECKS) and all(r.passed for r in reports)

    def test_two_by_two_product(self):
        (rep,) = run_verification([(2, 4)], checks=["product"])
        assert rep.passed and rep.rel_error <= 1e-12

    def test_exact_inverse_sixteen(self):
        (rep,) = run_verification([(16, 3)], checks=["inverse-exact"])
        assert rep.passed and rep.mode == "exact"

    def test_exact_inverse_at_cap(self):
        (rep,) = run_verification([(64, Fraction(3))], checks=["inverse-exact"])
        assert rep.passed and rep.mode == "exact" and rep.abs_error == 0

    def test_every_check_on_small_grid(self):
        grid = [(n, b) for n in (1, 2, 5) for b in (Fraction(1, 4), Fraction(1), Fraction(49, 4))]
        reports = run_verification(grid)
        assert len(reports) == len(CHECKS) * len(grid)
        failed = [r.to_text() for r in reports if not r.passed]
        assert not failed

    def test_sorted_and_deterministic(self):
        grid = [(4, Fraction(2)), (2, Fraction(1, 2)), (4, Fraction(1, 4))]
        a = run_verification(grid, checks=["spectrum-oracle", "bounds"])
        b = run_verification(list(reversed(grid)), checks=["bounds", "spectrum-oracle"])
        assert [r.to_json() for r in a] == [r.to_json() for r in b]
        keys = [(r.check, r.n, Fraction(r.b)) for r in a]
        assert keys == sorted(keys)

    def test_unknown_check(self):
        with pytest.raises(DomainError):
            run_verification([(2, 2)], checks=["nope"])

    def test_caps_enforced_up_front(self):
        with pytest.raises(DomainError):
            run_verification([(65, 2)], checks=["inverse-exact"])
        with pytest.raises(DomainError):
            run_verification([(300, 2)], checks=["spectrum-oracle"])
        # cheap checks have no cap
        (rep,) = run_verification([(300, 2)], checks=["determinant"])
        assert rep.passed

    def test_report_round_trip(self):
        (rep,) = run_verification([(3, Fraction(1, 2))], checks=["chebyshev"])
        assert VerificationReport.from_json(rep.to_json()) == rep
        assert rep.to_text().startswith("PASS chebyshev")

    def test_default_grid(self):
        grid = default_grid()
        assert len(grid) == 64
        assert (64, Fraction(49, 4)) in grid


@pytest.mark.slow
def test_default_preset_all_pass():
    reports = run_verification(default_grid())
    assert len(reports) == len(CHECKS) * 64
    failed = [r.to_text() for r in reports if not r.passed]
    assert not failed, failed[:5]
