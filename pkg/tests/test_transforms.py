import numpy as np
import pytest

from slice_bergman import functions as fn
from slice_bergman import quaternion as qt
from slice_bergman import transforms as tr
from slice_bergman.differential import laplacian_fd
from slice_bergman.errors import BadParameter, ContourTooClose, DivergenceSuspected, DomainError

from conftest import assert_quat, ball_points


def power(n):
    return fn.polynomial([0] * n + [1])


class TestReport:
    def test_relative_error_floor(self):
        rep = tr.TransformReport(np.array([1e-3, 0, 0, 0]), np.zeros(4))
        assert rep.abs_error == pytest.approx(1e-3)
        assert rep.rel_error == pytest.approx(1e-3)
        rep = tr.TransformReport(np.array([11.0, 0, 0, 0]), np.array([10.0, 0, 0, 0]))
        assert rep.rel_error == pytest.approx(0.1)

    def test_as_dict(self):
        d = tr.TransformReport(qt.ONE, qt.ONE, rule={"n": 1}).as_dict()
        assert d["value"] == [1, 0, 0, 0] and d["rule"] == {"n": 1}


class TestReproduce:
    def test_constant(self):
        rep = tr.reproduce(fn.polynomial([1]), [0.3, 0.2, 0, 0], n_r=64, n_theta=64)
        assert_quat(rep.value, qt.ONE, atol=1e-8)

    @pytest.mark.parametrize("n", range(1, 6))
    def test_powers(self, n):
        q = np.array([0, 0, 0.4, 0])
        rep = tr.reproduce(power(n), q)
        assert_quat(rep.value, qt.integer_power(q, n), atol=1e-7)
        assert rep.rel_error < 1e-7

    def test_off_slice_target(self):
        rep = tr.reproduce(fn.polynomial([0, qt.J]), [0.3, 0, 0, 0.4], unit_i=qt.UNIT_I)
        expected = 0.3 * qt.J + 0.4 * qt.mul(qt.K, qt.J)
        assert_quat(rep.value, expected, atol=1e-7)

    def test_slice_independence(self, rng):
        for _ in range(20):
            f = fn.QuaternionPolynomial(rng.normal(size=(rng.integers(1, 6), 4)))
            q = ball_points(rng, 1, 0.6)[0]
            a = tr.reproduce(f, q, unit_i=qt.UNIT_I)
            b = tr.reproduce(f, q, unit_i=qt.random_unit(rng))
            assert qt.modulus(a.value - b.value) < 1e-8

    def test_right_linearity(self, rng):
        f = fn.QuaternionPolynomial(rng.normal(size=(4, 4)))
        c = rng.normal(size=4)
        q = ball_points(rng, 1, 0.6)[0]
        lhs = tr.reproduce(f.right_mul(c), q).value
        rhs = qt.mul(tr.reproduce(f, q).value, c)
        assert_quat(lhs, rhs, atol=1e-10)

    def test_kernel_section(self):
        f = fn.KernelSection(fn.kernels.KernelId.BALL_I, [0.2, 0, 0.1, 0])
        rep = tr.reproduce(f, [0.1, 0.3, 0, 0.2])
        assert rep.rel_error < 1e-7

    @pytest.mark.parametrize("radius, tol", [(None, 5e-6), (100.0, 1e-6)])
    def test_halfspace(self, radius, tol):
        f = fn.IntrinsicRational((1.0,), (1.0, 1.0), 3)
        rep = tr.reproduce(f, [0.3, 0.2, 0.1, 0], domain="halfspace", n_r=96, n_theta=192, radius=radius)
        assert rep.rel_error < tol

    def test_halfspace_truncation_tail(self):
        # the error is the truncated tail, which shrinks like R^-3
        f = fn.IntrinsicRational((1.0,), (1.0, 1.0), 3)
        errs = [tr.reproduce(f, [0.3, 0.2, 0.1, 0], domain="halfspace", n_r=96, n_theta=192,
                             radius=R).abs_error for R in (25.0, 50.0)]
        assert 5 < errs[0] / errs[1] < 12

    @pytest.mark.parametrize("domain, q", [("ball", [0.95, 0, 0, 0]), ("halfspace", [0.05, 1, 0, 0])])
    def test_target_outside(self, domain, q):
        with pytest.raises(DomainError):
            tr.reproduce(fn.polynomial([1]), q, domain=domain)

    def test_convergence_check_passes(self):
        rep = tr.reproduce(power(2), [0.2, 0.1, 0, 0], n_r=16, n_theta=32, check_convergence=True)
        assert rep.rule["n_r"] == 32 and rep.rel_error < 1e-10

    def test_convergence_check_flags_non_bergman(self):
        f = fn.IntrinsicRational((1.0,), (1.0, -1.0), 2)
        with pytest.raises(DivergenceSuspected):
            tr.reproduce(f, [0.2, 0, 0, 0], n_r=8, n_theta=16, check_convergence=True)


class TestBergmanFueterTransform:
    def test_identity_is_harmonic(self):
        rep = tr.bergman_fueter_transform(power(1), [0.2, 0.1, 0, 0.1])
        assert_quat(rep.value, np.zeros(4), atol=1e-6)

    def test_square(self):
        rep = tr.bergman_fueter_transform(power(2), [0.2, 0.1, 0, 0])
        assert_quat(rep.value, -4 * qt.ONE, atol=1e-4)

    def test_cube_matches_fd(self):
        rep = tr.bergman_fueter_transform(power(3), [0, 0, 0.3, 0])
        assert rep.rel_error < 1e-4

    def test_no_reference(self):
        rep = tr.bergman_fueter_transform(power(2), [0.1, 0, 0, 0], reference=False)
        assert rep.reference is None and np.isnan(rep.rel_error)

    def test_arc_length_reading_differs(self):
        rep = tr.bergman_fueter_boundary(power(2), [0.2, 0.1, 0, 0])
        assert rep.rel_error > 0.1


class TestContourTransform:
    def test_identity(self):
        rep = tr.fueter_contour_transform(power(1), [0, 0.2, 0, 0], rho=0.8)
        assert_quat(rep.value, np.zeros(4), atol=1e-8)

    def test_square(self):
        rep = tr.fueter_contour_transform(power(2), [0.1, 0, 0.2, 0], rho=0.8)
        assert_quat(rep.value, -4 * qt.ONE, atol=1e-6)

    def test_agrees_with_area_transform(self, rng):
        for _ in range(10):
            f = fn.QuaternionPolynomial(rng.normal(size=(rng.integers(2, 6), 4)))
            q = ball_points(rng, 1, 0.5)[0]
            a = tr.fueter_contour_transform(f, q, reference=False).value
            b = tr.bergman_fueter_transform(f, q, reference=False).value
            assert qt.modulus(a - b) <= 1e-3 * max(qt.modulus(b), 1.0)

    def test_spectral_convergence(self):
        f = fn.IntrinsicRational((1.0,), (1.0, -0.5), 2)
        q = [0.2, 0.1, 0.3, 0]
        a = tr.fueter_contour_transform(f, q, n_nodes=256, reference=False).value
        b = tr.fueter_contour_transform(f, q, n_nodes=512, reference=False).value
        assert qt.modulus(a - b) < 1e-10
        assert_quat(a, laplacian_fd(f, q), atol=1e-5)

    def test_too_close(self):
        with pytest.raises(ContourTooClose):
            tr.fueter_contour_transform(power(2), [0.76, 0, 0, 0], rho=0.8)

    @pytest.mark.parametrize("rho, nodes", [(1.2, 64), (0.8, 2)])
    def test_bad_parameters(self, rho, nodes):
        with pytest.raises(BadParameter):
            tr.fueter_contour_transform(power(2), [0.1, 0, 0, 0], rho=rho, n_nodes=nodes)
