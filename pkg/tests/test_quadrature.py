import numpy as np
import pytest

from slice_bergman import functions as fn
from slice_bergman import kernels as kr
from slice_bergman import quadrature as qd
from slice_bergman import quaternion as qt
from slice_bergman.errors import BadParameter, DivergenceSuspected, NonFiniteSample

from conftest import assert_quat

ONE = fn.polynomial([1])
IDENTITY = fn.polynomial([0, 1])
GEOMETRIC = fn.IntrinsicRational((1.0,), (1.0, -1.0), 1)


def constant(c):
    return lambda x, y: np.broadcast_to(qt.asquat(c), np.shape(x) + (4,))


class TestRules:
    @pytest.mark.parametrize("kind, radius", [("disk", 1.0), ("disk", 0.5), ("halfdisk", 1.0),
                                              ("halfplane", 50.0), ("upper_halfplane", 20.0)])
    def test_weights_sum_to_area(self, kind, radius):
        rule = qd.build_rule(kind, 12, 16, radius=radius)
        assert rule.area == pytest.approx(qd.exact_area(kind, radius), rel=1e-10)
        assert rule.size == 12 * 16

    def test_gauss_angular_area(self):
        rule = qd.build_rule("disk", 8, 20, angular="gauss")
        assert rule.area == pytest.approx(np.pi, rel=1e-12)

    def test_constant_exact_on_coarse_rule(self):
        rule = qd.build_rule("disk", 2, 8)
        assert_quat(qd.integrate_slice(constant(qt.ONE), rule), np.pi * qt.ONE, atol=1e-14)

    def test_z_integrates_to_zero(self):
        rule = qd.build_rule("disk", 2, 8)
        out = qd.integrate_slice(lambda x, y: qt.embed(x, y, qt.UNIT_I), rule)
        assert_quat(out, np.zeros(4), atol=1e-15)

    def test_modulus_squared(self):
        rule = qd.build_rule("disk", 16, 64)
        out = qd.integrate_slice(lambda x, y: qt.real(x * x + y * y), rule)
        assert out[0] == pytest.approx(np.pi / 2, abs=1e-12)

    def test_halfplane_nodes_inside(self):
        rule = qd.build_rule("halfplane", 20, 20, radius=50)
        assert np.all(rule.x > 0) and np.all(np.abs(rule.y) < 50)

    @pytest.mark.parametrize("args", [("disk", 0, 8), ("disk", 4, 2), ("ring", 4, 8)])
    def test_bad_parameters(self, args):
        with pytest.raises(BadParameter):
            qd.build_rule(*args)

    def test_disk_radius_limit(self):
        with pytest.raises(BadParameter):
            qd.build_rule("disk", 4, 8, radius=1.5)


class TestIntegrateSlice:
    def test_constant_j(self):
        out = qd.integrate_slice(constant(qt.J), qd.build_rule("disk", 4, 8))
        assert_quat(out, np.pi * qt.J, atol=1e-14)

    def test_planar_reproducing(self):
        rule = qd.build_rule("disk", 64, 64)

        def integrand(x, y):
            z = x + 1j * y
            return qt.from_complex(kr.disk_kernel(0.3, z) * z, qt.UNIT_I)

        assert_quat(qd.integrate_slice(integrand, rule), 0.3 * qt.ONE, atol=1e-10)

    @pytest.mark.filterwarnings("ignore:divide by zero")
    def test_non_finite_sample(self):
        with pytest.raises(NonFiniteSample):
            qd.integrate_slice(lambda x, y: qt.real(1.0 / (x - x)), qd.build_rule("disk", 2, 4))

    def test_threads_do_not_change_result(self):
        f = fn.polynomial([0.2, [0, 1, 0.3, 0], [0.5, 0, 0, 1]])
        a = qd.inner_product(f, f, threads=1)
        b = qd.inner_product(f, f, threads=4)
        assert np.array_equal(a, b)

    def test_deterministic(self):
        f = fn.polynomial([0.2, [0, 1, 0.3, 0]])
        assert np.array_equal(qd.inner_product(f, IDENTITY), qd.inner_product(f, IDENTITY))


class TestInnerProduct:
    def test_identity(self):
        assert_quat(qd.inner_product(IDENTITY, IDENTITY), np.pi / 2 * qt.ONE, atol=1e-10)

    def test_orthogonal(self):
        assert_quat(qd.inner_product(ONE, IDENTITY), np.zeros(4), atol=1e-14)

    def test_half_slice_intrinsic(self):
        half = qd.inner_product(IDENTITY, IDENTITY, half=True)
        assert 2 * half[0] == pytest.approx(np.pi / 2, abs=1e-10)

    def test_half_slice_norm_forms(self, rng):
        f = fn.polynomial([0.3, [0, 1, 0, 0], [0, 0, 1, 0]])
        u = qt.random_unit(rng)
        full = qd.slice_norm_sq(f, unit_i=u)
        assert qd.half_slice_norm_sq(f, unit_i=u, symmetrized=True) == pytest.approx(full, rel=1e-10)
        g = fn.IntrinsicRational((0.5, 1.0), (1.0, -0.3), 1)
        assert qd.half_slice_norm_sq(g, unit_i=u) == pytest.approx(qd.slice_norm_sq(g, unit_i=u), rel=1e-9)

    def test_unweighted_divergence_detected(self):
        with pytest.raises(DivergenceSuspected):
            qd.inner_product(GEOMETRIC, GEOMETRIC, n_r=16, n_theta=32, check_convergence=True)

    def test_halfspace_norm(self):
        # |1 + z|^-4 over the truncated half-plane (0, R) x (-R, R): closed form
        # in y, then 1-D Gauss-Legendre in log(1 + x)
        R = qd.DEFAULT_HALFPLANE_R
        t, w = np.polynomial.legendre.leggauss(200)
        t = 0.5 * np.log1p(R) * (t + 1)
        a = np.exp(t)
        inner = R / (a**2 * (a**2 + R**2)) + np.arctan(R / a) / a**3
        expected = 0.5 * np.log1p(R) * np.sum(w * inner * a)
        f = fn.IntrinsicRational((1.0,), (1.0, 1.0), 2)
        val = qd.slice_norm_sq(f, fn.Domain.HALFSPACE, n_r=96, n_theta=96)
        assert val == pytest.approx(expected, rel=1e-10)
        assert val == pytest.approx(np.pi / 4, rel=1e-3)


class TestNormComparability:
    def test_slice_factor_two(self, rng):
        for _ in range(30):
            deg = rng.integers(0, 7)
            f = fn.QuaternionPolynomial(rng.normal(size=(deg + 1, 4)))
            i, j = qt.random_unit(rng), qt.random_unit(rng)
            a = qd.slice_norm_sq(f, unit_i=i, n_r=16, n_theta=32)
            b = qd.slice_norm_sq(f, unit_i=j, n_r=16, n_theta=32)
            assert a <= 2 * b + 1e-9
            assert b <= 2 * a + 1e-9


class TestWeightedNorms:
    def test_one(self):
        assert qd.weighted_slice_norm_sq(ONE) == pytest.approx(np.pi / 4, abs=1e-10)

    def test_zero(self):
        assert qd.weighted_slice_norm_sq(fn.polynomial([0])) == 0

    def test_geometric_finite_and_stable(self):
        a = qd.weighted_slice_norm_sq(GEOMETRIC, n_r=64, n_theta=128, angular="gauss", radius=0.999)
        b = qd.weighted_slice_norm_sq(GEOMETRIC, n_r=128, n_theta=256, angular="gauss", radius=0.999)
        assert np.isfinite(a) and abs(a - b) < 1e-6 * a

    def test_delta_weight_undefined_on_axis(self):
        with pytest.raises(BadParameter):
            qd.WeightId.DELTA(np.array([0.0, 0.5]))


class TestVolumeNorms:
    def test_one_is_ball_volume(self):
        assert qd.volume_norm_sq_reduced(ONE) == pytest.approx(np.pi**2 / 2, abs=1e-12)

    def test_identity(self):
        assert qd.volume_norm_sq_reduced(IDENTITY) == pytest.approx(np.pi**2 / 3, abs=1e-12)

    def test_geometric_finite_and_stable(self):
        prof = qd.exhaustion_profile(GEOMETRIC, "volume", k_max=14, n=128)
        assert np.all(np.isfinite(prof))
        assert np.all(np.diff(prof) > 0)
        steps = np.diff(prof)
        # increments shrink geometrically (about halving per level)
        assert np.all(steps[-5:] / steps[-6:-1] < 0.6)

    def test_rho_weight_rejected(self):
        with pytest.raises(BadParameter):
            qd.volume_norm_sq_reduced(ONE, weight=qd.WeightId.RHO)

    def test_delta_weight(self):
        # 4 pi * area of the upper half disk
        assert qd.volume_norm_sq_reduced(ONE, weight=qd.WeightId.DELTA) == pytest.approx(2 * np.pi**2)


class TestMonteCarlo:
    def test_one(self):
        est, se = qd.volume_integral_mc(ONE, samples=10**6, seed=1)
        assert abs(est - np.pi**2 / 2) <= 3 * se + 1e-12

    def test_identity(self):
        est, se = qd.volume_integral_mc(IDENTITY, samples=10**6, seed=2)
        assert se > 0
        assert abs(est - np.pi**2 / 3) <= 3 * se

    def test_zero_exact(self):
        assert qd.volume_integral_mc(fn.polynomial([0]), samples=10**4) == (0.0, 0.0)

    def test_seed_determinism(self):
        assert qd.volume_integral_mc(IDENTITY, samples=10**4, seed=5) == qd.volume_integral_mc(
            IDENTITY, samples=10**4, seed=5)

    def test_reduced_matches_mc(self):
        f = fn.IntrinsicRational((0.2, 1.0), (1.0, -0.5), 1)
        est, se = qd.volume_integral_mc(f, samples=10**6, seed=3)
        assert abs(qd.volume_norm_sq_reduced(f) - est) <= 3 * se

    def test_too_few_samples(self):
        with pytest.raises(BadParameter):
            qd.volume_integral_mc(ONE, samples=100)

    def test_samples_inside_ball(self):
        pts = qd.sample_domain(fn.Domain.BALL, 10**4, seed=0)
        assert pts.shape == (10**4, 4) and np.all(qt.modulus(pts) < 1)
