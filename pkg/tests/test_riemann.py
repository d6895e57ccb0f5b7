import numpy as np
import pytest

from flagfiber import bundle as bd
from flagfiber import finsler as fin
from flagfiber import operator_core as oc
from flagfiber import riemann as rm

from conftest import assert_tangent_close, rand_point

E3 = np.eye(3)


def seeded(seed):
    return np.random.default_rng(seed)


def fiber_tangent(pt, g):
    return bd.validate_tangent(pt, np.zeros((pt.dim, pt.dim)), g)


class TestVerticalProjection:
    def test_diagonal_fixture(self, fixture_point):
        z = np.diag([0.7j, -0.3j, 1.1j])
        out = rm.vertical_project_Q(fixture_point, z)
        assert np.allclose(out, np.diag([0.0, -0.3j, 1.1j]), atol=1e-14)

    def test_kills_horizontal(self, fixture_point):
        rng = seeded(1)
        h = rm.random_horizontal(rng, fixture_point).matrix()
        assert np.linalg.norm(rm.vertical_project_Q(fixture_point, h)) <= 1e-12

    def test_idempotent_and_orthogonal(self):
        rng = seeded(2)
        for dim in (3, 5, 7):
            pt = rand_point(rng, dim)
            z = oc.random_antihermitian(rng, dim)
            q = rm.vertical_project_Q(pt, z)
            qq = rm.vertical_project_Q(pt, q)
            assert np.linalg.norm(qq - q) <= 1e-11
            assert abs(oc.trace_inner(q, z - q)) <= 1e-11

    def test_output_in_kernel(self):
        rng = seeded(3)
        pt = rand_point(rng, 5)
        q = rm.vertical_project_Q(pt, oc.random_antihermitian(rng, 5))
        out = bd.delta(pt, q)
        assert np.linalg.norm(out.x) <= 1e-12
        assert np.linalg.norm(out.g) <= 1e-12


class TestHorizontalProjection:
    def test_diagonal_fixture(self, fixture_point):
        z = np.diag([0.7j, -0.3j, 1.1j])
        hv = rm.horizontal_project(fixture_point, z)
        assert hv.t == pytest.approx(0.7)
        assert np.linalg.norm(hv.g) <= 1e-14
        assert np.linalg.norm(hv.y1) <= 1e-14
        assert np.linalg.norm(hv.y2) <= 1e-14

    def test_vertical_gives_zero(self, fixture_point):
        rng = seeded(4)
        vert = rm.vertical_project_Q(fixture_point, oc.random_antihermitian(rng, 3))
        hv = rm.horizontal_project(fixture_point, vert)
        assert np.linalg.norm(hv.matrix()) <= 1e-12

    def test_pythagoras(self):
        rng = seeded(5)
        for dim in (3, 4, 6):
            pt = rand_point(rng, dim)
            z = oc.random_antihermitian(rng, dim)
            q = rm.vertical_project_Q(pt, z)
            h = rm.horizontal_project(pt, z).matrix()
            assert oc.frobenius_norm(z) ** 2 == pytest.approx(
                oc.frobenius_norm(q) ** 2 + oc.frobenius_norm(h) ** 2, abs=1e-10)

    def test_matrix_roundtrip(self):
        rng = seeded(6)
        pt = rand_point(rng, 5)
        hv = rm.random_horizontal(rng, pt)
        again = rm.horizontal_project(pt, hv.matrix())
        assert np.linalg.norm(again.matrix() - hv.matrix()) <= 1e-12
        assert np.allclose(rm.HorizontalVector.from_vector(hv.to_vector(), hv.frame).matrix(),
                           hv.matrix())


class TestHorizontalLift:
    def test_right_inverse_on_horizontal(self):
        rng = seeded(7)
        pt = rand_point(rng, 4)
        z = rm.random_horizontal(rng, pt).matrix()
        back = rm.horizontal_lift_kappa(pt, bd.delta(pt, z))
        assert np.linalg.norm(back.matrix() - z) <= 1e-10

    def test_fixture_fiber(self, fixture_point):
        hv = rm.horizontal_lift_kappa(fixture_point, fiber_tangent(fixture_point, E3[:, 1]))
        expected = oc.rank_one(E3[:, 1], E3[:, 0]) - oc.rank_one(E3[:, 0], E3[:, 1])
        assert np.linalg.norm(hv.matrix() - expected) <= 1e-12
        assert hv.t == pytest.approx(0.0, abs=1e-13)

    def test_lifts_and_linearity(self):
        rng = seeded(8)
        pt = rand_point(rng, 5)
        v = bd.random_tangent(rng, pt)
        w = bd.random_tangent(rng, pt)
        out = bd.delta(pt, rm.horizontal_lift_kappa(pt, v).matrix())
        assert_tangent_close(out, v, tol=1e-10 * max(1.0, np.linalg.norm(v.x)))
        lhs = rm.horizontal_lift_kappa(pt, v + w).matrix()
        rhs = rm.horizontal_lift_kappa(pt, v).matrix() + rm.horizontal_lift_kappa(pt, w).matrix()
        assert np.linalg.norm(lhs - rhs) <= 1e-11 * max(1.0, np.linalg.norm(lhs))

    def test_orthogonal_to_kernel(self):
        rng = seeded(9)
        pt = rand_point(rng, 4)
        v = bd.random_tangent(rng, pt)
        lift = rm.horizontal_lift_kappa(pt, v).matrix()
        vert = rm.vertical_project_Q(pt, oc.random_antihermitian(rng, 4))
        assert abs(oc.trace_inner(lift, vert)) <= 1e-11


class TestOrthogonalProjection:
    def test_zero(self, fixture_point):
        out = rm.orth_project_Pi(fixture_point, np.zeros((3, 3)), np.zeros(3))
        assert np.linalg.norm(out.x) <= 1e-14 and np.linalg.norm(out.g) <= 1e-14

    def test_fixes_tangent_vectors(self):
        rng = seeded(10)
        for dim in (3, 4, 6):
            pt = rand_point(rng, dim)
            v = bd.random_tangent(rng, pt)
            out = rm.orth_project_Pi(pt, v.x, v.g)
            assert_tangent_close(out, v, tol=1e-10 * max(1.0, np.linalg.norm(v.x)))

    def test_fixture_diagonal_kernel_direction(self, fixture_point):
        out = rm.orth_project_Pi(fixture_point, oc.rank_one(E3[:, 2], E3[:, 2]), np.zeros(3))
        assert np.linalg.norm(out.x) <= 1e-12
        assert np.linalg.norm(out.g) <= 1e-12

    def test_matrix_properties(self):
        rng = seeded(11)
        for dim in (3, 5):
            pt = rand_point(rng, dim)
            mat = rm.pi_matrix(pt)
            e = rm.tangent_projection_matrix(pt)
            assert np.linalg.norm(mat @ mat - mat) <= 1e-10
            assert np.linalg.norm(mat - mat.T) <= 1e-10
            assert np.linalg.norm(mat @ e - e) <= 1e-10
            assert np.linalg.norm(e @ mat - mat) <= 1e-10

    def test_closed_forms_agree(self):
        rng = seeded(12)
        for dim in (3, 4, 5, 6):
            pt = rand_point(rng, dim)
            x = oc.random_hermitian(rng, dim)
            h = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
            a = rm.orth_project_Pi(pt, x, h)
            b = rm.orth_project_closed(pt, x, h)
            assert_tangent_close(a, b, tol=1e-10 * max(1.0, np.linalg.norm(x)))

    def test_ambient_self_adjointness_pairwise(self):
        rng = seeded(13)
        pt = rand_point(rng, 4)

        def ambient_ip(u, w):
            return float(np.real(np.trace(u.x @ w.x))) + float(np.real(np.vdot(w.g, u.g)))

        for _ in range(5):
            x1 = oc.random_hermitian(rng, 4)
            h1 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            x2 = oc.random_hermitian(rng, 4)
            h2 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            raw1 = bd.TangentVector(x=x1, g=h1)
            raw2 = bd.TangentVector(x=x2, g=h2)
            p1 = rm.orth_project_Pi(pt, x1, h1)
            p2 = rm.orth_project_Pi(pt, x2, h2)
            assert ambient_ip(p1, raw2) == pytest.approx(ambient_ip(raw1, p2), abs=1e-10)


class TestMetricNorms:
    def test_block_fixture_values(self, fixture_point):
        frame = oc.adapted_frame(fixture_point.p, fixture_point.f)
        hv = rm.HorizontalVector(t=1.0, g=np.array([1.0 + 0j]),
                                 y1=np.array([[1.0 + 0j]]),
                                 y2=np.zeros((1, 1), dtype=complex), frame=frame)
        assert rm.metric_norm_blocks(hv, "quotient") ** 2 == pytest.approx(5.0)
        assert rm.metric_norm_blocks(hv, "ambient") ** 2 == pytest.approx(5.0)

    def test_g_only_sharp_ratio(self, fixture_point):
        v = fiber_tangent(fixture_point, E3[:, 1])
        ratio = rm.metric_norm(fixture_point, v, "ambient") / rm.metric_norm(fixture_point, v, "quotient")
        assert ratio == pytest.approx(1.0 / np.sqrt(2.0), abs=1e-12)

    def test_y1_only_sharp_ratio(self, fixture_point):
        frame = oc.adapted_frame(fixture_point.p, fixture_point.f)
        hv = rm.HorizontalVector(t=0.0, g=np.zeros(1, dtype=complex),
                                 y1=np.array([[1.0 + 0j]]),
                                 y2=np.zeros((1, 1), dtype=complex), frame=frame)
        v = bd.delta(fixture_point, hv.matrix())
        ratio = rm.metric_norm(fixture_point, v, "ambient") / rm.metric_norm(fixture_point, v, "quotient")
        assert ratio == pytest.approx(np.sqrt(1.5), abs=1e-12)

    def test_closed_forms_match_direct(self):
        rng = seeded(14)
        for dim in (3, 4, 6):
            pt = rand_point(rng, dim)
            hv = rm.random_horizontal(rng, pt)
            v = bd.delta(pt, hv.matrix())
            assert rm.metric_norm(pt, v, "quotient") == pytest.approx(
                rm.metric_norm_blocks(hv, "quotient"), abs=1e-11)
            assert rm.metric_norm(pt, v, "ambient") == pytest.approx(
                rm.metric_norm_blocks(hv, "ambient"), abs=1e-11)

    def test_equivalence_band(self):
        rng = seeded(15)
        for _ in range(40):
            pt = rand_point(rng, 5)
            hv = rm.random_horizontal(rng, pt)
            vq = rm.metric_norm_blocks(hv, "quotient")
            va = rm.metric_norm_blocks(hv, "ambient")
            if vq == 0.0:
                continue
            assert 1.0 / np.sqrt(2.0) - 1e-12 <= va / vq <= np.sqrt(1.5) + 1e-12


class TestExpGeodesic:
    def test_zero_vector(self, fixture_point):
        out = rm.exp_map(fixture_point, fiber_tangent(fixture_point, np.zeros(3)))
        assert np.allclose(out.p, fixture_point.p)
        assert np.allclose(out.f, fixture_point.f)

    def test_fiber_rotation(self, fixture_point):
        theta = 0.8
        out = rm.exp_map(fixture_point, fiber_tangent(fixture_point, theta * E3[:, 1]))
        assert np.allclose(out.p, fixture_point.p, atol=1e-12)
        assert np.allclose(out.f, np.cos(theta) * E3[:, 0] + np.sin(theta) * E3[:, 1],
                           atol=1e-12)

    def test_codiagonal_plane_rotation(self, fixture_point):
        theta = 0.6
        k = oc.rank_one(E3[:, 2], E3[:, 0]) - oc.rank_one(E3[:, 0], E3[:, 2])
        v = bd.delta(fixture_point, theta * k)
        out = rm.exp_map(fixture_point, v)
        assert np.allclose(out.f, np.cos(theta) * E3[:, 0] + np.sin(theta) * E3[:, 2],
                           atol=1e-12)
        u = oc.mat_exp(theta * k)
        assert np.allclose(out.p, u @ fixture_point.p @ u.conj().T, atol=1e-12)

    def test_initial_velocity_finite_difference(self):
        rng = seeded(16)
        pt = rand_point(rng, 4)
        v = bd.random_tangent(rng, pt)
        h = 1e-4
        plus = rm.exp_map(pt, h * v)
        minus = rm.exp_map(pt, (-h) * v)
        dp = (plus.p - minus.p) / (2.0 * h)
        df = (plus.f - minus.f) / (2.0 * h)
        assert np.linalg.norm(dp - v.x) <= 1e-6 * max(1.0, np.linalg.norm(v.x))
        assert np.linalg.norm(df - v.g) <= 1e-6 * max(1.0, np.linalg.norm(v.g))

    def test_constant_speed_and_length(self, fixture_point):
        rng = seeded(17)
        hv = rm.random_horizontal(rng, fixture_point)
        z = hv.matrix()
        z /= oc.frobenius_norm(z)
        v = bd.delta(fixture_point, z)
        speeds = []
        t_final = 0.7
        for s in np.linspace(0.0, 1.0, 7):
            gamma = rm.geodesic(fixture_point, v, s * t_final)
            speeds.append(rm.metric_norm(gamma, bd.delta(gamma, z), "quotient"))
        assert max(abs(s - speeds[0]) for s in speeds) <= 1e-8
        samples = [rm.geodesic(fixture_point, v, s)
                   for s in np.linspace(0.0, t_final, 65)]
        assert fin.curve_length(samples, "quotient") == pytest.approx(t_final, abs=2e-3)


class TestLogMap:
    def test_same_point(self, fixture_point):
        hv = rm.log_map(fixture_point, fixture_point)
        assert np.linalg.norm(hv.matrix()) <= 1e-10

    def test_roundtrip(self):
        rng = seeded(18)
        for dim in (3, 4, 5):
            pt = rand_point(rng, dim)
            hv = rm.random_horizontal(rng, pt)
            z = hv.matrix()
            z *= 0.3 / oc.frobenius_norm(z)
            target = rm.exp_map(pt, bd.delta(pt, z))
            back = rm.log_map(pt, target)
            assert np.linalg.norm(back.matrix() - z) <= 1e-8

    def test_roundtrip_near_radius(self, fixture_point):
        rng = seeded(19)
        hv = rm.random_horizontal(rng, fixture_point)
        z = hv.matrix()
        z *= 0.7 / oc.frobenius_norm(z)
        target = rm.exp_map(fixture_point, bd.delta(fixture_point, z))
        back = rm.log_map(fixture_point, target)
        assert np.linalg.norm(back.matrix() - z) <= 1e-8

    def test_antipodal_fiber_out_of_radius(self, fixture_point):
        far = bd.validate_point(fixture_point.p, -fixture_point.f)
        with pytest.raises(rm.OutOfRadius):
            rm.log_map(fixture_point, far)


class TestDexp:
    def test_zero_base(self):
        rng = seeded(20)
        w = oc.random_antihermitian(rng, 4)
        assert np.allclose(rm.dexp_F(np.zeros((4, 4)), w), w)

    def test_commuting(self):
        z = np.diag([1.0j, 1.0j, -2.0j])
        w = np.diag([0.5j, 0.5j, 0.3j]) + 0j
        w[0, 1] = 1.0
        w[1, 0] = -1.0
        assert np.linalg.norm(z @ w - w @ z) <= 1e-14
        assert np.allclose(rm.dexp_F(z, w), w, atol=1e-12)

    def test_finite_difference(self):
        import scipy.linalg
        rng = seeded(21)
        for _ in range(5):
            z = oc.random_antihermitian(rng, 4)
            w = oc.random_antihermitian(rng, 4)
            h = 1e-4
            fd = scipy.linalg.expm(-z) @ (
                scipy.linalg.expm(z + h * w) - scipy.linalg.expm(z - h * w)) / (2 * h)
            assert np.linalg.norm(rm.dexp_F(z, w) - fd) <= 1e-6

    def test_pushes_through_exponential_map(self, fixture_point):
        rng = seeded(22)
        hv = rm.random_horizontal(rng, fixture_point)
        z = 0.4 * hv.matrix()
        w = rm.random_horizontal(rng, fixture_point).matrix()
        h = 1e-4
        u = oc.mat_exp(z)

        def point_of(zz):
            return bd.act(oc.mat_exp(zz), fixture_point)

        plus, minus = point_of(z + h * w), point_of(z - h * w)
        dp_fd = (plus.p - minus.p) / (2.0 * h)
        df_fd = (plus.f - minus.f) / (2.0 * h)
        tw = rm.dexp_F(z, w)
        dp = u @ (tw @ fixture_point.p - fixture_point.p @ tw) @ u.conj().T
        df = u @ (tw @ fixture_point.f)
        assert np.linalg.norm(dp - dp_fd) <= 1e-6
        assert np.linalg.norm(df - df_fd) <= 1e-6


class TestScalarAnalysis:
    def test_g_at_zero(self):
        assert rm.g_func(0.0) == 0.5

    def test_g_matches_high_precision_reference(self):
        import mpmath
        with mpmath.workdps(50):
            for t in (1e-9, 1e-7, 1e-5, 1e-3, 0.5, 2.0):
                mt = mpmath.mpf(t)
                ref = float(mpmath.sin(mt) / mt + (mpmath.cos(mt) - 1) / mt ** 2)
                assert rm.g_func(t) == pytest.approx(ref, abs=1e-14)

    def test_first_root(self):
        r0 = rm.find_r0()
        assert abs(r0 - 2.3311) <= 1e-4
        assert abs(r0 * np.sin(r0) + np.cos(r0) - 1.0) <= 1e-12
        # the root exceeds pi/2, which is what the radius estimate uses
        assert r0 > np.pi / 2
        # g is positive before the root and negative just after
        assert rm.g_func(0.99 * r0) > 0.0
        assert rm.g_func(1.01 * r0) < 0.0

    def test_g_decreasing_before_root(self):
        r0 = rm.find_r0()
        ts = np.linspace(0.0, r0, 50)
        vals = [rm.g_func(t) for t in ts]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_eigenvalue_identity(self):
        for t in (0.3, 1.0, 2.0, 4.0, 6.0):
            lhs = abs(rm._entire_F(1j * t) - 1.0) ** 2
            assert lhs == pytest.approx(1.0 - 2.0 * rm.g_func(t), abs=1e-12)

    def test_contraction_gap(self):
        assert rm.contraction_gap(np.zeros((3, 3))) == 0.0
        rng = seeded(23)
        r0 = rm.find_r0()
        for _ in range(10):
            z = oc.random_antihermitian(rng, 4)
            z *= (r0 / 2.0 - 0.01) / oc.spectral_norm(z)
            assert rm.contraction_gap(z) < 1.0
        # F itself stays a contraction at any scale
        big = oc.random_antihermitian(rng, 4)
        big *= 10.0 / oc.spectral_norm(big)
        w, _ = np.linalg.eigh(1j * big)
        mu = -1j * w
        for d in (mu[:, None] - mu[None, :]).ravel():
            assert abs(rm._entire_F(d)) <= 1.0 + 1e-12


class TestCovariantDerivative:
    @staticmethod
    def _geodesic_samples(pt, z, dt):
        curve = [bd.act(oc.mat_exp(t * z), pt) for t in (-dt, 0.0, dt)]
        field = [bd.delta(c, z) for c in curve]
        return curve, field

    def test_zero_field(self, fixture_point):
        rng = seeded(24)
        z = rm.random_horizontal(rng, fixture_point).matrix()
        curve = [bd.act(oc.mat_exp(t * z), fixture_point) for t in (-1e-4, 0.0, 1e-4)]
        field = [fiber_tangent(c, np.zeros(3)) for c in curve]
        out = rm.covariant_derivative(curve, field, 1, 1e-4)
        assert np.linalg.norm(out.x) <= 1e-10
        assert np.linalg.norm(out.g) <= 1e-10

    def test_geodesic_equation(self):
        rng = seeded(25)
        for dim in (3, 4):
            pt = rand_point(rng, dim)
            z = rm.random_horizontal(rng, pt).matrix()
            z /= oc.frobenius_norm(z)
            curve, field = self._geodesic_samples(pt, z, 1e-4)
            out = rm.covariant_derivative(curve, field, 1, 1e-4)
            assert max(np.linalg.norm(out.x), np.linalg.norm(out.g)) <= 1e-5

    def test_metric_compatibility(self, fixture_point):
        rng = seeded(26)
        z = rm.random_horizontal(rng, fixture_point).matrix()
        w = rm.random_horizontal(rng, fixture_point).matrix()
        dt = 1e-4
        curve = [bd.act(oc.mat_exp(t * z), fixture_point) for t in (-dt, 0.0, dt)]
        field_z = [bd.delta(c, z) for c in curve]
        field_w = [bd.delta(c, w) for c in curve]
        dz = rm.covariant_derivative(curve, field_z, 1, dt)
        dw = rm.covariant_derivative(curve, field_w, 1, dt)

        def quotient_ip(c, a, b):
            return oc.trace_inner(rm.horizontal_lift_kappa(c, a).matrix(),
                                  rm.horizontal_lift_kappa(c, b).matrix())

        lhs = (quotient_ip(curve[2], field_z[2], field_w[2])
               - quotient_ip(curve[0], field_z[0], field_w[0])) / (2.0 * dt)
        rhs = quotient_ip(curve[1], dz, field_w[1]) + quotient_ip(curve[1], field_z[1], dw)
        assert abs(lhs - rhs) <= 1e-4

    def test_rejects_coarse_grid(self, fixture_point):
        curve = [fixture_point] * 3
        field = [fiber_tangent(fixture_point, np.zeros(3))] * 3
        with pytest.raises(oc.InvariantViolation):
            rm.covariant_derivative(curve, field, 1, 0.5)


class TestSectionalCurvature:
    def test_commuting_lifts(self, fixture_point):
        z1 = np.zeros((3, 3), dtype=complex)
        z1[0, 0] = 1j  # pure phase block
        z2 = np.zeros((3, 3), dtype=complex)
        z2[1, 2] = 1.0
        z2[2, 1] = -1.0  # disjointly supported rotation block
        assert np.linalg.norm(z1 @ z2 - z2 @ z1) == 0.0
        k = rm.sectional_curvature(fixture_point, bd.delta(fixture_point, z1),
                                   bd.delta(fixture_point, z2))
        assert k == pytest.approx(0.0, abs=1e-12)

    def test_nonnegative_random(self):
        rng = seeded(27)
        for _ in range(25):
            pt = rand_point(rng, 4)
            v = bd.random_tangent(rng, pt)
            w = bd.random_tangent(rng, pt)
            assert rm.sectional_curvature(pt, v, w) >= -1e-12

    def test_independent_recomputation(self, fixture_point):
        v = fiber_tangent(fixture_point, E3[:, 1])
        x = oc.rank_one(E3[:, 2], E3[:, 0]) + oc.rank_one(E3[:, 0], E3[:, 2])
        w = bd.validate_tangent(fixture_point, x, E3[:, 2])
        k = rm.sectional_curvature(fixture_point, v, w)
        zv = rm.horizontal_lift_kappa(fixture_point, v).matrix()
        zw = rm.horizontal_lift_kappa(fixture_point, w).matrix()
        zv /= oc.frobenius_norm(zv)
        zw = zw - oc.trace_inner(zv, zw) * zv
        zw /= oc.frobenius_norm(zw)
        bracket = zv @ zw - zw @ zv
        vert = rm.vertical_project_Q(fixture_point, bracket)
        expected = 0.25 * oc.frobenius_norm(bracket - vert) ** 2 + oc.frobenius_norm(vert) ** 2
        assert k == pytest.approx(expected, abs=1e-12)

    def test_degenerate_span(self, fixture_point):
        v = fiber_tangent(fixture_point, E3[:, 1])
        with pytest.raises(oc.InvariantViolation):
            rm.sectional_curvature(fixture_point, v, 2.0 * v)


class TestAmbientGeodesicResidual:
    def test_zero_generator(self, fixture_point):
        out = rm.ambient_geodesic_residual(fixture_point, np.zeros((3, 3)))
        assert np.linalg.norm(out.x) <= 1e-14 and np.linalg.norm(out.g) <= 1e-14

    def test_single_plane_is_geodesic(self, fixture_point):
        z = oc.rank_one(E3[:, 2], E3[:, 0]) - oc.rank_one(E3[:, 0], E3[:, 2])
        out = rm.ambient_geodesic_residual(fixture_point, z)
        assert max(np.linalg.norm(out.x), np.linalg.norm(out.g)) <= 1e-11

    def test_two_plane_is_not(self, fixture_point):
        z = (oc.rank_one(E3[:, 2], E3[:, 0]) - oc.rank_one(E3[:, 0], E3[:, 2])
             + oc.rank_one(E3[:, 2], E3[:, 1]) - oc.rank_one(E3[:, 1], E3[:, 2]))
        out = rm.ambient_geodesic_residual(fixture_point, z)
        assert max(np.linalg.norm(out.x), np.linalg.norm(out.g)) >= 1e-3


class TestQuotientMinimality:
    def test_probe_within_radius(self, fixture_point):
        rng = seeded(28)
        hv = rm.random_horizontal(rng, fixture_point)
        z = hv.matrix()
        z /= oc.frobenius_norm(z)
        v = bd.delta(fixture_point, z)
        t_max = np.pi / 4.0 - 0.05
        rep = fin.minimality_probe(fixture_point, v, t_max, n_competitors=60,
                                   seed=29, metric="quotient")
        assert not rep["violation"]
