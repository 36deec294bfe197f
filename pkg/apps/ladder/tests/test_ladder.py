import math

import mpmath
import numpy as np
import pytest
from django.test import SimpleTestCase

from apps.core.exceptions import BracketError, DomainError
from apps.ladder.quadrature import adaptive_panels, integrate, panel_rule
from apps.ladder.services import (
    LadderModel,
    anchor_value,
    distance_reference,
    integrate_against_ladder,
    integrate_on_reverse,
    ladder_diagnostics,
    omega,
    omega_values,
    phi1,
    phi1_array,
    phi1_inverse,
    reverse_iterate,
    rho_distance,
    z_tilde_sq,
)
from apps.ladder.types import EULER_GAMMA, OmegaVariant, SegmentInterval

FIRST_ZERO = 14.134725141734693


class QuadratureTests(SimpleTestCase):
    """求积工具测试"""

    def test_panel_rule_polynomial(self):
        """测试多项式精确积分"""
        value = panel_rule(lambda x: x**5, np.array([0.0, 1.0]), np.array([1.0, 3.0]), 0)
        np.testing.assert_allclose(value, [1.0 / 6.0, (3.0**6 - 1.0) / 6.0], rtol=1e-14)

    def test_adaptive_panels_depth(self):
        """测试自适应深度不低于下限"""
        a, b = np.array([0.0, 0.0]), np.array([1.0, 1.0])
        values, depths = adaptive_panels(np.cos, a, b, 1e-12, min_depth=np.array([1, 3]))
        np.testing.assert_allclose(values, math.sin(1.0), rtol=1e-14)
        self.assertEqual(depths[0], 1)
        self.assertEqual(depths[1], 3)

    def test_integrate(self):
        """测试 quad 封装"""
        self.assertAlmostEqual(integrate(math.sin, 0.0, math.pi, 1e-10), 2.0, places=12)


class SegmentTests(SimpleTestCase):
    """区间类型测试"""

    def test_base_segment(self):
        """测试 [πL, πL+U]"""
        seg = SegmentInterval.base(100, 1.0)
        self.assertAlmostEqual(seg.a, 100 * math.pi)
        self.assertAlmostEqual(seg.length, 1.0, places=12)

    def test_validation(self):
        """测试非法区间"""
        with self.assertRaises(DomainError):
            SegmentInterval(2.0, 1.0)
        with self.assertRaises(DomainError):
            SegmentInterval.base(100, 1.6)
        with self.assertRaises(DomainError):
            SegmentInterval(0.0, math.inf)


class OmegaTests(SimpleTestCase):
    """ω(t) 测试"""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.models = {variant: LadderModel.build(60.0, variant) for variant in OmegaVariant}

    def test_definitions(self):
        """测试三种取法的定义"""
        self.assertAlmostEqual(omega(math.exp(10), self.models[OmegaVariant.LEADING_LOG]), 10.0, places=12)
        two_pi_e = 2 * math.pi * math.e
        self.assertAlmostEqual(omega(two_pi_e, self.models[OmegaVariant.CALIBRATED]), 2.0 + EULER_GAMMA, places=12)
        self.assertAlmostEqual(omega(two_pi_e, self.models[OmegaVariant.MEAN_SQUARE]), 1.0 + 2 * EULER_GAMMA, places=12)

    def test_variants_agree(self):
        """测试各取法在 [10², 10⁶] 上相差不超过 2.5"""
        t = np.geomspace(1e2, 1e6, 200)
        values = [omega_values(t, variant) for variant in OmegaVariant]
        for first in values:
            for second in values:
                self.assertLessEqual(float(np.max(np.abs(first - second))), 2.5)

    def test_positive_from_anchor(self):
        """测试 t ≥ 10 时 ω > 0"""
        t = np.linspace(10.0, 1e3, 500)
        for variant in OmegaVariant:
            self.assertTrue(np.all(omega_values(t, variant) > 0))

    def test_domain(self):
        """测试锚点以下"""
        with self.assertRaises(DomainError):
            omega(5.0, self.models[OmegaVariant.CALIBRATED])


class LadderModelTests(SimpleTestCase):
    """阶梯模型测试"""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        mpmath.mp.dps = 30
        cls.model = LadderModel.covering(math.pi * 1000)
        cls.leading = LadderModel.covering(math.pi * 1000, omega_variant=OmegaVariant.LEADING_LOG)

    def test_checkpoint_table(self):
        """测试检查点表严格递增且只读"""
        self.assertTrue(np.all(np.diff(self.model.values) > 0))
        self.assertGreaterEqual(self.model.anchor_t0, 10.0)
        self.assertFalse(self.model.values.flags.writeable)
        self.assertTrue(np.all(self.model.depths >= 1))

    def test_z_tilde_sq(self):
        """测试 Z̃² 的零点与数值"""
        self.assertLess(z_tilde_sq(FIRST_ZERO, self.model), 1e-6)
        expected = float(abs(mpmath.zeta(mpmath.mpc(0.5, 100))) ** 2) / omega(100.0, self.model)
        self.assertLess(abs(z_tilde_sq(100.0, self.model) - expected) / expected, 1e-8)
        samples = self.model.integrand(np.linspace(10.0, 3000.0, 2000))
        self.assertTrue(np.all(samples >= 0))

    def test_anchor_value(self):
        """测试锚点条件"""
        self.assertEqual(phi1(self.model.anchor_t0, self.model), anchor_value(self.model.anchor_t0))
        self.assertAlmostEqual(anchor_value(10.0), 10.0 - (1 - EULER_GAMMA) * 10.0 / math.log(10.0), places=14)

    def test_monotone(self):
        """测试 φ₁ 在间距 0.5 的网格上严格递增"""
        t = np.arange(self.model.anchor_t0, 3500.0, 0.5)
        self.assertTrue(np.all(np.diff(phi1_array(t, self.model)) > 0))

    def test_continuous_at_checkpoints(self):
        """测试 φ₁ 在检查点两侧连续"""
        knot = float(self.model.knots[123])
        left = phi1(knot - 1e-9, self.model)
        right = phi1(knot + 1e-9, self.model)
        self.assertLess(abs(right - left), 1e-8)

    def test_lags_behind_identity(self):
        """测试 t − φ₁(t) > 0"""
        for model in (self.model, self.leading):
            t = np.linspace(model.anchor_t0, model.t_max, 3000)
            self.assertTrue(np.all(t - phi1_array(t, model) > 0))

    def test_inverse_round_trip(self):
        """测试逆映射往返"""
        T = math.pi * 100
        self.assertLess(abs(phi1(phi1_inverse(T, self.model), self.model) - T) / T, 1e-9)
        rng = np.random.default_rng(17)
        for T in rng.uniform(self.model.values[0], 3500.0, 50):
            inverse = phi1_inverse(float(T), self.model)
            self.assertGreater(inverse, T)
            self.assertLess(abs(phi1(inverse, self.model) - T) / T, 1e-9)

    def test_inverse_bounds(self):
        """测试逆映射的定义域"""
        with self.assertRaises(DomainError):
            phi1_inverse(1.0, self.model)
        with self.assertRaises(BracketError):
            phi1_inverse(self.model.phi_max + 1.0, self.model)
        with self.assertRaises(DomainError):
            phi1(self.model.t_max + 1.0, self.model)

    def test_reverse_iterate(self):
        """测试第一次逆迭代"""
        seg = SegmentInterval.base(300, 1.0)
        rev = reverse_iterate(seg, self.model)
        self.assertLess(abs(phi1(rev.a, self.model) - seg.a), 1e-9 * seg.a)
        self.assertLess(abs(phi1(rev.b, self.model) - seg.b), 1e-9 * seg.b)
        self.assertGreater(rev.a, seg.b)
        mass = integrate_on_reverse(lambda t, u: z_tilde_sq(t, self.model), rev, self.model)
        self.assertAlmostEqual(mass, seg.length, delta=1e-8)

    def test_change_of_variables(self):
        """测试换元恒等式"""
        seg = SegmentInterval.base(200, 1.2)
        exact = {
            "one": seg.length,
            "sin2": seg.length / 2 - (math.sin(2 * seg.b) - math.sin(2 * seg.a)) / 4,
            "cos2": seg.length / 2 + (math.sin(2 * seg.b) - math.sin(2 * seg.a)) / 4,
        }
        weights = {"one": lambda u: 1.0, "sin2": lambda u: math.sin(u) ** 2, "cos2": lambda u: math.cos(u) ** 2}
        for name, g in weights.items():
            value = integrate_against_ladder(g, seg, self.model)
            self.assertLess(abs(value - exact[name]) / exact[name], 1e-7, msg=name)

    def test_rho_distance(self):
        """测试分离距离为正且随 L 增长"""
        distances = [rho_distance(SegmentInterval.base(L, 1.0), self.model) for L in (100, 300, 1000)]
        self.assertTrue(all(d > 0 for d in distances))
        self.assertTrue(distances[0] < distances[1] < distances[2])

    def test_diagnostics(self):
        """测试诊断行"""
        rows = ladder_diagnostics([100, 1000], self.model)
        self.assertEqual([row.L for row in rows], [100, 1000])
        for row in rows:
            self.assertAlmostEqual(row.ratio, row.rho / distance_reference(row.L))
            self.assertLess(row.round_trip_error, 1e-9)
            self.assertAlmostEqual(row.gap, row.rho + 1.0, places=9)


@pytest.mark.slow
class DistanceLawTests(SimpleTestCase):
    """距离律测试 (L = 10⁴)"""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.model = LadderModel.covering(math.pi * 10_000)

    def test_ratio_band(self):
        """测试 ρ / (π(1−γ)L/ln L) ∈ [0.5, 2]"""
        for row in ladder_diagnostics([1000, 10_000], self.model):
            self.assertGreaterEqual(row.ratio, 0.5)
            self.assertLessEqual(row.ratio, 2.0)

    def test_growth(self):
        """测试 ρ 在 L ∈ {10², 10³, 10⁴} 上递增"""
        rows = ladder_diagnostics([100, 1000, 10_000], self.model)
        self.assertTrue(rows[0].rho < rows[1].rho < rows[2].rho)

    def test_reverse_gap(self):
        """测试 ¹T − T 与 (1−γ)T/ln T 同阶"""
        T = math.pi * 10_000
        gap = phi1_inverse(T, self.model) - T
        reference = (1 - EULER_GAMMA) * T / math.log(T)
        self.assertGreater(gap, reference / 2)
        self.assertLess(gap, reference * 2)

    def test_lags_behind_identity(self):
        """测试 t − φ₁(t) > 0 直到模型上限"""
        t = np.linspace(self.model.anchor_t0, self.model.t_max, 20_000)
        self.assertTrue(np.all(t - phi1_array(t, self.model) > 0))
