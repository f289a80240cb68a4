import numpy as np
import pytest

from warpgeo import jet as J
from warpgeo import oracle
from warpgeo.ambient import (
    AmbientChart,
    WarpEval,
    spaceform_curvature,
    warped_connection,
    warped_curvature,
    warped_curvature_full,
)
from warpgeo.errors import ConfigError, EvalDomainError


def seed_chart(chart, point, order=2):
    return [
        J.jet_variable(a, float(point[a]), chart.n, order) for a in range(chart.n)
    ]


class TestCharts:
    @pytest.mark.parametrize(
        "model,c", [("euclidean", 0.0), ("sphere", 1.0), ("hyperbolic", -1.0)]
    )
    def test_curvature_constant(self, model, c):
        assert AmbientChart(model, 3).c == c

    def test_bad_model(self):
        with pytest.raises(ConfigError):
            AmbientChart("lorentzian", 4)
        with pytest.raises(ConfigError):
            AmbientChart("sphere", 1)

    def test_factor_at_origin(self):
        origin = np.zeros(3)
        assert AmbientChart("euclidean", 3).metric_factor_value(origin) == 1.0
        assert AmbientChart("sphere", 3).metric_factor_value(origin) == 4.0
        assert AmbientChart("hyperbolic", 3).metric_factor_value(origin) == 4.0

    def test_poincare_ball_boundary(self):
        chart = AmbientChart("hyperbolic", 3)
        with pytest.raises(EvalDomainError):
            chart.metric_factor_value(np.array([1.0, 0.0, 0.0]))
        with pytest.raises(EvalDomainError):
            chart.conformal_exponent(seed_chart(chart, (0.8, 0.6, 0.0)))

    def test_factor_value_matches_jet(self):
        for model in ("sphere", "hyperbolic"):
            chart = AmbientChart(model, 3)
            p = (0.3, -0.2, 0.1)
            jet = chart.metric_factor(seed_chart(chart, p))
            assert jet.value == pytest.approx(chart.metric_factor_value(np.array(p)))

    @pytest.mark.parametrize("model", ["sphere", "hyperbolic"])
    def test_metric_compatibility(self, model, rng):
        # d_c h_ab = Gamma^d_ca h_db + Gamma^d_cb h_ad
        chart = AmbientChart(model, 3)
        for _ in range(4):
            p = rng.uniform(-0.4, 0.4, size=3)
            x = seed_chart(chart, p, order=2)
            h = chart.metric(x)
            gamma = chart.christoffel(x)
            n = chart.n
            for c in range(n):
                for a in range(n):
                    for b in range(n):
                        lhs = h[a][b].d(c).value
                        rhs = sum(
                            gamma[d][c][a].value * h[d][b].value
                            + gamma[d][c][b].value * h[a][d].value
                            for d in range(n)
                        )
                        assert lhs == pytest.approx(rhs, abs=1e-10)

    def test_sphere_ricci_is_spaceform(self, rng):
        # Ricci of the chart metric equals (n-1) h
        chart = AmbientChart("sphere", 3)
        rule = oracle.chart_metric_rule(chart)
        for _ in range(5):
            p = rng.uniform(-0.5, 0.5, size=3)
            riem, g_val = oracle.curvature_components(rule, p)
            ric = np.einsum("iijk->jk", riem)
            assert np.allclose(ric, (chart.n - 1) * g_val, atol=1e-7)

    def test_spaceform_curvature_formula(self):
        chart = AmbientChart("sphere", 3)
        p = np.array([0.1, 0.2, -0.3])
        x = np.array([1.0, 0.0, 0.0])
        y = np.array([0.0, 1.0, 0.0])
        e2 = chart.metric_factor_value(p)
        out = spaceform_curvature(chart, x, y, y, p)
        assert np.allclose(out, e2 * x)

    def test_flat_curvature_vanishes(self):
        chart = AmbientChart("euclidean", 3)
        out = spaceform_curvature(
            chart, np.ones(3), np.arange(3.0), np.array([1.0, -1.0, 2.0]), np.zeros(3)
        )
        assert np.allclose(out, 0.0)


class TestWarped:
    def test_warp_eval_positive(self):
        with pytest.raises(EvalDomainError):
            WarpEval(-1.0, 0.0, 0.0)
        with pytest.raises(EvalDomainError):
            WarpEval(0.0, 1.0, 0.0)

    def test_connection_dt_dt(self):
        t, n = warped_connection("dt_dt", WarpEval(1.0, 2.0, 3.0), dim=3)
        assert t == 0.0 and np.allclose(n, 0.0)

    def test_connection_mixed(self):
        w = WarpEval(2.0, 6.0, 0.0)
        u = np.array([1.0, -2.0, 0.5])
        t, n = warped_connection("mixed", w, u=u)
        assert t == 0.0
        assert np.allclose(n, 3.0 * u)

    def test_connection_tangential(self):
        w = WarpEval(2.0, 3.0, 0.0)
        t, n = warped_connection(
            "tangential", w, u=np.zeros(3), h_uv=1.5, nabla_n=np.array([1.0, 0, 0])
        )
        assert t == pytest.approx(-1.5 * 2.0 * 3.0)
        assert np.allclose(n, [1.0, 0, 0])

    def test_connection_unknown(self):
        with pytest.raises(ConfigError):
            warped_connection("diagonal", WarpEval(1, 0, 0), dim=2)

    def test_radial_curvature(self):
        # f = 1, f'' = 1, U unit -> -U
        u = np.array([1.0, 0.0, 0.0])
        out = warped_curvature("radial", WarpEval(1.0, 0.0, 1.0), u=u)
        assert np.allclose(out, -u)

    def test_radial_linearity(self, rng):
        w = WarpEval(1.3, 0.4, -0.7)
        for _ in range(5):
            a, b = rng.normal(size=(2, 3))
            s = float(rng.normal())
            lhs = warped_curvature("radial", w, u=a + s * b)
            rhs = warped_curvature("radial", w, u=a) + s * warped_curvature(
                "radial", w, u=b
            )
            assert np.allclose(lhs, rhs, atol=1e-12)

    def test_horizontal_flat(self):
        # c = 0, f' = 2, V, W, U mutually orthogonal with h(U, W) = 1 -> -4 V
        chart = AmbientChart("euclidean", 3)
        v = np.array([1.0, 0.0, 0.0])
        w_vec = np.array([0.0, 1.0, 0.0])
        u = np.array([0.0, 1.0, 0.0])  # h(U, W) = 1, h(U, V) = 0
        out = warped_curvature(
            "horizontal",
            WarpEval(1.0, 2.0, 0.0),
            chart,
            np.zeros(3),
            u=u,
            v=v,
            w=w_vec,
        )
        assert np.allclose(out, -4.0 * v)

    def test_full_assembly_matches_special_cases(self, rng):
        chart = AmbientChart("sphere", 3)
        w = WarpEval(1.7, 0.6, -0.4)
        p = np.array([0.2, -0.1, 0.3])
        u, v, z = rng.normal(size=(3, 3))
        # pure radial: R(U, dt) dt
        t_part, n_part = warped_curvature_full(
            w, chart, (0.0, u), (1.0, np.zeros(3)), (1.0, np.zeros(3)), p
        )
        assert t_part == pytest.approx(0.0, abs=1e-12)
        assert np.allclose(n_part, warped_curvature("radial", w, u=u))
        # pure horizontal: R(V, Z) U
        t_part, n_part = warped_curvature_full(
            w, chart, (0.0, v), (0.0, z), (0.0, u), p
        )
        assert t_part == pytest.approx(
            w.f * w.f2 * 0.0, abs=1e-12
        )  # no dt legs, no dt output from the h-blocks
        assert np.allclose(
            n_part,
            warped_curvature("horizontal", w, chart, p, u=u, v=v, w=z),
        )

    def test_full_assembly_antisymmetric(self, rng):
        chart = AmbientChart("hyperbolic", 3)
        w = WarpEval(1.2, -0.3, 0.5)
        p = np.array([0.1, 0.2, -0.1])
        for _ in range(3):
            x = (float(rng.normal()), rng.normal(size=3))
            y = (float(rng.normal()), rng.normal(size=3))
            z = (float(rng.normal()), rng.normal(size=3))
            t1, n1 = warped_curvature_full(w, chart, x, y, z, p)
            t2, n2 = warped_curvature_full(w, chart, y, x, z, p)
            assert t1 == pytest.approx(-t2, abs=1e-12)
            assert np.allclose(n1, -n2, atol=1e-12)
