import math

import numpy as np
import pytest

from warpgeo import biharmonic as bh
from warpgeo.errors import UsageError
from warpgeo.immersion import PointGeometry


class TestResiduals:
    def test_cone_residual_closed_form(self, cone):
        # flat ambient: residual = m [ -lapLambda + lambda |A|^2 ] with the
        # cone's closed forms
        for r in (0.8, 1.0, 1.3):
            spec = cone(r)
            for u in (0.5, 1.0, 2.0):
                lam = 1.0 / (2.0 * r * math.sqrt(1 + r * r) * u)
                lap = 1.0 / (2.0 * r * (1 + r * r) ** 1.5 * u**3)
                a2 = 1.0 / (r * r * (1 + r * r) * u * u)
                ref = 2.0 * (-lap + lam * a2)
                got = bh.normal_residual(spec, (u, 1.0))
                assert got == pytest.approx(ref, abs=1e-9 * (1 + abs(ref)))

    def test_cone_r1_normally_biharmonic(self, cone):
        assert bh.normal_residual(cone(1.0), (1.0, 0.7)) == pytest.approx(
            0.0, abs=1e-10
        )

    def test_slice_r2_residual(self, sphere_slice):
        # m [ lambda |A|^2 - lambda Ric(eta,eta) ] = 2 [2*8 - 2*2] = 24
        assert bh.normal_residual(sphere_slice(2.0), (0.3, -0.2)) == pytest.approx(
            24.0, abs=1e-6
        )

    def test_cone_tangential_residual(self, cone):
        # frozen fixture: |T|_g = 1/(2 sqrt 2) at r = 1, u = 1
        _, norm = bh.tangential_residual(cone(1.0), (1.0, 0.7))
        assert norm == pytest.approx(1.0 / (2.0 * math.sqrt(2.0)), rel=1e-9)

    def test_slice_tangential_vanishes(self, sphere_slice):
        t_amb, norm = bh.tangential_residual(sphere_slice(1.0), (0.3, -0.2))
        assert norm == pytest.approx(0.0, abs=1e-8)
        assert np.allclose(t_amb, 0.0, atol=1e-8)

    def test_tangential_is_tangent(self, cone):
        spec = cone(1.3)
        pg = PointGeometry(spec, (1.0, 0.7))
        t_amb, _ = bh.tangential_residual(spec, (1.0, 0.7), geometry=pg)
        assert pg.e2_val * np.dot(t_amb, pg.eta_val) == pytest.approx(0.0, abs=1e-9)


class TestClassify:
    def test_plane_is_harmonic(self, plane):
        rec = bh.classify(plane, [(0.0, 0.0), (1.0, 2.0)], 1e-7)
        assert rec.harmonic
        assert rec.biharmonic
        assert rec.normally_biharmonic and rec.tangentially_biharmonic

    def test_slice_r1_biharmonic(self, sphere_slice):
        rec = bh.classify(sphere_slice(1.0), [(0.0, 0.0), (0.3, -0.2)], 1e-7)
        assert rec.biharmonic and not rec.harmonic

    def test_cone_r1_flags(self, cone):
        rec = bh.classify(cone(1.0), [(1.0, 0.7)], 1e-7)
        assert rec.normally_biharmonic
        assert not rec.tangentially_biharmonic
        assert not rec.biharmonic
        assert not rec.harmonic

    def test_flags_monotone_in_tol(self, cone):
        points = [(1.0, 0.7), (0.5, 1.0)]
        flags = ("harmonic", "normally_biharmonic", "tangentially_biharmonic", "biharmonic")
        prev = None
        for tol in (1e-10, 1e-7, 1e-3, 1e2):
            rec = bh.classify(cone(1.0), points, tol)
            cur = {k: getattr(rec, k) for k in flags}
            if prev is not None:
                for k in flags:
                    assert cur[k] >= prev[k]  # loosening never clears a flag
            prev = cur

    def test_empty_points(self, cone):
        with pytest.raises(UsageError):
            bh.classify(cone(1.0), [], 1e-7)

    def test_to_dict(self, cone):
        d = bh.classify(cone(1.0), [(1.0, 0.7)], 1e-7).to_dict()
        assert d["points"] == [[1.0, 0.7]]
        assert set(d) >= {"tol", "scale", "maxNormalResidual", "biharmonic"}


class TestScan:
    def test_cone_root(self, cone):
        res = bh.parameter_scan(cone(1.0), "r", 0.5, 2.0, 31, (1.0, 1.0))
        assert len(res.roots) == 1
        assert res.roots[0] == pytest.approx(1.0, abs=1e-6)

    def test_slice_root(self, sphere_slice):
        res = bh.parameter_scan(sphere_slice(1.0), "r", 0.5, 2.0, 31, (0.3, -0.2))
        assert len(res.roots) == 1
        assert res.roots[0] == pytest.approx(1.0, abs=1e-6)

    def test_no_root_interval(self, cone):
        res = bh.parameter_scan(cone(1.0), "r", 1.5, 2.0, 11, (1.0, 1.0))
        assert res.roots == ()

    def test_failures_skipped(self, cone):
        # r = 0 degenerates the cone; the sample is reported and skipped
        res = bh.parameter_scan(cone(1.0), "r", -1.0, 1.0, 3, (1.0, 1.0))
        assert len(res.failures) == 1
        assert res.failures[0][0] == 0.0
        assert any(r is None for _, r in res.samples)

    def test_bad_arguments(self, cone):
        with pytest.raises(UsageError):
            bh.parameter_scan(cone(1.0), "r", 2.0, 0.5, 11, (1.0, 1.0))
        with pytest.raises(UsageError):
            bh.parameter_scan(cone(1.0), "r", 0.5, 2.0, 1, (1.0, 1.0))
        with pytest.raises(UsageError):
            bh.parameter_scan(cone(1.0), "q", 0.5, 2.0, 11, (1.0, 1.0))
