"""Space-form ambients as conformally flat charts, plus the warped-product
connection and curvature rules for (I x N, dt^2 + f^2 h).

Charts: Euclidean space (identity chart), the unit sphere via stereographic
projection (conformal factor 2/(1+|x|^2), missing one point) and unit
hyperbolic space via the Poincare ball (2/(1-|x|^2), |x| < 1).  Only unit
curvature models are supported; other radii are obtained by scaling the
immersion instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import jet as J
from .errors import ConfigError, EvalDomainError

MODELS = ("euclidean", "sphere", "hyperbolic")
_CURVATURE = {"euclidean": 0.0, "sphere": 1.0, "hyperbolic": -1.0}


@dataclass(frozen=True)
class AmbientChart:
    model: str
    n: int

    def __post_init__(self):
        if self.model not in MODELS:
            raise ConfigError(f"unknown ambient model {self.model!r}")
        if self.n < 2:
            raise ConfigError(f"ambient dimension must be >= 2, got {self.n}")

    @property
    def c(self):
        """Sectional curvature constant."""
        return _CURVATURE[self.model]

    # -- conformal factor rho with h = e^{2 rho} * delta ------------------

    def _radial(self, x):
        s = x[0] * x[0]
        for xa in x[1:]:
            s = s + xa * xa
        return s

    def conformal_exponent(self, x):
        """rho at the point carried by the jets `x` (length n)."""
        if self.model == "euclidean":
            return J.jet_constant(0.0, x[0].n_vars, x[0].order)
        s = self._radial(x)
        if self.model == "sphere":
            return J.log(2.0 / (1.0 + s))
        if s.value >= 1.0:
            raise EvalDomainError(
                f"point outside Poincare ball, |x|^2 = {s.value:g}", value=s.value
            )
        return J.log(2.0 / (1.0 - s))

    def conformal_gradient(self, x):
        """Ambient partials d rho / d x_a, as jets."""
        if self.model == "euclidean":
            zero = J.jet_constant(0.0, x[0].n_vars, x[0].order)
            return [zero] * self.n
        s = self._radial(x)
        if self.model == "sphere":
            denom = 1.0 + s
            return [(-2.0) * xa / denom for xa in x]
        if s.value >= 1.0:
            raise EvalDomainError(
                f"point outside Poincare ball, |x|^2 = {s.value:g}", value=s.value
            )
        denom = 1.0 - s
        return [2.0 * xa / denom for xa in x]

    def metric_factor(self, x):
        """e^{2 rho} as a jet."""
        return J.exp(2.0 * self.conformal_exponent(x))

    def metric_factor_value(self, xvals):
        if self.model == "euclidean":
            return 1.0
        s = float(np.dot(xvals, xvals))
        if self.model == "sphere":
            return (2.0 / (1.0 + s)) ** 2
        if s >= 1.0:
            raise EvalDomainError(
                f"point outside Poincare ball, |x|^2 = {s:g}", value=s
            )
        return (2.0 / (1.0 - s)) ** 2

    def metric(self, x):
        """h_ab = e^{2 rho} delta_ab as an n x n jet matrix."""
        e2 = self.metric_factor(x)
        zero = J.jet_constant(0.0, x[0].n_vars, x[0].order)
        return [
            [e2 if a == b else zero for b in range(self.n)] for a in range(self.n)
        ]

    def christoffel(self, x):
        """Gamma^k_ab = delta_ak d_b rho + delta_bk d_a rho - delta_ab d_k rho."""
        grad = self.conformal_gradient(x)
        zero = J.jet_constant(0.0, x[0].n_vars, x[0].order)
        n = self.n
        gamma = [[[zero for _ in range(n)] for _ in range(n)] for _ in range(n)]
        for k in range(n):
            for a in range(n):
                for b in range(n):
                    term = zero
                    if a == k:
                        term = term + grad[b]
                    if b == k:
                        term = term + grad[a]
                    if a == b:
                        term = term - grad[k]
                    gamma[k][a][b] = term
        return gamma

    def inner(self, u, v, xvals):
        return self.metric_factor_value(xvals) * float(np.dot(u, v))


def spaceform_curvature(chart, x_vec, y_vec, z_vec, point):
    """R^N(X,Y)Z = c (h(Y,Z) X - h(X,Z) Y) at constant curvature c."""
    c = chart.c
    if c == 0.0:
        return np.zeros_like(np.asarray(x_vec, dtype=float))
    x_vec = np.asarray(x_vec, dtype=float)
    y_vec = np.asarray(y_vec, dtype=float)
    z_vec = np.asarray(z_vec, dtype=float)
    e2 = chart.metric_factor_value(point)
    return c * (e2 * np.dot(y_vec, z_vec) * x_vec - e2 * np.dot(x_vec, z_vec) * y_vec)


# -- warped ambient (I x N, dt^2 + f^2 h) ---------------------------------


@dataclass(frozen=True)
class WarpEval:
    """Warping function and its first two derivatives at a fixed t."""

    f: float
    f1: float
    f2: float

    def __post_init__(self):
        if not self.f > 0.0:
            raise EvalDomainError(f"warping function must be positive, got {self.f:g}", value=self.f)


def warped_connection(kind, warp, *, u=None, v=None, h_uv=None, nabla_n=None, dim=None):
    """Levi-Civita connection of the warped ambient, split as
    (dt-component, N-component).

    kind 'dt_dt':      nabla_{dt} dt = 0
    kind 'mixed':      nabla_{dt} U  = (f'/f) U
    kind 'tangential': nabla_U V     = nabla^N_U V - h(U,V) f f' dt
    """
    if kind == "dt_dt":
        size = dim if dim is not None else (len(u) if u is not None else 0)
        return 0.0, np.zeros(size)
    if kind == "mixed":
        return 0.0, (warp.f1 / warp.f) * np.asarray(u, dtype=float)
    if kind == "tangential":
        n_part = (
            np.asarray(nabla_n, dtype=float)
            if nabla_n is not None
            else np.zeros(len(u))
        )
        return -float(h_uv) * warp.f * warp.f1, n_part
    raise ConfigError(f"unknown connection term {kind!r}")


def warped_curvature(kind, warp, chart=None, point=None, *, u=None, v=None, w=None):
    """Curvature of the warped ambient, special cases:

    kind 'radial':     R(U, dt) dt = -(f''/f) U
    kind 'horizontal': R(V, W) U = R^N(V,W)U - (f')^2 [h(U,W)V - h(U,V)W]
    """
    if kind == "radial":
        return -(warp.f2 / warp.f) * np.asarray(u, dtype=float)
    if kind == "horizontal":
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        w = np.asarray(w, dtype=float)
        rn = spaceform_curvature(chart, v, w, u, point)
        e2 = chart.metric_factor_value(point)
        return rn - warp.f1**2 * (
            e2 * np.dot(u, w) * v - e2 * np.dot(u, v) * w
        )
    raise ConfigError(f"unknown curvature case {kind!r}")


def warped_curvature_full(warp, chart, x, y, z, point):
    """R of (I x N, dt^2 + f^2 h) on arbitrary vectors, assembled from the
    special cases by multilinearity.  Vectors are (t-component, N-components)
    pairs; the result is returned the same way."""
    x0, xn = float(x[0]), np.asarray(x[1], dtype=float)
    y0, yn = float(y[0]), np.asarray(y[1], dtype=float)
    z0, zn = float(z[0]), np.asarray(z[1], dtype=float)
    e2 = chart.metric_factor_value(point)
    f, f1, f2 = warp.f, warp.f1, warp.f2

    n_part = spaceform_curvature(chart, xn, yn, zn, point)
    n_part = n_part - f1**2 * (
        e2 * np.dot(zn, yn) * xn - e2 * np.dot(zn, xn) * yn
    )
    n_part = n_part + (f2 / f) * (x0 * z0 * yn - y0 * z0 * xn)

    t_part = f * f2 * (y0 * e2 * np.dot(xn, zn) - x0 * e2 * np.dot(yn, zn))
    return t_part, n_part
