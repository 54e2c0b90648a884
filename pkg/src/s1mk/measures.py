"""Curvature-type measure densities and first-variation checks.

All measures of a planar body are absolutely continuous in the normal angle
once the support function is smooth, so they are carried around as densities
on the body's grid together with their totals.  The density zoo:

  surface            h'' + h
  lp_surface         h^(1-p) (h'' + h)
  lp_dual            h^(1-p) (h^2 + h'^2)^((q-2)/2) (h'' + h)
  dual volume        (1/2) integral rho^q  over directions

The lp_dual density is normalized so that a solution of the central equation
has total measure equal to integral(f).  The dual-volume first variation uses
the half-normalized companion density (1/2) h (h^2+h'^2)^((q-2)/2) (h''+h),
which at q = 2 reduces to half the support times the surface density and makes
the q = 2 identity with area exact; reports carry that normalization.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .body import SupportFunction, area, minkowski_sum, p_sum, perimeter, radial
from .errors import OriginOnBoundaryError, ParameterRangeError, SingularDensityError
from .grid import PeriodicSamples, integrate, resample

DEFAULT_STEPS = (1e-2, 5e-3, 2.5e-3)
_SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class MeasureDensity:
    density: PeriodicSamples
    total: float
    kind: str
    p: float | None = None
    q: float | None = None


@dataclass(frozen=True)
class ProblemParams:
    """Data (p, q, f) for the prescribed-measure equation, with optional bound."""

    p: float
    q: float
    f: PeriodicSamples
    lam: float | None = None

    def __post_init__(self):
        if np.min(self.f.values) <= 0.0:
            raise ValueError("data f must be strictly positive")
        if self.lam is not None:
            if self.lam < 1.0:
                raise ValueError(f"bound must be >= 1, got {self.lam}")
            lo, hi = np.min(self.f.values), np.max(self.f.values)
            if lo < 1.0 / self.lam - 1e-12 or hi > self.lam + 1e-12:
                raise ValueError(
                    f"f range [{lo:.6g}, {hi:.6g}] violates [1/{self.lam}, {self.lam}]"
                )


@dataclass(frozen=True)
class VariationalReport:
    """One-sided difference quotients of a volume along a path, extrapolated."""

    lhs_slope: float
    rhs_integral: float
    rel_error: float
    steps: tuple
    slopes: tuple
    normalization: float | None = None


def _lp_factor(h: np.ndarray, p: float) -> np.ndarray:
    if p == 1.0:
        return np.ones_like(h)
    if p < 1.0:
        # h -> 0 kills the density since 1 - p > 0; cut at a tiny floor.
        floor = _SINGULAR_TOL * max(float(h.max()), 1.0)
        return np.where(h > floor, h, 0.0) ** (1.0 - p)
    floor = _SINGULAR_TOL * max(float(h.max()), 1.0)
    if float(h.min()) <= floor:
        raise SingularDensityError(
            f"h^(1-p) with p = {p} > 1 is singular: min h = {float(h.min()):.3e}"
        )
    return h ** (1.0 - p)


def _density_core(body: SupportFunction, p: float, q: float) -> PeriodicSamples:
    h = body.values
    curv = body.curvature.values
    lp = _lp_factor(h, p)
    if q == 2.0:
        vals = lp * curv
    else:
        hp = body.derivative.values
        speed2 = h * h + hp * hp
        if q < 2.0:
            floor = _SINGULAR_TOL * max(float(np.sqrt(speed2.max())), 1.0)
            if float(np.sqrt(speed2.min())) <= floor:
                raise SingularDensityError(
                    f"speed factor with q = {q} < 2 singular: boundary meets the origin"
                )
        vals = lp * speed2 ** (0.5 * (q - 2.0)) * curv
    return PeriodicSamples(vals, body.grid)


def surface_density(body: SupportFunction) -> MeasureDensity:
    """Surface-area measure density h'' + h; its total is the perimeter."""
    dens = body.curvature
    total = integrate(dens)
    per = perimeter(body)
    assert abs(total - per) <= 1e-10 * max(1.0, abs(per)), (total, per)
    return MeasureDensity(dens, total, kind="surface")


def lp_surface_density(body: SupportFunction, p: float) -> MeasureDensity:
    dens = _density_core(body, p, 2.0)
    return MeasureDensity(dens, integrate(dens), kind="lp_surface", p=p)


def lp_dual_density(body: SupportFunction, p: float, q: float) -> MeasureDensity:
    dens = _density_core(body, p, q)
    return MeasureDensity(dens, integrate(dens), kind="lp_dual", p=p, q=q)


def dual_volume(body: SupportFunction, q: float) -> float:
    """q-th dual volume (1/2) integral rho(xi)^q over direction angles."""
    if q == 0.0:
        raise ParameterRangeError("dual volume index q must be nonzero")
    if float(np.min(body.values)) <= 0.0:
        raise OriginOnBoundaryError("dual volume needs the origin strictly inside")
    rho = radial(body).rho
    return 0.5 * integrate(PeriodicSamples(rho.values**q, body.grid))


def extrapolate_to_zero(steps, values) -> float:
    """Neville extrapolation of (step, value) pairs to step 0."""
    t = [float(s) for s in steps]
    p = [float(v) for v in values]
    m = len(p)
    for level in range(1, m):
        for i in range(m - level):
            p[i] = (t[i] * p[i + 1] - t[i + level] * p[i]) / (t[i] - t[i + level])
    return p[0]


def _one_sided_slopes(fun, steps):
    base = fun(0.0)
    return tuple((fun(s) - base) / s for s in steps)


def _on_grid(k: SupportFunction, l: SupportFunction) -> np.ndarray:
    if l.grid.n_points == k.grid.n_points:
        return l.values
    return resample(l.h, k.grid).values


def check_aleksandrov(k: SupportFunction, l: SupportFunction,
                      steps=DEFAULT_STEPS) -> VariationalReport:
    """First variation of area along t -> K + tL against integral h_L dS_K."""
    slopes = _one_sided_slopes(lambda t: area(minkowski_sum(k, l, t)) if t else area(k),
                               steps)
    lhs = extrapolate_to_zero(steps, slopes)
    hl = _on_grid(k, l)
    rhs = integrate(PeriodicSamples(hl * k.curvature.values, k.grid))
    rel = abs(lhs - rhs) / max(abs(rhs), 1e-300)
    return VariationalReport(lhs, rhs, rel, tuple(steps), slopes)


def check_lp_variational(k: SupportFunction, l: SupportFunction, p: float,
                         steps=DEFAULT_STEPS) -> VariationalReport:
    """First variation of area along the Firey path against the p-measure pairing."""
    if p < 1.0:
        raise ParameterRangeError(f"variational check needs p >= 1, got {p}")
    slopes = _one_sided_slopes(lambda t: area(p_sum(k, l, t, p)) if t else area(k),
                               steps)
    lhs = extrapolate_to_zero(steps, slopes)
    hl = _on_grid(k, l)
    integrand = hl**p * _lp_factor(k.values, p) * k.curvature.values
    rhs = integrate(PeriodicSamples(integrand, k.grid)) / p
    rel = abs(lhs - rhs) / max(abs(rhs), 1e-300)
    return VariationalReport(lhs, rhs, rel, tuple(steps), slopes)


def check_dual_variational(k: SupportFunction, l: SupportFunction, q: float,
                           steps=DEFAULT_STEPS) -> VariationalReport:
    """First variation of the q-th dual volume along t -> K + tL.

    The right side is q times the pairing of h_L / h_K with the half-normalized
    dual-volume density; the report records normalization = 0.5.
    """
    slopes = _one_sided_slopes(
        lambda t: dual_volume(minkowski_sum(k, l, t), q) if t else dual_volume(k, q),
        steps,
    )
    lhs = extrapolate_to_zero(steps, slopes)
    hl = _on_grid(k, l)
    h = k.values
    hp = k.derivative.values
    speed2 = h * h + hp * hp
    dens = 0.5 * h * speed2 ** (0.5 * (q - 2.0)) * k.curvature.values
    rhs = q * integrate(PeriodicSamples(hl / h * dens, k.grid))
    rel = abs(lhs - rhs) / max(abs(rhs), 1e-300)
    return VariationalReport(lhs, rhs, rel, tuple(steps), slopes, normalization=0.5)
