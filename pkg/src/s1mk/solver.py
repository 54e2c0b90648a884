"""Damped Newton with data continuation for the prescribed-measure equation.

The residual of a candidate support function h against data f is

    F(h) = h^(1-p) (h^2 + h'^2)^((q-2)/2) (h'' + h) - f,

discretized spectrally on the grid of f.  The exact Frechet derivative is
assembled as a dense matrix from the differentiation matrices and solved by LU
with a LAPACK condition estimate.  ``solve`` ramps the data from the constant 1
to f over a fixed number of continuation stages; each stage runs damped Newton
with backtracking on the Euclidean residual norm, rejecting any step that
leaves the cone of nonnegative convex support functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import get_lapack_funcs, lu_factor, lu_solve

from .body import DEFAULT_TOL_CONVEX_SCALE, SupportFunction
from .errors import (
    ParameterRangeError,
    SingularDensityError,
    SingularJacobianError,
    StagnationError,
)
from .grid import Grid, PeriodicSamples, diff, diff_matrix
from .measures import ProblemParams

RCOND_LIMIT = 1e-14


@dataclass(frozen=True)
class SolverConfig:
    newton_tol: float = 1e-10
    max_newton: int = 50
    continuation_steps: int = 10
    damping_min: float = 1e-4
    positivity_floor: float = 1e-8
    grid: Grid | None = None

    def __post_init__(self):
        if self.continuation_steps < 1:
            raise ValueError("continuation_steps must be >= 1")
        if not (0.0 < self.damping_min <= 1.0):
            raise ValueError("damping_min must lie in (0, 1]")


@dataclass
class SolveReport:
    body: SupportFunction
    residual_sup: float
    iterations: int
    min_h: float
    min_curvature: float
    converged: bool
    stage_iterations: list = field(default_factory=list)
    trace: list = field(default_factory=list)


@dataclass(frozen=True)
class LinearizedSpectrum:
    p: float
    shifted_eigenvalues: np.ndarray
    invertible: bool


def _residual_values(h: np.ndarray, hp: np.ndarray, hpp: np.ndarray,
                     f: np.ndarray, p: float, q: float, floor: float) -> np.ndarray:
    curv = hpp + h
    if p == 1.0:
        lp = np.ones_like(h)
    elif p < 1.0:
        lp = np.where(h > floor, h, 0.0) ** (1.0 - p)
    else:
        if float(h.min()) <= floor:
            raise SingularDensityError(
                f"residual singular: min h = {float(h.min()):.3e} <= floor with p = {p}"
            )
        lp = h ** (1.0 - p)
    if q == 2.0:
        return lp * curv - f
    w = h * h + hp * hp
    return lp * w ** (0.5 * (q - 2.0)) * curv - f


def residual(body: SupportFunction, params: ProblemParams) -> PeriodicSamples:
    """Equation residual F(h) on the grid of the data."""
    if body.grid.n_points != params.f.grid.n_points:
        raise ValueError("body and data must share a grid")
    cfg = SolverConfig()
    vals = _residual_values(body.values, body.derivative.values,
                            diff(body.h, 2).values, params.f.values,
                            params.p, params.q, cfg.positivity_floor)
    return PeriodicSamples(vals, body.grid)


def _jacobian_matrix(h: np.ndarray, hp: np.ndarray, hpp: np.ndarray,
                     p: float, q: float, floor: float, grid: Grid) -> np.ndarray:
    n = h.shape[0]
    d1 = diff_matrix(grid, 1)
    d2 = diff_matrix(grid, 2)
    curv = hpp + h
    w = h * h + hp * hp

    # lp_prime is the coefficient (1-p) h^(-p) of the zeroth-order term.
    if p == 1.0:
        lp = np.ones_like(h)
        lp_prime = np.zeros_like(h)
    elif p < 1.0:
        active = h > floor
        lp = np.where(active, h, 0.0) ** (1.0 - p)
        lp_prime = np.where(active, (1.0 - p) * np.where(active, h, 1.0) ** (-p), 0.0)
    else:
        if float(h.min()) <= floor:
            raise SingularDensityError(
                f"jacobian singular: min h = {float(h.min()):.3e} <= floor with p = {p}"
            )
        lp = h ** (1.0 - p)
        lp_prime = (1.0 - p) * h ** (-p)

    if q == 2.0:
        wfac = np.ones_like(h)
        diag = lp_prime * curv
        jac = wfac * lp
        mat = jac[:, None] * d2
        idx = np.arange(n)
        mat[idx, idx] += diag + jac
        return mat

    wfac = w ** (0.5 * (q - 2.0))
    wfac4 = w ** (0.5 * (q - 4.0))
    t2 = lp * (q - 2.0) * wfac4 * curv
    t3 = lp * wfac
    mat = t3[:, None] * d2 + (t2 * hp)[:, None] * d1
    idx = np.arange(n)
    mat[idx, idx] += lp_prime * wfac * curv + t2 * h + t3
    return mat


def jacobian(body: SupportFunction, params: ProblemParams) -> np.ndarray:
    """Dense Frechet derivative DF(h) on grid values."""
    cfg = SolverConfig()
    return _jacobian_matrix(body.values, body.derivative.values,
                            diff(body.h, 2).values, params.p, params.q,
                            cfg.positivity_floor, body.grid)


def linearized_spectrum(p: float, k_max: int = 16) -> LinearizedSpectrum:
    """Spectrum of the linearization at the unit disk for q = 2.

    Mode k of v maps to (2 - p - k^2) v; the shifted eigenvalues k^2 - (2 - p)
    vanish exactly when 2 - p hits a squared integer, which is the only
    obstruction to invertibility.
    """
    if k_max < 2:
        raise ValueError("k_max must be >= 2")
    k = np.arange(k_max + 1)
    shifted = k.astype(float) ** 2 - (2.0 - p)
    return LinearizedSpectrum(p, shifted, bool(np.min(np.abs(shifted)) > 1e-12))


def _curvature_of(vals: np.ndarray, grid: Grid) -> np.ndarray:
    return diff(PeriodicSamples(vals, grid), 2).values + vals


def _newton_stage(h: np.ndarray, f: np.ndarray, p: float, q: float,
                  cfg: SolverConfig, grid: Grid, trace: list, t_label: float):
    """Damped Newton on fixed data; returns (h, res_sup, iterations, converged)."""
    gecon = get_lapack_funcs("gecon", (np.empty((2, 2)),))
    floor = cfg.positivity_floor

    def residual_of(vals):
        s = PeriodicSamples(vals, grid)
        return _residual_values(vals, diff(s, 1).values, diff(s, 2).values,
                                f, p, q, floor)

    r = residual_of(h)
    res_sup = float(np.max(np.abs(r)))
    res_l2 = float(np.linalg.norm(r))
    it = 0
    while res_sup > cfg.newton_tol and it < cfg.max_newton:
        s = PeriodicSamples(h, grid)
        jac = _jacobian_matrix(h, diff(s, 1).values, diff(s, 2).values,
                               p, q, floor, grid)
        anorm = float(np.linalg.norm(jac, 1))
        lu, piv = lu_factor(jac)
        rcond, info = gecon(lu, anorm, norm="1")
        if info != 0 or rcond < RCOND_LIMIT:
            raise SingularJacobianError(
                f"linearization condition estimate {1.0 / max(rcond, 1e-300):.2e}"
            )
        step = lu_solve((lu, piv), -r)

        damping = 1.0
        while True:
            cand = h + damping * step
            ok = float(cand.min()) >= 0.0
            if ok and p >= 1.0:
                ok = float(cand.min()) > floor
            if ok:
                tol_c = DEFAULT_TOL_CONVEX_SCALE * max(float(cand.max()), 1e-300)
                ok = float(_curvature_of(cand, grid).min()) >= -tol_c
            if ok:
                r_cand = residual_of(cand)
                cand_l2 = float(np.linalg.norm(r_cand))
                ok = np.isfinite(cand_l2) and cand_l2 < res_l2
            if ok:
                break
            damping *= 0.5
            if damping < cfg.damping_min:
                raise StagnationError(
                    f"damping underflow at stage t = {t_label:.3f},"
                    f" residual {res_sup:.3e}",
                    trace=trace,
                )
        h = cand
        r = r_cand
        res_l2 = cand_l2
        res_sup = float(np.max(np.abs(r)))
        it += 1
        trace.append((t_label, it, res_sup, damping))
    return h, res_sup, it, res_sup <= cfg.newton_tol


def _initial_values(params: ProblemParams, initial, grid: Grid) -> np.ndarray:
    if initial is not None:
        if initial.grid.n_points != grid.n_points:
            raise ValueError("initial body must live on the data grid")
        return initial.values.copy()
    mean_f = float(np.mean(params.f.values))
    return np.full(grid.n_points, mean_f ** (1.0 / (params.q - params.p)))


def _finish(h, grid, res_sup, stage_iterations, converged, trace) -> SolveReport:
    curv = _curvature_of(h, grid)
    body = SupportFunction(PeriodicSamples(h, grid), validate=False)
    return SolveReport(
        body=body,
        residual_sup=res_sup,
        iterations=int(sum(stage_iterations)),
        min_h=float(h.min()),
        min_curvature=float(curv.min()),
        converged=converged,
        stage_iterations=list(stage_iterations),
        trace=trace,
    )


def newton_solve(params: ProblemParams, initial: SupportFunction | None = None,
                 config: SolverConfig | None = None) -> SolveReport:
    """Single-stage damped Newton directly on the target data (no continuation)."""
    cfg = config or SolverConfig()
    if params.q == params.p:
        raise ParameterRangeError("q = p is outside the solvable family")
    grid = params.f.grid
    h = _initial_values(params, initial, grid)
    trace: list = []
    h, res_sup, its, conv = _newton_stage(h, params.f.values, params.p, params.q,
                                          cfg, grid, trace, 1.0)
    return _finish(h, grid, res_sup, [its], conv, trace)


def solve(params: ProblemParams, initial: SupportFunction | None = None,
          config: SolverConfig | None = None) -> SolveReport:
    """Continuation from constant data 1 to f, damped Newton per stage."""
    cfg = config or SolverConfig()
    if params.q == params.p:
        raise ParameterRangeError("q = p is outside the solvable family")
    grid = params.f.grid
    if cfg.grid is not None and cfg.grid.n_points != grid.n_points:
        raise ValueError("config grid disagrees with the data grid")

    h = _initial_values(params, initial, grid)
    f = params.f.values
    trace: list = []
    iterations: list = []
    res_sup = np.inf
    converged = False
    for t in np.linspace(0.0, 1.0, cfg.continuation_steps + 1):
        f_t = (1.0 - t) + t * f
        h, res_sup, its, converged = _newton_stage(h, f_t, params.p, params.q,
                                                   cfg, grid, trace, float(t))
        iterations.append(its)
    return _finish(h, grid, res_sup, iterations, converged, trace)


def report_to_dict(report: SolveReport, include_trace: bool = False) -> dict:
    out = {
        "converged": report.converged,
        "residual_sup": report.residual_sup,
        "iterations": report.iterations,
        "stage_iterations": list(report.stage_iterations),
        "min_h": report.min_h,
        "min_curvature": report.min_curvature,
        "n_points": report.body.grid.n_points,
        "h": report.body.values.tolist(),
    }
    if include_trace:
        out["trace"] = [list(entry) for entry in report.trace]
    return out
