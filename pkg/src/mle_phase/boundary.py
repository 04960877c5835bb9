"""The phase-transition boundary h(beta0, gamma0) for MLE existence.

The boundary is the value of the two-dimensional strictly convex program

    h(beta0, gamma0) = min over (t0, t1) of  E (t0*Y + t1*V - Z)_+^2

with (Y, V) the signed logistic pair and Z an independent standard normal.
Conditioning on (Y, V) collapses the inner expectation over Z to the closed
form ``psi``, so the objective is a one-dimensional Gaussian quadrature of
psi(t0*Y + t1*V) with analytic gradient and Hessian:

    grad  = E [ (Y, V) * psi'(t0*Y + t1*V) ]
    hess  = E [ (Y, V)(Y, V)' * 2*Phi(t0*Y + t1*V) ]

The Hessian is uniformly positive definite for fixed finite parameters, so a
damped Newton iteration started at the origin converges globally; both
derivative formulas are checked against central finite differences in the
test suite rather than trusted.

In the degenerate directions the program reduces to one dimension: when
gamma0 = 0 the minimum is attained with t1 = 0 (minimize over t*Y only), and
when beta0 = 0 with t0 = 0 (over t*V only).  ``solve_boundary_1d`` solves
those reductions directly and doubles as a cross-check of the 2-D solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .probability import (
    ModelParams,
    QuadratureRule,
    default_rule_for,
    normal_cdf,
    psi,
    psi_prime,
    yv_branch_weights,
)

ARMIJO_C = 1e-4
MAX_BACKTRACKS = 60


@dataclass(frozen=True)
class ObjectiveEval:
    """Value, gradient and Hessian of the boundary objective at one point."""

    t: tuple[float, float]
    value: float
    gradient: np.ndarray
    hessian: np.ndarray


@dataclass(frozen=True)
class BoundarySolution:
    """Minimizer and minimum of the boundary program, with solver diagnostics."""

    params: ModelParams
    t_star: tuple[float, float]
    h: float
    iterations: int
    grad_norm: float
    converged: bool
    grad_norm_history: tuple[float, ...] = field(default=(), repr=False)


class _Objective:
    """Quadrature-backed objective for fixed (params, rule).

    Caches the branch weights; s_plus = t0 + t1*x is the argument on the
    Y=+1 branch and the Y=-1 branch evaluates psi at -s_plus.
    """

    def __init__(self, params: ModelParams, rule: QuadratureRule):
        self.x, self.wp, self.wm = yv_branch_weights(params, rule)

    def value(self, t0: float, t1: float) -> float:
        s = t0 + t1 * self.x
        return float(np.dot(self.wp, psi(s)) + np.dot(self.wm, psi(-s)))

    def value_grad_hess(self, t0: float, t1: float):
        x, wp, wm = self.x, self.wp, self.wm
        s = t0 + t1 * x
        pp, pm = psi(s), psi(-s)
        dp, dm = psi_prime(s), psi_prime(-s)
        value = float(np.dot(wp, pp) + np.dot(wm, pm))
        # Y=-1 branch carries (y, v) = (-1, -x)
        a = wp * dp - wm * dm
        grad = np.array([a.sum(), np.dot(a, x)])
        c = 2.0 * (wp * normal_cdf(s) + wm * normal_cdf(-s))
        h00 = c.sum()
        h01 = float(np.dot(c, x))
        h11 = float(np.dot(c, x * x))
        hess = np.array([[h00, h01], [h01, h11]])
        return value, grad, hess


def objective(params: ModelParams, t, rule: QuadratureRule | None = None) -> ObjectiveEval:
    """Evaluate E psi(t0*Y + t1*V) with its analytic gradient and Hessian."""
    t0, t1 = float(t[0]), float(t[1])
    if not (math.isfinite(t0) and math.isfinite(t1)):
        raise ValueError(f"t must be finite, got {t!r}")
    rule = rule or default_rule_for(params)
    value, grad, hess = _Objective(params, rule).value_grad_hess(t0, t1)
    return ObjectiveEval(t=(t0, t1), value=value, gradient=grad, hessian=hess)


def solve_boundary(
    params: ModelParams,
    rule: QuadratureRule | None = None,
    tol: float = 1e-9,
    max_iter: int = 200,
) -> BoundarySolution:
    """Minimize the boundary objective by damped Newton from the origin.

    Converged means the gradient norm fell below ``tol``; by strong convexity
    the error in h is then of order tol^2.  On non-convergence the solution
    carries the last iterate with ``converged=False``.
    """
    if tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    rule = rule or default_rule_for(params)
    obj = _Objective(params, rule)

    t = np.zeros(2)
    history = []
    for it in range(max_iter):
        value, grad, hess = obj.value_grad_hess(t[0], t[1])
        gnorm = float(np.linalg.norm(grad))
        history.append(gnorm)
        if gnorm <= tol:
            return BoundarySolution(
                params=params,
                t_star=(float(t[0]), float(t[1])),
                h=value,
                iterations=it,
                grad_norm=gnorm,
                converged=True,
                grad_norm_history=tuple(history),
            )
        step = _descent_step(grad, hess)
        slope = float(np.dot(grad, step))
        alpha = 1.0
        for _ in range(MAX_BACKTRACKS):
            cand = t + alpha * step
            if obj.value(cand[0], cand[1]) <= value + ARMIJO_C * alpha * slope:
                break
            alpha *= 0.5
        t = t + alpha * step

    value, grad, _ = obj.value_grad_hess(t[0], t[1])
    return BoundarySolution(
        params=params,
        t_star=(float(t[0]), float(t[1])),
        h=value,
        iterations=max_iter,
        grad_norm=float(np.linalg.norm(grad)),
        converged=False,
        grad_norm_history=tuple(history),
    )


def _descent_step(grad: np.ndarray, hess: np.ndarray) -> np.ndarray:
    """Newton step, falling back to steepest descent if the solve misbehaves."""
    try:
        step = np.linalg.solve(hess, -grad)
    except np.linalg.LinAlgError:
        return -grad
    if not np.all(np.isfinite(step)) or np.dot(grad, step) >= 0:
        return -grad
    return step


def solve_boundary_1d(
    params: ModelParams,
    which: str,
    rule: QuadratureRule | None = None,
    tol: float = 1e-9,
    max_iter: int = 200,
) -> BoundarySolution:
    """Solve the one-dimensional reduction min_t E (t*U - Z)_+^2.

    ``which="y"`` takes U = Y and requires gamma0 = 0; ``which="v"`` takes
    U = V and requires beta0 = 0.  The reported t_star embeds t back into
    the (t0, t1) plane.
    """
    if which not in ("y", "v"):
        raise ValueError(f'which must be "y" or "v", got {which!r}')
    if which == "y" and params.gamma0 != 0:
        raise ValueError("Y-only reduction requires gamma0 = 0")
    if which == "v" and params.beta0 != 0:
        raise ValueError("V-only reduction requires beta0 = 0")
    if tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    rule = rule or default_rule_for(params)
    x, wp, wm = yv_branch_weights(params, rule)
    # multiplier of t on the Y=+1 branch; the Y=-1 branch negates it
    u = np.ones_like(x) if which == "y" else x

    def value(t):
        return float(np.dot(wp, psi(t * u)) + np.dot(wm, psi(-t * u)))

    t = 0.0
    history = []
    for it in range(max_iter):
        s = t * u
        g = float(np.dot(wp * u, psi_prime(s)) - np.dot(wm * u, psi_prime(-s)))
        history.append(abs(g))
        if abs(g) <= tol:
            return _solution_1d(params, which, t, value(t), it, g, True, history)
        h = float(np.dot(2.0 * u * u, wp * normal_cdf(s) + wm * normal_cdf(-s)))
        step = -g / h if h > 0 else -g
        alpha, v0 = 1.0, value(t)
        for _ in range(MAX_BACKTRACKS):
            if value(t + alpha * step) <= v0 + ARMIJO_C * alpha * g * step:
                break
            alpha *= 0.5
        t += alpha * step

    g = float(np.dot(wp * u, psi_prime(t * u)) - np.dot(wm * u, psi_prime(-t * u)))
    return _solution_1d(params, which, t, value(t), max_iter, g, False, history)


def _solution_1d(params, which, t, h, iterations, g, converged, history):
    t_star = (t, 0.0) if which == "y" else (0.0, t)
    return BoundarySolution(
        params=params,
        t_star=t_star,
        h=h,
        iterations=iterations,
        grad_norm=abs(g),
        converged=converged,
        grad_norm_history=tuple(history),
    )


@dataclass(frozen=True)
class CurvePoint:
    """One point of a boundary curve: gamma and h plus the solve behind them."""

    gamma: float
    h: float
    solution: BoundarySolution


def boundary_curve(
    rho: float,
    gammas,
    rule: QuadratureRule | None = None,
    tol: float = 1e-9,
) -> list[CurvePoint]:
    """Evaluate gamma -> h(rho*gamma, sqrt(1-rho^2)*gamma) along a gamma grid.

    ``rho`` in [0, 1] splits total signal strength between intercept and
    slope.  h is strictly decreasing in gamma.  Failed solves are returned
    with ``converged=False`` rather than raised, so callers can flag rows.
    """
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must be in [0, 1], got {rho}")
    gammas = np.asarray(gammas, dtype=float)
    if gammas.size and (not np.all(np.isfinite(gammas)) or gammas.min() < 0):
        raise ValueError("gamma grid must be finite and nonnegative")
    s = math.sqrt(max(0.0, 1.0 - rho * rho))
    points = []
    for g in gammas:
        sol = solve_boundary(ModelParams(rho * g, s * g), rule=rule, tol=tol)
        points.append(CurvePoint(gamma=float(g), h=sol.h, solution=sol))
    return points
