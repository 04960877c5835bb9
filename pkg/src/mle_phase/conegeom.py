"""Conic-geometry validators for the phase-transition boundary.

Three independent routes to the same geometry:

* ``estimate_qn`` draws n samples of (Y, V) plus Gaussian noise Z and
  minimizes the empirical average of (t0*Y_i + t1*V_i - Z_i)_+^2 exactly.
  The minimum concentrates at the theoretical boundary value at rate
  n^(-1/2), so it cross-validates the deterministic solver.

* ``statistical_dimension`` Monte-Carlo-estimates delta(C(W)) for the cone
  C(W) = {w + u : w in W, u >= 0} via n - E min_{w in W} ||(w - Z)_+||^2.
  With empty W this is the nonnegative orthant, delta = n/2, the geometry
  behind the classical kappa = 1/2 threshold for symmetric labels.

* ``kinematic_predict`` plugs the estimated statistical dimension into the
  approximate kinematic formula: a uniformly random (p-1)-dimensional
  subspace hits C(W) nontrivially with probability near one when
  p - 1 + delta(C(W)) exceeds n by a_eps*sqrt(n), and near zero when it
  falls short by the same margin, with a_eps = sqrt(8*log(4/eps)).

``tiny_orthant_oracle`` is a brute-force check (scipy's LP, nothing shared
with the simplex engine) that the span of the label-signed design meets
the nonnegative orthant nontrivially, which for p < n - 1 is equivalent to
separation of the dataset.  It pins down the separability module on tiny
instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .probability import ModelParams, sample_yv
from .rng import RngSeed
from .separability import Dataset

DIVERGENCE_NORM = 1e6
_LEVENBERG = 1e-8


@dataclass(frozen=True)
class PositivePartMin:
    """Result of minimizing ||(M c - z)_+||^2 over coefficients c."""

    c: np.ndarray
    value: float
    iterations: int
    converged: bool
    diverged: bool
    used_fallback: bool


def minimize_positive_part(
    m: np.ndarray,
    z: np.ndarray,
    tol: float = 1e-8,
    max_iter: int = 200,
) -> PositivePartMin:
    """Exact minimization of the piecewise-quadratic f(c) = ||(M c - z)_+||^2.

    f is convex and continuously differentiable with gradient 2 M'(Mc-z)_+
    and an almost-everywhere Hessian 2 M'D M, D = diag(Mc - z >= 0);
    Levenberg damping covers the semidefinite case.  A damped Newton step
    with Armijo backtracking converges in a handful of iterations; if the
    step ever misbehaves the iteration falls back to gradient descent.
    Escaping minima (possible only when a direction keeps all slacks
    nonpositive) are flagged as diverged once the iterate norm passes 1e6.
    """
    m = np.asarray(m, dtype=float)
    z = np.asarray(z, dtype=float)
    n, k = m.shape
    c = np.zeros(k)
    if k == 0:
        val = float(np.sum(np.maximum(-z, 0.0) ** 2))
        return PositivePartMin(c, val, 0, True, False, False)

    used_fallback = False

    def value(cv):
        return float(np.sum(np.maximum(m @ cv - z, 0.0) ** 2))

    for it in range(1, max_iter + 1):
        r = m @ c - z
        rp = np.maximum(r, 0.0)
        grad = 2.0 * (m.T @ rp)
        gnorm = float(np.linalg.norm(grad))
        if gnorm <= tol:
            return PositivePartMin(c, float(rp @ rp), it - 1, True, False, used_fallback)
        if float(np.linalg.norm(c)) > DIVERGENCE_NORM:
            return PositivePartMin(c, float(rp @ rp), it - 1, False, True, used_fallback)
        active = m[r >= 0.0]
        hess = 2.0 * (active.T @ active)
        lam = _LEVENBERG * max(np.trace(hess), 1.0)
        step = None
        try:
            step = np.linalg.solve(hess + lam * np.eye(k), -grad)
        except np.linalg.LinAlgError:
            pass
        if step is None or not np.all(np.isfinite(step)) or float(grad @ step) >= 0.0:
            step = -grad
            used_fallback = True
        f0 = float(rp @ rp)
        slope = float(grad @ step)
        alpha = 1.0
        for _ in range(60):
            if value(c + alpha * step) <= f0 + 1e-4 * alpha * slope:
                break
            alpha *= 0.5
        else:
            # no decrease along the Newton direction: try plain gradient
            step = -grad
            used_fallback = True
            slope = -gnorm * gnorm
            alpha = 1.0 / (1.0 + float(np.abs(hess).sum()))
            while value(c + alpha * step) > f0 + 1e-4 * alpha * slope and alpha > 1e-20:
                alpha *= 0.5
        c = c + alpha * step

    r = m @ c - z
    rp = np.maximum(r, 0.0)
    return PositivePartMin(c, float(rp @ rp), max_iter, False, False, used_fallback)


@dataclass(frozen=True)
class QnEstimate:
    """Monte Carlo trials of the empirical boundary statistic."""

    params: ModelParams
    n: int
    trials: int
    values: tuple[float, ...]
    mean: float
    stderr: float
    t_stars: tuple[tuple[float, float], ...]
    diverged_count: int = 0
    fallback_count: int = 0


def estimate_qn(
    params: ModelParams,
    n: int,
    trials: int,
    rng: RngSeed,
    tol: float = 1e-8,
) -> QnEstimate:
    """Sample the statistic Q_n = min_t (1/n) ||(t0 Y + t1 V - Z)_+||^2.

    Each trial draws fresh (Y, V, Z) from its own substream and minimizes
    exactly.  Trials whose minimizer escapes to infinity (data separable
    in the (Y, V) plane, exponentially rare) report value 0 and are
    counted in ``diverged_count``.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    values, t_stars = [], []
    diverged = fallbacks = 0
    for trial in range(trials):
        gen = rng.substream(trial).generator()
        y, v = sample_yv(params, gen, n)
        z = gen.standard_normal(n)
        res = minimize_positive_part(np.column_stack([y, v]), z, tol=tol)
        if res.diverged:
            diverged += 1
            values.append(0.0)
        else:
            values.append(res.value / n)
        if res.used_fallback:
            fallbacks += 1
        t_stars.append((float(res.c[0]), float(res.c[1])))
    arr = np.asarray(values)
    stderr = float(arr.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return QnEstimate(
        params=params,
        n=n,
        trials=trials,
        values=tuple(values),
        mean=float(arr.mean()),
        stderr=stderr,
        t_stars=tuple(t_stars),
        diverged_count=diverged,
        fallback_count=fallbacks,
    )


@dataclass(frozen=True)
class StatDimEstimate:
    n: int
    dim_w: int
    trials: int
    delta_hat: float
    stderr: float
    diverged_count: int = 0


def statistical_dimension(
    basis,
    trials: int,
    rng: RngSeed,
    tol: float = 1e-8,
) -> StatDimEstimate:
    """Monte Carlo estimate of delta(C(W)) = n - E min_{w in W} ||(w - Z)_+||^2.

    ``basis`` is an (n, k) matrix whose columns span W, or a list of
    length-n vectors, with k <= 3; pass an (n, 0) array for W = {0}, the
    nonnegative orthant case.  Rank-deficient bases are rejected.
    """
    if isinstance(basis, np.ndarray):
        w = np.asarray(basis, dtype=float)
        if w.ndim == 1:
            w = w[:, None]
        if w.ndim != 2:
            raise ValueError(f"basis must be 2-D, got shape {w.shape}")
    else:
        vectors = [np.asarray(v, dtype=float) for v in basis]
        if not vectors:
            raise ValueError("empty basis list: pass an (n, 0) array so n is known")
        if any(v.ndim != 1 or v.shape != vectors[0].shape for v in vectors):
            raise ValueError("basis vectors must be 1-D and of equal length")
        w = np.column_stack(vectors)
    n, k = w.shape
    if n < 1:
        raise ValueError("basis vectors must have positive length")
    if k > 3:
        raise ValueError(f"only dim(W) <= 3 is supported, got {k}")
    if k and np.linalg.matrix_rank(w) < k:
        raise ValueError("basis is rank deficient")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    mins = np.empty(trials)
    diverged = 0
    for trial in range(trials):
        z = rng.substream(trial).generator().standard_normal(n)
        res = minimize_positive_part(w, z, tol=tol)
        mins[trial] = res.value
        diverged += int(res.diverged)
    delta = n - float(mins.mean())
    stderr = float(mins.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return StatDimEstimate(
        n=n, dim_w=k, trials=trials, delta_hat=delta, stderr=stderr,
        diverged_count=diverged,
    )


PREDICT_NO_MLE = "no-MLE-whp"
PREDICT_MLE = "MLE-whp"
PREDICT_INDETERMINATE = "indeterminate-band"


@dataclass(frozen=True)
class KinematicVerdict:
    """Existence prediction from the approximate kinematic formula."""

    p: int
    n: int
    delta_hat: float
    margin: float        # p - 1 + delta_hat - n
    predicted: str
    epsilon: float
    a_epsilon: float
    delta_stderr: float = 0.0


def kinematic_predict(
    params: ModelParams,
    n: int,
    p: int,
    epsilon: float = 0.05,
    trials: int = 200,
    rng: RngSeed = RngSeed(0),
) -> KinematicVerdict:
    """Classify (n, p) as MLE-whp / no-MLE-whp / indeterminate.

    Draws one (Y, V) realization from the model, estimates the statistical
    dimension of C(span(Y, V)), and compares the margin
    p - 1 + delta_hat - n against the band +-a_eps*sqrt(n).
    """
    if not 2 <= p < n - 1:
        raise ValueError(f"need 2 <= p < n - 1, got p={p}, n={n}")
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    y, v = sample_yv(params, rng.substream(0xD0A7), n)
    est = statistical_dimension(np.column_stack([y, v]), trials, rng)
    a_eps = math.sqrt(8.0 * math.log(4.0 / epsilon))
    margin = p - 1 + est.delta_hat - n
    band = a_eps * math.sqrt(n)
    if margin > band:
        predicted = PREDICT_NO_MLE
    elif margin < -band:
        predicted = PREDICT_MLE
    else:
        predicted = PREDICT_INDETERMINATE
    return KinematicVerdict(
        p=p, n=n, delta_hat=est.delta_hat, margin=margin, predicted=predicted,
        epsilon=epsilon, a_epsilon=a_eps, delta_stderr=est.stderr,
    )


def tiny_orthant_oracle(data: Dataset, tol: float = 1e-9) -> bool:
    """Does span(y, y*x_1, ..., y*x_p) meet the nonnegative orthant nontrivially?

    Brute-force oracle for tiny problems (n <= 10, p <= 3): maximize 1'u
    over u = M a, 0 <= u <= 1 with scipy's LP and report optimum > 0.
    Deliberately independent of the simplex engine it cross-checks.
    """
    if data.n > 10 or data.p > 3:
        raise ValueError(f"oracle limited to n <= 10, p <= 3, got n={data.n}, p={data.p}")
    m = data.y[:, None] * np.column_stack([np.ones(data.n), data.x])
    # variables a free; constraints 0 <= M a <= 1
    res = linprog(
        -m.sum(axis=0),
        A_ub=np.vstack([m, -m]),
        b_ub=np.concatenate([np.ones(data.n), np.zeros(data.n)]),
        bounds=[(None, None)] * (data.p + 1),
        method="highs",
    )
    if res.status != 0:
        raise RuntimeError(f"oracle LP failed with status {res.status}: {res.message}")
    return -res.fun > tol
