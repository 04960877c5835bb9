"""Dense simplex engine for the separability linear program.

The program to solve is

    maximize    sum_i m_i        with margins m = A v
    subject to  m >= 0,  -1 <= v <= 1   componentwise,

where row i of A is y_i * (1, x_i') (or y_i * x_i' without intercept) and
v collects the hyperplane coefficients.  v = 0 is always feasible, the box
makes the optimum finite, and the data admit a (quasi-)separating
hyperplane exactly when the optimum is positive.

Rather than running a bounded-variable simplex on the n-row primal, we
solve the standard-form dual, whose basis has only d = p + 1 rows:

    minimize    1'(q+ + q-)
    subject to  -A'u + q+ - q- = A'1,   u, q+, q- >= 0.

Eliminating q gives min_{u >= 0} ||A'(1 + u)||_1: the optimum is 0 exactly
when some reweighting 1 + u of the observations balances the signed design
to zero, the classical certificate that no separating hyperplane exists.
The dual is always feasible (q alone solves the equalities) and bounded,
so phase 1 is free, and the simplex multipliers pi = B^-T d_B at
optimality are exactly the optimal primal v: the stopping conditions read
A pi >= 0 and |pi_j| <= 1, i.e. primal feasibility, while c'pi equals the
dual objective.  Dantzig pricing with a Bland's-rule fallback on stalled
(degenerate) pivots guarantees termination; the basis inverse is kept by
rank-1 updates and refactorized periodically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg.blas import dger
from threadpoolctl import threadpool_limits

# pivot selection switches to Bland's rule after this many stalled steps
_STALL_LIMIT = 25
_REFACTOR_EVERY = 200


class SimplexBugError(RuntimeError):
    """An impossible state (dual unbounded / singular basis): a solver bug."""


@dataclass
class LpResult:
    v: np.ndarray            # optimal primal variables (hyperplane coefficients)
    objective: float         # optimal value of the primal maximization
    iterations: int
    optimal: bool            # False only when the iteration limit was hit
    bland_pivots: int


def solve_separability_lp(a: np.ndarray, max_iter: int | None = None) -> LpResult:
    """Maximize 1'Av over A v >= 0, |v| <= 1, via the standard-form dual.

    ``a`` is the n x d signed design matrix.  Returns the optimal v and
    objective; ``optimal=False`` flags an iteration-limit stop, in which
    case ``objective`` is only an upper bound on the true optimum.
    """
    a = np.ascontiguousarray(a, dtype=float)
    n, d = a.shape
    if n < 1 or d < 1:
        raise ValueError(f"need a nonempty matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("non-finite entries in LP data")
    # the BLAS calls here are far below multithreading break-even, and
    # single-threaded reductions keep the pivot sequence deterministic
    with threadpool_limits(limits=1):
        return _simplex(a, max_iter)


def _simplex(a: np.ndarray, max_iter: int | None) -> LpResult:
    n, d = a.shape
    if max_iter is None:
        max_iter = max(10_000, 20 * d + n)

    c = a.sum(axis=0)  # right-hand side of the dual equalities, A'1

    # Column index space: [0, n) are u_i with column -a_i and cost 0;
    # [n, n+d) are q+_j (column +e_j), [n+d, n+2d) are q-_j (column -e_j),
    # both with cost 1.  The initial basis takes, per row j, whichever of
    # q+_j / q-_j makes the basic value |c_j| nonnegative.
    n_cols = n + 2 * d
    basis = np.where(c >= 0, np.arange(n, n + d), np.arange(n + d, n + 2 * d))
    binv = np.diag(np.where(c >= 0, 1.0, -1.0))
    zb = np.abs(c).astype(float)
    in_basis = np.zeros(n_cols, dtype=bool)
    in_basis[basis] = True

    scale = max(1.0, float(np.abs(c).max()))
    opt_tol = 1e-9 * scale
    piv_tol = 1e-10
    stall = 0
    bland_pivots = 0
    red = np.empty(n_cols)

    def refactor():
        nonlocal binv, zb, pi
        bmat = np.zeros((d, d))
        ku = np.nonzero(basis < n)[0]
        if ku.size:
            bmat[:, ku] = -a[basis[ku]].T
        kp = np.nonzero((basis >= n) & (basis < n + d))[0]
        bmat[basis[kp] - n, kp] = 1.0
        km = np.nonzero(basis >= n + d)[0]
        bmat[basis[km] - n - d, km] = -1.0
        try:
            binv = np.linalg.inv(bmat)
        except np.linalg.LinAlgError as exc:
            raise SimplexBugError("singular basis during refactorization") from exc
        zb = binv @ c
        if zb.min() < -1e-5 * scale:
            raise SimplexBugError("basis became infeasible (inverse drift)")
        np.maximum(zb, 0.0, out=zb)
        pi = binv.T @ (basis >= n).astype(float)

    pi = np.where(c >= 0, 1.0, -1.0)  # multipliers for the initial all-q basis
    it = 0
    verified = False
    solved = False
    while it < max_iter:
        it += 1
        np.dot(a, pi, out=red[:n])
        red[n:n + d] = 1.0 - pi
        red[n + d:] = 1.0 + pi
        neg = red < -opt_tol
        neg[in_basis] = False
        if not neg.any():
            # only trust optimality when priced from a fresh factorization
            if verified:
                solved = True
                break
            refactor()
            verified = True
            continue
        verified = False
        if stall >= _STALL_LIMIT:
            enter = int(np.nonzero(neg)[0][0])  # Bland: lowest eligible index
            bland_pivots += 1
        else:
            enter = int(np.argmin(np.where(neg, red, 0.0)))

        if enter < n:
            w = binv @ (-a[enter])
        elif enter < n + d:
            w = binv[:, enter - n].copy()
        else:
            w = -binv[:, enter - n - d]
        pos = np.nonzero(w > piv_tol)[0]
        if pos.size == 0:
            # dual unbounded would mean the (always feasible) primal is
            # infeasible, which cannot happen
            raise SimplexBugError("dual reported unbounded")
        ratios = zb[pos] / w[pos]
        theta = ratios.min()
        ties = pos[np.nonzero(ratios <= theta + piv_tol * (1.0 + abs(theta)))[0]]
        leave = int(ties[np.argmin(basis[ties])])  # Bland-compatible tie break
        stall = stall + 1 if theta <= piv_tol * scale else 0

        # pivot: replace basis[leave] by enter, rank-1-update the inverse
        wl = w[leave]
        zb -= theta * w
        zb[leave] = theta
        np.maximum(zb, 0.0, out=zb)
        in_basis[basis[leave]] = False
        in_basis[enter] = True
        basis[leave] = enter
        binv[leave, :] /= wl
        w[leave] = 0.0
        row = binv[leave].copy()
        # binv -= outer(w, row), in place through the transposed view
        dger(-1.0, row, w, a=binv.T, overwrite_a=1)
        # the entering column's reduced cost must vanish after the pivot
        pi += red[enter] * row

        if it % _REFACTOR_EVERY == 0:
            refactor()

    if not verified:
        refactor()
    # clip roundoff so the witness respects the box exactly
    v = np.clip(pi, -1.0, 1.0)
    return LpResult(
        v=v,
        objective=float(c @ v),
        iterations=it,
        optimal=solved,
        bland_pivots=bland_pivots,
    )
