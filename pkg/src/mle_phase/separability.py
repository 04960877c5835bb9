"""Detect complete (or quasi-complete) separation of a labeled dataset.

A logistic MLE exists if and only if no nonzero (b0, b) satisfies
y_i (b0 + x_i'b) >= 0 for all i, so separation detection doubles as an
exact MLE-existence check.  The test solves the linear program

    maximize sum_i y_i (b0 + x_i'b)
    s.t.     y_i (b0 + x_i'b) >= 0 for all i,  -1 <= b0 <= 1,  -1 <= b <= 1

(the b0 terms are dropped when fitting without intercept).  Zero is always
feasible, so the data are declared separated exactly when the optimum is
positive; under continuous covariates the non-separated optimum is exactly
0 while the separated one grows linearly with n, so the decision threshold
``tol * n`` is uncritical (it is configurable for adversarial inputs).
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .probability import ModelParams
from .rng import RngSeed
from .simplex import solve_separability_lp

DEFAULT_DECISION_TOL = 1e-7
FEASIBILITY_TOL = 1e-9


@dataclass(frozen=True)
class DatasetMeta:
    """Generation parameters attached to simulated datasets."""

    params: Optional[ModelParams] = None
    seed: Optional[RngSeed] = None
    kappa: Optional[float] = None


@dataclass(frozen=True)
class Dataset:
    """An n x p covariate matrix with +-1 labels."""

    x: np.ndarray
    y: np.ndarray
    meta: Optional[DatasetMeta] = None

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.ndim != 2 or x.shape[0] < 1 or x.shape[1] < 1:
            raise ValueError(f"x must be a nonempty 2-D matrix, got shape {x.shape}")
        if y.shape != (x.shape[0],):
            raise ValueError(f"y must have shape ({x.shape[0]},), got {y.shape}")
        if not np.all(np.isfinite(x)):
            raise ValueError("non-finite covariate entries")
        if not np.all(np.abs(y) == 1.0):
            raise ValueError("labels must all be +1 or -1")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def p(self) -> int:
        return self.x.shape[1]


class SolverStatus(enum.Enum):
    OPTIMAL = "optimal"
    UNBOUNDED_TREATED_AS_SEPARATED = "unbounded-treated-as-separated"
    INFEASIBLE_IMPOSSIBLE = "infeasible-impossible"
    ITERATION_LIMIT = "iteration-limit"


@dataclass(frozen=True)
class SeparabilityVerdict:
    """Outcome of the separation LP for one dataset."""

    separated: bool
    lp_objective: float
    witness: Optional[tuple[float, np.ndarray]]  # (b0, b); b0 is 0.0 without intercept
    solver_status: SolverStatus
    fit_intercept: bool
    degenerate_labels: bool = False  # all y_i equal: trivially separated

    @property
    def mle_exists(self) -> bool:
        return not self.separated


def check_separation(
    data: Dataset,
    fit_intercept: bool = True,
    tol: float = DEFAULT_DECISION_TOL,
    max_iter: int | None = None,
) -> SeparabilityVerdict:
    """Solve the separation LP and report whether the data are separated.

    The verdict is ``separated`` iff the LP optimum exceeds ``tol * n``;
    the optimal hyperplane is returned as a witness in that case.  Datasets
    whose labels are all equal are (with an intercept) separated by the
    constant classifier b0 = sign(y) and short-circuit the LP.
    """
    if tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    n, p = data.n, data.p
    degenerate = bool(np.all(data.y == data.y[0]))
    if degenerate and fit_intercept:
        b0 = float(data.y[0])
        return SeparabilityVerdict(
            separated=True,
            lp_objective=float(n),
            witness=(b0, np.zeros(p)),
            solver_status=SolverStatus.OPTIMAL,
            fit_intercept=True,
            degenerate_labels=True,
        )
    if fit_intercept:
        a = data.y[:, None] * np.column_stack([np.ones(n), data.x])
    else:
        a = data.y[:, None] * data.x
    res = solve_separability_lp(a, max_iter=max_iter)
    status = SolverStatus.OPTIMAL if res.optimal else SolverStatus.ITERATION_LIMIT
    separated = res.objective > tol * n
    witness = None
    if separated and res.optimal:
        if fit_intercept:
            witness = (float(res.v[0]), res.v[1:].copy())
        else:
            witness = (0.0, res.v.copy())
    return SeparabilityVerdict(
        separated=separated,
        lp_objective=res.objective,
        witness=witness,
        solver_status=status,
        fit_intercept=fit_intercept,
        degenerate_labels=degenerate,
    )


def check_single_variable_separation(v, y) -> bool:
    """Can intercept plus one variable already separate the labels?

    True iff some (b0, b1) != 0 has y_i (b0 + b1 v_i) >= 0 for all i, which
    reduces to the sorted ranges of v on the two classes being disjoint or
    merely touching (touching is quasi-separation).  Order statistics only,
    no LP.
    """
    v = np.asarray(v, dtype=float)
    y = np.asarray(y, dtype=float)
    if v.ndim != 1 or v.shape != y.shape:
        raise ValueError("v and y must be 1-D arrays of equal length")
    if not np.all(np.isfinite(v)):
        raise ValueError("non-finite entries in v")
    if not np.all(np.abs(y) == 1.0):
        raise ValueError("labels must all be +1 or -1")
    pos = v[y > 0]
    neg = v[y < 0]
    if pos.size == 0 or neg.size == 0:
        return True
    return neg.max() <= pos.min() or pos.max() <= neg.min()


def load_dataset_csv(path) -> Dataset:
    """Read a dataset from CSV with header ``y,x1,...,xp`` (any column order).

    Labels may be {-1, +1} or {0, 1}; a 0/1 column is mapped to -1/+1.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if "y" not in header:
            raise ValueError(f"{path}: header must contain a 'y' column")
        y_col = header.index("y")
        x_names = [h for h in header if h != "y"]
        expected = [f"x{i}" for i in range(1, len(x_names) + 1)]
        if sorted(x_names) != sorted(expected):
            raise ValueError(
                f"{path}: covariate columns must be x1..x{len(x_names)}, got {x_names}"
            )
        x_cols = [header.index(name) for name in expected]
        rows = []
        for lineno, rec in enumerate(reader, start=2):
            if not rec or all(not cell.strip() for cell in rec):
                continue
            if len(rec) != len(header):
                raise ValueError(f"{path}:{lineno}: expected {len(header)} fields")
            try:
                rows.append([float(rec[y_col])] + [float(rec[j]) for j in x_cols])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric field") from None
    if not rows:
        raise ValueError(f"{path}: no data rows")
    arr = np.asarray(rows, dtype=float)
    y, x = arr[:, 0], arr[:, 1:]
    labels = set(np.unique(y))
    if labels <= {0.0, 1.0}:
        y = 2.0 * y - 1.0
    elif not labels <= {-1.0, 1.0}:
        raise ValueError(f"{path}: labels must be in {{-1,1}} or {{0,1}}, got {sorted(labels)}")
    return Dataset(x=x, y=y)
