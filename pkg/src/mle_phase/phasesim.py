"""Empirical phase diagrams: MLE-existence probability over a (kappa, gamma) grid.

Each cell simulates logistic datasets with n observations, p = round(kappa*n)
standard-Gaussian covariates and signal split beta0 = rho*gamma,
gamma0 = sqrt(1-rho^2)*gamma, then runs the separation LP on every
replicate; the MLE exists exactly when the data are not separated.  The
fraction of replicates with an MLE estimates the existence probability,
which transitions sharply from 1 to 0 as kappa crosses the theoretical
boundary.

Reproducibility contract: the RNG stream of a replicate is derived from
(base stream, gamma row index, kappa column index, replicate index), so
results are bit-identical across runs, across any worker count, and do not
change for existing cells when the grid is extended.
"""

from __future__ import annotations

import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .boundary import boundary_curve
from .probability import ModelParams, sigmoid
from .rng import RngSeed, as_generator
from .separability import Dataset, DatasetMeta, SolverStatus, check_separation

WORKERS_ENV_VAR = "MLE_PHASE_WORKERS"


def simulate_dataset(
    params: ModelParams,
    n: int,
    p: int,
    rng: "RngSeed | np.random.Generator",
    kappa: Optional[float] = None,
) -> Dataset:
    """Draw one logistic dataset: x_i ~ N(0, I_p), P(y_i=1) = sigmoid(b0 + x_i'beta).

    The coefficient vector has equal-magnitude entries scaled so that
    Var(x_i'beta) = gamma0^2; by rotational invariance the direction is
    immaterial.
    """
    if n < 1 or p < 1:
        raise ValueError(f"need n, p >= 1, got n={n}, p={p}")
    seed = rng if isinstance(rng, RngSeed) else None
    gen = as_generator(rng)
    x = gen.standard_normal((n, p))
    beta = np.full(p, params.gamma0 / math.sqrt(p))
    u = gen.random(n)
    y = np.where(u < sigmoid(params.beta0 + x @ beta), 1.0, -1.0)
    return Dataset(x=x, y=y, meta=DatasetMeta(params=params, seed=seed, kappa=kappa))


@dataclass(frozen=True)
class CellResult:
    """Aggregated replicates of one grid cell."""

    exists_count: int
    replicates: int
    failures: int = 0  # replicates whose LP hit the iteration limit

    @property
    def p_hat(self) -> float:
        return self.exists_count / self.replicates


def _replicate_exists(params, n, p, fit_intercept, rng: RngSeed, kappa=None):
    """One replicate: simulate, test separation; None marks a solver failure."""
    data = simulate_dataset(params, n, p, rng, kappa=kappa)
    verdict = check_separation(data, fit_intercept=fit_intercept)
    if verdict.solver_status is SolverStatus.ITERATION_LIMIT:
        return None
    return verdict.mle_exists


def estimate_cell(
    params: ModelParams,
    kappa: float,
    n: int,
    replicates: int,
    fit_intercept: bool,
    rng: RngSeed,
) -> CellResult:
    """Estimate the MLE-existence probability at one (params, kappa) cell.

    Replicate r uses ``rng.substream(r)``, so the result is deterministic
    given ``rng`` no matter how replicates are scheduled.  Solver failures
    are counted, never silently dropped.
    """
    p = _validated_p(kappa, n)
    if replicates < 1:
        raise ValueError(f"replicates must be >= 1, got {replicates}")
    exists = failures = 0
    for r in range(replicates):
        outcome = _replicate_exists(params, n, p, fit_intercept, rng.substream(r), kappa)
        if outcome is None:
            failures += 1
        elif outcome:
            exists += 1
    return CellResult(exists_count=exists, replicates=replicates, failures=failures)


def _validated_p(kappa: float, n: int) -> int:
    p = round(kappa * n)
    if p < 1:
        raise ValueError(f"kappa={kappa} gives p={p} < 1 at n={n}")
    if p >= n - 1:
        raise ValueError(f"kappa={kappa} gives p={p} >= n-1 at n={n}")
    return p


@dataclass(frozen=True)
class GridSpec:
    """Specification of a full phase-diagram run."""

    n: int
    kappa_grid: tuple[float, ...]
    gamma_grid: tuple[float, ...]
    rho: float
    replicates: int
    fit_intercept: bool = True
    base_seed: RngSeed = RngSeed(0)

    def __post_init__(self):
        object.__setattr__(self, "kappa_grid", tuple(float(k) for k in self.kappa_grid))
        object.__setattr__(self, "gamma_grid", tuple(float(g) for g in self.gamma_grid))
        if self.n < 3:
            raise ValueError(f"n must be >= 3, got {self.n}")
        if not self.kappa_grid or not self.gamma_grid:
            raise ValueError("kappa_grid and gamma_grid must be nonempty")
        if len(set(self.kappa_grid)) != len(self.kappa_grid):
            raise ValueError("kappa_grid has duplicate values")
        if len(set(self.gamma_grid)) != len(self.gamma_grid):
            raise ValueError("gamma_grid has duplicate values")
        for k in self.kappa_grid:
            _validated_p(k, self.n)
        for g in self.gamma_grid:
            if not math.isfinite(g) or g < 0:
                raise ValueError(f"gamma values must be finite and >= 0, got {g}")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must be in [0, 1], got {self.rho}")
        if self.replicates < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates}")

    def params_for(self, gamma: float) -> ModelParams:
        return ModelParams(self.rho * gamma, math.sqrt(max(0.0, 1.0 - self.rho**2)) * gamma)


@dataclass(frozen=True)
class PhaseDiagram:
    """Grid of estimated MLE-existence probabilities."""

    spec: GridSpec
    cells: dict[tuple[float, float], CellResult] = field(repr=False)

    def p_hat(self, kappa: float, gamma: float) -> float:
        return self.cells[(kappa, gamma)].p_hat


def _replicate_task(args):
    spec, i_gamma, j_kappa, r = args
    gamma = spec.gamma_grid[i_gamma]
    kappa = spec.kappa_grid[j_kappa]
    rng = spec.base_seed.substream(i_gamma, j_kappa).substream(r)
    outcome = _replicate_exists(
        spec.params_for(gamma), spec.n, _validated_p(kappa, spec.n),
        spec.fit_intercept, rng, kappa,
    )
    return i_gamma, j_kappa, outcome


def resolve_workers(workers: Optional[int] = None) -> int:
    """Worker count: explicit argument, else MLE_PHASE_WORKERS, else 1."""
    if workers is None:
        env = os.environ.get(WORKERS_ENV_VAR, "").strip()
        workers = int(env) if env else 1
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    return workers


def run_phase_diagram(spec: GridSpec, workers: Optional[int] = None) -> PhaseDiagram:
    """Fill every cell of the grid; output is identical for any worker count.

    Replicates are independent work items merged by cell key, so the
    result does not depend on scheduling; parallelism uses processes since
    the LP solves are CPU-bound.
    """
    workers = resolve_workers(workers)
    tasks = [
        (spec, i, j, r)
        for i in range(len(spec.gamma_grid))
        for j in range(len(spec.kappa_grid))
        for r in range(spec.replicates)
    ]
    if workers == 1:
        outcomes = map(_replicate_task, tasks)
    else:
        chunk = max(1, len(tasks) // (8 * workers))
        pool = ProcessPoolExecutor(max_workers=workers)
        try:
            outcomes = list(pool.map(_replicate_task, tasks, chunksize=chunk))
        finally:
            pool.shutdown()
    exists = {}
    failures = {}
    for i, j, outcome in outcomes:
        key = (spec.kappa_grid[j], spec.gamma_grid[i])
        if outcome is None:
            failures[key] = failures.get(key, 0) + 1
        else:
            exists[key] = exists.get(key, 0) + int(outcome)
    cells = {}
    for i, gamma in enumerate(spec.gamma_grid):
        for j, kappa in enumerate(spec.kappa_grid):
            key = (kappa, gamma)
            cells[key] = CellResult(
                exists_count=exists.get(key, 0),
                replicates=spec.replicates,
                failures=failures.get(key, 0),
            )
    return PhaseDiagram(spec=spec, cells=cells)


# ---------------------------------------------------------------------------
# serialization

def diagram_to_csv(diagram: PhaseDiagram) -> str:
    """CSV with header kappa,gamma,replicates,exists_count,p_hat, sorted rows."""
    out = io.StringIO()
    out.write("kappa,gamma,replicates,exists_count,p_hat\n")
    for (kappa, gamma) in sorted(diagram.cells):
        cell = diagram.cells[(kappa, gamma)]
        out.write(
            f"{kappa:.10g},{gamma:.10g},{cell.replicates},{cell.exists_count},"
            f"{cell.p_hat:.10g}\n"
        )
    return out.getvalue()


def diagram_to_json(diagram: PhaseDiagram) -> str:
    spec = diagram.spec
    doc = {
        "spec": {
            "n": spec.n,
            "kappa_grid": list(spec.kappa_grid),
            "gamma_grid": list(spec.gamma_grid),
            "rho": spec.rho,
            "replicates": spec.replicates,
            "fit_intercept": spec.fit_intercept,
            "seed": spec.base_seed.seed,
            "stream": spec.base_seed.stream,
        },
        "cells": [
            {
                "kappa": kappa,
                "gamma": gamma,
                "replicates": cell.replicates,
                "exists_count": cell.exists_count,
                "p_hat": cell.p_hat,
                "failures": cell.failures,
            }
            for (kappa, gamma), cell in sorted(diagram.cells.items())
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def diagram_to_svg(diagram: PhaseDiagram, cell_px: int = 24, curve_points: int = 120) -> str:
    """Minimal SVG heatmap: white = exists always, black = never.

    The theoretical boundary kappa = h(rho*gamma', sqrt(1-rho^2)*gamma') is
    overlaid as a red polyline, matching the visual convention of the
    empirical phase-transition figures.
    """
    spec = diagram.spec
    kappas = sorted(set(k for k, _ in diagram.cells))
    gammas = sorted(set(g for _, g in diagram.cells))
    width = len(kappas) * cell_px
    height = len(gammas) * cell_px
    margin = 2
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width + 2 * margin}" '
        f'height="{height + 2 * margin}" viewBox="0 0 {width + 2 * margin} {height + 2 * margin}">'
    ]
    # gamma increases upward: row 0 (smallest gamma) sits at the bottom
    for gi, gamma in enumerate(gammas):
        for ki, kappa in enumerate(kappas):
            shade = round(255 * diagram.cells[(kappa, gamma)].p_hat)
            x0 = margin + ki * cell_px
            y0 = margin + (len(gammas) - 1 - gi) * cell_px
            parts.append(
                f'<rect x="{x0}" y="{y0}" width="{cell_px}" height="{cell_px}" '
                f'fill="rgb({shade},{shade},{shade})"/>'
            )

    k_lo, k_hi = min(kappas), max(kappas)
    g_lo, g_hi = min(gammas), max(gammas)
    k_span = (k_hi - k_lo) or 1.0
    g_span = (g_hi - g_lo) or 1.0
    grid = np.linspace(g_lo, g_hi, curve_points)
    pts = []
    for point in boundary_curve(spec.rho, grid):
        # cell centers anchor the data coordinates
        fx = (point.h - k_lo) / k_span * (width - cell_px) + cell_px / 2
        fy = (point.gamma - g_lo) / g_span * (height - cell_px) + cell_px / 2
        if -cell_px <= fx <= width + cell_px:
            pts.append(f"{margin + fx:.2f},{margin + height - fy:.2f}")
    if pts:
        parts.append(
            f'<polyline points="{" ".join(pts)}" fill="none" stroke="red" stroke-width="2"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
