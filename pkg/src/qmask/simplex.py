"""Nelder-Mead simplex minimization with dimension-adaptive coefficients.

Coefficients follow Gao & Han (2012), which keeps the method usable in a few
dozen dimensions:

    reflection   1
    expansion    1 + 2/n
    contraction  3/4 - 1/(2n)
    shrink       1 - 1/n

The search stops when the spread of objective values over the simplex drops
to ``tol * max(1, |f_best|)`` or after ``max_iters`` iterations.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np


@dataclass
class SimplexResult:
    x: np.ndarray
    fun: float
    nit: int
    nfev: int
    converged: bool
    # (iteration, best value so far), sampled every ``trace_every`` iterations plus the last.
    trace: list[tuple[int, float]] = field(default_factory=list)


def coefficients(n: int) -> tuple[float, float, float, float]:
    if n < 2:
        return 1.0, 2.0, 0.5, 0.5
    return 1.0, 1.0 + 2.0 / n, 0.75 - 0.5 / n, 1.0 - 1.0 / n


def initial_simplex(x0: np.ndarray, step: float) -> np.ndarray:
    n = x0.size
    sim = np.repeat(x0[None, :], n + 1, axis=0)
    sim[1:] += step * np.eye(n)
    return sim


def nelder_mead(
    f: Callable[[np.ndarray], float],
    x0,
    *,
    step: float = 0.5,
    tol: float = 1e-12,
    max_iters: int = 10_000,
    trace_every: int = 100,
    target: float | None = None,
) -> SimplexResult:
    """Minimize ``f`` from ``x0``.

    ``target``, when given, also stops the search once the best value is at or
    below it.
    """
    x0 = np.asarray(x0, dtype=float).ravel()
    n = x0.size
    rho, chi, gamma, sigma = coefficients(n)

    sim = initial_simplex(x0, step)
    fsim = np.array([f(x) for x in sim])
    nfev = n + 1
    order = np.argsort(fsim, kind="stable")
    sim, fsim = sim[order], fsim[order]

    trace = [(0, float(fsim[0]))]
    converged = False
    it = 0
    while it < max_iters:
        if fsim[-1] - fsim[0] <= tol * max(1.0, abs(fsim[0])):
            converged = True
            break
        if target is not None and fsim[0] <= target:
            converged = True
            break
        it += 1

        centroid = sim[:-1].mean(axis=0)
        worst = sim[-1]
        xr = centroid + rho * (centroid - worst)
        fr = f(xr)
        nfev += 1
        shrink = False
        if fr < fsim[0]:
            xe = centroid + rho * chi * (centroid - worst)
            fe = f(xe)
            nfev += 1
            if fe < fr:
                sim[-1], fsim[-1] = xe, fe
            else:
                sim[-1], fsim[-1] = xr, fr
        elif fr < fsim[-2]:
            sim[-1], fsim[-1] = xr, fr
        elif fr < fsim[-1]:
            xc = centroid + gamma * rho * (centroid - worst)
            fc = f(xc)
            nfev += 1
            if fc <= fr:
                sim[-1], fsim[-1] = xc, fc
            else:
                shrink = True
        else:
            xc = centroid - gamma * (centroid - worst)
            fc = f(xc)
            nfev += 1
            if fc < fsim[-1]:
                sim[-1], fsim[-1] = xc, fc
            else:
                shrink = True

        if shrink:
            sim[1:] = sim[0] + sigma * (sim[1:] - sim[0])
            for i in range(1, n + 1):
                fsim[i] = f(sim[i])
            nfev += n

        order = np.argsort(fsim, kind="stable")
        sim, fsim = sim[order], fsim[order]
        if it % trace_every == 0:
            trace.append((it, float(fsim[0])))

    if trace[-1][0] != it:
        trace.append((it, float(fsim[0])))
    return SimplexResult(sim[0].copy(), float(fsim[0]), it, nfev, converged, trace)
