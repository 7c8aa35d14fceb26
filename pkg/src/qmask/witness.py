"""Searching all isometries for a masker of a given state set.

Candidates are ``V(p) psi = exp(iH(p)) (psi (x) |0>_B)`` with ``H(p)`` a
``d x d`` Hermitian matrix, ``d = d_A * d_B``, filled from ``d**2`` reals:

* ``p[:d]`` is the diagonal;
* the next ``K = d(d-1)/2`` entries are the real parts of the strict upper
  triangle in row-major order;
* the last ``K`` entries are the matching imaginary parts.

Every isometry into ``H_A (x) H_B`` has this form for some ``p``, so a search
that cannot drive the violation to zero is evidence that no masker exists.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import jsonio
from .simplex import nelder_mead
from .verifier import Isometry, StateSet

INIT_RANGE = math.pi
INITIAL_STEP = 0.5
TRACE_EVERY = 250


def hermitian_from_params(p, d: int) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape != (d * d,):
        raise ValueError(f"expected {d * d} parameters for d={d}, got shape {p.shape}")
    k = d * (d - 1) // 2
    rows, cols = np.triu_indices(d, 1)
    h = np.zeros((d, d), dtype=complex)
    h[np.arange(d), np.arange(d)] = p[:d]
    z = p[d:d + k] + 1j * p[d + k:]
    h[rows, cols] = z
    h[cols, rows] = z.conj()
    return h


def _exp_i_columns(h: np.ndarray, cols: np.ndarray) -> np.ndarray:
    w, vecs = np.linalg.eigh(h)
    return (vecs * np.exp(1j * w)) @ vecs[cols].conj().T


def embedding_columns(dims: tuple[int, int]) -> np.ndarray:
    d_a, d_b = dims
    return np.arange(d_a) * d_b


def isometry_from_params(p, dims: tuple[int, int]) -> Isometry:
    d_a, d_b = dims
    h = hermitian_from_params(p, d_a * d_b)
    return Isometry(_exp_i_columns(h, embedding_columns(dims)), (d_a, d_b))


def n_params(dims: tuple[int, int]) -> int:
    return (dims[0] * dims[1]) ** 2


class MaskingObjective:
    """``p -> violation(isometry_from_params(p), states)``, vectorized over states.

    For 2x2 marginals the squared trace distance is half the squared Frobenius
    norm of the difference, which lets the pair sum collapse to
    ``(m * sum_k |rho_k|^2 - |sum_k rho_k|^2) / 2``.
    """

    def __init__(self, states: StateSet, dims: tuple[int, int]):
        d_a, d_b = dims
        if states.dim != d_a:
            raise ValueError(f"states have dimension {states.dim}, dims expect {d_a}")
        self.states = states.states
        self.dims = (d_a, d_b)
        self.d = d_a * d_b
        self.m = len(states)
        k = self.d * (self.d - 1) // 2
        rows, cols = np.triu_indices(self.d, 1)
        self._k = k
        self._diag = np.arange(self.d) * (self.d + 1)
        self._upper = rows * self.d + cols
        self._lower = cols * self.d + rows
        self._cols = embedding_columns(dims)
        self._pj, self._pk = np.triu_indices(self.m, 1)
        self.nfev = 0

    def _side(self, rho: np.ndarray) -> float:
        if rho.shape[-1] == 2:
            total = rho.sum(axis=0)
            return 0.5 * (self.m * np.vdot(rho, rho).real - np.vdot(total, total).real)
        ev = np.linalg.eigvalsh(rho[self._pj] - rho[self._pk])
        return float(np.sum((0.5 * np.abs(ev).sum(axis=-1)) ** 2))

    def __call__(self, p) -> float:
        self.nfev += 1
        if self.m < 2:
            return 0.0
        d, k = self.d, self._k
        h = np.zeros(d * d, dtype=complex)
        h[self._diag] = p[:d]
        z = p[d:d + k] + 1j * p[d + k:]
        h[self._upper] = z
        h[self._lower] = z.conj()
        v = _exp_i_columns(h.reshape(d, d), self._cols)
        joint = (self.states @ v.T).reshape(self.m, *self.dims)
        rho_a = joint @ joint.conj().transpose(0, 2, 1)
        rho_b = joint.transpose(0, 2, 1) @ joint.conj()
        return max(0.0, float(self._side(rho_a) + self._side(rho_b)))


def objective(p, states: StateSet, dims: tuple[int, int]) -> float:
    return MaskingObjective(states, dims)(np.asarray(p, dtype=float))


@dataclass(frozen=True)
class SearchConfig:
    seed: int
    restarts: int = 20
    max_iters: int = 20_000
    tol: float = 1e-12
    d_b: int = 2

    def __post_init__(self):
        if not isinstance(self.seed, (int, np.integer)) or self.seed < 0 or self.seed >= 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.restarts < 1 or self.max_iters < 1 or self.tol <= 0:
            raise ValueError("restarts, max_iters and tol must be positive")
        if self.d_b not in (2, 4):
            raise ValueError(f"d_b must be 2 or 4, got {self.d_b}")


@dataclass
class WitnessReport:
    best_j: float
    best_params: list[float]
    restarts: list[dict]
    label: str
    config: dict
    wall_time: float = field(default=0.0, compare=False)

    @property
    def per_restart_j(self) -> list[float]:
        return [r["j"] for r in self.restarts]

    def to_dict(self) -> dict:
        """JSON form; ``wall_time`` sits in ``metadata`` so the rest is reproducible."""
        return {
            "schema_version": jsonio.SCHEMA_VERSION,
            "kind": "witness_report",
            "label": self.label,
            "config": self.config,
            "best_j": self.best_j,
            "best_params": self.best_params,
            "restarts": self.restarts,
            "metadata": {"wall_time": self.wall_time},
        }


def initial_params(seed: int, restart: int, dims: tuple[int, int]) -> np.ndarray:
    rng = np.random.default_rng(seed + restart)
    return rng.uniform(-INIT_RANGE, INIT_RANGE, n_params(dims))


def _run_restart(states: StateSet, cfg: SearchConfig, restart: int) -> tuple[dict, np.ndarray]:
    dims = (states.dim, cfg.d_b)
    f = MaskingObjective(states, dims)
    res = nelder_mead(
        f,
        initial_params(cfg.seed, restart, dims),
        step=INITIAL_STEP,
        tol=cfg.tol,
        max_iters=cfg.max_iters,
        trace_every=TRACE_EVERY,
    )
    row = {
        "restart": restart,
        "seed": cfg.seed + restart,
        "j": res.fun,
        "iterations": res.nit,
        "evaluations": res.nfev,
        "converged": res.converged,
        "trace": [[i, v] for i, v in res.trace],
    }
    return row, res.x


def minimize(states: StateSet, cfg: SearchConfig, workers: int = 1) -> WitnessReport:
    """Multi-start simplex search for the least-violating isometry.

    Restart ``r`` starts from parameters drawn uniformly from ``[-pi, pi]``
    with seed ``cfg.seed + r``; results are merged in restart order, so the
    report does not depend on ``workers``.
    """
    start = time.perf_counter()
    indices = range(cfg.restarts)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_restart, [states] * cfg.restarts, [cfg] * cfg.restarts, indices))
    else:
        results = [_run_restart(states, cfg, r) for r in indices]
    rows = [r for r, _ in results]
    best = min(range(len(rows)), key=lambda i: (rows[i]["j"], i))
    return WitnessReport(
        best_j=rows[best]["j"],
        best_params=[float(x) for x in results[best][1]],
        restarts=rows,
        label=states.label,
        config=asdict(cfg),
        wall_time=time.perf_counter() - start,
    )


def sweep(states: StateSet, d_b_values: Sequence[int], cfg: SearchConfig, workers: int = 1) -> list[WitnessReport]:
    """One search per ancilla dimension, same seed policy for each."""
    reports = []
    for d_b in d_b_values:
        c = SearchConfig(seed=cfg.seed, restarts=cfg.restarts, max_iters=cfg.max_iters, tol=cfg.tol, d_b=d_b)
        reports.append(minimize(states, c, workers=workers))
    return reports
