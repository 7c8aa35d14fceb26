"""Checking whether an isometry masks a set of states.

A map ``V: H_A -> H_A (x) H_B`` masks ``{|a_k>}`` when both reduced states of
``V|a_k>`` are the same for every ``k``. ``violation`` scores the failure as a
sum over unordered pairs of squared trace distances, which is smooth near
zero and vanishes exactly on maskers.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import jsonio
from .qcore import KET0, KET1, check_state, density_of, partial_trace, trace_distance
from .scodec import Alphabet, state_from_params_raw

ISOMETRY_TOL = 1e-9
DEFAULT_EPS = 1e-9


@dataclass(frozen=True)
class Isometry:
    """Matrix of shape ``(d_A * d_B, d_A)`` with orthonormal columns."""

    matrix: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        d_a, d_b = (int(d) for d in self.dims)
        if d_a < 2 or d_b < 2:
            raise ValueError(f"dims must be >= 2, got {self.dims}")
        if m.shape != (d_a * d_b, d_a):
            raise ValueError(f"matrix shape {m.shape} does not match dims {(d_a, d_b)}")
        err = np.max(np.abs(m.conj().T @ m - np.eye(d_a)))
        if err > ISOMETRY_TOL:
            raise ValueError(f"columns are not orthonormal (max |V^dag V - I| = {err:.3g})")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", (d_a, d_b))

    @property
    def d_in(self) -> int:
        return self.dims[0]

    def to_json(self) -> dict:
        return {"dims": list(self.dims), "matrix": jsonio.matrix_to_json(self.matrix)}

    @classmethod
    def from_json(cls, data) -> "Isometry":
        if not isinstance(data, dict) or "dims" not in data or "matrix" not in data:
            raise ValueError("isometry JSON needs 'dims' and 'matrix' fields")
        return cls(jsonio.matrix_from_json(data["matrix"]), tuple(data["dims"]))

    @classmethod
    def load(cls, path: str | Path) -> "Isometry":
        return cls.from_json(jsonio.load(path))


@dataclass(frozen=True)
class StateSet:
    states: np.ndarray
    label: str = ""

    def __post_init__(self):
        arr = np.array([check_state(s) for s in self.states])
        if arr.ndim != 2:
            raise ValueError("state set must hold vectors of a common dimension")
        object.__setattr__(self, "states", arr)

    def __len__(self) -> int:
        return len(self.states)

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    @classmethod
    def from_json(cls, data, label: str = "") -> "StateSet":
        return cls(np.array(Alphabet.from_json(data).states), label)

    @classmethod
    def load(cls, path: str | Path) -> "StateSet":
        return cls.from_json(jsonio.load(path), label=str(path))

    def to_json(self) -> list:
        return [jsonio.vector_to_json(s) for s in self.states]


def classical_set() -> StateSet:
    return StateSet(np.array([KET0, KET1]), "classical")


def phase_family(alpha: float = math.pi / 4, count: int = 8) -> StateSet:
    states = [state_from_params_raw(alpha, 2 * math.pi * k / count) for k in range(count)]
    return StateSet(np.array(states), "phase-family")


def stabilizer_set() -> StateSet:
    s = 1 / math.sqrt(2)
    states = [KET0, KET1, [s, s], [s, -s], [s, 1j * s], [s, -1j * s]]
    return StateSet(np.array(states, dtype=complex), "stabilizer")


PRESETS = {
    "classical": classical_set,
    "phase-family": phase_family,
    "stabilizer": stabilizer_set,
}


def resolve_states(spec: str) -> StateSet:
    """A preset name or a path to an alphabet-format JSON file."""
    if spec in PRESETS:
        return PRESETS[spec]()
    return StateSet.load(spec)


def canonical_embedding(d_a: int = 2, d_b: int = 2) -> Isometry:
    """``psi -> psi (x) |0>``."""
    m = np.zeros((d_a * d_b, d_a), dtype=complex)
    m[np.arange(d_a) * d_b, np.arange(d_a)] = 1
    return Isometry(m, (d_a, d_b))


def diagonal_masker() -> Isometry:
    """``|0> -> |00>, |1> -> |11>``: masks every fixed-alpha phase family."""
    m = np.zeros((4, 2), dtype=complex)
    m[0, 0] = m[3, 1] = 1
    return Isometry(m, (2, 2))


def bell_masker() -> Isometry:
    """``|0> -> Phi+, |1> -> Phi-``, the linear extension of the bit masker."""
    s = 1 / math.sqrt(2)
    m = np.array([[s, s], [0, 0], [0, 0], [s, -s]], dtype=complex)
    return Isometry(m, (2, 2))


def apply_masker(v: Isometry, psi) -> np.ndarray:
    psi = check_state(psi)
    if psi.size != v.d_in:
        raise ValueError(f"state has dimension {psi.size}, isometry expects {v.d_in}")
    out = v.matrix @ psi
    return out / np.linalg.norm(out)


def marginals(v: Isometry, states: StateSet) -> tuple[list[np.ndarray], list[np.ndarray]]:
    rho_a, rho_b = [], []
    for psi in states.states:
        rho = density_of(apply_masker(v, psi))
        rho_a.append(partial_trace(rho, "A", v.dims))
        rho_b.append(partial_trace(rho, "B", v.dims))
    return rho_a, rho_b


def pairwise_distances(v: Isometry, states: StateSet):
    """Yield ``(j, k, D_A, D_B)`` for every unordered pair ``j < k``."""
    rho_a, rho_b = marginals(v, states)
    for j, k in itertools.combinations(range(len(states)), 2):
        yield j, k, trace_distance(rho_a[j], rho_a[k]), trace_distance(rho_b[j], rho_b[k])


def violation(v: Isometry, states: StateSet) -> float:
    return float(sum(da**2 + db**2 for _, _, da, db in pairwise_distances(v, states)))


@dataclass(frozen=True)
class MaskingReport:
    is_masker: bool
    eps: float
    violation: float
    max_distance: float
    worst_pair: tuple[int, int] | None = None
    worst_side: str | None = None
    distances: list = field(default_factory=list, repr=False)

    def __bool__(self) -> bool:
        return self.is_masker

    def to_dict(self) -> dict:
        return {
            "is_masker": self.is_masker,
            "eps": self.eps,
            "violation": self.violation,
            "max_distance": self.max_distance,
            "worst_pair": list(self.worst_pair) if self.worst_pair else None,
            "worst_side": self.worst_side,
        }


def is_masker(v: Isometry, states: StateSet, eps: float = DEFAULT_EPS) -> MaskingReport:
    """Decide masking: every pairwise marginal trace distance is at most ``eps``."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    worst, pair, side = 0.0, None, None
    total = 0.0
    rows = []
    for j, k, da, db in pairwise_distances(v, states):
        rows.append((j, k, da, db))
        total += da**2 + db**2
        for s, d in (("A", da), ("B", db)):
            if pair is None or d > worst:
                worst, pair, side = d, (j, k), s
    return MaskingReport(worst <= eps, eps, total, worst, pair, side, rows)
