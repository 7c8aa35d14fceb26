"""Classical descriptions of known qubit states.

A qubit is ``cos(alpha)|0> + exp(i theta) sin(alpha)|1>`` with
``alpha in [0, pi/2]`` and ``theta in [0, 2 pi)``. Free parameters are
quantized to ``n_bits`` each on uniform bins and decoded at bin midpoints;
states drawn from a finite alphabet are described exactly by their index.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from . import jsonio
from .cmask import check_bits
from .qcore import as_vector, check_state, fidelity_pure

HALF_PI = math.pi / 2
TWO_PI = 2 * math.pi
GAUGE_TOL = 1e-12
MAX_BITS = 64

# Largest precision whose fidelity floor is found by exhaustive grid search;
# beyond it the closed-form half-bin bound is used.
GRID_MAX_BITS = 20
GRID_EXTRA_BITS = 2
# Allowance for double-precision rounding in the fidelity computation itself.
FP_MARGIN = 1e-13


@dataclass(frozen=True)
class QubitParams:
    """Angles of a pure qubit state; the phase is forced to 0 at the poles."""

    alpha: float
    theta: float = 0.0

    def __post_init__(self):
        alpha, theta = float(self.alpha), float(self.theta)
        if not 0.0 <= alpha <= HALF_PI:
            raise ValueError(f"alpha={alpha!r} outside [0, pi/2]")
        if not 0.0 <= theta < TWO_PI:
            raise ValueError(f"theta={theta!r} outside [0, 2 pi)")
        if alpha == 0.0 or alpha == HALF_PI:
            theta = 0.0
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "theta", theta)

    @classmethod
    def canonical(cls, alpha: float, theta: float) -> "QubitParams":
        """Build from arbitrary angles describing the same ray."""
        return params_from_state(state_from_params_raw(alpha, theta))

    def as_tuple(self) -> tuple[float, float]:
        return (self.alpha, self.theta)


@dataclass(frozen=True)
class CodecConfig:
    n_bits: int = 16

    def __post_init__(self):
        if not isinstance(self.n_bits, (int, np.integer)) or not 1 <= self.n_bits <= MAX_BITS:
            raise ValueError(f"n_bits must be an integer in [1, {MAX_BITS}], got {self.n_bits!r}")


def state_from_params_raw(alpha, theta) -> np.ndarray:
    return np.array([np.cos(alpha), np.exp(1j * theta) * np.sin(alpha)], dtype=complex)


def state_from_params(p: QubitParams) -> np.ndarray:
    return state_from_params_raw(p.alpha, p.theta)


def _angles_from_amplitudes(a0, a1):
    """Vectorized inverse of the parameterization, global phase removed."""
    a0 = np.asarray(a0, dtype=complex)
    a1 = np.asarray(a1, dtype=complex)
    r0, r1 = np.abs(a0), np.abs(a1)
    alpha = np.arctan2(r1, r0)
    theta = np.mod(np.angle(a1) - np.angle(a0), TWO_PI)
    theta = np.where(theta >= TWO_PI, 0.0, theta)
    north = r1 <= GAUGE_TOL * np.maximum(r0, 1.0)
    south = r0 <= GAUGE_TOL * np.maximum(r1, 1.0)
    alpha = np.where(north, 0.0, np.where(south, HALF_PI, alpha))
    theta = np.where(north | south, 0.0, theta)
    return alpha, theta


def params_from_state(psi) -> QubitParams:
    v = check_state(psi)
    if v.size != 2:
        raise ValueError(f"expected a qubit state, got dimension {v.size}")
    alpha, theta = _angles_from_amplitudes(v[0], v[1])
    return QubitParams(float(alpha), float(theta))


def _alpha_bin(alpha, n: int):
    k = np.floor(np.asarray(alpha) / HALF_PI * 2.0**n)
    return np.clip(k, 0, 2.0**n - 1)


def _theta_bin(theta, n: int):
    k = np.floor(np.asarray(theta) / TWO_PI * 2.0**n)
    return np.mod(k, 2.0**n)


def _alpha_mid(k, n: int):
    return (np.asarray(k, dtype=float) + 0.5) * HALF_PI / 2.0**n


def _theta_mid(k, n: int):
    return (np.asarray(k, dtype=float) + 0.5) * TWO_PI / 2.0**n


def _to_bits(k: int, width: int) -> str:
    return format(k, "b").zfill(width) if width else ""


def encode_params(p: QubitParams, c: CodecConfig) -> str:
    """Fixed-point, big-endian: ``n_bits`` for alpha followed by ``n_bits`` for theta."""
    n = c.n_bits
    k_alpha = min(int(math.floor(p.alpha / HALF_PI * 2**n)), 2**n - 1)
    k_theta = int(math.floor(p.theta / TWO_PI * 2**n)) % 2**n
    return _to_bits(k_alpha, n) + _to_bits(k_theta, n)


def decode_params(s: str, c: CodecConfig) -> QubitParams:
    check_bits(s)
    n = c.n_bits
    if len(s) != 2 * n:
        raise ValueError(f"expected {2 * n} bits for precision {n}, got {len(s)}")
    k_alpha, k_theta = int(s[:n], 2), int(s[n:], 2)
    alpha = (k_alpha + 0.5) * HALF_PI / 2**n
    theta = (k_theta + 0.5) * TWO_PI / 2**n
    # Midpoints never reach a pole, so the gauge rule in QubitParams is a no-op here.
    return QubitParams(alpha, theta)


def describe_state(psi, c: CodecConfig) -> str:
    return encode_params(params_from_state(psi), c)


def reconstruct_state(s: str, c: CodecConfig) -> np.ndarray:
    return state_from_params(decode_params(s, c))


def pipeline_fidelity(alpha, theta, n: int) -> np.ndarray:
    """Fidelity after describe -> decode for arrays of true angles (vectorized)."""
    alpha = np.asarray(alpha, dtype=float)
    theta = np.asarray(theta, dtype=float)
    a0 = np.cos(alpha).astype(complex)
    a1 = np.exp(1j * theta) * np.sin(alpha)
    al, th = _angles_from_amplitudes(a0, a1)
    al2 = _alpha_mid(_alpha_bin(al, n), n)
    th2 = _theta_mid(_theta_bin(th, n), n)
    overlap = np.conj(a0) * np.cos(al2) + np.conj(a1) * np.exp(1j * th2) * np.sin(al2)
    return np.minimum(np.abs(overlap) ** 2, 1.0)


def half_bin_bound(n: int) -> float:
    """Closed-form fidelity lower bound from half-bin errors in both angles.

    Moving alpha changes the state at unit Fubini-Study speed, moving theta at
    speed ``sin(alpha) cos(alpha) <= 1/2``; the infidelity is the squared sine
    of the accumulated angle.
    """
    h_alpha = HALF_PI / 2.0 ** (n + 1)
    h_theta = math.pi / 2.0**n
    g = min(h_alpha + 0.5 * h_theta, HALF_PI)
    return max(0.0, math.cos(g) ** 2 - FP_MARGIN)


def grid_fidelity_minimum(n: int, extra_bits: int = GRID_EXTRA_BITS, chunk: int = 1 << 18) -> float:
    """Smallest pipeline fidelity on a grid of step ``2**-(n + extra_bits)`` per range.

    alpha covers the full closed range. The theta error only depends on the
    offset inside its bin, so theta is swept over the first, a middle and the
    last (wrapping) bin. Bin edges are grid points.
    """
    m = n + extra_bits
    alpha_all = np.arange(2**m + 1, dtype=float) * (HALF_PI / 2.0**m)
    sub = 2**extra_bits
    bins = sorted({0, 2 ** (n - 1) if n > 1 else 0, 2**n - 1})
    theta_idx = np.concatenate([np.arange(b * sub, (b + 1) * sub) for b in bins])
    theta = theta_idx.astype(float) * (TWO_PI / 2.0**m)
    worst = 1.0
    for start in range(0, alpha_all.size, chunk):
        a = alpha_all[start:start + chunk]
        f = pipeline_fidelity(a[:, None], theta[None, :], n)
        worst = min(worst, float(f.min()))
    return worst


_floor_cache: dict[int, float] = {}
_floor_lock = threading.Lock()


def reconstruction_fidelity_floor(c: CodecConfig | int) -> float:
    """Worst-case fidelity of describe -> decode at precision ``c``.

    Up to ``GRID_MAX_BITS`` this is the grid minimum (the worst case sits on
    bin edges, which the grid contains); above it, ``half_bin_bound``.
    Computed once per precision and cached; thread-safe.
    """
    n = c.n_bits if isinstance(c, CodecConfig) else CodecConfig(int(c)).n_bits
    with _floor_lock:
        if n not in _floor_cache:
            if n <= GRID_MAX_BITS:
                _floor_cache[n] = max(0.0, grid_fidelity_minimum(n) - FP_MARGIN)
            else:
                _floor_cache[n] = half_bin_bound(n)
        return _floor_cache[n]


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of known states, addressed by fixed-width binary index."""

    states: tuple[np.ndarray, ...]

    def __post_init__(self):
        states = tuple(
            state_from_params(s) if isinstance(s, QubitParams) else check_state(s) for s in self.states
        )
        if not states:
            raise ValueError("alphabet must contain at least one state")
        object.__setattr__(self, "states", states)

    def __len__(self) -> int:
        return len(self.states)

    @property
    def size(self) -> int:
        return len(self.states)

    @property
    def width(self) -> int:
        return (self.size - 1).bit_length()

    def __getitem__(self, i: int) -> np.ndarray:
        return self.states[i]

    @classmethod
    def from_json(cls, data) -> "Alphabet":
        """Entries are ``[alpha, theta]`` in radians or raw ``[[re, im], ...]`` vectors."""
        if not isinstance(data, list) or not data:
            raise ValueError("alphabet must be a non-empty JSON array")
        states = []
        for i, entry in enumerate(data):
            try:
                if (
                    isinstance(entry, list)
                    and len(entry) == 2
                    and all(isinstance(x, (int, float)) for x in entry)
                ):
                    states.append(state_from_params_raw(float(entry[0]), float(entry[1])))
                else:
                    states.append(check_state(jsonio.vector_from_json(entry)))
            except (ValueError, TypeError) as exc:
                raise ValueError(f"alphabet entry {i}: {exc}") from None
        return cls(tuple(states))

    def to_json(self) -> list:
        return [jsonio.vector_to_json(s) for s in self.states]


def encode_index(i: int, a: Alphabet) -> str:
    if not 0 <= i < a.size:
        raise IndexError(f"index {i} out of range for alphabet of size {a.size}")
    return _to_bits(i, a.width)


def decode_index(s: str, a: Alphabet) -> int:
    check_bits(s)
    if len(s) != a.width:
        raise ValueError(f"expected {a.width} bits for alphabet of size {a.size}, got {len(s)}")
    i = int(s, 2) if s else 0
    if i >= a.size:
        raise IndexError(f"decoded index {i} out of range for alphabet of size {a.size}")
    return i


def reconstruction_fidelity(psi, s: str, c: CodecConfig) -> float:
    return fidelity_pure(as_vector(psi), reconstruct_state(s, c))
