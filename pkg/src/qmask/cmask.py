"""Masking classical bits in the phase of a Bell pair.

Bit ``b`` becomes ``(|00> + (-1)**b |11>)/sqrt(2)``. Each qubit on its own is
maximally mixed for either bit value, so a single party learns nothing; a
joint Bell measurement recovers the bit.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import jsonio
from .qcore import bell_projection, check_state, marginal, maximally_mixed, trace_distance

DEFAULT_DECODE_TOL = 1e-9
HONEST_TOL = 1e-10


class AmbiguousState(ValueError):
    """A pair is not (close to) Phi+ or Phi-, so no bit can be read off it."""

    def __init__(self, probabilities, position: int | None = None):
        self.probabilities = np.asarray(probabilities, dtype=float)
        self.position = position
        probs = ", ".join(f"{p:.6g}" for p in self.probabilities)
        where = "" if position is None else f" at position {position}"
        super().__init__(f"ambiguous Bell pair{where}: probabilities ({probs})")


def check_bits(s: str) -> str:
    if not isinstance(s, str):
        raise TypeError(f"bit-string must be str, got {type(s).__name__}")
    for i, ch in enumerate(s):
        if ch not in "01":
            raise ValueError(f"invalid bit {ch!r} at position {i}")
    return s


@dataclass(frozen=True)
class MaskedRegister:
    """One two-qubit joint state per masked bit, in string order."""

    pairs: tuple[np.ndarray, ...] = ()

    def __post_init__(self):
        pairs = tuple(check_state(p) for p in self.pairs)
        for i, p in enumerate(pairs):
            if p.size != 4:
                raise ValueError(f"pair {i} has dimension {p.size}, expected 4")
        object.__setattr__(self, "pairs", pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __getitem__(self, i):
        return self.pairs[i]

    def replace(self, position: int, pair) -> "MaskedRegister":
        if not 0 <= position < len(self.pairs):
            raise IndexError(f"position {position} out of range for {len(self.pairs)} pairs")
        pairs = list(self.pairs)
        pairs[position] = pair
        return MaskedRegister(tuple(pairs))

    def to_json(self) -> list:
        return [jsonio.vector_to_json(p) for p in self.pairs]

    @classmethod
    def from_json(cls, data) -> "MaskedRegister":
        if not isinstance(data, list):
            raise ValueError("masked register must be a JSON array of 4-dim vectors")
        return cls(tuple(jsonio.vector_from_json(p) for p in data))


def encode_bit(b: int) -> np.ndarray:
    if b not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {b!r}")
    s = 1 / np.sqrt(2)
    return np.array([s, 0, 0, -s if b else s], dtype=complex)


def mask_string(s: str) -> MaskedRegister:
    check_bits(s)
    return MaskedRegister(tuple(encode_bit(int(ch)) for ch in s))


def decode_bit(pair, tol: float = DEFAULT_DECODE_TOL) -> int:
    """Read a bit by projecting onto the Bell basis.

    Raises ``AmbiguousState`` if neither Phi+ nor Phi- carries probability
    at least ``1 - tol``.
    """
    probs = bell_projection(pair)
    if probs[0] >= 1 - tol:
        return 0
    if probs[1] >= 1 - tol:
        return 1
    raise AmbiguousState(probs)


def unmask_string(register: MaskedRegister | Iterable, tol: float = DEFAULT_DECODE_TOL) -> str:
    out = []
    for i, pair in enumerate(register):
        try:
            out.append(str(decode_bit(pair, tol)))
        except AmbiguousState as exc:
            raise AmbiguousState(exc.probabilities, position=i) from None
    return "".join(out)


def pair_marginals(pair) -> tuple[np.ndarray, np.ndarray]:
    return marginal(pair, "A", (2, 2)), marginal(pair, "B", (2, 2))


def marginal_audit(register: MaskedRegister | Sequence) -> float:
    """Largest trace distance from I/2 over all pairs and both halves (0 if empty)."""
    mixed = maximally_mixed(2)
    worst = 0.0
    for pair in register:
        for rho in pair_marginals(pair):
            worst = max(worst, trace_distance(rho, mixed))
    return worst


def leakage(pair) -> float:
    """Bell-basis probability outside span{Phi+, Phi-}."""
    probs = bell_projection(pair)
    return float(probs[2] + probs[3])


def is_honest(register: MaskedRegister, tol: float = HONEST_TOL) -> bool:
    return all(leakage(p) <= tol for p in register)
