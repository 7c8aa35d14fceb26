"""Dense complex linear algebra for small qubit registers.

States are 1-d ``complex128`` arrays, operators are 2-d arrays. Joint
vectors always put subsystem A on the major (leftmost) index, so
``tensor(a, b)[i * len(b) + j] == a[i] * b[j]``.
"""
from __future__ import annotations

from typing import Literal, Sequence

import numpy as np

MAX_DIM = 2**12
STATE_TOL = 1e-10
DENSITY_TOL = 1e-10
PSD_TOL = 1e-9

Subsystem = Literal["A", "B"]

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)

BELL_LABELS = ("Phi+", "Phi-", "Psi+", "Psi-")


def as_vector(psi) -> np.ndarray:
    v = np.asarray(psi, dtype=complex)
    if v.ndim != 1 or v.size == 0:
        raise ValueError(f"expected a non-empty 1-d vector, got shape {v.shape}")
    return v


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def is_normalized(psi, tol: float = STATE_TOL) -> bool:
    return abs(np.linalg.norm(psi) - 1.0) <= tol


def check_state(psi, tol: float = STATE_TOL) -> np.ndarray:
    """Return ``psi`` as an array, raising ``ValueError`` unless it has unit norm."""
    v = as_vector(psi)
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > tol:
        raise ValueError(f"state is not normalized (norm={norm!r})")
    return v


def check_density(rho, tol: float = DENSITY_TOL) -> np.ndarray:
    """Return ``rho`` as an array, raising unless it is a valid density operator."""
    r = as_matrix(rho)
    if r.shape[0] != r.shape[1]:
        raise ValueError(f"density operator must be square, got {r.shape}")
    if np.max(np.abs(r - r.conj().T)) > tol:
        raise ValueError("density operator is not Hermitian")
    tr = np.trace(r)
    if abs(tr - 1.0) > tol:
        raise ValueError(f"density operator trace is {tr!r}, expected 1")
    lo = np.linalg.eigvalsh(0.5 * (r + r.conj().T))[0]
    if lo < -PSD_TOL:
        raise ValueError(f"density operator has negative eigenvalue {lo!r}")
    return r


def is_unitary(u, tol: float = STATE_TOL) -> bool:
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= tol)


def tensor(u, v) -> np.ndarray:
    """Kronecker product of two vectors with the first factor as major index."""
    u, v = as_vector(u), as_vector(v)
    if u.size * v.size > MAX_DIM:
        raise ValueError(f"joint dimension {u.size * v.size} exceeds cap {MAX_DIM}")
    return np.kron(u, v)


def kron(*ops) -> np.ndarray:
    """Kronecker product of operators, left to right."""
    out = np.ones((1, 1), dtype=complex)
    for op in ops:
        out = np.kron(out, as_matrix(op))
        if out.shape[0] > MAX_DIM or out.shape[1] > MAX_DIM:
            raise ValueError(f"operator dimension {out.shape} exceeds cap {MAX_DIM}")
    return out


def density_of(psi) -> np.ndarray:
    """Projector ``|psi><psi|`` of a normalized state."""
    v = check_state(psi)
    return np.outer(v, v.conj())


def maximally_mixed(d: int = 2) -> np.ndarray:
    return np.eye(d, dtype=complex) / d


def _split_dims(n: int, dims: tuple[int, int] | None) -> tuple[int, int]:
    if dims is None:
        d_a = int(round(np.sqrt(n)))
        if d_a * d_a != n:
            raise ValueError(f"cannot infer equal subsystem dims for dimension {n}")
        dims = (d_a, d_a)
    d_a, d_b = dims
    if d_a < 2 or d_b < 2:
        raise ValueError(f"subsystem dimensions must be >= 2, got {dims}")
    if d_a * d_b != n:
        raise ValueError(f"dims {dims} do not match joint dimension {n}")
    return d_a, d_b


def partial_trace(rho, keep: Subsystem, dims: tuple[int, int] | None = None) -> np.ndarray:
    """Reduced density operator of subsystem ``keep`` ("A" or "B").

    ``dims`` is ``(d_A, d_B)``; when omitted both factors are assumed equal.
    """
    r = as_matrix(rho)
    if r.shape[0] != r.shape[1]:
        raise ValueError(f"expected a square matrix, got {r.shape}")
    d_a, d_b = _split_dims(r.shape[0], dims)
    t = r.reshape(d_a, d_b, d_a, d_b)
    if keep == "A":
        return np.einsum("ijkj->ik", t)
    if keep == "B":
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def marginal(psi, keep: Subsystem, dims: tuple[int, int] | None = None) -> np.ndarray:
    """Reduced state of a pure joint state, without forming the full projector."""
    v = check_state(psi)
    d_a, d_b = _split_dims(v.size, dims)
    m = v.reshape(d_a, d_b)
    if keep == "A":
        return m @ m.conj().T
    if keep == "B":
        return m.T @ m.conj()
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def trace_distance(rho, sigma) -> float:
    """Half the trace norm of ``rho - sigma``, via a Hermitian eigensolver."""
    a, b = as_matrix(rho), as_matrix(sigma)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    # Fixed operand order makes the result exactly symmetric.
    diff = a - b if a.tobytes() <= b.tobytes() else b - a
    if np.max(np.abs(diff - diff.conj().T), initial=0.0) > DENSITY_TOL:
        raise ValueError("difference of operators is not Hermitian")
    ev = np.linalg.eigvalsh(0.5 * (diff + diff.conj().T))
    return float(min(1.0, 0.5 * np.sum(np.abs(ev))))


def fidelity_pure(psi, phi) -> float:
    """Squared overlap ``|<psi|phi>|^2`` of two pure states."""
    a, b = as_vector(psi), as_vector(phi)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.size} vs {b.size}")
    return float(min(1.0, abs(np.vdot(a, b)) ** 2))


def bell_states() -> list[np.ndarray]:
    """Phi+, Phi-, Psi+, Psi- in that order."""
    s = 1 / np.sqrt(2)
    return [
        np.array([s, 0, 0, s], dtype=complex),
        np.array([s, 0, 0, -s], dtype=complex),
        np.array([0, s, s, 0], dtype=complex),
        np.array([0, s, -s, 0], dtype=complex),
    ]


_BELL = np.array(bell_states())


def bell_projection(psi) -> np.ndarray:
    """Probabilities of the four Bell outcomes for a two-qubit pure state."""
    v = as_vector(psi)
    if v.size != 4:
        raise ValueError(f"Bell projection needs a 4-dim state, got dim {v.size}")
    check_state(v)
    return np.abs(_BELL.conj() @ v) ** 2


def apply(u, psi) -> np.ndarray:
    """Act with a unitary on a state vector."""
    m, v = as_matrix(u), as_vector(psi)
    if m.shape != (v.size, v.size):
        raise ValueError(f"operator shape {m.shape} does not act on dim {v.size}")
    return m @ v


def random_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random pure state."""
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random density operator from the induced (Ginibre) measure."""
    k = dim if rank is None else rank
    g = rng.normal(size=(dim, k)) + 1j * rng.normal(size=(dim, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR with phase correction."""
    g = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def stack_states(states: Sequence) -> np.ndarray:
    return np.array([as_vector(s) for s in states])
