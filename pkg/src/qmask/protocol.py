"""Qubit commitment run as commitment to the state's classical description.

Alice turns the state into a bit-string (fixed-point angles or an alphabet
index), masks it pair by pair, and hands Bob the B halves. Bob's halves are
maximally mixed whatever was committed. To open, Alice releases her halves and
Bob measures each pair in the Bell basis.

The simulator acts as a trusted holder of the joint pairs; "sending" a qubit
moves access, never copies. ``cheat_phase_flip`` is Alice applying Z to her
own halves before opening: Bob cannot see it, and the opening then succeeds
for a different string, so the scheme conceals but does not bind.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import jsonio
from .cmask import AmbiguousState, MaskedRegister, check_bits, mask_string, pair_marginals, unmask_string
from .qcore import I2, MAX_DIM, Z, apply, fidelity_pure, kron, maximally_mixed, trace_distance
from .scodec import (
    Alphabet,
    CodecConfig,
    QubitParams,
    decode_index,
    encode_index,
    encode_params,
    reconstruct_state,
    reconstruction_fidelity_floor,
    state_from_params,
)

COMMITTED, OPENED, ABORTED = "committed", "opened", "aborted"
ACCEPT, REJECT = "accept", "reject"
_PHASE_FLIP_A = kron(Z, I2)


class ProtocolError(RuntimeError):
    """An operation was attempted in the wrong protocol phase."""


@dataclass
class Transcript:
    phase: str = COMMITTED
    messages: list[tuple[str, str]] = field(default_factory=list)
    verdict: str | None = None

    def record(self, sender: str, payload: str) -> None:
        self.messages.append((sender, payload))

    def close(self, phase: str, verdict: str) -> None:
        if self.phase != COMMITTED:
            raise ProtocolError(f"cannot move from {self.phase!r} to {phase!r}")
        if phase not in (OPENED, ABORTED):
            raise ProtocolError(f"unknown phase {phase!r}")
        self.phase = phase
        self.verdict = verdict

    def to_dict(self) -> dict:
        return {
            "phase": self.phase,
            "messages": [{"sender": s, "payload": p} for s, p in self.messages],
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class Commitment:
    """Session state. ``register`` is the simulator's ground truth."""

    description: str
    register: MaskedRegister
    transcript: Transcript

    @property
    def alice_holdings(self) -> list[tuple[int, str]]:
        return [(i, "A") for i in range(len(self.register))]

    @property
    def bob_holdings(self) -> list[np.ndarray]:
        return [pair_marginals(p)[1] for p in self.register]


@dataclass(frozen=True)
class OpenResult:
    verdict: str
    transcript: Transcript
    decoded: str | None = None
    tamper_position: int | None = None

    @property
    def accepted(self) -> bool:
        return self.verdict == ACCEPT


def commit(description: str) -> tuple[Commitment, Transcript]:
    check_bits(description)
    if not description:
        raise ValueError("cannot commit to an empty description")
    transcript = Transcript()
    c = Commitment(description, mask_string(description), transcript)
    transcript.record("alice", f"B halves of {len(description)} masked pairs")
    return c, transcript


def _require_committed(c: Commitment) -> None:
    if c.transcript.phase != COMMITTED:
        raise ProtocolError(f"commitment is already {c.transcript.phase}")


def bob_view(c: Commitment) -> list[np.ndarray]:
    """Bob's reduced state for each pair, available only before opening."""
    _require_committed(c)
    return c.bob_holdings


def bob_view_tensor(c: Commitment) -> np.ndarray:
    """Bob's whole view as one operator; limited to 12 pairs."""
    view = bob_view(c)
    if 2 ** len(view) > MAX_DIM:
        raise ValueError(f"{len(view)} pairs exceed the {MAX_DIM}-dim cap; use bob_view")
    return kron(*view)


def view_distance(a: Sequence[np.ndarray], b: Sequence[np.ndarray]) -> float:
    """Largest per-pair trace distance between two equally long views."""
    if len(a) != len(b):
        raise ValueError("views have different lengths")
    return max((trace_distance(x, y) for x, y in zip(a, b)), default=0.0)


def open_commitment(c: Commitment, claimed: str) -> OpenResult:
    """Alice unveils ``claimed`` and releases her halves; Bob decodes and compares.

    A length mismatch or an undecodable pair aborts the session with a reject.
    """
    _require_committed(c)
    check_bits(claimed)
    t = c.transcript
    t.record("alice", f"claim {claimed}")
    if len(claimed) != len(c.register):
        t.record("bob", "reject: claimed length differs from commitment")
        t.close(ABORTED, REJECT)
        return OpenResult(REJECT, t)
    t.record("alice", f"A halves of {len(c.register)} pairs")
    try:
        decoded = unmask_string(c.register)
    except AmbiguousState as exc:
        t.record("bob", f"reject: pair {exc.position} is not a masked bit")
        t.close(ABORTED, REJECT)
        return OpenResult(REJECT, t, tamper_position=exc.position)
    verdict = ACCEPT if decoded == claimed else REJECT
    t.record("bob", f"{verdict}: decoded {decoded}")
    t.close(OPENED, verdict)
    return OpenResult(verdict, t, decoded=decoded)


def cheat_phase_flip(c: Commitment, positions: Sequence[int]) -> Commitment:
    """Alice applies Z to her half of each listed pair (Phi+ <-> Phi-)."""
    _require_committed(c)
    register = c.register
    for pos in positions:
        if not 0 <= pos < len(register):
            raise IndexError(f"position {pos} out of range for {len(register)} pairs")
        register = register.replace(pos, apply(_PHASE_FLIP_A, register[pos]))
    return dataclasses.replace(c, register=register)


def flip_bits(s: str, positions: Sequence[int]) -> str:
    bits = list(s)
    for pos in positions:
        bits[pos] = "1" if bits[pos] == "0" else "0"
    return "".join(bits)


def run_demo(
    *,
    params: QubitParams | None = None,
    codec: CodecConfig | None = None,
    alphabet: Alphabet | None = None,
    index: int | None = None,
    cheat: Sequence[int] | None = None,
) -> dict:
    """Commit, optionally cheat, open, and report what each party could see.

    Give either ``params`` (with ``codec``) or ``alphabet`` and ``index``.
    With ``cheat``, Alice flips those positions and claims the flipped string.
    """
    if (params is None) == (alphabet is None):
        raise ValueError("give exactly one of params or alphabet")
    if params is not None:
        codec = codec or CodecConfig()
        description = encode_params(params, codec)
        source = {"type": "params", "alpha": params.alpha, "theta": params.theta, "precision_bits": codec.n_bits}
    else:
        if index is None:
            raise ValueError("alphabet source needs an index")
        description = encode_index(index, alphabet)
        source = {"type": "alphabet", "size": alphabet.size, "index": index}

    c, transcript = commit(description)
    view_before = bob_view(c)
    mixed = [maximally_mixed(2)] * len(c.register)
    reference, _ = commit("0" * len(description))
    concealing = {
        "max_distance_to_mixed": view_distance(view_before, mixed),
        "max_distance_to_reference": view_distance(view_before, bob_view(reference)),
    }

    claimed = description
    cheat = list(cheat or [])
    report: dict = {"schema_version": jsonio.SCHEMA_VERSION, "kind": "commit_demo", "source": source}
    if cheat:
        c = cheat_phase_flip(c, cheat)
        claimed = flip_bits(description, cheat)
        report["cheat_positions"] = cheat
        report["bob_view_change_from_cheat"] = view_distance(view_before, bob_view(c))

    result = open_commitment(c, claimed)
    report.update(
        committed=description,
        claimed=claimed,
        decoded=result.decoded,
        verdict=result.verdict,
        tamper_position=result.tamper_position,
        binding_violated=result.accepted and claimed != description,
        concealing_audit=concealing,
        transcript=transcript.to_dict(),
    )
    if result.accepted:
        if params is not None:
            original = state_from_params(params)
            unveiled = reconstruct_state(claimed, codec)
            report["unveiled_state"] = unveiled
            report["fidelity"] = fidelity_pure(original, unveiled)
            report["fidelity_floor"] = reconstruction_fidelity_floor(codec)
        else:
            try:
                unveiled_index = decode_index(claimed, alphabet)
            except IndexError:
                unveiled_index = None
            report["unveiled_index"] = unveiled_index
            report["index_match"] = unveiled_index == index
            if unveiled_index is not None:
                report["unveiled_state"] = alphabet[unveiled_index]
    return report
