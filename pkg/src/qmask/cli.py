"""``qmask`` command line: mask, unmask, verify, witness, commit-demo.

Exit codes: 0 success (or verdict true), 1 verdict false, 2 bad input or a
decode failure. Reports are JSON on stdout unless ``--out`` is given; anything
run-dependent (timestamps, wall time) lives under ``metadata``.
"""
from __future__ import annotations

import argparse
import math
import sys
from datetime import datetime, timezone

from . import jsonio
from .cmask import AmbiguousState, MaskedRegister, check_bits, marginal_audit, mask_string, unmask_string
from .protocol import run_demo
from .scodec import (
    Alphabet,
    CodecConfig,
    QubitParams,
    decode_index,
    decode_params,
    encode_index,
    encode_params,
    reconstruction_fidelity_floor,
    state_from_params,
)
from .verifier import (
    DEFAULT_EPS,
    Isometry,
    bell_masker,
    canonical_embedding,
    diagonal_masker,
    is_masker,
    resolve_states,
)
from .witness import SearchConfig, sweep

EXIT_OK, EXIT_FALSE, EXIT_INPUT = 0, 1, 2

ISOMETRY_PRESETS = {
    "diagonal": diagonal_masker,
    "bell": bell_masker,
    "embedding": canonical_embedding,
}


class InputError(Exception):
    pass


def _metadata() -> dict:
    return {"generated_at": datetime.now(timezone.utc).isoformat()}


def _parse_params(text: str) -> QubitParams:
    parts = text.split(",")
    if len(parts) != 2:
        raise InputError(f"--params expects ALPHA,THETA in radians, got {text!r}")
    values = []
    for pos, part in enumerate(parts):
        try:
            values.append(float(part))
        except ValueError:
            raise InputError(f"--params field {pos} is not a number: {part!r}") from None
    alpha, theta = values
    if not 0 <= alpha <= math.pi / 2:
        raise InputError(f"alpha={alpha} outside [0, pi/2]")
    return QubitParams.canonical(alpha, theta)


def _parse_positions(text: str | None) -> list[int]:
    if not text:
        return []
    out = []
    for pos, part in enumerate(text.split(",")):
        try:
            out.append(int(part))
        except ValueError:
            raise InputError(f"--cheat entry {pos} is not an integer: {part!r}") from None
    return out


def _load_alphabet(path: str) -> Alphabet:
    try:
        return Alphabet.from_json(jsonio.load(path))
    except (OSError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def cmd_mask(args) -> int:
    if args.bits is not None:
        bits = args.bits
        try:
            check_bits(bits)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        source = {"type": "bits"}
    elif args.params is not None:
        p = _parse_params(args.params)
        codec = CodecConfig(args.precision_bits)
        bits = encode_params(p, codec)
        source = {"type": "params", "alpha": p.alpha, "theta": p.theta, "precision_bits": codec.n_bits}
    elif args.alphabet is not None:
        if args.index is None:
            raise InputError("--alphabet needs --index")
        alphabet = _load_alphabet(args.alphabet)
        try:
            bits = encode_index(args.index, alphabet)
        except IndexError as exc:
            raise InputError(str(exc)) from None
        source = {"type": "alphabet", "size": alphabet.size, "index": args.index}
    else:
        raise InputError("give one of --bits, --params or --alphabet")
    register = mask_string(bits)
    report = {
        "schema_version": jsonio.SCHEMA_VERSION,
        "kind": "masked_register",
        "source": source,
        "length": len(register),
        "marginal_audit": marginal_audit(register),
        "pairs": register.to_json(),
        "metadata": _metadata(),
    }
    jsonio.write_report(report, args.out)
    return EXIT_OK


def _load_register(path: str) -> MaskedRegister:
    try:
        data = jsonio.load(path)
        pairs = data["pairs"] if isinstance(data, dict) else data
        return MaskedRegister.from_json(pairs)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: cannot read masked register ({exc})") from None


def cmd_unmask(args) -> int:
    register = _load_register(args.register)
    try:
        bits = unmask_string(register, args.tol)
    except AmbiguousState as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = {"schema_version": jsonio.SCHEMA_VERSION, "kind": "unmasked", "bits": bits}
    try:
        if args.as_params is not None:
            codec = CodecConfig(args.as_params)
            p = decode_params(bits, codec)
            report["params"] = {"alpha": p.alpha, "theta": p.theta}
            report["state"] = state_from_params(p)
            report["fidelity_floor"] = reconstruction_fidelity_floor(codec)
        if args.alphabet is not None:
            alphabet = _load_alphabet(args.alphabet)
            i = decode_index(bits, alphabet)
            report["index"] = i
            report["state"] = alphabet[i]
    except (ValueError, IndexError) as exc:
        raise InputError(str(exc)) from None
    report["metadata"] = _metadata()
    jsonio.write_report(report, args.out)
    return EXIT_OK


def _load_isometry(spec: str) -> Isometry:
    if spec in ISOMETRY_PRESETS:
        return ISOMETRY_PRESETS[spec]()
    try:
        return Isometry.load(spec)
    except (OSError, ValueError, TypeError) as exc:
        raise InputError(f"{spec}: {exc}") from None


def _load_states(spec: str):
    try:
        return resolve_states(spec)
    except (OSError, ValueError) as exc:
        raise InputError(f"{spec}: {exc}") from None


def cmd_verify(args) -> int:
    v = _load_isometry(args.isometry)
    states = _load_states(args.states)
    if states.dim != v.d_in:
        raise InputError(f"states have dimension {states.dim}, isometry expects {v.d_in}")
    eps = args.eps if args.eps is not None else DEFAULT_EPS
    verdict = is_masker(v, states, eps)
    report = {
        "schema_version": jsonio.SCHEMA_VERSION,
        "kind": "verify",
        "isometry": args.isometry,
        "states": states.label or args.states,
        **verdict.to_dict(),
        "metadata": _metadata(),
    }
    jsonio.write_report(report, args.out)
    return EXIT_OK if verdict.is_masker else EXIT_FALSE


def cmd_witness(args) -> int:
    if args.seed is None:
        raise InputError("witness requires --seed")
    states = _load_states(args.states)
    try:
        cfg = SearchConfig(
            seed=args.seed, restarts=args.restarts, max_iters=args.max_iters, tol=args.tol, d_b=args.db[0]
        )
        reports = sweep(states, args.db, cfg, workers=args.workers)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out = {
        "schema_version": jsonio.SCHEMA_VERSION,
        "kind": "witness_sweep",
        "states": states.label or args.states,
        "reports": [jsonio.strip_metadata(r.to_dict()) for r in reports],
        "metadata": {**_metadata(), "wall_time": [r.wall_time for r in reports]},
    }
    jsonio.write_report(out, args.out)
    return EXIT_OK


def cmd_commit_demo(args) -> int:
    cheat = _parse_positions(args.cheat)
    try:
        if args.params is not None:
            report = run_demo(
                params=_parse_params(args.params), codec=CodecConfig(args.precision_bits), cheat=cheat
            )
        elif args.alphabet is not None:
            if args.index is None:
                raise InputError("--alphabet needs --index")
            report = run_demo(alphabet=_load_alphabet(args.alphabet), index=args.index, cheat=cheat)
        else:
            raise InputError("give --params or --alphabet")
    except (ValueError, IndexError) as exc:
        raise InputError(str(exc)) from None
    report["metadata"] = _metadata()
    jsonio.write_report(report, args.out)
    return EXIT_OK if report["verdict"] == "accept" else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="64-bit seed (required by witness)")
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--eps", type=float, default=None, help="masking tolerance override")

    parser = argparse.ArgumentParser(prog="qmask", description="Masking known quantum states via their descriptions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mask", parents=[common], help="mask a bit-string, qubit parameters or an alphabet index")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--bits")
    src.add_argument("--params", metavar="ALPHA,THETA")
    src.add_argument("--alphabet", metavar="FILE")
    p.add_argument("--index", type=int)
    p.add_argument("--precision-bits", type=int, default=16)
    p.set_defaults(func=cmd_mask)

    p = sub.add_parser("unmask", parents=[common], help="Bell-decode a masked register file")
    p.add_argument("register")
    p.add_argument("--as-params", type=int, metavar="N", help="decode the bits as two N-bit angles")
    p.add_argument("--alphabet", metavar="FILE", help="decode the bits as an index into FILE")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_unmask)

    p = sub.add_parser("verify", parents=[common], help="check an isometry against a state set")
    p.add_argument("--isometry", required=True, help=f"JSON file or one of {sorted(ISOMETRY_PRESETS)}")
    p.add_argument("--states", required=True, help="alphabet JSON file or preset name")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("witness", parents=[common], help="search isometries for a masker")
    p.add_argument("--states", required=True)
    p.add_argument("--db", type=int, nargs="+", default=[2], choices=(2, 4))
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--max-iters", type=int, default=20_000)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("commit-demo", parents=[common], help="simulate commitment to a state description")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--params", metavar="ALPHA,THETA")
    src.add_argument("--alphabet", metavar="FILE")
    p.add_argument("--index", type=int)
    p.add_argument("--precision-bits", type=int, default=16)
    p.add_argument("--cheat", metavar="POS[,POS...]", help="phase-flip these pairs before opening")
    p.set_defaults(func=cmd_commit_demo)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
