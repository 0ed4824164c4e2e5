"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
``QMINIAES_OUT_DIR`` sets where ``synth`` and ``export`` write when no
``--out`` is given (otherwise they print to stdout).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from pathlib import Path

from qminiaes import anf, cost, emit, sim, synth, verify
from qminiaes.reference import Block, decrypt, encrypt

OUT_DIR_ENV = "QMINIAES_OUT_DIR"

EXTENSIONS = {"text": ".circ", "qasm3": ".qasm", "qiskit-py": ".py"}


class UsageError(Exception):
    pass


def block_arg(text: str) -> Block:
    try:
        return Block.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _print_json(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _write_output(text: str, out: str | None, default_name: str) -> None:
    if out is None and os.environ.get(OUT_DIR_ENV):
        out = str(Path(os.environ[OUT_DIR_ENV]) / default_name)
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    print(f"wrote {path}", file=sys.stderr)


def _load_circuit(path: str):
    try:
        return emit.parse_text(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"--circuit: {exc}") from None
    except emit.ParseError as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_encrypt(args) -> int:
    trace = encrypt(args.plaintext, args.key)
    if args.trace:
        _print_json(trace.as_dict())
    elif args.json:
        _print_json({"cipher": str(trace.cipher)})
    else:
        print(trace.cipher)
    return 0


def cmd_decrypt(args) -> int:
    p = decrypt(args.cipher, args.key)
    if args.json:
        _print_json({"plaintext": str(p)})
    else:
        print(p)
    return 0


def cmd_anf(args) -> int:
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            table = anf.load_table(args.sbox)
    except (OSError, ValueError) as exc:
        raise UsageError(f"--sbox: {exc}") from None
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    system = anf.derive_anf_system(table)
    if args.json:
        _print_json({
            "equations": system.equations(),
            "degree": anf.algebraic_degree(system),
            "monomials": [p.sorted_monomials() for p in system.polys],
        })
    else:
        print("\n".join(system.equations()))
    return 0


def _synth_circuit(args):
    needs_key = args.target in ("round1", "encrypt", "decrypt")
    if needs_key and args.key is None and args.mode == "classical_key":
        raise UsageError(f"synth {args.target}: --key is required in classical_key mode")
    return synth.synth_target(
        args.target,
        key=args.key,
        plaintext=args.plaintext,
        cipher=args.cipher,
        mode=args.mode,
        share=args.share,
        relocation=args.relocation,
    )


def cmd_synth(args) -> int:
    circuit = _synth_circuit(args)
    _write_output(emit.export_text(circuit), args.out, f"{args.target}.circ")
    return 0


def cmd_simulate(args) -> int:
    circuit = _load_circuit(args.circuit)
    bits = args.input.replace(" ", "") if args.input else ""
    if set(bits) - {"0", "1"} or len(bits) > circuit.qubit_count:
        raise UsageError(
            f"--input: expected at most {circuit.qubit_count} binary digits (qubit 0 first)"
        )
    initial = [int(b) for b in bits.ljust(circuit.qubit_count, "0")]
    if args.block is not None:
        if circuit.qubit_count < 16:
            raise UsageError("--block needs a circuit with at least 16 qubits")
        initial[:16] = [a ^ b for a, b in zip(initial[:16], args.block.bits())]
    final = sim.run_basis(circuit, initial)
    qubits = "".join(map(str, final.bits))
    clbits = "".join(map(str, final.classical_bits))
    if args.json:
        out = {"qubits": qubits, "clbits": clbits}
        if circuit.clbit_count == 16:
            out["block"] = str(Block.from_bits(final.classical_bits))
        _print_json(out)
    else:
        print(f"qubits {qubits}")
        print(f"clbits {clbits}")
        if circuit.clbit_count == 16:
            print(f"block  {Block.from_bits(final.classical_bits)}")
    return 0


def _weights(args) -> cost.CostWeights:
    return cost.CostWeights(args.swap_weight, args.toffoli_weight, args.mcx_weight)


def cmd_resources(args) -> int:
    circuit = _load_circuit(args.circuit)
    weights = _weights(args)
    report = cost.histogram(circuit, weights)
    out = report.as_dict()
    out["weights"] = vars(weights)
    out["published_stage_counts"] = cost.PUBLISHED_STAGE_COUNTS
    _print_json(out)
    return 0


def cmd_grover_cost(args) -> int:
    weights = _weights(args)
    if args.circuit:
        report = cost.histogram(_load_circuit(args.circuit), weights)
    else:
        report = cost.ResourceReport.from_counts(
            {"cnot": args.cnot, "toffoli": args.toffoli, "swap": args.swap, "x": args.x_count},
            dag_depth=args.depth,
            qubit_count=args.qubits,
            weights=weights,
        )
    est = cost.grover_estimate(report, args.key_bits, args.not_count, weights)
    out = est.as_dict()
    out["report"] = report.as_dict()
    out["weights"] = vars(weights)
    _print_json(out)
    return 0


def cmd_export(args) -> int:
    circuit = _load_circuit(args.circuit)
    name = Path(args.circuit).stem + EXTENSIONS[args.format]
    _write_output(emit.export(circuit, args.format), args.out, name)
    return 0


def cmd_verify(args) -> int:
    reports: dict[str, sim.CheckReport] = {}
    if args.mode == "sbox":
        reports = verify.verify_sbox(args.share)
    elif args.mode == "mul":
        reports = verify.verify_mul()
    elif args.mode == "mixcolumn":
        reports["mixcolumn"] = verify.verify_mixcolumn(args.samples, args.seed, args.exhaustive)
    elif args.mode == "encrypt":
        if args.exhaustive_plaintexts or args.exhaustive:
            if args.key is None:
                raise UsageError("--exhaustive-plaintexts needs --key")
            reports["encrypt"] = verify.sweep_plaintexts(args.key, args.key_mode, args.share)
        else:
            reports["encrypt"] = verify.verify_encrypt_pairs(
                args.samples, args.seed, args.key_mode, args.share
            )
    elif args.mode == "decrypt":
        reports["decrypt"] = verify.verify_decrypt_pairs(
            args.samples, args.seed, args.key_mode, args.share
        )
    ok = all(r.ok for r in reports.values())
    if args.json:
        _print_json({
            name: {"passed": r.passed, "total": r.total, "mismatches": r.mismatches[:20]}
            for name, r in reports.items()
        } | {"ok": ok})
    else:
        for name, r in reports.items():
            print(f"{name}: {r} {'PASS' if r.ok else 'FAIL'}")
            for inp, want, got in r.mismatches[:10]:
                print(f"  input {inp}: expected {want}, got {got}")
    return 0 if ok else 1


def _add_weight_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--swap-weight", type=int, default=3)
    p.add_argument("--toffoli-weight", type=int, default=6)
    p.add_argument("--mcx-weight", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qminiaes", description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", help="structured JSON output")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="structured JSON output")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, **kw) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], **kw)

    p = add("encrypt", help="classical reference encryption")
    p.add_argument("--plaintext", type=block_arg, required=True)
    p.add_argument("--key", type=block_arg, required=True)
    p.add_argument("--trace", action="store_true", help="print every test-vector column")
    p.set_defaults(func=cmd_encrypt)

    p = add("decrypt", help="classical reference decryption")
    p.add_argument("--cipher", type=block_arg, required=True)
    p.add_argument("--key", type=block_arg, required=True)
    p.set_defaults(func=cmd_decrypt)

    p = add("anf", help="algebraic normal form of an S-box table")
    p.add_argument("--sbox", default="builtin:forward",
                   help="file, builtin:forward or builtin:inverse")
    p.set_defaults(func=cmd_anf)

    p = add("synth", help="synthesize a circuit in canonical text form")
    p.add_argument("target", choices=synth.SYNTH_TARGETS)
    p.add_argument("--key", type=block_arg)
    p.add_argument("--plaintext", type=block_arg)
    p.add_argument("--cipher", type=block_arg)
    p.add_argument("--mode", choices=synth.MODES, default="classical_key")
    p.add_argument("--share", action="store_true", help="share degree-2 sub-products")
    p.add_argument("--relocation", choices=synth.RELOCATIONS, default="cnot")
    p.add_argument("--out")
    p.set_defaults(func=cmd_synth)

    p = add("simulate", help="run a circuit file on a basis input")
    p.add_argument("--circuit", required=True)
    p.add_argument("--input", default="", help="qubit bits, qubit 0 first; missing bits are 0")
    p.add_argument("--block", type=block_arg,
                   help="load a block onto qubits 0-15 (state bit b on qubit b)")
    p.set_defaults(func=cmd_simulate)

    p = add("resources", help="gate census, depth and CNOT-equivalent as JSON")
    p.add_argument("--circuit", required=True)
    _add_weight_flags(p)
    p.set_defaults(func=cmd_resources)

    p = add("grover-cost", help="Grover key-search cost as JSON")
    p.add_argument("--key-bits", type=int, default=16)
    p.add_argument("--circuit", help="take counts from a circuit file")
    p.add_argument("--cnot", type=int, default=0)
    p.add_argument("--toffoli", type=int, default=0)
    p.add_argument("--swap", type=int, default=0)
    p.add_argument("--x-count", type=int, default=0)
    p.add_argument("--not-count", type=int, default=None,
                   help="NOT gates added to the count (default: the X count)")
    p.add_argument("--depth", type=int, default=0)
    p.add_argument("--qubits", type=int, default=0)
    _add_weight_flags(p)
    p.set_defaults(func=cmd_grover_cost)

    p = add("export", help="convert a circuit file")
    p.add_argument("--circuit", required=True)
    p.add_argument("--format", choices=emit.EXPORT_FORMATS, default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)

    p = add("verify", help="circuit vs reference equivalence sweeps")
    p.add_argument("--mode", choices=("sbox", "mul", "mixcolumn", "encrypt", "decrypt"),
                   required=True)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--exhaustive-plaintexts", action="store_true")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--key", type=block_arg)
    p.add_argument("--key-mode", choices=synth.MODES, default="classical_key")
    p.add_argument("--share", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
