"""Circuit serialization: canonical text (both ways), OpenQASM 3, Qiskit script."""

from __future__ import annotations

from qminiaes.circuit import Circuit, CircuitError, Gate

EXPORT_FORMATS = ("text", "qasm3", "qiskit-py")


class ParseError(CircuitError):
    def __init__(self, lineno: int, reason: str):
        super().__init__(f"line {lineno}: {reason}")
        self.lineno = lineno
        self.reason = reason


def export_text(circuit: Circuit) -> str:
    lines = [f"qubits {circuit.qubit_count}", f"clbits {circuit.clbit_count}"]
    if circuit.label:
        lines.insert(0, f"# {circuit.label}")
    lines += [str(g) for g in circuit.gates]
    return "\n".join(lines) + "\n"


def _header(lineno: int, line: str, word: str) -> int:
    parts = line.split()
    if len(parts) != 2 or parts[0] != word or not parts[1].isdigit():
        raise ParseError(lineno, f"expected '{word} N', got {line!r}")
    return int(parts[1])


def parse_text(text: str) -> Circuit:
    label = None
    body: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line, _, comment = raw.partition("#")
        line = line.strip()
        if not line:
            if comment.strip() and label is None and not body:
                label = comment.strip()
            continue
        body.append((lineno, line))
    if len(body) < 2:
        raise ParseError(len(text.splitlines()) or 1, "missing 'qubits' / 'clbits' header")
    circuit = Circuit(_header(*body[0], "qubits"), _header(*body[1], "clbits"), label=label)

    for lineno, line in body[2:]:
        parts = line.split()
        kind, args = parts[0], parts[1:]
        clbit = None
        if kind == "measure":
            if len(args) != 3 or args[1] != "->":
                raise ParseError(lineno, "expected 'measure q -> c'")
            args, clbit = [args[0]], args[2]
        try:
            qubits = tuple(int(a) for a in args)
            clbit = None if clbit is None else int(clbit)
        except ValueError:
            raise ParseError(lineno, f"non-integer operand in {line!r}") from None
        try:
            circuit.append(Gate(kind, qubits, clbit))
        except CircuitError as exc:
            raise ParseError(lineno, str(exc)) from None
    return circuit


def export_qasm(circuit: Circuit) -> str:
    out = ["OPENQASM 3.0;", 'include "stdgates.inc";', f"qubit[{circuit.qubit_count}] q;"]
    if circuit.clbit_count:
        out.append(f"bit[{circuit.clbit_count}] c;")
    for g in circuit.gates:
        ops = ", ".join(f"q[{q}]" for q in g.qubits)
        if g.kind == "measure":
            out.append(f"c[{g.clbit}] = measure {ops};")
        elif g.kind == "mcx":
            out.append(f"ctrl({len(g.controls)}) @ x {ops};")
        else:
            out.append(f"{g.kind} {ops};")
    return "\n".join(out) + "\n"


def export_script(circuit: Circuit, format: str = "qiskit-py") -> str:
    """Python source that rebuilds ``circuit`` with Qiskit, one call per gate."""
    if format != "qiskit-py":
        raise ValueError(f"unsupported script format {format!r}")
    out = [
        "from qiskit import QuantumCircuit",
        "",
        f"qc = QuantumCircuit({circuit.qubit_count}, {circuit.clbit_count})",
    ]
    for g in circuit.gates:
        q = g.qubits
        if g.kind == "mcx":
            out.append(f"qc.mcx({list(g.controls)}, {g.target})")
        elif g.kind == "measure":
            out.append(f"qc.measure({q[0]}, {g.clbit})")
        else:
            out.append(f"qc.{g.kind}({', '.join(map(str, q))})")
    out += ["", "print(qc.count_ops())", "print(qc)"]
    return "\n".join(out) + "\n"


def export(circuit: Circuit, format: str) -> str:
    if format == "text":
        return export_text(circuit)
    if format == "qasm3":
        return export_qasm(circuit)
    if format == "qiskit-py":
        return export_script(circuit)
    raise ValueError(f"unknown export format {format!r}")
