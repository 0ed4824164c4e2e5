import importlib.util

import pytest
from hypothesis import given, settings, strategies as st

from qminiaes.circuit import CNOT, MCX, MEASURE, RESET, Circuit, Gate
from qminiaes.emit import ParseError, export, export_qasm, export_script, export_text, parse_text
from qminiaes.reference import Block
from qminiaes.synth import SYNTH_TARGETS, assemble_decrypt, assemble_encrypt, synth_target

KEY = Block.parse("1100 0011 1111 0000")


def all_synthesized():
    out = [synth_target(t, key=KEY, plaintext=KEY, cipher=KEY) for t in SYNTH_TARGETS]
    out += [synth_target(t, key=KEY, share=True) for t in ("sbox", "inv-sbox", "encrypt")]
    out.append(assemble_encrypt(None, None, "key_register")[0])
    out.append(assemble_decrypt(KEY, None, "key_register")[0])
    return out


@st.composite
def random_circuits(draw):
    n = draw(st.integers(4, 10))
    m = draw(st.integers(0, 3))
    c = Circuit(n, m, label=draw(st.none() | st.sampled_from(["demo", "a b"])))
    for _ in range(draw(st.integers(0, 30))):
        kind = draw(st.sampled_from(["x", "cx", "ccx", "mcx", "swap", "reset"] + ["measure"] * bool(m)))
        arity = {"x": 1, "reset": 1, "measure": 1, "cx": 2, "swap": 2, "ccx": 3}.get(kind)
        if arity is None:
            arity = draw(st.integers(4, n))
        qs = tuple(draw(st.permutations(range(n)))[:arity])
        c.append(Gate(kind, qs, draw(st.integers(0, m - 1)) if kind == "measure" else None))
    return c


def test_exact_text():
    assert export_text(Circuit(2, 0, [CNOT(0, 1)])) == "qubits 2\nclbits 0\ncx 0 1\n"


def test_text_with_label_and_measure():
    c = Circuit(2, 1, [RESET(0), MEASURE(1, 0)], label="tiny")
    assert export_text(c) == "# tiny\nqubits 2\nclbits 1\nreset 0\nmeasure 1 -> 0\n"


def test_roundtrip_synthesized():
    for c in all_synthesized():
        again = parse_text(export_text(c))
        assert again == c
        assert export_text(again) == export_text(c)


@settings(max_examples=100)
@given(random_circuits())
def test_roundtrip_random(c):
    assert parse_text(export_text(c)) == c


@pytest.mark.parametrize("text, line", [
    ("qubits 2\nclbits 0\ncx 0 5\n", 3),
    ("qubits 2\nclbits 0\nx 0\nfoo 1\n", 4),
    ("qubit 2\nclbits 0\n", 1),
    ("qubits 2\nclbits 0\n\nmeasure 0 1\n", 4),
    ("qubits 2\nclbits 0\ncx 0 a\n", 3),
])
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(ParseError) as err:
        parse_text(text)
    assert err.value.lineno == line
    assert str(err.value).startswith(f"line {line}:")


def test_qasm_shape():
    c = Circuit(5, 1, [RESET(0), MCX((0, 1, 2), 3), MEASURE(3, 0)])
    q = export_qasm(c).splitlines()
    assert q[:4] == ["OPENQASM 3.0;", 'include "stdgates.inc";', "qubit[5] q;", "bit[1] c;"]
    assert "reset q[0];" in q
    assert "ctrl(3) @ x q[0], q[1], q[2], q[3];" in q
    assert "c[0] = measure q[3];" in q


@pytest.mark.skipif(importlib.util.find_spec("openqasm3") is None, reason="openqasm3 not installed")
def test_qasm_parses():
    import openqasm3

    for c in all_synthesized()[:4]:
        program = openqasm3.parse(export_qasm(c))
        assert len(program.statements) >= len(c.gates)


def test_script_one_call_per_gate():
    c, _ = assemble_encrypt(KEY, KEY)
    script = export_script(c)
    calls = [ln for ln in script.splitlines() if ln.startswith("qc.")]
    assert len(calls) == len(c.gates)
    assert script.count("\n") < len(c.gates) + 10
    compile(script, "<script>", "exec")
    with pytest.raises(ValueError):
        export_script(c, "cirq")


@pytest.mark.parametrize("fmt", ["text", "qasm3", "qiskit-py"])
def test_exports_deterministic(fmt):
    a = export(assemble_encrypt(KEY, KEY, share=True)[0], fmt)
    b = export(assemble_encrypt(KEY, KEY, share=True)[0], fmt)
    assert a.encode() == b.encode()


def test_unknown_format():
    with pytest.raises(ValueError):
        export(Circuit(1), "svg")
