"""Deterministic simulation of X/CNOT/Toffoli/SWAP/RESET circuits.

Circuits in this gate set permute computational basis states (RESET aside),
so a basis input is just a bit vector.  :func:`run_batch` evaluates many
inputs at once with one numpy row per qubit; :func:`run_statevector` is a
small dense cross-check that also catches resets of undetermined qubits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from qminiaes.anf import TruthTable
from qminiaes.circuit import Circuit


class SimulationError(ValueError):
    pass


class DirtyResetError(SimulationError):
    """A RESET hit a qubit that was not in a definite basis state."""


@dataclass
class BasisState:
    bits: list[int]
    classical_bits: list[int] = field(default_factory=list)

    @classmethod
    def zeros(cls, circuit: Circuit) -> BasisState:
        return cls([0] * circuit.qubit_count, [0] * circuit.clbit_count)

    @classmethod
    def from_assignment(cls, circuit: Circuit, assignment: dict[int, int]) -> BasisState:
        state = cls.zeros(circuit)
        for q, b in assignment.items():
            state.bits[q] = b & 1
        return state

    def read(self, qubits: Sequence[int]) -> int:
        """Pack the given qubits into an integer, first qubit = LSB."""
        return sum(self.bits[q] << i for i, q in enumerate(qubits))


def run_basis(circuit: Circuit, initial: BasisState | Sequence[int] | None = None) -> BasisState:
    if initial is None:
        initial = BasisState.zeros(circuit)
    elif not isinstance(initial, BasisState):
        initial = BasisState(list(initial), [0] * circuit.clbit_count)
    if len(initial.bits) != circuit.qubit_count:
        raise SimulationError(
            f"initial state has {len(initial.bits)} bits, circuit has {circuit.qubit_count} qubits"
        )
    if len(initial.classical_bits) != circuit.clbit_count:
        raise SimulationError("classical register size does not match the circuit")
    bits = [b & 1 for b in initial.bits]
    cbits = list(initial.classical_bits)
    for g in circuit.gates:
        q = g.qubits
        k = g.kind
        if k == "x":
            bits[q[0]] ^= 1
        elif k == "cx":
            bits[q[1]] ^= bits[q[0]]
        elif k == "ccx":
            bits[q[2]] ^= bits[q[0]] & bits[q[1]]
        elif k == "mcx":
            bits[q[-1]] ^= int(all(bits[c] for c in q[:-1]))
        elif k == "swap":
            bits[q[0]], bits[q[1]] = bits[q[1]], bits[q[0]]
        elif k == "reset":
            bits[q[0]] = 0
        elif k == "measure":
            cbits[g.clbit] = bits[q[0]]
    return BasisState(bits, cbits)


def run_batch(circuit: Circuit, inputs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Run many basis inputs at once.

    ``inputs`` has shape ``(qubit_count, batch)``; the result is the final
    qubit array of the same shape and a ``(clbit_count, batch)`` array.
    """
    state = np.array(inputs, dtype=bool, copy=True)
    if state.ndim != 2 or state.shape[0] != circuit.qubit_count:
        raise SimulationError(
            f"expected inputs of shape ({circuit.qubit_count}, batch), got {state.shape}"
        )
    cbits = np.zeros((circuit.clbit_count, state.shape[1]), dtype=bool)
    for g in circuit.gates:
        q = g.qubits
        k = g.kind
        if k == "x":
            np.logical_not(state[q[0]], out=state[q[0]])
        elif k == "cx":
            state[q[1]] ^= state[q[0]]
        elif k == "ccx":
            state[q[2]] ^= state[q[0]] & state[q[1]]
        elif k == "mcx":
            state[q[-1]] ^= np.logical_and.reduce(state[list(q[:-1])], axis=0)
        elif k == "swap":
            state[[q[0], q[1]]] = state[[q[1], q[0]]]
        elif k == "reset":
            state[q[0]] = False
        elif k == "measure":
            cbits[g.clbit] = state[q[0]]
    return state, cbits


def pack_values(values: np.ndarray, qubits: Sequence[int], qubit_count: int) -> np.ndarray:
    """Lay integer ``values`` out on ``qubits`` (LSB first) as a batch input."""
    values = np.asarray(values, dtype=np.int64)
    inputs = np.zeros((qubit_count, values.size), dtype=bool)
    for i, q in enumerate(qubits):
        inputs[q] = (values >> i) & 1
    return inputs


def unpack_values(rows: np.ndarray, indices: Sequence[int]) -> np.ndarray:
    """Read rows ``indices`` of a batch result back into integers (LSB first)."""
    out = np.zeros(rows.shape[1], dtype=np.int64)
    for i, r in enumerate(indices):
        out |= rows[r].astype(np.int64) << i
    return out


@dataclass
class StatevectorResult:
    amplitudes: np.ndarray
    resets: int  # all of them clean; a dirty one raises

    def basis_index(self) -> int:
        """Index of the single nonzero amplitude."""
        nz = np.flatnonzero(np.abs(self.amplitudes) > 1e-9)
        if nz.size != 1:
            raise SimulationError(f"state is spread over {nz.size} basis states")
        return int(nz[0])


def run_statevector(
    circuit: Circuit,
    initial: int | np.ndarray = 0,
    max_qubits: int = 16,
    tol: float = 1e-9,
) -> StatevectorResult:
    """Dense simulation; qubit ``q`` is bit ``q`` of the basis index.

    ``initial`` is a basis index or a full amplitude vector.

    RESET is a projective Z measurement followed by a conditional flip.  If
    the outcome is not determined to within ``tol`` a :class:`DirtyResetError`
    is raised.
    """
    n = circuit.qubit_count
    if n > max_qubits:
        raise SimulationError(f"{n} qubits exceeds the statevector limit of {max_qubits}")
    dim = 1 << n
    if np.isscalar(initial):
        amps = np.zeros(dim, dtype=complex)
        amps[int(initial)] = 1.0
    else:
        amps = np.asarray(initial, dtype=complex).copy()
        if amps.shape != (dim,):
            raise SimulationError(f"expected {dim} amplitudes, got shape {amps.shape}")
    idx = np.arange(dim)
    resets = 0
    for g in circuit.gates:
        k = g.kind
        if k == "measure":
            continue
        if k == "reset":
            resets += 1
            bit = 1 << g.target
            p1 = float(np.sum(np.abs(amps[(idx & bit) != 0]) ** 2))
            if tol < p1 < 1 - tol:
                raise DirtyResetError(
                    f"reset of qubit {g.target} with P(1) = {p1:.3g}"
                )
            if p1 >= 1 - tol:
                amps = amps[idx ^ bit]
            continue
        if k == "swap":
            a, b = g.qubits
            ba, bb = (idx >> a) & 1, (idx >> b) & 1
            perm = idx ^ ((ba ^ bb) << a) ^ ((ba ^ bb) << b)
        else:
            cmask = sum(1 << c for c in g.controls)
            fire = (idx & cmask) == cmask
            perm = np.where(fire, idx ^ (1 << g.target), idx)
        # Permutation gates are involutions, so gathering by perm applies them.
        amps = amps[perm]
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > tol:
            raise SimulationError(f"norm drifted to {norm}")
    return StatevectorResult(amps, resets)


@dataclass
class CheckReport:
    total: int
    mismatches: list[tuple[int, int, int]]  # (input, expected, got)

    @property
    def passed(self) -> int:
        return self.total - len(self.mismatches)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def __str__(self) -> str:
        return f"{self.passed}/{self.total} pass"


def exhaustive_check(
    circuit: Circuit,
    input_qubits: Sequence[int],
    expected: TruthTable,
    output_qubits: Sequence[int],
) -> CheckReport:
    """Compare ``output_qubits`` against ``expected`` on every input value."""
    if len(input_qubits) != expected.input_bits or len(output_qubits) != expected.output_bits:
        raise SimulationError("qubit lists do not match the truth table widths")
    values = np.arange(1 << expected.input_bits)
    final, _ = run_batch(circuit, pack_values(values, input_qubits, circuit.qubit_count))
    got = unpack_values(final, output_qubits)
    want = np.array(expected.outputs)
    bad = np.flatnonzero(got != want)
    return CheckReport(
        int(values.size), [(int(v), int(want[v]), int(got[v])) for v in bad]
    )
