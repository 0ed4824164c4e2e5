"""Gate-level reversible circuit IR.

Gate kinds and their canonical text spelling::

    x q | cx c t | ccx c1 c2 t | mcx c1 ... ck t | swap a b | reset q | measure q -> c

For controlled kinds the last operand is the target.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

GATE_KINDS = ("x", "cx", "ccx", "mcx", "swap", "reset", "measure")

_ARITY = {"x": 1, "cx": 2, "ccx": 3, "swap": 2, "reset": 1, "measure": 1}


class CircuitError(ValueError):
    """Raised for malformed gates or invalid circuit construction."""


class AllocationError(RuntimeError):
    """Raised when the qubit allocator cannot satisfy a request."""


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    clbit: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if self.kind not in GATE_KINDS:
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        if self.kind == "mcx":
            if len(self.qubits) < 2:
                raise CircuitError("mcx needs at least one control and a target")
        elif len(self.qubits) != _ARITY[self.kind]:
            raise CircuitError(f"{self.kind} takes {_ARITY[self.kind]} qubit operands")
        if (self.kind == "measure") != (self.clbit is not None):
            raise CircuitError("exactly the measure gate carries a classical bit")
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"duplicate operands in {self}")
        if any(q < 0 for q in self.qubits) or (self.clbit is not None and self.clbit < 0):
            raise CircuitError(f"negative index in {self}")

    @property
    def controls(self) -> tuple[int, ...]:
        if self.kind in ("cx", "ccx", "mcx"):
            return self.qubits[:-1]
        return ()

    @property
    def target(self) -> int:
        return self.qubits[-1]

    def remap(self, qubit_map: Mapping[int, int]) -> Gate:
        return Gate(self.kind, tuple(qubit_map[q] for q in self.qubits), self.clbit)

    def __str__(self) -> str:
        ops = " ".join(str(q) for q in self.qubits)
        if self.kind == "measure":
            return f"measure {ops} -> {self.clbit}"
        return f"{self.kind} {ops}"


def X(q: int) -> Gate:
    return Gate("x", (q,))


def CNOT(control: int, target: int) -> Gate:
    return Gate("cx", (control, target))


def TOFFOLI(c1: int, c2: int, target: int) -> Gate:
    return Gate("ccx", (c1, c2, target))


def MCX(controls: Sequence[int], target: int) -> Gate:
    return Gate("mcx", (*controls, target))


def SWAP(a: int, b: int) -> Gate:
    return Gate("swap", (a, b))


def RESET(q: int) -> Gate:
    return Gate("reset", (q,))


def MEASURE(q: int, clbit: int) -> Gate:
    return Gate("measure", (q,), clbit)


@dataclass
class Circuit:
    qubit_count: int
    clbit_count: int = 0
    gates: list[Gate] = field(default_factory=list)
    label: str | None = None

    def __post_init__(self) -> None:
        gates, self.gates = list(self.gates), []
        self.extend(gates)

    def validate(self, gate: Gate) -> None:
        for q in gate.qubits:
            if q >= self.qubit_count:
                raise CircuitError(
                    f"qubit index {q} out of range in '{gate}' ({self.qubit_count} qubits)"
                )
        if gate.clbit is not None and gate.clbit >= self.clbit_count:
            raise CircuitError(
                f"classical bit {gate.clbit} out of range in '{gate}' ({self.clbit_count} clbits)"
            )

    def append(self, gate: Gate) -> Circuit:
        self.validate(gate)
        self.gates.append(gate)
        return self

    def extend(self, gates: Iterable[Gate]) -> Circuit:
        for g in gates:
            self.append(g)
        return self

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def copy(self) -> Circuit:
        return Circuit(self.qubit_count, self.clbit_count, list(self.gates), self.label)


def empty(qubit_count: int, clbit_count: int = 0) -> Circuit:
    return Circuit(qubit_count, clbit_count)


def compose(a: Circuit, b: Circuit, qubit_map: Mapping[int, int] | None = None) -> Circuit:
    """Return ``a`` followed by ``b`` with ``b``'s qubits renamed via ``qubit_map``.

    Classical bits are shared by index.  A missing map is the identity.
    """
    if qubit_map is None:
        qubit_map = {q: q for q in range(b.qubit_count)}
    qubit_map = dict(qubit_map)
    if len(set(qubit_map.values())) != len(qubit_map):
        raise CircuitError("qubit_map is not injective")
    missing = {q for g in b.gates for q in g.qubits} - qubit_map.keys()
    if missing:
        raise CircuitError(f"qubit_map does not cover qubits {sorted(missing)}")
    out = a.copy()
    for g in b.gates:
        out.append(g.remap(qubit_map))
    return out


class QubitAllocator:
    """Lowest-index-first qubit pool that recycles qubits through RESET."""

    def __init__(self, capacity: int):
        self.capacity = capacity
        self.free_list: list[int] = []
        self.live: set[int] = set()
        self.high_water_mark = 0
        self._next_fresh = 0

    def _grab(self, q: int) -> int:
        self.live.add(q)
        self.high_water_mark = max(self.high_water_mark, len(self.live))
        return q

    def alloc(self) -> int:
        if self.free_list:
            return self._grab(self.free_list.pop(0))
        if self._next_fresh >= self.capacity:
            raise AllocationError(f"qubit capacity {self.capacity} exhausted")
        q = self._next_fresh
        self._next_fresh += 1
        return self._grab(q)

    def alloc_many(self, n: int) -> list[int]:
        return [self.alloc() for _ in range(n)]

    def claim(self, q: int) -> int:
        """Allocate one specific free qubit."""
        if q in self.free_list:
            self.free_list.remove(q)
            return self._grab(q)
        if q in self.live or q >= self.capacity:
            raise AllocationError(f"qubit {q} is not available")
        # Never-used qubits below q become free (they are still |0>).
        for fresh in range(self._next_fresh, q):
            bisect.insort(self.free_list, fresh)
        self._next_fresh = max(self._next_fresh, q + 1)
        return self._grab(q)

    def is_free(self, q: int) -> bool:
        return q in self.free_list or (self._next_fresh <= q < self.capacity)

    def release(self, q: int, circuit: Circuit) -> Circuit:
        if q not in self.live:
            raise AllocationError(f"qubit {q} is not live")
        circuit.append(RESET(q))
        self.live.remove(q)
        bisect.insort(self.free_list, q)
        return circuit

    def release_many(self, qubits: Iterable[int], circuit: Circuit) -> Circuit:
        for q in qubits:
            self.release(q, circuit)
        return circuit


@dataclass(frozen=True)
class LintViolation:
    gate_index: int
    qubit: int
    gate: Gate

    def __str__(self) -> str:
        return f"gate {self.gate_index} '{self.gate}' reads clean qubit {self.qubit}"


def lint(circuit: Circuit, inputs: Iterable[int] = ()) -> list[LintViolation]:
    """Flag controls that read a qubit known to be |0> (fresh or just reset).

    ``inputs`` are qubits the caller prepares, so they start out written.
    """
    clean = set(range(circuit.qubit_count)) - set(inputs)
    violations = []
    for i, g in enumerate(circuit.gates):
        for c in g.controls:
            if c in clean:
                violations.append(LintViolation(i, c, g))
        if g.kind == "reset":
            clean.add(g.target)
        elif g.kind == "swap":
            a, b = g.qubits
            a_clean, b_clean = a in clean, b in clean
            clean.discard(a)
            clean.discard(b)
            if a_clean:
                clean.add(b)
            if b_clean:
                clean.add(a)
        elif g.kind != "measure":
            clean.discard(g.target)
    return violations
