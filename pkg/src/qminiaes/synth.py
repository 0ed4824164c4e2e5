"""Compile ANF systems and the Mini-AES round structure into reversible circuits.

Qubit conventions: state bit ``b`` of a block is bit ``b % 4`` of nibble
``b // 4``; an assembled circuit measures state bit ``b`` into classical bit
``b``.  Work qubits come from a :class:`~qminiaes.circuit.QubitAllocator`, so
every recycled qubit passes through a RESET first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from qminiaes.anf import (
    FORWARD_SBOX,
    INVERSE_SBOX,
    AnfPolynomial,
    AnfSystem,
    derive_anf_system,
)
from qminiaes.circuit import (
    CNOT,
    MEASURE,
    RESET,
    SWAP,
    TOFFOLI,
    X,
    AllocationError,
    Circuit,
    CircuitError,
    Gate,
    QubitAllocator,
)
from qminiaes.reference import ROUND_CONSTANTS, Block, key_schedule

ROUND1_QUBITS = 24
TOTAL_QUBITS = 28
KEY_REGISTER_QUBITS = 16

MODES = ("classical_key", "key_register")
RELOCATIONS = ("cnot", "swap", "none")

# Row r lists the source bits XOR-ed into destination bit r.
MUL2_ROWS = ((3,), (0, 3), (1,), (2,))
MUL3_ROWS = ((0, 3), (0, 1, 3), (1, 2), (2, 3))


class SynthesisError(CircuitError):
    pass


class BudgetError(SynthesisError):
    """An assembly exceeded its qubit budget."""


@lru_cache(maxsize=None)
def forward_system() -> AnfSystem:
    return derive_anf_system(FORWARD_SBOX)


@lru_cache(maxsize=None)
def inverse_system() -> AnfSystem:
    return derive_anf_system(INVERSE_SBOX)


@dataclass(frozen=True)
class SboxLayout:
    input_qubits: tuple[int, ...]
    ancilla: int
    equation_target: int
    memory_qubits: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "input_qubits", tuple(self.input_qubits))
        object.__setattr__(self, "memory_qubits", tuple(self.memory_qubits))
        used = [*self.input_qubits, self.ancilla, self.equation_target, *self.memory_qubits]
        if len(set(used)) != len(used):
            raise SynthesisError(f"S-box layout reuses a qubit: {used}")

    @property
    def qubits(self) -> list[int]:
        return [*self.input_qubits, self.ancilla, self.equation_target, *self.memory_qubits]


# Inputs 0-3, ancilla 4, equation target 5, output register 6-9.
DEFAULT_SBOX_LAYOUT = SboxLayout((0, 1, 2, 3), 4, 5, (6, 7, 8, 9))


def _bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def _share_plan(monomials: set[int], num_vars: int) -> list[tuple[int, list[int], bool]]:
    """Greedily group degree-3 monomials around a common degree-2 factor.

    Returns ``(pair_mask, degree3_users, pair_is_a_monomial)`` groups and
    removes grouped monomials from ``monomials``.  A group computes its pair
    once into the ancilla, so it costs ``1 + len(users)`` Toffolis against
    ``2 * len(users)`` (plus one if the pair itself is a term) unshared.
    """
    groups = []
    while True:
        best = None
        for i, j in combinations(range(num_vars), 2):
            pair = 1 << i | 1 << j
            users = sorted(m for m in monomials if m.bit_count() == 3 and m & pair == pair)
            has_pair = pair in monomials
            saving = len(users) + has_pair - 1
            if users and saving > 0 and (best is None or saving > best[0]):
                best = (saving, pair, users, has_pair)
        if best is None:
            return groups
        _, pair, users, has_pair = best
        monomials.difference_update(users)
        monomials.discard(pair)
        groups.append((pair, users, has_pair))


def synth_anf_equation(
    poly: AnfPolynomial, layout: SboxLayout, share: bool = False
) -> list[Gate]:
    """XOR the value of ``poly`` on the layout's inputs into its equation target.

    Degree-3 terms use the ancilla and reset it afterwards.  With ``share``
    enabled, degree-3 terms with a common pair of variables reuse one
    ancilla product.
    """
    inputs = layout.input_qubits
    anc, tgt = layout.ancilla, layout.equation_target
    if poly.num_vars > len(inputs) and any(m >> len(inputs) for m in poly.monomials):
        raise SynthesisError("polynomial uses variables outside the layout inputs")
    if poly.degree > 3:
        raise SynthesisError(f"degree {poly.degree} needs more than one ancilla")

    remaining = set(poly.monomials)
    groups = _share_plan(remaining, len(inputs)) if share else []

    gates: list[Gate] = []
    for m in sorted(remaining):
        v = [inputs[i] for i in _bits(m)]
        if not v:
            gates.append(X(tgt))
        elif len(v) == 1:
            gates.append(CNOT(v[0], tgt))
        elif len(v) == 2:
            gates.append(TOFFOLI(v[0], v[1], tgt))
        else:
            gates += [TOFFOLI(v[0], v[1], anc), TOFFOLI(anc, v[2], tgt), RESET(anc)]
    for pair, users, has_pair in groups:
        i, j = _bits(pair)
        gates.append(TOFFOLI(inputs[i], inputs[j], anc))
        if has_pair:
            gates.append(CNOT(anc, tgt))
        for m in users:
            (k,) = _bits(m & ~pair)
            gates.append(TOFFOLI(anc, inputs[k], tgt))
        gates.append(RESET(anc))
    return gates


def sbox_gates(system: AnfSystem, layout: SboxLayout, share: bool = False) -> list[Gate]:
    """Evaluate each output equation on the target, copy it out, reset the target.

    The copy-out is a CNOT, so on a non-clean memory register the block
    XORs the S-box output into it.
    """
    if len(layout.memory_qubits) != system.output_bits:
        raise SynthesisError("memory register width differs from the S-box output width")
    gates: list[Gate] = []
    for j, poly in enumerate(system.polys):
        if not poly.monomials:
            continue
        gates += synth_anf_equation(poly, layout, share)
        gates.append(CNOT(layout.equation_target, layout.memory_qubits[j]))
        gates.append(RESET(layout.equation_target))
    return gates


def _circuit_for(gates: list[Gate], label: str, min_qubits: int = 0) -> Circuit:
    n = max([min_qubits, *(q + 1 for g in gates for q in g.qubits)])
    return Circuit(n, 0, gates, label)


def synth_sbox(
    system: AnfSystem | None = None,
    layout: SboxLayout = DEFAULT_SBOX_LAYOUT,
    share: bool = False,
) -> Circuit:
    system = system or forward_system()
    return _circuit_for(sbox_gates(system, layout, share), "sbox", max(layout.qubits) + 1)


def _linear_gates(rows: Sequence[Sequence[int]], src: Sequence[int], dst: Sequence[int]) -> list[Gate]:
    if len(src) != 4 or len(dst) != 4:
        raise SynthesisError("multipliers act on 4-qubit nibbles")
    if set(src) & set(dst) or len(set(src)) != 4 or len(set(dst)) != 4:
        raise SynthesisError("source and destination nibbles must be distinct and disjoint")
    return [CNOT(src[b], dst[r]) for r, row in enumerate(rows) for b in row]


def synth_mul2(src: Sequence[int], dst: Sequence[int]) -> list[Gate]:
    """``dst ^= 2 * src`` in GF(2^4); with a clean ``dst`` this sets it."""
    return _linear_gates(MUL2_ROWS, src, dst)


def synth_mul3(src: Sequence[int], dst: Sequence[int]) -> list[Gate]:
    """``dst ^= 3 * src`` in GF(2^4)."""
    return _linear_gates(MUL3_ROWS, src, dst)


def _mix_pair(c0, c1, d0, d1) -> list[Gate]:
    return synth_mul3(c0, d0) + synth_mul2(c1, d0) + synth_mul2(c0, d1) + synth_mul3(c1, d1)


def synth_mix_column(
    state: Sequence[int] | None = None, work: Sequence[int] | None = None
) -> tuple[Circuit, list[int]]:
    """Out-of-place MixColumn over 16 state qubits and 8 clean work qubits.

    The first column lands on ``work``; its sources are then reset and hold
    the second column.  Returns the circuit and the output layout.
    """
    state = list(range(16)) if state is None else list(state)
    work = list(range(16, 24)) if work is None else list(work)
    if len(state) != 16 or len(work) != 8 or len(set(state + work)) != 24:
        raise SynthesisError("mix column needs 16 state and 8 distinct work qubits")
    gates = _mix_pair(state[0:4], state[4:8], work[0:4], work[4:8])
    gates += [RESET(q) for q in state[0:8]]
    gates += _mix_pair(state[8:12], state[12:16], state[0:4], state[4:8])
    gates += [RESET(q) for q in state[8:16]]
    return _circuit_for(gates, "mixcolumn"), work + state[0:8]


def synth_shift_row(nibble1: Sequence[int], nibble3: Sequence[int]) -> list[Gate]:
    if len(nibble1) != 4 or len(nibble3) != 4 or set(nibble1) & set(nibble3):
        raise SynthesisError("shift row swaps two disjoint 4-qubit nibbles")
    return [SWAP(a, b) for a, b in zip(nibble1, nibble3)]


def synth_key_addition(
    key: Block | Sequence[int], state: Sequence[int], mode: str = "classical_key"
) -> list[Gate]:
    """Add a round key: X gates for a known key, CNOTs from a key register."""
    if len(state) != 16:
        raise SynthesisError("key addition acts on 16 state qubits")
    if mode == "classical_key":
        if not isinstance(key, Block):
            raise SynthesisError("classical key addition needs a Block")
        return [X(q) for q, bit in zip(state, key.bits()) if bit]
    if mode == "key_register":
        key = list(key)
        if len(key) != 16 or set(key) & set(state):
            raise SynthesisError("key register must be 16 qubits disjoint from the state")
        return [CNOT(k, s) for k, s in zip(key, state)]
    raise SynthesisError(f"unknown key mode {mode!r}")


def key_schedule_step(
    key_qubits: Sequence[int], rcon: int, ancilla: int, target: int, inverse: bool = False
) -> list[Gate]:
    """Advance a 16-qubit key register to the next round key in place.

    ``w0 ^= S(w3) ^ rcon`` followed by the ``w1 ^= w0, w2 ^= w1, w3 ^= w2``
    cascade.  ``inverse`` runs the same gates backwards.
    """
    w = [list(key_qubits[4 * i : 4 * i + 4]) for i in range(4)]
    # Every block is an involution on its own, so reversing their order inverts the step.
    blocks = [
        sbox_gates(forward_system(), SboxLayout(w[3], ancilla, target, w[0])),
        [X(w[0][b]) for b in range(4) if rcon >> b & 1],
        *([CNOT(a, b) for a, b in zip(w[i - 1], w[i])] for i in range(1, 4)),
    ]
    if inverse:
        blocks.reverse()
    return [g for block in blocks for g in block]


@dataclass(frozen=True)
class Stage:
    name: str
    start: int
    end: int
    layout: tuple[int, ...]
    live_qubits: int
    high_water: int


@dataclass
class AssemblyPlan:
    """Where every stage of an assembled circuit lives.

    ``layout`` tuples map state bit ``b`` to its qubit at the end of the
    stage.  ``input_qubits`` receive the plaintext (or ciphertext) when the
    circuit is built without one; ``key_qubits`` hold the master key in
    register mode.
    """

    mode: str
    direction: str
    total_qubits: int = 0
    round1_qubits: int = 0
    stages: list[Stage] = field(default_factory=list)
    input_qubits: tuple[int, ...] = ()
    key_qubits: tuple[int, ...] = ()

    def stage(self, name: str) -> Stage:
        for s in self.stages:
            if s.name == name:
                return s
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {
            "mode": self.mode,
            "direction": self.direction,
            "total_qubits": self.total_qubits,
            "round1_qubits": self.round1_qubits,
            "input_qubits": list(self.input_qubits),
            "key_qubits": list(self.key_qubits),
            "stages": [
                {
                    "name": s.name,
                    "gates": [s.start, s.end],
                    "layout": list(s.layout),
                    "live_qubits": s.live_qubits,
                    "high_water": s.high_water,
                }
                for s in self.stages
            ],
        }


class _Assembler:
    def __init__(self, mode: str, direction: str, capacity: int, share: bool, relocation: str):
        if mode not in MODES:
            raise SynthesisError(f"unknown key mode {mode!r}")
        if relocation not in RELOCATIONS:
            raise SynthesisError(f"unknown relocation {relocation!r}")
        self.circuit = Circuit(capacity, 16, label=direction)
        self.alloc = QubitAllocator(capacity)
        self.plan = AssemblyPlan(mode, direction)
        self.share = share
        self.relocation = relocation
        self.layout: list[int] = []
        self.key: list[int] = []
        self._mark = 0

    def emit(self, gates) -> None:
        self.circuit.extend(gates)

    def mark(self, name: str) -> None:
        end = len(self.circuit)
        self.plan.stages.append(
            Stage(name, self._mark, end, tuple(self.layout), len(self.alloc.live),
                  self.alloc.high_water_mark)
        )
        self._mark = end

    def nibble(self, i: int) -> list[int]:
        return self.layout[4 * i : 4 * i + 4]

    def load(self, block: Block | None, key: Block | None) -> None:
        self.layout = self.alloc.alloc_many(16)
        self.plan.input_qubits = tuple(self.layout)
        if block is not None:
            self.emit(X(q) for q, bit in zip(self.layout, block.bits()) if bit)
        if self.plan.mode == "key_register":
            self.key = self.alloc.alloc_many(16)
            self.plan.key_qubits = tuple(self.key)
            if key is not None:
                self.emit(X(q) for q, bit in zip(self.key, key.bits()) if bit)
        self.mark("load")

    def add_key(self, round_key: Block | None, name: str) -> None:
        if self.plan.mode == "classical_key":
            self.emit(synth_key_addition(round_key, self.layout))
        else:
            self.emit(synth_key_addition(self.key, self.layout, "key_register"))
        self.mark(name)

    def step_key(self, steps: Sequence[tuple[int, bool]]) -> None:
        """Advance/retreat the key register; no-op in classical mode."""
        if self.plan.mode != "key_register":
            return
        anc, tgt = self.alloc.alloc_many(2)
        for rcon, inverse in steps:
            self.emit(key_schedule_step(self.key, rcon, anc, tgt, inverse))
        self.alloc.release_many([anc, tgt], self.circuit)

    def sbox_layer(self, system: AnfSystem, name: str) -> None:
        anc, tgt = self.alloc.alloc_many(2)
        for i in range(4):
            src = self.nibble(i)
            mem = self.alloc.alloc_many(4)
            self.emit(sbox_gates(system, SboxLayout(src, anc, tgt, mem), self.share))
            self.alloc.release_many(src, self.circuit)
            self.layout[4 * i : 4 * i + 4] = mem
        self.alloc.release_many([anc, tgt], self.circuit)
        self.mark(name)

    def shift_row(self, name: str) -> None:
        self.emit(synth_shift_row(self.nibble(1), self.nibble(3)))
        self.mark(name)

    def mix_column(self, name: str) -> None:
        for col in (0, 1):
            c0, c1 = self.nibble(2 * col), self.nibble(2 * col + 1)
            d0, d1 = self.alloc.alloc_many(4), self.alloc.alloc_many(4)
            self.emit(_mix_pair(c0, c1, d0, d1))
            self.alloc.release_many(c0 + c1, self.circuit)
            self.layout[8 * col : 8 * col + 8] = d0 + d1
        self.mark(name)

    def relocate(self, name: str) -> None:
        """Move state bit ``b`` onto qubit ``b``."""
        if self.relocation == "none":
            return
        for b in range(16):
            q = self.layout[b]
            if q == b:
                continue
            if b in self.layout:
                other = self.layout.index(b)
                self.emit([SWAP(q, b)])
                self.layout[b], self.layout[other] = b, q
                continue
            self.alloc.claim(b)
            self.emit([CNOT(q, b) if self.relocation == "cnot" else SWAP(q, b)])
            self.alloc.release(q, self.circuit)
            self.layout[b] = b
        self.mark(name)

    def measure(self) -> None:
        self.emit(MEASURE(q, b) for b, q in enumerate(self.layout))
        self.mark("measure")

    def finish(self) -> tuple[Circuit, AssemblyPlan]:
        used = max(q for g in self.circuit.gates for q in g.qubits) + 1
        circuit = Circuit(used, 16, self.circuit.gates, self.circuit.label)
        self.plan.total_qubits = used
        return circuit, self.plan


def _budgets(mode: str, round1_budget: int | None, total_budget: int | None) -> tuple[int, int]:
    extra = KEY_REGISTER_QUBITS if mode == "key_register" else 0
    r1 = ROUND1_QUBITS + extra if round1_budget is None else round1_budget
    total = TOTAL_QUBITS + extra if total_budget is None else total_budget
    return r1, total


def _check_round1(asm: _Assembler, budget: int) -> None:
    asm.plan.round1_qubits = asm.alloc.high_water_mark
    if asm.plan.round1_qubits > budget:
        raise BudgetError(
            f"round one needs {asm.plan.round1_qubits} qubits, budget is {budget}"
        )


def assemble_encrypt(
    plaintext: Block | None,
    key: Block | None,
    mode: str = "classical_key",
    *,
    rounds: int = 2,
    share: bool = False,
    relocation: str = "cnot",
    round1_budget: int | None = None,
    total_budget: int | None = None,
) -> tuple[Circuit, AssemblyPlan]:
    """Build the two-round encryption circuit (or only round one).

    With ``rounds=1`` the circuit stops after MixColumn and measures that
    state.  Without a ``plaintext`` the state qubits are expected to be
    prepared by the caller; in ``key_register`` mode the same holds for the
    key register when ``key`` is ``None``.
    """
    if mode == "classical_key" and key is None:
        raise SynthesisError("classical_key mode needs the key")
    if rounds not in (1, 2):
        raise SynthesisError("rounds must be 1 or 2")
    r1_budget, total_budget = _budgets(mode, round1_budget, total_budget)
    keys = key_schedule(key) if key is not None else None
    asm = _Assembler(mode, "encrypt", total_budget, share, relocation)
    try:
        asm.load(plaintext, key)
        asm.add_key(keys and keys.k0, "add_k0")
        asm.sbox_layer(forward_system(), "sbox1")
        asm.shift_row("shift_row1")
        asm.mix_column("mix_column")
        _check_round1(asm, r1_budget)
        if rounds == 2:
            asm.relocate("relocate")
            asm.step_key([(ROUND_CONSTANTS[0], False)])
            asm.add_key(keys and keys.k1, "add_k1")
            asm.sbox_layer(forward_system(), "sbox2")
            asm.shift_row("shift_row2")
            asm.step_key([(ROUND_CONSTANTS[1], False)])
            asm.add_key(keys and keys.k2, "add_k2")
        asm.measure()
    except AllocationError as exc:
        raise BudgetError(f"encryption exceeds {total_budget} qubits: {exc}") from exc
    return asm.finish()


def assemble_decrypt(
    cipher: Block | None,
    key: Block | None,
    mode: str = "classical_key",
    *,
    share: bool = False,
    relocation: str = "cnot",
    round1_budget: int | None = None,
    total_budget: int | None = None,
) -> tuple[Circuit, AssemblyPlan]:
    """Build the decryption circuit: the encryption stages inverted in reverse order.

    In register mode the key register is first advanced to the last round
    key and stepped back as the rounds unwind, ending on the master key.
    """
    if mode == "classical_key" and key is None:
        raise SynthesisError("classical_key mode needs the key")
    r1_budget, total_budget = _budgets(mode, round1_budget, total_budget)
    keys = key_schedule(key) if key is not None else None
    rc1, rc2 = ROUND_CONSTANTS
    asm = _Assembler(mode, "decrypt", total_budget, share, relocation)
    try:
        asm.load(cipher, key)
        asm.step_key([(rc1, False), (rc2, False)])
        asm.add_key(keys and keys.k2, "add_k2")
        asm.shift_row("shift_row1")
        asm.sbox_layer(inverse_system(), "inv_sbox1")
        asm.step_key([(rc2, True)])
        asm.add_key(keys and keys.k1, "add_k1")
        asm.mix_column("mix_column")
        asm.shift_row("shift_row2")
        _check_round1(asm, r1_budget)
        asm.relocate("relocate")
        asm.sbox_layer(inverse_system(), "inv_sbox2")
        asm.step_key([(rc1, True)])
        asm.add_key(keys and keys.k0, "add_k0")
        asm.measure()
    except AllocationError as exc:
        raise BudgetError(f"decryption exceeds {total_budget} qubits: {exc}") from exc
    return asm.finish()


def synth_target(name: str, **kw) -> Circuit:
    """Standalone circuits by name, as offered on the command line."""
    if name == "sbox":
        return synth_sbox(forward_system(), share=kw.get("share", False))
    if name == "inv-sbox":
        c = synth_sbox(inverse_system(), share=kw.get("share", False))
        c.label = "inv-sbox"
        return c
    if name in ("mul2", "mul3"):
        fn = synth_mul2 if name == "mul2" else synth_mul3
        return Circuit(8, 0, fn([0, 1, 2, 3], [4, 5, 6, 7]), name)
    if name == "mixcolumn":
        return synth_mix_column()[0]
    if name in ("round1", "encrypt"):
        return assemble_encrypt(
            kw.get("plaintext"), kw["key"], kw.get("mode", "classical_key"),
            rounds=1 if name == "round1" else 2, share=kw.get("share", False),
            relocation=kw.get("relocation", "cnot"),
        )[0]
    if name == "decrypt":
        return assemble_decrypt(
            kw.get("cipher"), kw["key"], kw.get("mode", "classical_key"),
            share=kw.get("share", False), relocation=kw.get("relocation", "cnot"),
        )[0]
    raise SynthesisError(f"unknown synthesis target {name!r}")


SYNTH_TARGETS = ("sbox", "inv-sbox", "mul2", "mul3", "mixcolumn", "round1", "encrypt", "decrypt")
