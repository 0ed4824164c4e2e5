"""Oracle-equivalence sweeps: circuits against the classical reference."""

from __future__ import annotations

import numpy as np

from qminiaes.anf import FORWARD_SBOX, INVERSE_SBOX, TruthTable
from qminiaes.circuit import Circuit
from qminiaes.reference import Block, decrypt, encrypt, gf16_mul, mix_column
from qminiaes.sim import (
    CheckReport,
    exhaustive_check,
    pack_values,
    run_basis,
    run_batch,
    unpack_values,
)
from qminiaes.synth import (
    DEFAULT_SBOX_LAYOUT,
    assemble_decrypt,
    assemble_encrypt,
    inverse_system,
    forward_system,
    synth_mix_column,
    synth_mul2,
    synth_mul3,
    synth_sbox,
)

MUL2_TABLE = TruthTable(4, 4, tuple(gf16_mul(2, v) for v in range(16)))
MUL3_TABLE = TruthTable(4, 4, tuple(gf16_mul(3, v) for v in range(16)))


def verify_sbox(share: bool = False) -> dict[str, CheckReport]:
    lay = DEFAULT_SBOX_LAYOUT
    return {
        "sbox": exhaustive_check(
            synth_sbox(forward_system(), lay, share), lay.input_qubits, FORWARD_SBOX, lay.memory_qubits
        ),
        "inv-sbox": exhaustive_check(
            synth_sbox(inverse_system(), lay, share), lay.input_qubits, INVERSE_SBOX, lay.memory_qubits
        ),
    }


def verify_mul() -> dict[str, CheckReport]:
    src, dst = [0, 1, 2, 3], [4, 5, 6, 7]
    return {
        "mul2": exhaustive_check(Circuit(8, 0, synth_mul2(src, dst)), src, MUL2_TABLE, dst),
        "mul3": exhaustive_check(Circuit(8, 0, synth_mul3(src, dst)), src, MUL3_TABLE, dst),
    }


def _compare(values: np.ndarray, want: np.ndarray, got: np.ndarray) -> CheckReport:
    bad = np.flatnonzero(want != got)
    return CheckReport(int(values.size), [(int(values[i]), int(want[i]), int(got[i])) for i in bad])


def _block_ints(bits_rows: np.ndarray, qubits) -> np.ndarray:
    """Read 16 state rows as Block integers (nibble 0 most significant)."""
    state = unpack_values(bits_rows, qubits)  # bit b = state bit b
    out = np.zeros_like(state)
    for i in range(4):
        out |= ((state >> (4 * i)) & 0xF) << (12 - 4 * i)
    return out


def _state_values(blocks: np.ndarray) -> np.ndarray:
    """Block integers -> state-bit integers (inverse of :func:`_block_ints`)."""
    blocks = np.asarray(blocks, dtype=np.int64)
    out = np.zeros_like(blocks)
    for i in range(4):
        out |= ((blocks >> (12 - 4 * i)) & 0xF) << (4 * i)
    return out


def verify_mixcolumn(samples: int = 256, seed: int = 0, exhaustive: bool = False) -> CheckReport:
    circuit, out = synth_mix_column()
    if exhaustive:
        blocks = np.arange(1 << 16)
    else:
        blocks = np.random.default_rng(seed).integers(0, 1 << 16, samples)
    final, _ = run_batch(circuit, pack_values(_state_values(blocks), range(16), circuit.qubit_count))
    got = _block_ints(final, out)
    want = np.array([mix_column(Block.from_int(int(b))).to_int() for b in blocks])
    return _compare(blocks, want, got)


def sweep_plaintexts(
    key: Block, mode: str = "classical_key", share: bool = False, relocation: str = "cnot"
) -> CheckReport:
    """Run the encryption circuit on all 2**16 plaintexts for one key."""
    # Register mode: the key register is prepared as input, not loaded by X gates.
    circuit, plan = assemble_encrypt(
        None, None if mode == "key_register" else key, mode, share=share, relocation=relocation
    )
    plains = np.arange(1 << 16)
    inputs = pack_values(_state_values(plains), plan.input_qubits, circuit.qubit_count)
    if mode == "key_register":
        inputs |= pack_values(
            np.full(plains.size, _state_values(np.array([key.to_int()]))[0]),
            plan.key_qubits, circuit.qubit_count,
        )
    _, cbits = run_batch(circuit, inputs)
    got = _block_ints(cbits, range(16))
    want = np.array([encrypt(Block.from_int(int(p)), key).cipher.to_int() for p in plains])
    return _compare(plains, want, got)


def random_pairs(samples: int, seed: int) -> list[tuple[Block, Block]]:
    rng = np.random.default_rng(seed)
    vals = rng.integers(0, 1 << 16, size=(samples, 2))
    return [(Block.from_int(int(p)), Block.from_int(int(k))) for p, k in vals]


def verify_encrypt_pairs(
    samples: int = 1000, seed: int = 0, mode: str = "classical_key", share: bool = False
) -> CheckReport:
    """Build and run one encryption circuit per random (plaintext, key) pair."""
    mismatches = []
    for i, (p, k) in enumerate(random_pairs(samples, seed)):
        circuit, _ = assemble_encrypt(p, k, mode, share=share)
        got = Block.from_bits(run_basis(circuit).classical_bits)
        want = encrypt(p, k).cipher
        if got != want:
            mismatches.append((i, want.to_int(), got.to_int()))
    return CheckReport(samples, mismatches)


def verify_decrypt_pairs(
    samples: int = 100, seed: int = 0, mode: str = "classical_key", share: bool = False
) -> CheckReport:
    """Decrypt circuit applied to reference ciphertexts must give back the plaintext."""
    mismatches = []
    for i, (p, k) in enumerate(random_pairs(samples, seed)):
        c = encrypt(p, k).cipher
        circuit, _ = assemble_decrypt(c, k, mode, share=share)
        got = Block.from_bits(run_basis(circuit).classical_bits)
        if got != p or decrypt(c, k) != p:
            mismatches.append((i, p.to_int(), got.to_int()))
    return CheckReport(samples, mismatches)
