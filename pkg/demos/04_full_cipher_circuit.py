"""
Two rounds in 24 qubits
=======================

Assemble the full encryption circuit, look at the stage plan, and sweep
every plaintext for one key with the batched simulator.
"""

# %%
import time

from qminiaes import Block, encrypt
from qminiaes.sim import run_basis
from qminiaes.synth import assemble_encrypt
from qminiaes.verify import sweep_plaintexts

plaintext = Block.parse("1001 1100 0110 0011")
key = Block.parse("1100 0011 1111 0000")

# %% Stage by stage: where the gates go and how many qubits are live.
circuit, plan = assemble_encrypt(plaintext, key)
for stage in plan.stages:
    print(f"{stage.name:<12} gates {stage.start:>4}-{stage.end:<4} high water {stage.high_water}")
print("qubits:", circuit.qubit_count, " round 1:", plan.round1_qubits)

# %% One run, compared with the reference.
got = Block.from_bits(run_basis(circuit).classical_bits)
print("circuit  :", got)
print("reference:", encrypt(plaintext, key).cipher)

# %% All 65536 plaintexts at once.
start = time.perf_counter()
report = sweep_plaintexts(key)
print(f"sweep: {report} in {time.perf_counter() - start:.2f} s")
