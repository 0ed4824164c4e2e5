"""
The S-box as a reversible circuit
=================================

Each ANF equation is evaluated into a scratch qubit with CNOT and Toffoli
gates, copied into a memory nibble, and the scratch qubit is reset.  Ten
qubits are enough.
"""

# %%
from collections import Counter

from qminiaes.anf import FORWARD_SBOX
from qminiaes.emit import export_text
from qminiaes.sim import exhaustive_check
from qminiaes.synth import DEFAULT_SBOX_LAYOUT as LAY, synth_sbox

baseline = synth_sbox()
shared = synth_sbox(share=True)

# %% Gate census with and without sub-product sharing.
for name, c in (("baseline", baseline), ("shared", shared)):
    print(name, dict(Counter(g.kind for g in c.gates)))

# %% Both are bit-exact against the table.
for name, c in (("baseline", baseline), ("shared", shared)):
    print(name, exhaustive_check(c, LAY.input_qubits, FORWARD_SBOX, LAY.memory_qubits))

# %% The first lines of the canonical text form.
print("\n".join(export_text(baseline).splitlines()[:12]))
