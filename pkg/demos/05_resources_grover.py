"""
What would a key search cost?
=============================

Count gates, weigh them in CNOT units, and scale by the number of Grover
iterations needed for a 16-bit key.  The published per-stage figures are
printed alongside for comparison only.
"""

# %%
import json

from qminiaes import Block
from qminiaes.cost import PUBLISHED_STAGE_COUNTS, ResourceReport, grover_estimate, histogram
from qminiaes.synth import assemble_encrypt

key = Block.parse("1100 0011 1111 0000")

# %% This build, with and without sharing.
for share in (False, True):
    report = histogram(assemble_encrypt(None, key, share=share)[0])
    print(f"share={share}:", report.counts, "depth", report.dag_depth, "cnot-eq", report.cnot_equivalent)
    print("  grover:", grover_estimate(report, 16).as_dict())

# %% The published round-2 totals through the same formula.
published = ResourceReport.from_counts(
    {"cnot": 198, "toffoli": 160, "swap": 26, "x": 58}, dag_depth=397, qubit_count=28
)
print(json.dumps(grover_estimate(published, 16).as_dict(), indent=2))
print(json.dumps(PUBLISHED_STAGE_COUNTS, indent=2))
