"""
From truth table to polynomial
==============================

The S-box is four Boolean functions of four bits.  The binary Moebius
transform turns each one into an XOR of AND-terms.
"""

# %%
import numpy as np

from qminiaes.anf import (
    FORWARD_SBOX,
    INVERSE_SBOX,
    algebraic_degree,
    component_function,
    derive_anf_system,
    moebius_transform,
)

# %% Output bit 0 as a 16-entry column, and its coefficients.
f0 = component_function(FORWARD_SBOX, 0)
print("y0 truth table :", f0)
print("y0 coefficients:", moebius_transform(f0))

# %% The whole system, printed as equations.
for label, table in (("forward", FORWARD_SBOX), ("inverse", INVERSE_SBOX)):
    system = derive_anf_system(table)
    print(f"\n{label} S-box, degree {algebraic_degree(system)}")
    print("\n".join(system.equations()))

# %% The transform is its own inverse.
rng = np.random.default_rng(0)
bits = rng.integers(0, 2, 16).tolist()
assert moebius_transform(moebius_transform(bits)) == bits
print("\ninvolution holds on a random table")
