"""
Mini-AES by hand
================

Walk one block through the classical reference cipher and print every
intermediate column of the test-vector table.
"""

# %%
from qminiaes import Block, decrypt, encrypt, key_schedule

plaintext = Block.parse("1001 1100 0110 0011")
key = Block.parse("1100 0011 1111 0000")

# %% The three round keys come from one S-box call per round.
keys = key_schedule(key)
for name in ("k0", "k1", "k2"):
    print(f"{name} = {getattr(keys, name)}")

# %% Encrypt and show the trace.
trace = encrypt(plaintext, key)
for column, value in trace.as_dict().items():
    print(f"{column:>14}: {value}")

# %% Decryption undoes it.
assert decrypt(trace.cipher, key) == plaintext
print("decrypt(cipher) == plaintext")
