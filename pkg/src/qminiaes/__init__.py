"""Reversible-circuit compiler, simulator and resource estimator for Mini-AES."""

from qminiaes.reference import (
    Block,
    EncryptionTrace,
    RoundKeys,
    decrypt,
    encrypt,
    gf16_mul,
    inv_nibble_sub,
    key_schedule,
    mix_column,
    nibble_sub,
    shift_row,
)

__version__ = "0.1.0"

__all__ = [
    "Block",
    "EncryptionTrace",
    "RoundKeys",
    "decrypt",
    "encrypt",
    "gf16_mul",
    "inv_nibble_sub",
    "key_schedule",
    "mix_column",
    "nibble_sub",
    "shift_row",
]
