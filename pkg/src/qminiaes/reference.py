"""Bit-exact classical Mini-AES.

Nibbles are GF(2^4) elements with bit ``i`` holding the coefficient of
``x**i``; the field modulus is ``x^4 + x + 1``.  A block is four nibbles
``[n0, n1, n2, n3]`` whose text form prints ``n0`` first, MSB left.

Everything here is the ground truth that the circuit layers are checked
against.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

MODULUS = 0b10011  # x^4 + x + 1

SBOX = (
    0b1110, 0b0100, 0b1101, 0b0001,
    0b0010, 0b1111, 0b1011, 0b1000,
    0b0011, 0b1010, 0b0110, 0b1100,
    0b0101, 0b1001, 0b0000, 0b0111,
)

INV_SBOX = (
    0b1110, 0b0011, 0b0100, 0b1000,
    0b0001, 0b1100, 0b1010, 0b1111,
    0b0111, 0b1101, 0b1001, 0b0110,
    0b1011, 0b0010, 0b0000, 0b0101,
)

ROUND_CONSTANTS = (0b0001, 0b0010)

_BLOCK_TEXT = re.compile(r"^[01]{4}( ?[01]{4}){3}$")


def _check_nibble(n: int) -> int:
    if not 0 <= n < 16:
        raise ValueError(f"nibble out of range: {n!r}")
    return n


def gf16_mul(a: int, b: int) -> int:
    """Multiply two nibbles in GF(2^4) modulo ``x^4 + x + 1``."""
    _check_nibble(a)
    _check_nibble(b)
    product = 0
    for _ in range(4):
        if b & 1:
            product ^= a
        b >>= 1
        a <<= 1
        if a & 0x10:
            a ^= MODULUS
    return product


def nibble_sub(n: int) -> int:
    return SBOX[_check_nibble(n)]


def inv_nibble_sub(n: int) -> int:
    return INV_SBOX[_check_nibble(n)]


@dataclass(frozen=True)
class Block:
    """A 16-bit Mini-AES state held as four nibbles."""

    nibbles: tuple[int, int, int, int]

    def __post_init__(self) -> None:
        nibbles = tuple(self.nibbles)
        if len(nibbles) != 4:
            raise ValueError(f"a block has exactly 4 nibbles, got {len(nibbles)}")
        for n in nibbles:
            _check_nibble(n)
        object.__setattr__(self, "nibbles", nibbles)

    @classmethod
    def of(cls, *nibbles: int) -> Block:
        return cls(tuple(nibbles))

    @classmethod
    def parse(cls, text: str) -> Block:
        """Parse ``"0111001011000110"`` or ``"0111 0010 1100 0110"``."""
        text = text.strip()
        if not _BLOCK_TEXT.match(text):
            raise ValueError(
                f"expected 16 binary digits (optionally grouped by nibble), got {text!r}"
            )
        return cls.from_int(int(text.replace(" ", ""), 2))

    @classmethod
    def from_int(cls, value: int) -> Block:
        if not 0 <= value < 1 << 16:
            raise ValueError(f"block value out of range: {value!r}")
        return cls(tuple((value >> (12 - 4 * i)) & 0xF for i in range(4)))

    def to_int(self) -> int:
        n0, n1, n2, n3 = self.nibbles
        return n0 << 12 | n1 << 8 | n2 << 4 | n3

    def bits(self) -> list[int]:
        """State bits in qubit order: nibble ``i`` bit ``j`` lands at ``4*i + j``."""
        return [(n >> j) & 1 for n in self.nibbles for j in range(4)]

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> Block:
        bits = list(bits)
        if len(bits) != 16:
            raise ValueError(f"expected 16 state bits, got {len(bits)}")
        return cls(tuple(sum(bits[4 * i + j] << j for j in range(4)) for i in range(4)))

    def __xor__(self, other: Block) -> Block:
        return Block(tuple(a ^ b for a, b in zip(self.nibbles, other.nibbles)))

    def __iter__(self) -> Iterator[int]:
        return iter(self.nibbles)

    def __getitem__(self, i: int) -> int:
        return self.nibbles[i]

    def __str__(self) -> str:
        return " ".join(f"{n:04b}" for n in self.nibbles)


def sub_block(b: Block) -> Block:
    return Block(tuple(nibble_sub(n) for n in b))


def inv_sub_block(b: Block) -> Block:
    return Block(tuple(inv_nibble_sub(n) for n in b))


def shift_row(b: Block) -> Block:
    """Swap the second and fourth nibbles."""
    n0, n1, n2, n3 = b.nibbles
    return Block((n0, n3, n2, n1))


def mix_column(b: Block) -> Block:
    """Multiply each column ``(n0, n1)``, ``(n2, n3)`` by ``[[3, 2], [2, 3]]``."""
    n0, n1, n2, n3 = b.nibbles
    return Block((
        gf16_mul(3, n0) ^ gf16_mul(2, n1),
        gf16_mul(2, n0) ^ gf16_mul(3, n1),
        gf16_mul(3, n2) ^ gf16_mul(2, n3),
        gf16_mul(2, n2) ^ gf16_mul(3, n3),
    ))


@dataclass(frozen=True)
class RoundKeys:
    k0: Block
    k1: Block
    k2: Block


def next_round_key(key: Block, rcon: int) -> Block:
    w0, w1, w2, w3 = key.nibbles
    w4 = w0 ^ nibble_sub(w3) ^ rcon
    w5 = w1 ^ w4
    w6 = w2 ^ w5
    w7 = w3 ^ w6
    return Block((w4, w5, w6, w7))


def key_schedule(key: Block) -> RoundKeys:
    k1 = next_round_key(key, ROUND_CONSTANTS[0])
    k2 = next_round_key(k1, ROUND_CONSTANTS[1])
    return RoundKeys(key, k1, k2)


@dataclass(frozen=True)
class EncryptionTrace:
    """Intermediate states of one encryption, one field per test-vector column.

    ``permutations1`` is the state after ShiftRow and MixColumn of round 1,
    taken before the second round key is added.
    """

    plaintext: Block
    key: Block
    sbox1: Block
    permutations1: Block
    sbox2: Block
    cipher: Block

    def as_dict(self) -> dict[str, str]:
        return {
            "plaintext": str(self.plaintext),
            "key": str(self.key),
            "sbox1": str(self.sbox1),
            "permutations1": str(self.permutations1),
            "sbox2": str(self.sbox2),
            "cipher": str(self.cipher),
        }


def encrypt(p: Block, key: Block) -> EncryptionTrace:
    keys = key_schedule(key)
    sbox1 = sub_block(p ^ keys.k0)
    permutations1 = mix_column(shift_row(sbox1))
    sbox2 = sub_block(permutations1 ^ keys.k1)
    cipher = shift_row(sbox2) ^ keys.k2
    return EncryptionTrace(p, key, sbox1, permutations1, sbox2, cipher)


def decrypt(c: Block, key: Block) -> Block:
    keys = key_schedule(key)
    state = inv_sub_block(shift_row(c ^ keys.k2)) ^ keys.k1
    state = shift_row(mix_column(state))
    return inv_sub_block(state) ^ keys.k0
