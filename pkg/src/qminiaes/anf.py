"""Algebraic normal forms of Boolean vector functions.

A monomial is an integer mask over the input variables (bit ``i`` set means
``x_i`` is a factor, mask 0 is the constant 1).  A polynomial is the XOR of a
set of monomials, and a system holds one polynomial per output bit.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from qminiaes.reference import INV_SBOX, SBOX


@dataclass(frozen=True)
class TruthTable:
    input_bits: int
    output_bits: int
    outputs: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.input_bits <= 8 or not 1 <= self.output_bits <= 8:
            raise ValueError("input_bits and output_bits must lie in 1..8")
        outputs = tuple(int(v) for v in self.outputs)
        if len(outputs) != 1 << self.input_bits:
            raise ValueError(
                f"expected {1 << self.input_bits} outputs, got {len(outputs)}"
            )
        bad = [v for v in outputs if not 0 <= v < 1 << self.output_bits]
        if bad:
            raise ValueError(f"output {bad[0]} does not fit in {self.output_bits} bits")
        object.__setattr__(self, "outputs", outputs)

    def is_bijective(self) -> bool:
        return (
            self.input_bits == self.output_bits
            and len(set(self.outputs)) == len(self.outputs)
        )


FORWARD_SBOX = TruthTable(4, 4, SBOX)
INVERSE_SBOX = TruthTable(4, 4, INV_SBOX)


@dataclass(frozen=True)
class AnfPolynomial:
    """XOR of monomials over ``num_vars`` variables."""

    num_vars: int
    monomials: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "monomials", frozenset(self.monomials))
        for m in self.monomials:
            if not 0 <= m < 1 << self.num_vars:
                raise ValueError(f"monomial mask {m} outside {self.num_vars} variables")

    @classmethod
    def from_terms(cls, num_vars: int, terms: Iterable[Iterable[int]]) -> AnfPolynomial:
        """Build from variable-index tuples; ``()`` is the constant 1.

        Repeated terms cancel, as they would under XOR.
        """
        monos: set[int] = set()
        for term in terms:
            mask = 0
            for var in term:
                mask |= 1 << var
            monos ^= {mask}
        return cls(num_vars, frozenset(monos))

    @property
    def degree(self) -> int:
        return max((m.bit_count() for m in self.monomials), default=0)

    def sorted_monomials(self) -> list[int]:
        return sorted(self.monomials)

    def evaluate(self, x: int) -> int:
        return evaluate_anf(self, x)

    def __str__(self) -> str:
        if not self.monomials:
            return "0"
        return " ^ ".join(monomial_str(m) for m in self.sorted_monomials())


def monomial_str(mask: int) -> str:
    if mask == 0:
        return "1"
    return "".join(f"x{i}" for i in range(mask.bit_length()) if mask >> i & 1)


@dataclass(frozen=True)
class AnfSystem:
    polys: tuple[AnfPolynomial, ...]

    @property
    def input_bits(self) -> int:
        return self.polys[0].num_vars

    @property
    def output_bits(self) -> int:
        return len(self.polys)

    def evaluate(self, x: int) -> int:
        return sum(evaluate_anf(p, x) << j for j, p in enumerate(self.polys))

    def to_table(self) -> TruthTable:
        n = self.input_bits
        return TruthTable(n, self.output_bits, tuple(self.evaluate(x) for x in range(1 << n)))

    def equations(self) -> list[str]:
        return [f"y{j} = {p}" for j, p in enumerate(self.polys)]


def component_function(table: TruthTable, bit: int) -> list[int]:
    if not 0 <= bit < table.output_bits:
        raise IndexError(f"output bit {bit} out of range for {table.output_bits}-bit table")
    return [(v >> bit) & 1 for v in table.outputs]


def moebius_transform(f: Sequence[int]) -> list[int]:
    """Binary Moebius transform (truth table <-> ANF coefficients).

    The transform is its own inverse.
    """
    size = len(f)
    if size == 0 or size & (size - 1):
        raise ValueError(f"length must be a power of two, got {size}")
    coeffs = [int(v) & 1 for v in f]
    step = 1
    while step < size:
        for x in range(size):
            if x & step:
                coeffs[x] ^= coeffs[x ^ step]
        step <<= 1
    return coeffs


def derive_anf_system(table: TruthTable) -> AnfSystem:
    polys = []
    for bit in range(table.output_bits):
        coeffs = moebius_transform(component_function(table, bit))
        polys.append(
            AnfPolynomial(table.input_bits, frozenset(m for m, c in enumerate(coeffs) if c))
        )
    return AnfSystem(tuple(polys))


def evaluate_anf(poly: AnfPolynomial, x: int) -> int:
    if not 0 <= x < 1 << poly.num_vars:
        raise ValueError(f"input {x} outside {poly.num_vars} variables")
    value = 0
    for m in poly.monomials:
        if x & m == m:
            value ^= 1
    return value


def algebraic_degree(system: AnfSystem) -> int:
    return max(p.degree for p in system.polys)


def parse_table(text: str) -> TruthTable:
    """Read an S-box table.

    Two layouts are accepted: one ``<input-bits> <output-bits>`` pair per line
    (inputs may come in any order but must cover every value), or a single
    line of ``2**n`` hex digits giving the outputs in input order.  Blank
    lines and ``#`` comments are ignored.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty S-box table")

    if len(lines) == 1 and len(lines[0].split()) == 1:
        digits = lines[0]
        try:
            outputs = [int(ch, 16) for ch in digits]
        except ValueError:
            raise ValueError(f"line 1: not a hex digit string: {digits!r}") from None
        n = len(outputs).bit_length() - 1
        if len(outputs) != 1 << n or n < 1:
            raise ValueError(f"line 1: {len(outputs)} entries is not a power of two")
        return TruthTable(n, 4, tuple(outputs))

    entries: dict[int, int] = {}
    n = m = None
    for lineno, ln in enumerate(lines, 1):
        parts = ln.split()
        if len(parts) != 2 or any(set(p) - {"0", "1"} for p in parts):
            raise ValueError(f"line {lineno}: expected '<input-bits> <output-bits>', got {ln!r}")
        if n is None:
            n, m = len(parts[0]), len(parts[1])
        elif (len(parts[0]), len(parts[1])) != (n, m):
            raise ValueError(f"line {lineno}: inconsistent bit widths")
        x = int(parts[0], 2)
        if x in entries:
            raise ValueError(f"line {lineno}: duplicate input {parts[0]}")
        entries[x] = int(parts[1], 2)
    if len(entries) != 1 << n:
        raise ValueError(f"expected {1 << n} entries, got {len(entries)}")
    return TruthTable(n, m, tuple(entries[x] for x in range(1 << n)))


def load_table(source: str) -> TruthTable:
    """Resolve ``builtin:forward``, ``builtin:inverse`` or a file path."""
    if source == "builtin:forward":
        return FORWARD_SBOX
    if source == "builtin:inverse":
        return INVERSE_SBOX
    table = parse_table(Path(source).read_text())
    if not table.is_bijective():
        warnings.warn(f"{source}: S-box is not a bijection", stacklevel=2)
    return table
