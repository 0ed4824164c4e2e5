import random
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qminiaes.anf import (
    FORWARD_SBOX,
    INVERSE_SBOX,
    AnfPolynomial,
    AnfSystem,
    TruthTable,
    algebraic_degree,
    component_function,
    derive_anf_system,
    evaluate_anf,
    load_table,
    moebius_transform,
    parse_table,
)
from qminiaes.reference import INV_SBOX, SBOX


def solve_anf(f):
    """ANF coefficients by Gaussian elimination over GF(2).

    Row x of the system says XOR_{m subset of x} c_m = f(x).
    """
    size = len(f)
    a = np.array([[int(m & x == m) for m in range(size)] + [f[x]] for x in range(size)], dtype=np.uint8)
    row = 0
    for col in range(size):
        pivot = next(r for r in range(row, size) if a[r, col])
        a[[row, pivot]] = a[[pivot, row]]
        for r in range(size):
            if r != row and a[r, col]:
                a[r] ^= a[row]
        row += 1
    return [int(v) for v in a[:, -1]]


def terms(*monomials):
    return AnfPolynomial.from_terms(4, monomials).monomials


# The four published output equations, transcribed term by term.
Y0_TERMS = terms((1,), (0, 2), (3,), (0, 3), (0, 1, 3))
Y1_TERMS = terms((), (0,), (1,), (0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3), (0, 2, 3), (1, 2, 3))
Y2_TERMS = terms((), (0, 1), (2,), (0, 2), (3,), (1, 3), (0, 1, 3))
Y3_TERMS = terms((), (0,), (2,), (1, 2), (0, 1, 2), (3,), (2, 3), (1, 2, 3))

bit_lists = st.integers(0, 8).flatmap(
    lambda n: st.lists(st.integers(0, 1), min_size=1 << n, max_size=1 << n)
)


def test_component_function():
    assert component_function(FORWARD_SBOX, 0)[0] == 0
    assert component_function(FORWARD_SBOX, 3)[0] == 1
    zero = TruthTable(3, 2, (0, 2, 0, 2, 0, 2, 0, 2))
    assert component_function(zero, 0) == [0] * 8
    with pytest.raises(IndexError):
        component_function(FORWARD_SBOX, 4)


class TestMoebius:
    def test_and(self):
        assert moebius_transform([0, 0, 0, 1]) == [0, 0, 0, 1]

    def test_xor(self):
        assert moebius_transform([0, 1, 1, 0]) == [0, 1, 1, 0]

    def test_rejects_bad_length(self):
        with pytest.raises(ValueError):
            moebius_transform([0, 1, 1])

    @given(bit_lists)
    def test_involution(self, f):
        assert moebius_transform(moebius_transform(f)) == f

    @settings(max_examples=50)
    @given(st.integers(1, 6).flatmap(
        lambda n: st.lists(st.integers(0, 1), min_size=1 << n, max_size=1 << n)))
    def test_matches_linear_solve(self, f):
        assert moebius_transform(f) == solve_anf(f)

    def test_involution_1000_length16(self):
        rng = random.Random(11)
        for _ in range(1000):
            f = [rng.getrandbits(1) for _ in range(16)]
            assert moebius_transform(moebius_transform(f)) == f


class TestForwardSboxAnf:
    def test_equations_match_published_sets(self):
        system = derive_anf_system(FORWARD_SBOX)
        assert [p.monomials for p in system.polys] == [Y0_TERMS, Y1_TERMS, Y2_TERMS, Y3_TERMS]

    def test_monomial_census(self):
        system = derive_anf_system(FORWARD_SBOX)
        assert len(system.polys[1].monomials) == 11
        by_degree = [0] * 4
        for p in system.polys:
            for m in p.monomials:
                by_degree[m.bit_count()] += 1
        assert by_degree == [3, 9, 13, 6]

    def test_rendering(self):
        system = derive_anf_system(FORWARD_SBOX)
        assert system.equations()[0] == "y0 = x1 ^ x0x2 ^ x3 ^ x0x3 ^ x0x1x3"
        assert str(system.polys[2]) == "1 ^ x0x1 ^ x2 ^ x0x2 ^ x3 ^ x1x3 ^ x0x1x3"

    def test_evaluate(self):
        system = derive_anf_system(FORWARD_SBOX)
        assert evaluate_anf(system.polys[0], 0) == 0
        assert evaluate_anf(system.polys[1], 0) == 1
        assert evaluate_anf(AnfPolynomial(4, frozenset({0})), 0b1011) == 1

    def test_degrees(self):
        assert algebraic_degree(derive_anf_system(FORWARD_SBOX)) == 3
        assert algebraic_degree(derive_anf_system(INVERSE_SBOX)) == 3
        assert algebraic_degree(derive_anf_system(TruthTable(1, 1, (0, 1)))) == 1


@settings(max_examples=60)
@given(st.integers(1, 8).flatmap(lambda n: st.integers(1, 8).flatmap(
    lambda m: st.lists(st.integers(0, (1 << m) - 1), min_size=1 << n, max_size=1 << n)
    .map(lambda outs: TruthTable(n, m, tuple(outs))))))
def test_system_reproduces_table(table):
    assert derive_anf_system(table).to_table() == table


def test_composition_is_identity():
    composed = TruthTable(4, 4, tuple(SBOX[INV_SBOX[x]] for x in range(16)))
    system = derive_anf_system(composed)
    assert [p.monomials for p in system.polys] == [frozenset({1 << i}) for i in range(4)]
    assert system.equations() == ["y0 = x0", "y1 = x1", "y2 = x2", "y3 = x3"]


def test_from_terms_cancels_duplicates():
    assert AnfPolynomial.from_terms(3, [(0,), (1,), (0,)]).monomials == {0b010}


class TestTruthTable:
    def test_validation(self):
        with pytest.raises(ValueError):
            TruthTable(2, 2, (0, 1, 2))
        with pytest.raises(ValueError):
            TruthTable(2, 1, (0, 1, 2, 0))

    def test_bijective(self):
        assert FORWARD_SBOX.is_bijective()
        assert not TruthTable(2, 2, (0, 0, 1, 2)).is_bijective()


class TestTableFiles:
    def test_pairs(self):
        text = "\n".join(f"{i:04b} {SBOX[i]:04b}" for i in range(16))
        assert parse_table(text) == FORWARD_SBOX

    def test_pairs_any_order_with_comments(self):
        lines = [f"{i:04b} {SBOX[i]:04b}" for i in reversed(range(16))]
        assert parse_table("# forward S-box\n\n" + "\n".join(lines)) == FORWARD_SBOX

    def test_hex(self):
        assert parse_table("E4D12FB83A6C5907\n") == FORWARD_SBOX

    @pytest.mark.parametrize("bad", ["", "0000 1110\n0000 0100", "0000 111x", "E4D", "00 1\n01 10"])
    def test_malformed(self, bad):
        with pytest.raises(ValueError):
            parse_table(bad)

    def test_load_builtin_and_file(self, tmp_path):
        assert load_table("builtin:forward") == FORWARD_SBOX
        assert load_table("builtin:inverse") == INVERSE_SBOX
        path = tmp_path / "s.txt"
        path.write_text("0000000000000000")
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            table = load_table(str(path))
        assert table.outputs == (0,) * 16
        assert any("not a bijection" in str(w.message) for w in caught)
