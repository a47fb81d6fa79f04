"""Field layer: exact arithmetic, trace, character, Fourier kernels."""

import cmath
import itertools
import math

import numpy as np
import pytest
import sympy

from qvint.errors import ParameterError, ResourceCapError
from qvint.field import (FieldParams, character_orthogonality_check,
                         enumerate_field, parse_field_spec, smallest_irreducible)

SMALL_FIELDS = (2, 3, 4, 5, 7, 8, 9)


def params_for(q):
    return parse_field_spec(str(q))


def sympy_field_mul(coeffs_a, coeffs_b, modulus, p):
    """Independent product in the polynomial basis via sympy."""
    x = sympy.Symbol("x")
    fa = sympy.Poly(list(reversed(coeffs_a)), x, modulus=p)
    fb = sympy.Poly(list(reversed(coeffs_b)), x, modulus=p)
    fm = sympy.Poly(list(reversed(modulus)), x, modulus=p)
    rem = (fa * fb).rem(fm)
    out = [int(c) % p for c in reversed(rem.all_coeffs())]
    out += [0] * (len(modulus) - 1 - len(out))
    return tuple(out)


class TestConstruction:
    def test_prime_field(self):
        f = FieldParams(7)
        assert (f.p, f.r, f.q) == (7, 1, 7)
        assert f.modulus == (0, 1)

    def test_default_moduli_are_smallest_irreducible(self):
        assert FieldParams(2, 2).modulus == (1, 1, 1)       # x^2 + x + 1
        assert FieldParams(2, 3).modulus == (1, 0, 1, 1)    # x^3 + x^2 + 1
        assert FieldParams(3, 2).modulus == (1, 0, 1)       # x^2 + 1

    def test_default_moduli_match_sympy_irreducibility(self):
        x = sympy.Symbol("x")
        for p, r in ((2, 2), (2, 3), (3, 2), (5, 2)):
            modulus = smallest_irreducible(p, r)
            poly = sympy.Poly(list(reversed(modulus)), x, modulus=p)
            assert poly.is_irreducible

    def test_explicit_modulus_validation(self):
        FieldParams(3, 2, modulus=(1, 0, 1))
        with pytest.raises(ParameterError):
            FieldParams(3, 2, modulus=(2, 0, 1))  # x^2 + 2 = (x+1)(x+2)
        with pytest.raises(ParameterError):
            FieldParams(3, 2, modulus=(1, 0, 2))  # not monic
        with pytest.raises(ParameterError):
            FieldParams(3, 2, modulus=(1, 1))     # wrong degree

    def test_non_prime_characteristic_rejected(self):
        for bad in (0, 1, 4, 6, 9):
            with pytest.raises(ParameterError):
                FieldParams(bad)

    def test_order_cap(self):
        with pytest.raises(ResourceCapError):
            FieldParams(2, 20, max_q=1 << 16)

    def test_parse_field_spec(self):
        assert parse_field_spec("9").q == 9
        assert parse_field_spec("4:1,1,1").modulus == (1, 1, 1)
        for bad in ("6", "12", "1", "abc"):
            with pytest.raises(ParameterError):
                parse_field_spec(bad)

    def test_table_cap(self):
        f = FieldParams(2081)  # prime above the dense-table cap
        with pytest.raises(ResourceCapError):
            f.add_rows()


class TestArithmetic:
    @pytest.mark.parametrize("q", SMALL_FIELDS)
    def test_ring_axioms_exhaustive(self, q):
        f = params_for(q)
        elems = enumerate_field(f)
        zero, one = f.zero(), f.one()
        for a, b, c in itertools.product(elems, repeat=3):
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
        for a in elems:
            assert a + zero == a
            assert a * one == a
            assert a + (-a) == zero
            if not a.is_zero():
                assert a * a.inverse() == one

    @pytest.mark.parametrize("q", SMALL_FIELDS)
    def test_commutativity(self, q):
        f = params_for(q)
        for a, b in itertools.product(enumerate_field(f), repeat=2):
            assert a + b == b + a
            assert a * b == b * a

    def test_f4_known_values(self):
        f4 = FieldParams(2, 2)
        w = f4.from_index(2)
        assert (w * w).coeffs == (1, 1)
        assert w.inverse().coeffs == (1, 1)
        assert (w + w).is_zero()

    @pytest.mark.parametrize("q", (4, 8, 9))
    def test_extension_multiplication_against_sympy(self, q):
        f = params_for(q)
        for a, b in itertools.product(enumerate_field(f), repeat=2):
            expected = sympy_field_mul(a.coeffs, b.coeffs, f.modulus, f.p)
            assert (a * b).coeffs == expected

    def test_division_and_powers(self):
        f = FieldParams(5)
        three, four = f.element(3), f.element(4)
        assert (three / four) * four == three
        assert three ** 0 == f.one()
        assert three ** -1 == three.inverse()
        assert three ** 4 == f.one()  # multiplicative group order
        with pytest.raises(ZeroDivisionError):
            f.zero().inverse()

    def test_mixed_field_arithmetic_rejected(self):
        with pytest.raises(ParameterError):
            FieldParams(3).element(1) + FieldParams(5).element(1)

    def test_int_coercion(self):
        f = FieldParams(7)
        assert f.element(3) + 4 == f.zero()
        assert 2 * f.element(4) == f.element(1)


class TestCanonicalOrder:
    def test_index_roundtrip(self):
        for q in SMALL_FIELDS:
            f = params_for(q)
            for i, e in enumerate(enumerate_field(f)):
                assert e.index() == i
                assert f.from_index(i) == e

    def test_f4_enumeration_order(self):
        f4 = FieldParams(2, 2)
        assert [e.coeffs for e in enumerate_field(f4)] == [
            (0, 0), (1, 0), (0, 1), (1, 1)
        ]

    def test_tables_agree_with_operators(self):
        for q in (5, 4, 9):
            f = params_for(q)
            add, mul = f.add_rows(), f.mul_rows()
            elems = enumerate_field(f)
            for a in elems:
                for b in elems:
                    assert add[a.index()][b.index()] == (a + b).index()
                    assert mul[a.index()][b.index()] == (a * b).index()


class TestTraceAndCharacter:
    def test_prime_field_trace_is_identity(self):
        f = FieldParams(7)
        for e in enumerate_field(f):
            assert e.trace() == e.coeffs[0]

    def test_f4_trace_and_character(self):
        f4 = FieldParams(2, 2)
        w = f4.from_index(2)
        assert w.trace() == 1
        assert abs(w.character() - (-1)) < 1e-12
        assert abs(f4.zero().character() - 1) < 1e-12

    @pytest.mark.parametrize("q", SMALL_FIELDS)
    def test_trace_is_linear_over_prime_subfield(self, q):
        f = params_for(q)
        elems = enumerate_field(f)
        for a, b in itertools.product(elems, repeat=2):
            assert (a + b).trace() == (a.trace() + b.trace()) % f.p

    @pytest.mark.parametrize("q", SMALL_FIELDS)
    def test_character_multiplicative_in_addition(self, q):
        f = params_for(q)
        elems = enumerate_field(f)
        for a, b in itertools.product(elems, repeat=2):
            assert abs((a + b).character() - a.character() * b.character()) < 1e-9

    @pytest.mark.parametrize("q", SMALL_FIELDS)
    def test_character_values_are_unit_modulus_p_th_roots(self, q):
        f = params_for(q)
        for e in enumerate_field(f):
            val = e.character()
            assert abs(abs(val) - 1) < 1e-12
            assert abs(val ** f.p - 1) < 1e-9

    @pytest.mark.parametrize("q", SMALL_FIELDS)
    def test_orthogonality(self, q):
        assert character_orthogonality_check(params_for(q))

    def test_character_is_nontrivial_on_extensions(self):
        # The naive reading exp(2*pi*i*Tr(z)) would make every character 1;
        # dividing by p has to leave at least one value away from 1.
        for q in (4, 8, 9):
            f = params_for(q)
            values = [e.character() for e in enumerate_field(f)]
            assert any(abs(v - 1) > 0.5 for v in values)


class TestFourierKernel:
    @pytest.mark.parametrize("q", (2, 3, 4, 5, 9))
    def test_fourier_matrix_is_unitary(self, q):
        f = params_for(q)
        m = f.fourier_matrix()
        assert np.max(np.abs(m @ m.conj().T - np.eye(q))) < 1e-12

    def test_character_table_entries(self):
        f = FieldParams(3)
        table = f.character_table()
        omega = cmath.exp(2j * cmath.pi / 3)
        for a in range(3):
            for b in range(3):
                assert abs(table[a, b] - omega ** ((a * b) % 3)) < 1e-12

    def test_fourier_matrix_row_scaling(self):
        f = FieldParams(5)
        assert np.max(np.abs(
            f.fourier_matrix() * math.sqrt(5) - f.character_table()
        )) < 1e-12
