import pytest

from pgblock.gf import (BUILTIN_MODULI, Field, FieldError, InverseOfZero,
                        NoBuiltinModulus, NonPrimeP, ReducibleModulus,
                        field_for_order)

TABLE_ORDERS = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27]


def test_prime_field_construction():
    f = Field(2)
    assert (f.p, f.e, f.q) == (2, 1, 2)
    assert f.elements() == [0, 1]


def test_gf4_explicit_modulus():
    f = Field(2, 2, [1, 1, 1])
    assert f.q == 4
    assert f.mul(2, 2) == 3  # x * x = x + 1


def test_reducible_modulus_rejected():
    # x^2 + 1 = (x + 1)^2 over GF(2)
    with pytest.raises(ReducibleModulus):
        Field(2, 2, [1, 0, 1])


def test_non_prime_p():
    with pytest.raises(NonPrimeP):
        Field(4)
    with pytest.raises(NonPrimeP):
        Field(1)


def test_no_builtin_modulus():
    with pytest.raises(NoBuiltinModulus):
        Field(2, 5)  # q = 32 is outside the built-in table


def test_malformed_modulus():
    with pytest.raises(FieldError):
        Field(2, 2, [1, 1])      # wrong degree
    with pytest.raises(FieldError):
        Field(3, 2, [1, 0, 2])   # not monic


def test_spec_arithmetic_examples():
    assert Field(3).add(2, 2) == 1
    assert Field(2, 2).mul(2, 2) == 3
    assert Field(5).inv(2) == 3


def test_inverse_of_zero():
    with pytest.raises(InverseOfZero):
        Field(7).inv(0)


def test_arith_dispatcher():
    f = Field(3)
    assert f.arith("add", 2, 2) == 1
    assert f.arith("sub", 0, 1) == 2
    assert f.arith("mul", 2, 2) == 1
    assert f.arith("neg", 1) == 2
    assert f.arith("inv", 2) == 2
    with pytest.raises(FieldError):
        f.arith("add", 2)
    with pytest.raises(FieldError):
        f.arith("mul", 1, 5)
    with pytest.raises(FieldError):
        f.arith("frobnicate", 1, 1)


def test_elements_order():
    for q in (2, 3, 4):
        f = field_for_order(q)
        assert f.elements() == list(range(q))


@pytest.mark.parametrize("q", TABLE_ORDERS)
def test_field_axioms_exhaustive(q):
    f = field_for_order(q)
    elems = f.elements()
    for a in elems:
        assert f.add(a, 0) == a
        assert f.mul(a, 1) == a
        assert f.add(a, f.neg(a)) == 0
        if a:
            assert f.mul(a, f.inv(a)) == 1
        for b in elems:
            assert f.add(a, b) == f.add(b, a)
            assert f.mul(a, b) == f.mul(b, a)
            for c in elems:
                assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
                assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
                assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))


@pytest.mark.parametrize("q", TABLE_ORDERS)
def test_frobenius(q):
    f = field_for_order(q)
    p = f.p
    for a in f.elements():
        for b in f.elements():
            assert f.pow(f.add(a, b), p) == f.add(f.pow(a, p), f.pow(b, p))


def test_builtin_moduli_are_monic_and_used():
    for q, modulus in BUILTIN_MODULI.items():
        f = field_for_order(q)
        assert f.q == q
        assert f.modulus == modulus
        assert modulus[-1] == 1


def test_any_irreducible_modulus_accepted():
    # x^2 + x + 2 is another irreducible quadratic over GF(3)
    f = Field(3, 2, [2, 1, 1])
    assert f.q == 9
    for a in range(1, 9):
        assert f.mul(a, f.inv(a)) == 1


def test_equality_and_hash():
    assert Field(2, 2) == Field(2, 2, [1, 1, 1])
    assert hash(Field(5)) == hash(Field(5))
    assert Field(2) != Field(3)


def test_field_for_order_rejects_non_prime_powers():
    with pytest.raises(FieldError):
        field_for_order(6)
    with pytest.raises(FieldError):
        field_for_order(1)
