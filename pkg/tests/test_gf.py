import numpy as np
import pytest

from pgcode.errors import DivisionByZero, NotPrime, Reducible, TooLarge
from pgcode.gf import arith, factor_prime_power, field_new, frobenius


def poly_mul_mod_oracle(a, b, irr, p):
    """Naive polynomial multiplication mod irr, independent of gf.py tables."""
    h = len(irr) - 1
    prod = [0] * (2 * h)
    for i in range(h):
        for j in range(h):
            prod[i + j] = (prod[i + j] + a[i] * b[j]) % p
    for d in range(2 * h - 1, h - 1, -1):
        c = prod[d]
        prod[d] = 0
        for i in range(h):
            prod[d - h + i] = (prod[d - h + i] - c * irr[i]) % p
    return prod[:h]


def decode(v, p, h):
    return [(v // p**i) % p for i in range(h)]


def encode(coeffs, p):
    return sum(c * p**i for i, c in enumerate(coeffs))


def test_default_irreducible_gf4():
    # exhaustive scan over the 4 monic quadratics over F_2: only x^2+x+1 has
    # no root and no factorization, so it must be the default
    def has_factor(coeffs):
        for r in range(2):
            if (coeffs[0] + coeffs[1] * r + r * r) % 2 == 0:
                return True
        return False

    candidates = [(c0, c1, 1) for c0 in range(2) for c1 in range(2)]
    irreducible = [c for c in candidates if not has_factor(c)]
    assert irreducible == [(1, 1, 1)]
    f = field_new(2, 2)
    assert f.irreducible == (1, 1, 1)


def test_prime_field_identity_encoding():
    f = field_new(3, 1)
    assert f.q == 3
    for a in range(3):
        for b in range(3):
            assert f.add(a, b) == (a + b) % 3
            assert f.mul(a, b) == (a * b) % 3


def test_reducible_polynomial_rejected():
    # x^2 + 1 == (x+1)^2 over F_2
    with pytest.raises(Reducible):
        field_new(2, 2, [1, 0, 1])


def test_not_prime_and_too_large():
    with pytest.raises(NotPrime):
        field_new(4, 1)
    with pytest.raises(TooLarge):
        field_new(2, 17)


def test_gf4_products_against_polynomial_oracle():
    f = field_new(2, 2)
    # encoding: 2 = x, 3 = x + 1
    assert f.mul(2, 2) == 3
    assert f.inv(3) == 2
    for a in range(4):
        for b in range(4):
            expected = encode(
                poly_mul_mod_oracle(decode(a, 2, 2), decode(b, 2, 2), [1, 1, 1], 2), 2
            )
            assert f.mul(a, b) == expected
        assert f.mul(1, a) == a


def test_division_by_zero():
    f = field_new(2, 2)
    with pytest.raises(DivisionByZero):
        f.inv(0)
    with pytest.raises(DivisionByZero):
        f.div(3, 0)


@pytest.mark.parametrize("p,h", [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (3, 2), (2, 4), (2, 6)])
def test_field_laws_exhaustive_up_to_64(p, h):
    f = field_new(p, h)
    q = f.q
    a = np.repeat(np.arange(q), q * q).reshape(q, q, q)
    b = np.tile(np.repeat(np.arange(q), q), q).reshape(q, q, q)
    c = np.tile(np.arange(q), q * q).reshape(q, q, q)
    # associativity and distributivity on the full cube
    assert np.array_equal(f.mul_arr(f.mul_arr(a, b), c), f.mul_arr(a, f.mul_arr(b, c)))
    assert np.array_equal(f.add_arr(f.add_arr(a, b), c), f.add_arr(a, f.add_arr(b, c)))
    assert np.array_equal(
        f.mul_arr(a, f.add_arr(b, c)), f.add_arr(f.mul_arr(a, b), f.mul_arr(a, c))
    )
    nz = np.arange(1, q)
    assert np.all(f.mul_arr(nz, f.inv_arr(nz)) == 1)
    assert np.all(f.add_arr(np.arange(q), f.neg_arr(np.arange(q))) == 0)


@pytest.mark.parametrize("p,h", [(2, 2), (3, 2), (2, 4), (2, 6)])
def test_frobenius_order_h_is_identity(p, h):
    f = field_new(p, h)
    for a in range(f.q):
        assert f.frobenius(a, h) == a
        assert f.frobenius(a, 0) == a
    assert all(f.frobenius(1, e) == 1 for e in range(8))


def test_frobenius_gf4_squaring():
    f = field_new(2, 2)
    # x^2 = x + 1 under x^2+x+1
    assert frobenius(f, 2, 1) == 3


def test_deterministic_construction():
    f1 = field_new(2, 4)
    f2 = field_new(2, 4)
    assert f1.irreducible == f2.irreducible
    assert f1 == f2
    assert f1.description() == f2.description()


def test_arith_dispatch():
    f = field_new(3, 1)
    assert arith(f, "add", 2, 2) == 1
    assert arith(f, "sub", 0, 1) == 2
    assert arith(f, "neg", 1) == 2
    assert arith(f, "pow", 2, 4) == 1
    with pytest.raises(ValueError):
        arith(f, "xor", 1, 1)


def test_description_roundtrip():
    f = field_new(2, 3)
    parts = [int(x) for x in f.description().split()]
    assert parts[0] == 2 and parts[1] == 3
    g = field_new(parts[0], parts[1], parts[2:])
    assert g == f


def test_factor_prime_power():
    assert factor_prime_power(32) == (2, 5)
    assert factor_prime_power(49) == (7, 2)
    assert factor_prime_power(17) == (17, 1)
    with pytest.raises(NotPrime):
        factor_prime_power(12)


def test_large_field_digit_addition_path():
    # q = 3^7 = 2187 exceeds the full-add-table limit, exercising the
    # digit-wise vectorised addition and the log/antilog multiplication
    f = field_new(3, 7)
    assert f._add_table is None
    rng = np.random.default_rng(0)
    a = rng.integers(0, f.q, 500)
    b = rng.integers(0, f.q, 500)
    c = rng.integers(0, f.q, 500)
    assert np.array_equal(
        f.mul_arr(a, f.add_arr(b, c)), f.add_arr(f.mul_arr(a, b), f.mul_arr(a, c))
    )
    for x, y in zip(a[:40].tolist(), b[:40].tolist()):
        assert f.add(x, y) == int(f.add_arr(np.array(x), np.array(y)))
        assert f.mul(x, y) == int(f.mul_arr(np.array(x), np.array(y)))
        if x:
            assert f.mul(x, f.inv(x)) == 1
    assert f.frobenius(5, 7) == 5  # a^(p^h) = a
