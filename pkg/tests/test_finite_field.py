import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from powerag.finite_field import FieldError, field_make, parse_field

SMALL = [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3), (2, 5)]
UP_TO_256 = SMALL + [(2, 6), (7, 2), (2, 7), (3, 4), (2, 8)]


def poly_mulmod(a, b, p, m, modulus):
    """Oracle: schoolbook product of digit vectors, reduced by the modulus."""
    da = [(a // p ** i) % p for i in range(m)]
    db = [(b // p ** i) % p for i in range(m)]
    prod = [0] * (2 * m)
    for i in range(m):
        for j in range(m):
            prod[i + j] += da[i] * db[j]
    for k in range(2 * m - 1, m - 1, -1):
        c = prod[k] % p
        prod[k] = 0
        for i in range(m + 1):
            prod[k - m + i] -= c * modulus[i]
    return sum((prod[i] % p) * p ** i for i in range(m))


def brute_lowest_irreducible(p, m):
    """Oracle: smallest monic degree-m polynomial that is not a product of
    two monic polynomials of positive degree (found by enumeration)."""
    def to_int(poly):
        return sum(c * p ** i for i, c in enumerate(poly))

    def mul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
        return out

    reducible = set()
    for d in range(1, m // 2 + 1):
        for lo1 in itertools.product(range(p), repeat=d):
            for lo2 in itertools.product(range(p), repeat=m - d):
                reducible.add(to_int(mul(list(lo1) + [1], list(lo2) + [1])))
    for rep in range(p ** m, 2 * p ** m):
        if rep not in reducible:
            return rep


def test_prime_field():
    F = field_make(2, 1)
    assert F.q == 2 and F.m == 1
    assert [F.add(1, 1), F.mul(1, 1)] == [0, 1]


def test_gf16_modulus_is_lowest():
    F = field_make(2, 4)
    assert F.modulus == (1, 1, 0, 0, 1)  # z^4 + z + 1
    assert sum(c * 2 ** i for i, c in enumerate(F.modulus)) == brute_lowest_irreducible(2, 4)


@pytest.mark.parametrize("p,m", [(2, 2), (2, 3), (3, 2), (5, 2), (2, 5), (3, 3), (7, 2)])
def test_modulus_matches_enumeration(p, m):
    F = field_make(p, m)
    assert sum(c * p ** i for i, c in enumerate(F.modulus)) == brute_lowest_irreducible(p, m)


def test_non_prime_characteristic_rejected():
    with pytest.raises(FieldError):
        field_make(4, 2)


def test_order_bound():
    with pytest.raises(FieldError):
        field_make(2, 17)
    assert field_make(2, 16).q == 1 << 16


def test_mul_examples(gf16):
    assert gf16.mul(2, 8) == 3  # z * z^3 = z + 1
    a = gf16(11)
    assert a * gf16(1) == a
    assert a * gf16(0) == gf16(0)


def test_inv_examples(gf4):
    assert gf4.inv(1) == 1
    assert gf4.inv(2) == 3  # omega^-1 = omega^2
    with pytest.raises(ZeroDivisionError):
        gf4(0).inverse()


def test_mismatched_fields(gf4, gf16):
    with pytest.raises(FieldError):
        gf4(1) * gf16(1)


def test_element_range(gf4):
    with pytest.raises(FieldError):
        gf4(4)


def test_generator_order():
    for p, m in UP_TO_256:
        F = field_make(p, m)
        powers = {F.pow(F.generator, k) for k in range(F.q - 1)}
        assert len(powers) == F.q - 1


@pytest.mark.parametrize("p,m", UP_TO_256)
def test_mul_table_matches_schoolbook(p, m):
    F = field_make(p, m)
    q = F.q
    ref = np.array([[poly_mulmod(a, b, p, m, F.modulus) for b in range(q)] for a in range(q)])
    assert np.array_equal(F.mul_table.astype(np.int64), ref)


@pytest.mark.parametrize("p,m", SMALL)
def test_axioms_exhaustive(p, m):
    F = field_make(p, m)
    q = F.q
    a, b, c = np.meshgrid(np.arange(q), np.arange(q), np.arange(q), indexing="ij")
    a, b, c = (x.astype(F.dtype) for x in (a, b, c))
    mul, add = F.vmul, F.vadd
    assert np.array_equal(mul(mul(a, b), c), mul(a, mul(b, c)))
    assert np.array_equal(add(add(a, b), c), add(a, add(b, c)))
    assert np.array_equal(mul(a, add(b, c)), add(mul(a, b), mul(a, c)))
    assert np.array_equal(mul(a, b), mul(b, a))
    nz = np.arange(1, q).astype(F.dtype)
    assert np.all(F.vmul(nz, F.vinv(nz)) == 1)
    allx = np.arange(q).astype(F.dtype)
    assert np.all(F.vadd(allx, F.vneg(allx)) == 0)


@pytest.mark.parametrize("p,m", UP_TO_256)
def test_frobenius_exhaustive(p, m):
    F = field_make(p, m)
    a, b = np.meshgrid(np.arange(F.q), np.arange(F.q), indexing="ij")
    lhs = F.vpow(F.vadd(a.astype(F.dtype), b.astype(F.dtype)), p)
    rhs = F.vadd(F.vpow(a, p), F.vpow(b, p))
    assert np.array_equal(lhs, rhs)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(UP_TO_256), st.data())
def test_axioms_random(pm, data):
    F = field_make(*pm)
    a, b, c = (data.draw(st.integers(0, F.q - 1)) for _ in range(3))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.sub(F.add(a, b), b) == a
    if a:
        assert F.mul(a, F.inv(a)) == 1


@pytest.mark.parametrize("p,m", [(2, 10), (3, 7), (2, 16)])
def test_large_field_vector_paths(p, m):
    F = field_make(p, m)
    rng = np.random.default_rng(3)
    a = rng.integers(0, F.q, 300)
    b = rng.integers(0, F.q, 300)
    assert list(F.vmul(a, b)) == [F.mul(int(x), int(y)) for x, y in zip(a, b)]
    assert list(F.vadd(a, b)) == [F.add(int(x), int(y)) for x, y in zip(a, b)]
    for x, y in list(zip(a, b))[:20]:
        assert F.mul(int(x), int(y)) == poly_mulmod(int(x), int(y), p, m, F.modulus)


@pytest.mark.parametrize("p,m", [(2, 4), (5, 2), (3, 3), (2, 9)])
def test_matmul_matches_naive(p, m):
    F = field_make(p, m)
    rng = np.random.default_rng(0)
    A = rng.integers(0, F.q, (7, 9))
    B = rng.integers(0, F.q, (9, 5))
    C = F.matmul(A, B)
    for i in range(7):
        for j in range(5):
            acc = 0
            for k in range(9):
                acc = F.add(acc, F.mul(int(A[i, k]), int(B[k, j])))
            assert C[i, j] == acc


def test_parse_field():
    assert parse_field("gf(2^4)") is field_make(2, 4)
    assert parse_field("GF(25)") is field_make(5, 2)
    with pytest.raises(FieldError):
        parse_field("gf(6)")
    assert str(field_make(2, 4)) == "gf(2^4)"


def test_field_element_operators(gf16):
    a, b = gf16(7), gf16(12)
    assert (a + b) - b == a
    assert (a * b) / b == a
    assert a ** 15 == gf16(1)
    assert -a + a == gf16(0)
    assert int(a) == 7 and str(a) == "7"
