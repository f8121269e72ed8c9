import itertools

import numpy as np
import pytest

from hochschild import exactla
from hochschild.errors import ContainmentViolation, NotACocycle, NotPrime
from hochschild.exactla import (
    PrimeField,
    PrimeMatrix,
    kernel_basis,
    kernel_mod,
    quotient,
    quotient_coords,
    rref,
    rref_mod,
)


def F(p):
    return PrimeField(p)


def test_prime_field_rejects_composites():
    for n in [0, 1, 4, 6, 9, 15, 1024]:
        with pytest.raises(NotPrime):
            PrimeField(n)
    for p in [2, 3, 5, 7, 65521]:
        PrimeField(p)


def test_prime_field_inverses_exact():
    for p in [2, 3, 5, 7, 13]:
        f = F(p)
        for a in range(1, p):
            assert (a * f.inv(a)) % p == 1


def test_rref_zero_matrix():
    m = PrimeMatrix.zeros(F(3), 3, 4)
    r, rank, pivots = rref(m)
    assert rank == 0 and pivots == []
    assert np.array_equal(r.data, np.zeros((3, 4), dtype=np.int64))


def test_rref_identity():
    m = PrimeMatrix.identity(F(2), 3)
    r, rank, pivots = rref(m)
    assert rank == 3 and pivots == [0, 1, 2]
    assert np.array_equal(r.data, np.eye(3, dtype=np.int64))


def test_rref_dependent_rows_mod5():
    # row 2 = 2 * row 1 mod 5
    m = PrimeMatrix(F(5), [[1, 2], [2, 4]])
    _, rank, pivots = rref(m)
    assert rank == 1 and pivots == [0]


def test_rref_idempotent():
    rng = np.random.default_rng(11)
    for p in [2, 3, 5]:
        for _ in range(20):
            a = rng.integers(0, p, size=(4, 6))
            r1, _, _ = rref_mod(a, p)
            r2, _, _ = rref_mod(r1, p)
            assert np.array_equal(r1, r2)


def test_kernel_injective_map():
    assert kernel_basis(PrimeMatrix.identity(F(3), 2)).rows == 0


def test_kernel_zero_map():
    k = kernel_basis(PrimeMatrix.zeros(F(2), 3, 3))
    assert k.rows == 3
    assert exactla.rank_mod(k.data, 2) == 3


def test_kernel_single_row_f2():
    # the only nonzero solution of x + y = 0 over F_2 is (1,1): enumerate all 4
    k = kernel_mod(np.array([[1, 1]]), 2)
    assert k.shape == (1, 2)
    sols = [v for v in itertools.product(range(2), repeat=2) if (v[0] + v[1]) % 2 == 0]
    span = {tuple((c * k[0]) % 2) for c in range(2)}
    assert span == set(map(tuple, sols))


def test_kernel_rows_annihilated():
    rng = np.random.default_rng(5)
    for p in [2, 3, 5]:
        for _ in range(25):
            m = rng.integers(0, p, size=(rng.integers(1, 6), rng.integers(1, 6)))
            k = kernel_mod(m, p)
            if k.shape[0]:
                assert not ((m @ k.T) % p).any()


def test_rank_nullity():
    rng = np.random.default_rng(7)
    for p in [2, 3, 5]:
        for _ in range(40):
            m = rng.integers(0, p, size=(rng.integers(1, 7), rng.integers(1, 7)))
            assert exactla.rank_mod(m, p) + kernel_mod(m, p).shape[0] == m.shape[1]


def test_quotient_by_zero_subspace():
    f = F(2)
    z = PrimeMatrix.identity(f, 2)
    b = PrimeMatrix.zeros(f, 0, 2)
    q = quotient(z, b)
    assert q.dim == 2


def test_quotient_full():
    f = F(3)
    z = PrimeMatrix.identity(f, 3)
    q = quotient(z, z)
    assert q.dim == 0
    assert quotient_coords(q, [1, 2, 0]).shape == (0,)


def test_quotient_line_in_plane_f2():
    f = F(2)
    z = PrimeMatrix.identity(f, 2)
    b = PrimeMatrix(f, [[1, 1]])
    q = quotient(z, b)
    assert q.dim == 1
    # (1,0) and (0,1) differ by (1,1) in B, so they represent the same coset
    c0 = quotient_coords(q, [1, 0])
    c1 = quotient_coords(q, [0, 1])
    assert np.array_equal(c0, c1)
    assert c0.any()


def test_quotient_containment_checked():
    f = F(2)
    z = PrimeMatrix(f, [[1, 0, 0]])
    b = PrimeMatrix(f, [[0, 1, 0]])
    with pytest.raises(ContainmentViolation):
        quotient(z, b)


def test_quotient_coords_zero_and_sections():
    f = F(5)
    z = PrimeMatrix.identity(f, 3)
    b = PrimeMatrix(f, [[1, 1, 0]])
    q = quotient(z, b)
    assert not quotient_coords(q, [0, 0, 0]).any()
    for k in range(q.dim):
        row = q.class_basis.data[k]
        coords = quotient_coords(q, row)
        expected = np.zeros(q.dim, dtype=np.int64)
        expected[k] = 1
        assert np.array_equal(coords, expected)
        # adding a boundary row does not move the class
        shifted = (row + b.data[0]) % 5
        assert np.array_equal(quotient_coords(q, shifted), expected)


def test_quotient_coords_outside_cocycles():
    f = F(2)
    z = PrimeMatrix(f, [[1, 0, 0], [0, 1, 0]])
    q = quotient(z, PrimeMatrix.zeros(f, 0, 3))
    with pytest.raises(NotACocycle):
        quotient_coords(q, [0, 0, 1])


def test_quotient_coords_constant_on_cosets_random():
    rng = np.random.default_rng(42)
    for p in [2, 3, 5]:
        f = F(p)
        z = PrimeMatrix.identity(f, 4)
        b = PrimeMatrix(f, rng.integers(0, p, size=(2, 4)))
        q = quotient(z, b)
        for _ in range(100):
            v = rng.integers(0, p, size=4)
            bcomb = (rng.integers(0, p, size=b.rows) @ b.data) % p
            assert np.array_equal(
                quotient_coords(q, v), quotient_coords(q, (v + bcomb) % p)
            )


def test_projection_section_identity():
    rng = np.random.default_rng(3)
    for p in [2, 3]:
        f = F(p)
        z = PrimeMatrix.identity(f, 5)
        b = PrimeMatrix(f, rng.integers(0, p, size=(2, 5)))
        q = quotient(z, b)
        assert q.dim == 5 - exactla.rank_mod(b.data, p)
        for k in range(q.dim):
            coords = quotient_coords(q, q.class_basis.data[k])
            assert coords[k] == 1 and coords.sum() == 1
