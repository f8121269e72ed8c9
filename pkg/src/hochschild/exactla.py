"""Exact linear algebra over a prime field F_p.

Everything downstream (cochain complexes, derivation spaces, restricted Lie
invariants) reduces to rank / kernel / quotient computations over F_p, so this
module is the computational substrate.  Matrices are dense ``int64`` numpy
arrays holding canonical residues in ``[0, p)``; elimination uses a
deterministic pivot rule (leftmost column, then topmost row) so every basis
produced here is reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadParameter, ContainmentViolation, NotACocycle, NotPrime

MAX_MODULUS = 1 << 16


def is_prime(n: int) -> bool:
    """Primality by trial division; the moduli here are small."""
    if n < 2:
        return False
    for d in range(2, int(math.isqrt(n)) + 1):
        if n % d == 0:
            return False
    return True


class PrimeField:
    """The prime field F_p.  Arithmetic is exact residue arithmetic."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not isinstance(p, (int, np.integer)):
            raise BadParameter(f"modulus must be an integer, got {p!r}")
        p = int(p)
        if not is_prime(p):
            raise NotPrime(f"modulus {p} is not prime")
        if p > MAX_MODULUS:
            raise BadParameter(f"modulus {p} exceeds the supported bound {MAX_MODULUS}")
        self.p = p

    def inv(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(a, -1, self.p)

    def neg(self, a: int) -> int:
        return (-int(a)) % self.p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


def canon(arr, p: int) -> np.ndarray:
    """Canonical residues mod p, as a fresh int64 array."""
    return np.asarray(arr, dtype=np.int64) % p


def freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (a @ b) % p


def rref_mod(mat, p: int):
    """Reduced row echelon form over F_p.

    Returns ``(R, rank, pivots)`` where ``R`` is the (unique) RREF of ``mat``,
    ``rank`` the number of pivots and ``pivots`` the pivot column list.  The
    input is not mutated.
    """
    a = canon(mat, p)
    nrows, ncols = a.shape
    pivots = []
    row = 0
    for col in range(ncols):
        if row >= nrows:
            break
        nz = np.nonzero(a[row:, col])[0]
        if nz.size == 0:
            continue
        pr = row + int(nz[0])
        if pr != row:
            a[[row, pr]] = a[[pr, row]]
        inv = pow(int(a[row, col]), -1, p)
        a[row] = (a[row] * inv) % p
        other = np.nonzero(a[:, col])[0]
        other = other[other != row]
        if other.size:
            a[other] = (a[other] - np.outer(a[other, col], a[row])) % p
        pivots.append(col)
        row += 1
    return a, len(pivots), pivots


def rank_mod(mat, p: int) -> int:
    return rref_mod(mat, p)[1]


def kernel_mod(mat, p: int) -> np.ndarray:
    """Basis (as rows) of the right kernel {v : mat @ v = 0} over F_p.

    The basis is in the canonical form induced by the RREF: one row per free
    column, with a 1 in that column.
    """
    a = canon(mat, p)
    nrows, ncols = a.shape
    r, rank, pivots = rref_mod(a, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, c in enumerate(free):
        basis[k, c] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-r[i, c]) % p
    return basis


def row_space_coords(rows: np.ndarray, v: np.ndarray, p: int):
    """Coordinates of ``v`` in the row space of ``rows``, or None.

    Solves ``c @ rows = v`` exactly; ``rows`` need not be in RREF.
    """
    rows = canon(rows, p)
    v = canon(v, p)
    if rows.shape[0] == 0:
        return np.zeros(0, dtype=np.int64) if not v.any() else None
    aug = np.concatenate([rows, np.eye(rows.shape[0], dtype=np.int64)], axis=1)
    r, rank, pivots = rref_mod(aug, p)
    ncols = rows.shape[1]
    resid = v.copy()
    coords = np.zeros(rows.shape[0], dtype=np.int64)
    for i, pc in enumerate(pivots):
        if pc >= ncols:
            break
        if resid[pc]:
            c = int(resid[pc])
            resid = (resid - c * r[i, :ncols]) % p
            coords = (coords + c * r[i, ncols:]) % p
    if resid.any():
        return None
    return coords


def row_space_contains(rows: np.ndarray, v: np.ndarray, p: int) -> bool:
    return row_space_coords(rows, v, p) is not None


def inverse_mod(mat, p: int) -> np.ndarray:
    """Inverse of a square matrix over F_p; raises if singular."""
    a = canon(mat, p)
    n = a.shape[0]
    if a.shape != (n, n):
        raise BadParameter("inverse of a non-square matrix")
    aug = np.concatenate([a, np.eye(n, dtype=np.int64)], axis=1)
    r, rank, _ = rref_mod(aug, p)
    if rank < n or not np.array_equal(r[:, :n], np.eye(n, dtype=np.int64)):
        raise BadParameter("matrix is singular over F_p")
    return r[:, n:]


class PrimeMatrix:
    """A dense matrix over F_p with canonical residues, immutable once built."""

    __slots__ = ("field", "data")

    def __init__(self, field: PrimeField, data):
        self.field = field
        arr = canon(data, field.p)
        if arr.ndim != 2:
            raise BadParameter(f"matrix data must be 2-dimensional, got shape {arr.shape}")
        self.data = freeze(arr)

    @classmethod
    def zeros(cls, field: PrimeField, rows: int, cols: int) -> "PrimeMatrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: PrimeField, n: int) -> "PrimeMatrix":
        return cls(field, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def __matmul__(self, other: "PrimeMatrix") -> "PrimeMatrix":
        if self.field != other.field:
            raise BadParameter("matrix product over different fields")
        return PrimeMatrix(self.field, matmul_mod(self.data, other.data, self.field.p))

    def __eq__(self, other):
        return (
            isinstance(other, PrimeMatrix)
            and self.field == other.field
            and self.data.shape == other.data.shape
            and np.array_equal(self.data, other.data)
        )

    def __repr__(self):
        return f"PrimeMatrix(p={self.field.p}, shape={self.data.shape})"


def rref(m: PrimeMatrix):
    """RREF of a PrimeMatrix: ``(R, rank, pivots)``."""
    r, rank, pivots = rref_mod(m.data, m.field.p)
    return PrimeMatrix(m.field, r), rank, pivots


def kernel_basis(m: PrimeMatrix) -> PrimeMatrix:
    """Rows form a basis of ``{v : m @ v = 0}``."""
    return PrimeMatrix(m.field, kernel_mod(m.data, m.field.p))


@dataclass(frozen=True)
class QuotientBasis:
    """A quotient Z/B of row spaces B <= Z <= F_p^ambient.

    ``class_basis`` rows are coset representatives extending a basis of B to a
    basis of Z; ``projection`` maps Z-coordinates (with respect to the RREF
    basis of Z stored in ``cocycle_basis``) to class coordinates, and is a left
    inverse of the inclusion of the class representatives.
    """

    field: PrimeField
    ambient_dim: int
    cocycle_basis: PrimeMatrix
    boundary_basis: PrimeMatrix
    class_basis: PrimeMatrix
    projection: PrimeMatrix

    @property
    def dim(self) -> int:
        return self.class_basis.rows


def quotient(z: PrimeMatrix, b: PrimeMatrix) -> QuotientBasis:
    """Quotient of the row space of ``z`` by the row space of ``b``.

    Raises ContainmentViolation when B is not contained in Z.  The class basis
    is chosen deterministically: rows of rref(Z) that are independent modulo B,
    taken in order.
    """
    if z.field != b.field:
        raise BadParameter("quotient over different fields")
    if b.cols != z.cols:
        raise BadParameter("ambient dimensions differ")
    p = z.field.p
    rz, rank_z, _ = rref_mod(z.data, p)
    rz = rz[:rank_z]
    rb, rank_b, _ = rref_mod(b.data, p)
    rb = rb[:rank_b]
    for row in rb:
        if row_space_coords(rz, row, p) is None:
            raise ContainmentViolation("boundary space is not contained in the cocycle space")

    # Pick cocycle-basis rows completing rb to a basis of Z.
    reps = []
    current = rb
    for row in rz:
        cand = np.concatenate([current, row[None, :]], axis=0)
        if rank_mod(cand, p) > current.shape[0]:
            reps.append(row)
            current = cand
    class_rows = (
        np.array(reps, dtype=np.int64) if reps else np.zeros((0, z.cols), dtype=np.int64)
    )

    # Work in Z-coordinates: S rows = [B basis; class reps] expressed against rref(Z).
    def z_coords(v):
        c = row_space_coords(rz, v, p)
        assert c is not None
        return c

    s = np.zeros((rank_z, rank_z), dtype=np.int64)
    for i, row in enumerate(rb):
        s[i] = z_coords(row)
    for k, row in enumerate(class_rows):
        s[rank_b + k] = z_coords(row)
    if rank_z:
        s_inv = inverse_mod(s, p)
        proj = s_inv[:, rank_b:]
    else:
        proj = np.zeros((0, 0), dtype=np.int64)

    field = z.field
    return QuotientBasis(
        field=field,
        ambient_dim=z.cols,
        cocycle_basis=PrimeMatrix(field, rz),
        boundary_basis=PrimeMatrix(field, rb),
        class_basis=PrimeMatrix(field, class_rows),
        projection=PrimeMatrix(field, proj),
    )


def quotient_coords(q: QuotientBasis, v) -> np.ndarray:
    """Coordinates of the coset ``[v]`` against the class basis.

    ``v`` must lie in the row space of ``q.cocycle_basis``; constant on cosets
    of the boundary space.
    """
    p = q.field.p
    v = canon(v, p)
    c = row_space_coords(q.cocycle_basis.data, v, p)
    if c is None:
        raise NotACocycle("vector lies outside the cocycle space")
    if q.dim == 0:
        return np.zeros(0, dtype=np.int64)
    return (c @ q.projection.data) % p


def class_representative(q: QuotientBasis, coords) -> np.ndarray:
    """The stored coset representative with the given class coordinates."""
    coords = canon(coords, q.field.p)
    if q.dim == 0:
        return np.zeros(q.ambient_dim, dtype=np.int64)
    return (coords @ q.class_basis.data) % q.field.p
