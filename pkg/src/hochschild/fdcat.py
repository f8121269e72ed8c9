"""Finite-dimensional k-linear categories presented by structure constants.

An ``FDCategory`` is a category with finitely many objects whose hom-spaces
carry chosen bases; composition is stored as a dense structure-constant
tensor over F_p.  A one-object instance is just a finite-dimensional algebra.
Construction validates associativity and the unit laws exhaustively, so every
``FDCategory`` in circulation is a genuine category.

Conventions.  Basis morphisms carry global indices ``0..dim-1``; ``src[i]``
and ``tgt[i]`` are object indices.  ``mult[i, j]`` holds the coordinates of
the composite "i after j" (defined when ``tgt[j] == src[i]``), so for a
one-object algebra ``mult[i, j]`` is the product ``e_i * e_j``.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import AssociativityViolation, BadParameter, EmptySubset, UnitViolation
from .exactla import PrimeField, canon, freeze, kernel_mod, rref_mod

_ASSOC_CHUNK = 2_000_000  # entries per associativity einsum block


class FDCategory:
    """A validated k-linear category with finitely many objects over F_p."""

    def __init__(self, field, objects, basis_names, src, tgt, mult, units, name=None):
        if isinstance(field, int):
            field = PrimeField(field)
        self.field = field
        p = field.p
        self.objects = tuple(str(o) for o in objects)
        if not self.objects:
            raise BadParameter("a category needs at least one object")
        self.basis_names = tuple(str(b) for b in basis_names)
        self.dim = len(self.basis_names)
        if self.dim == 0:
            raise BadParameter("total dimension must be positive")
        self.src = freeze(np.asarray(src, dtype=np.int64))
        self.tgt = freeze(np.asarray(tgt, dtype=np.int64))
        if self.src.shape != (self.dim,) or self.tgt.shape != (self.dim,):
            raise BadParameter("src/tgt must assign one object per basis element")
        self.mult = freeze(canon(mult, p))
        if self.mult.shape != (self.dim, self.dim, self.dim):
            raise BadParameter(f"mult tensor must have shape {(self.dim,) * 3}")
        self.units = freeze(canon(units, p))
        if self.units.shape != (len(self.objects), self.dim):
            raise BadParameter("units must give one coordinate row per object")
        self.name = name or f"category(dim={self.dim}, p={p})"
        self._validate()
        self._cache = {}

    # -- structure ---------------------------------------------------------

    def hom_indices(self, a: int, b: int) -> np.ndarray:
        """Global indices of the basis of hom(a, b), morphisms a -> b."""
        return np.nonzero((self.src == a) & (self.tgt == b))[0]

    def diagonal_indices(self) -> np.ndarray:
        return np.nonzero(self.src == self.tgt)[0]

    def compose(self, i_coords, j_coords) -> np.ndarray:
        """Composite of two coordinate vectors, first ``j`` then ``i``."""
        p = self.field.p
        return np.einsum("i,j,ijk->k", canon(i_coords, p), canon(j_coords, p), self.mult) % p

    def total_unit(self) -> np.ndarray:
        return self.units.sum(axis=0) % self.field.p

    def is_composable(self, i: int, j: int) -> bool:
        return self.tgt[j] == self.src[i]

    # -- validation --------------------------------------------------------

    def _validate(self):
        p = self.field.p
        d = self.dim
        # block structure of the tensor
        for i in range(d):
            for j in range(d):
                col = self.mult[i, j]
                if self.tgt[j] != self.src[i]:
                    if col.any():
                        raise BadParameter(
                            f"non-composable pair ({self.basis_names[i]}, "
                            f"{self.basis_names[j]}) has a nonzero product"
                        )
                    continue
                bad = np.nonzero(col)[0]
                for k in bad:
                    if self.src[k] != self.src[j] or self.tgt[k] != self.tgt[i]:
                        raise BadParameter(
                            f"product ({self.basis_names[i]}, {self.basis_names[j]}) "
                            f"leaves its hom-space at {self.basis_names[k]}"
                        )
        # units supported on the right diagonal blocks, and unit laws
        for a in range(len(self.objects)):
            sup = np.nonzero(self.units[a])[0]
            if sup.size == 0:
                raise UnitViolation(self.objects[a], f"unit at object {self.objects[a]} is zero")
            for k in sup:
                if self.src[k] != a or self.tgt[k] != a:
                    raise UnitViolation(
                        self.objects[a],
                        f"unit at object {self.objects[a]} has support outside hom({a},{a})",
                    )
        left = np.einsum("aj,jfk->afk", self.units, self.mult) % p
        right = np.einsum("aj,fjk->afk", self.units, self.mult) % p
        eye = np.eye(d, dtype=np.int64)
        for f in range(d):
            if not np.array_equal(left[self.tgt[f], f], eye[f]):
                raise UnitViolation(self.basis_names[f])
            if not np.array_equal(right[self.src[f], f], eye[f]):
                raise UnitViolation(self.basis_names[f])
        # associativity, exhaustively over basis triples (chunked for size)
        chunk = max(1, _ASSOC_CHUNK // (d * d * d))
        for start in range(0, d, chunk):
            stop = min(d, start + chunk)
            lhs = np.einsum("ijk,kla->ijla", self.mult[start:stop], self.mult) % p
            rhs = np.einsum("jlk,ika->ijla", self.mult, self.mult[start:stop]) % p
            if not np.array_equal(lhs, rhs):
                bad = np.nonzero((lhs - rhs) % p)
                i, j, l = int(bad[0][0]) + start, int(bad[1][0]), int(bad[2][0])
                raise AssociativityViolation(
                    (self.basis_names[i], self.basis_names[j], self.basis_names[l])
                )

    def revalidate(self):
        """Re-run the construction checks (idempotence guard for tests)."""
        self._validate()

    def __repr__(self):
        return f"FDCategory({self.name!r}, dim={self.dim}, p={self.field.p})"


def validate_category(field, objects, basis_names, src, tgt, mult, units, name=None) -> FDCategory:
    """Build an FDCategory from raw structure constants, checking everything."""
    return FDCategory(field, objects, basis_names, src, tgt, mult, units, name=name)


def one_object_algebra(p, basis_names, mult, unit_coords, name=None) -> FDCategory:
    """Convenience wrapper: an algebra is a category with a single object."""
    d = len(basis_names)
    return FDCategory(
        p,
        ["*"],
        basis_names,
        np.zeros(d, dtype=np.int64),
        np.zeros(d, dtype=np.int64),
        mult,
        np.asarray(unit_coords, dtype=np.int64)[None, :],
        name=name,
    )


# -- center and derivations -------------------------------------------------


def center(cat: FDCategory) -> np.ndarray:
    """Basis (rows, full coordinates) of the center.

    A central family is z = (z_a) in the direct sum of the hom(a,a) with
    z_b . f = f . z_a for every basis morphism f: a -> b.
    """
    p = cat.field.p
    d = cat.dim
    diag = cat.diagonal_indices()
    if diag.size == 0:
        return np.zeros((0, d), dtype=np.int64)
    # equations per basis morphism f, rows indexed by output coordinate
    eqs = np.zeros((d, d, diag.size), dtype=np.int64)
    for col, j in enumerate(diag):
        obj = cat.src[j]
        f_left = np.nonzero(cat.tgt == obj)[0]  # z_b . f  with b = tgt f = obj
        for f in f_left:
            eqs[f, :, col] += cat.mult[j, f]
        f_right = np.nonzero(cat.src == obj)[0]  # f . z_a  with a = src f = obj
        for f in f_right:
            eqs[f, :, col] -= cat.mult[f, j]
    system = eqs.reshape(d * d, diag.size) % p
    ker = kernel_mod(system, p)
    out = np.zeros((ker.shape[0], d), dtype=np.int64)
    out[:, diag] = ker
    return out


def _blockdiag_positions(cat: FDCategory):
    """Variable layout for hom-block-preserving linear maps.

    Input-major order: for each basis index j, all output indices k in the
    same hom-block.  This matches the coordinate layout of degree-1 cochains.
    """
    positions = []
    for j in range(cat.dim):
        block = cat.hom_indices(cat.src[j], cat.tgt[j])
        positions.extend((int(k), j) for k in block)
    return positions


def blockmap_to_vec(cat: FDCategory, mat: np.ndarray) -> np.ndarray:
    positions = _blockdiag_positions(cat)
    return np.array([mat[k, j] for k, j in positions], dtype=np.int64) % cat.field.p


def vec_to_blockmap(cat: FDCategory, vec: np.ndarray) -> np.ndarray:
    positions = _blockdiag_positions(cat)
    mat = np.zeros((cat.dim, cat.dim), dtype=np.int64)
    for value, (k, j) in zip(vec, positions):
        mat[k, j] = value % cat.field.p
    return mat


def derivations(cat: FDCategory) -> np.ndarray:
    """Basis of Der(cat), rows in the block-map coordinate layout.

    A derivation is a hom-block-preserving linear map D with
    D(g.f) = D(g).f + g.D(f) on composable pairs and D(id_a) = 0.
    """
    p = cat.field.p
    d = cat.dim
    positions = _blockdiag_positions(cat)
    nvars = len(positions)
    var_of = {pos: idx for idx, pos in enumerate(positions)}

    rows = []
    mult = cat.mult
    for i in range(d):
        for j in range(d):
            if not cat.is_composable(i, j):
                continue
            # coefficients of D(e_i . e_j) - D(e_i).e_j - e_i.D(e_j), per output l
            block = np.zeros((d, nvars), dtype=np.int64)
            for k in np.nonzero(mult[i, j])[0]:
                for l in cat.hom_indices(cat.src[k], cat.tgt[k]):
                    block[l, var_of[(int(l), int(k))]] += mult[i, j, k]
            for a in cat.hom_indices(cat.src[i], cat.tgt[i]):
                block[:, var_of[(int(a), i)]] -= mult[a, j]
            for a in cat.hom_indices(cat.src[j], cat.tgt[j]):
                block[:, var_of[(int(a), j)]] -= mult[i, a]
            rows.append(block % p)
    for a in range(len(cat.objects)):
        block = np.zeros((d, nvars), dtype=np.int64)
        for j in np.nonzero(cat.units[a])[0]:
            for k in cat.hom_indices(a, a):
                block[k, var_of[(int(k), int(j))]] += cat.units[a, j]
        rows.append(block % p)
    system = np.concatenate(rows, axis=0) % p
    return kernel_mod(system, p)


def inner_derivations(cat: FDCategory) -> np.ndarray:
    """Basis of Inn(cat) = {[c, -] : c in the sum of the hom(a,a)}, as rows."""
    p = cat.field.p
    diag = cat.diagonal_indices()
    gens = []
    for c in diag:
        mat = np.zeros((cat.dim, cat.dim), dtype=np.int64)
        obj = cat.src[c]
        for j in np.nonzero(cat.tgt == obj)[0]:
            mat[:, j] += cat.mult[c, j]
        for j in np.nonzero(cat.src == obj)[0]:
            mat[:, j] -= cat.mult[j, c]
        gens.append(blockmap_to_vec(cat, mat % p))
    if not gens:
        return np.zeros((0, len(_blockdiag_positions(cat))), dtype=np.int64)
    r, rank, _ = rref_mod(np.array(gens, dtype=np.int64), p)
    return r[:rank]


def derivation_matrix(cat: FDCategory, vec: np.ndarray) -> np.ndarray:
    """Block-map coordinates -> D x D matrix with columns = images of basis."""
    return vec_to_blockmap(cat, vec)


def is_derivation(cat: FDCategory, mat: np.ndarray) -> bool:
    """Exact Leibniz + unit check for a candidate block map."""
    p = cat.field.p
    mat = canon(mat, p)
    for i in range(cat.dim):
        for j in range(cat.dim):
            if not cat.is_composable(i, j):
                continue
            lhs = (mat @ cat.mult[i, j]) % p
            rhs = (
                np.einsum("a,al->l", mat[:, i], cat.mult[:, j])
                + np.einsum("a,al->l", mat[:, j], cat.mult[i])
            ) % p
            if not np.array_equal(lhs, rhs):
                return False
    for a in range(len(cat.objects)):
        if ((mat @ cat.units[a]) % p).any():
            return False
    return True


# -- subcategories -----------------------------------------------------------


def full_subcategory(cat: FDCategory, object_subset):
    """The full subcategory on a nonempty object subset.

    Returns ``(sub, index_map)`` where ``index_map`` lists the parent global
    indices of the subcategory basis, in order.
    """
    objs = sorted({cat.objects.index(o) if isinstance(o, str) else int(o) for o in object_subset})
    if not objs:
        raise EmptySubset("restriction to an empty object set")
    keep = np.nonzero(np.isin(cat.src, objs) & np.isin(cat.tgt, objs))[0]
    relabel = {old: new for new, old in enumerate(objs)}
    sub = FDCategory(
        cat.field,
        [cat.objects[o] for o in objs],
        [cat.basis_names[i] for i in keep],
        [relabel[int(cat.src[i])] for i in keep],
        [relabel[int(cat.tgt[i])] for i in keep],
        cat.mult[np.ix_(keep, keep, keep)],
        cat.units[np.ix_(objs, keep)],
        name=f"{cat.name}|{','.join(cat.objects[o] for o in objs)}",
    )
    return sub, keep
