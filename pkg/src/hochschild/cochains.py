"""The Hochschild cochain complex of an FDCategory, with brace operations.

A degree-n cochain is a multilinear map on n composable morphisms, stored as a
dense coefficient tensor of shape ``(D,) * n + (D,)`` over the global morphism
basis: ``T[i_1, ..., i_n, :]`` is the value on the basis tuple
``(e_{i_1}, ..., e_{i_n})``, where the tuple is composable in the order
``e_{i_1} after e_{i_2} after ...`` and the value lies in
``hom(src(i_n), tgt(i_1))``.  Entries at non-composable tuples are zero.

The brace operation inserts cochains into the slots of another in all
order-preserving parallel ways, with the sign exponent

    sum_i  (number of inputs consumed before the i-th insertion) * (|y_i| + 1)

Everything else is derived from braces: the cup product is ``m{x, y}``, the
circle product is ``x{y}``, and the differential is ``m{x} + (-1)^{|x|} x{m}``
for the multiplication cochain ``m``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadParameter,
    DegreeUnderflow,
    EvenCharacteristic,
    NotACocycle,
    ResourceBound,
    WrongParity,
)
from .exactla import (
    PrimeMatrix,
    canon,
    kernel_mod,
    quotient,
    quotient_coords,
)
from .fdcat import FDCategory, full_subcategory

DEFAULT_ENTRY_CAP = 2_000_000


class Cochain:
    """An element of C^n(A, A) as a dense coefficient tensor."""

    __slots__ = ("category", "degree", "tensor")

    def __init__(self, category: FDCategory, degree: int, tensor):
        self.category = category
        self.degree = int(degree)
        t = canon(tensor, category.field.p)
        expected = (category.dim,) * self.degree + (category.dim,)
        if t.shape != expected:
            raise BadParameter(f"cochain tensor has shape {t.shape}, expected {expected}")
        self.tensor = t

    def __add__(self, other):
        self._check_compatible(other)
        return Cochain(
            self.category, self.degree, (self.tensor + other.tensor) % self.category.field.p
        )

    def __sub__(self, other):
        self._check_compatible(other)
        return Cochain(
            self.category, self.degree, (self.tensor - other.tensor) % self.category.field.p
        )

    def scale(self, c: int) -> "Cochain":
        return Cochain(self.category, self.degree, (self.tensor * (c % self.category.field.p)))

    def is_zero(self) -> bool:
        return not self.tensor.any()

    def __eq__(self, other):
        return (
            isinstance(other, Cochain)
            and other.category is self.category
            and other.degree == self.degree
            and np.array_equal(other.tensor, self.tensor)
        )

    def _check_compatible(self, other):
        if other.category is not self.category or other.degree != self.degree:
            raise BadParameter("cochain arithmetic needs matching category and degree")

    def __repr__(self):
        return f"Cochain(deg={self.degree}, {self.category.name})"


def zero_cochain(cat: FDCategory, degree: int) -> Cochain:
    return Cochain(cat, degree, np.zeros((cat.dim,) * degree + (cat.dim,), dtype=np.int64))


def multiplication_cochain(cat: FDCategory) -> Cochain:
    """The degree-2 cochain m(f, g) = f after g."""
    return Cochain(cat, 2, cat.mult)


def unit_cochain(cat: FDCategory) -> Cochain:
    """The degree-0 cochain picking out the identity at every object."""
    return Cochain(cat, 0, cat.total_unit())


def identity_cochain(cat: FDCategory) -> Cochain:
    """The degree-1 identity map f -> f (not a cocycle: its boundary is m)."""
    return Cochain(cat, 1, np.eye(cat.dim, dtype=np.int64))


# -- brace operations ---------------------------------------------------------


def _compositions(total: int, parts: int):
    """All tuples of `parts` nonnegative ints summing to `total`, lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def brace(x: Cochain, ys: list) -> Cochain:
    """The brace x{y_1, ..., y_s}: signed sum over parallel insertions."""
    if not ys:
        raise BadParameter("brace needs at least one argument cochain")
    cat = x.category
    for y in ys:
        if y.category is not cat:
            raise BadParameter("brace arguments must live on the same category")
    p = cat.field.p
    d = cat.dim
    n = x.degree
    s = len(ys)
    degs = [y.degree for y in ys]
    result_degree = n + sum(degs) - s
    if result_degree < 0:
        raise DegreeUnderflow(
            f"brace of degree {n} with degrees {degs} would have degree {result_degree}"
        )
    out = np.zeros((d,) * result_degree + (d,), dtype=np.int64)
    if s > n:
        return Cochain(cat, result_degree, out)
    if (p - 1) ** (s + 1) * d**s >= 2**62:
        raise ResourceBound("brace contraction would overflow exact int64 arithmetic")

    n_out = result_degree
    for m in _compositions(n - s, s + 1):
        eps = 0
        x_sub = []
        y_subs = []
        pos = 0
        for i in range(s):
            for _ in range(m[i]):
                x_sub.append(pos)
                pos += 1
            eps += pos * (degs[i] + 1)
            y_subs.append(list(range(pos, pos + degs[i])) + [n_out + i])
            pos += degs[i]
            x_sub.append(n_out + i)
        for _ in range(m[s]):
            x_sub.append(pos)
            pos += 1
        x_sub.append(n_out + s)
        operands = [x.tensor, x_sub]
        for y, ysub in zip(ys, y_subs):
            operands.extend([y.tensor, ysub])
        term = np.einsum(*operands, list(range(n_out)) + [n_out + s], optimize=True)
        out = (out + ((-1) ** (eps % 2)) * term) % p
    return Cochain(cat, result_degree, out)


def circle(x: Cochain, y: Cochain) -> Cochain:
    """Gerstenhaber's circle product x{y}."""
    return brace(x, [y])


def cup(x: Cochain, y: Cochain) -> Cochain:
    """The cup product m{x, y}: apply x and y to consecutive blocks, compose."""
    return brace(multiplication_cochain(x.category), [x, y])


def differential(x: Cochain) -> Cochain:
    """The Hochschild differential m{x} + (-1)^{|x|} x{m}."""
    m = multiplication_cochain(x.category)
    sign = -1 if x.degree % 2 else 1
    return brace(m, [x]) + brace(x, [m]).scale(sign)


def bracket(x: Cochain, y: Cochain) -> Cochain:
    """Gerstenhaber bracket: graded commutator of circle in shifted degrees."""
    sign = -1 if ((x.degree - 1) * (y.degree - 1)) % 2 else 1
    return circle(x, y) - circle(y, x).scale(sign)


def reduced_square(x: Cochain) -> Cochain:
    """x{x} on even cochain degrees (odd in the shifted grading)."""
    if x.degree % 2:
        raise WrongParity(f"reduced square needs even cochain degree, got {x.degree}")
    return circle(x, x)


def iterated_circle(x: Cochain, k: int) -> Cochain:
    """Left-iterated circle power ((x{x}){x})...{x} with x appearing k times."""
    if k < 1:
        raise BadParameter("iterated circle power needs k >= 1")
    z = x
    for _ in range(k - 1):
        z = circle(z, x)
    return z


def is_normalized(x: Cochain) -> bool:
    """True when the cochain kills every slot fed with an identity morphism."""
    cat = x.category
    p = cat.field.p
    for axis in range(x.degree):
        for a in range(len(cat.objects)):
            slice_ = np.tensordot(cat.units[a], x.tensor, axes=([0], [axis])) % p
            if slice_.any():
                return False
    return True


# -- coordinate spaces --------------------------------------------------------


class CochainSpace:
    """Flat coordinates for C^n(A, A), full or normalized.

    Positions are enumerated lexicographically over valid composable basis
    tuples, then over the output hom-block of each tuple.  In the normalized
    variant, input slots over hom(a, a) skip the basis element carrying the
    unit pivot; values on such reduced tuples determine the normalized cochain
    (identities evaluate to zero).
    """

    def __init__(self, cat: FDCategory, degree: int, normalized: bool, cap: int = DEFAULT_ENTRY_CAP):
        if degree < 0:
            raise BadParameter("cochain degree must be nonnegative")
        if cat.dim ** (degree + 1) > cap:
            raise ResourceBound(
                f"cochain tensor for degree {degree} on dim {cat.dim} exceeds the cap {cap}"
            )
        self.category = cat
        self.degree = degree
        self.normalized = normalized
        p = cat.field.p
        d = cat.dim

        unit_pivots = set()
        for a in range(len(cat.objects)):
            unit_pivots.add(int(np.nonzero(cat.units[a])[0][0]))
        self._unit_pivots = unit_pivots
        allowed = [i for i in range(d) if not (normalized and i in unit_pivots)]

        tuples: list[tuple[int, ...]] = []
        if degree == 0:
            tuples.append(())
        else:
            def extend(prefix):
                if len(prefix) == degree:
                    tuples.append(prefix)
                    return
                for i in allowed:
                    if prefix and cat.src[prefix[-1]] != cat.tgt[i]:
                        continue
                    extend(prefix + (i,))

            extend(())
        self.tuples = tuples

        out_blocks = []
        offsets = []
        total = 0
        for t in tuples:
            if degree == 0:
                block = cat.diagonal_indices()
            else:
                block = cat.hom_indices(int(cat.src[t[-1]]), int(cat.tgt[t[0]]))
            out_blocks.append(block)
            offsets.append(total)
            total += len(block)
        self.out_blocks = out_blocks
        self.offsets = offsets
        self.dim = total

        if normalized:
            pi = np.eye(d, dtype=np.int64)
            for a in range(len(cat.objects)):
                u = cat.units[a]
                piv = int(np.nonzero(u)[0][0])
                col = (-u * pow(int(u[piv]), -1, p)) % p
                col[piv] = 0
                pi[:, piv] = col
            self._pullback = pi % p
        else:
            self._pullback = None

    def to_vec(self, x: Cochain) -> np.ndarray:
        if x.category is not self.category or x.degree != self.degree:
            raise BadParameter("cochain does not belong to this space")
        vec = np.zeros(self.dim, dtype=np.int64)
        for t, block, off in zip(self.tuples, self.out_blocks, self.offsets):
            vec[off : off + len(block)] = x.tensor[t][block]
        return vec

    def from_vec(self, vec) -> Cochain:
        p = self.category.field.p
        vec = canon(vec, p)
        if vec.shape != (self.dim,):
            raise BadParameter(f"coordinate vector must have length {self.dim}")
        d = self.category.dim
        t_arr = np.zeros((d,) * self.degree + (d,), dtype=np.int64)
        for t, block, off in zip(self.tuples, self.out_blocks, self.offsets):
            t_arr[t][block] = vec[off : off + len(block)]
        if self.normalized and self.degree:
            for axis in range(self.degree):
                t_arr = np.moveaxis(
                    np.tensordot(self._pullback, t_arr, axes=([0], [axis])) % p, 0, axis
                )
        return Cochain(self.category, self.degree, t_arr)

    def basis(self, k: int) -> Cochain:
        vec = np.zeros(self.dim, dtype=np.int64)
        vec[k] = 1
        return self.from_vec(vec)

    def zero(self) -> Cochain:
        return zero_cochain(self.category, self.degree)

    def random(self, rng) -> Cochain:
        return self.from_vec(rng.integers(0, self.category.field.p, size=self.dim))

    def __repr__(self):
        kind = "normalized" if self.normalized else "full"
        return f"CochainSpace(deg={self.degree}, {kind}, dim={self.dim}, {self.category.name})"


def cochain_space(cat: FDCategory, degree: int, normalized: bool = True, cap: int = DEFAULT_ENTRY_CAP) -> CochainSpace:
    key = ("space", degree, normalized)
    if key not in cat._cache:
        cat._cache[key] = CochainSpace(cat, degree, normalized, cap=cap)
    return cat._cache[key]


def differential_matrix(cat: FDCategory, degree: int, normalized: bool = True, cap: int = DEFAULT_ENTRY_CAP) -> np.ndarray:
    """Matrix of the differential C^degree -> C^{degree+1} in flat coordinates."""
    key = ("dmat", degree, normalized)
    if key not in cat._cache:
        src_space = cochain_space(cat, degree, normalized, cap=cap)
        dst_space = cochain_space(cat, degree + 1, normalized, cap=cap)
        mat = np.zeros((dst_space.dim, src_space.dim), dtype=np.int64)
        for k in range(src_space.dim):
            mat[:, k] = dst_space.to_vec(differential(src_space.basis(k)))
        cat._cache[key] = mat
    return cat._cache[key]


# -- cohomology ---------------------------------------------------------------


@dataclass(frozen=True)
class HHSpace:
    """HH^n(A, A) as a quotient of cocycle coordinates, with chosen section."""

    category: FDCategory
    degree: int
    normalized: bool
    space: CochainSpace
    quotient: object  # exactla.QuotientBasis

    @property
    def dim(self) -> int:
        return self.quotient.dim

    def class_of(self, x: Cochain) -> "CohomologyClass":
        coords = quotient_coords(self.quotient, self.space.to_vec(x))
        return CohomologyClass(self, coords)

    def basis_class(self, k: int) -> "CohomologyClass":
        coords = np.zeros(self.dim, dtype=np.int64)
        coords[k] = 1
        return CohomologyClass(self, coords)

    def representative(self, coords) -> Cochain:
        coords = canon(coords, self.category.field.p)
        if self.dim == 0:
            return self.space.zero()
        return self.space.from_vec((coords @ self.quotient.class_basis.data) % self.category.field.p)


@dataclass(frozen=True)
class CohomologyClass:
    space: HHSpace
    coords: np.ndarray

    @property
    def degree(self) -> int:
        return self.space.degree

    def representative(self) -> Cochain:
        return self.space.representative(self.coords)

    def __eq__(self, other):
        return (
            isinstance(other, CohomologyClass)
            and other.space is self.space
            and np.array_equal(other.coords, self.coords)
        )

    def is_zero(self) -> bool:
        return not self.coords.any()


def cohomology(cat: FDCategory, degree: int, normalized: bool = True, cap: int = DEFAULT_ENTRY_CAP) -> HHSpace:
    """HH^degree(A, A) computed from the chosen complex as ker/im."""
    key = ("hh", degree, normalized)
    if key in cat._cache:
        return cat._cache[key]
    p = cat.field.p
    space = cochain_space(cat, degree, normalized, cap=cap)
    dn = differential_matrix(cat, degree, normalized, cap=cap)
    z = kernel_mod(dn, p)
    if degree == 0:
        b = np.zeros((0, space.dim), dtype=np.int64)
    else:
        b = differential_matrix(cat, degree - 1, normalized, cap=cap).T
    field = cat.field
    q = quotient(PrimeMatrix(field, z), PrimeMatrix(field, b))
    hh = HHSpace(cat, degree, normalized, space, q)
    cat._cache[key] = hh
    return hh


def random_cocycle(cat: FDCategory, degree: int, rng, normalized: bool = True, cap: int = DEFAULT_ENTRY_CAP) -> Cochain:
    """A random element of ker(differential) in the chosen complex."""
    space = cochain_space(cat, degree, normalized, cap=cap)
    z = kernel_mod(differential_matrix(cat, degree, normalized, cap=cap), cat.field.p)
    if z.shape[0] == 0:
        return space.zero()
    coeffs = rng.integers(0, cat.field.p, size=z.shape[0])
    return space.from_vec((coeffs @ z) % cat.field.p)


# -- the p-power and zeta operations -----------------------------------------


def p_power_class(cat: FDCategory, cls: CohomologyClass) -> CohomologyClass:
    """The class of the p-fold iterated circle power of a representative.

    Defined on odd cochain degrees (even in the shifted grading).  The result
    is verified to be a cocycle before the class is taken; representative
    independence is a theorem exercised by the test harness, not assumed here.
    """
    if cls.degree % 2 == 0:
        raise WrongParity(f"p-power needs odd cochain degree, got {cls.degree}")
    p = cat.field.p
    z = iterated_circle(cls.representative(), p)
    if not differential(z).is_zero():
        raise NotACocycle("p-power of a cocycle failed to be a cocycle (internal error)")
    target = cohomology(cat, z.degree, cls.space.normalized)
    return target.class_of(z)


@dataclass(frozen=True)
class ZetaResult:
    """Outcome of the zeta operation: the cochain, its cocycle status, and
    the class when it is a cocycle."""

    cochain: Cochain
    is_cocycle: bool
    zeta_class: CohomologyClass | None
    includes_identity_term: bool


def zeta_cochain(cat: FDCategory, x: Cochain, include_identity_term: bool = False, normalized: bool = True) -> ZetaResult:
    """The odd-characteristic operation sum ((-1)^i / i) x^{(i)} cup x^{(j)}.

    The sum runs over i + j = p - 1 on an odd-degree cocycle x.  The index i
    starts at 1 (1/i forces this); whether j = 0 is included is chosen by
    ``include_identity_term``, with the 0-th circle power read as the identity
    cochain (the degree-consistent left unit of the circle product).  The
    result carries its cocycle status rather than asserting it.
    """
    p = cat.field.p
    if p == 2:
        raise EvenCharacteristic("zeta needs odd characteristic")
    if x.degree % 2 == 0:
        raise WrongParity(f"zeta needs odd cochain degree, got {x.degree}")
    if not differential(x).is_zero():
        raise NotACocycle("zeta needs a cocycle")
    powers = {1: x}
    for i in range(2, p):
        powers[i] = circle(powers[i - 1], x)
    if include_identity_term:
        powers[0] = identity_cochain(cat)
    top = p - 1 if include_identity_term else p - 2
    total = None
    for i in range(1, top + 1):
        j = p - 1 - i
        coeff = (pow(-1, i, p) * pow(i, -1, p)) % p
        term = cup(powers[i], powers[j]).scale(coeff)
        total = term if total is None else total + term
    if total is None:
        total = zero_cochain(cat, (p - 1) * (x.degree - 1) + 2)
    cocycle = differential(total).is_zero()
    out_cls = None
    if cocycle:
        target = cohomology(cat, total.degree, normalized)
        out_cls = target.class_of(total)
    return ZetaResult(total, cocycle, out_cls, include_identity_term)


def zeta_class(cat: FDCategory, cls: CohomologyClass, include_identity_term: bool = False) -> ZetaResult:
    """Zeta evaluated on the stored representative of a cohomology class."""
    return zeta_cochain(
        cat, cls.representative(), include_identity_term, normalized=cls.space.normalized
    )


# -- restriction along full subcategory inclusions ---------------------------


def restriction(cat: FDCategory, object_subset, x: Cochain) -> Cochain:
    """Restrict a cochain to the full subcategory on the given objects.

    This is the chain map that simply forgets all components involving
    objects outside the subset; it commutes with braces, cup and the
    differential (exercised exactly by the tests).
    """
    sub, keep = restricted_category(cat, object_subset)
    idx = np.ix_(*([keep] * (x.degree + 1)))
    return Cochain(sub, x.degree, x.tensor[idx])


def restricted_category(cat: FDCategory, object_subset):
    key = ("subcat", tuple(sorted(str(o) for o in object_subset)))
    if key not in cat._cache:
        cat._cache[key] = full_subcategory(cat, object_subset)
    return cat._cache[key]
