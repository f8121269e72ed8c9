"""Built-in algebra and category constructors.

Every constructor returns a validated :class:`~hochschild.fdcat.FDCategory`.
The catalog covers the stock of examples the test harness runs on: truncated
polynomial rings, elementary-abelian group algebras, rank-2 quantum complete
intersections, matrix categories, opposites, and two-object gluings.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import BadParameter
from .fdcat import FDCategory, one_object_algebra

__all__ = [
    "truncated_poly",
    "elem_abelian",
    "qci",
    "matrix_over",
    "opposite",
    "full_two_object",
    "morita_pair_category",
    "standard_catalog",
]


def truncated_poly(p: int, n: int) -> FDCategory:
    """F_p[x]/(x^n), basis 1, x, ..., x^{n-1}."""
    if n < 1:
        raise BadParameter(f"truncated_poly needs n >= 1, got {n}")
    names = ["1"] + [f"x^{k}" if k > 1 else "x" for k in range(1, n)]
    mult = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if i + j < n:
                mult[i, j, i + j] = 1
    unit = np.zeros(n, dtype=np.int64)
    unit[0] = 1
    return one_object_algebra(p, names, mult, unit, name=f"F_{p}[x]/(x^{n})")


def elem_abelian(p: int, r: int) -> FDCategory:
    """F_p[x_1..x_r]/(x_i^p), the group algebra of (Z/p)^r.  Dimension p^r."""
    if r < 1:
        raise BadParameter(f"elem_abelian needs r >= 1, got {r}")
    exps = list(itertools.product(range(p), repeat=r))
    index = {e: k for k, e in enumerate(exps)}
    d = len(exps)
    names = []
    for e in exps:
        term = "*".join(f"x{i + 1}^{a}" if a > 1 else f"x{i + 1}" for i, a in enumerate(e) if a)
        names.append(term or "1")
    mult = np.zeros((d, d, d), dtype=np.int64)
    for e in exps:
        for f in exps:
            g = tuple(a + b for a, b in zip(e, f))
            if all(a < p for a in g):
                mult[index[e], index[f], index[g]] = 1
    unit = np.zeros(d, dtype=np.int64)
    unit[index[(0,) * r]] = 1
    return one_object_algebra(p, names, mult, unit, name=f"F_{p}[(Z/{p})^{r}]")


def qci(p: int, a: int, b: int, q: int) -> FDCategory:
    """Rank-2 quantum complete intersection <x,y>/(x^a, y^b, yx - q xy)."""
    if a < 2 or b < 2:
        raise BadParameter(f"qci needs a, b >= 2, got ({a}, {b})")
    q = q % p
    if q == 0:
        raise BadParameter("qci needs a nonzero quantum parameter q")
    exps = [(i, j) for i in range(a) for j in range(b)]
    index = {e: k for k, e in enumerate(exps)}
    d = a * b
    names = []
    for i, j in exps:
        xi = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        yj = "" if j == 0 else ("y" if j == 1 else f"y^{j}")
        names.append((xi + ("*" if xi and yj else "") + yj) or "1")
    mult = np.zeros((d, d, d), dtype=np.int64)
    for (i1, j1) in exps:
        for (i2, j2) in exps:
            # x^i1 y^j1 . x^i2 y^j2 = q^{j1*i2} x^{i1+i2} y^{j1+j2}
            if i1 + i2 < a and j1 + j2 < b:
                coeff = pow(q, j1 * i2, p)
                mult[index[(i1, j1)], index[(i2, j2)], index[(i1 + i2, j1 + j2)]] = coeff
    unit = np.zeros(d, dtype=np.int64)
    unit[index[(0, 0)]] = 1
    return one_object_algebra(p, names, mult, unit, name=f"qci({p},{a},{b};q={q})")


def matrix_over(cat: FDCategory, n: int) -> FDCategory:
    """The matrix algebra M_n(A) of a one-object category A.

    Basis E_{kl} (x) e_m, ordered (k, l)-major then by the basis of A, with
    (E_{kl} a)(E_{rs} b) = delta_{lr} E_{ks} (ab).
    """
    if n < 1:
        raise BadParameter(f"matrix_over needs n >= 1, got {n}")
    if len(cat.objects) != 1:
        raise BadParameter("matrix_over expects a one-object category")
    p = cat.field.p
    da = cat.dim
    d = n * n * da

    def gid(k, l, m):
        return (k * n + l) * da + m

    names = [
        f"E{k}{l}*{cat.basis_names[m]}"
        for k in range(n)
        for l in range(n)
        for m in range(da)
    ]
    mult = np.zeros((d, d, d), dtype=np.int64)
    for k in range(n):
        for l in range(n):
            for r in range(n):
                for s in range(n):
                    if l != r:
                        continue
                    for m1 in range(da):
                        for m2 in range(da):
                            prod = cat.mult[m1, m2]
                            for m3 in np.nonzero(prod)[0]:
                                mult[gid(k, l, m1), gid(r, s, m2), gid(k, s, m3)] = prod[m3]
    unit = np.zeros(d, dtype=np.int64)
    ua = np.nonzero(cat.units[0])[0]
    for k in range(n):
        for m in ua:
            unit[gid(k, k, m)] = cat.units[0, m]
    return one_object_algebra(p, names, mult, unit, name=f"M_{n}({cat.name})")


def opposite(cat: FDCategory) -> FDCategory:
    """The opposite category: hom(a,b) becomes hom(b,a), composition reversed."""
    mult_op = np.transpose(cat.mult, (1, 0, 2))
    return FDCategory(
        cat.field,
        cat.objects,
        cat.basis_names,
        cat.tgt,
        cat.src,
        mult_op,
        cat.units,
        name=f"op({cat.name})",
    )


def full_two_object(cat: FDCategory) -> FDCategory:
    """Two objects with all four hom-spaces equal to a one-object category A.

    Composition in every slot is the multiplication of A, so the total
    category is M_2(A) seen with two objects.  Dimension 4 * dim A.
    """
    if len(cat.objects) != 1:
        raise BadParameter("full_two_object expects a one-object category")
    da = cat.dim
    d = 4 * da

    def gid(b, a, m):  # basis of hom(a, b), block order (tgt, src)
        return (b * 2 + a) * da + m

    names, src, tgt = [], [], []
    for b in range(2):
        for a in range(2):
            for m in range(da):
                names.append(f"[{a}->{b}]{cat.basis_names[m]}")
                src.append(a)
                tgt.append(b)
    mult = np.zeros((d, d, d), dtype=np.int64)
    for b in range(2):
        for mid in range(2):
            for a in range(2):
                for m1 in range(da):
                    for m2 in range(da):
                        prod = cat.mult[m1, m2]
                        for m3 in np.nonzero(prod)[0]:
                            mult[gid(b, mid, m1), gid(mid, a, m2), gid(b, a, m3)] = prod[m3]
    units = np.zeros((2, d), dtype=np.int64)
    for a in range(2):
        for m in np.nonzero(cat.units[0])[0]:
            units[a, gid(a, a, m)] = cat.units[0, m]
    return FDCategory(
        cat.field, ["0", "1"], names, src, tgt, mult, units, name=f"two({cat.name})"
    )


def morita_pair_category(cat: FDCategory, n: int) -> FDCategory:
    """The one-directional two-object gluing of A and M_n(A).

    Object 0 carries A, object 1 carries M_n(A); hom(1, 0) is the row-vector
    bimodule A^{1 x n} and hom(0, 1) is zero.  Restricting to either object
    recovers A or M_n(A) on the nose, which is what the transfer-map checks
    exercise.
    """
    if len(cat.objects) != 1:
        raise BadParameter("morita_pair_category expects a one-object category")
    mat = matrix_over(cat, n)
    da, dm = cat.dim, mat.dim
    dmod = n * da  # row vectors, basis position (i) x basis of A
    d = da + dm + dmod
    a_off, m_off, v_off = 0, da, da + dm

    def vid(i, m):
        return v_off + i * da + m

    names = list(cat.basis_names) + list(mat.basis_names) + [
        f"v{i}*{cat.basis_names[m]}" for i in range(n) for m in range(da)
    ]
    src = [0] * da + [1] * dm + [1] * dmod
    tgt = [0] * da + [1] * dm + [0] * dmod
    mult = np.zeros((d, d, d), dtype=np.int64)
    mult[:da, :da, :da] = cat.mult
    mult[m_off : m_off + dm, m_off : m_off + dm, m_off : m_off + dm] = mat.mult
    # left action of A on row vectors: a . (v_i x b) = v_i x (ab)
    for m1 in range(da):
        for i in range(n):
            for m2 in range(da):
                prod = cat.mult[m1, m2]
                for m3 in np.nonzero(prod)[0]:
                    mult[m1, vid(i, m2), vid(i, m3)] = prod[m3]
    # right action of M_n(A): (v_i x b) . (E_{rs} a) = delta_{ir} v_s x (ba)
    for i in range(n):
        for m1 in range(da):
            for r in range(n):
                for s in range(n):
                    for m2 in range(da):
                        prod = cat.mult[m1, m2]
                        for m3 in np.nonzero(prod)[0]:
                            mid = m_off + (r * n + s) * da + m2
                            if i == r:
                                mult[vid(i, m1), mid, vid(s, m3)] = prod[m3]
    units = np.zeros((2, d), dtype=np.int64)
    units[0, :da] = cat.units[0]
    units[1, m_off : m_off + dm] = mat.units[0]
    return FDCategory(
        cat.field,
        ["0", "1"],
        names,
        src,
        tgt,
        mult,
        units,
        name=f"glue({cat.name}, M_{n})",
    )


def standard_catalog() -> list[FDCategory]:
    """The fixed list of examples the verification suites run over."""
    return [
        truncated_poly(2, 2),
        truncated_poly(3, 3),
        truncated_poly(5, 5),
        elem_abelian(2, 2),
        qci(3, 2, 2, 2),
        matrix_over(truncated_poly(2, 1), 2),
        matrix_over(truncated_poly(2, 2), 2),
    ]
