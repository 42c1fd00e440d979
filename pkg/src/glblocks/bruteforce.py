"""Element-level oracle: small GL(n,q) as explicit matrices.

Everything the label-level engine claims is re-derived here from raw
matrices: conjugacy orbits, centralizers, section partitions, and a full
complex character table computed by the class-algebra eigenvector method
with exact cyclotomic lifting.  No floating point: the modular table is
lifted to integer vectors of root-of-unity multiplicities and verified
against the orthogonality relations exactly.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from math import isqrt

from .charvalue import unipotent_degree
from .errors import ScaleGuardError, TieError
from .glclass import GLClassLabel, PolyKey, make_label
from .partitions import conjugate, partitions_of
from .qarith import (
    enumerate_irreducibles,
    field,
    gl_order,
    non_unipotent_irreducibles,
    x_minus_one,
)

GROUP_GUARD = 25000
TABLE_GUARD = 2500      # conjugation-table route needs |G|^2 ids in memory
CLASS_GUARD = 40


# -- linear algebra over a small field ----------------------------------------

def mat_mul(fq, A, B):
    n = len(A)
    m = len(B[0])
    inner = len(B)
    add, mul = fq.add, fq.mul
    out = []
    for i in range(n):
        row = []
        Ai = A[i]
        for j in range(m):
            acc = 0
            for k in range(inner):
                acc = add[acc][mul[Ai[k]][B[k][j]]]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_vec(fq, A, v):
    add, mul = fq.add, fq.mul
    out = []
    for row in A:
        acc = 0
        for a, x in zip(row, v):
            acc = add[acc][mul[a][x]]
        out.append(acc)
    return tuple(out)


def identity_matrix(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def scalar_matrix(n, a):
    return tuple(tuple(a if i == j else 0 for j in range(n)) for i in range(n))


def mat_add(fq, A, B):
    return tuple(tuple(fq.add[a][b] for a, b in zip(ra, rb))
                 for ra, rb in zip(A, B))


def mat_scale(fq, c, A):
    return tuple(tuple(fq.mul[c][a] for a in row) for row in A)


def row_reduce(fq, rows):
    """Return (rank, pivot columns, reduced rows)."""
    rows = [list(r) for r in rows]
    n_cols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = fq.inv[rows[r][c]]
        rows[r] = [fq.mul[inv][x] for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                coef = rows[i][c]
                rows[i] = [fq.add[x][fq.neg[fq.mul[coef][y]]]
                           for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return r, pivots, [tuple(row) for row in rows]


def kernel_basis(fq, A):
    """Basis of the right kernel of A."""
    n_cols = len(A[0])
    rank, pivots, rows = row_reduce(fq, A)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * n_cols
        vec[fc] = 1
        for r, pc in enumerate(pivots):
            vec[pc] = fq.neg[rows[r][fc]]
        basis.append(tuple(vec))
    return basis


def mat_inverse(fq, A):
    n = len(A)
    aug = [list(A[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    rank, _, rows = row_reduce(fq, aug)
    assert rank == n, "matrix not invertible"
    return tuple(tuple(row[n:]) for row in rows)


def is_invertible(fq, A):
    rank, _, _ = row_reduce(fq, A)
    return rank == len(A)


def poly_at_matrix(fq, coeffs, A):
    n = len(A)
    out = scalar_matrix(n, 0)
    for c in reversed(coeffs):
        out = mat_mul(fq, out, A)
        out = mat_add(fq, out, scalar_matrix(n, c))
    return out


# -- the group ------------------------------------------------------------------

@dataclass
class MatrixGroup:
    n: int
    q: int

    def __post_init__(self):
        order = gl_order(self.n, self.q)
        if order > GROUP_GUARD:
            raise ScaleGuardError(f"|GL({self.n},{self.q})| = {order} over guard {GROUP_GUARD}")
        self.fq = field(self.q)
        els = []
        for enc in range(self.q ** (self.n * self.n)):
            digits = []
            e = enc
            for _ in range(self.n * self.n):
                digits.append(e % self.q)
                e //= self.q
            A = tuple(tuple(digits[i * self.n + j] for j in range(self.n))
                      for i in range(self.n))
            if is_invertible(self.fq, A):
                els.append(A)
        assert len(els) == order
        self.elements = tuple(els)
        self.index = {A: i for i, A in enumerate(els)}
        self.id_index = self.index[identity_matrix(self.n)]
        self._conj = None
        self._classes = None

    def mul(self, i, j):
        return self.index[mat_mul(self.fq, self.elements[i], self.elements[j])]

    @property
    def inverses(self):
        if not hasattr(self, "_inv"):
            self._inv = tuple(self.index[mat_inverse(self.fq, A)] for A in self.elements)
        return self._inv

    def conj_table(self):
        """conj[g][h] = index of h^-1 g h; also the source of classes."""
        if self._conj is None:
            if len(self.elements) > TABLE_GUARD:
                raise ScaleGuardError("group too large for the conjugation table")
            fq = self.fq
            table = []
            for h_id, h in enumerate(self.elements):
                h_inv = self.elements[self.inverses[h_id]]
                col = []
                for g in self.elements:
                    col.append(self.index[mat_mul(fq, mat_mul(fq, h_inv, g), h)])
                table.append(col)
            # transpose so conj[g][h] reads naturally
            self._conj = [[table[h][g] for h in range(len(self.elements))]
                          for g in range(len(self.elements))]
        return self._conj

    def element_order(self, i):
        e = i
        k = 1
        while e != self.id_index:
            e = self.mul(e, i)
            k += 1
        return k


@cache
def build_group(n: int, q: int) -> MatrixGroup:
    return MatrixGroup(n, q)


# -- labels from matrices --------------------------------------------------------

def _poly_pool(n: int, q: int):
    """(coeffs, is_x_minus_one, PolyKey or None) for degrees up to n."""
    target = x_minus_one(q)
    pool = []
    for deg in range(1, n + 1):
        indexed = {lab.coeffs: lab.index for lab in non_unipotent_irreducibles(q, deg)}
        for lab in enumerate_irreducibles(q, deg):
            if deg == 1 and lab.coeffs == target:
                pool.append((lab.coeffs, True, None))
            else:
                pool.append((lab.coeffs, False, PolyKey(deg, indexed[lab.coeffs])))
    return pool


def element_label(group: MatrixGroup, A) -> GLClassLabel:
    """Class label via generalized kernel dimensions per irreducible."""
    fq = group.fq
    n = group.n
    unip = ()
    support = []
    accounted = 0
    for coeffs, is_unip, key in _poly_pool(n, group.q):
        if accounted == n:
            break
        deg = len(coeffs) - 1
        M = poly_at_matrix(fq, coeffs, A)
        dims = [0]
        P = identity_matrix(n)
        while True:
            P = mat_mul(fq, P, M)
            dim = len(kernel_basis(fq, P))
            if dim == dims[-1]:
                break
            dims.append(dim)
        if dims[-1] == 0:
            continue
        counts = []  # number of Jordan-type blocks of size >= j
        for j in range(1, len(dims)):
            step, rem = divmod(dims[j] - dims[j - 1], deg)
            assert rem == 0
            counts.append(step)
        part = conjugate(tuple(counts))
        accounted += deg * sum(part)
        if is_unip:
            unip = part
        else:
            support.append((key, part))
    assert accounted == n
    return make_label(n, group.q, unip, tuple(support))


def canonical_matrix(group: MatrixGroup, label: GLClassLabel):
    """Block companion matrix in the class a label names."""
    fq = group.fq
    coeffs_of = {}
    for coeffs, is_unip, key in _poly_pool(group.n, group.q):
        if is_unip:
            coeffs_of["u"] = coeffs
        else:
            coeffs_of[key] = coeffs
    blocks = []
    items = [("u", p) for p in ([label.unipotent] if label.unipotent else [])]
    items += [(key, part) for key, part in label.support]
    for key, part in items:
        coeffs = coeffs_of[key]
        d = len(coeffs) - 1
        for mult in part:
            size = d * mult
            block = [[0] * size for _ in range(size)]
            for rep in range(mult):
                base = rep * d
                for i in range(d - 1):
                    block[base + i][base + i + 1] = 1
                for i in range(d):
                    block[base + d - 1][base + i] = fq.neg[coeffs[i]]
                if rep + 1 < mult:
                    for i in range(d):
                        block[base + i][base + d + i] = 1
            blocks.append(block)
    n = group.n
    out = [[0] * n for _ in range(n)]
    pos = 0
    for block in blocks:
        s = len(block)
        for i in range(s):
            for j in range(s):
                out[pos + i][pos + j] = block[i][j]
        pos += s
    assert pos == n
    return tuple(tuple(row) for row in out)


@dataclass
class OracleClassData:
    group: MatrixGroup
    reps: tuple[int, ...]
    class_of: tuple[int, ...]
    sizes: tuple[int, ...]
    labels: tuple[GLClassLabel, ...]
    centralizer_orders: tuple[int, ...]

    def class_count(self) -> int:
        return len(self.reps)


@cache
def oracle_classes(n: int, q: int) -> OracleClassData:
    """Conjugation orbits matched to labels; the matching is asserted."""
    group = build_group(n, q)
    conj = group.conj_table()
    size = len(group.elements)
    class_of = [-1] * size
    reps = []
    sizes = []
    for g in range(size):
        if class_of[g] != -1:
            continue
        orbit = set(conj[g])
        cid = len(reps)
        for x in orbit:
            class_of[x] = cid
        reps.append(g)
        sizes.append(len(orbit))
    labels = tuple(element_label(group, group.elements[r]) for r in reps)
    assert len(set(l.key() for l in labels)) == len(labels)
    assert sum(sizes) == size
    cents = []
    for cid, r in enumerate(reps):
        c = sum(1 for h in range(size) if conj[r][h] == r)
        assert c * sizes[cid] == size
        cents.append(c)
    return OracleClassData(group, tuple(reps), tuple(class_of), tuple(sizes),
                           labels, tuple(cents))


# -- primary decomposition of elements -------------------------------------------

def _primary_basis(group: MatrixGroup, A, match):
    """Bases of the sum of primary spaces selected by `match` and the rest."""
    fq = group.fq
    n = group.n
    sel, rest = [], []
    for coeffs, is_unip, key in _poly_pool(n, group.q):
        M = poly_at_matrix(fq, coeffs, A)
        P = identity_matrix(n)
        for _ in range(n):
            P = mat_mul(fq, P, M)
        basis = kernel_basis(fq, P)
        if not basis:
            continue
        if match(coeffs, is_unip, key):
            sel.extend(basis)
        else:
            rest.extend(basis)
    assert len(sel) + len(rest) == n
    return sel, rest


def _degree_matches(degree, d, variant):
    return degree % d == 0 if variant == "divisible" else degree == d


def x_part_element(group: MatrixGroup, g_id: int, d: int, variant: str) -> int:
    """Index of the unique d-part: g on the matching primary spaces, 1 elsewhere."""
    A = group.elements[g_id]
    fq = group.fq
    sel, rest = _primary_basis(
        group, A,
        lambda coeffs, is_unip, key: (not is_unip) and
        _degree_matches(len(coeffs) - 1, d, variant))
    n = group.n
    cols = sel + rest
    C = tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
    C_inv = mat_inverse(fq, C)
    D = [[0] * n for _ in range(n)]
    for j, v in enumerate(sel):
        img = mat_vec(fq, A, v)
        coords = mat_vec(fq, C_inv, img)
        for i in range(n):
            D[i][j] = coords[i]
    for j in range(len(sel), n):
        D[j][j] = 1
    x = mat_mul(fq, mat_mul(fq, C, tuple(map(tuple, D))), C_inv)
    return group.index[x]


@cache
def x_is_d_element(n: int, q: int, d: int, variant: str) -> tuple[int, ...]:
    """Ids of the class representatives whose classes lie in the d-element set."""
    data = oracle_classes(n, q)
    out = []
    for cid, lab in enumerate(data.labels):
        if all(p == 1 for p in lab.unipotent) and \
           all(_degree_matches(k.degree, d, variant) for k, _ in lab.support):
            out.append(cid)
    return tuple(out)


def d_element_ids(n: int, q: int, d: int, variant: str) -> tuple[int, ...]:
    """All element ids in the d-element union of classes."""
    data = oracle_classes(n, q)
    good = set(x_is_d_element(n, q, d, variant))
    return tuple(g for g, cid in enumerate(data.class_of) if cid in good)


@cache
def y_set(n: int, q: int, d: int, variant: str, u_id: int) -> frozenset[int]:
    """Elements fixing the d-part spaces of u pointwise, stabilizing the
    complement, with no matching-degree factor there besides X-1."""
    group = build_group(n, q)
    fq = group.fq
    A = group.elements[u_id]
    sel, rest = _primary_basis(
        group, A,
        lambda coeffs, is_unip, key: (not is_unip) and
        _degree_matches(len(coeffs) - 1, d, variant))
    cols = sel + rest
    nn = group.n
    C = tuple(tuple(cols[j][i] for j in range(nn)) for i in range(nn))
    C_inv = mat_inverse(fq, C)
    k = len(sel)
    bad_polys = [coeffs for coeffs, is_unip, key in _poly_pool(nn, q)
                 if (not is_unip) and _degree_matches(len(coeffs) - 1, d, variant)]
    out = []
    for y_id, Y in enumerate(group.elements):
        ok = True
        for v in sel:
            if mat_vec(fq, Y, v) != v:
                ok = False
                break
        if not ok:
            continue
        YC = mat_mul(fq, C_inv, mat_mul(fq, Y, C))
        if any(YC[i][j] != 0 for j in range(k, nn) for i in range(k)):
            continue
        block = tuple(tuple(YC[i][j] for j in range(k, nn)) for i in range(k, nn))
        if block:
            reducible = False
            for coeffs in bad_polys:
                M = poly_at_matrix(fq, coeffs, block)
                if kernel_basis(fq, M):
                    reducible = True
                    break
            if reducible:
                continue
        out.append(y_id)
    return frozenset(out)


@dataclass
class SectionCheck:
    ok: bool
    parts: dict
    section_of: tuple[int, ...]


def oracle_sections(n: int, q: int, d: int, variant: str = "divisible") -> SectionCheck:
    """Element-level section partition plus the literal property checks.

    Verifies, for every d-element u: the complementary set is a union of
    centralizer classes, centralizers of products embed in the
    centralizer of u, conjugation equivariance, fusion control, and that
    the sections partition the group.
    """
    data = oracle_classes(n, q)
    group = data.group
    conj = group.conj_table()
    size = len(group.elements)
    xs = d_element_ids(n, q, d, variant)
    x_set = set(xs)
    ys = {u: y_set(n, q, d, variant, u) for u in xs}
    centralizer = [frozenset(h for h in range(size) if conj[g][h] == g)
                   for g in range(size)]

    parts = {}
    # (i) closure under centralizer conjugation
    parts["i"] = all(conj[y][h] in ys[u]
                     for u in xs for y in ys[u] for h in centralizer[u])
    # (ii) centralizer containment
    ok2 = True
    for u in xs:
        for y in ys[u]:
            p = group.mul(u, y)
            if not centralizer[p] <= centralizer[u]:
                ok2 = False
    parts["ii"] = ok2
    # (iii) conjugation equivariance of the complementary sets
    ok3 = True
    for u in xs:
        for h in range(size):
            target = ys[conj[u][h]]
            moved = frozenset(conj[y][h] for y in ys[u])
            if target != moved:
                ok3 = False
    parts["iii"] = ok3
    # (iv) fusion: products G-conjugate iff centralizer-conjugate
    ok4 = True
    for u in xs:
        prods = sorted({group.mul(u, y) for y in ys[u]})
        pidx = {p: i for i, p in enumerate(prods)}
        parent = list(range(len(prods)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for p in prods:
            for h in centralizer[u]:
                t = conj[p][h]
                if t in pidx:
                    ra, rb = find(pidx[p]), find(pidx[t])
                    if ra != rb:
                        parent[ra] = rb
        for i, p in enumerate(prods):
            for p2 in prods[i + 1:]:
                g_conj = data.class_of[p] == data.class_of[p2]
                c_conj = find(pidx[p]) == find(pidx[p2])
                if g_conj != c_conj:
                    ok4 = False
    parts["iv"] = ok4
    # (v) sections partition the group
    section_of = []
    for g in range(size):
        x = x_part_element(group, g, d, variant)
        assert x in x_set
        section_of.append(data.class_of[x])
    counted = {}
    for cid in section_of:
        counted[cid] = counted.get(cid, 0) + 1
    parts["v"] = sum(counted.values()) == size and \
        set(counted) == {data.class_of[u] for u in xs}
    ok = all(parts.values())
    return SectionCheck(ok, parts, tuple(section_of))


# -- exact cyclotomic arithmetic ---------------------------------------------------

def _int_poly_divmod(num, den):
    """Division with remainder of integer polynomials, den monic."""
    num = list(num)
    dd = len(den) - 1
    while len(num) - 1 >= dd:
        lead = num[-1]
        if lead:
            shift = len(num) - 1 - dd
            for i in range(dd + 1):
                num[shift + i] -= lead * den[i]
        num.pop()
    return num


@cache
def cyclotomic_poly(e: int) -> tuple[int, ...]:
    num = [-1] + [0] * (e - 1) + [1]
    for d in range(1, e):
        if e % d == 0:
            phi = cyclotomic_poly(d)
            # exact division
            out = [0] * (len(num) - len(phi) + 1)
            rem = list(num)
            for shift in range(len(out) - 1, -1, -1):
                coef = rem[shift + len(phi) - 1]
                out[shift] = coef
                if coef:
                    for i in range(len(phi)):
                        rem[shift + i] -= coef * phi[i]
            assert all(c == 0 for c in rem)
            num = out
    return tuple(num)


def cyc_mul(a, b, e):
    out = [0] * e
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[(i + j) % e] += x * y
    return tuple(out)


def cyc_conj(a):
    e = len(a)
    return tuple(a[(-j) % e] for j in range(e))


def cyc_scale(c, a):
    return tuple(c * x for x in a)


def cyc_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def cyc_reduce(a):
    """Canonical remainder mod the e-th cyclotomic polynomial."""
    e = len(a)
    return tuple(_int_poly_divmod(list(a), list(cyclotomic_poly(e))) + [0] * e)[:e]


def cyc_is_zero(a) -> bool:
    return all(c == 0 for c in cyc_reduce(a))


def cyc_as_int(a):
    """The rational integer a represents, or None."""
    red = cyc_reduce(a)
    if any(red[1:]):
        return None
    return red[0]


# -- Dixon character table ----------------------------------------------------------

def _modinv(a, m):
    return pow(a, -1, m)


def _is_prime(m):
    if m < 2:
        return False
    i = 2
    while i * i <= m:
        if m % i == 0:
            return False
        i += 1
    return True


def _find_prime(e, order):
    bound = 2 * isqrt(order) + 1
    ell = e + 1
    while True:
        if ell > bound and _is_prime(ell) and order % ell != 0:
            return ell
        ell += e


def _primitive_root_power(ell, e):
    for g in range(2, ell):
        ok = True
        m = ell - 1
        f = 2
        mm = m
        facs = set()
        while f * f <= mm:
            if mm % f == 0:
                facs.add(f)
                while mm % f == 0:
                    mm //= f
            f += 1
        if mm > 1:
            facs.add(mm)
        for p in facs:
            if pow(g, m // p, ell) == 1:
                ok = False
                break
        if ok:
            return pow(g, (ell - 1) // e, ell)
    raise AssertionError("no generator found")


def _matvec_mod(M, v, ell):
    return [sum(a * x for a, x in zip(row, v)) % ell for row in M]


def _restrict_mod(M, basis, ell):
    """Matrix of M on an M-invariant subspace, in the given basis, mod ell."""
    m = len(basis)
    k = len(basis[0])
    images = [_matvec_mod(M, b, ell) for b in basis]
    aug = [[basis[i][r] for i in range(m)] + [images[j][r] for j in range(m)]
           for r in range(k)]
    # reduce; the first m columns have full rank
    rows = [list(r) for r in aug]
    pivots = []
    rr = 0
    for c in range(m):
        piv = next((i for i in range(rr, k) if rows[i][c] % ell), None)
        assert piv is not None, "basis vectors are dependent"
        rows[rr], rows[piv] = rows[piv], rows[rr]
        inv = _modinv(rows[rr][c] % ell, ell)
        rows[rr] = [(x * inv) % ell for x in rows[rr]]
        for i in range(k):
            if i != rr and rows[i][c] % ell:
                coef = rows[i][c] % ell
                rows[i] = [(x - coef * y) % ell for x, y in zip(rows[i], rows[rr])]
        pivots.append(c)
        rr += 1
    for i in range(m, k):
        assert all(x % ell == 0 for x in rows[i][m:]), "image escaped the subspace"
    return [[rows[i][m + j] for j in range(m)] for i in range(m)]


def _kernel_mod(M, ell):
    """Basis of the kernel of M mod ell."""
    n = len(M)
    rows = [list(r) for r in M]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if rows[i][c] % ell), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = _modinv(rows[r][c] % ell, ell)
        rows[r] = [(x * inv) % ell for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c] % ell:
                coef = rows[i][c] % ell
                rows[i] = [(x - coef * y) % ell for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-rows[i][fc]) % ell
        basis.append(v)
    return basis


@dataclass
class CharacterTable:
    order: int
    exponent: int
    reps: tuple[int, ...]
    sizes: tuple[int, ...]
    inverse_class: tuple[int, ...]
    degrees: tuple[int, ...]
    values: tuple[tuple[tuple[int, ...], ...], ...]   # values[chi][class] cyclotomic

    def value_int(self, chi: int, cls: int):
        return cyc_as_int(self.values[chi][cls])


@cache
def dixon_table(n: int, q: int) -> CharacterTable:
    """Exact complex character table of GL(n,q) for small groups."""
    data = oracle_classes(n, q)
    group = data.group
    if data.class_count() > CLASS_GUARD:
        raise ScaleGuardError(f"{data.class_count()} classes over guard {CLASS_GUARD}")
    size = len(group.elements)
    k = data.class_count()
    reps = data.reps
    sizes = data.sizes
    inv_class = tuple(data.class_of[group.inverses[r]] for r in reps)
    orders = [group.element_order(r) for r in reps]
    e = 1
    for o in orders:
        g = e
        a, b = e, o
        while b:
            a, b = b, a % b
        e = e * o // a
    ell = _find_prime(e, size)
    z = _primitive_root_power(ell, e)

    # class multiplication constants: A_i[j][k] = c_{ijk}
    const = [[[0] * k for _ in range(k)] for _ in range(k)]
    inv = group.inverses
    for kk in range(k):
        zk = reps[kk]
        for x in range(size):
            i = data.class_of[x]
            j = data.class_of[group.mul(inv[x], zk)]
            const[i][j][kk] += 1
    mats = []
    for i in range(k):
        mats.append([[const[i][j][kk] % ell for kk in range(k)] for j in range(k)])

    # split the class algebra into common eigenlines one matrix at a time;
    # distinct characters have distinct eigenvalue vectors, so this always
    # terminates with k lines
    spaces = [[tuple(1 if r == c else 0 for c in range(k)) for r in range(k)]]
    for i in range(k):
        if all(len(sp) == 1 for sp in spaces):
            break
        nxt = []
        for sp in spaces:
            if len(sp) == 1:
                nxt.append(sp)
                continue
            m = len(sp)
            R = _restrict_mod(mats[i], sp, ell)
            found = 0
            for x in range(ell):
                shifted = [[(R[a][b] - (x if a == b else 0)) % ell
                            for b in range(m)] for a in range(m)]
                ker = _kernel_mod(shifted, ell)
                if ker:
                    lifted = [tuple(sum(kv[j] * sp[j][c] for j in range(m)) % ell
                                    for c in range(k)) for kv in ker]
                    nxt.append(lifted)
                    found += len(ker)
                    if found == m:
                        break
            if found != m:
                raise ArithmeticError("class algebra failed to split over the chosen prime")
        spaces = nxt
    if not (len(spaces) == k and all(len(sp) == 1 for sp in spaces)):
        raise ArithmeticError("eigenvector splitting did not reach lines")
    vectors = [list(sp[0]) for sp in spaces]

    id_cls = data.class_of[group.id_index]
    chars_mod = []
    degrees = []
    for v in vectors:
        assert v[id_cls] % ell != 0
        norm = _modinv(v[id_cls], ell)
        omega = [(x * norm) % ell for x in v]
        t = sum(omega[i] * omega[inv_class[i]] * _modinv(sizes[i], ell)
                for i in range(k)) % ell
        target = size * _modinv(t, ell) % ell
        deg = next(s for s in range(1, isqrt(size) + 1) if s * s % ell == target)
        chars_mod.append([deg * omega[i] * _modinv(sizes[i], ell) % ell for i in range(k)])
        degrees.append(deg)
    assert sum(d * d for d in degrees) == size

    # power maps and exact lifting
    power_class = []
    for r in reps:
        row = []
        cur = group.id_index
        for _ in range(e):
            row.append(data.class_of[cur])
            cur = group.mul(cur, r)
        power_class.append(row)
    e_inv = _modinv(e, ell)
    z_pows = [pow(z, m, ell) for m in range(e)]
    values = []
    for chi, cm in enumerate(chars_mod):
        rows = []
        for i in range(k):
            mults = []
            for j in range(e):
                s = sum(cm[power_class[i][m]] * z_pows[(-j * m) % e] for m in range(e))
                mj = s * e_inv % ell
                assert mj <= degrees[chi], "lifted multiplicity exceeds the degree"
                mults.append(mj)
            back = sum(mults[j] * z_pows[j] for j in range(e)) % ell
            assert back == cm[i], "modular roundtrip failed"
            rows.append(tuple(mults))
        values.append(tuple(rows))

    tab = CharacterTable(size, e, reps, sizes, inv_class, tuple(degrees),
                         tuple(values))
    _verify_orthogonality(tab)
    return tab


def _verify_orthogonality(tab: CharacterTable):
    k = len(tab.reps)
    e = tab.exponent
    zero = tuple([0] * e)
    for a in range(len(tab.degrees)):
        for b in range(a, len(tab.degrees)):
            acc = zero
            for i in range(k):
                term = cyc_mul(tab.values[a][i],
                               cyc_conj(tab.values[b][i]), e)
                acc = cyc_add(acc, cyc_scale(tab.sizes[i], term))
            expected = tab.order if a == b else 0
            total = cyc_as_int(acc)
            assert total == expected, "row orthogonality failed exactly"


# -- Borel permutation character and constituents ------------------------------------

def _proj_points(fq, n):
    """One representative per line of F_q^n (first nonzero coordinate 1)."""
    pts = []
    for enc in range(fq.q ** n):
        v = []
        ee = enc
        for _ in range(n):
            v.append(ee % fq.q)
            ee //= fq.q
        v = tuple(v)
        if all(x == 0 for x in v):
            continue
        first = next(x for x in v if x != 0)
        if first != 1:
            continue
        pts.append(v)
    return pts


def _normalize(fq, v):
    first = next((x for x in v if x != 0), None)
    if first is None:
        return None
    inv = fq.inv[first]
    return tuple(fq.mul[inv][x] for x in v)


def flag_fixed_points(group: MatrixGroup, A) -> int:
    """Number of complete flags fixed by A (n <= 3)."""
    fq = group.fq
    n = group.n
    if n == 1:
        return 1
    pts = _proj_points(fq, n)
    if n == 2:
        return sum(1 for v in pts if _normalize(fq, mat_vec(fq, A, v)) == v)
    if n == 3:
        A_t = tuple(tuple(A[j][i] for j in range(n)) for i in range(n))
        fixed_lines = [v for v in pts if _normalize(fq, mat_vec(fq, A, v)) == v]
        fixed_planes = [w for w in pts if _normalize(fq, mat_vec(fq, A_t, w)) == w]
        count = 0
        for v in fixed_lines:
            for w in fixed_planes:
                dot = 0
                for x, y in zip(v, w):
                    dot = fq.add[dot][fq.mul[x][y]]
                if dot == 0:
                    count += 1
        return count
    raise ScaleGuardError("flag counting implemented for n <= 3")


@dataclass
class BorelDecomposition:
    table: CharacterTable
    perm_values: tuple[int, ...]
    constituents: dict              # partition -> (char index, multiplicity)


@cache
def borel_unipotent_constituents(n: int, q: int) -> BorelDecomposition:
    """Decompose the Borel-coset permutation character; label by degree.

    The unipotent constituents are matched to partition labels through
    the engine's degrees; a tie between two degrees raises instead of
    guessing.
    """
    data = oracle_classes(n, q)
    group = data.group
    tab = dixon_table(n, q)
    perm = tuple(flag_fixed_points(group, group.elements[r]) for r in tab.reps)
    k = len(tab.reps)
    e = tab.exponent
    mults = []
    for chi in range(len(tab.degrees)):
        acc = tuple([0] * e)
        for i in range(k):
            acc = cyc_add(acc, cyc_scale(tab.sizes[i] * perm[i],
                                         cyc_conj(tab.values[chi][i])))
        val = cyc_as_int(acc)
        assert val is not None and val % tab.order == 0
        mults.append(val // tab.order)
    assert sum(m * tab.degrees[i] for i, m in enumerate(mults)) == perm[data.class_of[group.id_index]]
    degree_to_label = {}
    for lam in partitions_of(n):
        deg = unipotent_degree(lam, q)
        if deg in degree_to_label:
            raise TieError(f"two unipotent labels share degree {deg}")
        degree_to_label[deg] = lam
    constituents = {}
    for chi, m in enumerate(mults):
        if m <= 0:
            continue
        deg = tab.degrees[chi]
        if deg not in degree_to_label:
            raise TieError(f"constituent of degree {deg} has no engine label")
        lam = degree_to_label[deg]
        assert lam not in constituents
        constituents[lam] = (chi, m)
    assert len(constituents) == len(partitions_of(n))
    return BorelDecomposition(tab, perm, constituents)


def check_d1_duality_identity(n: int, q: int) -> dict:
    """Exact scalar products with the trivial character over unipotents.

    Returns nonvanishing for every irreducible and, for the unipotent
    constituent labeled lam, equality with degree(conjugate(lam)) divided
    by the prime-to-p part of the group order.
    """
    data = oracle_classes(n, q)
    tab = dixon_table(n, q)
    dec = borel_unipotent_constituents(n, q)
    unip_classes = [i for i, r in enumerate(tab.reps)
                    if not data.labels[data.class_of[r]].support]
    assert sum(tab.sizes[i] for i in unip_classes) == q ** (n * (n - 1))
    order = tab.order
    p = field(q).p
    order_p = 1
    while order % p == 0:
        order //= p
        order_p *= p
    order_p_prime = tab.order // order_p
    e = tab.exponent
    all_nonzero = True
    for chi in range(len(tab.degrees)):
        acc = tuple([0] * e)
        for i in unip_classes:
            acc = cyc_add(acc, cyc_scale(tab.sizes[i], tab.values[chi][i]))
        if cyc_is_zero(acc):
            all_nonzero = False
    exact_match = True
    for lam, (chi, _) in dec.constituents.items():
        total = 0
        for i in unip_classes:
            v = tab.value_int(chi, i)
            assert v is not None
            total += tab.sizes[i] * v
        lhs = Fraction(total, tab.order)
        rhs = Fraction(unipotent_degree(conjugate(lam), q), order_p_prime)
        if lhs != rhs:
            exact_match = False
    return {"all_nonzero": all_nonzero, "unipotent_identity": exact_match}


def oracle_dump(n: int, q: int) -> str:
    """JSON snapshot of classes, table and constituents for regression pinning."""
    data = oracle_classes(n, q)
    tab = dixon_table(n, q)
    dec = borel_unipotent_constituents(n, q)
    blob = {
        "n": n, "q": q, "order": tab.order,
        "classes": [
            {"label": data.labels[i].key(), "size": data.sizes[i],
             "centralizer": data.centralizer_orders[i]}
            for i in range(data.class_count())
        ],
        "degrees": sorted(tab.degrees),
        "borel_permutation_values": list(dec.perm_values),
        "borel_constituents": {
            str(list(lam)): {"degree": tab.degrees[chi], "multiplicity": m}
            for lam, (chi, m) in dec.constituents.items()
        },
    }
    return json.dumps(blob, sort_keys=True)


def cached_oracle_dump(n: int, q: int) -> str:
    """Dump via the cache directory when GLBLOCKS_CACHE_DIR is set."""
    cache_dir = os.environ.get("GLBLOCKS_CACHE_DIR")
    if not cache_dir:
        return oracle_dump(n, q)
    os.makedirs(cache_dir, exist_ok=True)
    path = os.path.join(cache_dir, f"oracle_{n}_{q}.json")
    if os.path.exists(path):
        with open(path) as fh:
            return fh.read()
    blob = oracle_dump(n, q)
    with open(path, "w") as fh:
        fh.write(blob)
    return blob
