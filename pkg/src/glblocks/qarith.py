"""Finite-field bookkeeping and exact order formulas for GL(n,q).

Polynomials over F_q are tuples of field-element encodings, lowest degree
first, with the leading coefficient present (monic throughout).  Field
elements are integers 0..q-1 whose base-p digits are the coefficients in
the fixed generator basis of F_q over F_p.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache

from .errors import ScaleGuardError
from .partitions import n_stat

ENUM_GUARD = 10 ** 6


def prime_power(q: int) -> tuple[int, int]:
    """Factor q = p**e with p prime, or raise."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            e = 0
            m = q
            while m % p == 0:
                m //= p
                e += 1
            if m != 1:
                raise ValueError(f"{q} is not a prime power")
            return p, e
    raise ValueError(f"{q} is not a prime power")


@dataclass(frozen=True)
class PrimePower:
    p: int
    e: int

    @property
    def q(self) -> int:
        return self.p ** self.e

    @staticmethod
    def of(q: int) -> "PrimePower":
        p, e = prime_power(q)
        return PrimePower(p, e)


@cache
def moebius(n: int) -> int:
    if n == 1:
        return 1
    out, m = 1, n
    p = 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    if m > 1:
        out = -out
    return out


def divisors(n: int):
    return [d for d in range(1, n + 1) if n % d == 0]


def necklace_count(q: int, d: int) -> int:
    """Number of monic irreducible polynomials of degree d over F_q."""
    return sum(moebius(e) * q ** (d // e) for e in divisors(d)) // d


def count_irreducibles(q: int, d: int, exclusions=frozenset({"X"})) -> int:
    """Necklace count minus the excluded degree-1 polynomials.

    `exclusions` is a subset of {"X", "X-1"}; it only bites at d = 1.
    """
    prime_power(q)
    assert d >= 1
    bad = set(exclusions) - {"X", "X-1"}
    if bad:
        raise ValueError(f"unknown exclusions {bad}")
    n = necklace_count(q, d)
    if d == 1:
        n -= len(set(exclusions))
    return n


# -- small finite fields -----------------------------------------------------

class SmallField:
    """F_q arithmetic with precomputed tables; elements are ints 0..q-1."""

    def __init__(self, q: int):
        p, e = prime_power(q)
        self.q, self.p, self.e = q, p, e
        if e == 1:
            self.add = [[(a + b) % p for b in range(p)] for a in range(p)]
            self.mul = [[(a * b) % p for b in range(p)] for a in range(p)]
        else:
            modulus = self._find_modulus(p, e)
            self.modulus = modulus
            self.add = [[self._vec_to_int([(x + y) % p for x, y in
                                           zip(self._int_to_vec(a), self._int_to_vec(b))])
                         for b in range(q)] for a in range(q)]
            self.mul = [[self._poly_mul_mod(a, b) for b in range(q)] for a in range(q)]
        self.neg = [self.add[a].index(0) for a in range(q)]
        self.inv = [0] * q
        for a in range(1, q):
            self.inv[a] = self.mul[a].index(1)
        self.minus_one = self.neg[1]

    def _int_to_vec(self, a: int) -> list[int]:
        p, e = self.p, self.e
        return [(a // p ** i) % p for i in range(e)]

    def _vec_to_int(self, v) -> int:
        return sum(c * self.p ** i for i, c in enumerate(v))

    def _find_modulus(self, p: int, e: int) -> list[int]:
        # smallest monic irreducible of degree e over F_p in the canonical order
        for enc in range(p ** e):
            low = [(enc // p ** i) % p for i in range(e)]
            if self._is_irreducible_prime_field(low + [1], p):
                return low + [1]
        raise AssertionError("no modulus found")

    @staticmethod
    def _is_irreducible_prime_field(coeffs, p: int) -> bool:
        deg = len(coeffs) - 1
        if deg == 1:
            return True
        if any(sum(c * pow(x, i, p) for i, c in enumerate(coeffs)) % p == 0
               for x in range(p)):
            return False
        if deg <= 3:
            return True
        # trial division by monic quadratics
        for b in range(p):
            for c in range(p):
                if _poly_divides_prime_field([c, b, 1], coeffs, p):
                    return False
        return deg <= 5

    def _poly_mul_mod(self, a: int, b: int) -> int:
        p, e = self.p, self.e
        va, vb = self._int_to_vec(a), self._int_to_vec(b)
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(va):
            for j, y in enumerate(vb):
                prod[i + j] = (prod[i + j] + x * y) % p
        for top in range(2 * e - 2, e - 1, -1):
            c = prod[top]
            if c:
                prod[top] = 0
                for i, m in enumerate(self.modulus[:-1]):
                    prod[top - self.e + i] = (prod[top - self.e + i] - c * m) % p
        return self._vec_to_int(prod[:e])


def _poly_divides_prime_field(div, poly, p: int) -> bool:
    rem = list(poly)
    dd = len(div) - 1
    while len(rem) - 1 >= dd:
        lead = rem[-1] % p
        if lead:
            for i in range(dd + 1):
                rem[len(rem) - 1 - dd + i] = (rem[len(rem) - 1 - dd + i] - lead * div[i]) % p
        rem.pop()
    return all(c % p == 0 for c in rem)


@cache
def field(q: int) -> SmallField:
    return SmallField(q)


# -- polynomial helpers over F_q ----------------------------------------------

def poly_eval(fq: SmallField, coeffs: tuple[int, ...], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = fq.add[fq.mul[acc][x]][c]
    return acc


def poly_mul(fq: SmallField, a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = fq.add[out[i + j]][fq.mul[x][y]]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


def poly_divmod(fq: SmallField, a, b):
    rem = list(a)
    db = len(b) - 1
    quot = [0] * max(len(a) - db, 1)
    inv_lead = fq.inv[b[-1]]
    while len(rem) - 1 >= db and any(rem):
        lead = rem[-1]
        if lead == 0:
            rem.pop()
            continue
        coef = fq.mul[lead][inv_lead]
        pos = len(rem) - 1 - db
        quot[pos] = coef
        for i in range(db + 1):
            rem[pos + i] = fq.add[rem[pos + i]][fq.neg[fq.mul[coef][b[i]]]]
        rem.pop()
    while len(rem) > 1 and rem[-1] == 0:
        rem.pop()
    return tuple(quot), tuple(rem if rem else (0,))


def poly_is_zero(coeffs) -> bool:
    return all(c == 0 for c in coeffs)


@dataclass(frozen=True)
class PolyLabel:
    """A monic irreducible over F_q, identified by (q, degree, index)."""
    q: int
    degree: int
    index: int
    coeffs: tuple[int, ...] | None = None

    def display(self) -> str:
        return f"f{self.degree}.{self.index}"


@cache
def enumerate_irreducibles(q: int, d: int) -> tuple[PolyLabel, ...]:
    """Monic irreducibles of degree d over F_q except X, canonical order.

    Order is lexicographic on the coefficient vector read from the top
    coefficient down to the constant term, field elements ordered by
    their integer encoding.  X-1 is included (at d = 1) and carries its
    position in this order like any other polynomial.
    """
    if q ** d > ENUM_GUARD:
        raise ScaleGuardError(f"q^d = {q ** d} exceeds enumeration guard {ENUM_GUARD}")
    fq = field(q)
    lower: list[tuple[int, ...]] = []
    for dd in range(1, d // 2 + 1):
        for lab in enumerate_irreducibles(q, dd):
            lower.append(lab.coeffs)
        if dd == 1:
            lower.append((0, 1))  # X itself divides reducibles too
    out = []
    for enc in range(q ** d):
        # enc digit i (base q) = coefficient of X**(d-1-i)
        high_to_low = [(enc // q ** (d - 1 - i)) % q for i in range(d)]
        coeffs = tuple(reversed(high_to_low)) + (1,)
        if d == 1 and coeffs[0] == 0:
            continue  # X excluded from the universe
        if any(poly_eval(fq, coeffs, x) == 0 for x in range(q)):
            if d > 1:
                continue
            # degree-1 polynomials always have a root; they are irreducible
        reducible = False
        if d > 1:
            for div in lower:
                if len(div) - 1 > d // 2:
                    continue
                _, rem = poly_divmod(fq, coeffs, div)
                if poly_is_zero(rem):
                    reducible = True
                    break
        if not reducible:
            out.append(coeffs)
    labels = tuple(PolyLabel(q, d, i, c) for i, c in enumerate(out))
    assert len(labels) == count_irreducibles(q, d, frozenset({"X"}))
    return labels


def x_minus_one(q: int) -> tuple[int, ...]:
    return (field(q).minus_one, 1)


def non_unipotent_irreducibles(q: int, d: int) -> tuple[PolyLabel, ...]:
    """Canonical pool of irreducibles of degree d excluding X and X-1.

    These are the polynomials class labels index into; at d = 1 the index
    skips X-1, which the labels track separately.
    """
    labs = enumerate_irreducibles(q, d)
    if d == 1:
        target = x_minus_one(q)
        labs = tuple(l for l in labs if l.coeffs != target)
        labs = tuple(PolyLabel(q, 1, i, l.coeffs) for i, l in enumerate(labs))
    return labs


def non_unipotent_count(q: int, d: int) -> int:
    if d == 1:
        return count_irreducibles(q, 1, frozenset({"X", "X-1"}))
    return count_irreducibles(q, d, frozenset({"X"}))


# -- order formulas -----------------------------------------------------------

@cache
def gl_order(n: int, q: int) -> int:
    """|GL(n,q)| = prod_{i<n} (q^n - q^i); 1 for n = 0."""
    assert n >= 0
    out = 1
    for i in range(n):
        out *= q ** n - q ** i
    return out


def gl_order_p_part(n: int, q: int) -> int:
    return q ** (n * (n - 1) // 2)


def torus_order(alpha: tuple[int, ...], d: int, q: int) -> int:
    """Order prod_i (q^(d*i) - 1)^(r_i) of the torus of scaled type alpha."""
    assert alpha
    out = 1
    for part in alpha:
        out *= q ** (d * part) - 1
    return out


@cache
def unipotent_centralizer_order(nu: tuple[int, ...], t: int) -> int:
    """Centralizer order in GL(|nu|, t) of a unipotent element of type nu.

    a_nu(t) = t^(|nu| + 2 n(nu)) * prod_i prod_{j<=m_i} (1 - t^-j), with
    m_i the multiplicity of i in nu; exact integer.
    """
    if not nu:
        return 1
    size = sum(nu)
    exponent = size + 2 * n_stat(nu)
    num, den = 1, 1
    for part in set(nu):
        m = nu.count(part)
        for j in range(1, m + 1):
            num *= t ** j - 1
            den *= t ** j
    val, rem = divmod(t ** exponent * num, den)
    assert rem == 0
    return val
