import itertools

import pytest

from glblocks import qarith as Q
from glblocks.errors import ScaleGuardError


def test_prime_power():
    assert Q.prime_power(8) == (2, 3)
    assert Q.prime_power(9) == (3, 2)
    assert Q.prime_power(5) == (5, 1)
    for bad in (1, 6, 12, 100):
        with pytest.raises(ValueError):
            Q.prime_power(bad)
    assert Q.PrimePower.of(49).q == 49


def test_moebius():
    assert [Q.moebius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


def test_count_examples():
    assert Q.count_irreducibles(2, 2, frozenset({"X"})) == 1
    assert Q.count_irreducibles(3, 2, frozenset({"X"})) == 3
    assert Q.count_irreducibles(2, 1, frozenset({"X"})) == 1
    assert Q.count_irreducibles(2, 1, frozenset({"X", "X-1"})) == 0
    assert Q.count_irreducibles(3, 1, frozenset({"X", "X-1"})) == 1
    with pytest.raises(ValueError):
        Q.count_irreducibles(3, 1, frozenset({"X-2"}))


def test_enumeration_matches_count():
    for q in (2, 3, 4, 5):
        for d in range(1, 9):
            if q ** d > 10 ** 5:
                continue
            labels = Q.enumerate_irreducibles(q, d)
            assert len(labels) == Q.count_irreducibles(q, d, frozenset({"X"}))
            assert [l.index for l in labels] == list(range(len(labels)))


def test_enumeration_examples():
    assert [l.coeffs for l in Q.enumerate_irreducibles(2, 2)] == [(1, 1, 1)]
    assert [l.coeffs for l in Q.enumerate_irreducibles(3, 1)] == [(1, 1), (2, 1)]
    assert len(Q.enumerate_irreducibles(2, 3)) == 2


def test_enumerated_polynomials_are_irreducible():
    # no roots and no proper monic factor, checked by exhaustive division
    for q, d in [(2, 4), (3, 3), (4, 2), (5, 2)]:
        fq = Q.field(q)
        lower = [lab.coeffs for dd in range(1, d)
                 for lab in Q.enumerate_irreducibles(q, dd)] + [(0, 1)]
        for lab in Q.enumerate_irreducibles(q, d):
            for div in lower:
                _, rem = Q.poly_divmod(fq, lab.coeffs, div)
                assert not Q.poly_is_zero(rem)


def test_enumeration_guard():
    with pytest.raises(ScaleGuardError):
        Q.enumerate_irreducibles(2, 25)


def test_x_minus_one_pool():
    # degree-1 pool omits X-1 and reindexes
    pool = Q.non_unipotent_irreducibles(3, 1)
    assert [l.coeffs for l in pool] == [(1, 1)]
    assert Q.non_unipotent_count(3, 1) == 1
    assert Q.non_unipotent_count(2, 1) == 0
    assert Q.non_unipotent_count(4, 1) == 2
    assert Q.x_minus_one(4) == (1, 1)  # -1 = 1 in characteristic 2


def _det_prime_field(p, A):
    n = len(A)
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = [False] * n
        for i in range(n):
            if seen[i]:
                continue
            j = i
            ln = 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                ln += 1
            if ln % 2 == 0:
                sign = -sign
        prod = 1
        for i in range(n):
            prod = prod * A[i][perm[i]] % p
        total = (total + sign * prod) % p
    return total


def test_gl_order_brute_force():
    # count invertible matrices directly over the prime fields
    for n, p, expected in [(2, 2, 6), (3, 2, 168), (2, 3, 48)]:
        count = 0
        for entries in itertools.product(range(p), repeat=n * n):
            A = [entries[i * n:(i + 1) * n] for i in range(n)]
            if _det_prime_field(p, A) != 0:
                count += 1
        assert count == expected == Q.gl_order(n, p)
    assert Q.gl_order(1, 7) == 6
    assert Q.gl_order(0, 3) == 1


def test_torus_order():
    q, d = 3, 2
    for k in (1, 2, 3):
        assert Q.torus_order((1,) * k, d, q) == (q ** d - 1) ** k
    assert Q.torus_order((2,), 3, 2) == 2 ** 6 - 1
    assert Q.torus_order((2, 1), 1, 2) == 3


def test_unipotent_centralizer_special_cases():
    for n in (1, 2, 3, 4):
        for q in (2, 3, 4, 5):
            assert Q.unipotent_centralizer_order((1,) * n, q) == Q.gl_order(n, q)
    # single Jordan block of size 1 over the extension field
    for q in (2, 3, 4):
        for n in (1, 2, 3):
            assert Q.unipotent_centralizer_order((1,), q ** n) == q ** n - 1
    assert Q.unipotent_centralizer_order((3,), 2) == 4
    assert Q.unipotent_centralizer_order((), 5) == 1


def test_field_arithmetic():
    for q in (2, 3, 4, 5, 8, 9):
        fq = Q.field(q)
        for a in range(q):
            assert fq.add[a][fq.neg[a]] == 0
            if a:
                assert fq.mul[a][fq.inv[a]] == 1
            for b in range(q):
                assert fq.add[a][b] == fq.add[b][a]
                assert fq.mul[a][b] == fq.mul[b][a]
        # distributivity spot checks
        for a in range(q):
            for b in range(q):
                for c in (0, 1, q - 1):
                    lhs = fq.mul[a][fq.add[b][c]]
                    rhs = fq.add[fq.mul[a][b]][fq.mul[a][c]]
                    assert lhs == rhs
