"""Symmetric group characters via the hook-removal recursion.

Cycle types are partitions (tuples).  The recursion peels the largest
cycle first; order does not affect values and the tests exercise that.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cache
from math import factorial

from .partitions import (
    d_core,
    l_set_iterate,
    partitions_of,
    rim_hooks,
)


@cache
def z_order(alpha: tuple[int, ...]) -> int:
    """Centralizer order of a permutation of cycle type alpha."""
    out = 1
    for part in set(alpha):
        r = alpha.count(part)
        out *= part ** r * factorial(r)
    return out


def scaled_type(alpha: tuple[int, ...], d: int) -> tuple[int, ...]:
    """Cycle type with every cycle length multiplied by d."""
    return tuple(sorted((a * d for a in alpha), reverse=True))


@cache
def sn_char(lam: tuple[int, ...], rho: tuple[int, ...]) -> int:
    """Irreducible character of S_n labeled lam at cycle type rho."""
    if sum(lam) != sum(rho):
        raise ValueError("partition and cycle type have different sizes")
    if not lam:
        return 1
    t = rho[0]
    rest = rho[1:]
    return sum((-1) ** hk.leg_length * sn_char(hk.result, rest)
               for hk in rim_hooks(lam, t))


def sn_char_peel_order(lam, rho, largest_first: bool = True) -> int:
    """Same value, peeling cycles in a chosen order (consistency checks)."""
    rho = tuple(sorted(rho, reverse=largest_first))
    if not lam:
        return 1
    t = rho[0]
    return sum((-1) ** hk.leg_length * sn_char_peel_order(hk.result, rho[1:], largest_first)
               for hk in rim_hooks(lam, t))


@cache
def character_table(n: int):
    """{(lam, rho): value} over all pairs of partitions of n."""
    parts = partitions_of(n)
    return {(lam, rho): sn_char(lam, rho) for lam in parts for rho in parts}


@cache
def signed_removal_map(mu: tuple[int, ...], alpha: tuple[int, ...], d: int):
    """Map eta -> sum over interleavings of signs, removing hooks of
    lengths d*a for the parts a of alpha (largest first).

    This is the signed coefficient eps * phi(alpha) in the expansion of a
    character of S_{|mu|} at an element whose cycles split into the scaled
    type of alpha times a complementary permutation.
    """
    state = {mu: 1}
    for a in sorted(alpha, reverse=True):
        nxt: dict[tuple[int, ...], int] = {}
        for part, coef in state.items():
            for hk in rim_hooks(part, a * d):
                nxt[hk.result] = nxt.get(hk.result, 0) + coef * (-1) ** hk.leg_length
        state = nxt
    return {eta: c for eta, c in state.items() if c != 0}


def phi_coeff(mu, eta, alpha: tuple[int, ...], d: int) -> int:
    """Signed expansion coefficient for peeling the scaled type of alpha."""
    mu, eta, alpha = tuple(mu), tuple(eta), tuple(alpha)
    if sum(mu) - sum(eta) != sum(alpha) * d:
        raise ValueError("size mismatch: |mu| - |eta| must equal |alpha|*d")
    if eta not in l_set_iterate(mu, d, sum(alpha)):
        raise ValueError(f"{eta} is not reachable from {mu} by removing {sum(alpha)} {d}-hooks")
    return signed_removal_map(mu, alpha, d).get(eta, 0)


def regular_classes(n: int, ell: int) -> tuple[tuple[int, ...], ...]:
    """Cycle types with no part divisible by ell."""
    return tuple(rho for rho in partitions_of(n) if not any(p % ell == 0 for p in rho))


def restricted_inner_product(lam, mu, classes) -> Fraction:
    """Scalar product of two S_n characters restricted to the given classes."""
    return sum((Fraction(sn_char(lam, rho) * sn_char(mu, rho), z_order(rho))
                for rho in classes), Fraction(0))


def sn_l_blocks(n: int, ell: int) -> tuple[frozenset[tuple[int, ...]], ...]:
    """Blocks of S_n characters under linking across ell-regular classes.

    Characters are directly linked when their scalar product over classes
    with no cycle length divisible by ell is nonzero; blocks are the
    transitive closure, returned as frozensets of partition labels.
    """
    assert n >= 1 and ell >= 2
    labels = partitions_of(n)
    classes = regular_classes(n, ell)
    parent = {lam: lam for lam in labels}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, lam in enumerate(labels):
        for mu in labels[i + 1:]:
            if restricted_inner_product(lam, mu, classes) != 0:
                parent[find(lam)] = find(mu)
    blocks: dict[tuple[int, ...], set] = {}
    for lam in labels:
        blocks.setdefault(find(lam), set()).add(lam)
    return tuple(sorted((frozenset(b) for b in blocks.values()),
                        key=lambda b: sorted(b, reverse=True)))


def same_core_grouping(n: int, ell: int) -> tuple[frozenset[tuple[int, ...]], ...]:
    """Partitions of n grouped by their ell-core."""
    groups: dict[tuple[int, ...], set] = {}
    for lam in partitions_of(n):
        groups.setdefault(d_core(lam, ell), set()).add(lam)
    return tuple(sorted((frozenset(g) for g in groups.values()),
                        key=lambda b: sorted(b, reverse=True)))
