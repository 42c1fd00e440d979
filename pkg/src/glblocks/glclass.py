"""Conjugacy class labels of GL(n,q), d-elements, d-types and sections.

A class is a finitely supported assignment of partitions to monic
irreducibles distinct from X, with sizes weighted by degree summing to n.
The X-1 component is singled out (field `unipotent`); every other
polynomial is identified by (degree, index) into the canonical pool that
excludes X and X-1, so labels never need actual coefficients.

Section bookkeeping is entirely at the label level: the part of a class
supported on polynomials of degree divisible by d (variant "divisible")
or exactly d (variant "exact") determines the section it belongs to.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cache

from .errors import ScaleGuardError
from .partitions import check_partition, partitions_of
from .qarith import (
    gl_order,
    non_unipotent_count,
    prime_power,
    unipotent_centralizer_order,
)

CLASS_GUARD = 200_000

VARIANTS = ("divisible", "exact")


@dataclass(frozen=True, order=True)
class PolyKey:
    """(degree, index) into the canonical pool without X and X-1."""
    degree: int
    index: int


@dataclass(frozen=True)
class GLClassLabel:
    n: int
    q: int
    unipotent: tuple[int, ...]
    support: tuple[tuple[PolyKey, tuple[int, ...]], ...]

    def __post_init__(self):
        check_partition(self.unipotent)
        total = sum(self.unipotent)
        seen = set()
        for key, part in self.support:
            assert key not in seen and part
            seen.add(key)
            check_partition(part)
            total += key.degree * sum(part)
        if total != self.n:
            raise ValueError(f"support sizes sum to {total}, not n = {self.n}")

    def key(self) -> str:
        bits = []
        if self.unipotent:
            bits.append("u:" + ",".join(map(str, self.unipotent)))
        for pk, part in sorted(self.support):
            bits.append(f"f{pk.degree}.{pk.index}:" + ",".join(map(str, part)))
        return "|".join(bits) if bits else "id0"


def make_label(n: int, q: int, unipotent, support) -> GLClassLabel:
    support = tuple(sorted((PolyKey(*k) if not isinstance(k, PolyKey) else k, tuple(p))
                           for k, p in support))
    return GLClassLabel(n, q, tuple(unipotent), support)


def identity_label(n: int, q: int) -> GLClassLabel:
    return make_label(n, q, (1,) * n, ())


def _assignments_for_degree(q: int, degree: int, budget: int):
    """All ways to attach partitions to distinct degree-`degree` polynomials
    with total size `budget` (in boxes of the partitions, not weighted)."""
    count = non_unipotent_count(q, degree)
    if budget == 0:
        yield ()
        return
    if count == 0:
        return
    # choose how many polynomials are used, then indices and partitions
    for used in range(1, min(count, budget) + 1):
        for indices in itertools.combinations(range(count), used):
            for sizes in _compositions(budget, used):
                pools = [partitions_of(s) for s in sizes]
                for parts in itertools.product(*pools):
                    yield tuple((PolyKey(degree, indices[i]), parts[i])
                                for i in range(used))


def _compositions(total: int, k: int):
    """Compositions of `total` into k positive parts."""
    if k == 1:
        yield (total,)
        return
    for first in range(1, total - k + 2):
        for rest in _compositions(total - first, k - 1):
            yield (first,) + rest


@cache
def all_classes(n: int, q: int) -> tuple[GLClassLabel, ...]:
    """Every conjugacy class label of GL(n,q), duplicate free."""
    prime_power(q)
    assert n >= 0
    if n == 0:
        return (make_label(0, q, (), ()),)
    out = []
    for u_size in range(n + 1):
        for u_part in partitions_of(u_size):
            def rec(degree, remaining, acc, u_part=u_part):
                if len(out) > CLASS_GUARD:
                    raise ScaleGuardError(f"class count exceeds guard {CLASS_GUARD}")
                if degree > remaining:
                    if remaining == 0:
                        out.append(make_label(n, q, u_part, tuple(acc)))
                    return
                for budget in range(remaining // degree + 1):
                    for chunk in _assignments_for_degree(q, degree, budget):
                        rec(degree + 1, remaining - degree * budget,
                            acc + list(chunk))
            rec(1, n - u_size, [])
    assert len(set(c.key() for c in out)) == len(out)
    return tuple(sorted(out, key=lambda c: c.key()))


def centralizer_order(c: GLClassLabel) -> int:
    """Product over the support of unipotent-type centralizer factors."""
    out = unipotent_centralizer_order(c.unipotent, c.q)
    for key, part in c.support:
        out *= unipotent_centralizer_order(part, c.q ** key.degree)
    return out


def class_size(c: GLClassLabel) -> int:
    order = gl_order(c.n, c.q)
    cent = centralizer_order(c)
    size, rem = divmod(order, cent)
    assert rem == 0
    return size


# -- d-structure --------------------------------------------------------------

def _degree_matches(degree: int, d: int, variant: str) -> bool:
    if variant == "divisible":
        return degree % d == 0
    if variant == "exact":
        return degree == d
    raise ValueError(f"unknown variant {variant!r}")


def is_d_element(c: GLClassLabel, d: int, variant: str = "divisible") -> bool:
    """Support only on matching degrees, X-1 part absent or all ones."""
    if any(p != 1 for p in c.unipotent):
        return False
    return all(_degree_matches(k.degree, d, variant) for k, _ in c.support)


def is_d_regular(c: GLClassLabel, d: int, variant: str = "divisible") -> bool:
    """No support polynomial of matching degree besides X-1."""
    return not any(_degree_matches(k.degree, d, variant) for k, _ in c.support)


def xy_decompose(c: GLClassLabel, d: int, variant: str = "divisible"):
    """Split a class into its d-part and the complementary part.

    Returns (x_part, y_part): x_part collects the support on matching
    degrees (a label of GL(m,q) with m its own size, X-1 excluded), and
    y_part the rest including the whole X-1 component, a label of
    GL(n-m, q).  Recombining the supports recovers c.
    """
    x_sup = tuple((k, p) for k, p in c.support if _degree_matches(k.degree, d, variant))
    y_sup = tuple((k, p) for k, p in c.support if not _degree_matches(k.degree, d, variant))
    x_size = sum(k.degree * sum(p) for k, p in x_sup)
    x_part = make_label(x_size, c.q, (), x_sup)
    y_part = make_label(c.n - x_size, c.q, c.unipotent, y_sup)
    return x_part, y_part


def section_label(c: GLClassLabel, d: int, variant: str = "divisible"):
    """Canonical key of the section containing c: its sorted d-part support."""
    return tuple(sorted((k, p) for k, p in c.support
                 if _degree_matches(k.degree, d, variant)))


def d_type(c: GLClassLabel, d: int, variant: str = "divisible"):
    """Multiset of (k_i, m_i) pairs of the d-part, with weight sum k_i*m_i."""
    x_part, _ = xy_decompose(c, d, variant)
    pairs = []
    for key, part in x_part.support:
        m, rem = divmod(key.degree, d)
        assert rem == 0
        pairs.append((sum(part), m))
    pairs.sort()
    return tuple(pairs)


def class_d_weight(c: GLClassLabel, d: int, variant: str = "divisible") -> int:
    return sum(k * m for k, m in d_type(c, d, variant))


@cache
def sections(n: int, q: int, d: int, variant: str = "divisible"):
    """Map section key -> tuple of classes, keyed by the d-part support."""
    out: dict = {}
    for c in all_classes(n, q):
        out.setdefault(section_label(c, d, variant), []).append(c)
    return {k: tuple(v) for k, v in out.items()}


def classes_json(n: int, q: int, d: int | None = None,
                 variant: str = "divisible") -> str:
    """Deterministic JSON export of the class list."""
    records = []
    for c in all_classes(n, q):
        rec = {
            "assignment": c.key(),
            "size": class_size(c),
            "centralizer_order": centralizer_order(c),
        }
        if d is not None:
            rec["d_type"] = list(map(list, d_type(c, d, variant)))
            sec = section_label(c, d, variant)
            rec["section"] = "|".join(
                f"f{k.degree}.{k.index}:" + ",".join(map(str, p)) for k, p in sec) or "1"
        records.append(rec)
    return json.dumps({"n": n, "q": q, "classes": records}, sort_keys=True)
