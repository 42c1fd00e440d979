"""Restricted inner products, unipotent d-blocks, closed forms and domination.

All inner products are exact rationals computed class-wise:
sum over classes in the domain of chi(c) chi'(c) / |centralizer(c)|.
Values are integers and every class is closed under inversion up to a
degree-preserving relabeling of polynomials, so no conjugation is needed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from math import factorial

from .charvalue import alpha_coefficients, chi_value
from .errors import HypothesisError
from .glclass import (
    all_classes,
    centralizer_order,
    is_d_regular,
    make_label,
    sections,
    xy_decompose,
)
from .partitions import (
    d_core,
    d_weight,
    disjoint,
    epsilon,
    find_simple_disjoint,
    is_simple,
    partitions_of,
    removal_path_count,
    runners_used,
    single_runner_partition,
)
from .qarith import count_irreducibles


@dataclass(frozen=True)
class Context:
    """One (n, q, d, variant) computation context."""
    n: int
    q: int
    d: int
    variant: str = "divisible"

    @property
    def f_number(self) -> int:
        """Count of monic irreducibles of degree exactly d (without X, X-1)."""
        exclusions = frozenset({"X", "X-1"}) if self.d == 1 else frozenset({"X"})
        return count_irreducibles(self.q, self.d, exclusions)

    @property
    def f_hypothesis_holds(self) -> bool:
        """The standing hypothesis F >= n/d; contexts below it still compute."""
        return self.f_number * self.d >= self.n


@dataclass(frozen=True)
class InnerProductReport:
    nu: tuple[int, ...]
    nu2: tuple[int, ...]
    domain: str
    value: Fraction

    def value_str(self) -> str:
        return f"{self.value.numerator}/{self.value.denominator}"


@cache
def _class_data(ctx: Context):
    classes = all_classes(ctx.n, ctx.q)
    cents = {c: centralizer_order(c) for c in classes}
    regs = tuple(c for c in classes if is_d_regular(c, ctx.d, ctx.variant))
    return classes, cents, regs


def _domain_classes(ctx: Context, domain):
    classes, _, regs = _class_data(ctx)
    if domain == "full":
        return classes
    if domain == "d_regular":
        return regs
    if domain == "d_singular":
        reg_set = set(regs)
        return tuple(c for c in classes if c not in reg_set)
    if isinstance(domain, tuple) and domain and domain[0] == "section":
        return sections(ctx.n, ctx.q, ctx.d, ctx.variant)[domain[1]]
    raise ValueError(f"unknown domain {domain!r}")


def inner_product(nu, nu2, domain, ctx: Context) -> Fraction:
    """Exact restricted scalar product of two signed unipotent functions."""
    nu, nu2 = tuple(nu), tuple(nu2)
    _, cents, _ = _class_data(ctx)
    total = Fraction(0)
    for c in _domain_classes(ctx, domain):
        v = chi_value(nu, c) * chi_value(nu2, c)
        if v:
            total += Fraction(v, cents[c])
    return total


def inner_product_report(nu, nu2, domain, ctx: Context) -> InnerProductReport:
    name = domain if isinstance(domain, str) else f"section:{domain[1]}"
    return InnerProductReport(tuple(nu), tuple(nu2), name,
                              inner_product(nu, nu2, domain, ctx))


@cache
def regular_inner_matrix(ctx: Context):
    """{(nu, nu2): Fraction} over d-regular classes, all unordered pairs."""
    labels = partitions_of(ctx.n)
    out = {}
    for i, nu in enumerate(labels):
        for nu2 in labels[i:]:
            out[(nu, nu2)] = inner_product(nu, nu2, "d_regular", ctx)
    return out


# -- block partitions ----------------------------------------------------------

@dataclass(frozen=True)
class BlockPartition:
    blocks: tuple[frozenset[tuple[int, ...]], ...]
    kind: str

    def block_of(self, lam) -> frozenset:
        lam = tuple(lam)
        for b in self.blocks:
            if lam in b:
                return b
        raise KeyError(lam)

    def refines(self, other: "BlockPartition") -> bool:
        return all(any(b <= o for o in other.blocks) for b in self.blocks)


def _canonical_blocks(groups, kind) -> BlockPartition:
    return BlockPartition(tuple(sorted((frozenset(g) for g in groups),
                                       key=lambda b: sorted(b, reverse=True))), kind)


@cache
def unipotent_blocks(ctx: Context) -> BlockPartition:
    """Connected components under nonzero inner products over d-regular classes."""
    labels = partitions_of(ctx.n)
    matrix = regular_inner_matrix(ctx)
    parent = {lam: lam for lam in labels}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (nu, nu2), val in matrix.items():
        if nu != nu2 and val != 0:
            parent[find(nu)] = find(nu2)
    groups: dict = {}
    for lam in labels:
        groups.setdefault(find(lam), set()).add(lam)
    return _canonical_blocks(groups.values(), "computed")


def combinatorial_blocks(n: int, d: int) -> BlockPartition:
    """Same-d-core grouping of the partitions of n."""
    groups: dict = {}
    for lam in partitions_of(n):
        groups.setdefault(d_core(lam, d), set()).add(lam)
    return _canonical_blocks(groups.values(), "combinatorial")


# -- closed forms ----------------------------------------------------------------

def theorem46_rhs(lam, mu, ctx: Context) -> Fraction:
    """Closed-form inner product over d-regular classes for a simple,
    disjoint partner:  (-1)^w F^w / (w! (q^d-1)^w) |P_lam| |P_mu| eps eps.

    Validates its own hypotheses: same d-core, same weight w >= 1, mu
    simple and disjoint from lam, and the standing bound F >= n/d.
    """
    lam, mu = tuple(lam), tuple(mu)
    d = ctx.d
    if sum(lam) != ctx.n or sum(mu) != ctx.n:
        raise HypothesisError("partitions must have size n")
    gamma = d_core(lam, d)
    if d_core(mu, d) != gamma:
        raise HypothesisError("distinct d-cores")
    w = d_weight(lam, d)
    if d_weight(mu, d) != w or w < 1:
        raise HypothesisError("weights differ or vanish")
    if not is_simple(mu, d):
        raise HypothesisError("mu is not simple")
    if not disjoint(lam, mu, d):
        raise HypothesisError("lam and mu are not disjoint")
    if not ctx.f_hypothesis_holds:
        raise HypothesisError("F < n/d: outside the standing hypothesis")
    F = ctx.f_number
    sign = (-1) ** w * epsilon(lam, d) * epsilon(mu, d)
    return Fraction(sign * F ** w * removal_path_count(lam, d) * removal_path_count(mu, d),
                    factorial(w) * (ctx.q ** d - 1) ** w)


def weight_one_singular_value(lam, mu, ctx: Context) -> Fraction:
    """d-singular inner product F/(q^d-1) * eps_lam * eps_mu for distinct
    weight-1 partitions with the same d-core (no simplicity needed)."""
    lam, mu = tuple(lam), tuple(mu)
    d = ctx.d
    if lam == mu:
        raise HypothesisError("partitions must be distinct")
    if d_core(lam, d) != d_core(mu, d):
        raise HypothesisError("distinct d-cores")
    if d_weight(lam, d) != 1 or d_weight(mu, d) != 1:
        raise HypothesisError("weights must both be 1")
    return Fraction(ctx.f_number * epsilon(lam, d) * epsilon(mu, d),
                    ctx.q ** d - 1)


def find_theorem46_pairs(ctx: Context):
    """Ordered pairs (lam, mu) of size n satisfying the closed form's
    hypotheses: same core, same weight w >= 1, mu simple disjoint from lam."""
    labels = partitions_of(ctx.n)
    out = []
    for lam in labels:
        for mu in labels:
            if lam == mu:
                continue
            if d_core(lam, ctx.d) != d_core(mu, ctx.d):
                continue
            w = d_weight(lam, ctx.d)
            if w < 1 or d_weight(mu, ctx.d) != w:
                continue
            if is_simple(mu, ctx.d) and disjoint(lam, mu, ctx.d):
                out.append((lam, mu))
    return tuple(out)


# -- combinatorial identity ------------------------------------------------------

def lemma49_lhs(k: int, F: int) -> Fraction:
    """Sum over partitions of k of falling factorials of F over the
    product of part-factorials and multiplicity factorials."""
    assert k >= 1
    total = Fraction(0)
    for part in partitions_of(k):
        r = len(part)
        falling = 1
        for i in range(r):
            falling *= F - i
        denom = 1
        for j in set(part):
            m = part.count(j)
            denom *= factorial(j) ** m * factorial(m)
        total += Fraction(falling, denom)
    return total


def lemma49_check(k: int, F: int) -> bool:
    """Exact equality of the partition sum with F^k / k!."""
    return lemma49_lhs(k, F) == Fraction(F ** k, factorial(k))


def lemma49_polynomial_check(k: int) -> bool:
    """Both sides agree as polynomials in F: check at k+2 points, which
    over-determines polynomials of degree at most k."""
    return all(lemma49_check(k, F) for F in range(1, k + 3))


# -- constructive chains -----------------------------------------------------------

def _single(gamma, w, d, runner):
    return single_runner_partition(gamma, w, d, runner)


def _simple_on(gamma, w, d, avoid):
    return find_simple_disjoint(gamma, w, d, avoid)


def _clean_chain(chain, lam, mu):
    out = [chain[0]]
    for p in chain[1:]:
        if p == out[-1]:
            continue
        out.append(p)
        if p == mu:
            break
    assert out[0] == lam and out[-1] == mu
    return tuple(out)


def link_chain(lam, mu, d: int, F: int | None = None) -> tuple[tuple[int, ...], ...]:
    """Chain of partitions from lam to mu in which every consecutive pair
    satisfies the closed form's hypotheses in one direction.

    Follows the constructive case analysis on abacus runners.  Domain:
    weight w <= 1 for any d, w = 2 with d >= 2w, and w > 2 with
    d >= 2w-1 (and F >= w when F is supplied).  Outside that the
    elementary-link graph can be disconnected, so a HypothesisError is
    raised rather than a fake chain.
    """
    lam, mu = tuple(lam), tuple(mu)
    gamma = d_core(lam, d)
    if d_core(mu, d) != gamma:
        raise HypothesisError("distinct d-cores")
    w = d_weight(lam, d)
    if d_weight(mu, d) != w:
        raise HypothesisError("weights differ")
    if lam == mu:
        return (lam,)
    if F is not None and F < w:
        raise HypothesisError("F < w")
    if w == 1:
        # distinct weight-1 partitions sit on distinct runners: direct link
        return (lam, mu)
    if disjoint(lam, mu, d) and (is_simple(lam, d) or is_simple(mu, d)):
        return (lam, mu)
    if w == 2 and d < 2 * w:
        raise HypothesisError(
            "w = 2 needs d >= 4 for the runner construction (the elementary-link"
            " graph is disconnected at d = 3)")
    if w > 2 and d < 2 * w - 1:
        raise HypothesisError("need d >= 2w-1")

    r_lam = runners_used(lam, d)
    r_mu = runners_used(mu, d)
    lam_simple = is_simple(lam, d)
    mu_simple = is_simple(mu, d)

    if mu_simple and not lam_simple:
        # run the analysis from the simple end and flip at the end
        chain = tuple(reversed(link_chain(mu, lam, d, F)))
    elif lam_simple and mu_simple:
        if disjoint(lam, mu, d):
            chain = (lam, mu)
        else:
            free = [r for r in range(d) if r not in r_lam | r_mu]
            if free:
                nu = _single(gamma, w, d, free[0])
                chain = (lam, nu, mu)
            else:
                # all runners covered: forces d = 2w-1, one shared runner, w > 2
                assert w > 2
                mu_only = sorted(r_mu - r_lam)
                lam_only = sorted(r_lam - r_mu)
                nu = _single(gamma, w, d, mu_only[0])
                zeta = _simple_on(gamma, w, d, {mu_only[0], lam_only[0]})
                xi = _single(gamma, w, d, lam_only[0])
                chain = (lam, nu, zeta, xi, mu)
    elif lam_simple:
        if disjoint(lam, mu, d):
            chain = (lam, mu)
        elif r_mu <= r_lam:
            free = [r for r in range(d) if r not in r_lam]
            nu = _single(gamma, w, d, free[0])
            zeta = _simple_on(gamma, w, d, {free[0], min(r_mu)})
            mu_free = sorted(r_mu - runners_used(zeta, d))
            xi = _single(gamma, w, d, mu_free[0])
            eta = _simple_on(gamma, w, d, r_mu)
            chain = (lam, nu, zeta, xi, eta, mu)
        else:
            shared_free = sorted(r_mu - r_lam)
            nu = _single(gamma, w, d, shared_free[0])
            zeta = _simple_on(gamma, w, d, r_mu)
            chain = (lam, nu, zeta, mu)
    else:
        # neither simple: both use at most w-1 runners
        assert len(r_lam) <= w - 1 and len(r_mu) <= w - 1
        nu = _simple_on(gamma, w, d, r_lam)
        r_nu = runners_used(nu, d)
        if not r_mu <= r_nu:
            pick = sorted(r_mu - r_nu)
            zeta = _single(gamma, w, d, pick[0])
            xi = _simple_on(gamma, w, d, r_mu)
            chain = (lam, nu, zeta, xi, mu)
        else:
            pick = [r for r in range(d) if r not in r_nu and r not in r_mu][0]
            zeta = _single(gamma, w, d, pick)
            xi = _simple_on(gamma, w, d, {pick, min(r_mu)})
            mu_free = sorted(r_mu - runners_used(xi, d))
            delta = _single(gamma, w, d, mu_free[0])
            eta = _simple_on(gamma, w, d, r_mu)
            chain = (lam, nu, zeta, xi, delta, eta, mu)

    chain = _clean_chain(chain, lam, mu)
    for a, b in zip(chain, chain[1:]):
        assert chain_link_ok(a, b, d), f"bad link {a} -- {b}"
    return chain


def chain_link_ok(a, b, d: int) -> bool:
    """Consecutive chain entries must form a closed-form pair either way."""
    if a == b:
        return False
    if d_core(a, d) != d_core(b, d) or d_weight(a, d) != d_weight(b, d):
        return False
    return ((is_simple(b, d) and disjoint(a, b, d)) or
            (is_simple(a, d) and disjoint(a, b, d)))


# -- centralizer blocks and domination --------------------------------------------

def centralizer_blocks(x_key, ctx: Context):
    """Block structure of the centralizer of a d-element section head.

    The centralizer splits as an opaque factor times GL(l,q); its blocks
    are full character sets of the opaque factor tensored with the
    computed unipotent d-blocks of GL(l,q).
    """
    x_size = sum(k.degree * sum(p) for k, p in x_key)
    l = ctx.n - x_size
    sub = Context(l, ctx.q, ctx.d, ctx.variant)
    return {
        "x": x_key,
        "l": l,
        "h0": "Irr(H0) (opaque tensor factor)",
        "blocks": unipotent_blocks(sub).blocks,
    }


@dataclass(frozen=True)
class DominationDatum:
    x_key: tuple
    core: tuple[int, ...]
    members: frozenset[tuple[int, ...]]


def smt_check(ctx: Context, collect=False):
    """Reconstruction and disjoint domination data across every section.

    For every section head x and every label mu of size n the peel
    coefficients reconstruct the value on each class of the section from
    values of GL(l,q) labels on the complementary part, and the target
    labels stay inside the same-core combinatorial block of GL(l,q).
    Distinct cores then give disjoint unions of centralizer blocks.
    Returns (ok, data); reconstruction failure raises AssertionError.
    """
    labels = partitions_of(ctx.n)
    data = []
    secs = sections(ctx.n, ctx.q, ctx.d, ctx.variant)
    for x_key, classes in sorted(secs.items()):
        x_size = sum(k.degree * sum(p) for k, p in x_key)
        l = ctx.n - x_size
        x_part = make_label(x_size, ctx.q, (), x_key)
        blocks_of_l = {gamma: frozenset(lam for lam in partitions_of(l)
                                        if d_core(lam, ctx.d) == gamma)
                       for gamma in {d_core(lam, ctx.d) for lam in partitions_of(l)}}
        for mu in labels:
            alphas = alpha_coefficients(mu, x_part, ctx.q)
            gamma = d_core(mu, ctx.d)
            for lam in alphas:
                if d_core(lam, ctx.d) != gamma:
                    raise AssertionError("peel target escaped the source's d-core")
            for c in classes:
                x_of_c, y_of_c = xy_decompose(c, ctx.d, ctx.variant)
                assert sorted(x_of_c.support) == sorted(x_key)
                direct = chi_value(mu, c)
                recon = sum(coef * chi_value(lam, y_of_c)
                            for lam, coef in alphas.items())
                if direct != recon:
                    raise AssertionError(
                        f"reconstruction failed for {mu} at {c.key()}: "
                        f"{direct} != {recon}")
        # the dominated set for the block labeled gamma is the same-core
        # block of GL(l,q); distinct cores give disjoint sets by construction,
        # asserted here from the recorded members
        for gamma, members in sorted(blocks_of_l.items()):
            data.append(DominationDatum(x_key, gamma, members))
        seen: set = set()
        for gamma, members in sorted(blocks_of_l.items()):
            if seen & members:
                raise AssertionError("beta sets for distinct blocks intersect")
            seen |= members
    return True, (data if collect else None)


# -- reports ------------------------------------------------------------------------

def blocks_report(ctx: Context) -> dict:
    computed = unipotent_blocks(ctx)
    comb = combinatorial_blocks(ctx.n, ctx.d)
    refines = computed.refines(comb)
    equal = set(computed.blocks) == set(comb.blocks)
    return {
        "context": {"n": ctx.n, "q": ctx.q, "d": ctx.d, "variant": ctx.variant},
        "f_number": ctx.f_number,
        "f_hypothesis_holds": ctx.f_hypothesis_holds,
        "computed_blocks": [sorted(map(list, b)) for b in computed.blocks],
        "combinatorial_blocks": [sorted(map(list, b)) for b in comb.blocks],
        "verdict": "equal" if equal else ("refinement" if refines else "VIOLATION"),
    }


def inner_product_matrix_report(ctx: Context, domain="d_regular") -> dict:
    labels = partitions_of(ctx.n)
    matrix = {}
    for nu in labels:
        for nu2 in labels:
            val = inner_product(nu, nu2, domain, ctx)
            matrix[f"{list(nu)}|{list(nu2)}"] = f"{val.numerator}/{val.denominator}"
    return {
        "context": {"n": ctx.n, "q": ctx.q, "d": ctx.d, "variant": ctx.variant},
        "domain": domain if isinstance(domain, str) else f"section:{domain[1]}",
        "matrix": matrix,
    }


def inner_product_matrix_csv(ctx: Context, domain="d_regular") -> str:
    labels = partitions_of(ctx.n)
    lines = ["nu\\nu2," + ",".join(str(list(nu)).replace(",", " ") for nu in labels)]
    for nu in labels:
        row = [str(list(nu)).replace(",", " ")]
        for nu2 in labels:
            val = inner_product(nu, nu2, domain, ctx)
            row.append(f"{val.numerator}/{val.denominator}")
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def report_to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True)
