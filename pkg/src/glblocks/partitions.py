"""Partition combinatorics: hooks, beta-sets, abacus, d-cores and d-quotients.

Partitions are tuples of positive integers sorted weakly decreasing; the
empty tuple is the empty partition of 0.

Convention used throughout: the beta-set of a partition for d-structure
computations has length equal to the smallest multiple of d that is at
least the number of parts.  Extending a beta-set by a further multiple of
d shifts every bead up one spot on its own runner and inserts one bead at
the bottom of each runner, so the residue-labeled quotient components do
not depend on the choice among valid lengths.  Runner r always means
"beta numbers congruent to r mod d"; quotient component r comes from
runner r.  This may be a cyclic relabeling of conventions that put the
abacus origin elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache
from typing import Iterator, NamedTuple

from .errors import ConventionMismatchError, CoreMismatchError, InfeasibleError


def check_partition(parts) -> tuple[int, ...]:
    """Validate and canonicalize a partition given as any iterable."""
    lam = tuple(int(p) for p in parts)
    if any(p <= 0 for p in lam):
        raise ValueError(f"partition parts must be positive: {lam}")
    if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
        raise ValueError(f"partition parts must be weakly decreasing: {lam}")
    return lam


@cache
def partitions_of(n: int) -> tuple[tuple[int, ...], ...]:
    """All partitions of n, in reverse lexicographic order."""
    if n < 0:
        return ()
    if n == 0:
        return ((),)
    out = []

    def rec(rest, maxpart, prefix):
        if rest == 0:
            out.append(tuple(prefix))
            return
        for p in range(min(rest, maxpart), 0, -1):
            rec(rest - p, p, prefix + [p])

    rec(n, n, [])
    return tuple(out)


def conjugate(lam: tuple[int, ...]) -> tuple[int, ...]:
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p > i) for i in range(lam[0]))


def n_stat(lam: tuple[int, ...]) -> int:
    """n(lam) = sum (i-1)*lam_i, the partition's second elementary statistic."""
    return sum(i * p for i, p in enumerate(lam))


def beta_set(lam: tuple[int, ...], length: int) -> tuple[int, ...]:
    """First-column hook lengths of lam padded to `length` rows, ascending."""
    if length < len(lam):
        raise ValueError("beta-set length smaller than number of parts")
    padded = list(lam) + [0] * (length - len(lam))
    return tuple(sorted(padded[i] + length - 1 - i for i in range(length)))


def partition_from_beta(beta) -> tuple[int, ...]:
    bs = sorted(beta, reverse=True)
    length = len(bs)
    parts = [bs[i] - (length - 1 - i) for i in range(length)]
    return tuple(p for p in parts if p > 0)


class HookRemoval(NamedTuple):
    hook_length: int
    leg_length: int
    result: tuple[int, ...]


class RemovalPath(NamedTuple):
    steps: tuple[HookRemoval, ...]
    total_leg: int


@cache
def rim_hooks(lam: tuple[int, ...], h: int) -> tuple[HookRemoval, ...]:
    """Every rim hook of length h in lam, ordered by start row of the hook.

    A hook of length h corresponds to a beta number b with b-h >= 0 not in
    the beta-set; its leg length is the number of beta numbers strictly
    between b-h and b.  Returned in decreasing b, which is increasing
    start row of the removed strip.
    """
    assert h >= 1
    beta = beta_set(lam, len(lam))
    bset = set(beta)
    out = []
    for b in sorted(beta, reverse=True):
        if b - h >= 0 and (b - h) not in bset:
            leg = sum(1 for b2 in beta if b - h < b2 < b)
            new = (bset - {b}) | {b - h}
            out.append(HookRemoval(h, leg, partition_from_beta(new)))
    return tuple(out)


def _quotient_length(lam: tuple[int, ...], d: int) -> int:
    return d * (-(-len(lam) // d))


@cache
def d_quotient(lam: tuple[int, ...], d: int) -> tuple[tuple[int, ...], ...]:
    """d-tuple of partitions read off the runners of the canonical abacus."""
    assert d >= 1
    length = _quotient_length(lam, d)
    beta = beta_set(lam, length)
    comps = []
    for r in range(d):
        positions = tuple((b - r) // d for b in beta if b % d == r)
        comps.append(partition_from_beta(positions))
    return tuple(comps)


@cache
def d_core(lam: tuple[int, ...], d: int) -> tuple[int, ...]:
    """The partition left after removing all d-hooks; order independent."""
    assert d >= 1
    length = _quotient_length(lam, d)
    beta = beta_set(lam, length)
    new_beta = []
    counts = [0] * d
    for b in beta:
        counts[b % d] += 1
    for r in range(d):
        new_beta.extend(d * j + r for j in range(counts[r]))
    return partition_from_beta(new_beta)


@cache
def d_weight(lam: tuple[int, ...], d: int) -> int:
    core = d_core(lam, d)
    w, rem = divmod(sum(lam) - sum(core), d)
    assert rem == 0
    return w


def from_core_quotient(core: tuple[int, ...], quotient, d: int) -> tuple[int, ...]:
    """Rebuild the unique partition with the given d-core and d-quotient."""
    quotient = tuple(tuple(c) for c in quotient)
    if len(quotient) != d:
        raise ValueError("quotient must have exactly d components")
    extra = max([len(c) for c in quotient] + [0]) + 1
    length = _quotient_length(core, d) + d * extra
    beta = beta_set(core, length)
    counts = [0] * d
    for b in beta:
        counts[b % d] += 1
    new_beta = []
    for r in range(d):
        if len(quotient[r]) > counts[r]:
            raise ValueError("quotient component too long for runner")
        new_beta.extend(d * pos + r for pos in beta_set(quotient[r], counts[r]))
    return partition_from_beta(new_beta)


@cache
def runners_used(lam: tuple[int, ...], d: int) -> frozenset[int]:
    """Indices of runners carrying a nonempty quotient component."""
    return frozenset(r for r, c in enumerate(d_quotient(lam, d)) if c)


@cache
def is_simple(lam: tuple[int, ...], d: int) -> bool:
    """True iff lam has no hook of length m*d for any m >= 2.

    Equivalent to every quotient component being empty or (1): hooks of
    length k*d in lam biject with k-hooks in the quotient.
    """
    return all(c in ((), (1,)) for c in d_quotient(lam, d))


def disjoint(lam: tuple[int, ...], mu: tuple[int, ...], d: int) -> bool:
    """True iff the quotient supports of lam and mu use distinct runners."""
    return not (runners_used(lam, d) & runners_used(mu, d))


def removal_paths(lam, gamma, d: int) -> tuple[RemovalPath, ...]:
    """All maximal d-hook removal sequences from lam down to its core gamma."""
    if gamma != d_core(lam, d):
        raise CoreMismatchError(f"{gamma} is not the {d}-core of {lam}")
    out = []

    def rec(cur, steps, legs):
        hooks = rim_hooks(cur, d)
        if not hooks:
            assert cur == gamma
            out.append(RemovalPath(tuple(steps), legs))
            return
        for hk in hooks:
            rec(hk.result, steps + [hk], legs + hk.leg_length)

    rec(lam, [], 0)
    return tuple(out)


@cache
def removal_path_count(lam: tuple[int, ...], d: int) -> int:
    """|P| over all maximal d-hook removal sequences, without enumerating."""
    hooks = rim_hooks(lam, d)
    if not hooks:
        return 1
    return sum(removal_path_count(hk.result, d) for hk in hooks)


@cache
def epsilon(lam: tuple[int, ...], d: int) -> int:
    """(-1)**(sum of leg lengths) along any full d-hook removal path."""
    sign = 1
    cur = lam
    while True:
        hooks = rim_hooks(cur, d)
        if not hooks:
            return sign
        sign *= (-1) ** hooks[0].leg_length
        cur = hooks[0].result


@cache
def path_sign_set(lam: tuple[int, ...], d: int) -> frozenset[int]:
    """All values of (-1)**L achieved over full removal paths (tests want {eps})."""
    hooks = rim_hooks(lam, d)
    if not hooks:
        return frozenset({1})
    out = set()
    for hk in hooks:
        s = (-1) ** hk.leg_length
        out.update(s * t for t in path_sign_set(hk.result, d))
    return frozenset(out)


@cache
def l_set_iterate(lam: tuple[int, ...], d: int, i: int) -> frozenset[tuple[int, ...]]:
    """Partitions reachable from lam by removing i d-hooks."""
    assert i >= 0
    if i == 0:
        return frozenset({lam})
    out = set()
    for hk in rim_hooks(lam, d):
        out.update(l_set_iterate(hk.result, d, i - 1))
    return frozenset(out)


def l_set_single(lam: tuple[int, ...], d: int, i: int) -> frozenset[tuple[int, ...]]:
    """Partitions reachable from lam by removing one hook of length i*d."""
    assert i >= 0
    if i == 0:
        return frozenset({lam})
    return frozenset(hk.result for hk in rim_hooks(lam, i * d))


def l_sets(lam, d: int, i: int, mode: str = "iterate"):
    if mode == "iterate":
        return l_set_iterate(lam, d, i)
    if mode == "single-hook":
        return l_set_single(lam, d, i)
    raise ValueError(f"unknown l_sets mode {mode!r}")


def _runner_decomposition(core: tuple[int, ...], d: int, extra: int):
    """Runner bead positions of the core at a length with `extra` spare beads."""
    length = _quotient_length(core, d) + d * extra
    beta = beta_set(core, length)
    runners = []
    for r in range(d):
        runners.append(sorted((b - r) // d for b in beta if b % d == r))
    return runners


def single_runner_partition(gamma, w: int, d: int, runner: int,
                            shape: tuple[int, ...] | None = None) -> tuple[int, ...]:
    """Partition with d-core gamma whose weight-w quotient sits on one runner."""
    if shape is None:
        shape = (w,)
    assert sum(shape) == w and 0 <= runner < d
    quotient = [()] * d
    quotient[runner] = tuple(shape)
    return from_core_quotient(gamma, quotient, d)


def find_simple_disjoint(gamma, w: int, d: int, avoid=frozenset()) -> tuple[int, ...]:
    """Simple partition of |gamma| + w*d with core gamma avoiding given runners.

    Puts a single elementary bead move, component (1), on each of the w
    smallest free runners.
    """
    avoid = frozenset(avoid)
    free = [r for r in range(d) if r not in avoid]
    if len(free) < w:
        raise InfeasibleError(
            f"need {w} free runners among {d}, only {len(free)} outside {sorted(avoid)}")
    quotient = [()] * d
    for r in free[:w]:
        quotient[r] = (1,)
    result = from_core_quotient(gamma, quotient, d)
    assert is_simple(result, d) and d_weight(result, d) == w
    return result


# -- abacus -----------------------------------------------------------------

@dataclass(frozen=True)
class AbacusState:
    """Bead positions on d runners plus the beta-set length they came from."""
    d: int
    runners: tuple[tuple[int, ...], ...]
    origin_offset: int

    def __post_init__(self):
        assert len(self.runners) == self.d
        for runner in self.runners:
            assert all(runner[i] < runner[i + 1] for i in range(len(runner) - 1))
        assert sum(len(r) for r in self.runners) == self.origin_offset

    @staticmethod
    def from_partition(lam, d: int, length: int | None = None) -> "AbacusState":
        lam = tuple(lam)
        if length is None:
            length = max(d, _quotient_length(lam, d))
        if length % d != 0:
            raise ValueError("beta-set length must be a multiple of d")
        beta = beta_set(lam, length)
        runners = tuple(
            tuple(sorted((b - r) // d for b in beta if b % d == r)) for r in range(d))
        return AbacusState(d, runners, length)

    def to_partition(self) -> tuple[int, ...]:
        beta = [self.d * pos + r for r, runner in enumerate(self.runners) for pos in runner]
        return partition_from_beta(beta)

    def quotient(self) -> tuple[tuple[int, ...], ...]:
        return tuple(partition_from_beta(runner) for runner in self.runners)

    def edge_sequence(self, pad: int = 2) -> str:
        """The 0/1 rim encoding read off the abacus, origin marked with '>'.

        1 is a bead (vertical rim step), 0 a gap (horizontal step); the
        marker sits before position 0.  `pad` extra all-1 spots below and
        all-0 spots above the interesting window are shown.
        """
        beads = {self.d * pos + r for r, runner in enumerate(self.runners) for pos in runner}
        top = max(beads) + 1 + pad if beads else pad
        chars = ["1" if i in beads else "0" for i in range(top)]
        return "1" * pad + ">" + "".join(chars)

    def render(self) -> str:
        """Runner-per-column text art, origin row at the bottom."""
        height = max((max(r) for r in self.runners if r), default=0) + 2
        lines = []
        for row in range(height - 1, -1, -1):
            cells = ["O" if row in self.runners[r] else "." for r in range(self.d)]
            marker = "> " if row == 0 else "  "
            lines.append(marker + " ".join(cells))
        return "\n".join(lines)


def compare_supports(a: AbacusState, b: AbacusState) -> bool:
    """Disjointness of two abacus states; demands one shared convention."""
    if a.d != b.d:
        raise ConventionMismatchError("different runner counts")
    if a.origin_offset % a.d != 0 or b.origin_offset % b.d != 0:
        raise ConventionMismatchError("origin offsets are not multiples of d")
    sup_a = {r for r, c in enumerate(a.quotient()) if c}
    sup_b = {r for r, c in enumerate(b.quotient()) if c}
    return not (sup_a & sup_b)


# -- independent diagram-walking oracle (kept here for reuse by tests) ------

def rim_hooks_by_diagram(lam: tuple[int, ...], h: int) -> tuple[HookRemoval, ...]:
    """Rim hooks of length h found by walking border strips of the diagram.

    Independent of the beta-set route: tries every contiguous length-h
    piece of the rim and keeps those whose removal leaves a partition.
    """
    lam = tuple(lam)
    n_rows = len(lam)
    out = []
    for start_row in range(n_rows):
        # walk the rim starting from the last cell of start_row
        cells = []
        r, c = start_row, lam[start_row] - 1
        while len(cells) < h and r < n_rows and c >= 0:
            cells.append((r, c))
            below = lam[r + 1] - 1 if r + 1 < n_rows else -1
            if below == c:
                r += 1
            elif below < c:
                c -= 1
            else:
                break
        if len(cells) != h:
            continue
        removed = set(cells)
        new_rows = []
        for i in range(n_rows):
            row_removed = [cc for (rr, cc) in removed if rr == i]
            if row_removed:
                new_rows.append(min(row_removed))
            else:
                new_rows.append(lam[i])
        if any(new_rows[i] < new_rows[i + 1] for i in range(n_rows - 1)):
            continue
        result = tuple(p for p in new_rows if p > 0)
        if sum(result) != sum(lam) - h:
            continue
        leg = len({rr for (rr, cc) in removed}) - 1
        out.append(HookRemoval(h, leg, result))
    return tuple(out)


def iter_all_partitions(max_size: int) -> Iterator[tuple[int, ...]]:
    for n in range(max_size + 1):
        yield from partitions_of(n)
