"""Explicit identity families and structural transforms.

Contains the trivial pattern, the two-class separating families (s_k,
s_prime_n, s_doubleprime_n), the meet-respecting structures on binary
strings, the k-simplification coarsening, and the order-forcing extension.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import (
    Identity,
    elems_of,
    mask_of,
    validate,
)
from .errors import SizeGuardError, UsageError


def trivial(n: int) -> Identity:
    """Pairs identity on 0..n-1 with every pair class a singleton."""
    if n < 1:
        raise UsageError(f"trivial needs n >= 1, got {n}")
    return Identity(n, "pairs", frozenset())


def trivial_full(n: int) -> Identity:
    """Full-flavor identity on 0..n-1 with every subset class a singleton."""
    if n < 1:
        raise UsageError(f"trivial_full needs n >= 1, got {n}")
    return Identity(n, "full", frozenset())


def _two_class_identity(n: int, a_pairs, b_pairs) -> Identity:
    classes = []
    for pairs in (a_pairs, b_pairs):
        masks = frozenset(mask_of(p) for p in pairs)
        if len(masks) >= 2:  # single-pair classes are implicit singletons
            classes.append(masks)
    return Identity(n, "pairs", frozenset(classes))


def s_k(k: int) -> Identity:
    """Two-class family on k + C(k,2) elements.

    Ground elements 0..k-1 index one side; element k + C(l1,2) + l0 is the
    witness for each l0 < l1 < k.  Class A joins {l0, w}, class B joins
    {l1, w}, over all such (l0, l1).  For k=2 both classes have one pair
    each and the stored class set is empty (singletons are implicit).
    """
    if k < 1:
        raise UsageError(f"s_k needs k >= 1, got {k}")
    n = k + k * (k - 1) // 2
    a, b = [], []
    for l1 in range(k):
        for l0 in range(l1):
            w = k + l1 * (l1 - 1) // 2 + l0
            a.append((l0, w))
            b.append((l1, w))
    return _two_class_identity(n, a, b)


def s_prime_n(n: int) -> Identity:
    """Two-class family on 2n + n*n elements.

    Witness element for (l0, l1) with l0, l1 < n is 2n + n*l0 + l1.  Class
    A joins {l0, w}; class B joins {n + l1, w}.
    """
    if n < 1:
        raise UsageError(f"s_prime_n needs n >= 1, got {n}")
    ground = 2 * n + n * n
    a, b = [], []
    for l0 in range(n):
        for l1 in range(n):
            w = 2 * n + n * l0 + l1
            a.append((l0, w))
            b.append((n + l1, w))
    return _two_class_identity(ground, a, b)


def s_doubleprime_n(n: int) -> Identity:
    """Tree-indexed family on 2^n + 2^(2n) elements.

    Ground elements 0..2^n-1 are the length-n binary strings by their
    little-endian value; element 2^n + 2^n*l0 + l1 is the witness for the
    string pair (l0, l1).  For every proper prefix eta (length m < n) and
    side i in {0,1} there is a class joining {l_i, w(l0, l1)} over all
    string pairs whose strings extend eta+(0) and eta+(1) respectively.
    Classes with a single pair (all of them at m = n-1) remain implicit.
    """
    if n < 1:
        raise UsageError(f"s_doubleprime_n needs n >= 1, got {n}")
    if n > 3:
        raise SizeGuardError(f"s_doubleprime_n supports n <= 3, got {n}")
    base = 1 << n

    def value(bits) -> int:
        return sum(b << i for i, b in enumerate(bits))

    classes = []
    for m in range(n):
        for eta in itertools.product((0, 1), repeat=m):
            tails = list(itertools.product((0, 1), repeat=n - m - 1))
            ext0 = [value(eta + (0,) + t) for t in tails]
            ext1 = [value(eta + (1,) + t) for t in tails]
            for i in (0, 1):
                pairs = set()
                for l0 in ext0:
                    for l1 in ext1:
                        w = base + base * l0 + l1
                        pairs.add(mask_of((l0 if i == 0 else l1, w)))
                if len(pairs) >= 2:
                    classes.append(frozenset(pairs))
    return Identity(base + base * base, "pairs", frozenset(classes))


@dataclass(frozen=True)
class LabeledIdentity:
    """A pairs identity whose ground elements carry binary-string labels."""

    base: Identity
    labels: tuple  # labels[i] is the string of ground element i

    def __post_init__(self):
        if len(self.labels) != self.base.n:
            raise UsageError("label count does not match ground size")
        if len(set(self.labels)) != len(self.labels):
            raise UsageError("labels must be injective")
        if len({len(l) for l in self.labels}) > 1:
            raise UsageError("labels must all have the same length")


def meet(x: str, y: str) -> str:
    """Longest common prefix of two strings."""
    i = 0
    while i < min(len(x), len(y)) and x[i] == y[i]:
        i += 1
    return x[:i]


def max_meet_identity(n_str: int) -> LabeledIdentity:
    """Coarsest meet-respecting identity on all binary strings of a length.

    Ground elements are the 2^n_str strings in lexicographic order; two
    pairs are equivalent iff their longest common prefixes coincide.
    """
    if n_str < 1:
        raise UsageError(f"max_meet_identity needs n_str >= 1, got {n_str}")
    if (1 << n_str) > 16:
        raise SizeGuardError(
            f"max_meet_identity supports 2^n_str <= 16, got n_str={n_str}"
        )
    strings = ["".join(bits) for bits in itertools.product("01", repeat=n_str)]
    strings.sort()
    groups = {}
    for i, j in itertools.combinations(range(len(strings)), 2):
        groups.setdefault(meet(strings[i], strings[j]), set()).add(mask_of((i, j)))
    classes = frozenset(
        frozenset(g) for g in groups.values() if len(g) >= 2
    )
    return LabeledIdentity(
        Identity(len(strings), "pairs", classes), tuple(strings)
    )


def is_meet_respecting(s: LabeledIdentity) -> bool:
    """True iff every class's pairs share one longest-common-prefix."""
    for cl in s.base.classes:
        meets = set()
        for b in cl:
            i, j = elems_of(b)
            meets.add(meet(s.labels[i], s.labels[j]))
            if len(meets) > 1:
                return False
    return True


class SimplifyError(RuntimeError):
    """The coarsened relation failed the equivalence-relation audit."""


def _op_copy(b_mask: int, c_mask: int, sub_mask: int) -> int:
    """Order-isomorphic copy of sub (a subset of b) inside c."""
    b_elems = elems_of(b_mask)
    c_elems = elems_of(c_mask)
    out = 0
    for pos, x in enumerate(b_elems):
        if sub_mask >> x & 1:
            out |= 1 << c_elems[pos]
    return out


def simplify_k(s: Identity, k: int) -> Identity:
    """Coarsen a full-flavor identity to its k-subpattern relation.

    Two equal-size subsets b, c become equivalent iff for every subset b'
    of b with |b'| <= k, b' is e-equivalent to its order-isomorphic copy
    inside c.  The computed relation is audited pairwise inside every
    resulting class and a SimplifyError is raised if symmetry or
    transitivity fails; the audit never repairs anything silently.
    """
    if s.flavor != "full":
        raise UsageError(f"simplify_k needs full flavor, got {s.flavor!r}")
    if k < 1:
        raise UsageError(f"simplify_k needs k >= 1, got {k}")
    ids = {}
    for idx, cl in enumerate(s.class_list()):
        for b in cl:
            ids[b] = idx
    def eid(mask):
        return ids.get(mask, ("s", mask))

    def related(b: int, c: int) -> bool:
        # all <=k subsets of b must be e-related to their copies in c
        sub = b
        while True:
            if sub.bit_count() <= k and eid(sub) != eid(_op_copy(b, c, sub)):
                return False
            if sub == 0:
                return True
            sub = (sub - 1) & b

    by_size = {}
    for mask in range(1 << s.n):
        by_size.setdefault(mask.bit_count(), []).append(mask)

    classes = []
    for size, masks in by_size.items():
        parent = {m: m for m in masks}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for b, c in itertools.combinations(masks, 2):
            if related(b, c):
                parent[find(b)] = find(c)
        groups = {}
        for m in masks:
            groups.setdefault(find(m), []).append(m)
        for g in groups.values():
            if len(g) >= 2:
                for b, c in itertools.combinations(g, 2):
                    if not (related(b, c) and related(c, b)):
                        raise SimplifyError(
                            "coarsened relation is not an equivalence: "
                            f"subsets {elems_of(b)} and {elems_of(c)} were "
                            "merged transitively but are not directly related"
                        )
                classes.append(frozenset(g))
    return Identity(s.n, "full", frozenset(classes))


def order_forcing_extension(s: Identity, report_merges: bool = False):
    """Extend a pairs identity so realizations must sort its ground set.

    The result lives on 2n-1 elements: the original pattern is kept and,
    for each l < n-1, the new pair {l, n+l} is placed in the class of
    {l, l+1}.  The equivalence closure is taken; since every added pair is
    fresh and attaches to exactly one existing class, the closure never
    merges two original classes, and the optional merge report stays empty.

    With report_merges=True returns (identity, merges) where merges lists
    any classes that were joined (diagnostic; expected empty).
    """
    if s.flavor != "pairs":
        raise UsageError(f"order_forcing_extension needs pairs flavor, got {s.flavor!r}")
    if s.n < 2:
        raise UsageError(f"order_forcing_extension needs n >= 2, got {s.n}")
    n = s.n
    cls = [set(c) for c in s.classes]

    def locate(mask):
        for c in cls:
            if mask in c:
                return c
        c = {mask}
        cls.append(c)
        return c

    merges = []
    for l in range(n - 1):
        target = locate(mask_of((l, l + 1)))
        fresh = locate(mask_of((l, n + l)))
        if target is not fresh:
            if len(fresh) > 1 and len(target) > 1:
                merges.append((sorted(map(elems_of, target)), sorted(map(elems_of, fresh))))
            target |= fresh
            cls.remove(fresh)
    out = Identity(
        2 * n - 1,
        "pairs",
        frozenset(frozenset(c) for c in cls if len(c) >= 2),
    )
    bad = validate(out)
    if bad is not None:
        raise SimplifyError(f"extension produced an invalid structure: {bad}")
    if report_merges:
        return out, merges
    return out
