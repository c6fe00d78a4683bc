"""Identity structures: validation, relabeling, canonical forms, embeddings.

An identity is a ground set 0..n-1 with an equivalence relation e on a
family of its subsets such that equivalent subsets have equal cardinality.
Three flavors are supported:

* ``pairs``   e lives on all 2-element subsets,
* ``full``    e lives on all subsets (including the empty set and singletons),
* ``partial`` e lives on an explicitly listed family, closed under e.

Singleton equivalence classes are never stored: ``classes`` holds only the
classes with at least two members, and every domain subset not covered by a
stored class is implicitly alone in its own class.

Subsets are encoded as integer bitmasks (bit i set means element i is in
the subset).  Public constructors and the JSON layer speak element tuples;
the mask encoding is an internal uniformity that keeps relabeling and
restriction cheap.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import SizeGuardError, UsageError

FLAVORS = ("full", "partial", "pairs")

CANONICAL_BOUND = 12  # brute-force relabeling bound; cost is factorial in n


def mask_of(elems) -> int:
    """Bitmask of an iterable of ground elements."""
    m = 0
    for e in elems:
        m |= 1 << e
    return m


def elems_of(mask: int) -> tuple:
    """Sorted tuple of elements of a subset bitmask."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def all_pair_masks(n: int) -> list:
    """All 2-element subset masks of 0..n-1, in lex order of (i, j)."""
    return [(1 << i) | (1 << j) for i in range(n) for j in range(i + 1, n)]


@dataclass(frozen=True)
class Identity:
    """An equivalence pattern on subsets of 0..n-1.

    ``classes`` is a frozenset of frozensets of subset masks: the stored
    (non-singleton) equivalence classes.  ``domain`` is None except for the
    partial flavor, where it lists every subset e is defined on.
    """

    n: int
    flavor: str
    classes: frozenset
    domain: frozenset | None = None

    def class_list(self) -> list:
        """Stored classes in deterministic order (sorted by least subset)."""
        return sorted(
            (sorted(c, key=elems_of) for c in self.classes),
            key=lambda cl: elems_of(cl[0]),
        )

    def class_of(self, mask: int):
        """The stored class containing the subset, or None if singleton."""
        for c in self.classes:
            if mask in c:
                return c
        return None

    def active_elements(self) -> tuple:
        """Elements that occur in some stored class.

        Every subset touching only inactive elements sits in an implicit
        singleton class, so pattern questions depend on the active part.
        """
        m = 0
        for c in self.classes:
            for b in c:
                m |= b
        return elems_of(m)


def identity_from_subsets(n: int, flavor: str, classes, domain=None) -> Identity:
    """Build an Identity from element-tuple classes, dropping singletons."""
    enc = frozenset(
        frozenset(mask_of(sub) for sub in c) for c in classes if len(set(map(tuple, map(sorted, c)))) >= 2
    )
    dom = None
    if domain is not None:
        dom = frozenset(mask_of(sub) for sub in domain)
    return Identity(n, flavor, enc, dom)


def _domain_masks(s: Identity) -> list:
    """Every subset e is defined on, as masks, in deterministic order."""
    if s.flavor == "pairs":
        return all_pair_masks(s.n)
    if s.flavor == "full":
        return list(range(1 << s.n))
    return sorted(s.domain, key=elems_of)


def validate(s: Identity):
    """Check all structural invariants.

    Returns None when the structure is well formed, otherwise a string
    naming the first violated invariant and the offending class.
    """
    if s.flavor not in FLAVORS:
        return f"unknown flavor {s.flavor!r}"
    if s.n < 1:
        return f"ground size must be positive, got {s.n}"
    if s.flavor == "partial":
        if s.domain is None:
            return "partial flavor requires an explicit domain"
        for b in s.domain:
            if b >> s.n:
                return f"domain subset {elems_of(b)} exceeds ground set"
    elif s.domain is not None:
        return f"{s.flavor} flavor must not carry an explicit domain"
    dom = None if s.flavor == "full" else set(_domain_masks(s))
    seen = set()
    for c in s.classes:
        cl = sorted(c, key=elems_of)
        label = [elems_of(b) for b in cl]
        if len(cl) < 2:
            return f"class {label} stored with fewer than 2 members (singletons are implicit)"
        sizes = {b.bit_count() for b in cl}
        if len(sizes) != 1:
            return f"class {label} mixes subset cardinalities {sorted(sizes)}"
        for b in cl:
            if b >> s.n:
                return f"class {label} contains subset {elems_of(b)} outside the ground set"
            if s.flavor == "pairs" and b.bit_count() != 2:
                return f"class {label} contains non-pair subset {elems_of(b)}"
            if dom is not None and b not in dom:
                return f"class {label} contains subset {elems_of(b)} outside the domain"
            if b in seen:
                return f"subset {elems_of(b)} appears in two classes"
            seen.add(b)
    return None


def _check_valid(s: Identity):
    msg = validate(s)
    if msg is not None:
        raise UsageError(msg)


@dataclass(frozen=True)
class Embedding:
    """An injection between ground sets witnessing pattern preservation."""

    map: tuple
    ordered: bool

    def __post_init__(self):
        if len(set(self.map)) != len(self.map):
            raise UsageError("embedding map is not injective")
        if self.ordered and any(a >= b for a, b in zip(self.map, self.map[1:])):
            raise UsageError("ordered embedding must be strictly increasing")


def permute_mask(mask: int, pi) -> int:
    out = 0
    i = 0
    while mask:
        if mask & 1:
            out |= 1 << pi[i]
        mask >>= 1
        i += 1
    return out


def permute(s: Identity, pi) -> Identity:
    """Relabel every subset through the permutation pi of 0..n-1."""
    pi = tuple(pi)
    if sorted(pi) != list(range(s.n)):
        raise UsageError(f"permutation {pi} does not act on 0..{s.n - 1}")
    classes = frozenset(
        frozenset(permute_mask(b, pi) for b in c) for c in s.classes
    )
    dom = None
    if s.domain is not None:
        dom = frozenset(permute_mask(b, pi) for b in s.domain)
    return Identity(s.n, s.flavor, classes, dom)


def encoding(s: Identity) -> tuple:
    """Deterministic nested-tuple encoding used for ordering and canon."""
    cls = tuple(
        tuple(elems_of(b) for b in cl) for cl in s.class_list()
    )
    dom = None
    if s.domain is not None:
        dom = tuple(sorted(elems_of(b) for b in s.domain))
    return (s.n, s.flavor, cls, dom)


def canonical_form(s: Identity):
    """Lexicographically minimal relabeling of s, with a witnessing permutation.

    Two identities are isomorphic iff their canonical forms are equal.  The
    minimum is taken by brute force over all n! relabelings, so the cost is
    factorial; all shipped workloads stay at n <= 8.
    """
    if s.n > CANONICAL_BOUND:
        raise SizeGuardError(
            f"canonical_form supports n <= {CANONICAL_BOUND}, got {s.n}"
        )
    best = None
    best_pi = None
    for pi in itertools.permutations(range(s.n)):
        enc = encoding(permute(s, pi))
        if best is None or enc < best:
            best, best_pi = enc, pi
    return permute(s, best_pi), best_pi


def _class_id_map(s: Identity) -> dict:
    """Map each domain subset to a hashable class token.

    Stored classes share a token; implicit singletons get a unique one.
    """
    ids = {}
    for idx, cl in enumerate(s.class_list()):
        for b in cl:
            ids[b] = idx
    for b in _domain_masks(s):
        if b not in ids:
            ids[b] = ("s", b)
    return ids


def embeds(src: Identity, tgt: Identity, ordered: bool = False):
    """Search for an injection h with (b e c) iff (h''b e h''c).

    The search is a total exhaustive scan over all injections (increasing
    injections when ordered), so cost grows as n_tgt!/(n_tgt-n_src)!.
    Returns the first witness in lex order, or None.
    """
    if src.flavor != tgt.flavor:
        if src.flavor == "pairs":
            tgt = to_pairs(tgt)
        else:
            raise UsageError(
                f"cannot embed flavor {src.flavor!r} into flavor {tgt.flavor!r}"
            )
    if src.n > tgt.n:
        return None
    src_dom = _domain_masks(src)
    src_ids = _class_id_map(src)
    tgt_ids = _class_id_map(tgt)
    same_src = {}
    pairs_of_subsets = list(itertools.combinations(src_dom, 2))
    for b, c in pairs_of_subsets:
        same_src[(b, c)] = src_ids[b] == src_ids[c]
    gen = (
        itertools.combinations(range(tgt.n), src.n)
        if ordered
        else itertools.permutations(range(tgt.n), src.n)
    )
    for h in gen:
        ok = True
        for b, c in pairs_of_subsets:
            hb = permute_seq_mask(b, h)
            hc = permute_seq_mask(c, h)
            tb = tgt_ids.get(hb)
            tc = tgt_ids.get(hc)
            if tb is None or tc is None:
                ok = False  # image leaves the target domain
                break
            if (tb == tc) != same_src[(b, c)]:
                ok = False
                break
        if ok:
            return Embedding(h, ordered)
    return None


def permute_seq_mask(mask: int, h) -> int:
    """Push a subset mask through an injection given as a position list."""
    out = 0
    i = 0
    while mask:
        if mask & 1:
            out |= 1 << h[i]
        mask >>= 1
        i += 1
    return out


def to_pairs(s: Identity) -> Identity:
    """Restrict the relation to 2-element subsets.

    Accepts full identities, partial identities whose domain contains every
    pair, and pairs identities (returned unchanged, so the map is
    idempotent).
    """
    if s.flavor == "pairs":
        return s
    if s.flavor == "partial":
        need = set(all_pair_masks(s.n))
        if not need <= set(s.domain):
            missing = sorted(need - set(s.domain))[0]
            raise UsageError(
                f"partial domain misses pair {elems_of(missing)}; cannot project"
            )
    classes = []
    for c in s.classes:
        pc = frozenset(b for b in c if b.bit_count() == 2)
        if len(pc) >= 2:
            classes.append(pc)
    return Identity(s.n, "pairs", frozenset(classes))


def to_json(s: Identity) -> dict:
    """Serialize to the interchange dict.

    Subsets are ascending element lists, each class's subsets are sorted,
    and classes are sorted by their least subset, so the output is unique
    per structure.
    """
    d = {
        "n": s.n,
        "flavor": s.flavor,
        "classes": [
            [list(elems_of(b)) for b in cl] for cl in s.class_list()
        ],
    }
    if s.domain is not None:
        d["domain"] = sorted([list(elems_of(b)) for b in s.domain])
    return d


def from_json(d: dict) -> Identity:
    """Parse and validate the interchange dict."""
    try:
        n = int(d["n"])
        flavor = d["flavor"]
        classes = d["classes"]
    except (KeyError, TypeError) as exc:
        raise UsageError(f"identity JSON missing field: {exc}") from exc
    dom = d.get("domain")
    s = Identity(
        n,
        flavor,
        frozenset(frozenset(mask_of(sub) for sub in cl) for cl in classes),
        None if dom is None else frozenset(mask_of(sub) for sub in dom),
    )
    _check_valid(s)
    return s
