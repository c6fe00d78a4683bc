"""Ranked-coloring membership criterion for pairs identities.

Accepts an identity iff some linear order of the ground set and some rank
function h on pair classes satisfy, for every class a with left endpoint
set a0 and right endpoint set a1 (per the chosen order):

  (i)   a0 and a1 are disjoint,
  (ii)  each pair of a has its smaller element in a0 and larger in a1,
  (iii) every pair drawn from a's endpoints that is not itself in a sits
        in a class ranked strictly above a.

The strengthened mode additionally demands, for every two distinct
non-singleton classes, that at least one of them has no foreign pairs
inside the other's span (no mutual feeding).

This is a necessary condition for realizability by every coloring at the
target cardinals, not a full membership decision: some patterns outside
the duplication/restriction catalog still pass it (the two-class splitting
families do).  Non-membership for those is certified by catalog
restriction queries instead; see the closure module.

Implementation note: condition (iii)'s constraint graph does not depend
on the chosen order, because a class's endpoint union equals the union of
its pairs under every order.  The checker therefore tests acyclicity once
and searches orders only for (i)/(ii), which is semantically identical to
the per-order formulation but prunes entire searches.  The search itself
enumerates orders lexicographically with prefix pruning: a prefix dies as
soon as a class has some element on both sides.  Verdict ties break to the
lexicographically least accepting order.

Size guard: the search runs on the active elements (those in stored
classes); every other element only forms singleton sink classes that
cannot affect any condition.  Active size is capped at 12.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import Identity, elems_of, mask_of, validate
from .errors import SizeGuardError, UsageError

ACTIVE_BOUND = 12
EXPLAIN_BOUND = 7  # per-order forensics enumerate all orders: factorial


@dataclass(frozen=True)
class CriterionVerdict:
    """Outcome of the check, carrying witnesses when accepted.

    order: permutation of the whole ground set inducing the linear order.
    h: rank per stored class (aligned with Identity.class_list()) plus
       ranks for the singleton pair classes that receive constraints;
       unlisted singletons implicitly rank 0.
    endpoints: per stored class, the (a0, a1) element tuples.
    """

    accepted: bool
    strengthened: bool
    order: tuple | None = None
    class_ranks: tuple | None = None
    pair_ranks: tuple | None = None  # ((i, j), rank) pairs
    endpoints: tuple | None = None


def _span(cl) -> int:
    m = 0
    for b in cl:
        m |= b
    return m


def _class_nodes(s: Identity):
    """Stored classes as pair lists plus a lookup from pair mask to node.

    Nodes 0..k-1 are the stored classes (class_list order); singleton
    pair classes are represented by their mask.
    """
    stored = [tuple(sorted(c)) for c in s.class_list()]
    owner = {}
    for idx, cl in enumerate(stored):
        for b in cl:
            owner[b] = idx
    return stored, owner


def _digraph(stored, owner):
    """Edges idx -> node for every foreign pair inside a class's span.

    Stored-class nodes are their indexes; a singleton pair class is the
    tagged node ("p", mask), so it can never alias a class index.
    """
    edges = {i: set() for i in range(len(stored))}
    for i, cl in enumerate(stored):
        span = elems_of(_span(cl))
        members = set(cl)
        for a, b in itertools.combinations(span, 2):
            p = (1 << a) | (1 << b)
            if p in members:
                continue
            edges[i].add(owner.get(p, ("p", p)))
    return edges


def _find_cycle(edges):
    """A directed cycle among stored-class nodes, or None."""
    color = {}

    def dfs(v, path):
        color[v] = 1
        path.append(v)
        for w in edges.get(v, ()):
            if not isinstance(w, int):
                continue  # singleton classes have no out-edges
            c = color.get(w)
            if c == 1:
                return path[path.index(w):]
            if c is None:
                found = dfs(w, path)
                if found:
                    return found
        path.pop()
        color[v] = 2
        return None

    for v in list(edges):
        if v not in color:
            found = dfs(v, [])
            if found:
                return found
    return None


def _ranks(stored, edges):
    """Longest-path-in rank: strictly increasing along every edge."""
    rank = {}
    preds = {}
    for v, ws in edges.items():
        for w in ws:
            preds.setdefault(w, []).append(v)

    def depth(v):
        if v in rank:
            return rank[v]
        rank[v] = 0  # placeholder; graph is acyclic when called
        best = 0
        for p in preds.get(v, ()):
            best = max(best, depth(p) + 1)
        rank[v] = best
        return best

    nodes = set(edges)
    for ws in edges.values():
        nodes |= ws
    for v in nodes:
        depth(v)
    return rank


def _order_search(stored, active):
    """Lex-least order of the active elements passing (i)+(ii), or None.

    Depth-first over positions, smallest element first; tracks per class
    the elements already forced left or right, pruning on first overlap.
    """
    k = len(stored)
    pair_classes = {}
    for idx, cl in enumerate(stored):
        for b in cl:
            i, j = elems_of(b)
            pair_classes.setdefault(i, []).append((j, idx))
            pair_classes.setdefault(j, []).append((i, idx))
    lefts = [set() for _ in range(k)]
    rights = [set() for _ in range(k)]
    placed = set()
    order = []

    def extend():
        if len(order) == len(active):
            return True
        for x in active:
            if x in placed:
                continue
            changes = []
            ok = True
            for other, idx in pair_classes.get(x, ()):
                if other not in placed:
                    continue
                # other precedes x: other is the left endpoint
                if x in lefts[idx] or other in rights[idx]:
                    ok = False
                    break
                if x not in rights[idx]:
                    rights[idx].add(x)
                    changes.append((rights, idx, x))
                if other not in lefts[idx]:
                    lefts[idx].add(other)
                    changes.append((lefts, idx, other))
            if ok:
                placed.add(x)
                order.append(x)
                if extend():
                    return True
                order.pop()
                placed.remove(x)
            for store, idx, val in changes:
                store[idx].remove(val)
        return False

    if extend():
        return tuple(order)
    return None


def check(s: Identity, strengthened: bool = False) -> CriterionVerdict:
    """Decide the ranked-coloring criterion.

    Rejects when the constraint graph has a cycle or no order passes the
    endpoint conditions; otherwise returns the lex-least accepting order,
    the topological ranks, and the per-class endpoint sets.
    """
    bad = validate(s)
    if bad is not None:
        raise UsageError(bad)
    if s.flavor != "pairs":
        raise UsageError(f"criterion needs pairs flavor, got {s.flavor!r}")
    active = s.active_elements()
    if len(active) > ACTIVE_BOUND:
        raise SizeGuardError(
            f"criterion supports at most {ACTIVE_BOUND} active elements, "
            f"got {len(active)}"
        )
    stored, owner = _class_nodes(s)
    edges = _digraph(stored, owner)
    if strengthened:
        # mutual feeding between two classes is a 2-cycle; checked with the
        # general cycle test below, so nothing extra can fail here
        pass
    if _find_cycle(edges) is not None:
        return CriterionVerdict(False, strengthened)
    order_active = _order_search(stored, active)
    if order_active is None:
        return CriterionVerdict(False, strengthened)
    inactive = [x for x in range(s.n) if x not in set(active)]
    order = tuple(order_active) + tuple(inactive)
    rank = _ranks(stored, edges)
    posn = {x: i for i, x in enumerate(order)}
    endpoints = []
    for cl in stored:
        a0, a1 = set(), set()
        for b in cl:
            i, j = elems_of(b)
            lo, hi = (i, j) if posn[i] < posn[j] else (j, i)
            a0.add(lo)
            a1.add(hi)
        endpoints.append((tuple(sorted(a0)), tuple(sorted(a1))))
    class_ranks = tuple(rank.get(i, 0) for i in range(len(stored)))
    pair_ranks = tuple(
        sorted(
            (elems_of(v[1]), r)
            for v, r in rank.items()
            if not isinstance(v, int) and r > 0
        )
    )
    return CriterionVerdict(
        True, strengthened, order, class_ranks, pair_ranks, tuple(endpoints)
    )


def _audit_accept(verdict: CriterionVerdict, s: Identity):
    """Independent re-verification of an accepted verdict.

    Recomputes every condition directly from the definition, sharing no
    code with the search; raises RuntimeError on the first failure.
    """
    order = verdict.order
    if order is None or sorted(order) != list(range(s.n)):
        raise RuntimeError("verdict order is not a permutation of the ground set")
    position = {x: i for i, x in enumerate(order)}
    stored = [tuple(sorted(c)) for c in s.class_list()]
    if verdict.class_ranks is None or len(verdict.class_ranks) != len(stored):
        raise RuntimeError("verdict ranks do not match the class list")
    pair_rank = {mask_of(p): r for p, r in (verdict.pair_ranks or ())}

    def rank_of(pmask):
        for idx, cl in enumerate(stored):
            if pmask in cl:
                return verdict.class_ranks[idx]
        return pair_rank.get(pmask, 0)

    for idx, cl in enumerate(stored):
        a0 = {min((i, j), key=position.get) for b in cl for i, j in [elems_of(b)]}
        a1 = {max((i, j), key=position.get) for b in cl for i, j in [elems_of(b)]}
        if a0 & a1:
            raise RuntimeError(
                f"class {idx}: endpoint sets intersect at {sorted(a0 & a1)}"
            )
        if verdict.endpoints is not None:
            e0, e1 = verdict.endpoints[idx]
            if set(e0) != a0 or set(e1) != a1:
                raise RuntimeError(f"class {idx}: endpoint sets do not match order")
        h_a = verdict.class_ranks[idx]
        for x, y in itertools.combinations(sorted(a0 | a1), 2):
            p = (1 << x) | (1 << y)
            if p in cl:
                continue
            if rank_of(p) <= h_a:
                raise RuntimeError(
                    f"class {idx}: pair {(x, y)} inside the span ranks "
                    f"{rank_of(p)} <= {h_a}"
                )
    if verdict.strengthened:
        for i, j in itertools.combinations(range(len(stored)), 2):
            si = _span(stored[i])
            sj = _span(stored[j])
            i_feeds_j = any(b & ~si == 0 and b not in stored[i] for b in stored[j])
            j_feeds_i = any(b & ~sj == 0 and b not in stored[j] for b in stored[i])
            if i_feeds_j and j_feeds_i:
                raise RuntimeError(f"classes {i} and {j} feed each other")


def _first_violation(stored, owner, order):
    """Tag the first failed condition for one candidate order."""
    position = {x: i for i, x in enumerate(order)}
    for idx, cl in enumerate(stored):
        a0, a1 = set(), set()
        for b in cl:
            i, j = elems_of(b)
            lo, hi = (i, j) if position[i] < position[j] else (j, i)
            a0.add(lo)
            a1.add(hi)
        both = a0 & a1
        if both:
            return f"class {idx}: element {min(both)} is both a left and a right endpoint"
    return None


def explain(verdict: CriterionVerdict, s: Identity) -> dict:
    """Human-readable forensics for a verdict.

    For an accepted verdict, re-verifies every condition independently and
    reports the witnesses (re-verification failure raises, since it means
    the checker and the auditor disagree).  For a rejected verdict, lists
    either the constraint cycle or, per candidate order of the active
    elements, the first violated condition.
    """
    bad = validate(s)
    if bad is not None:
        raise UsageError(bad)
    stored, owner = _class_nodes(s)
    lines = []
    if verdict.accepted:
        _audit_accept(verdict, s)
        lines.append(f"accepted; order {list(verdict.order)}")
        for idx, cl in enumerate(stored):
            e0, e1 = verdict.endpoints[idx]
            lines.append(
                f"class {idx} {[elems_of(b) for b in cl]}: rank "
                f"{verdict.class_ranks[idx]}, left {list(e0)}, right {list(e1)}"
            )
        for p, r in verdict.pair_ranks:
            lines.append(f"singleton pair {tuple(p)}: rank {r}")
        lines.append("independent re-verification passed")
        return {"accepted": True, "lines": lines}
    active = s.active_elements()
    if len(active) > EXPLAIN_BOUND:
        raise SizeGuardError(
            f"per-order forensics supports at most {EXPLAIN_BOUND} active "
            f"elements, got {len(active)}"
        )
    edges = _digraph(stored, owner)
    cycle = _find_cycle(edges)
    orders = []
    for order in itertools.permutations(active):
        tag = _first_violation(stored, owner, order)
        if tag is None:
            if cycle is None:
                raise RuntimeError(
                    "verdict/identity mismatch: this order satisfies every "
                    f"condition yet the verdict says rejected: {list(order)}"
                )
            tag = (
                "endpoint conditions hold but the rank constraints cycle: "
                f"classes {cycle}"
            )
        orders.append({"order": list(order), "violation": tag})
    if cycle is not None:
        lines.append(f"constraint cycle among classes: {cycle}")
    lines.append(f"all {len(orders)} candidate orders fail")
    return {"accepted": False, "lines": lines, "orders": orders}
