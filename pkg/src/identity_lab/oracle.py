"""Finite-coloring laboratory.

Builds concrete pair colorings (minimum-revealing, split-prefix on binary
strings, constant, seeded random, and products of colorings) and answers
realization questions by exhaustive search: which identities does a
coloring realize, and does every coloring of a given small ground set
realize a given identity.

Every search here is exhaustive by contract; cost guards raise instead of
subsampling, because these functions serve as ground truth for the rest of
the package.
"""

from __future__ import annotations

import itertools
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .core import Identity, canonical_form, elems_of, encoding, validate
from .errors import SizeGuardError, UsageError

ID_OF_MAX_SIZE = 6
ID_OF_MAX_GROUND = 10
ID_OF_OUTPUT_CAP = 200_000
ARROW_GUARD = 1 << 20


@dataclass
class Coloring:
    """A color table on the pairs (and optionally vertices) of 0..N-1.

    ``table`` maps sorted element tuples to dense color ids; ``meta``
    optionally carries labels and color-decode side tables for structured
    colorings.
    """

    n_ground: int
    arity: int
    table: dict
    num_colors: int
    meta: dict = field(default_factory=dict)

    def pair(self, i: int, j: int) -> int:
        return self.table[(i, j) if i < j else (j, i)]


def _pairs(n: int):
    return itertools.combinations(range(n), 2)


def _validate_coloring(c: Coloring):
    if c.arity < 1 or c.arity > 2:
        raise UsageError(f"supported arities are 1 and 2, got {c.arity}")
    if c.arity >= 2:
        for p in _pairs(c.n_ground):
            if p not in c.table:
                raise UsageError(f"coloring misses pair {p}")
    for key, v in c.table.items():
        if not 0 <= v < c.num_colors:
            raise UsageError(
                f"color {v} at {key} outside dense range 0..{c.num_colors - 1}"
            )


def builtin_coloring(kind: str, **params) -> Coloring:
    """Construct one of the named colorings.

    min_pair(n):          color of {a, b} is min(a, b).
    sierpinski_meet:      ground set = binary strings (default all strings
                          of length ``len``) in lexicographic order; the
                          color of a pair records the unordered pair of
                          one-past-the-meet prefixes together with the
                          order-agreement bit, packed densely with a decode
                          side table in meta.
    constant(n):          one color everywhere.
    random(n, colors, seed): uniform per pair, reproducible; seed required.
    """
    if kind == "min_pair":
        n = int(params["n"])
        if n < 2:
            raise UsageError("min_pair needs n >= 2")
        table = {(i, j): i for i, j in _pairs(n)}
        return Coloring(n, 2, table, n - 1)
    if kind == "sierpinski_meet":
        strings = params.get("strings")
        if strings is None:
            length = int(params["len"])
            if length < 1:
                raise UsageError("sierpinski_meet needs len >= 1")
            strings = ["".join(b) for b in itertools.product("01", repeat=length)]
        strings = list(strings)
        if len(set(strings)) != len(strings):
            raise UsageError("sierpinski_meet strings must be distinct")
        if len(strings) > 16:
            raise SizeGuardError("sierpinski_meet supports at most 16 strings")
        strings.sort()
        table = {}
        decode = {}
        ids = {}
        for i, j in _pairs(len(strings)):
            x, y = strings[i], strings[j]
            eps = 0
            while eps < min(len(x), len(y)) and x[eps] == y[eps]:
                eps += 1
            prefixes = tuple(sorted((x[: eps + 1], y[: eps + 1])))
            agree = (x < y) == (i < j)
            key = (prefixes, agree)
            if key not in ids:
                ids[key] = len(ids)
                decode[ids[key]] = {"prefixes": list(prefixes), "agree": agree}
            table[(i, j)] = ids[key]
        return Coloring(
            len(strings),
            2,
            table,
            len(ids),
            {"labels": strings, "decode": decode},
        )
    if kind == "constant":
        n = int(params["n"])
        if n < 1:
            raise UsageError("constant needs n >= 1")
        return Coloring(n, 2, {p: 0 for p in _pairs(n)}, 1)
    if kind == "random":
        if "seed" not in params:
            raise UsageError("random coloring requires an explicit seed")
        n = int(params["n"])
        colors = int(params["colors"])
        if n < 2 or colors < 1:
            raise UsageError("random needs n >= 2 and colors >= 1")
        rng = random.Random(int(params["seed"]))
        table = {p: rng.randrange(colors) for p in _pairs(n)}
        return Coloring(n, 2, table, colors)
    raise UsageError(f"unknown builtin coloring {kind!r}")


def product_coloring(c1: Coloring, c2: Coloring) -> Coloring:
    """Compose two pair colorings into their product.

    The color of a pair is the (c1, c2) value pair, packed into dense ids
    by first occurrence over the sorted pair list; meta keeps the decode
    table.
    """
    if c1.n_ground != c2.n_ground:
        raise UsageError("product needs colorings on the same ground set")
    ids = {}
    decode = {}
    table = {}
    for p in _pairs(c1.n_ground):
        key = (c1.table[p], c2.table[p])
        if key not in ids:
            ids[key] = len(ids)
            decode[ids[key]] = list(key)
        table[p] = ids[key]
    return Coloring(c1.n_ground, 2, table, len(ids), {"decode": decode})


@dataclass(frozen=True)
class Realization:
    """A witness injection plus the color each class landed on."""

    embedding: tuple
    ordered: bool
    pulled_colors: tuple  # color per stored class, class_list order


def _stored_pair_classes(s: Identity):
    bad = validate(s)
    if bad is not None:
        raise UsageError(bad)
    if s.flavor != "pairs":
        raise UsageError(
            f"realization search needs a pairs identity, got {s.flavor!r}"
        )
    return [
        [elems_of(b) for b in cl] for cl in s.class_list()
    ]


def _injection_realizes(c: Coloring, classes, h):
    colors = []
    for cl in classes:
        col = None
        for a, b in cl:
            x, y = h[a], h[b]
            v = c.table[(x, y) if x < y else (y, x)]
            if col is None:
                col = v
            elif col != v:
                return None
        colors.append(col)
    return tuple(colors)


def realizes(c: Coloring, s: Identity, ordered: bool = False):
    """First injection (lex order) forcing equal colors on every class.

    Ordered mode scans increasing injections only.  Returns None after
    exhausting the search space.
    """
    classes = _stored_pair_classes(s)
    if s.n > c.n_ground:
        raise UsageError(
            f"identity on {s.n} elements cannot embed in ground {c.n_ground}"
        )
    if c.arity < 2:
        raise UsageError("realization needs a pair layer in the coloring")
    gen = (
        itertools.combinations(range(c.n_ground), s.n)
        if ordered
        else itertools.permutations(range(c.n_ground), s.n)
    )
    for h in gen:
        colors = _injection_realizes(c, classes, h)
        if colors is not None:
            return Realization(tuple(h), ordered, colors)
    return None


def _set_partitions(items):
    """All partitions of a list, each a list of lists."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


_BELL = [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975, 678570,
         4213597, 27644437, 190899322, 1382958545]


def _refinement_count(blocks) -> int:
    out = 1
    for b in blocks:
        out *= _BELL[len(b)]
    return out


def _chunks(seq, k):
    seq = list(seq)
    step = max(1, math.ceil(len(seq) / k))
    for i in range(0, len(seq), step):
        yield seq[i:i + step]


def id_of(c: Coloring, max_size: int, ordered: bool = False, threads: int = 1):
    """Every identity of size <= max_size realized in the coloring.

    An identity is realized when some injection makes each of its classes
    monochromatic; equivalently its relation refines the color partition
    induced by some injection, so the enumeration closes each induced
    partition under refinement.  Unordered mode returns canonical forms;
    ordered mode returns exact patterns with no relabeling.  The result is
    sorted and duplicate-free.

    Hard guards: max_size <= 6, ground <= 10, and the refinement expansion
    is counted before running and capped (an error, never a truncation).
    """
    if max_size < 1:
        raise UsageError("max_size must be >= 1")
    if max_size > ID_OF_MAX_SIZE:
        raise SizeGuardError(f"id_of supports max_size <= {ID_OF_MAX_SIZE}")
    if c.n_ground > ID_OF_MAX_GROUND:
        raise SizeGuardError(f"id_of supports ground <= {ID_OF_MAX_GROUND}")
    if c.arity < 2:
        raise UsageError("id_of needs a pair layer in the coloring")
    found = set()
    for k in range(1, min(max_size, c.n_ground) + 1):
        injections = (
            itertools.combinations(range(c.n_ground), k)
            if ordered
            else itertools.permutations(range(c.n_ground), k)
        )
        kp = list(_pairs(k))

        def induced(hs):
            out = set()
            for h in hs:
                by = {}
                for a, b in kp:
                    x, y = h[a], h[b]
                    v = c.table[(x, y) if x < y else (y, x)]
                    by.setdefault(v, []).append((1 << a) | (1 << b))
                out.add(frozenset(frozenset(v) for v in by.values()))
            return out

        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                partitions = set().union(
                    *pool.map(induced, _chunks(injections, threads))
                )
        else:
            partitions = induced(injections)
        budget = ID_OF_OUTPUT_CAP
        for part in partitions:
            budget -= _refinement_count([list(b) for b in part])
            if budget < 0:
                raise SizeGuardError(
                    "refinement expansion exceeds the output cap "
                    f"({ID_OF_OUTPUT_CAP}); narrow max_size or the coloring"
                )
        for part in partitions:
            blocks = [sorted(b) for b in part]
            per_block = [list(_set_partitions(b)) for b in blocks]
            for combo in itertools.product(*per_block):
                classes = frozenset(
                    frozenset(piece)
                    for sub in combo
                    for piece in sub
                    if len(piece) >= 2
                )
                ident = Identity(k, "pairs", classes)
                if not ordered:
                    ident = canonical_form(ident)[0]
                found.add(ident)
    return sorted(found, key=encoding)


def arrow_check(N: int, s: Identity, num_colors: int, threads: int = 1) -> bool:
    """True iff every pair coloring of 0..N-1 with the given palette
    realizes the identity (unordered).

    The coloring space num_colors ** C(N,2) is enumerated in full; a hard
    guard caps it at 2**20.
    """
    if num_colors < 1:
        raise UsageError("need at least one color")
    classes = _stored_pair_classes(s)
    pair_list = list(_pairs(N))
    space = num_colors ** len(pair_list)
    if space > ARROW_GUARD:
        raise SizeGuardError(
            f"coloring space {space} exceeds the {ARROW_GUARD} guard"
        )
    if s.n > N:
        return False
    index = {p: i for i, p in enumerate(pair_list)}
    injections = list(itertools.permutations(range(N), s.n))
    slot_sets = []
    for h in injections:
        slots = []
        for cl in classes:
            slots.append([index[tuple(sorted((h[a], h[b])))] for a, b in cl])
        slot_sets.append(slots)

    def scan(assignments):
        for colors in assignments:
            hit = False
            for slots in slot_sets:
                if all(
                    len({colors[i] for i in cl}) <= 1 for cl in slots
                ):
                    hit = True
                    break
            if not hit:
                return False
        return True

    assignments = itertools.product(range(num_colors), repeat=len(pair_list))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return all(pool.map(scan, _chunks(assignments, threads)))
    return scan(assignments)


def normalize_vertex_colors(c: Coloring) -> Coloring:
    """Collapse the vertex layer to one constant color.

    Pair entries are kept byte-identical; a coloring without vertex
    entries comes back unchanged.
    """
    if c.arity < 1:
        raise UsageError("normalization needs arity >= 1")
    if not any(len(k) == 1 for k in c.table):
        return c
    table = {
        k: (0 if len(k) == 1 else v) for k, v in c.table.items()
    }
    return Coloring(c.n_ground, c.arity, table, c.num_colors, dict(c.meta))


def coloring_to_json(c: Coloring) -> dict:
    """Serialize to the interchange dict with string-keyed table."""
    return {
        "n": c.n_ground,
        "arity": c.arity,
        "table": {
            ",".join(map(str, k)): v
            for k, v in sorted(c.table.items())
        },
    }


def coloring_from_json(d: dict) -> Coloring:
    """Parse either a literal table or a builtin descriptor."""
    if "builtin" in d:
        kind = d["builtin"]
        params = {k: v for k, v in d.items() if k != "builtin"}
        return builtin_coloring(kind, **params)
    try:
        n = int(d["n"])
        arity = int(d["arity"])
        table = {
            tuple(int(x) for x in k.split(",")): int(v)
            for k, v in d["table"].items()
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"coloring JSON malformed: {exc}") from exc
    num = max(table.values(), default=-1) + 1
    c = Coloring(n, arity, table, max(num, 1))
    _validate_coloring(c)
    return c
