"""Acceptance gate: ten end-to-end criteria, one pass/fail line each.

Each test prints `ACCEPTANCE <nn> PASS|FAIL: <measurements>` before its
assertions, so the suite log carries one line per criterion regardless of
outcome.  Time tolerances are asserted with the stated budgets.

Criterion 02 is expected to fail: the ranked-order test accepts the
two-block splitting family, whose exclusion is a catalog-restriction fact
rather than an order/rank fact.  The test states the expectation honestly
and fails; the certificate test right after it carries the passing,
definitive non-membership result.  See also the criterion module notes.
"""

import itertools
import json
import shutil
import subprocess
import sys
import time

import conftest
import pytest

from identity_lab import (
    LabeledIdentity,
    builtin_coloring,
    catalog_from_json,
    catalog_to_json,
    coloring_from_json,
    coloring_to_json,
    duplicate,
    from_json,
    id_of,
    is_meet_respecting,
    member_of_catalog,
    order_forcing_extension,
    product_coloring,
    realizes,
    restrict,
    s_k,
    s_prime_n,
    simplify_k,
    to_json,
)
from identity_lab.core import canonical_form, elems_of
from identity_lab.criterion import check


def _line(num, ok, detail):
    line = f"ACCEPTANCE {num:02d} {'PASS' if ok else 'FAIL'}: {detail}"
    print(line)
    conftest.acceptance_report.append(line)


def test_acceptance_01_splitting_family_rejected():
    t0 = time.time()
    sk3 = (check(s_k(3)).accepted, check(s_k(3), strengthened=True).accepted)
    t3 = time.time() - t0
    t0 = time.time()
    sk4 = (check(s_k(4)).accepted, check(s_k(4), strengthened=True).accepted)
    t4 = time.time() - t0
    # plain-mode verdicts double as regression values: both reject via the
    # same two-class constraint cycle, before any order enumeration
    ok = sk3 == (False, False) and sk4 == (False, False) and t3 < 1 and t4 < 60
    _line(1, ok, f"s_k(3) verdicts {sk3} in {t3:.2f}s (<1s); "
                 f"s_k(4) verdicts {sk4} in {t4:.2f}s (<60s)")
    assert sk3 == (False, False)
    assert sk4 == (False, False)
    assert t3 < 1 and t4 < 60


def test_acceptance_02_two_block_family_rejected():
    t0 = time.time()
    v = check(s_prime_n(2), strengthened=True)
    el = time.time() - t0
    ok = (not v.accepted) and el < 10
    _line(2, ok, f"expected rejected, criterion says "
                 f"{'accepted' if v.accepted else 'rejected'} in {el:.2f}s (<10s); "
                 "the order/rank conditions are necessary but not sufficient "
                 "here, non-membership is certified by catalog restriction "
                 "instead (next line)")
    assert el < 10
    assert not v.accepted, (
        "the two-block splitting family satisfies every order/rank "
        "condition (a witness order exists and is audited), so an "
        "order-based rejection is not attainable; its exclusion is the "
        "catalog-restriction certificate in "
        "test_acceptance_02_certificate_via_catalog"
    )


def test_acceptance_02_certificate_via_catalog(cat6):
    t0 = time.time()
    sp2 = s_prime_n(2)
    witness = (0, 1, 2, 4, 5, 6)
    r = restrict(sp2, witness)
    absent = not member_of_catalog(cat6, r, ordered=False)
    missing = sum(
        1
        for keep in itertools.combinations(range(sp2.n), 6)
        if not member_of_catalog(cat6, restrict(sp2, keep), ordered=False)
    )
    el = time.time() - t0
    ok = absent and missing == 8
    _line(2, ok, f"certificate: restriction to {witness} is outside the "
                 f"size-6 catalog; {missing}/28 six-element restrictions "
                 f"absent in {el:.1f}s")
    assert absent
    assert missing == 8


def test_acceptance_03_catalog_members_all_accepted(cat6):
    t0 = time.time()
    rejected = 0
    for s in cat6.members():
        if not check(s).accepted or not check(s, strengthened=True).accepted:
            rejected += 1
    el = time.time() - t0
    ok = rejected == 0 and el < 300
    _line(3, ok, f"{len(cat6)} entries x both modes, {rejected} rejections "
                 f"in {el:.1f}s (<300s)")
    assert rejected == 0
    assert el < 300


def test_acceptance_04_closure_laws(cat6):
    t0 = time.time()
    violations = 0
    for s in cat6.members():
        n = s.n
        for m in range(n + 1):
            if 2 * n - m <= cat6.max_n and duplicate(s, m) not in cat6:
                violations += 1
            if restrict(duplicate(s, m), range(n)) != s:
                violations += 1
        if n > 1:
            for size in range(1, n):
                for keep in itertools.combinations(range(n), size):
                    if restrict(s, keep) not in cat6:
                        violations += 1
    el = time.time() - t0
    ok = violations == 0 and el < 300
    _line(4, ok, f"duplicate/restrict closure plus recovery over "
                 f"{len(cat6)} entries, {violations} violations in "
                 f"{el:.1f}s (<300s)")
    assert violations == 0
    assert el < 300


def test_acceptance_05_two_simplification_stays_in_catalog(full5):
    t0 = time.time()
    failures = 0
    for s in full5.members():
        if not member_of_catalog(full5, simplify_k(s, 2), ordered=False):
            failures += 1
    el = time.time() - t0
    ok = failures == 0 and el < 600
    _line(5, ok, f"simplify(s, 2) lands in the catalog for all "
                 f"{len(full5)} subset-level entries, {failures} failures "
                 f"in {el:.1f}s (<600s)")
    assert failures == 0
    assert el < 600


def test_acceptance_06_unordered_equals_permuted_ordered():
    t0 = time.time()
    mismatches = 0
    for i in range(50):
        n = 4 + i % 3
        colors = 2 + i % 2
        c = builtin_coloring("random", n=n, colors=colors, seed=1000 + i)
        unordered = set(id_of(c, max_size=4, ordered=False))
        closure = {canonical_form(s)[0] for s in id_of(c, max_size=4, ordered=True)}
        if unordered != closure:
            mismatches += 1
    el = time.time() - t0
    ok = mismatches == 0 and el < 300
    _line(6, ok, f"50 seeded colorings (n<=6, <=3 colors), {mismatches} "
                 f"mismatches in {el:.1f}s (<300s)")
    assert mismatches == 0
    assert el < 300


def test_acceptance_07_negative_witness_and_min_pair_property():
    t0 = time.time()
    none_found = realizes(builtin_coloring("min_pair", n=8), s_k(3), ordered=False)
    t_a = time.time() - t0
    t0 = time.time()
    violations = 0
    c = builtin_coloring("min_pair", n=8)
    for a, b, g in itertools.permutations(range(8), 3):
        vab = c.table[(a, b) if a < b else (b, a)]
        vag = c.table[(a, g) if a < g else (g, a)]
        if vab == vag and not (a < b and a < g):
            violations += 1
    t_b = time.time() - t0
    ok = none_found is None and violations == 0 and t_a < 1 and t_b < 1
    _line(7, ok, f"splitting family unrealized in {t_a:.2f}s (<1s); "
                 f"equal colors force the shared low endpoint, {violations} "
                 f"violations in {t_b:.2f}s (<1s)")
    assert none_found is None
    assert violations == 0
    assert t_a < 1 and t_b < 1


def test_acceptance_08_meet_pullback():
    t0 = time.time()
    c = builtin_coloring("sierpinski_meet", len=3)
    checked = failures = 0
    for s in id_of(c, 4, ordered=False):
        if s.n < 2:
            continue
        r = realizes(c, s, ordered=False)
        labels = tuple(c.meta["labels"][x] for x in r.embedding)
        checked += 1
        if not is_meet_respecting(LabeledIdentity(s, labels)):
            failures += 1
    el = time.time() - t0
    ok = failures == 0 and checked > 0 and el < 30
    _line(8, ok, f"{checked} realized patterns pull back meet-respecting, "
                 f"{failures} failures in {el:.1f}s (<30s)")
    assert failures == 0 and checked > 0
    assert el < 30


def test_acceptance_09_extension_forces_increasing_prefix(cat4):
    t0 = time.time()
    realizations = violations = 0
    base = builtin_coloring("min_pair", n=7)
    for s in cat4.members():
        if s.n < 2:
            continue
        ext = order_forcing_extension(s)
        classes = [
            [tuple(sorted(elems_of(b))) for b in cl] for cl in ext.class_list()
        ]
        for seed in range(10):
            c = product_coloring(
                builtin_coloring("random", n=7, colors=3, seed=2000 + seed), base
            )
            for h in itertools.permutations(range(7), ext.n):
                fits = True
                for cl in classes:
                    col = None
                    for a, b in cl:
                        x, y = h[a], h[b]
                        v = c.table[(x, y) if x < y else (y, x)]
                        if col is None:
                            col = v
                        elif col != v:
                            fits = False
                            break
                    if not fits:
                        break
                if fits:
                    realizations += 1
                    prefix = [h[i] for i in range(s.n)]
                    if prefix != sorted(prefix):
                        violations += 1
    el = time.time() - t0
    detail = (
        f"{realizations} realizations across 14 patterns x 10 seeds, "
        f"{violations} non-increasing prefixes in {el:.1f}s (<300s)"
    )
    if realizations == 0:
        detail += " (report-only: corpus yielded no realizations)"
    ok = violations == 0 and el < 300
    _line(9, ok, detail)
    assert violations == 0
    assert el < 300


def test_acceptance_10_determinism_and_round_trips(tmp_path, cat4, full5):
    t0 = time.time()
    cli = shutil.which("identity-lab")
    base = [cli] if cli else [sys.executable, "-m", "identity_lab.cli"]

    def run(*args):
        return subprocess.run(base + list(args), capture_output=True, text=True)

    sk3 = tmp_path / "sk3.json"
    sk3.write_text(json.dumps(to_json(s_k(3))))
    col = tmp_path / "col.json"
    col.write_text(json.dumps({"builtin": "random", "n": 6, "colors": 2, "seed": 17}))

    runs_identical = (
        run("check", "--in", str(sk3), "--json").stdout
        == run("check", "--in", str(sk3), "--json").stdout
    )
    a = json.loads(run("oracle", "--coloring", str(col), "--list", "--max-size", "4", "--json").stdout)
    b = json.loads(
        run("oracle", "--coloring", str(col), "--list", "--max-size", "4",
            "--threads", "2", "--json").stdout
    )
    threads_identical = a["output"] == b["output"]

    identities_ok = all(
        from_json(to_json(s)) == s for s in list(cat4.members()) + [s_k(4), s_prime_n(2)]
    )
    col_obj = coloring_from_json(json.loads(col.read_text()))
    colorings_ok = coloring_from_json(coloring_to_json(col_obj)).table == col_obj.table
    catalogs_ok = all(
        set(catalog_from_json(catalog_to_json(cat)).members()) == set(cat.members())
        for cat in (cat4, full5)
    )
    el = time.time() - t0
    ok = runs_identical and threads_identical and identities_ok and colorings_ok and catalogs_ok
    _line(10, ok, f"byte-identical reports across runs={runs_identical} and "
                  f"threads={threads_identical}; round trips identities="
                  f"{identities_ok} colorings={colorings_ok} catalogs="
                  f"{catalogs_ok} in {el:.1f}s")
    assert runs_identical and threads_identical
    assert identities_ok and colorings_ok and catalogs_ok
