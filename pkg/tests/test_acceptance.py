"""Acceptance criteria, one test each.

Every test records a ``PASS``/``FAIL`` line; the lines are printed in the
terminal summary by ``conftest.py`` and also when this file is run directly
(``python tests/test_acceptance.py``).
"""

from __future__ import annotations

import random
import sys
import time
from fractions import Fraction
from math import comb, factorial

from posetpack.embedding import minimal_closure
from posetpack.lattice import abar_bruteforce, chains_through, chains_through_oracle, closure, unrelated
from posetpack.oracle import gst_formula, pa_exact, pa_exact_collection
from posetpack.packing import (
    best_feasible_plan,
    build_plan,
    containment_pattern,
    count_copies,
    materialize,
    verify_unrelated,
)
from posetpack.poset import J, Lambda, V, antichain, chain
from posetpack.selftest import proposition_bound_holds, random_family, random_unrelated_pair

RESULTS: list[str] = []


def record(number: int, title: str, ok: bool, elapsed: float, limit: float, detail: str = "") -> None:
    ok = ok and elapsed <= limit
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {title} ({elapsed:.2f}s / {limit:.0f}s)"
    if detail:
        line += f" :: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def middle(n: int) -> int:
    return factorial(n // 2) * factorial(n - n // 2)


def test_criterion_01_minimal_closures():
    start = time.perf_counter()
    cases = [
        ("B0", antichain(1), "weak", 1),
        ("V", V(), "weak", 3),
        ("Lambda", Lambda(), "weak", 3),
        ("chain(1)", chain(1), "weak", 2),
        ("chain(2)", chain(2), "weak", 4),
        ("chain(3)", chain(3), "weak", 8),
        ("J", J(), "weak", 4),
        ("J*", J(), "strong", 5),
    ]
    bad = []
    for label, p, mode, want in cases:
        cert = minimal_closure(p, mode, k_max=p.size)
        if cert.m != want:
            bad.append(f"{label}={cert.m}")
    record(1, "minimal closure values", not bad, time.perf_counter() - start, 60, ", ".join(bad))


def test_criterion_02_sperner():
    start = time.perf_counter()
    got = [pa_exact(antichain(1), n)[0] for n in range(1, 5)]
    want = [comb(n, n // 2) for n in range(1, 5)]
    record(2, "Sperner values", got == want, time.perf_counter() - start, 60, f"{got}")


def test_criterion_03_chains():
    start = time.perf_counter()
    ok = True
    for n in (2, 3):
        value = pa_exact(chain(1), n)[0]
        ok &= value == 2 * comb(n - 1, (n - 1) // 2) == gst_formula(1, n)
    record(3, "chain(1) values and formula", ok, time.perf_counter() - start, 60)


def test_criterion_04_collection():
    start = time.perf_counter()
    value = pa_exact_collection([antichain(1), chain(1)], 3)
    record(4, "collection {B0, chain(1)} at n=3", value == 4 == 2 * comb(2, 1), time.perf_counter() - start, 60, str(value))


def test_criterion_05_chain_counting():
    start = time.perf_counter()
    rng = random.Random(5)
    mismatches = 0
    for _ in range(200):
        n = rng.randint(1, 10)
        f = random_family(rng, n, rng.randint(0, 6))
        mismatches += chains_through(f) != chains_through_oracle(f)
    bound_fail = 0
    sampled = 0
    while sampled < 200:
        n = rng.randint(3, 10)
        ms = [m for m in range(1, 4) if 2**m < n]
        if not ms:
            continue
        f = random_family(rng, n, rng.choice(ms), exclude=1 | 1 << ((1 << n) - 1))
        sampled += 1
        bound_fail += not proposition_bound_holds(f)
    record(
        5,
        "chain counting agreement and lower bound",
        mismatches == 0 and bound_fail == 0,
        time.perf_counter() - start,
        60,
        f"mismatches={mismatches} bound_failures={bound_fail}",
    )


def test_criterion_06_abar():
    start = time.perf_counter()
    bad = []
    for n in range(2, 7):
        value, _ = abar_bruteforce(1, n)
        if value != middle(n):
            bad.append(f"abar(1,{n})={value}")
    for m in (2, 3):
        for n in (5, 6):
            value, _ = abar_bruteforce(m, n)
            lo = (1 - Fraction(2**m, n)) * m * middle(n)
            if not lo <= value <= m * middle(n):
                bad.append(f"abar({m},{n})={value}")
    record(6, "abar values and sandwich", not bad, time.perf_counter() - start, 300, ", ".join(bad))


def test_criterion_07_construction_convergence():
    start = time.perf_counter()
    e = minimal_closure(V()).witness
    notes = []
    ok = True
    for i, want in ((1, 210), (2, 218)):
        plan = build_plan(e, 12, i)
        copies = materialize(plan)
        counted = count_copies(plan)[0]
        report = verify_unrelated(copies, e.image)
        ok &= report.ok and len(copies) == counted == want
        notes.append(f"n=12 i={i}: {len(copies)}")
    target = comb(100, 50)
    ratios = [Fraction(count_copies(build_plan(e, 100, i))[0] * 3, target) for i in range(1, 6)]
    increasing = all(a < b for a, b in zip(ratios, ratios[1:]))
    in_window = Fraction(95, 100) <= ratios[-1] <= 1
    ok &= increasing and in_window
    notes.append("n=100 ratios " + " ".join(f"{float(r):.4f}" for r in ratios))
    record(7, "construction validity and convergence", ok, time.perf_counter() - start, 120, "; ".join(notes))


def test_criterion_08_strong_construction():
    start = time.perf_counter()
    cert = minimal_closure(J(), "strong")
    e = cert.witness
    plan = build_plan(e, 14, 1)
    copies = materialize(plan)
    report = verify_unrelated(copies, e.image)
    pattern = containment_pattern(e.image)
    patterns_ok = all(containment_pattern(c.sets) == pattern for c in copies)
    ok = cert.m == 5 and report.ok and report.pattern_ok and patterns_ok
    record(8, "strong J construction", ok, time.perf_counter() - start, 60, f"{len(copies)} copies")


def test_criterion_09_closure_suite():
    start = time.perf_counter()
    rng = random.Random(9)
    failures = 0
    pairs = 0
    while pairs < 500:
        n = rng.randint(2, 10)
        f1, f2 = random_unrelated_pair(rng, n)
        if not f2.sets:
            continue
        pairs += 1
        for f, g in ((f1, f2), (f2, f1)):
            cf = closure(f)
            union = closure(type(f)(n, f.sets + g.sets))
            failures += not set(f.sets) <= set(cf.sets)
            failures += not set(cf.sets) <= set(union.sets)
            failures += closure(cf) != cf
        failures += not unrelated(closure(f1), closure(f2))
    record(9, "closure laws on random pairs", failures == 0, time.perf_counter() - start, 60, f"{pairs} pairs")


def test_criterion_10_never_beats_oracle():
    start = time.perf_counter()
    bad = []
    checked = 0
    for label, p in (("B0", antichain(1)), ("chain(1)", chain(1))):
        e = minimal_closure(p).witness
        for n in range(1, 5):
            plan = best_feasible_plan(e, n)
            if plan is None:
                continue
            checked += 1
            size = count_copies(plan)[1]
            best = pa_exact(p, n)[0]
            if size > best:
                bad.append(f"{label} n={n}: {size}>{best}")
    record(10, "construction never beats oracle", checked > 0 and not bad, time.perf_counter() - start, 60, f"{checked} pairs")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
