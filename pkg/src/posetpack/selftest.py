"""Seeded property suites, shared by ``posetpack selftest`` and the test suite."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable

from .embedding import minimal_closure
from .lattice import (
    Family,
    chains_through,
    chains_through_oracle,
    closure,
    singleton_terms,
    unrelated,
)
from .oracle import gst_formula, pa_exact
from .packing import build_plan, count_copies, materialize, verify_unrelated
from .poset import J, Lambda, V, antichain, chain


@dataclass
class SuiteResult:
    name: str
    ok: bool
    cases: int
    detail: str = ""


def random_family(rng: random.Random, n: int, size: int, exclude: int = 0) -> Family:
    """``size`` distinct random subsets of [n]; masks in ``exclude`` are avoided."""
    universe = [s for s in range(1 << n) if not exclude >> s & 1]
    size = min(size, len(universe))
    return Family(n, tuple(rng.sample(universe, size)))


def random_unrelated_pair(rng: random.Random, n: int) -> tuple[Family, Family]:
    f1 = random_family(rng, n, rng.randint(1, 4))
    pool = [s for s in range(1 << n) if all(s & ~a and a & ~s for a in f1.sets)]
    picks = rng.sample(pool, min(len(pool), rng.randint(1, 4)))
    return f1, Family(n, tuple(picks))


def suite_closure_laws(seed: int, cases: int = 500) -> SuiteResult:
    rng = random.Random(seed)
    for case in range(cases):
        n = rng.randint(0, 10)
        f = random_family(rng, n, rng.randint(0, 5))
        extra = random_family(rng, n, rng.randint(0, 3))
        g = Family(n, f.sets + extra.sets)
        cf, cg = closure(f), closure(g)
        if not set(f.sets) <= set(cf.sets):
            return SuiteResult("closure_laws", False, case, f"not extensive on {f.as_lists()}")
        if not set(cf.sets) <= set(cg.sets):
            return SuiteResult("closure_laws", False, case, f"not monotone on {f.as_lists()}")
        if closure(cf) != cf:
            return SuiteResult("closure_laws", False, case, f"not idempotent on {f.as_lists()}")
    return SuiteResult("closure_laws", True, cases)


def suite_unrelated_closures(seed: int, cases: int = 500) -> SuiteResult:
    rng = random.Random(seed + 1)
    checked = 0
    while checked < cases:
        f1, f2 = random_unrelated_pair(rng, rng.randint(2, 10))
        if not f2.sets:
            continue
        checked += 1
        if not unrelated(closure(f1), closure(f2)):
            return SuiteResult("unrelated_closures", False, checked, f"{f1.as_lists()} / {f2.as_lists()}")
    return SuiteResult("unrelated_closures", True, checked)


def suite_chain_counts(seed: int, cases: int = 200) -> SuiteResult:
    rng = random.Random(seed + 2)
    for case in range(cases):
        n = rng.randint(0, 10)
        f = random_family(rng, n, rng.randint(0, 6))
        if chains_through(f) != chains_through_oracle(f):
            return SuiteResult("chain_counts", False, case, f"mismatch on {f.to_json()}")
    return SuiteResult("chain_counts", True, cases)


def proposition_bound_holds(f: Family) -> bool:
    """(1 - 2^m/n) · Σ b(j) <= a(F), exact rational comparison."""
    m = len(f)
    factor = 1 - Fraction(2**m, f.n)
    return factor * sum(singleton_terms(f)) <= chains_through(f)


def suite_proposition_bound(seed: int, cases: int = 200) -> SuiteResult:
    rng = random.Random(seed + 3)
    checked = 0
    while checked < cases:
        n = rng.randint(3, 10)
        ms = [m for m in range(1, 4) if 2**m < n]
        if not ms:
            continue
        m = rng.choice(ms)
        f = random_family(rng, n, m, exclude=1 | 1 << ((1 << n) - 1))
        checked += 1
        if not proposition_bound_holds(f):
            return SuiteResult("proposition_bound", False, checked, f"fails on {f.to_json()}")
    return SuiteResult("proposition_bound", True, checked)


def suite_closure_values(seed: int) -> SuiteResult:
    expected = [
        (antichain(1), "weak", 1),
        (V(), "weak", 3),
        (Lambda(), "weak", 3),
        (chain(1), "weak", 2),
        (chain(2), "weak", 4),
        (chain(3), "weak", 8),
        (J(), "weak", 4),
        (J(), "strong", 5),
    ]
    for p, mode, m in expected:
        got = minimal_closure(p, mode).m
        if got != m:
            return SuiteResult("closure_values", False, len(expected), f"{p.name} {mode}: {got} != {m}")
    return SuiteResult("closure_values", True, len(expected))


def suite_small_packings(seed: int) -> SuiteResult:
    cases = 0
    for n in range(1, 5):
        cases += 1
        if pa_exact(antichain(1), n)[0] != comb(n, n // 2):
            return SuiteResult("small_packings", False, cases, f"Sperner fails at n={n}")
    for n in range(1, 5):
        cases += 1
        if pa_exact(chain(1), n)[0] != gst_formula(1, n):
            return SuiteResult("small_packings", False, cases, f"two-chain fails at n={n}")
    return SuiteResult("small_packings", True, cases)


def suite_construction(seed: int) -> SuiteResult:
    runs = [(V(), "weak", 12, 1), (V(), "weak", 12, 2), (J(), "strong", 14, 1)]
    for p, mode, n, i in runs:
        e = minimal_closure(p, mode).witness
        plan = build_plan(e, n, i)
        copies = materialize(plan)
        report = verify_unrelated(copies, e.image)
        if not report.ok or len(copies) != count_copies(plan)[0]:
            return SuiteResult("construction", False, len(runs), f"{p.name} n={n} i={i}: {report.to_json()}")
    return SuiteResult("construction", True, len(runs))


SUITES: list[Callable[[int], SuiteResult]] = [
    suite_closure_laws,
    suite_unrelated_closures,
    suite_chain_counts,
    suite_proposition_bound,
    suite_closure_values,
    suite_small_packings,
    suite_construction,
]


def run_all(seed: int = 0) -> list[SuiteResult]:
    return [suite(seed) for suite in SUITES]
