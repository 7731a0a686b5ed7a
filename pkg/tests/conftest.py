"""Brute-force reference implementations, deliberately naive and independent
of the library's search code."""

import sys
from itertools import permutations, product

import pytest

from posetpack.lattice import Family


def all_subsets(n):
    return range(1 << n)


def brute_downset(f):
    return {s for s in all_subsets(f.n) if any(s & ~a == 0 for a in f.sets)}


def brute_upset(f):
    return {s for s in all_subsets(f.n) if any(a & ~s == 0 for a in f.sets)}


def brute_closure(f):
    return {
        s
        for s in all_subsets(f.n)
        if any(a & ~s == 0 for a in f.sets) and any(s & ~b == 0 for b in f.sets)
    }


def brute_chain_count(f):
    """Walk every permutation of [n]; each one is a full chain."""
    members = set(f.sets)
    hits = 0
    for perm in permutations(range(f.n)):
        s = 0
        met = s in members
        for x in perm:
            s |= 1 << x
            met = met or s in members
        hits += met
    return hits


def brute_embeddings(p, k, mode):
    out = []
    for image in product(range(1 << k), repeat=p.size):
        if len(set(image)) != p.size:
            continue
        ok = True
        for a in range(p.size):
            for b in range(p.size):
                if a == b:
                    continue
                sub = image[a] & ~image[b] == 0
                if p.less(a, b) and not sub:
                    ok = False
                if mode == "strong" and sub and not p.less(a, b):
                    ok = False
        if ok:
            out.append(image)
    return out


def fam(n, *sets):
    return Family.from_lists(n, sets)


@pytest.fixture
def family():
    return fam


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
