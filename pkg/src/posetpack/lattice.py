"""Subsets of [n] as bitmasks, families of subsets, convex closure and
full-chain counting.

Element ``i`` of [n] (1-based) is bit ``i - 1`` of a mask. A Family keeps its
sets deduplicated and sorted by mask value, which is the canonical order used
for tie-breaking everywhere else.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb, factorial
from typing import Iterable, Iterator, Sequence

import numpy as np

from .config import DEFAULT, RunConfig
from .errors import BudgetError, CapError, GroundMismatch, ParseError, RangeError, SizeError


def mask_of(elements: Iterable[int]) -> int:
    mask = 0
    for e in elements:
        mask |= 1 << (e - 1)
    return mask


def elements_of(mask: int) -> list[int]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, largest first, ending with 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


@dataclass(frozen=True)
class Family:
    n: int
    sets: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0:
            raise RangeError(f"ground size must be non-negative, got {self.n}")
        canon = tuple(sorted(set(self.sets)))
        if canon and (canon[0] < 0 or canon[-1] >> self.n):
            bad = next(s for s in canon if s < 0 or s >> self.n)
            raise RangeError(f"set {elements_of(bad)} is not a subset of [{self.n}]")
        object.__setattr__(self, "sets", canon)

    @classmethod
    def from_lists(cls, n: int, sets: Iterable[Iterable[int]]) -> "Family":
        return cls(n, tuple(mask_of(s) for s in sets))

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __contains__(self, mask):
        return mask in self.sets

    def as_lists(self) -> list[list[int]]:
        return [elements_of(s) for s in self.sets]

    def to_json(self) -> dict:
        return {"n": self.n, "sets": self.as_lists()}


def family_from_json(doc) -> Family:
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid family JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(doc, dict) or "n" not in doc or "sets" not in doc:
        raise ParseError('family JSON must be an object with "n" and "sets"')
    n = doc["n"]
    if not isinstance(n, int) or n < 0:
        raise ParseError('"n" must be a non-negative integer')
    sets = []
    for idx, s in enumerate(doc["sets"]):
        if not isinstance(s, list) or not all(isinstance(e, int) for e in s):
            raise ParseError(f"set #{idx} is not a list of integers")
        if any(e < 1 or e > n for e in s):
            raise ParseError(f"set #{idx} {s} has labels outside 1..{n}")
        if any(b <= a for a, b in zip(s, s[1:])):
            raise ParseError(f"set #{idx} {s} is not strictly increasing")
        sets.append(s)
    return Family.from_lists(n, sets)


def load_family(path: str) -> Family:
    with open(path) as fh:
        return family_from_json(fh.read())


def _check_cap(n: int, config: RunConfig) -> None:
    if n > config.enum_cap:
        raise CapError("ground size", n, config.enum_cap)


def downset(f: Family, config: RunConfig = DEFAULT) -> Family:
    _check_cap(f.n, config)
    out: set[int] = set()
    for a in f.sets:
        if a in out:
            continue
        out.update(submasks(a))
    return Family(f.n, tuple(out))


def upset(f: Family, config: RunConfig = DEFAULT) -> Family:
    _check_cap(f.n, config)
    full = (1 << f.n) - 1
    out: set[int] = set()
    for a in f.sets:
        if a in out:
            continue
        out.update(a | s for s in submasks(full & ~a))
    return Family(f.n, tuple(out))


def closure_masks(sets: Sequence[int]) -> set[int]:
    """Sets sandwiched between two members; no cap check."""
    out: set[int] = set()
    for b in sets:
        for a in sets:
            if a & ~b == 0:
                out.update(a | s for s in submasks(b & ~a))
    return out


def closure(f: Family, config: RunConfig = DEFAULT) -> Family:
    """Convex closure D(F) ∩ U(F)."""
    _check_cap(f.n, config)
    return Family(f.n, tuple(closure_masks(f.sets)))


def is_convex(f: Family, config: RunConfig = DEFAULT) -> bool:
    return len(closure(f, config)) == len(f)


def related_pair(f1: Family, f2: Family) -> tuple[int, int, str] | None:
    """First (A, B, direction) with A in f1, B in f2 related, or None.

    ``direction`` is "=" for a shared set, "<" for A ⊂ B, ">" for A ⊃ B.
    """
    if f1.n != f2.n:
        raise GroundMismatch(f1.n, f2.n)
    for a in f1.sets:
        for b in f2.sets:
            if a == b:
                return a, b, "="
            if a & ~b == 0:
                return a, b, "<"
            if b & ~a == 0:
                return a, b, ">"
    return None


def unrelated(f1: Family, f2: Family) -> bool:
    return related_pair(f1, f2) is None


@lru_cache(maxsize=None)
def fact(k: int) -> int:
    return factorial(k)


def middle_chain_count(n: int) -> int:
    """⌊n/2⌋!⌈n/2⌉!, the fewest full chains through a single set."""
    return fact(n // 2) * fact(n - n // 2)


def singleton_terms(f: Family) -> list[int]:
    """b(j) = |A_j|!(n-|A_j|)! for each member, in family order."""
    return [fact(popcount(a)) * fact(f.n - popcount(a)) for a in f.sets]


def _chains_through_masks(n: int, sets: Sequence[int]) -> int:
    # Inclusion-exclusion over chain subfamilies A_1 ⊂ ... ⊂ A_k with
    # b = |A_1|! (|A_2|-|A_1|)! ... (n-|A_k|)!, sign (-1)^(k-1).
    # g[i] accumulates the signed partial products of all chains ending at i.
    order = sorted(sets, key=popcount)
    sizes = [popcount(a) for a in order]
    g = []
    total = 0
    for i, a in enumerate(order):
        acc = fact(sizes[i])
        for j in range(i):
            b = order[j]
            if sizes[j] < sizes[i] and b & ~a == 0:
                acc -= g[j] * fact(sizes[i] - sizes[j])
        g.append(acc)
        total += acc * fact(n - sizes[i])
    return total


def chain_terms(f: Family) -> Iterator[tuple[tuple[int, ...], int]]:
    """Yield every chain subfamily (ascending) with its full-chain count b.

    Depth-first extension by strict containment; non-chain subfamilies
    contribute zero and are never produced.
    """
    order = sorted(f.sets, key=lambda s: (popcount(s), s))
    sizes = [popcount(a) for a in order]

    def extend(prefix, last, partial):
        yield tuple(order[p] for p in prefix), partial * fact(f.n - sizes[last])
        for nxt in range(last + 1, len(order)):
            if sizes[nxt] > sizes[last] and order[last] & ~order[nxt] == 0:
                yield from extend(prefix + [nxt], nxt, partial * fact(sizes[nxt] - sizes[last]))

    for start in range(len(order)):
        yield from extend([start], start, fact(sizes[start]))


def chains_through(f: Family, config: RunConfig = DEFAULT) -> int:
    """Number of full chains of B_n meeting ``f``, exact, by inclusion-exclusion."""
    if len(f) > config.chain_family_cap:
        raise SizeError(len(f), config.chain_family_cap)
    return _chains_through_masks(f.n, f.sets)


def chains_through_oracle(f: Family, config: RunConfig = DEFAULT) -> int:
    """Same count as chains_through, by DP over the whole subset lattice.

    Counts the maximal chains ∅ → [n] that avoid every member of ``f`` and
    subtracts them from n!.
    """
    n = f.n
    if n > config.oracle_ground_cap:
        raise CapError("ground size", n, config.oracle_ground_cap)
    if not f.sets:
        return 0
    masks = np.arange(1 << n, dtype=np.int64)
    level = np.bitwise_count(masks)
    blocked = np.zeros(1 << n, dtype=bool)
    blocked[list(f.sets)] = True
    avoid = np.zeros(1 << n, dtype=np.int64)
    avoid[0] = 0 if blocked[0] else 1
    for r in range(1, n + 1):
        idx = masks[level == r]
        acc = np.zeros(len(idx), dtype=np.int64)
        for x in range(n):
            bit = 1 << x
            has = (idx & bit) != 0
            acc[has] += avoid[idx[has] ^ bit]
        acc[blocked[idx]] = 0
        avoid[idx] = acc
    return fact(n) - int(avoid[(1 << n) - 1])


def _abar_chunk(args):
    n, m, firsts = args
    universe = 1 << n
    best = None
    best_fam = None
    for first in firsts:
        for rest in combinations(range(first + 1, universe), m - 1):
            fam = (first,) + rest
            val = _chains_through_masks(n, fam)
            if best is None or val < best:
                best, best_fam = val, fam
    return best, best_fam


def abar_bruteforce(m: int, n: int, config: RunConfig = DEFAULT) -> tuple[int, Family]:
    """Fewest full chains of B_n meeting an m-set family, with the
    lexicographically least minimising family (sets as ascending masks)."""
    if m < 1 or n < 0:
        raise RangeError(f"need m >= 1 and n >= 0, got m={m}, n={n}")
    universe = 1 << n
    if m > universe:
        raise RangeError(f"B_{n} has only {universe} sets, cannot choose {m}")
    candidates = comb(universe, m)
    if candidates > config.search_budget:
        raise BudgetError(f"abar({m},{n}) search over families", candidates, config.search_budget)

    firsts = list(range(universe - m + 1))
    workers = min(config.workers, len(firsts))
    if workers <= 1:
        results = [_abar_chunk((n, m, firsts))]
    else:
        chunks = [(n, m, firsts[w::workers]) for w in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_abar_chunk, chunks))
    best, fam = min((r for r in results if r[0] is not None), key=lambda r: (r[0], r[1]))
    return best, Family(n, fam)
