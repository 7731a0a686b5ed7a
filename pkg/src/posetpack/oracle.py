"""Exact pa(n, P) at tiny n by maximum-weight clique search over all copies.

Two copies are compatible when they are unrelated as families; a packing is
a clique in that compatibility graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Sequence

from .config import DEFAULT, RunConfig
from .embedding import _check_mode, _image_stream
from .errors import BudgetError, CapError, RangeError
from .lattice import Family
from .poset import Poset


@dataclass(frozen=True)
class CopyCatalog:
    poset: Poset
    n: int
    mode: str
    copies: tuple[Family, ...]

    def __len__(self):
        return len(self.copies)


def enumerate_copies(p: Poset, n: int, mode: str = "weak", config: RunConfig = DEFAULT) -> CopyCatalog:
    """All distinct images of mode-embeddings of ``p`` into B_n, sorted."""
    _check_mode(mode)
    if n > config.ground_cap:
        raise CapError("ground size", n, config.ground_cap)
    seen: set[tuple[int, ...]] = set()
    for image in _image_stream(p, n, mode):
        seen.add(tuple(sorted(image)))
        if len(seen) > config.catalog_budget:
            raise BudgetError(f"copy catalog of {p} in B_{n}", f"more than {len(seen) - 1}", config.catalog_budget)
    copies = tuple(Family(n, s) for s in sorted(seen))
    return CopyCatalog(p, n, mode, copies)


def _unrelated_masks(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    for x in a:
        for y in b:
            if x & ~y == 0 or y & ~x == 0:
                return False
    return True


def compatibility_graph(families: Sequence[Family]) -> list[int]:
    """Adjacency bitsets: bit q of adj[p] set iff families p and q are unrelated."""
    adj = [0] * len(families)
    for p in range(len(families)):
        for q in range(p + 1, len(families)):
            if _unrelated_masks(families[p].sets, families[q].sets):
                adj[p] |= 1 << q
                adj[q] |= 1 << p
    return adj


def _color_bound(cand: int, adj: list[int], weights: list[int]) -> int:
    # greedy colouring: each class is an independent set, so a clique takes
    # at most one vertex (the heaviest, at best) from each class
    bound = 0
    rest = cand
    while rest:
        pool = rest
        heaviest = 0
        while pool:
            low = pool & -pool
            v = low.bit_length() - 1
            heaviest = max(heaviest, weights[v])
            rest &= ~low
            pool &= ~adj[v] & ~low
        bound += heaviest
    return bound


def max_weight_clique(adj: list[int], weights: list[int]) -> tuple[int, list[int]]:
    """Heaviest clique, ties broken towards the lexicographically least
    sorted vertex list. Branch and bound with colouring bounds."""
    best_w = 0
    best: list[int] = []
    current: list[int] = []

    def expand(cand: int, weight: int):
        nonlocal best_w, best
        if weight > best_w:
            best_w, best = weight, list(current)
        while cand:
            if weight + _color_bound(cand, adj, weights) <= best_w:
                return
            low = cand & -cand
            v = low.bit_length() - 1
            cand &= ~low
            current.append(v)
            expand(cand & adj[v], weight + weights[v])
            current.pop()

    expand((1 << len(adj)) - 1, 0)
    return best_w, best


def _best_packing(families: Sequence[Family]) -> tuple[int, list[Family]]:
    adj = compatibility_graph(families)
    weight, chosen = max_weight_clique(adj, [len(f) for f in families])
    picked = [families[v] for v in chosen]
    union = set()
    for f in picked:
        union.update(f.sets)
    # unrelated copies can never share a set
    assert len(union) == sum(len(f) for f in picked)
    return weight, picked


def pa_exact(p: Poset, n: int, mode: str = "weak", config: RunConfig = DEFAULT) -> tuple[int, list[Family]]:
    """Largest family built from pairwise-unrelated copies of ``p`` in B_n."""
    catalog = enumerate_copies(p, n, mode, config)
    return _best_packing(catalog.copies)


def pa_exact_collection(posets: Sequence[Poset], n: int, mode: str = "weak", config: RunConfig = DEFAULT) -> int:
    """Same as pa_exact, mixing copies of any poset in ``posets``."""
    return pa_collection_witness(posets, n, mode, config)[0]


def pa_collection_witness(posets, n, mode="weak", config: RunConfig = DEFAULT) -> tuple[int, list[Family]]:
    pool: set[Family] = set()
    for p in posets:
        pool.update(enumerate_copies(p, n, mode, config).copies)
        if len(pool) > config.catalog_budget:
            raise BudgetError("union copy catalog", len(pool), config.catalog_budget)
    families = sorted(pool, key=lambda f: f.sets)
    return _best_packing(families)


def gst_formula(k: int, n: int) -> int:
    """(k+1) · C(n-k, ⌊(n-k)/2⌋), the exact packing number of the (k+1)-chain."""
    if not 0 <= k <= n:
        raise RangeError(f"need n >= k >= 0, got k={k}, n={n}")
    return (k + 1) * comb(n - k, (n - k) // 2)
