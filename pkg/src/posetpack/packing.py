"""Layered construction packing pairwise-unrelated copies of an embedded
poset into B_n.

Each populated layer occupies k+1 consecutive levels of B_n and is named by
a word ``V_0 V_1 ... V_{j-1} E`` over the letters of U = B_k minus the
closure of the embedding image. Sorting the words by the letter order fixes
the order of the layers' base ranks, which is what keeps copies in different
layers unrelated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Iterable, Sequence, Union

import numpy as np

from .config import DEFAULT, RunConfig
from .embedding import Embedding
from .errors import BudgetError, CapError, GroundMismatch, IterationError, TooSmallError
from .lattice import Family, closure_masks, elements_of, popcount, upset

E = "E"
Letter = Union[int, str]
MAX_MATERIALIZED_N = 63


def split_letters(e: Embedding) -> tuple[list[int], list[int]]:
    """(U⁻, U⁺): sets outside the closure that lie above some image set, and the rest."""
    closed = closure_masks(e.image)
    above = set(upset(Family(e.k, e.image)).sets)
    minus = [v for v in range(1 << e.k) if v in above and v not in closed]
    plus = [v for v in range(1 << e.k) if v not in above]
    return minus, plus


def _sub_order(letters: Iterable[int]) -> list[int]:
    # larger sets first, so a superset always precedes its subsets
    return sorted(letters, key=lambda v: (-popcount(v), v))


def letter_order(e: Embedding) -> list[Letter]:
    """U⁻ (largest sets first), then E, then U⁺ (same sub-order)."""
    minus, plus = split_letters(e)
    return _sub_order(minus) + [E] + _sub_order(plus)


@dataclass(frozen=True)
class LayerSpec:
    j: int
    R: int
    b: int
    word: tuple[Letter, ...]

    def to_json(self) -> dict:
        return {
            "j": self.j,
            "R": elements_of(self.R),
            "b": self.b,
            "word": [w if w == E else elements_of(w) for w in self.word],
        }


@dataclass(frozen=True)
class PackingPlan:
    n: int
    embedding: Embedding
    m: int
    iterations: int
    letters: tuple[Letter, ...]
    layers: tuple[LayerSpec, ...]

    @property
    def k(self) -> int:
        return self.embedding.k

    @property
    def spare(self) -> int:
        """2^k - m, the number of non-E letters."""
        return (1 << self.k) - self.m


def layer_count(spare: int, iterations: int) -> int:
    return sum(spare**j for j in range(iterations))


def restriction(word: Sequence[Letter], k: int) -> int:
    r = 0
    for p, letter in enumerate(word[:-1]):
        r |= letter << (k * p)
    return r


def _words(letters: Sequence[Letter], iterations: int) -> list[tuple[Letter, ...]]:
    rank = {v: idx for idx, v in enumerate(letters)}
    body = [v for v in letters if v != E]
    words = [w + (E,) for j in range(iterations) for w in product(body, repeat=j)]
    words.sort(key=lambda w: [rank[v] for v in w])
    return words


def _violations(n: int, k: int, layers: Iterable[tuple[int, int, int]]) -> bool:
    # layers given as (j, |R|, offset from the middle rank)
    mid = n // 2
    for j, r, off in layers:
        b = mid + off
        if b < 0 or b + k > n or b - r < 0 or b - r > n - k * (j + 1):
            return True
    return False


def build_plan(e: Embedding, n: int, iterations: int, config: RunConfig = DEFAULT) -> PackingPlan:
    """Lay out every word of length <= ``iterations`` on its own layer.

    Base ranks are consecutive multiples of k+1 away from ⌊n/2⌋, in word
    order, with the one-letter word "E" sitting at ⌊n/2⌋ itself.
    """
    if iterations < 1:
        raise IterationError(f"iterations must be >= 1, got {iterations}")
    k = e.k
    m = len(closure_masks(e.image))
    letters = letter_order(e)
    total = layer_count((1 << k) - m, iterations)
    if total > config.search_budget:
        raise BudgetError("number of populated layers", total, config.search_budget)

    words = _words(letters, iterations)
    anchor = words.index((E,))
    shape = []
    for idx, w in enumerate(words):
        r = restriction(w, k)
        shape.append((len(w) - 1, r, (idx - anchor) * (k + 1), w))

    sizes = [(j, popcount(r), off) for j, r, off, _ in shape]
    if _violations(n, k, sizes):
        limit = 4 * ((k + 1) * (total + 1) + k * iterations) + 8
        n_min = next((x for x in range(limit) if not _violations(x, k, sizes)), None)
        raise TooSmallError(n, n_min)

    mid = n // 2
    layers = tuple(LayerSpec(j, r, mid + off, w) for j, r, off, w in shape)
    assert all(abs(lay.b - mid) <= (k + 1) * total for lay in layers)
    return PackingPlan(n, e, m, iterations, tuple(letters), layers)


def copies_in_layer(plan: PackingPlan, layer: LayerSpec) -> int:
    return comb(plan.n - plan.k * (layer.j + 1), layer.b - popcount(layer.R))


def count_copies(plan: PackingPlan) -> tuple[int, int]:
    """(number of copies, total number of sets) for the plan."""
    copies = sum(copies_in_layer(plan, lay) for lay in plan.layers)
    return copies, plan.embedding.poset.size * copies


@dataclass(frozen=True)
class Copy:
    """One placed copy; ``sets[a]`` is the image of poset element ``a``."""

    n: int
    sets: tuple[int, ...]
    layer: LayerSpec | None = None

    @property
    def family(self) -> Family:
        return Family(self.n, self.sets)

    def to_json(self) -> dict:
        doc = self.family.to_json()
        doc["elements"] = [elements_of(s) for s in self.sets]
        if self.layer is not None:
            doc["layer"] = self.layer.to_json()
        return doc


def materialize(plan: PackingPlan, config: RunConfig = DEFAULT) -> list[Copy]:
    """Every copy of the plan, grouped by layer in base-rank order."""
    if plan.n > MAX_MATERIALIZED_N:
        raise CapError("ground size for materialization", plan.n, MAX_MATERIALIZED_N)
    _, total_sets = count_copies(plan)
    if total_sets > config.materialize_budget:
        raise BudgetError("materialized set count", total_sets, config.materialize_budget)
    k, image = plan.k, plan.embedding.image
    out = []
    for lay in plan.layers:
        shift = k * lay.j
        placed = [lay.R | a << shift for a in image]
        free = range(k * (lay.j + 1), plan.n)
        for chosen in combinations(free, lay.b - popcount(lay.R)):
            base = 0
            for x in chosen:
                base |= 1 << x
            out.append(Copy(plan.n, tuple(s | base for s in placed), lay))
    return out


@dataclass(frozen=True)
class UnrelatedReport:
    ok: bool
    copies: int
    witness: dict | None = None
    pattern_ok: bool = True
    pattern_failure: int | None = None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "copies": self.copies,
            "witness": self.witness,
            "pattern_ok": self.pattern_ok,
            "pattern_failure": self.pattern_failure,
        }


def containment_pattern(sets: Sequence[int]) -> tuple[tuple[bool, ...], ...]:
    return tuple(
        tuple(a != b and sets[a] & ~sets[b] == 0 for b in range(len(sets)))
        for a in range(len(sets))
    )


def _as_sets(c) -> tuple[int, tuple[int, ...] | None, tuple[int, ...]]:
    # (ground, element-ordered sets or None, sets)
    if isinstance(c, Copy):
        return c.n, c.sets, c.sets
    if isinstance(c, Family):
        return c.n, None, c.sets
    raise TypeError(f"expected Copy or Family, got {type(c).__name__}")


SOS_MAX_N = 22


def _no_cross_containment(n: int, groups: Sequence[Sequence[int]]) -> bool:
    # For every mask, the least and greatest copy index among listed sets
    # below it; a set whose submasks span another copy is related to it.
    owner_of: dict[int, int] = {}
    for idx, sets in enumerate(groups):
        for s in sets:
            if owner_of.setdefault(s, idx) != idx:
                return False
    size = 1 << n
    lo = np.full(size, len(groups), dtype=np.int32)
    hi = np.full(size, -1, dtype=np.int32)
    keys = np.fromiter(owner_of.keys(), dtype=np.int64, count=len(owner_of))
    vals = np.fromiter(owner_of.values(), dtype=np.int32, count=len(owner_of))
    lo[keys] = vals
    hi[keys] = vals
    for bit in range(n):
        lo_v = lo.reshape(-1, 2, 1 << bit)
        hi_v = hi.reshape(-1, 2, 1 << bit)
        np.minimum(lo_v[:, 1, :], lo_v[:, 0, :], out=lo_v[:, 1, :])
        np.maximum(hi_v[:, 1, :], hi_v[:, 0, :], out=hi_v[:, 1, :])
    return bool(np.all(lo[keys] == vals) and np.all(hi[keys] == vals))


def _least_related_pair(groups: Sequence[Sequence[int]]) -> dict | None:
    flat = np.array([s for sets in groups for s in sets], dtype=np.uint64)
    owner = np.repeat(np.arange(len(groups)), [len(sets) for sets in groups])
    start = 0
    for p, sets in enumerate(groups):
        stop = start + len(sets)
        rest, rest_owner = flat[stop:], owner[stop:]
        start = stop
        hits = []
        for a in sets:
            av = np.uint64(a)
            rel = ((av & ~rest) == 0) | ((rest & ~av) == 0)
            if rel.any():
                hits.append(int(rest_owner[rel].min()))
        if not hits:
            continue
        q = min(hits)
        for a in sets:
            for b in groups[q]:
                if a == b or a & ~b == 0 or b & ~a == 0:
                    direction = "=" if a == b else ("<" if a & ~b == 0 else ">")
                    return {"copies": [p, q], "sets": [elements_of(a), elements_of(b)], "direction": direction}
    return None


def verify_unrelated(copies: Sequence[Copy | Family], pattern: Sequence[int] | None = None) -> UnrelatedReport:
    """Check that no set of one copy contains, or equals, a set of another.

    On failure the witness is the least pair of copy indices (p, q), p < q,
    with the first related set pair in it. When ``pattern`` (a reference
    image) is given, element-ordered copies must reproduce its containment
    pattern exactly.
    """
    if not copies:
        return UnrelatedReport(True, 0)
    parsed = [_as_sets(c) for c in copies]
    n = parsed[0][0]
    for g, _, _ in parsed:
        if g != n:
            raise GroundMismatch(n, g)

    pattern_failure = None
    if pattern is not None:
        want = containment_pattern(pattern)
        for idx, (_, ordered, _) in enumerate(parsed):
            if ordered is None or containment_pattern(ordered) != want:
                pattern_failure = idx
                break

    clean = n <= SOS_MAX_N and _no_cross_containment(n, [sets for _, _, sets in parsed])
    witness = None if clean else _least_related_pair([sets for _, _, sets in parsed])

    return UnrelatedReport(
        ok=witness is None and pattern_failure is None,
        copies=len(parsed),
        witness=witness,
        pattern_ok=pattern_failure is None,
        pattern_failure=pattern_failure,
    )


def best_feasible_plan(e: Embedding, n: int, max_iterations: int = 8, config: RunConfig = DEFAULT) -> PackingPlan | None:
    """Plan with the largest family over iterations 1..max_iterations that fit in B_n."""
    best = None
    for i in range(1, max_iterations + 1):
        try:
            plan = build_plan(e, n, i, config)
        except (TooSmallError, BudgetError):
            continue
        if best is None or count_copies(plan)[1] > count_copies(best)[1]:
            best = plan
    return best


def middle_binomial(n: int) -> int:
    return comb(n, n // 2)


def asymptotic_target(size: int, m: int, n: int) -> Fraction:
    """(|P|/m) · C(n, ⌊n/2⌋), the limiting family size."""
    return Fraction(size, m) * middle_binomial(n)


def partial_target(size: int, m: int, k: int, n: int, iterations: int) -> Fraction:
    """|P| · Σ_{j<i} (2^k-m)^j / (2^k)^(j+1) · C(n, ⌊n/2⌋)."""
    spare, whole = (1 << k) - m, 1 << k
    weight = sum(Fraction(spare**j, whole ** (j + 1)) for j in range(iterations))
    return size * weight * middle_binomial(n)
