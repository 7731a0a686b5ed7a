"""Finite posets on integer labels 0..size-1.

The order is stored twice: as its transitive reduction (``covers``) and as
per-element bitmasks of strictly larger elements (``above``), which is what
the search code actually queries.
"""

from __future__ import annotations

import heapq
import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .config import DEFAULT, RunConfig
from .errors import CapError, CycleError, ParseError, RangeError


@dataclass(frozen=True)
class Poset:
    size: int
    covers: tuple[tuple[int, int], ...]
    above: tuple[int, ...] = field(repr=False)
    name: str = field(default="", compare=False)

    def less(self, a: int, b: int) -> bool:
        return bool(self.above[a] >> b & 1)

    def comparable(self, a: int, b: int) -> bool:
        return self.less(a, b) or self.less(b, a)

    @property
    def strict_less(self) -> list[list[bool]]:
        return [[self.less(a, b) for b in range(self.size)] for a in range(self.size)]

    @property
    def below(self) -> tuple[int, ...]:
        out = [0] * self.size
        for a in range(self.size):
            for b in _bits(self.above[a]):
                out[b] |= 1 << a
        return tuple(out)

    def relations(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.size) for b in _bits(self.above[a])]

    def linear_extension(self) -> list[int]:
        """Least-label-first topological order; fixed for a given poset."""
        indeg = [0] * self.size
        for _, b in self.covers:
            indeg[b] += 1
        succ: list[list[int]] = [[] for _ in range(self.size)]
        for a, b in self.covers:
            succ[a].append(b)
        heap = [a for a in range(self.size) if indeg[a] == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            a = heapq.heappop(heap)
            order.append(a)
            for b in succ[a]:
                indeg[b] -= 1
                if indeg[b] == 0:
                    heapq.heappush(heap, b)
        return order

    def to_json(self) -> dict:
        return {"elements": self.size, "relations": [list(c) for c in self.covers]}

    def __str__(self):
        label = self.name or "Poset"
        return f"{label}(size={self.size}, covers={list(self.covers)})"


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def build_poset(
    size: int,
    relations: Iterable[Sequence[int]],
    *,
    name: str = "",
    config: RunConfig = DEFAULT,
) -> Poset:
    """Build a poset from any generating set of strict relations ``(a, b)``, a < b.

    Raises CycleError when the relations are not acyclic and RangeError on bad
    labels. Covers are reduced to the transitive reduction.
    """
    if size < 0:
        raise RangeError(f"poset size must be non-negative, got {size}")
    if size > config.poset_cap:
        raise CapError("poset size", size, config.poset_cap)
    succ = [0] * size
    for rel in relations:
        if len(rel) != 2:
            raise RangeError(f"relation {rel!r} is not a pair")
        a, b = int(rel[0]), int(rel[1])
        if not (0 <= a < size and 0 <= b < size):
            raise RangeError(f"relation ({a},{b}) references a label outside 0..{size - 1}")
        if a == b:
            raise CycleError([a, a])
        succ[a] |= 1 << b

    _check_acyclic(size, succ)

    # transitive closure in reverse topological order
    above = [0] * size
    for a in reversed(_topo_order(size, succ)):
        acc = succ[a]
        for b in _bits(succ[a]):
            acc |= above[b]
        above[a] = acc

    covers = []
    for a in range(size):
        implied = 0
        for b in _bits(above[a]):
            implied |= above[b]
        for b in _bits(above[a] & ~implied):
            covers.append((a, b))
    covers.sort()
    return Poset(size, tuple(covers), tuple(above), name)


def _check_acyclic(size: int, succ: list[int]) -> None:
    WHITE, GREY, BLACK = 0, 1, 2
    color = [WHITE] * size
    for root in range(size):
        if color[root] != WHITE:
            continue
        path = [root]
        stack = [iter(_bits(succ[root]))]
        color[root] = GREY
        while stack:
            nxt = next(stack[-1], None)
            if nxt is None:
                color[path.pop()] = BLACK
                stack.pop()
            elif color[nxt] == GREY:
                start = path.index(nxt)
                raise CycleError(path[start:] + [nxt])
            elif color[nxt] == WHITE:
                color[nxt] = GREY
                path.append(nxt)
                stack.append(iter(_bits(succ[nxt])))


def _topo_order(size: int, succ: list[int]) -> list[int]:
    indeg = [0] * size
    for a in range(size):
        for b in _bits(succ[a]):
            indeg[b] += 1
    queue = [a for a in range(size) if indeg[a] == 0]
    order = []
    while queue:
        a = queue.pop()
        order.append(a)
        for b in _bits(succ[a]):
            indeg[b] -= 1
            if indeg[b] == 0:
                queue.append(b)
    return order


def height(p: Poset) -> int:
    """Number of elements in a longest chain, minus one (0 for empty posets)."""
    longest = [0] * p.size
    for a in reversed(p.linear_extension()):
        longest[a] = max((1 + longest[b] for b in _bits(p.above[a])), default=0)
    return max(longest, default=0)


def chain(k: int) -> Poset:
    """The chain on k+1 elements."""
    return build_poset(k + 1, [(i, i + 1) for i in range(k)], name=f"chain({k})")


def antichain(t: int) -> Poset:
    return build_poset(t, [], name=f"antichain({t})")


def boolean(k: int) -> Poset:
    """Containment order on subsets of [k]; element labels are the bitmasks."""
    size = 1 << k
    rels = [(s, s | 1 << i) for s in range(size) for i in range(k) if not s >> i & 1]
    return build_poset(size, rels, name=f"boolean({k})")


def V() -> Poset:
    return build_poset(3, [(0, 1), (0, 2)], name="V")


def Lambda() -> Poset:
    return build_poset(3, [(1, 0), (2, 0)], name="Lambda")


def J() -> Poset:
    """a<b<c and a<d, labelled a=0, b=1, c=2, d=3."""
    return build_poset(4, [(0, 1), (1, 2), (0, 3)], name="J")


_NAMED = {"V": V, "Lambda": Lambda, "Λ": Lambda, "J": J}
_PARAM = {"chain": chain, "antichain": antichain, "boolean": boolean}
_SPEC_RE = re.compile(r"^\s*(\w+)\s*(?:\(\s*(\d+)\s*\))?\s*$")


def standard_poset(name: str, param: int | None = None) -> Poset:
    """Named poset: chain(k), antichain(t), boolean(k), V, Lambda, J.

    ``name`` may carry its parameter inline, e.g. ``"chain(3)"``. ``B0`` is an
    alias for antichain(1).
    """
    match = _SPEC_RE.match(name)
    if match is None:
        raise RangeError(f"unrecognised poset name {name!r}")
    base, inline = match.group(1), match.group(2)
    if inline is not None:
        param = int(inline)
    if base in ("B0", "B_0"):
        return antichain(1)
    if base in _NAMED:
        return _NAMED[base]()
    if base not in _PARAM:
        raise RangeError(f"unrecognised poset name {name!r}")
    if param is None or param < 0:
        raise RangeError(f"{base} needs a non-negative parameter")
    return _PARAM[base](param)


def poset_from_json(doc) -> Poset:
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid poset JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(doc, dict) or "elements" not in doc:
        raise ParseError('poset JSON must be an object with "elements" and "relations"')
    size = doc["elements"]
    rels = doc.get("relations", [])
    if not isinstance(size, int) or not isinstance(rels, list):
        raise ParseError('"elements" must be an integer and "relations" a list')
    return build_poset(size, rels, name=doc.get("name", ""))


def load_poset(path: str) -> Poset:
    """Read a poset file, or a standard name such as ``chain(2)`` or ``J``."""
    try:
        with open(path) as fh:
            text = fh.read()
    except FileNotFoundError:
        try:
            return standard_poset(path)
        except RangeError:
            raise ParseError(f"no such poset file or standard poset: {path!r}") from None
    return poset_from_json(text)
