"""Weak and strong embeddings of a poset into B_k, and the search for the
smallest convex closure of an embedded copy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .config import DEFAULT, RunConfig
from .errors import CapError, InfeasibleError, InputError, RangeError
from .lattice import Family, closure_masks, elements_of
from .poset import Poset, height

MODES = ("weak", "strong")


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise InputError(f"mode must be 'weak' or 'strong', got {mode!r}")


@dataclass(frozen=True)
class Embedding:
    """Injective map element -> subset of [k]; ``image[a]`` is a bitmask."""

    poset: Poset
    k: int
    image: tuple[int, ...]
    mode: str = "weak"

    def __post_init__(self):
        _check_mode(self.mode)
        problem = embedding_violation(self.poset, self.k, self.image, self.mode)
        if problem:
            raise InputError(f"not a {self.mode} embedding: {problem}")

    @property
    def family(self) -> Family:
        return Family(self.k, self.image)

    def as_lists(self) -> list[list[int]]:
        return [elements_of(s) for s in self.image]


def embedding_violation(p: Poset, k: int, image: Sequence[int], mode: str) -> str | None:
    """Describe the first way ``image`` fails to be a mode-embedding, or None."""
    if len(image) != p.size:
        return f"image has {len(image)} sets for {p.size} elements"
    for a, s in enumerate(image):
        if s < 0 or s >> k:
            return f"image of {a} is not a subset of [{k}]"
    if len(set(image)) != len(image):
        return "image is not injective"
    for a in range(p.size):
        for b in range(p.size):
            if a == b:
                continue
            contained = image[a] & ~image[b] == 0
            if p.less(a, b) and not contained:
                return f"{a} < {b} but image({a}) is not contained in image({b})"
            if mode == "strong" and contained and not p.less(a, b):
                return f"image({a}) ⊂ image({b}) but {a} is not below {b}"
    return None


def _fits(below_x: int, assigned: dict[int, int], c: int, mode: str) -> bool:
    for y, s in assigned.items():
        if s == c:
            return False
        if below_x >> y & 1:
            if s & ~c:
                return False
        elif mode == "strong":
            if s & ~c == 0 or c & ~s == 0:
                return False
    return True


def enumerate_embeddings(
    p: Poset, k: int, mode: str = "weak", config: RunConfig = DEFAULT
) -> Iterator[Embedding]:
    """Every injective mode-valid map of ``p`` into B_k, exactly once.

    Elements are assigned along ``p.linear_extension()`` and candidate sets
    are tried in ascending mask order, so the stream is sorted by the image
    sequence read along that extension.
    """
    _check_mode(mode)
    if k > config.ground_cap:
        raise CapError("target ground size k", k, config.ground_cap)
    if p.size > config.poset_cap:
        raise CapError("poset size", p.size, config.poset_cap)
    for image in _image_stream(p, k, mode):
        yield Embedding(p, k, image, mode)


def _image_stream(p: Poset, k: int, mode: str) -> Iterator[tuple[int, ...]]:
    ext = p.linear_extension()
    below = p.below
    universe = 1 << k
    assigned: dict[int, int] = {}

    def rec(t):
        if t == len(ext):
            yield tuple(assigned[a] for a in range(p.size))
            return
        x = ext[t]
        for c in range(universe):
            if _fits(below[x], assigned, c, mode):
                assigned[x] = c
                yield from rec(t + 1)
                del assigned[x]

    yield from rec(0)


def closure_size(e: Embedding) -> int:
    return len(closure_masks(e.image))


@dataclass(frozen=True)
class ClosureCertificate:
    m: int
    k: int
    witness: Embedding
    mode: str
    exhaustive_to: int
    lower_bound: int

    @property
    def proven_optimal(self) -> bool:
        """True when m meets max(|P|, 2^height), so no larger k can beat it."""
        return self.m == self.lower_bound

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "k": self.k,
            "witness": self.witness.as_lists(),
            "exhaustive_to": self.exhaustive_to,
            "mode": self.mode,
        }


def closure_lower_bound(p: Poset) -> int:
    return max(p.size, 1 << height(p))


def min_closure_at(
    p: Poset, k: int, mode: str = "weak", bound: int | None = None
) -> tuple[int, tuple[int, ...]] | None:
    """Least closure size over mode-embeddings into B_k, with the
    lexicographically least image attaining it.

    Only results strictly below ``bound`` are searched for; returns None when
    there are none (or no embedding exists at all).
    """
    _check_mode(mode)
    ext = p.linear_extension()
    below = p.below
    universe = 1 << k
    assigned: dict[int, int] = {}
    best = [bound, None]

    def rec(t):
        if t == len(ext):
            size = len(closure_masks(list(assigned.values())))
            if best[0] is None or size < best[0]:
                best[0] = size
                best[1] = tuple(assigned[a] for a in range(p.size))
            return
        x = ext[t]
        for c in range(universe):
            if not _fits(below[x], assigned, c, mode):
                continue
            assigned[x] = c
            # the closure of a partial image is contained in the final closure
            if best[0] is None or len(closure_masks(list(assigned.values()))) < best[0]:
                rec(t + 1)
            del assigned[x]

    rec(0)
    if best[1] is None:
        return None
    return best[0], best[1]


def minimal_closure(
    p: Poset,
    mode: str = "weak",
    k_max: int | None = None,
    config: RunConfig = DEFAULT,
) -> ClosureCertificate:
    """Minimum closure size of a mode-embedding of ``p`` into B_k, k <= k_max.

    Ties go to the smallest k, then the least image sequence along the fixed
    linear extension. The sweep stops early once the trivial lower bound
    max(|P|, 2^height) is met, since no k can do better.
    """
    _check_mode(mode)
    if p.size == 0:
        raise RangeError("the empty poset has no meaningful closure")
    if p.size > config.poset_cap:
        raise CapError("poset size", p.size, config.poset_cap)
    h = height(p)
    if k_max is None:
        k_max = p.size
    if k_max < h:
        raise RangeError(f"k_max={k_max} is below the height {h}; no embedding can exist")
    if k_max > config.ground_cap:
        raise CapError("k_max", k_max, config.ground_cap)

    lower = closure_lower_bound(p)
    best = None
    for k in range(h, k_max + 1):
        found = min_closure_at(p, k, mode, bound=None if best is None else best[0])
        if found is not None:
            best = (found[0], k, found[1])
        if best is not None and best[0] == lower:
            break
    if best is None:
        raise InfeasibleError(f"no {mode} embedding of {p} into B_k for k <= {k_max}")
    m, k, image = best
    return ClosureCertificate(m, k, Embedding(p, k, image, mode), mode, k_max, lower)


def best_ratio(
    collection: Sequence[Poset], mode: str = "weak", config: RunConfig = DEFAULT
) -> tuple[Fraction, int]:
    """max_i |P_i| / c(P_i) as an exact rational, with the least index attaining it."""
    if not collection:
        raise InputError("best_ratio needs at least one poset")
    best = None
    for idx, p in enumerate(collection):
        cert = minimal_closure(p, mode, config=config)
        ratio = Fraction(p.size, cert.m)
        if best is None or ratio > best[0]:
            best = (ratio, idx)
    return best
