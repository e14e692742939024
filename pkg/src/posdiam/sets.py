"""Dense subset algebra over a finite abelian group.

An :class:`ElementSet` is a Python integer used as a bit table: bit ``i`` is set
when the element with mixed-radix index ``i`` belongs to the set.  Translating a
set by a group element is a per-coordinate block rotation of that integer, so a
sumset costs ``|A|`` translations of whole tables rather than ``|A|*|B|``
element additions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .groups import Element, GroupType, Subgroup, _bits

INF = math.inf
"""Length of an element outside the generated subgroup."""


@lru_cache(maxsize=4096)
def _low_mask(G: GroupType, coord: int, shift: int) -> int:
    """Bits whose ``coord``-th digit is below ``m - shift`` (they do not wrap)."""
    m = G.invariant_factors[coord]
    s = G.strides[coord]
    block = s * m
    nblocks = G.order // block
    pattern = (1 << ((m - shift) * s)) - 1
    repeat = ((1 << (block * nblocks)) - 1) // ((1 << block) - 1)
    return pattern * repeat


@lru_cache(maxsize=64)
def _full(G: GroupType) -> int:
    return (1 << G.order) - 1


def translate_mask(G: GroupType, mask: int, x: int) -> int:
    """Bit table of ``S + g`` where ``S`` has table ``mask`` and ``g`` has index ``x``."""
    if not x:
        return mask
    full = _full(G)
    for coord, (m, s) in enumerate(zip(G.invariant_factors, G.strides)):
        k = x // s % m
        if k:
            lo = _low_mask(G, coord, k)
            mask = ((mask & lo) << (k * s)) | ((mask & (full ^ lo)) >> ((m - k) * s))
    return mask


def sumset_mask(G: GroupType, a: int, b: int) -> int:
    if a.bit_count() > b.bit_count():
        a, b = b, a
    out = 0
    while a:
        low = a & -a
        out |= translate_mask(G, b, low.bit_length() - 1)
        a ^= low
    return out


@dataclass(frozen=True)
class ElementSet:
    group: GroupType
    mask: int = 0

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.group.order:
            raise ValueError("membership table has bits outside the group")

    # -- construction and literals -------------------------------------

    @classmethod
    def from_indices(cls, group: GroupType, indices: Iterable[int]) -> "ElementSet":
        mask = 0
        for i in indices:
            if not 0 <= i < group.order:
                raise IndexError(f"element index {i} out of range")
            mask |= 1 << i
        return cls(group, mask)

    @classmethod
    def from_elements(cls, group: GroupType, elements: Iterable[Sequence[int]]) -> "ElementSet":
        return cls.from_indices(group, (group.index(g) for g in elements))

    @classmethod
    def whole(cls, group: GroupType) -> "ElementSet":
        return cls(group, _full(group))

    @classmethod
    def zero(cls, group: GroupType) -> "ElementSet":
        return cls(group, 1)

    @classmethod
    def parse(cls, group: GroupType, literal: str) -> "ElementSet":
        """Parse ``"0:0;1:1;0:2"``; the empty string or ``"{}"`` is the empty set."""
        text = literal.strip()
        if text in ("", "{}"):
            return cls(group)
        return cls.from_elements(group, (group.parse_element(p) for p in text.split(";")))

    def __str__(self) -> str:
        return ";".join(self.group.format_element(g) for g in self)

    # -- container protocol --------------------------------------------

    def indices(self) -> tuple[int, ...]:
        return _bits(self.mask)

    def __iter__(self) -> Iterator[Element]:
        return (self.group.element(i) for i in self.indices())

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, g) -> bool:
        idx = g if isinstance(g, int) else self.group.index(g)
        return bool(self.mask >> idx & 1)

    def sort_key(self) -> tuple[int, ...]:
        return self.indices()

    # -- boolean algebra -----------------------------------------------

    def _check(self, other: "ElementSet") -> None:
        if not isinstance(other, ElementSet):
            raise TypeError(f"expected ElementSet, got {type(other).__name__}")
        if other.group != self.group:
            raise ValueError(f"group mismatch: {self.group} vs {other.group}")

    def __or__(self, other: "ElementSet") -> "ElementSet":
        self._check(other)
        return ElementSet(self.group, self.mask | other.mask)

    def __and__(self, other: "ElementSet") -> "ElementSet":
        self._check(other)
        return ElementSet(self.group, self.mask & other.mask)

    def difference(self, other: "ElementSet") -> "ElementSet":
        self._check(other)
        return ElementSet(self.group, self.mask & ~other.mask)

    def complement(self) -> "ElementSet":
        return ElementSet(self.group, _full(self.group) ^ self.mask)

    def issubset(self, other: "ElementSet") -> bool:
        self._check(other)
        return not self.mask & ~other.mask

    def add(self, g) -> "ElementSet":
        idx = g if isinstance(g, int) else self.group.index(g)
        return ElementSet(self.group, self.mask | 1 << idx)

    def with_zero(self) -> "ElementSet":
        """``A_0 = A | {0}``."""
        return ElementSet(self.group, self.mask | 1)

    @property
    def is_whole(self) -> bool:
        return self.mask == _full(self.group)

    # -- additive structure --------------------------------------------

    def translate(self, g) -> "ElementSet":
        idx = g if isinstance(g, int) else self.group.index(g)
        return ElementSet(self.group, translate_mask(self.group, self.mask, idx))

    def __add__(self, other: "ElementSet") -> "ElementSet":
        return sumset(self, other)


def sumset(A: ElementSet, B: ElementSet) -> ElementSet:
    """``{a + b : a in A, b in B}``."""
    A._check(B)
    return ElementSet(A.group, sumset_mask(A.group, A.mask, B.mask))


def dilate(r: int, A: ElementSet) -> ElementSet:
    """``r * A = {r a : a in A}``."""
    G = A.group
    return ElementSet.from_indices(G, {G.scale_idx(r, i) for i in A.indices()})


def generation_chain(A: ElementSet, rho: int | None = None) -> list[ElementSet]:
    """``[<A>_0, <A>_1, ...]`` up to ``rho`` or until the chain stabilises."""
    G = A.group
    a0 = A.mask | 1
    cur = 1
    chain = [cur]
    while rho is None or len(chain) <= rho:
        nxt = sumset_mask(G, cur, a0)
        if nxt == cur:
            break
        chain.append(nxt)
        cur = nxt
    return [ElementSet(G, m) for m in chain]


def bounded_generation(A: ElementSet, rho: int) -> ElementSet:
    """Elements that are a sum of at most ``rho`` elements of ``A``."""
    if rho < 0:
        raise ValueError("rho must be non-negative")
    return generation_chain(A, rho)[-1]


@dataclass(frozen=True)
class LengthTable:
    """Positive lengths of every element; ``INF`` outside the generated subgroup."""

    group: GroupType
    lengths: tuple[float, ...]

    def __getitem__(self, g) -> float:
        idx = g if isinstance(g, int) else self.group.index(g)
        return self.lengths[idx]

    def max(self) -> float:
        return max(self.lengths)

    def within(self, rho: int) -> ElementSet:
        return ElementSet.from_indices(self.group, (i for i, v in enumerate(self.lengths) if v <= rho))


def length_table(A: ElementSet) -> LengthTable:
    """Breadth-first distances from 0 in the Cayley digraph ``x -> x + a``."""
    G = A.group
    lengths: list[float] = [INF] * G.order
    for level, layer in enumerate(generation_chain(A)):
        fresh = layer.mask
        if level:
            fresh &= ~prev
        for i in _bits(fresh):
            lengths[i] = level
        prev = layer.mask
    return LengthTable(G, tuple(lengths))


def diameter(A: ElementSet) -> float:
    """``max_g l_A(g)``: an int when ``A`` generates the group, else ``INF``."""
    chain = generation_chain(A)
    return len(chain) - 1 if chain[-1].is_whole else INF


def period(S: ElementSet) -> Subgroup:
    """Stabiliser ``{g : S + g = S}``; the empty set has the whole group as period."""
    G = S.group
    if not S.mask:
        return Subgroup(G, _full(G))
    s0 = S.indices()[0]
    neg0 = G.neg_idx(s0)
    mask = 0
    for s in S.indices():
        g = G.add_idx(s, neg0)
        if translate_mask(G, S.mask, g) == S.mask:
            mask |= 1 << g
    return Subgroup(G, mask)


def is_aperiodic(S: ElementSet) -> bool:
    return period(S).mask == 1
