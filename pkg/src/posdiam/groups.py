"""Finite abelian groups given by their invariant factors.

Elements are plain tuples of residues.  Every dense table in the package is
indexed by the mixed-radix encoding ``idx(g) = g[0] + m[0]*(g[1] + m[1]*(...))``
so the first coordinate is the least significant digit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache, reduce
from itertools import product
from typing import Iterable, Iterator, Sequence

Element = tuple[int, ...]

DEFAULT_SUBGROUP_BOUND = 4096


class BudgetExceeded(RuntimeError):
    """A configured search or enumeration bound was hit.

    ``lower`` and ``upper`` carry partial bounds when the caller was computing
    an extremal value; both are ``None`` otherwise.
    """

    def __init__(self, message: str, lower: int | None = None, upper: int | None = None):
        super().__init__(message)
        self.lower = lower
        self.upper = upper


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def make_group(moduli: Iterable[int]) -> "GroupType":
    """Return the invariant-factor type of ``Z_{n1} + ... + Z_{nk}``.

    >>> make_group([4, 2]).invariant_factors
    (2, 4)
    >>> make_group([2, 3]).invariant_factors
    (6,)
    """
    factors = []
    for m in moduli:
        if isinstance(m, bool) or not isinstance(m, int):
            raise TypeError(f"modulus must be an integer, got {m!r}")
        if m < 1:
            raise ValueError(f"moduli must be positive, got {m}")
        factors.append(m)
    # one sweep of pairwise (gcd, lcm) leaves f[i] | f[j] for all i < j
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            a, b = factors[i], factors[j]
            factors[i], factors[j] = math.gcd(a, b), _lcm(a, b)
    return GroupType(tuple(f for f in factors if f != 1))


@dataclass(frozen=True)
class GroupType:
    """A finite abelian group ``Z_{m1} + ... + Z_{mr}`` with ``m1 | ... | mr``."""

    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        fs = tuple(self.invariant_factors)
        object.__setattr__(self, "invariant_factors", fs)
        for m in fs:
            if not isinstance(m, int) or m < 2:
                raise ValueError(f"invariant factors must be integers >= 2, got {fs}")
        for a, b in zip(fs, fs[1:]):
            if b % a:
                raise ValueError(f"invariant factors must form a divisor chain, got {fs}")

    @classmethod
    def parse(cls, literal: str) -> "GroupType":
        """Parse a group literal such as ``"2,8"`` (normalised via make_group)."""
        text = literal.strip()
        if not text:
            raise ValueError("empty group literal")
        try:
            moduli = [int(part) for part in text.split(",")]
        except ValueError:
            raise ValueError(f"bad group literal {literal!r}") from None
        return make_group(moduli)

    def __str__(self) -> str:
        return ",".join(map(str, self.invariant_factors)) or "1"

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @cached_property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def is_cyclic(self) -> bool:
        return self.rank <= 1

    @cached_property
    def strides(self) -> tuple[int, ...]:
        out, s = [], 1
        for m in self.invariant_factors:
            out.append(s)
            s *= m
        return tuple(out)

    @property
    def zero(self) -> Element:
        return (0,) * self.rank

    # -- element encoding -------------------------------------------------

    def validate(self, g: Sequence[int]) -> Element:
        g = tuple(g)
        if len(g) != self.rank:
            raise ValueError(f"element {g} has wrong length for group {self}")
        for x, m in zip(g, self.invariant_factors):
            if not 0 <= x < m:
                raise ValueError(f"coordinate {x} out of range for modulus {m}")
        return g

    def reduce(self, g: Sequence[int]) -> Element:
        if len(g) != self.rank:
            raise ValueError(f"element {tuple(g)} has wrong length for group {self}")
        return tuple(x % m for x, m in zip(g, self.invariant_factors))

    def index(self, g: Sequence[int]) -> int:
        return sum(x * s for x, s in zip(self.validate(g), self.strides))

    def element(self, idx: int) -> Element:
        if not 0 <= idx < self.order:
            raise IndexError(f"element index {idx} out of range")
        out = []
        for m in self.invariant_factors:
            idx, r = divmod(idx, m)
            out.append(r)
        return tuple(out)

    def elements(self) -> Iterator[Element]:
        for idx in range(self.order):
            yield self.element(idx)

    def parse_element(self, literal: str) -> Element:
        text = literal.strip()
        if self.rank == 0:
            if text not in ("", "0"):
                raise ValueError(f"bad element literal {literal!r} for trivial group")
            return ()
        try:
            coords = tuple(int(p) for p in text.split(":"))
        except ValueError:
            raise ValueError(f"bad element literal {literal!r}") from None
        return self.validate(coords)

    def format_element(self, g: Sequence[int]) -> str:
        return ":".join(map(str, g)) if len(g) else "0"

    # -- arithmetic ---------------------------------------------------------

    def add(self, a: Sequence[int], b: Sequence[int]) -> Element:
        return tuple((x + y) % m for x, y, m in zip(a, b, self.invariant_factors))

    def neg(self, a: Sequence[int]) -> Element:
        return tuple(-x % m for x, m in zip(a, self.invariant_factors))

    def scale(self, n: int, a: Sequence[int]) -> Element:
        return tuple(n * x % m for x, m in zip(a, self.invariant_factors))

    @cached_property
    def add_table(self) -> tuple[tuple[int, ...], ...]:
        """``add_table[x][y]`` is the index of ``x + y`` (built on first use)."""
        n = self.order
        rows = []
        for x in range(n):
            gx = self.element(x)
            rows.append(tuple(self.index(self.add(gx, self.element(y))) for y in range(n)))
        return tuple(rows)

    def add_idx(self, x: int, y: int) -> int:
        # digit-wise, no carries between coordinates
        out = 0
        for m, s in zip(self.invariant_factors, self.strides):
            out += ((x // s % m + y // s % m) % m) * s
        return out

    def scale_idx(self, n: int, x: int) -> int:
        return sum((n * (x // s % m) % m) * s for m, s in zip(self.invariant_factors, self.strides))

    def neg_idx(self, x: int) -> int:
        return self.scale_idx(-1, x)


def element_order(G: GroupType, g: Sequence[int]) -> int:
    """Least ``n >= 1`` with ``n*g = 0``."""
    g = G.validate(g)
    return reduce(_lcm, (m // math.gcd(m, x) for x, m in zip(g, G.invariant_factors)), 1)


def group_types_of_order(n: int) -> list[GroupType]:
    """All abelian group types of order ``n``, sorted by invariant factors."""
    if n < 1:
        raise ValueError("order must be positive")
    found = set()

    def chains(remaining: int, largest: int) -> Iterator[tuple[int, ...]]:
        # build the chain from the top factor downwards: each factor divides the previous
        if remaining == 1:
            yield ()
            return
        for d in range(2, largest + 1):
            if largest % d == 0 and remaining % d == 0:
                for rest in chains(remaining // d, d):
                    yield rest + (d,)

    for top in range(2, n + 1) if n > 1 else []:
        if n % top == 0:
            for rest in chains(n // top, top):
                found.add(rest + (top,))
    if n == 1:
        found.add(())
    return sorted((GroupType(f) for f in found), key=lambda G: G.invariant_factors)


def group_types_up_to(max_order: int, min_order: int = 1) -> list[GroupType]:
    out = []
    for n in range(min_order, max_order + 1):
        out.extend(group_types_of_order(n))
    return out


# -- subgroups ---------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    """A subgroup stored as a membership bitmask over element indices."""

    group: GroupType
    mask: int

    @cached_property
    def members(self):
        from .sets import ElementSet

        return ElementSet(self.group, self.mask)

    @property
    def order(self) -> int:
        return self.mask.bit_count()

    @property
    def index(self) -> int:
        return self.group.order // self.order

    def __contains__(self, g) -> bool:
        idx = g if isinstance(g, int) else self.group.index(g)
        return bool(self.mask >> idx & 1)

    def __len__(self) -> int:
        return self.order

    @cached_property
    def quotient(self) -> "Quotient":
        return _build_quotient(self)

    @property
    def quotient_type(self) -> GroupType:
        return self.quotient.type

    @property
    def coset_index(self) -> tuple[int, ...]:
        return self.quotient.coset_index

    def sort_key(self) -> tuple:
        return (self.order, _bits(self.mask))


def _bits(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def cyclic_mask(G: GroupType, x: int) -> int:
    """Bitmask of the cyclic subgroup generated by the element with index ``x``."""
    mask, y = 1, x
    while y:
        mask |= 1 << y
        y = G.add_idx(y, x)
    return mask


def _join_cyclic(G: GroupType, mask: int, x: int) -> int:
    """Mask of ``K + <x>`` for a subgroup mask ``K``."""
    from .sets import translate_mask

    out, y = mask, x
    while not mask >> y & 1:
        out |= translate_mask(G, mask, y)
        y = G.add_idx(y, x)
    return out


def subgroup_closure(G: GroupType, A) -> Subgroup:
    """Smallest subgroup containing ``A`` (an ElementSet or iterable of elements)."""
    mask = 1
    for x in _as_indices(G, A):
        if not mask >> x & 1:
            mask = _join_cyclic(G, mask, x)
    return Subgroup(G, mask)


def _as_indices(G: GroupType, A) -> list[int]:
    from .sets import ElementSet

    if isinstance(A, ElementSet):
        if A.group != G:
            raise ValueError("set belongs to a different group")
        return list(A.indices())
    return [a if isinstance(a, int) else G.index(a) for a in A]


def enumerate_subgroups(G: GroupType, bound: int = DEFAULT_SUBGROUP_BOUND) -> list[Subgroup]:
    """All subgroups of ``G``, sorted by size then by member indices."""
    if G.order > bound:
        raise BudgetExceeded(f"order {G.order} exceeds subgroup enumeration bound {bound}")
    seen = {1}
    frontier = [1]
    while frontier:
        nxt = []
        for mask in frontier:
            for x in range(1, G.order):
                if mask >> x & 1:
                    continue
                joined = _join_cyclic(G, mask, x)
                if joined not in seen:
                    seen.add(joined)
                    nxt.append(joined)
        frontier = nxt
    subs = [Subgroup(G, m) for m in seen]
    subs.sort(key=Subgroup.sort_key)
    return subs


# -- quotients ---------------------------------------------------------------


@dataclass(frozen=True)
class Quotient:
    """``G/H`` together with an explicit isomorphism onto ``type``.

    ``coset_index[i]`` numbers the coset of element ``i`` (cosets numbered by
    their least element index); ``coords[c]`` is the quotient-type element
    assigned to coset ``c``.
    """

    subgroup: Subgroup
    type: GroupType
    coset_index: tuple[int, ...]
    coords: tuple[Element, ...]
    representatives: tuple[int, ...] = field(repr=False)

    @property
    def group(self) -> GroupType:
        return self.subgroup.group

    def project(self, g) -> Element:
        idx = g if isinstance(g, int) else self.group.index(g)
        return self.coords[self.coset_index[idx]]

    def project_index(self, g) -> int:
        return self.type.index(self.project(g))

    def project_set(self, A):
        from .sets import ElementSet

        return ElementSet.from_indices(self.type, {self.project_index(i) for i in A.indices()})

    def preimage(self, Abar):
        from .sets import ElementSet

        if Abar.group != self.type:
            raise ValueError("set does not live in the quotient group")
        wanted = Abar.mask
        mask = 0
        for i in range(self.group.order):
            if wanted >> self.project_index(i) & 1:
                mask |= 1 << i
        return ElementSet(self.group, mask)


def quotient(G: GroupType, H: Subgroup) -> Quotient:
    """``G/H`` as an invariant-factor type plus a projection homomorphism."""
    if H.group != G:
        raise ValueError("subgroup belongs to a different group")
    return H.quotient


def _order_mod(G: GroupType, x: int, K: int) -> int:
    n, y = 1, x
    while not K >> y & 1:
        y = G.add_idx(y, x)
        n += 1
    return n


def _build_quotient(H: Subgroup) -> Quotient:
    from .sets import translate_mask

    G = H.group
    n = G.order
    coset_of = [-1] * n
    reps = []
    for x in range(n):
        if coset_of[x] < 0:
            c = len(reps)
            reps.append(x)
            m = translate_mask(G, H.mask, x)
            for i in _bits(m):
                coset_of[i] = c

    # type by repeatedly splitting off a cyclic factor of maximal order
    factors, K = [], H.mask
    full = (1 << n) - 1
    while K != full:
        best, best_x = 0, 0
        for x in reps:
            if not K >> x & 1:
                o = _order_mod(G, x, K)
                if o > best:
                    best, best_x = o, x
        factors.append(best)
        K = _join_cyclic(G, K, best_x)
    qtype = make_group(factors)

    basis = _standard_basis_mod(G, H.mask, qtype, reps)
    coords: list[Element | None] = [None] * len(reps)
    for coeffs in product(*(range(q) for q in qtype.invariant_factors)):
        y = 0
        for c, b in zip(coeffs, basis):
            y = G.add_idx(y, G.scale_idx(c, b))
        coords[coset_of[y]] = tuple(coeffs)
    assert all(c is not None for c in coords)
    return Quotient(H, qtype, tuple(coset_of), tuple(coords), tuple(reps))


def _standard_basis_mod(G: GroupType, H: int, qtype: GroupType, reps: Sequence[int]) -> list[int]:
    """Representatives ``b_1..b_s`` whose cosets form a standard generating set of G/H."""
    targets = qtype.invariant_factors
    s = len(targets)
    chosen: list[int] = [0] * s
    h_order = H.bit_count()

    def extend(i: int, span: int) -> bool:
        if i < 0:
            return True
        want = targets[i]
        size = span.bit_count()
        for x in reps:
            if span >> x & 1 or _order_mod(G, x, H) != want:
                continue
            joined = _join_cyclic(G, span, x)
            if joined.bit_count() == size * want:
                chosen[i] = x
                if extend(i - 1, joined):
                    return True
        return False

    if not extend(s - 1, H):
        raise AssertionError("no standard basis found for quotient")  # unreachable for abelian groups
    assert h_order * qtype.order == G.order
    return chosen


@lru_cache(maxsize=None)
def _coordinate_group_cache(moduli: tuple[int, ...]):
    return _build_direct_sum(moduli)


def _build_direct_sum(moduli: tuple[int, ...]):
    # the external sum Z_{n1}+...+Z_{nk} may not be in invariant-factor form;
    # realise it as a quotient of a group that is, then compose isomorphisms
    target = make_group(moduli)
    if tuple(m for m in moduli if m != 1) == target.invariant_factors:
        return target, None
    raw = _RawGroup(moduli)
    basis = raw.standard_basis(target.invariant_factors)
    table = {}
    for coeffs in product(*(range(q) for q in target.invariant_factors)):
        y = raw.zero
        for c, b in zip(coeffs, basis):
            y = raw.add(y, raw.scale(c, b))
        table[y] = tuple(coeffs)
    return target, table


class _RawGroup:
    """Mixed-radix group on arbitrary moduli; only used to build isomorphisms."""

    def __init__(self, moduli: Sequence[int]):
        self.moduli = tuple(moduli)
        self.zero = (0,) * len(self.moduli)

    def add(self, a, b):
        return tuple((x + y) % m for x, y, m in zip(a, b, self.moduli))

    def scale(self, n, a):
        return tuple(n * x % m for x, m in zip(a, self.moduli))

    def order_of(self, a) -> int:
        return reduce(_lcm, (m // math.gcd(m, x) for x, m in zip(a, self.moduli)), 1)

    def cyclic(self, a) -> frozenset:
        out, y = {self.zero}, a
        while y != self.zero:
            out.add(y)
            y = self.add(y, a)
        return frozenset(out)

    def standard_basis(self, targets: Sequence[int]) -> list:
        elems = list(product(*(range(m) for m in self.moduli)))
        chosen = [None] * len(targets)

        def extend(i: int, span: frozenset) -> bool:
            if i < 0:
                return True
            for x in elems:
                if x in span or self.order_of(x) != targets[i]:
                    continue
                cyc = self.cyclic(x)
                joined = frozenset(self.add(u, v) for u in span for v in cyc)
                if len(joined) == len(span) * targets[i]:
                    chosen[i] = x
                    if extend(i - 1, joined):
                        return True
            return False

        if not extend(len(targets) - 1, frozenset([self.zero])):
            raise AssertionError("no standard basis found")
        return chosen


def direct_sum(*parts: GroupType) -> tuple[GroupType, list]:
    """Canonical type of ``G1 + ... + Gk`` and the coordinate embeddings.

    Returns ``(G, embed)`` where ``embed[j](g)`` maps an element of ``parts[j]``
    to its image in ``G``; the images of distinct parts form an internal
    direct sum.
    """
    moduli = tuple(m for P in parts for m in P.invariant_factors)
    G, table = _coordinate_group_cache(moduli)
    offsets = []
    pos = 0
    for P in parts:
        offsets.append(pos)
        pos += P.rank

    def make_embed(j: int):
        P, off = parts[j], offsets[j]

        def embed(g: Sequence[int]) -> Element:
            g = P.validate(g)
            full = [0] * len(moduli)
            full[off:off + P.rank] = g
            return tuple(full) if table is None else table[tuple(full)]

        return embed

    return G, [make_embed(j) for j in range(len(parts))]


def standard_bases(G: GroupType, limit: int | None = None) -> Iterator[tuple[Element, ...]]:
    """All ordered standard generating sets ``(e_1, ..., e_r)`` of ``G``.

    ``e_i`` has order ``m_i`` and ``G = <e_1> + ... + <e_r>`` internally.
    """
    r = G.rank
    targets = G.invariant_factors
    by_order: dict[int, list[int]] = {}
    for x in range(G.order):
        by_order.setdefault(element_order(G, G.element(x)), []).append(x)
    chosen = [0] * r
    count = 0

    def extend(i: int, span: int) -> Iterator[tuple[Element, ...]]:
        nonlocal count
        if i < 0:
            count += 1
            yield tuple(G.element(c) for c in chosen)
            return
        size = span.bit_count()
        for x in by_order.get(targets[i], ()):
            if span >> x & 1:
                continue
            joined = _join_cyclic(G, span, x)
            if joined.bit_count() == size * targets[i]:
                chosen[i] = x
                yield from extend(i - 1, joined)
                if limit is not None and count >= limit:
                    return

    yield from extend(r - 1, 1)
