"""Explicit extremal sets: standard and near-standard bases, intervals, punctured
cosets, pairing sets, product witnesses, double cosets and quotient lifts.

Builders only check their preconditions; the advertised properties of the
output are checked separately through :func:`validate_witness`, which uses
nothing but the set calculus.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Mapping, Sequence

from .formulas import all_divisors_one_mod_three
from .groups import (
    Element,
    GroupType,
    Subgroup,
    direct_sum,
    element_order,
    make_group,
    standard_bases,
)
from .sets import ElementSet, bounded_generation, diameter, is_aperiodic, length_table, period


class ConstructionError(ValueError):
    """A builder was called outside its preconditions."""


# -- standard and near-standard sets ----------------------------------------


def standard_generating_set(G: GroupType) -> ElementSet:
    """The coordinate unit vectors ``{e_1, ..., e_r}``."""
    units = []
    for i in range(G.rank):
        e = [0] * G.rank
        e[i] = 1
        units.append(tuple(e))
    return ElementSet.from_elements(G, units)


@dataclass(frozen=True)
class NearStandardSpec:
    """A standard basis ``e_1..e_r`` and a partial map ``sigma`` with ``sigma(i) > i``.

    Indices are 1-based, as in ``a_i = e_i + a_sigma(i)``.
    """

    basis: tuple[Element, ...]
    sigma: tuple[tuple[int, int], ...] = ()

    @classmethod
    def make(cls, basis: Sequence[Sequence[int]], sigma: Mapping[int, int] | None = None) -> "NearStandardSpec":
        return cls(tuple(tuple(e) for e in basis), tuple(sorted((sigma or {}).items())))

    @property
    def sigma_map(self) -> dict[int, int]:
        return dict(self.sigma)

    def validate(self, G: GroupType) -> None:
        r = G.rank
        if len(self.basis) != r:
            raise ConstructionError(f"basis has {len(self.basis)} elements, group has rank {r}")
        basis = [G.validate(e) for e in self.basis]
        for e, m in zip(basis, G.invariant_factors):
            if element_order(G, e) != m:
                raise ConstructionError(f"basis element {G.format_element(e)} does not have order {m}")
        span = ElementSet.zero(G)
        for e, m in zip(basis, G.invariant_factors):
            cyc = ElementSet.from_elements(G, [G.scale(k, e) for k in range(m)])
            span = span + cyc
        if not span.is_whole:
            raise ConstructionError("basis does not span the group as a direct sum")
        seen = set()
        for i, j in self.sigma:
            if i in seen:
                raise ConstructionError(f"sigma assigns index {i} twice")
            seen.add(i)
            if not 1 <= i <= r or not i < j <= r:
                raise ConstructionError(f"sigma({i}) = {j} must lie in [{i + 1}, {r}]")


def near_standard_elements(G: GroupType, spec: NearStandardSpec) -> tuple[Element, ...]:
    """``(a_1, ..., a_r)``, built from ``a_r = e_r`` downwards."""
    spec.validate(G)
    r = G.rank
    sigma = spec.sigma_map
    a: list[Element | None] = [None] * r
    for i in range(r, 0, -1):
        e = G.validate(spec.basis[i - 1])
        a[i - 1] = G.add(e, a[sigma[i] - 1]) if i in sigma else e
    return tuple(a)  # type: ignore[arg-type]


def near_standard(G: GroupType, spec: NearStandardSpec) -> ElementSet:
    """``{0, a_1, ..., a_r}``."""
    return ElementSet.from_elements(G, near_standard_elements(G, spec)).with_zero()


@dataclass(frozen=True)
class Decomposition:
    coefficients: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.coefficients)


@lru_cache(maxsize=256)
def _decomposition_table(G: GroupType, spec: NearStandardSpec) -> tuple[tuple[int, ...], ...]:
    a = near_standard_elements(G, spec)
    table: list[tuple[int, ...] | None] = [None] * G.order
    for lam in product(*(range(m) for m in G.invariant_factors)):
        g = G.zero
        for c, x in zip(lam, a):
            g = G.add(g, G.scale(c, x))
        idx = G.index(g)
        if table[idx] is not None:
            raise ConstructionError("coefficient representation is not unique")
        table[idx] = lam
    return tuple(table)  # type: ignore[arg-type]


def decompose_near_standard(
    G: GroupType, spec: NearStandardSpec, A: ElementSet, g: Sequence[int]
) -> Decomposition:
    """The unique ``lambda`` with ``g = sum lambda_i a_i`` and ``0 <= lambda_i < m_i``."""
    if A != near_standard(G, spec):
        raise ConstructionError("set was not produced by near_standard for this spec")
    return Decomposition(_decomposition_table(G, spec)[G.index(g)])


def sigma_maps(r: int) -> Iterator[dict[int, int]]:
    """Every partial map ``i -> sigma(i)`` with ``sigma(i)`` in ``[i+1, r]``."""
    choices = [[None] + list(range(i + 1, r + 1)) for i in range(1, r + 1)]
    for pick in product(*choices):
        yield {i + 1: j for i, j in enumerate(pick) if j is not None}


def _near_standard_mask(G: GroupType, basis: Sequence[int], sigma: Mapping[int, int]) -> int:
    # same recursion as near_standard_elements, on indices of a known-valid basis
    a = [0] * len(basis)
    for i in range(len(basis), 0, -1):
        e = basis[i - 1]
        a[i - 1] = G.add_idx(e, a[sigma[i] - 1]) if i in sigma else e
    mask = 1
    for x in a:
        mask |= 1 << x
    return mask


def near_standard_specs(G: GroupType) -> dict[int, NearStandardSpec]:
    """Bit table of every near-standard set, mapped to the first spec producing it."""
    sigmas = list(sigma_maps(G.rank))
    found: dict[int, NearStandardSpec] = {}
    for basis in standard_bases(G):
        idx = [G.index(e) for e in basis]
        for sig in sigmas:
            mask = _near_standard_mask(G, idx, sig)
            if mask not in found:
                found[mask] = NearStandardSpec.make(basis, sig)
    return found


def near_standard_family(G: GroupType) -> list[ElementSet]:
    """Every near-standard set of ``G`` (deduplicated, canonical order)."""
    return sorted((ElementSet(G, m) for m in near_standard_specs(G)), key=ElementSet.sort_key)


RECOGNIZE_ORDER_BOUND = 12


def recognize_near_standard(A: ElementSet, max_order: int = RECOGNIZE_ORDER_BOUND) -> NearStandardSpec | None:
    """A spec producing ``A_0``, found by search over bases and sigma maps, or None."""
    G = A.group
    if G.order > max_order:
        raise ConstructionError(f"recognition is limited to order <= {max_order}")
    target = A.with_zero()
    if len(target) != G.rank + 1:
        return None
    for basis in standard_bases(G):
        for sig in sigma_maps(G.rank):
            spec = NearStandardSpec.make(basis, sig)
            if near_standard(G, spec) == target:
                return spec
    return None


# -- cyclic intervals, punctured cosets, pairings ----------------------------


def interval_set(m: int, rho: int) -> ElementSet:
    """``{0, 1, ..., k}`` in ``Z_m`` with ``k = floor((m-2)/(rho-1))``."""
    if not 2 <= rho <= m - 1:
        raise ConstructionError(f"rho must lie in [2, {m - 1}]")
    G = make_group([m])
    k = (m - 2) // (rho - 1)
    return ElementSet.from_indices(G, range(k + 1))


def _generates_quotient(H: Subgroup, g: Sequence[int]) -> bool:
    Q = H.quotient
    return element_order(Q.type, Q.project(g)) == Q.type.order


def punctured_coset(G: GroupType, H: Subgroup, g: Sequence[int]) -> ElementSet:
    """``{0} | (g + H) minus {g}``."""
    if H.group != G:
        raise ConstructionError("subgroup belongs to a different group")
    g = G.validate(g)
    if g in H:
        raise ConstructionError("g must lie outside H")
    if not _generates_quotient(H, g):
        raise ConstructionError("g + H must generate G/H")
    if H.order < 3:
        raise ConstructionError("H must have at least 3 elements")
    coset = H.members.translate(g)
    return coset.difference(ElementSet.from_elements(G, [g])).with_zero()


def odd_pairing_set(G: GroupType, g: Sequence[int]) -> ElementSet:
    """One element from each pair ``{x, g - x}`` (the one with smaller index).

    ``h = g/2`` is left out, and 0 is chosen from its pair ``{0, g}``, so
    ``g`` is not in ``2A``.
    """
    n = G.order
    if n % 2 == 0:
        raise ConstructionError("group order must be odd")
    if n < 5:
        raise ConstructionError("group order must be at least 5")
    gi = G.index(G.validate(g))
    if gi == 0:
        raise ConstructionError("g must be non-zero")
    half = G.scale_idx((n + 1) // 2, gi)
    chosen = []
    for x in range(n):
        if x == half:
            continue
        partner = G.add_idx(gi, G.neg_idx(x))
        if x < partner:
            chosen.append(x)
    return ElementSet.from_indices(G, chosen).with_zero()


# -- rho = 4 product witnesses ------------------------------------------------


def is_rho_maximal_set(A: ElementSet, rho: int) -> bool:
    if bounded_generation(A, rho - 1).is_whole:
        return False
    return all(bounded_generation(A.add(x), rho - 1).is_whole for x in range(A.group.order) if x not in A)


def product_4maximal(G1: GroupType, A2: ElementSet) -> ElementSet:
    """``(A_1 + G_2) | ({(m-1)/3} + A_2)`` in ``G_1 + G_2`` with ``A_1 = [0, (m-4)/3]``."""
    if not G1.is_cyclic:
        raise ConstructionError("G1 must be cyclic")
    m = G1.order
    if m % 3 != 1 or m < 4:
        raise ConstructionError(f"G1 = Z_{m} needs m = 1 (mod 3) and m >= 4")
    G2 = A2.group
    if 3 * len(A2) != G2.order - 1:
        raise ConstructionError("A2 must have (|G2| - 1)/3 elements")
    if not is_aperiodic(A2) or not is_rho_maximal_set(A2, 4):
        raise ConstructionError("A2 must be an aperiodic 4-maximal set")
    G, (emb1, emb2) = direct_sum(G1, G2)
    out = []
    for a in range((m - 4) // 3 + 1):
        for h in G2.elements():
            out.append(G.add(emb1((a,)), emb2(h)))
    shift = emb1(((m - 1) // 3,))
    for h in A2:
        out.append(G.add(shift, emb2(h)))
    return ElementSet.from_elements(G, out)


def primary_decomposition(G: GroupType) -> list[int]:
    """Prime-power orders of a cyclic decomposition, ascending."""
    parts = []
    for m in G.invariant_factors:
        p = 2
        while m > 1:
            if m % p == 0:
                q = 1
                while m % p == 0:
                    m //= p
                    q *= p
                parts.append(q)
            p += 1
    return sorted(parts)


def four_maximal_witness(G: GroupType) -> ElementSet:
    """Aperiodic 4-maximal set of size ``(|G|-1)/3`` when every divisor of ``|G|`` is 1 mod 3.

    Cyclic groups use an interval; otherwise the first primary cyclic factor is
    split off and the rest is handled recursively.
    """
    if G.order < 4 or not all_divisors_one_mod_three(G.order):
        raise ConstructionError("every divisor of |G| must be 1 (mod 3), |G| > 1")
    if G.is_cyclic:
        return interval_set(G.order, 4)
    parts = primary_decomposition(G)
    G1 = make_group([parts[0]])
    G2 = make_group(parts[1:])
    A = product_4maximal(G1, four_maximal_witness(G2))
    if A.group != G:
        raise AssertionError("direct sum produced a different type")
    return A


# -- double cosets and lifts ----------------------------------------------------


def double_coset(G: GroupType, H: Subgroup, g: Sequence[int]) -> ElementSet:
    """``H | (g + H)`` for ``G/H`` cyclic and generated by ``g + H``."""
    if H.group != G:
        raise ConstructionError("subgroup belongs to a different group")
    g = G.validate(g)
    if g in H:
        raise ConstructionError("g must lie outside H")
    if not H.quotient_type.is_cyclic or not _generates_quotient(H, g):
        raise ConstructionError("G/H must be cyclic and generated by g + H")
    return H.members | H.members.translate(g)


def lift(G: GroupType, H: Subgroup, A_bar: ElementSet) -> ElementSet:
    """Full preimage of ``A_bar`` under ``G -> G/H``."""
    if H.group != G:
        raise ConstructionError("subgroup belongs to a different group")
    if 0 not in A_bar.indices():
        raise ConstructionError("A_bar must contain 0")
    return H.quotient.preimage(A_bar)


# -- post-hoc validation -------------------------------------------------------


@dataclass(frozen=True)
class WitnessCheck:
    set: ElementSet
    size: int
    diameter: float
    aperiodic: bool
    period_order: int
    rho: int | None = None
    rho_maximal: bool | None = None

    def to_dict(self) -> dict:
        d = self.diameter
        return {
            "set": str(self.set),
            "size": self.size,
            "diameter": d if d != float("inf") else "inf",
            "aperiodic": self.aperiodic,
            "period_order": self.period_order,
            "rho": self.rho,
            "rho_maximal": self.rho_maximal,
        }


def validate_witness(A: ElementSet, rho: int | None = None) -> WitnessCheck:
    """Diameter, period and (optionally) rho-maximality, computed from scratch."""
    P = period(A)
    return WitnessCheck(
        set=A,
        size=len(A),
        diameter=diameter(A),
        aperiodic=P.order == 1,
        period_order=P.order,
        rho=rho,
        rho_maximal=None if rho is None else is_rho_maximal_set(A, rho),
    )


def lengths_match_decomposition(G: GroupType, spec: NearStandardSpec) -> bool:
    """Coefficient totals agree with breadth-first lengths on every element."""
    A = near_standard(G, spec)
    lt = length_table(A)
    return all(decompose_near_standard(G, spec, A, g).total == lt[g] for g in G.elements())
