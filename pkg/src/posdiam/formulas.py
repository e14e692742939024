"""Closed-form values and bounds for the absolute diameter, t_rho and s_rho.

Every value carries a source tag naming the result it comes from.  When more
than one result applies, all of them are evaluated and must agree; the most
specific tag is reported.  Cases without a known formula come back with
``status="unknown"`` rather than a guess.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .groups import GroupType, enumerate_subgroups

TAGS = ("2.1", "2.4i", "2.4ii", "2.4iii", "2.4iv", "2.5", "2.6", "2.7i", "2.7ii", "eq2.1")

# most specific first
_PRIORITY = ("eq2.1", "2.7i", "2.7ii", "2.6", "2.5", "2.4iv", "2.4iii", "2.4ii", "2.4i")

KNOWN, UNKNOWN, OUT_OF_RANGE = "known", "unknown", "out-of-range"


class FormulaConflict(AssertionError):
    """Two applicable closed forms disagree."""


@dataclass(frozen=True)
class FormulaResult:
    value: int | None
    status: str
    source: str | None = None

    def __post_init__(self):
        if self.status == KNOWN and self.source not in TAGS:
            raise ValueError(f"known result needs a tag from {TAGS}, got {self.source!r}")
        if self.status == UNKNOWN and self.value is not None:
            raise ValueError("unknown results carry no value")

    @property
    def known(self) -> bool:
        return self.status in (KNOWN, OUT_OF_RANGE)

    def to_dict(self) -> dict:
        return {"value": self.value, "status": self.status, "source": self.source}


def diam_formula(G: GroupType) -> int:
    """Absolute diameter ``sum(m_i - 1)``."""
    return sum(m - 1 for m in G.invariant_factors)


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def all_divisors_one_mod_three(n: int) -> bool:
    return all(d % 3 == 1 for d in divisors(n))


def is_elementary_2(G: GroupType) -> bool:
    return G.rank > 0 and G.exponent == 2


def eta(G: GroupType) -> int:
    """Largest ``|H|`` with ``exp(G/H) != 2`` and ``|G/H| = 2 (mod 3)``; 0 if none."""
    best = 0
    for H in enumerate_subgroups(G):
        Q = H.quotient_type
        if Q.exponent != 2 and Q.order % 3 == 2:
            best = max(best, H.order)
    return best


def _cyclic_t(m: int, rho: int) -> int:
    return (m - 2) // (rho - 1) + 1


def _cyclic_s(m: int, rho: int) -> int:
    return max((m // d) * _cyclic_t(d, rho) for d in divisors(m) if d >= rho + 1)


def _pick(candidates: list[tuple[str, int]]) -> FormulaResult:
    if not candidates:
        return FormulaResult(None, UNKNOWN)
    values = {v for _, v in candidates}
    if len(values) > 1:
        raise FormulaConflict(f"applicable closed forms disagree: {candidates}")
    tags = [t for t, _ in candidates]
    tag = min(tags, key=_PRIORITY.index)
    return FormulaResult(values.pop(), KNOWN, tag)


def t_formula(G: GroupType, rho: int) -> FormulaResult:
    """Closed-form ``t_rho(G)`` where one is known."""
    D = diam_formula(G)
    if not 1 <= rho <= D:
        return FormulaResult(0, OUT_OF_RANGE)
    n = G.order
    cands: list[tuple[str, int]] = []
    if rho == 1:
        cands.append(("2.4i", 0))
    if G.is_cyclic and 2 <= rho <= n - 1:
        cands.append(("2.5", _cyclic_t(n, rho)))
    if rho == D and rho >= 2:
        cands.append(("2.4iv", G.rank + 1))
    if rho == 2:
        cands.append(("2.4ii", n - 1))
    if rho == 3:
        cands.append(("2.4iii", n // 2))
    if rho == 4:
        if n % 3 == 0:
            cands.append(("2.7i", n // 3))
        elif all_divisors_one_mod_three(n):
            cands.append(("2.7i", (n - 1) // 3))
        if is_elementary_2(G) and G.rank >= 4:
            cands.append(("eq2.1", 2 ** (G.rank - 2) + 1))
    return _pick(cands)


def s_formula(G: GroupType, rho: int) -> FormulaResult:
    """Closed-form ``s_rho(G)`` where one is known."""
    D = diam_formula(G)
    if not 1 <= rho <= D:
        return FormulaResult(0, OUT_OF_RANGE)
    n = G.order
    cands: list[tuple[str, int]] = []
    if rho == 1:
        cands.append(("2.4i", n))
    if G.is_cyclic and 2 <= rho <= n - 1:
        cands.append(("2.5", _cyclic_s(n, rho)))
    if rho == D and rho >= 2:
        cands.append(("2.4iv", G.rank + 1))
    if rho == 2:
        cands.append(("2.4ii", n - 1))
    if rho == 3:
        cands.append(("2.4iii", n // 2))
    if rho == 4:
        if is_elementary_2(G):
            if G.rank >= 4:
                cands.append(("eq2.1", 5 * 2 ** (G.rank - 4)))
        else:
            e = eta(G)
            if e:
                num = n + e
            elif n % 3 == 0:
                num = n
            else:
                num = n - 1
            if num % 3:
                raise FormulaConflict(f"non-integral s_4 value {num}/3 for {G}")
            cands.append(("2.7ii", num // 3))
    return _pick(cands)


def t_upper_bound(G: GroupType, rho: int) -> int:
    """``floor((|G|-2)/(rho-1)) + 1``, valid for rho >= 2."""
    if rho < 2:
        raise ValueError("the t bound needs rho >= 2")
    return (G.order - 2) // (rho - 1) + 1


def s_upper_bound(G: GroupType, rho: int) -> Fraction:
    """``2|G|/(rho+1)`` as an exact fraction, valid for rho >= 4."""
    if rho < 4:
        raise ValueError("the s bound needs rho >= 4")
    return Fraction(2 * G.order, rho + 1)


def formula_t_provider(Q: GroupType, rho: int) -> int | None:
    res = t_formula(Q, rho)
    return res.value if res.known else None


def s_from_quotients(
    G: GroupType, rho: int, t_provider: Callable[[GroupType, int], int | None]
) -> int | None:
    """``max |H| * t_rho(G/H)`` over proper subgroups ``H``.

    ``t_provider`` supplies the t values (closed form or oracle).  Returns
    ``None`` when the provider reports an unknown value for some quotient.
    """
    if rho < 2:
        raise ValueError("the subgroup recursion needs rho >= 2")
    best = 0
    for H in enumerate_subgroups(G):
        if H.order == G.order:
            continue
        t = t_provider(H.quotient_type, rho)
        if t is None:
            return None
        best = max(best, H.order * t)
    return best
