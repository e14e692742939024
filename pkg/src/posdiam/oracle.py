"""Ground-truth values by exhaustive search.

Groups up to ``SearchBudget.exhaustive_order_bound`` are handled by the
vectorised subset table in :mod:`posdiam._kernel`; larger groups (up to
``bnb_order_bound``, and only when ``allow_bnb`` is set) go through the
branch-and-bound tier, which may return bounds instead of an exact value.
None of the closed formulas are consulted here.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import bnb
from ._kernel import UNREACHED, subset_table
from .groups import BudgetExceeded, Element, GroupType, enumerate_subgroups
from .sets import ElementSet, bounded_generation


@dataclass
class SearchBudget:
    exhaustive_order_bound: int = 16
    bnb_order_bound: int = 64
    time_limit: float | None = None
    workers: int = 1
    allow_bnb: bool = False
    _deadline: float | None = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.exhaustive_order_bound > self.bnb_order_bound:
            raise ValueError("exhaustive bound must not exceed the branch-and-bound bound")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.time_limit is not None:
            self._deadline = time.monotonic() + self.time_limit

    def remaining(self) -> float | None:
        if self._deadline is None:
            return None
        return max(0.0, self._deadline - time.monotonic())

    def check(self, what: str = "search") -> None:
        if self._deadline is not None and time.monotonic() > self._deadline:
            raise BudgetExceeded(f"time budget exhausted during {what}")

    def exhaustive(self, G: GroupType) -> bool:
        return G.order <= self.exhaustive_order_bound

    def require_exhaustive(self, G: GroupType, what: str) -> None:
        if not self.exhaustive(G):
            raise BudgetExceeded(
                f"{what}: order {G.order} exceeds exhaustive bound {self.exhaustive_order_bound}"
            )
        self.check(what)


DEFAULT_BUDGET = SearchBudget()


@dataclass(frozen=True)
class MaximalSetRecord:
    set: ElementSet
    rho: int
    aperiodic: bool
    generating: bool
    certificate: Element | None

    def to_line(self) -> str:
        G = self.set.group
        cert = "-" if self.certificate is None else G.format_element(self.certificate)
        return (
            f"group={G} rho={self.rho} set={self.set} aperiodic={int(self.aperiodic)} "
            f"generating={int(self.generating)} certificate={cert}"
        )


def _row_sets(G: GroupType, rows: np.ndarray) -> list[ElementSet]:
    table = subset_table(G)
    return [ElementSet(G, int(m)) for m in table.masks[rows]]


def is_rho_maximal(A: ElementSet, rho: int) -> bool:
    """True iff <A>_{rho-1} != G and adding any missing element makes it G."""
    if rho < 1:
        raise ValueError("rho must be >= 1")
    if bounded_generation(A, rho - 1).is_whole:
        return False
    return all(
        bounded_generation(A.add(g), rho - 1).is_whole
        for g in range(A.group.order)
        if g not in A
    )


def _certificate(A: ElementSet, rho: int) -> Element | None:
    missing = bounded_generation(A, rho - 1).complement()
    idx = missing.indices()
    return A.group.element(idx[0]) if idx else None


def enumerate_rho_maximal(
    G: GroupType, rho: int, aperiodic_only: bool = False, budget: SearchBudget = DEFAULT_BUDGET
) -> list[MaximalSetRecord]:
    """All rho-maximal subsets of ``G`` in canonical (lexicographic) order.

    Every rho-maximal set contains 0, so only subsets containing 0 are scanned.
    """
    if rho < 1:
        raise ValueError("rho must be >= 1")
    budget.require_exhaustive(G, "enumerate_rho_maximal")
    table = subset_table(G)
    sel = table.maximal(rho)
    if aperiodic_only:
        sel &= table.aperiodic
    rows = np.flatnonzero(sel)
    records = []
    for A, row in zip(_row_sets(G, rows), rows):
        records.append(
            MaximalSetRecord(
                set=A,
                rho=rho,
                aperiodic=bool(table.aperiodic[row]),
                generating=bool(table.diam[row] != UNREACHED),
                certificate=_certificate(A, rho),
            )
        )
    records.sort(key=lambda r: r.set.sort_key())
    return records


@dataclass(frozen=True)
class TSearch:
    """Outcome of a t-search: exact value, or a bound pair from an unfinished search."""

    lower: int
    upper: int
    exact: int | None
    tier: str
    witness: ElementSet | None = None


def t_search(G: GroupType, rho: int, budget: SearchBudget = DEFAULT_BUDGET) -> TSearch:
    if rho < 1:
        return TSearch(0, 0, 0, "definition")
    if budget.exhaustive(G):
        budget.check("t_oracle")
        table = subset_table(G)
        sel = table.maximal(rho) & table.aperiodic & table.generating
        rows = np.flatnonzero(sel)
        if not rows.size:
            return TSearch(0, 0, 0, "exhaustive")
        sizes = table.sizes[rows]
        best = int(sizes.max())
        first = rows[np.flatnonzero(sizes == best)[0]]
        return TSearch(best, best, best, "exhaustive", ElementSet(G, int(table.masks[first])))
    if rho == 1:
        # the only 1-maximal set is G itself, which is periodic
        return TSearch(0, 0, 0, "definition")
    if budget.allow_bnb and G.order <= budget.bnb_order_bound:
        res = bnb.bnb_t(G, rho, time_limit=budget.remaining(), workers=budget.workers)
        return TSearch(res.lower, res.upper, res.exact, "bnb", res.witness)
    raise BudgetExceeded(f"t_oracle: order {G.order} is beyond the enabled search tiers")


def t_oracle(G: GroupType, rho: int, budget: SearchBudget = DEFAULT_BUDGET) -> int:
    """Largest aperiodic rho-maximal generating set of ``G`` (0 if none)."""
    res = t_search(G, rho, budget)
    if res.exact is None:
        raise BudgetExceeded("t_oracle did not finish", lower=res.lower, upper=res.upper)
    return res.exact


def t_oracle_simplified(G: GroupType, rho: int, budget: SearchBudget = DEFAULT_BUDGET) -> int:
    """Largest aperiodic rho-maximal set, generating or not, for rho in [1, diam+(G)]; else 0."""
    budget.require_exhaustive(G, "t_oracle_simplified")
    if not 1 <= rho <= absolute_diameter_oracle(G, budget):
        return 0
    table = subset_table(G)
    sel = table.maximal(rho) & table.aperiodic
    return int(table.sizes[sel].max(initial=0))


def absolute_diameter_oracle(G: GroupType, budget: SearchBudget = DEFAULT_BUDGET) -> int:
    """Largest diameter over all generating sets."""
    budget.require_exhaustive(G, "absolute_diameter_oracle")
    table = subset_table(G)
    return int(table.diam[table.generating].max())


def s_direct(G: GroupType, rho: int, budget: SearchBudget = DEFAULT_BUDGET) -> int:
    budget.require_exhaustive(G, "s_oracle")
    table = subset_table(G)
    sel = table.generating & (table.diam >= rho)
    return int(table.sizes[sel].max(initial=0))


def s_from_subgroups(G: GroupType, rho: int, budget: SearchBudget = DEFAULT_BUDGET) -> tuple[int, int]:
    """``max |H| t_rho(G/H)`` over proper subgroups, as a (lower, upper) pair."""
    lo = hi = 0
    for H in enumerate_subgroups(G):
        if H.order == G.order:
            continue
        res = t_search(H.quotient_type, rho, budget)
        lo = max(lo, H.order * res.lower)
        hi = max(hi, H.order * res.upper)
    return lo, hi


def s_oracle(
    G: GroupType, rho: int, budget: SearchBudget = DEFAULT_BUDGET, method: str = "auto"
) -> int:
    """Largest generating set with diameter at least ``rho``.

    ``method`` is ``"direct"`` (scan every subset), ``"subgroups"`` (maximise
    ``|H| t_rho(G/H)``) or ``"auto"`` (direct when the exhaustive tier applies).
    """
    if rho < 1:
        raise ValueError("rho must be >= 1")
    if method not in ("auto", "direct", "subgroups"):
        raise ValueError(f"unknown method {method!r}")
    if method == "direct" or (method == "auto" and budget.exhaustive(G)):
        return s_direct(G, rho, budget)
    if rho == 1:
        # G itself has diameter 1 whenever G is non-trivial
        return G.order if G.order > 1 else 0
    lo, hi = s_from_subgroups(G, rho, budget)
    if lo != hi:
        raise BudgetExceeded("s_oracle did not finish", lower=lo, upper=hi)
    return lo


def enumerate_extremal_generating_sets(
    G: GroupType, budget: SearchBudget = DEFAULT_BUDGET
) -> list[ElementSet]:
    """Every ``A_0`` whose diameter equals the absolute diameter, canonical order.

    The whole subset table is scanned; no size restriction is assumed.
    """
    budget.require_exhaustive(G, "enumerate_extremal_generating_sets")
    table = subset_table(G)
    top = absolute_diameter_oracle(G, budget)
    rows = np.flatnonzero(table.diam == top)
    return sorted(_row_sets(G, rows), key=ElementSet.sort_key)


def sets_with(G: GroupType, predicate, budget: SearchBudget = DEFAULT_BUDGET) -> list[ElementSet]:
    """Subsets containing 0 selected by ``predicate(table) -> bool array``."""
    budget.require_exhaustive(G, "sets_with")
    table = subset_table(G)
    return sorted(_row_sets(G, np.flatnonzero(predicate(table))), key=ElementSet.sort_key)


__all__ = [
    "SearchBudget",
    "MaximalSetRecord",
    "TSearch",
    "is_rho_maximal",
    "enumerate_rho_maximal",
    "t_search",
    "t_oracle",
    "t_oracle_simplified",
    "s_oracle",
    "s_direct",
    "s_from_subgroups",
    "absolute_diameter_oracle",
    "enumerate_extremal_generating_sets",
    "sets_with",
]
