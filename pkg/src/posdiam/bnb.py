"""Branch-and-bound search for the largest aperiodic rho-maximal generating set.

Used for groups too large for the exhaustive subset table.  Sets are grown
from ``{0}`` by adding elements in increasing index order, so the search visits
sets in lexicographic order of their sorted indices.  A branch is cut as soon as
its (rho-1)-fold generation would cover the group, or when it cannot reach the
best size found so far.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .groups import GroupType, _bits, subgroup_closure
from .sets import ElementSet, _full, is_aperiodic, translate_mask


@dataclass(frozen=True)
class BnbResult:
    lower: int
    upper: int
    exact: int | None
    witness: ElementSet | None
    nodes: int
    complete: bool


class _Timeout(Exception):
    pass


class _Searcher:
    def __init__(self, G: GroupType, rho: int, deadline: float | None, stop_at: int):
        self.G = G
        self.rho = rho
        self.full = _full(G)
        self.deadline = deadline
        self.stop_at = stop_at
        self.best = 0
        self.best_mask: int | None = None
        self.nodes = 0
        self._mult = [[G.scale_idx(i, g) for i in range(rho)] for g in range(G.order)]

    def extend_chain(self, chain: list[int], g: int) -> list[int]:
        # (j)(A u {g})_0 = U_i ((j-i) A_0 + i g)
        G, mult = self.G, self._mult[g]
        out = []
        for j in range(len(chain)):
            acc = 0
            for i in range(j + 1):
                acc |= translate_mask(G, chain[j - i], mult[i])
            out.append(acc)
        return out

    def covers_with(self, chain: list[int], h: int) -> bool:
        G, mult, top = self.G, self._mult[h], len(chain) - 1
        acc = 0
        for i in range(top + 1):
            acc |= translate_mask(G, chain[top - i], mult[i])
            if acc == self.full:
                return True
        return False

    def tick(self) -> None:
        self.nodes += 1
        if self.deadline is not None and not self.nodes & 255 and time.monotonic() > self.deadline:
            raise _Timeout

    def leaf(self, mask: int, chain: list[int], last: int) -> None:
        # cands is empty here: only elements below `last` can still extend the set
        for g in range(1, last):
            if not mask >> g & 1 and not self.covers_with(chain, g):
                return
        size = mask.bit_count()
        if size <= self.best:
            return
        A = ElementSet(self.G, mask)
        if subgroup_closure(self.G, A).order != self.G.order or not is_aperiodic(A):
            return
        self.best, self.best_mask = size, mask

    def dfs(self, mask: int, chain: list[int], last: int, cands: list[int]) -> None:
        self.tick()
        size = mask.bit_count()
        if size + len(cands) <= self.best or self.best >= self.stop_at:
            return
        if not cands:
            self.leaf(mask, chain, last)
            return
        for pos, g in enumerate(cands):
            if size + len(cands) - pos <= self.best or self.best >= self.stop_at:
                return
            new_chain = self.extend_chain(chain, g)
            rest = [h for h in cands[pos + 1:] if not self.covers_with(new_chain, h)]
            self.dfs(mask | 1 << g, new_chain, g, rest)

    def root(self) -> tuple[list[int], list[int]]:
        chain = [1] * self.rho
        cands = [g for g in range(1, self.G.order) if not self.covers_with(chain, g)]
        return chain, cands


def _run_partition(args) -> tuple[int, int | None, bool, int]:
    G, rho, firsts, deadline, stop_at = args
    s = _Searcher(G, rho, deadline, stop_at)
    chain, cands = s.root()
    complete = True
    try:
        if not firsts and not cands:
            s.leaf(1, chain, G.order)
        for g in firsts:
            pos = cands.index(g)
            new_chain = s.extend_chain(chain, g)
            rest = [h for h in cands[pos + 1:] if not s.covers_with(new_chain, h)]
            s.dfs(1 | 1 << g, new_chain, g, rest)
    except _Timeout:
        complete = False
    return s.best, s.best_mask, complete, s.nodes


def prop_bound(order: int, rho: int) -> int:
    return (order - 2) // (rho - 1) + 1


def bnb_t(G: GroupType, rho: int, time_limit: float | None = None, workers: int = 1) -> BnbResult:
    """Largest aperiodic rho-maximal generating set, with bounds if time runs out.

    The search space is split by the first element added after 0; partitions
    are explored independently and merged by (size, lexicographic order), so
    a completed search returns the same witness for any worker count.
    """
    if rho < 2:
        raise ValueError("branch-and-bound search needs rho >= 2")
    deadline = None if time_limit is None else time.monotonic() + time_limit
    upper = prop_bound(G.order, rho)
    probe = _Searcher(G, rho, None, upper)
    _, cands = probe.root()
    parts = [cands[i::workers] for i in range(workers)] if cands else [[]]
    jobs = [(G, rho, part, deadline, upper) for part in parts]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_partition, jobs))
    else:
        results = [_run_partition(j) for j in jobs]
    best, witness = 0, None
    for size, mask, _, _ in results:
        if mask is None:
            continue
        key = (-size, _bits(mask))
        if witness is None or key < (-best, _bits(witness)):
            best, witness = size, mask
    complete = all(r[2] for r in results) or best >= upper
    nodes = sum(r[3] for r in results)
    wset = None if witness is None else ElementSet(G, witness)
    if complete:
        return BnbResult(best, best, best, wset, nodes, True)
    return BnbResult(best, upper, None, wset, nodes, False)
