"""Vectorised diameter table over every subset of a small group.

Row ``k`` describes the subset with bit table ``2k + 1`` (all rows contain 0,
which never changes bounded generation).  Translations are done with byte
lookup tables so a whole column of bit tables is shifted by a group element in
a handful of numpy operations.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .groups import GroupType
from .sets import translate_mask

UNREACHED = np.uint8(255)
"""Diameter code for subsets that do not generate the group."""

MAX_TABLE_ORDER = 28


class SubsetTable:
    def __init__(self, G: GroupType):
        n = G.order
        if n > MAX_TABLE_ORDER:
            raise ValueError(f"subset table for order {n} is too large")
        self.group = G
        self.n = n
        self.dtype = np.uint32
        self.full = self.dtype((1 << n) - 1)
        self.masks = (np.arange(1 << (n - 1), dtype=self.dtype) << 1) | 1
        self.sizes = np.bitwise_count(self.masks).astype(np.int32)
        nchunks = (n + 7) // 8
        self._chunks = nchunks
        self._tables = np.zeros((n, nchunks, 256), dtype=self.dtype)
        for g in range(n):
            for c in range(nchunks):
                for b in range(256):
                    m = (b << (8 * c)) & ((1 << n) - 1)
                    self._tables[g, c, b] = translate_mask(G, m, g)
        self.diam = self._diameters()
        self.aperiodic = self._aperiodic()

    def translate(self, M: np.ndarray, g: int) -> np.ndarray:
        T = self._tables[g]
        out = T[0][M & 0xFF]
        for c in range(1, self._chunks):
            out = out | T[c][(M >> (8 * c)) & 0xFF]
        return out

    def _diameters(self) -> np.ndarray:
        n = self.n
        D = np.full(self.masks.shape, UNREACHED, dtype=np.uint8)
        if n == 1:
            D[:] = 0
            return D
        active = np.arange(self.masks.size)
        P = np.ones(self.masks.size, dtype=self.dtype)
        rho = 0
        while active.size:
            rho += 1
            Pa = P[active]
            Ma = self.masks[active]
            new = Pa.copy()
            for g in range(1, n):
                sel = (Ma >> g) & 1
                new |= self.translate(Pa, g) * sel
            done = new == self.full
            stuck = (new == Pa) & ~done
            D[active[done]] = rho
            P[active] = new
            active = active[~(done | stuck)]
        return D

    def _aperiodic(self) -> np.ndarray:
        ok = np.ones(self.masks.size, dtype=bool)
        for g in range(1, self.n):
            ok &= self.translate(self.masks, g) != self.masks
        return ok

    @property
    def generating(self) -> np.ndarray:
        return self.diam != UNREACHED

    def maximal(self, rho: int) -> np.ndarray:
        """Rows that are rho-maximal (cannot be extended without covering in rho-1 steps)."""
        if rho < 1:
            raise ValueError("rho must be >= 1")
        covers = self.diam <= rho - 1
        ok = ~covers
        for g in range(1, self.n):
            has = ((self.masks >> g) & 1).astype(bool)
            sup = (self.masks | self.dtype(1 << g)) >> 1
            ok &= has | covers[sup]
        return ok


@lru_cache(maxsize=32)
def subset_table(G: GroupType) -> SubsetTable:
    return SubsetTable(G)
