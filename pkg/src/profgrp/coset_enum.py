"""Todd-Coxeter coset enumeration.

Two strategies are provided.  ``hlt`` scans every relator at every coset and
fills gaps by defining new cosets; before giving up at the coset limit it
compacts the table and runs a lookahead pass (scans without definitions).
``felsch`` defines cosets in order and after each definition scans the
relator cycles that pass through the new entry, so it never defines a coset
that a deduction could have supplied.

Column ``2*i`` of the table is generator ``i`` and column ``2*i + 1`` its
inverse.  Coset 0 is the subgroup.  Cosets are numbered by order of first
definition and dead cosets are squeezed out without reordering, so the output
is reproducible for fixed input.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .perm_group import Permutation, PermGroup
from .presentations import Presentation, Word

DEFAULT_MAX_COSETS = 1_000_000


def default_max_cosets() -> int:
    env = os.environ.get("PROFGRP_MAX_COSETS")
    return int(env) if env else DEFAULT_MAX_COSETS


class CosetOverflow(RuntimeError):
    """The coset limit was reached; the index is undecided (not infinite)."""

    def __init__(self, max_cosets: int):
        super().__init__(f"coset enumeration exceeded {max_cosets} cosets (inconclusive)")
        self.max_cosets = max_cosets


@dataclass
class CosetTable:
    ngens: int
    rows: np.ndarray  # live cosets x 2*ngens, -1 where undefined
    status: str  # "closed" or "overflow"
    strategy: str
    max_cosets: int
    peak_cosets: int
    total_defined: int
    stats: dict = field(default_factory=dict)

    @property
    def live_count(self) -> int:
        return len(self.rows)

    @property
    def closed(self) -> bool:
        return self.status == "closed"

    def index(self) -> int:
        if not self.closed:
            raise CosetOverflow(self.max_cosets)
        return self.live_count

    def to_permutations(self) -> list[Permutation]:
        """Right action of each generator on the cosets."""
        if not self.closed:
            raise ValueError("coset table is not closed")
        return [Permutation(self.rows[:, 2 * i]) for i in range(self.ngens)]

    def to_group(self, name: str | None = None) -> PermGroup:
        return PermGroup(self.to_permutations(), self.live_count, name)


def _columns(w: Word) -> list[int]:
    return [2 * g + (0 if s > 0 else 1) for g, s in w.letters]


class _Enumerator:
    def __init__(self, P: Presentation, subgroup: Sequence[Word], max_cosets: int):
        if max_cosets < 1:
            raise ValueError("max_cosets must be at least 1")
        self.ngens = P.ngens
        self.ncols = 2 * P.ngens
        self.max = max_cosets
        self.rels = [_columns(r) for r in P.relators]
        self.subgroup = [_columns(w) for w in subgroup if len(w)]
        self.table: list[list[int]] = [[-1] * self.ncols]
        self.parent = [0]
        self.nlive = 1
        self.peak = 1
        self.defined = 1
        self.queue: list[int] = []
        self.deductions: list[tuple[int, int]] = []
        self.track = False

    # -- union-find over coset numbers -------------------------------------
    def rep(self, c: int) -> int:
        p = self.parent
        r = c
        while p[r] != r:
            r = p[r]
        while p[c] != r:
            p[c], c = r, p[c]
        return r

    def merge(self, a: int, b: int):
        a, b = self.rep(a), self.rep(b)
        if a == b:
            return
        if b < a:
            a, b = b, a
        self.parent[b] = a
        self.nlive -= 1
        self.queue.append(b)

    def coincidence(self, a: int, b: int):
        T = self.table
        self.queue = []
        self.merge(a, b)
        k = 0
        q = self.queue
        while k < len(q):
            g = q[k]
            k += 1
            row = T[g]
            for x in range(self.ncols):
                d = row[x]
                if d < 0:
                    continue
                xi = x ^ 1
                if T[d][xi] == g:
                    T[d][xi] = -1
                mu = self.rep(g)
                nu = self.rep(d)
                if T[mu][x] >= 0:
                    self.merge(nu, T[mu][x])
                elif T[nu][xi] >= 0:
                    self.merge(mu, T[nu][xi])
                else:
                    T[mu][x] = nu
                    T[nu][xi] = mu
                    if self.track:
                        self.deductions.append((mu, x))

    def alive(self, c: int) -> bool:
        return self.parent[c] == c

    # -- definitions ---------------------------------------------------------
    def room(self) -> bool:
        return len(self.table) < self.max

    def define(self, c: int, x: int) -> int:
        n = len(self.table)
        self.table.append([-1] * self.ncols)
        self.parent.append(n)
        self.table[c][x] = n
        self.table[n][x ^ 1] = c
        self.nlive += 1
        self.defined += 1
        self.peak = max(self.peak, self.nlive)
        if self.track:
            self.deductions.append((c, x))
        return n

    # -- scanning --------------------------------------------------------------
    def scan(self, a: int, w: list[int], fill: bool) -> bool:
        """Trace ``w`` from coset ``a`` in both directions.  Closes a gap of
        length one as a deduction and equal ends as a coincidence.  With
        ``fill`` new cosets are defined to bridge longer gaps.  Returns False
        only when filling needed room that was not available."""
        T = self.table
        f = a
        i = 0
        b = a
        j = len(w) - 1
        while True:
            while i <= j and T[f][w[i]] >= 0:
                f = T[f][w[i]]
                i += 1
            if i > j:
                if f != a:
                    self.coincidence(f, a)
                return True
            while j >= i and T[b][w[j] ^ 1] >= 0:
                b = T[b][w[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return True
            if i == j:
                T[f][w[i]] = b
                T[b][w[i] ^ 1] = f
                if self.track:
                    self.deductions.append((f, w[i]))
                return True
            if not fill:
                return True
            if not self.room():
                return False
            self.define(f, w[i])

    def compact(self):
        """Drop dead cosets keeping the relative order of the live ones."""
        live = [c for c in range(len(self.table)) if self.parent[c] == c]
        if len(live) == len(self.table):
            return list(range(len(self.table)))
        new = [-1] * len(self.table)
        for k, c in enumerate(live):
            new[c] = k
        table = []
        for c in live:
            table.append([new[d] if d >= 0 else -1 for d in self.table[c]])
        self.table = table
        self.parent = list(range(len(live)))
        return new

    # -- strategies ---------------------------------------------------------------
    def run_hlt(self) -> bool:
        for w in self.subgroup + self.rels:
            if not self.scan(0, w, True):
                return False
        a = 0
        while a < len(self.table):
            if self.alive(a):
                for w in self.rels:
                    if not self.alive(a):
                        break
                    if not self.scan(a, w, True):
                        a = self.make_room(a)
                        if a < 0:
                            return False
                        break
                else:
                    for x in range(self.ncols):
                        if not self.alive(a):
                            break
                        if self.table[a][x] < 0:
                            if not self.room():
                                a = self.make_room(a)
                                if a < 0:
                                    return False
                                break
                            self.define(a, x)
                    else:
                        a += 1
                    continue
                continue
            a += 1
        return True

    def make_room(self, a: int) -> int:
        """Compact, then look ahead; returns the renumbered position to resume
        from, or -1 when the table is still full."""
        new = self.compact()
        a = self._renumber(a, new)
        if self.room():
            return a
        for c in range(len(self.table)):
            if not self.alive(c):
                continue
            for w in self.rels:
                if not self.alive(c):
                    break
                self.scan(c, w, False)
        new = self.compact()
        a = self._renumber(a, new)
        return a if self.room() else -1

    @staticmethod
    def _renumber(a: int, new: list[int]) -> int:
        while a < len(new) and new[a] < 0:
            a += 1
        if a >= len(new):
            return max(new) + 1
        return new[a]

    def run_felsch(self) -> bool:
        self.track = True
        # relator cycles grouped by their first column
        starts: list[list[list[int]]] = [[] for _ in range(self.ncols)]
        seen = set()
        for r in self.rels:
            for w in (r, [x ^ 1 for x in reversed(r)]):
                for k in range(len(w)):
                    cyc = tuple(w[k:] + w[:k])
                    if cyc not in seen:
                        seen.add(cyc)
                        starts[cyc[0]].append(list(cyc))
        self.starts = starts
        for w in self.subgroup:
            if not self.scan(0, w, True):
                return False
            self.process_deductions()
        a = 0
        while a < len(self.table):
            if self.alive(a):
                for x in range(self.ncols):
                    if not self.alive(a):
                        break
                    if self.table[a][x] < 0:
                        if not self.room():
                            new = self.compact()
                            a = self._renumber(a, new)
                            if not self.room():
                                return False
                            break
                        self.define(a, x)
                        self.process_deductions()
                else:
                    a += 1
                continue
            a += 1
        return True

    def process_deductions(self):
        while self.deductions:
            c, x = self.deductions.pop()
            if not self.alive(c):
                continue
            for w in self.starts[x]:
                if not self.alive(c):
                    break
                self.scan(c, w, False)
            d = self.table[c][x]
            if d >= 0 and self.alive(d):
                for w in self.starts[x ^ 1]:
                    if not self.alive(d):
                        break
                    self.scan(d, w, False)


def enumerate_cosets(
    P: Presentation,
    subgroup: Sequence[Word] = (),
    max_cosets: int | None = None,
    strategy: str = "hlt",
) -> CosetTable:
    """Enumerate the cosets of ``<subgroup>`` in the group presented by ``P``.

    Returns a closed table, or one with ``status == "overflow"`` when the
    coset limit is reached.
    """
    if max_cosets is None:
        max_cosets = default_max_cosets()
    if strategy not in ("hlt", "felsch"):
        raise ValueError(f"unknown strategy {strategy!r}")
    E = _Enumerator(P, subgroup, max_cosets)
    ok = E.run_hlt() if strategy == "hlt" else E.run_felsch()
    E.compact()
    rows = np.array(E.table, dtype=np.int64).reshape(len(E.table), E.ncols)
    status = "closed" if ok and (rows >= 0).all() else "overflow"
    return CosetTable(
        ngens=P.ngens,
        rows=rows,
        status=status,
        strategy=strategy,
        max_cosets=max_cosets,
        peak_cosets=E.peak,
        total_defined=E.defined,
    )


def group_order(P: Presentation, max_cosets: int | None = None, strategy: str = "hlt") -> int:
    T = enumerate_cosets(P, (), max_cosets, strategy)
    return T.index()
