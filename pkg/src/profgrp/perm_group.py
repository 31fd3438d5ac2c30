"""Permutations and permutation groups.

Permutations act on the right: ``(a * b)(x) = b(a(x))``, so a word is applied
left to right.  Points are ``0 .. degree-1``.

:class:`PermGroup` builds a base and strong generating set deterministically
(Schreier-Sims with all Schreier generators checked), which gives the order
and membership testing.  Transversals are stored as integer matrices so that
all Schreier generators of a level are formed in a few numpy operations; this
keeps regular actions of degree a few thousand affordable.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

import numpy as np

ELEMENT_LIMIT = 100_000


class Permutation:
    __slots__ = ("a", "_hash")

    def __init__(self, images):
        a = np.asarray(images, dtype=np.int32)
        if a.ndim != 1:
            raise ValueError("permutation images must be one-dimensional")
        if a.size and not np.array_equal(np.sort(a), np.arange(a.size)):
            raise ValueError("images do not form a bijection")
        a.setflags(write=False)
        self.a = a
        self._hash = None

    @classmethod
    def _trusted(cls, a: np.ndarray) -> "Permutation":
        p = cls.__new__(cls)
        a = np.ascontiguousarray(a, dtype=np.int32)
        a.setflags(write=False)
        p.a = a
        p._hash = None
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls._trusted(np.arange(degree, dtype=np.int32))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        a = np.arange(degree, dtype=np.int32)
        seen = set()
        for cyc in cycles:
            cyc = [int(x) for x in cyc]
            for x in cyc:
                if x in seen or not 0 <= x < degree:
                    raise ValueError(f"bad cycle {cyc} for degree {degree}")
                seen.add(x)
            for x, y in zip(cyc, cyc[1:] + cyc[:1]):
                a[x] = y
        return cls._trusted(a)

    @property
    def degree(self) -> int:
        return len(self.a)

    def __call__(self, x: int) -> int:
        return int(self.a[x])

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return Permutation._trusted(other.a[self.a])

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self.a)
        inv[self.a] = np.arange(len(self.a), dtype=np.int32)
        return Permutation._trusted(inv)

    def __invert__(self):
        return self.inverse()

    def __pow__(self, n: int) -> "Permutation":
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        out = Permutation.identity(self.degree)
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def conjugate(self, by: "Permutation") -> "Permutation":
        """``by^-1 * self * by``."""
        return by.inverse() * self * by

    def commutator(self, other: "Permutation") -> "Permutation":
        return self.inverse() * other.inverse() * self * other

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.a, np.arange(len(self.a))))

    def __eq__(self, other):
        return isinstance(other, Permutation) and np.array_equal(self.a, other.a)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.a.tobytes())
        return self._hash

    def cycles(self, include_fixed: bool = False) -> list[list[int]]:
        seen = np.zeros(len(self.a), dtype=bool)
        out = []
        for x in range(len(self.a)):
            if seen[x]:
                continue
            cyc = []
            y = x
            while not seen[y]:
                seen[y] = True
                cyc.append(y)
                y = int(self.a[y])
            if len(cyc) > 1 or include_fixed:
                out.append(cyc)
        return out

    def order(self) -> int:
        n = 1
        for c in self.cycles():
            n = n * len(c) // gcd(n, len(c))
        return n

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.a != np.arange(len(self.a)))

    def extend(self, degree: int, offset: int = 0) -> "Permutation":
        """The same permutation on ``offset + points`` inside a larger set."""
        a = np.arange(degree, dtype=np.int32)
        a[offset : offset + len(self.a)] = self.a + offset
        return Permutation._trusted(a)

    def __repr__(self):
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


def _inverse_rows(U: np.ndarray) -> np.ndarray:
    m, n = U.shape
    inv = np.empty_like(U)
    inv[np.arange(m)[:, None], U] = np.arange(n, dtype=U.dtype)
    return inv


class _Level:
    """One step of the stabiliser chain: a base point, the strong generators
    fixing all earlier base points, and the basic orbit with transversal."""

    def __init__(self, point: int, degree: int):
        self.point = point
        self.degree = degree
        self.gens: list[np.ndarray] = []
        self.rebuild()

    def rebuild(self):
        n = self.degree
        orbit = [self.point]
        pos = np.full(n, -1, dtype=np.int64)
        pos[self.point] = 0
        rows = [np.arange(n, dtype=np.int32)]
        frontier = [0]
        while frontier:
            nxt = []
            for k in frontier:
                for g in self.gens:
                    y = int(g[orbit[k]])
                    if pos[y] < 0:
                        pos[y] = len(orbit)
                        orbit.append(y)
                        # u_y = u_x * g, i.e. apply u_x then g
                        rows.append(g[rows[k]])
                        nxt.append(pos[y])
            frontier = nxt
        self.orbit = np.array(orbit, dtype=np.int64)
        self.pos = pos
        self.U = np.array(rows, dtype=np.int32)
        self.Uinv = _inverse_rows(self.U)

    def schreier_generators(self) -> Iterable[np.ndarray]:
        """All ``u_x * s * u_{x^s}^-1`` in a fixed order, as a stream of blocks."""
        for s in self.gens:
            img = s[self.U]  # rows u_x * s
            targets = self.pos[s[self.orbit]]
            block = self.Uinv[targets[:, None], img]
            yield block


class PermGroup:
    """A permutation group given by generators."""

    def __init__(self, generators: Sequence[Permutation], degree: int | None = None,
                 name: str | None = None):
        gens = list(generators)
        if degree is None:
            if not gens:
                raise ValueError("degree required for a group without generators")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise ValueError("generators of different degrees")
        self.generators: tuple[Permutation, ...] = tuple(gens)
        self.degree = degree
        self.name = name
        self._levels: list[_Level] | None = None
        self._elements = None
        self._lock = threading.Lock()

    # -- stabiliser chain --------------------------------------------------
    def _chain(self) -> list[_Level]:
        if self._levels is None:
            with self._lock:
                if self._levels is None:
                    self._levels = self._schreier_sims()
        return self._levels

    def _sift(self, levels, h: np.ndarray, start: int = 0):
        for i in range(start, len(levels)):
            lev = levels[i]
            k = lev.pos[h[lev.point]]
            if k < 0:
                return h, i
            h = lev.Uinv[k][h]
        return h, len(levels)

    def _schreier_sims(self) -> list[_Level]:
        n = self.degree
        ident = np.arange(n, dtype=np.int32)
        levels: list[_Level] = []

        def add_strong(h: np.ndarray, upto: int):
            # h fixes the base points of levels < upto; it joins every level
            # from 0 .. upto whose earlier base points it fixes
            if upto == len(levels):
                moved = np.flatnonzero(h != ident)
                levels.append(_Level(int(moved[0]), n))
            for j in range(upto + 1):
                if all(h[levels[t].point] == levels[t].point for t in range(j)):
                    levels[j].gens.append(h)
            for j in range(upto + 1):
                levels[j].rebuild()

        for g in self.generators:
            if g.is_identity():
                continue
            h, drop = self._sift(levels, np.array(g.a))
            if not np.array_equal(h, ident):
                add_strong(h, drop)

        i = len(levels) - 1
        while i >= 0:
            restart = None
            for block in levels[i].schreier_generators():
                moved = np.flatnonzero((block != ident).any(axis=1))
                for r in moved:
                    h, drop = self._sift(levels, block[r], i + 1)
                    if not np.array_equal(h, ident):
                        add_strong(h, drop)
                        restart = drop
                        break
                if restart is not None:
                    break
            if restart is None:
                i -= 1
            else:
                i = min(restart, len(levels) - 1)
        return levels

    @property
    def base(self) -> list[int]:
        return [lev.point for lev in self._chain()]

    @property
    def strong_generators(self) -> list[Permutation]:
        seen = {}
        for lev in self._chain():
            for g in lev.gens:
                seen.setdefault(g.tobytes(), g)
        return [Permutation._trusted(g) for g in seen.values()]

    def transversal_sizes(self) -> list[int]:
        return [len(lev.orbit) for lev in self._chain()]

    def order(self) -> int:
        out = 1
        for s in self.transversal_sizes():
            out *= s
        return out

    def __len__(self):
        return self.order()

    def contains(self, g: Permutation) -> bool:
        if g.degree != self.degree:
            return False
        h, drop = self._sift(self._chain(), np.array(g.a))
        return drop == len(self._chain()) and bool(np.array_equal(h, np.arange(self.degree)))

    __contains__ = contains

    def random_element(self, rng: np.random.Generator) -> Permutation:
        """Uniform element: a product of random transversal elements."""
        h = np.arange(self.degree, dtype=np.int32)
        for lev in reversed(self._chain()):
            k = int(rng.integers(len(lev.orbit)))
            h = lev.U[k][h]
        return Permutation._trusted(h)

    # -- element enumeration -------------------------------------------------
    def element_array(self, limit: int = ELEMENT_LIMIT) -> np.ndarray:
        """All elements as rows of an ``(order, degree)`` array, in breadth-first
        order from the identity under right multiplication by the generators."""
        if self._elements is None:
            n = self.order()
            if n > limit:
                raise OverflowError(f"group of order {n} exceeds element limit {limit}")
            E = np.empty((n, self.degree), dtype=np.int32)
            E[0] = np.arange(self.degree)
            index = {E[0].tobytes(): 0}
            count = 1
            table = np.empty((n, len(self.generators)), dtype=np.int64)
            k = 0
            while k < count:
                for j, g in enumerate(self.generators):
                    y = g.a[E[k]]
                    key = y.tobytes()
                    t = index.get(key)
                    if t is None:
                        t = index[key] = count
                        E[count] = y
                        count += 1
                    table[k, j] = t
                k += 1
            assert count == n, "element enumeration disagrees with the group order"
            E.setflags(write=False)
            self._elements = (E, index, table)
        return self._elements[0]

    def elements(self, limit: int = ELEMENT_LIMIT) -> list[Permutation]:
        return [Permutation._trusted(r) for r in self.element_array(limit)]

    def element_index(self) -> dict[bytes, int]:
        self.element_array()
        return self._elements[1]

    def index_of(self, g: Permutation) -> int:
        return self.element_index()[g.a.tobytes()]

    def right_mult_table(self) -> np.ndarray:
        """``T[i, j]`` = index of ``elements[i] * generators[j]``."""
        self.element_array()
        return self._elements[2]

    def inverse_indices(self) -> np.ndarray:
        E = self.element_array()
        inv = _inverse_rows(E)
        index = self.element_index()
        return np.array([index[r.tobytes()] for r in inv], dtype=np.int64)

    # -- structure -----------------------------------------------------------
    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def center(self, limit: int = ELEMENT_LIMIT) -> list[Permutation]:
        E = self.element_array(limit)
        ok = np.ones(len(E), dtype=bool)
        for g in self.generators:
            ok &= (g.a[E] == E[:, g.a]).all(axis=1)
        return [Permutation._trusted(r) for r in E[ok]]

    def subgroup(self, gens: Sequence[Permutation], name: str | None = None) -> "PermGroup":
        return PermGroup(gens, self.degree, name)

    def normal_closure(self, seeds: Sequence[Permutation]) -> "PermGroup":
        """Smallest subgroup normalised by this group and containing ``seeds``."""
        gens = [s for s in seeds if not s.is_identity()]
        H = PermGroup(gens, self.degree)
        queue = list(gens)
        while queue:
            h = queue.pop(0)
            for g in self.generators:
                c = h.conjugate(g)
                if not H.contains(c):
                    gens.append(c)
                    H = PermGroup(gens, self.degree)
                    queue.append(c)
        return H

    def derived_subgroup(self) -> "PermGroup":
        gens = self.generators
        comms = [a.commutator(b) for i, a in enumerate(gens) for b in gens[i + 1:]]
        return self.normal_closure(comms)

    def is_perfect(self) -> bool:
        return self.derived_subgroup().order() == self.order()

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(a * b == b * a for a in gens for b in gens)

    def orbits(self) -> list[list[int]]:
        seen = np.full(self.degree, -1)
        out = []
        for x in range(self.degree):
            if seen[x] >= 0:
                continue
            orb = [x]
            seen[x] = len(out)
            k = 0
            while k < len(orb):
                for g in self.generators:
                    y = int(g.a[orb[k]])
                    if seen[y] < 0:
                        seen[y] = len(out)
                        orb.append(y)
                k += 1
            out.append(sorted(orb))
        return out

    def is_transitive(self) -> bool:
        return len(self.orbits()) == 1

    def estimate_min_generators(self, trials: int = 50, seed: int = 0):
        """Monte Carlo upper bound on the minimal number of generators.

        Tries ``trials`` random ``k``-tuples for ``k = 1, 2, ...`` and returns
        ``(k, witness)`` for the first ``k`` where a tuple generates.  Falls
        back to the given generators, so the bound never exceeds their number.
        """
        if trials < 1:
            raise ValueError("trials must be positive")
        N = self.order()
        if N == 1:
            return 0, ()
        rng = np.random.default_rng(seed)
        for k in range(1, len(self.generators)):
            for _ in range(trials):
                tup = tuple(self.random_element(rng) for _ in range(k))
                if PermGroup(tup, self.degree).order() == N:
                    return k, tup
        return len(self.generators), self.generators

    # -- serialisation ---------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "generators": [g.cycles() for g in self.generators],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PermGroup":
        n = data["degree"]
        return cls([Permutation.from_cycles(c, n) for c in data["generators"]], n)

    def __repr__(self):
        label = self.name or "PermGroup"
        return f"<{label} of degree {self.degree} with {len(self.generators)} generators>"


def direct_product(G: PermGroup, H: PermGroup, name: str | None = None) -> PermGroup:
    """``G x H`` acting on the disjoint union of the two point sets."""
    n = G.degree + H.degree
    gens = [g.extend(n) for g in G.generators] + [h.extend(n, G.degree) for h in H.generators]
    return PermGroup(gens, n, name)


@dataclass(frozen=True)
class GroupFingerprint:
    order: int
    center_order: int
    perfect: bool


def fingerprint(G: PermGroup) -> GroupFingerprint:
    return GroupFingerprint(G.order(), len(G.center()), G.is_perfect())
