"""Dimensions of H^0, H^1, H^2 of finite permutation groups.

The main route works from a generating tuple ``t_1 .. t_d`` of ``G``.  With
``I`` the augmentation ideal and ``R`` the relation module (the kernel of
``(kG)^d -> I``, ``e_i -> t_i - 1``), applying ``Hom_G(-, M)`` to
``0 -> R -> (kG)^d -> I -> 0`` and using ``Ext^1_G(I, M) = H^2(G, M)`` gives

    h2 = dim Hom_G(R, M) + dim Hom_G(I, M) - d dim M,
    h1 = dim Hom_G(I, M) - dim M + dim M^G.

Reducing the integral sequence mod p stays exact because ``I`` is a free
abelian group.  ``R`` is realised as the cycle space of the Cayley graph
with edges ``h -> t_i h``: fundamental cycles of a breadth-first spanning
tree form a basis, and a cycle's coordinates are its coefficients on the
non-tree edges, so all action matrices are sparse.

:func:`bar_oracle` computes the same numbers from normalised cochains and is
meant for small groups only.  :func:`h2_dimension_shift` is a second check
that reaches larger groups: ``M`` embeds in the free module ``M (x) kG``, so
``H^2(G, M) = H^1(G, Q)`` for the quotient ``Q``, and ``H^1`` is read off a
finite presentation with Fox derivatives.
"""

from __future__ import annotations

from collections import deque
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .field import Field, prime_factors
from .linalg import Echelon, inverse, rank
from .modules import GModule, _bfs_paths, fixed_points, hom_dim, restrict_scalars, trivial_module, wedge2
from .perm_group import PermGroup, Permutation
from .presentations import Presentation, check_homomorphism

BAR_ORACLE_MAX_ORDER = 30
# catalog groups small enough for an exhaustive comparison with the bar oracle
ORACLE_GROUPS = ("cyclic:2", "cyclic:3", "cyclic:4", "elemab:2^2", "cyclic:6", "sym:3", "dihedral:4", "q8",
                 "alt:4", "2alt:4")
SHIFT_MAX_DIM = 3000


@dataclass
class CohomologyReport:
    group: str
    module: str
    field: str
    dim: int
    h0: int
    h1: int
    h2: int
    method: str
    d: int | None = None
    seed: int = 0

    @property
    def nu2(self) -> int:
        return nu2_value(self.h0, self.h1, self.h2, self.dim)

    def to_json(self) -> dict:
        out = asdict(self)
        out["nu2"] = self.nu2
        return out


def nu2_value(h0: int, h1: int, h2: int, dim: int) -> int:
    """``ceil((h2 - h1 + h0) / dim)``."""
    return -(-(h2 - h1 + h0) // dim)


# -- augmentation ideal and relation module ---------------------------------------------


def augmentation_ideal(G: PermGroup, F: Field) -> GModule:
    """Basis ``h - 1`` for the non-identity elements ``h`` in enumeration order."""
    T = G.right_mult_table()
    N = len(T)
    p = F.p
    rows = np.arange(1, N)
    mats = []
    for j in range(T.shape[1]):
        g = T[0, j]
        hg = T[1:, j]
        r, c, v = [], [], []
        keep = hg != 0
        r.append(rows[keep] - 1)
        c.append(hg[keep] - 1)
        v.append(np.ones(keep.sum(), dtype=np.int64))
        if g != 0:
            r.append(rows - 1)
            c.append(np.full(N - 1, g - 1))
            v.append(np.full(N - 1, p - 1, dtype=np.int64))
        A = sp.coo_matrix((np.concatenate(v), (np.concatenate(r), np.concatenate(c))),
                          shape=(N - 1, N - 1)).tocsr()
        A.data %= p
        A.eliminate_zeros()
        mats.append(A)
    return GModule(G, F, N - 1, mats, "augmentation")


def _left_mult_indices(G: PermGroup, t: Permutation) -> np.ndarray:
    E = G.element_array()
    index = G.element_index()
    rows = E[:, t.a]  # (t * h)(x) = h(t(x))
    return np.array([index[r.tobytes()] for r in rows], dtype=np.int64)


def relation_module(G: PermGroup, F: Field, tuple_: Sequence[Permutation] | None = None) -> GModule:
    """The relation module of the free presentation on ``tuple_`` (default:
    the group's generators), of dimension ``|G| (d - 1) + 1``."""
    tup = list(G.generators if tuple_ is None else tuple_)
    d = len(tup)
    N = G.order()
    if PermGroup(tup, G.degree).order() != N:
        raise ValueError("the tuple does not generate the group")
    T = G.right_mult_table()
    L = np.stack([_left_mult_indices(G, t) for t in tup])  # L[k, h] = t_k h
    Linv = np.empty_like(L)
    for k in range(d):
        Linv[k, L[k]] = np.arange(N)
    edge = lambda k, h: k * N + h  # noqa: E731  edge h -> t_k h

    # breadth-first spanning tree over the undirected Cayley graph
    parent_edge = np.full(N, -1, dtype=np.int64)
    parent_sign = np.zeros(N, dtype=np.int64)
    parent = np.full(N, -1, dtype=np.int64)
    depth = np.zeros(N, dtype=np.int64)
    seen = np.zeros(N, dtype=bool)
    seen[0] = True
    tree = np.zeros(d * N, dtype=bool)
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for k in range(d):
            for w, e, s in ((L[k, v], edge(k, v), 1), (Linv[k, v], edge(k, Linv[k, v]), -1)):
                if not seen[w]:
                    seen[w] = True
                    parent[w] = v
                    parent_edge[w] = e
                    parent_sign[w] = s
                    depth[w] = depth[v] + 1
                    tree[e] = True
                    queue.append(w)
    nontree = np.flatnonzero(~tree)
    col_of = np.full(d * N, -1, dtype=np.int64)
    col_of[nontree] = np.arange(len(nontree))

    # fundamental cycle of edge h -> t h: e + path(h) - path(t h), where
    # path(v) is the signed tree path from the identity to v
    cycles = []
    for e in nontree:
        k, h = divmod(int(e), N)
        coeffs = {int(e): 1}
        a, b = h, int(L[k, h])
        while a != b:
            if depth[a] >= depth[b]:
                coeffs[int(parent_edge[a])] = coeffs.get(int(parent_edge[a]), 0) + int(parent_sign[a])
                a = int(parent[a])
            else:
                coeffs[int(parent_edge[b])] = coeffs.get(int(parent_edge[b]), 0) - int(parent_sign[b])
                b = int(parent[b])
        cycles.append(coeffs)

    p = F.p
    mats = []
    for j in range(T.shape[1]):
        r, c, v = [], [], []
        for row, coeffs in enumerate(cycles):
            for x, val in coeffs.items():
                k, h = divmod(x, N)
                col = col_of[k * N + T[h, j]]
                if col >= 0 and val % p:
                    r.append(row)
                    c.append(col)
                    v.append(val % p)
        A = sp.coo_matrix((np.array(v, dtype=np.int64), (r, c)), shape=(len(nontree), len(nontree))).tocsr()
        A.data %= p
        A.eliminate_zeros()
        mats.append(A)
    return GModule(G, F, len(nontree), mats, f"relation(d={d})")


# -- the main route -------------------------------------------------------------------------


def h0(M: GModule) -> int:
    return len(fixed_points(M))


def hom_augmentation(G: PermGroup, M: GModule) -> int:
    return hom_dim(augmentation_ideal(G, M.field), M)


def h1(G: PermGroup, M: GModule) -> int:
    return hom_augmentation(G, M) - M.dim + h0(M)


def h2(G: PermGroup, M: GModule, tuple_: Sequence[Permutation] | None = None) -> int:
    tup = list(G.generators if tuple_ is None else tuple_)
    R = relation_module(G, M.field, tup)
    return hom_dim(R, M) + hom_augmentation(G, M) - len(tup) * M.dim


def cohomology(G: PermGroup, M: GModule, tuple_: Sequence[Permutation] | None = None,
               group_name: str | None = None) -> CohomologyReport:
    tup = list(G.generators if tuple_ is None else tuple_)
    F = M.field
    a0 = h0(M)
    hom_I = hom_augmentation(G, M)
    hom_R = hom_dim(relation_module(G, F, tup), M)
    a1 = hom_I - M.dim + a0
    a2 = hom_R + hom_I - len(tup) * M.dim
    return CohomologyReport(group_name or G.name or "G", M.name, str(F), M.dim, a0, a1, a2,
                            "relation-module", len(tup))


def nu2(G: PermGroup, M: GModule) -> int:
    return cohomology(G, M).nu2


def schur_p_rank(G: PermGroup, p: int) -> int:
    """Rank of the Sylow ``p``-subgroup of the Schur multiplier, as
    ``h2 - h1`` on the trivial module."""
    from .field import GF

    rep = cohomology(G, trivial_module(G, GF(p)))
    return rep.h2 - rep.h1


def schur_min_generators(G: PermGroup) -> int:
    """Minimal number of generators of the Schur multiplier."""
    return max((schur_p_rank(G, p) for p in prime_factors(G.order())), default=0)


def kunneth_h(a: Sequence[int], b: Sequence[int]) -> tuple[int, int, int]:
    """``(h0, h1, h2)`` of ``M1 # M2`` for ``G1 x G2`` from the factors' triples."""
    a0, a1, a2 = a
    b0, b1, b2 = b
    return (a0 * b0, a0 * b1 + a1 * b0, a0 * b2 + a1 * b1 + a2 * b0)


def h2_semidirect_closed_form(H: PermGroup, L: GModule, U: GModule) -> int:
    """``dim Hom_H(L, U) + dim Hom_H(wedge^2 L, U)`` for ``G = L : H`` with
    ``p`` not dividing ``|H|`` and ``U`` inflated from ``H``."""
    p = L.field.p
    if H.order() % p == 0:
        raise ValueError(f"characteristic {p} divides |H| = {H.order()}")
    return hom_dim(L, U) + (hom_dim(wedge2(L), U) if L.dim >= 2 else 0)


# -- bar resolution oracle --------------------------------------------------------------------


def _element_matrices(G: PermGroup, M: GModule) -> list[np.ndarray]:
    F = M.field
    paths = _bfs_paths(G)
    T = G.right_mult_table()
    mats: list = [None] * len(paths)
    mats[0] = np.eye(M.dim, dtype=np.int64)
    A = M.dense_action()
    for i in range(len(paths)):
        for j in range(T.shape[1]):
            t = T[i, j]
            if mats[t] is None:
                mats[t] = F.matmul(mats[i], A[j])
    return mats


def _mult_table(G: PermGroup) -> np.ndarray:
    E = G.element_array()
    index = G.element_index()
    N = len(E)
    out = np.empty((N, N), dtype=np.int64)
    for a in range(N):
        prod = E[:, E[a]]  # row b: (a * b)(x) = b(a(x))
        out[a] = [index[r.tobytes()] for r in prod]
    return out


def bar_oracle(G: PermGroup, M: GModule) -> tuple[int, int, int]:
    """``(h0, h1, h2)`` from normalised cochains; only for ``|G| <= 30``.

    The right module is turned into a left one by ``g . m = m rho(g)^-1``.
    """
    F = M.field
    N = G.order()
    if N > BAR_ORACLE_MAX_ORDER:
        raise OverflowError(f"bar oracle limited to order {BAR_ORACLE_MAX_ORDER}")
    if F.k > 1:
        # every cochain space is k times as large over the prime field
        dims = bar_oracle(G, restrict_scalars(M))
        if any(x % F.k for x in dims):
            raise ArithmeticError("restriction of scalars gave dimensions not divisible by k")
        return tuple(x // F.k for x in dims)
    m = M.dim
    mult = _mult_table(G)
    inv_idx = G.inverse_indices()
    rho = _element_matrices(G, M)
    left = [rho[inv_idx[g]] for g in range(N)]  # g . m = m @ left[g]
    n1 = N - 1
    minus_one = F.neg(1)

    def put(block, rows, cols, vals):
        # field addition at (rows, cols); positions never repeat within one call
        block[rows, cols] = F.add(block[rows, cols], np.broadcast_to(vals, np.shape(rows)))
        return block

    # delta1: f -> (g, h) -> g.f(h) - f(gh) + f(g), rows (g,h,j), cols (a,i)
    E1 = Echelon(F, n1 * m)
    for g in range(1, N):
        block = np.zeros((n1 * m, n1 * m), dtype=np.int64)
        for h in range(1, N):
            r0 = (h - 1) * m
            block[r0 : r0 + m, r0 : r0 + m] = F.add(block[r0 : r0 + m, r0 : r0 + m], left[g].T)
            gh = mult[g, h]
            j = np.arange(m)
            if gh:
                block = put(block, r0 + j, (gh - 1) * m + j, minus_one)
            block = put(block, r0 + j, (g - 1) * m + j, 1)
        E1.add(block)
    rank1 = E1.rank

    # delta2: f -> g.f(h,k) - f(gh,k) + f(g,hk) - f(g,h)
    ncols2 = n1 * n1 * m
    E2 = Echelon(F, ncols2)
    j = np.arange(m)
    for g in range(1, N):
        block = np.zeros((n1 * n1 * m, ncols2), dtype=np.int64)
        for h in range(1, N):
            for k in range(1, N):
                r0 = ((h - 1) * n1 + (k - 1)) * m
                c0 = r0
                block[r0 : r0 + m, c0 : c0 + m] = F.add(block[r0 : r0 + m, c0 : c0 + m], left[g].T)
                gh, hk = mult[g, h], mult[h, k]
                if gh:
                    block = put(block, r0 + j, ((gh - 1) * n1 + (k - 1)) * m + j, minus_one)
                if hk:
                    block = put(block, r0 + j, ((g - 1) * n1 + (hk - 1)) * m + j, 1)
                block = put(block, r0 + j, ((g - 1) * n1 + (h - 1)) * m + j, minus_one)
        E2.add(block)
    z2 = ncols2 - E2.rank
    a0 = h0(M)
    z1 = n1 * m - rank1
    b1 = m - a0
    return a0, z1 - b1, z2 - rank1


def h2_bar_oracle(G: PermGroup, M: GModule) -> int:
    return bar_oracle(G, M)[2]


# -- dimension shifting with Fox derivatives ----------------------------------------------------


def h1_presentation(M: GModule, P: Presentation) -> int:
    """``dim H^1`` from derivations on a presentation whose generators act on
    ``M`` by ``M.action``.  A derivation (``d(ab) = d(a) b + d(b)``) is fixed
    by its generator values and factors through the group iff it kills every
    relator."""
    F = M.field
    m = M.dim
    A = M.dense_action()
    Ainv = [inverse(a, F) for a in A]
    t = len(A)
    blocks = []
    for r in P.relators:
        C = [np.zeros((m, m), dtype=np.int64) for _ in range(t)]
        suffix = np.eye(m, dtype=np.int64)
        for g, s in reversed(r.letters):
            if s > 0:
                C[g] = F.add(C[g], suffix)
                suffix = F.matmul(A[g], suffix)
            else:
                suffix = F.matmul(Ainv[g], suffix)
                C[g] = F.sub(C[g], suffix)
        blocks.append(np.vstack(C))
    z1 = t * m - rank(np.hstack(blocks), F) if blocks else t * m
    return z1 - (m - h0(M))


def coinduced_quotient(G: PermGroup, M: GModule) -> GModule:
    """``(M (x) kG) / M`` with the diagonal action, ``M`` embedded as
    ``m -> m (x) sum(G)``."""
    from .modules import quotient

    F = M.field
    T = G.right_mult_table()
    N = len(T)
    mats = []
    for j, A in enumerate(M.dense_action()):
        Pj = sp.csr_matrix((np.ones(N, dtype=np.int64), (np.arange(N), T[:, j])), shape=(N, N))
        mats.append(sp.kron(sp.csr_matrix(A), Pj, format="csr"))
    free = GModule(G, F, M.dim * N, mats, "free")
    B = np.kron(np.eye(M.dim, dtype=np.int64), np.ones((1, N), dtype=np.int64))
    return quotient(free, B, name="shift")


def h2_dimension_shift(G: PermGroup, M: GModule, P: Presentation) -> int:
    """``dim H^2(G, M)`` as ``dim H^1(G, (M (x) kG) / M)``; ``P`` must present
    ``G`` on its generators."""
    if M.dim * G.order() > SHIFT_MAX_DIM:
        raise OverflowError(f"shifted module would exceed dimension {SHIFT_MAX_DIM}")
    if not check_homomorphism(P, G.generators):
        raise ValueError("the generators do not satisfy the presentation")
    return h1_presentation(coinduced_quotient(G, M), P)
