"""Finite-field representations of permutation groups.

A :class:`GModule` stores one matrix per generator of its group, acting on row
vectors from the right: ``v -> v @ A_g``, matching the right action of
:mod:`profgrp.perm_group`.  Matrices are dense ``int64`` arrays of encoded
field elements, or scipy CSR matrices for the large permutation-like modules
(regular module, augmentation ideal, relation module); sparse matrices only
ever hold prime-subfield entries.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .field import GF, Field
from .linalg import Echelon, inverse, kernel, left_kernel
from .perm_group import PermGroup, Permutation


def _dense(A) -> np.ndarray:
    if sp.issparse(A):
        return np.asarray(A.toarray(), dtype=np.int64)
    return np.asarray(A, dtype=np.int64)


class GModule:
    """A right ``F G``-module given by generator matrices."""

    def __init__(self, group: PermGroup | None, field: Field, dim: int,
                 action: Sequence, name: str = "M"):
        self.group = group
        self.field = field
        self.dim = int(dim)
        mats = []
        for A in action:
            if sp.issparse(A):
                A = sp.csr_matrix(A, dtype=np.int64)
            else:
                A = np.asarray(A, dtype=np.int64).reshape(self.dim, self.dim)
            if A.shape != (self.dim, self.dim):
                raise ValueError("action matrix has the wrong shape")
            mats.append(A)
        if group is not None and len(mats) != len(group.generators):
            raise ValueError("need one matrix per group generator")
        self.action = tuple(mats)
        self.name = name
        self._dense = None

    @property
    def ngens(self) -> int:
        return len(self.action)

    def dense_action(self) -> list[np.ndarray]:
        if self._dense is None:
            self._dense = [_dense(A) for A in self.action]
        return self._dense

    def act(self, V, j: int) -> np.ndarray:
        """Rows of ``V`` times generator ``j``."""
        return self.field.matmul(np.atleast_2d(V), self.action[j])

    def matrix_of_word(self, letters) -> np.ndarray:
        """Matrix of a word given as ``(generator, +-1)`` letters."""
        F = self.field
        out = np.eye(self.dim, dtype=np.int64)
        inv: dict[int, np.ndarray] = {}
        for g, s in letters:
            A = self.dense_action()[g]
            if s < 0:
                if g not in inv:
                    inv[g] = inverse(A, F)
                A = inv[g]
            out = F.matmul(out, A)
        return out

    def matrix_of(self, perm: Permutation) -> np.ndarray:
        """Matrix of a group element, found by tracing it through the
        breadth-first element enumeration of the group."""
        G = self.group
        if G is None:
            raise ValueError("module has no group attached")
        idx = G.index_of(perm)
        path = _bfs_paths(G)
        letters = [(j, 1) for j in path[idx]]
        return self.matrix_of_word(letters)

    def is_valid(self) -> bool:
        """Every generator matrix is invertible."""
        from .linalg import rank

        return all(rank(A, self.field) == self.dim for A in self.dense_action())

    def content_key(self) -> str:
        h = hashlib.sha256()
        h.update(f"{self.field.p},{self.field.k},{self.dim}".encode())
        for A in self.dense_action():
            h.update(np.ascontiguousarray(A, dtype=np.int64).tobytes())
        return h.hexdigest()

    def __repr__(self):
        return f"<GModule {self.name} dim {self.dim} over {self.field}>"


def _bfs_paths(G: PermGroup) -> list[tuple[int, ...]]:
    """Generator words (as index tuples) reaching each element in BFS order."""
    cached = getattr(G, "_word_paths", None)
    if cached is not None:
        return cached
    T = G.right_mult_table()
    paths: list = [None] * len(T)
    paths[0] = ()
    for i in range(len(T)):
        for j in range(T.shape[1]):
            t = T[i, j]
            if paths[t] is None:
                paths[t] = paths[i] + (j,)
    G._word_paths = paths
    return paths


# -- constructions -------------------------------------------------------------


def trivial_module(G: PermGroup, F: Field) -> GModule:
    return GModule(G, F, 1, [np.ones((1, 1), dtype=np.int64)] * len(G.generators), "trivial")


def permutation_module(G: PermGroup, F: Field, perms: Sequence[Permutation] | None = None,
                       sparse: bool = False, name: str = "perm") -> GModule:
    """Basis vector ``e_x`` goes to ``e_{x g}``."""
    perms = G.generators if perms is None else perms
    n = perms[0].degree if perms else G.degree
    mats = []
    for g in perms:
        if sparse:
            A = sp.csr_matrix((np.ones(n, dtype=np.int64), (np.arange(n), g.a)), shape=(n, n))
        else:
            A = np.zeros((n, n), dtype=np.int64)
            A[np.arange(n), g.a] = 1
        mats.append(A)
    return GModule(G, F, n, mats, name)


def regular_module(G: PermGroup, F: Field) -> GModule:
    T = G.right_mult_table()
    N = len(T)
    mats = [
        sp.csr_matrix((np.ones(N, dtype=np.int64), (np.arange(N), T[:, j])), shape=(N, N))
        for j in range(T.shape[1])
    ]
    return GModule(G, F, N, mats, "regular")


def dual(M: GModule) -> GModule:
    F = M.field
    mats = [inverse(A, F).T.copy() for A in M.dense_action()]
    return GModule(M.group, F, M.dim, mats, f"dual({M.name})")


def _check_compatible(M: GModule, N: GModule):
    if M.field != N.field:
        raise ValueError("modules over different fields")
    if M.ngens != N.ngens or (M.group is not None and N.group is not None and M.group is not N.group
                               and M.group.generators != N.group.generators):
        raise ValueError("modules for different groups")


def tensor(M: GModule, N: GModule) -> GModule:
    _check_compatible(M, N)
    F = M.field
    mats = []
    for A, B in zip(M.dense_action(), N.dense_action()):
        if F.k == 1:
            K = np.kron(A, B) % F.p
        else:
            K = F.mul(A[:, None, :, None], B[None, :, None, :]).reshape(M.dim * N.dim, M.dim * N.dim)
        mats.append(K)
    return GModule(M.group, F, M.dim * N.dim, mats, f"{M.name}*{N.name}")


def wedge2(M: GModule) -> GModule:
    """Exterior square on the basis ``e_i ^ e_j`` with ``i < j``."""
    F = M.field
    m = M.dim
    I, J = np.triu_indices(m, 1)
    mats = []
    for A in M.dense_action():
        # (e_i ^ e_j) A = sum_{k<l} (A_ik A_jl - A_il A_jk) e_k ^ e_l
        P = F.mul(A[I][:, I], A[J][:, J])
        Q = F.mul(A[I][:, J], A[J][:, I])
        mats.append(F.sub(P, Q))
    return GModule(M.group, F, len(I), mats, f"wedge2({M.name})")


def direct_sum(M: GModule, N: GModule) -> GModule:
    _check_compatible(M, N)
    mats = []
    for A, B in zip(M.dense_action(), N.dense_action()):
        C = np.zeros((M.dim + N.dim,) * 2, dtype=np.int64)
        C[: M.dim, : M.dim] = A
        C[M.dim :, M.dim :] = B
        mats.append(C)
    return GModule(M.group, M.field, M.dim + N.dim, mats, f"{M.name}+{N.name}")


def outer_tensor(M1: GModule, M2: GModule, G: PermGroup | None = None) -> GModule:
    """``M1 # M2`` for the direct product whose generators are those of the
    first factor followed by those of the second."""
    if M1.field != M2.field:
        raise ValueError("modules over different fields")
    F = M1.field
    I1 = np.eye(M1.dim, dtype=np.int64)
    I2 = np.eye(M2.dim, dtype=np.int64)
    mats = [np.kron(A, I2) for A in M1.dense_action()] + [np.kron(I1, B) for B in M2.dense_action()]
    # kron with an identity only copies entries, so no field reduction needed
    return GModule(G, F, M1.dim * M2.dim, mats, f"{M1.name}#{M2.name}")


def with_group(M: GModule, G: PermGroup, action: Sequence | None = None) -> GModule:
    """Re-attach ``M`` (or explicit matrices) to another group with the same
    number of generators, e.g. after inflation along a quotient map."""
    return GModule(G, M.field, M.dim, M.action if action is None else action, M.name)


def inflate(M: GModule, G: PermGroup, images: Sequence[Permutation], name: str | None = None) -> GModule:
    """Pull ``M`` back along the homomorphism sending ``G.generators[j]`` to
    ``images[j]`` (an element of ``M.group``)."""
    if len(images) != len(G.generators):
        raise ValueError("need one image per generator")
    return GModule(G, M.field, M.dim, [M.matrix_of(h) for h in images], name or M.name)


def change_field(M: GModule, F: Field) -> GModule:
    """Extend scalars from a prime field to an extension of it."""
    if M.field.k != 1 or F.p != M.field.p:
        raise ValueError("can only extend scalars from the prime field")
    return GModule(M.group, F, M.dim, M.action, M.name)


def restrict_scalars(M: GModule) -> GModule:
    """View an ``F_{p^k}``-module of dimension ``m`` as an ``F_p``-module of
    dimension ``mk`` using the basis ``1, t, .., t^(k-1)``."""
    F = M.field
    if F.k == 1:
        return M
    k, q = F.k, F.q
    powers = [F.element([0] * i + [1]) for i in range(k)]
    # table[a] is the matrix of x -> x*a on digit row vectors
    table = np.stack([F.digits(F.mul(e, np.arange(q))) for e in powers])  # (k, k, q)
    table = np.moveaxis(table, -1, 0)
    m = M.dim
    mats = [table[A].transpose(0, 2, 1, 3).reshape(m * k, m * k) for A in M.dense_action()]
    return GModule(M.group, GF(F.p), m * k, mats, f"res:{M.name}")


# -- subspaces -----------------------------------------------------------------


def spin(M: GModule, vectors, echelon: Echelon | None = None) -> Echelon:
    """Echelon basis of the submodule generated by the rows of ``vectors``."""
    E = echelon or Echelon(M.field, M.dim)
    E.add(np.atleast_2d(vectors))
    queue = E.last_new
    while len(queue) and not E.full:
        images = np.vstack([M.act(queue, j) for j in range(M.ngens)])
        E.add(images)
        queue = E.last_new
    return E


def submodule_basis(M: GModule, vectors) -> np.ndarray:
    return spin(M, vectors).basis()


def is_submodule(M: GModule, basis) -> bool:
    E = Echelon(M.field, M.dim)
    E.add(basis)
    return all(E.contains(M.act(basis, j)).all() for j in range(M.ngens))


def _ech(M: GModule, basis) -> tuple[np.ndarray, np.ndarray]:
    E = Echelon(M.field, M.dim)
    E.add(basis)
    return E.sorted()


def submodule(M: GModule, basis, name: str | None = None) -> GModule:
    """Action on an invariant subspace, in the echelon basis of that subspace."""
    B, piv = _ech(M, basis)
    mats = [M.act(B, j)[:, piv] for j in range(M.ngens)]
    return GModule(M.group, M.field, len(B), mats, name or f"sub({M.name})")


def quotient(M: GModule, basis, name: str | None = None) -> GModule:
    """Action on ``M / W``; the quotient basis is the images of the standard
    vectors off the pivot columns of ``W``."""
    F = M.field
    B, piv = _ech(M, basis)
    free = np.setdiff1d(np.arange(M.dim), piv)
    E = Echelon(F, M.dim)
    E.add(B)
    I = np.eye(M.dim, dtype=np.int64)[free]
    mats = []
    for j in range(M.ngens):
        img = E.reduce(M.act(I, j)) if len(B) else M.act(I, j)
        mats.append(img[:, free])
    return GModule(M.group, F, len(free), mats, name or f"quot({M.name})")


def fixed_points(M: GModule) -> np.ndarray:
    """Basis of ``{v : v A_g = v for all generators g}``."""
    F = M.field
    if M.dim == 0:
        return np.zeros((0, 0), dtype=np.int64)
    I = np.eye(M.dim, dtype=np.int64)
    stacked = np.hstack([F.sub(A, I) for A in M.dense_action()]) if M.ngens else np.zeros((M.dim, 0), dtype=np.int64)
    if stacked.shape[1] == 0:
        return I
    return left_kernel(stacked, F)


# -- equivariant maps ------------------------------------------------------------


@dataclass
class HomSpace:
    dim: int
    basis: list[np.ndarray] | None  # dim M x dim N matrices X with A_g X = X B_g


def hom_space(M: GModule, N: GModule, want_basis: bool = True) -> HomSpace:
    """``Hom_G(M, N)``.

    ``M`` is spun up from standard basis vectors while carrying, for every
    vector ``v``, the image ``phi(v)`` as a linear function of unknown images
    of the vectors spun from.  A vector that reduces to zero forces its
    carried image to vanish, which gives linear conditions on the unknowns.
    The work is dominated by one echelon computation of width ``dim M``, so
    large sparse sources such as relation modules are cheap as long as ``N``
    is small.
    """
    _check_compatible(M, N)
    F = M.field
    m, n = M.dim, N.dim
    if m == 0 or n == 0:
        return HomSpace(0, [] if want_basis else None)
    B = N.dense_action()
    nn = n * n
    E = Echelon(F, m, extra=0)
    conditions: list[np.ndarray] = []
    t = 0
    while not E.full:
        piv = set(E.pivots.tolist())
        j = next(c for c in range(m) if c not in piv)
        E.widen(nn)
        row = np.zeros((1, m + (t + 1) * nn), dtype=np.int64)
        row[0, j] = 1
        base = m + t * nn
        row[0, base + np.arange(n) * n + np.arange(n)] = 1
        t += 1
        _, rel = E.add(row, return_relations=True)
        queue = E.last_new
        while len(queue):
            width = t * nn
            blocks = []
            for g in range(M.ngens):
                left = M.act(queue[:, :m], g)
                right = F.matmul(queue[:, m:].reshape(-1, n), B[g]).reshape(len(queue), width)
                blocks.append(np.hstack([left, right]))
            _, rel = E.add(np.vstack(blocks), return_relations=True)
            if len(rel):
                # rel row = flattened (t n) x n matrix R; conditions x @ R = 0
                R = rel.reshape(len(rel), t * n, n)
                conditions.append(np.transpose(R, (0, 2, 1)).reshape(-1, t * n))
            queue = E.last_new
    width = t * n
    if conditions:
        C = np.vstack([np.hstack([c, np.zeros((len(c), width - c.shape[1]), dtype=np.int64)])
                       for c in conditions])
        sols = kernel(C, F)
    else:
        sols = np.eye(width, dtype=np.int64)
    if not want_basis:
        return HomSpace(len(sols), None)
    rows, _ = E.sorted()
    P = rows[:, m:].reshape(m, width, n)  # rows sorted so row i is e_i
    flat = np.transpose(P, (1, 0, 2)).reshape(width, m * n)
    X = F.matmul(sols, flat) if len(sols) else np.zeros((0, m * n), dtype=np.int64)
    return HomSpace(len(sols), [x.reshape(m, n) for x in X])


def hom_dim(M: GModule, N: GModule) -> int:
    return hom_space(M, N, want_basis=False).dim


def is_homomorphism(M: GModule, N: GModule, X) -> bool:
    F = M.field
    X = np.asarray(X, dtype=np.int64)
    for A, B in zip(M.dense_action(), N.dense_action()):
        if not np.array_equal(F.matmul(A, X), F.matmul(X, B)):
            return False
    return True
