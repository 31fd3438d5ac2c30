"""Exact dense linear algebra over finite fields.

Matrices are ``int64`` numpy arrays of encoded field elements.  Row spaces are
built with :class:`Echelon`, which keeps a reduced row echelon basis and folds
new rows in batches so that the heavy lifting is a BLAS matrix product.  The
``*_f2`` functions are an independent bit-packed route for GF(2).
"""

from __future__ import annotations

import numpy as np

from .field import Field

BATCH = 64


class Echelon:
    """A row space over ``field`` kept in reduced row echelon form.

    Rows have ``ncols`` pivotable columns followed by ``extra`` passenger
    columns which are carried through every row operation but never chosen as
    pivots.  :meth:`add` reports the passenger part of every incoming row that
    turned out to be dependent; those residues are exactly the linear relations
    among the inputs modulo the current span.

    Over prime fields block reductions are float64 BLAS products, which stay
    exact while ``rank * p**2`` is below 2**53.
    """

    def __init__(self, field: Field, ncols: int, extra: int = 0):
        self.field = field
        self.ncols = ncols
        self.extra = extra
        self._fast = field.k == 1
        self._dtype = np.int64
        self._buf = np.zeros((min(ncols, 64), ncols + extra), dtype=self._dtype)
        self.pivots = np.zeros(0, dtype=np.int64)

    @property
    def _rows(self) -> np.ndarray:
        return self._buf[: len(self.pivots)]

    def _append(self, N, piv):
        r = self.rank
        need = r + len(N)
        if need > len(self._buf):
            cap = min(self.ncols, max(need, 2 * len(self._buf)))
            buf = np.zeros((cap, self._buf.shape[1]), dtype=self._dtype)
            buf[:r] = self._buf[:r]
            self._buf = buf
        self._buf[r:need] = N
        self.pivots = np.concatenate([self.pivots, piv])

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def full(self) -> bool:
        return self.rank == self.ncols

    @property
    def rows(self) -> np.ndarray:
        return self._rows.astype(np.int64)

    def widen(self, more: int):
        """Append ``more`` zero passenger columns."""
        self._buf = np.hstack([self._buf, np.zeros((len(self._buf), more), dtype=self._dtype)])
        self.extra += more

    def _reduce(self, V):
        if self.rank == 0 or len(V) == 0:
            return V.copy()
        if self._fast:
            p = self.field.p
            prod = V[:, self.pivots].astype(np.float64) @ self._rows.astype(np.float64)
            return (V - prod.astype(np.int64)) % p
        F = self.field
        return F.sub(V, F.matmul(V[:, self.pivots], self._rows))

    def reduce(self, V: np.ndarray) -> np.ndarray:
        V = np.atleast_2d(np.asarray(V)).astype(self._dtype)
        return self._reduce(V).astype(np.int64)

    def contains(self, V: np.ndarray) -> np.ndarray:
        R = self.reduce(V)
        return ~R[:, : self.ncols].any(axis=1)

    def add(self, V: np.ndarray, return_relations: bool = False):
        """Fold the rows of ``V`` into the space.

        Returns the number of new pivots, and with ``return_relations`` also
        the passenger parts of the rows that reduced to zero.  The new
        independent rows, as they were when added, are left in
        :attr:`last_new`; together with the old space they span the same
        space as the old space plus ``V``.
        """
        V = np.atleast_2d(np.asarray(V)).astype(self._dtype)
        added = 0
        rels = []
        new = []
        for start in range(0, len(V), BATCH):
            n_new, rel = self._add_batch(V[start : start + BATCH], new)
            added += n_new
            if return_relations and len(rel):
                rels.append(rel)
        width = self.ncols + self.extra
        self.last_new = np.vstack(new) if new else np.zeros((0, width), dtype=np.int64)
        if return_relations:
            if rels:
                return added, np.vstack(rels).astype(np.int64)
            return added, np.zeros((0, self.extra), dtype=np.int64)
        return added

    def _add_batch(self, V, new_out):
        F = self.field
        nc = self.ncols
        R = self._reduce(V)
        b = len(R)
        if self.full or not R[:, :nc].any():
            return 0, R[:, nc:]
        # Eliminate on a b x b transform T instead of on the wide block:
        # row i of the current block is T[i] @ R, and only the pivot column
        # of the block is ever materialised during the sweep.
        if self._fast:
            p = F.p
            Rf = R.astype(np.float64)

            def times_R(X):
                return (np.asarray(X, dtype=np.float64) @ Rf).astype(np.int64) % p

            def col_of(c):
                return R[:, c]
        else:
            def times_R(X):
                return F.matmul(X, R)

            def col_of(c):
                return R[:, c]

        T = np.eye(b, dtype=np.int64)
        new_rows, new_piv, rels = [], [], []
        for i in range(b):
            row = times_R(T[i : i + 1])[0]
            nz = np.flatnonzero(row[:nc])
            if nz.size == 0:
                rels.append(row[nc:])
                continue
            c = int(nz[0])
            T[i] = F.mul(F.inv(row[c]), T[i])
            colc = F.matmul(T, col_of(c)[:, None])[:, 0]
            colc[i] = 0
            hit = np.flatnonzero(colc)
            if hit.size:
                T[hit] = F.sub(T[hit], F.outer(colc[hit], T[i]))
            new_rows.append(i)
            new_piv.append(c)
        rel = np.array(rels, dtype=np.int64).reshape(len(rels), self.extra)
        if new_rows:
            N = times_R(T[new_rows])
            new_out.append(N.copy())
            piv = np.array(new_piv, dtype=np.int64)
            if self.rank:
                coeff = self._rows[:, piv]
                # only rows with a nonzero entry under a new pivot change
                touched = np.flatnonzero(coeff.any(axis=1))
                if touched.size:
                    rows = self._rows
                    if self._fast:
                        prod = coeff[touched].astype(np.float64) @ N.astype(np.float64)
                        rows[touched] = (rows[touched] - prod.astype(np.int64)) % p
                    else:
                        rows[touched] = F.sub(rows[touched], F.matmul(coeff[touched], N))
            self._append(N, piv)
        return len(new_rows), rel

    def sorted(self) -> tuple[np.ndarray, np.ndarray]:
        order = np.argsort(self.pivots, kind="stable")
        return self._rows[order].astype(np.int64), self.pivots[order]

    def basis(self) -> np.ndarray:
        """Pivotable part of the basis, sorted by pivot column."""
        return self.sorted()[0][:, : self.ncols]

    def coordinates(self, V: np.ndarray) -> np.ndarray:
        """Coordinates of rows of ``V`` (assumed in the span) w.r.t. :meth:`basis`."""
        order = np.argsort(self.pivots, kind="stable")
        return np.atleast_2d(V)[:, self.pivots[order]]


def _check_2d(A):
    A = np.asarray(A, dtype=np.int64)
    if A.ndim != 2:
        raise ValueError("expected a matrix")
    return A


def rref(A, field: Field) -> tuple[np.ndarray, int, list[int]]:
    """Reduced row echelon form; returns ``(R, rank, pivot_columns)``.

    ``R`` has the same shape as ``A`` with zero rows at the bottom.
    """
    A = _check_2d(A)
    E = Echelon(field, A.shape[1])
    E.add(A)
    rows, piv = E.sorted()
    R = np.zeros_like(A)
    R[: len(rows)] = rows
    return R, E.rank, [int(c) for c in piv]


def rank(A, field: Field) -> int:
    A = _check_2d(A)
    if A.shape[0] > A.shape[1]:
        A = A.T
    E = Echelon(field, A.shape[1])
    E.add(A)
    return E.rank


def kernel(A, field: Field) -> np.ndarray:
    """Basis (as rows) of ``{x : A @ x = 0}``; ``A @ kernel(A).T == 0``."""
    A = _check_2d(A)
    n = A.shape[1]
    R, r, piv = rref(A, field)
    free = [c for c in range(n) if c not in set(piv)]
    K = np.zeros((len(free), n), dtype=np.int64)
    for i, c in enumerate(free):
        K[i, c] = 1
        if r:
            K[i, piv] = field.neg(R[:r, c])
    return K


def left_kernel(A, field: Field) -> np.ndarray:
    """Basis of ``{v : v @ A = 0}``."""
    return kernel(_check_2d(A).T, field)


def solve(A, b, field: Field):
    """Some ``x`` with ``A @ x = b``, or ``None`` when inconsistent."""
    A = _check_2d(A)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    if b.shape[0] != A.shape[0]:
        raise ValueError("dimension mismatch")
    n = A.shape[1]
    R, r, piv = rref(np.hstack([A, b]), field)
    if piv and piv[-1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    x[piv] = R[:r, n]
    return x


def inverse(A, field: Field) -> np.ndarray:
    A = _check_2d(A)
    n = A.shape[0]
    if A.shape[1] != n:
        raise ValueError("matrix not square")
    R, r, piv = rref(np.hstack([A, np.eye(n, dtype=np.int64)]), field)
    if r < n or piv[n - 1] != n - 1:
        raise ZeroDivisionError("matrix is singular")
    return R[:, n:]


def matpow(A, e: int, field: Field) -> np.ndarray:
    A = _check_2d(A)
    if e < 0:
        A, e = inverse(A, field), -e
    out = np.eye(A.shape[0], dtype=np.int64)
    base = A
    while e:
        if e & 1:
            out = field.matmul(out, base)
        e >>= 1
        if e:
            base = field.matmul(base, base)
    return out


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


# -- bit-packed GF(2) --------------------------------------------------------


def pack_f2(A) -> tuple[np.ndarray, int]:
    """Pack a 0/1 matrix into little-endian ``uint64`` words per row."""
    A = np.asarray(A, dtype=np.uint8) & 1
    rows, cols = A.shape
    nwords = max(1, -(-cols // 64))
    padded = np.zeros((rows, nwords * 64), dtype=np.uint8)
    padded[:, :cols] = A
    packed = np.packbits(padded, axis=1, bitorder="little")
    return packed.view("<u8").reshape(rows, nwords).copy(), cols


def unpack_f2(W: np.ndarray, cols: int) -> np.ndarray:
    bits = np.unpackbits(W.view(np.uint8).reshape(W.shape[0], -1), axis=1, bitorder="little")
    return bits[:, :cols].astype(np.int64)


def rref_f2(A) -> tuple[np.ndarray, int, list[int]]:
    W, cols = pack_f2(A)
    rows = W.shape[0]
    r = 0
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        w, bit = divmod(c, 64)
        mask = np.uint64(1 << bit)
        hits = np.flatnonzero(W[r:, w] & mask)
        if hits.size == 0:
            continue
        i = r + int(hits[0])
        if i != r:
            W[[r, i]] = W[[i, r]]
        hits = np.flatnonzero(W[:, w] & mask)
        hits = hits[hits != r]
        if hits.size:
            W[hits, w:] ^= W[r, w:]
        pivots.append(c)
        r += 1
    return unpack_f2(W, cols), r, pivots


def rank_f2(A) -> int:
    return rref_f2(A)[1]


def kernel_f2(A) -> np.ndarray:
    A = np.asarray(A)
    n = A.shape[1]
    R, r, piv = rref_f2(A)
    pset = set(piv)
    free = [c for c in range(n) if c not in pset]
    K = np.zeros((len(free), n), dtype=np.int64)
    for i, c in enumerate(free):
        K[i, c] = 1
        if r:
            K[i, piv] = R[:r, c]
    return K
