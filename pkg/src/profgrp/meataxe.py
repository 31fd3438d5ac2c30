"""MeatAxe: irreducibility testing, composition factors and isomorphism.

Irreducibility follows Norton's criterion as used by Holt and Rees: for a
random algebra element ``theta`` and an irreducible factor ``f`` of its
characteristic polynomial with ``dim ker f(theta) = deg f``, the module is
irreducible iff a nonzero vector of ``ker f(theta)`` spins to the whole
module and a nonzero vector of ``ker f(theta)^T`` spins to everything under
the transposed generators.  Any failed spin exhibits a proper submodule.

Random algebra elements are sums of a few random words (length at most 12)
in the generator matrices; every random choice comes from a generator seeded
by the caller, so results are repeatable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import poly
from .field import Field
from .linalg import kernel, left_kernel
from .modules import (
    GModule,
    dual,
    hom_dim,
    hom_space,
    permutation_module,
    quotient,
    regular_module,
    spin,
    submodule,
    tensor,
    trivial_module,
    wedge2,
)
from .perm_group import PermGroup

MAX_WORD = 12
MAX_TRIES = 200
ISO_TRIES = 64
IRREDUCIBLES_BOUND = 2000
IRREDUCIBLES_DEEP_BOUND = 2520


# -- characteristic polynomial ----------------------------------------------------


def hessenberg(A, F: Field) -> np.ndarray:
    """Upper Hessenberg matrix similar to ``A``."""
    H = np.array(A, dtype=np.int64)
    n = len(H)
    for j in range(n - 2):
        col = H[j + 1 :, j]
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        i = j + 1 + int(nz[0])
        if i != j + 1:
            H[[i, j + 1]] = H[[j + 1, i]]
            H[:, [i, j + 1]] = H[:, [j + 1, i]]
        inv = F.inv(H[j + 1, j])
        u = F.mul(H[j + 2 :, j], inv)
        hit = np.flatnonzero(u)
        if hit.size == 0:
            continue
        rows = j + 2 + hit
        # row_k -= u_k row_{j+1}; then col_{j+1} += sum_k u_k col_k
        H[rows] = F.sub(H[rows], F.outer(u[hit], H[j + 1]))
        H[:, j + 1] = F.add(H[:, j + 1], F.matmul(H[:, rows], u[hit][:, None])[:, 0])
    return H


def charpoly(A, F: Field) -> np.ndarray:
    """Monic characteristic polynomial, coefficients low degree first."""
    H = hessenberg(A, F)
    n = len(H)
    polys = [np.array([1], dtype=np.int64)]
    for k in range(n):
        # p_{k+1} = (x - h_kk) p_k - sum_{i<k} h_ik (prod_{m=i+1..k} h_{m,m-1}) p_i
        acc = poly.mul(np.array([F.neg(H[k, k]), 1], dtype=np.int64), polys[k], F)
        prod = 1
        for i in range(k - 1, -1, -1):
            prod = int(F.mul(prod, H[i + 1, i]))
            if prod == 0:
                break
            c = int(F.mul(H[i, k], prod))
            if c:
                acc = poly.sub(acc, poly.scale(polys[i], c, F), F)
        polys.append(acc)
    return polys[n]


def eval_matrix(f: np.ndarray, A, F: Field) -> np.ndarray:
    """``f(A)`` by Horner's rule."""
    n = len(A)
    out = np.zeros((n, n), dtype=np.int64)
    I = np.eye(n, dtype=np.int64)
    for c in f[::-1]:
        out = F.matmul(out, A)
        if c:
            out = F.add(out, F.mul(I, int(c)))
    return out


# -- irreducibility ------------------------------------------------------------------


@dataclass
class Witness:
    words: list[tuple[int, ...]]
    coefficients: list[int]
    factor: list[int]
    nullity: int
    seed: int | None = None

    def to_json(self) -> dict:
        return {
            "words": [list(w) for w in self.words],
            "coefficients": self.coefficients,
            "factor": self.factor,
            "nullity": self.nullity,
            "seed": self.seed,
        }


@dataclass
class IrreducibilityResult:
    irreducible: bool
    submodule: np.ndarray | None = None  # basis of a proper submodule
    witness: Witness | None = None

    def __bool__(self):
        return self.irreducible


def _transposed(M: GModule) -> GModule:
    return GModule(None, M.field, M.dim, [A.T.copy() for A in M.dense_action()], f"{M.name}^T")


def _random_element(M: GModule, rng: np.random.Generator):
    F = M.field
    mats = M.dense_action()
    nwords = 3
    words, coeffs = [], []
    theta = np.zeros((M.dim, M.dim), dtype=np.int64)
    for _ in range(nwords):
        length = int(rng.integers(1, MAX_WORD + 1))
        w = tuple(int(x) for x in rng.integers(0, len(mats), size=length))
        c = int(rng.integers(1, F.q))
        W = mats[w[0]]
        for j in w[1:]:
            W = F.matmul(W, mats[j])
        theta = F.add(theta, F.mul(W, c))
        words.append(w)
        coeffs.append(c)
    return theta, words, coeffs


def find_submodule(M: GModule, rng: np.random.Generator, max_tries: int = MAX_TRIES,
                   seed: int | None = None) -> IrreducibilityResult:
    F = M.field
    if M.dim <= 1:
        return IrreducibilityResult(True, None, None)
    if M.ngens == 0:
        return IrreducibilityResult(False, np.eye(M.dim, dtype=np.int64)[:1], None)
    MT = None
    for _ in range(max_tries):
        theta, words, coeffs = _random_element(M, rng)
        cp = charpoly(theta, F)
        factors = sorted(poly.distinct_factors(cp, F, rng), key=lambda f: (len(f), f.tolist()))
        for f in factors:
            deg = len(f) - 1
            ft = eval_matrix(f, theta, F)
            K = left_kernel(ft, F)
            S = spin(M, K[:1])
            if S.rank < M.dim:
                return IrreducibilityResult(False, S.basis(), None)
            if len(K) != deg:
                continue
            KT = kernel(ft, F)
            if MT is None:
                MT = _transposed(M)
            ST = spin(MT, KT[:1])
            if ST.rank < M.dim:
                # the annihilator of a submodule for the transposed action is
                # a submodule for the original one
                return IrreducibilityResult(False, kernel(ST.basis(), F), None)
            w = Witness(words, coeffs, [int(c) for c in f], len(K), seed)
            return IrreducibilityResult(True, None, w)
    raise RuntimeError(f"MeatAxe made no decision after {max_tries} random elements")


def is_irreducible(M: GModule, seed: int = 0) -> IrreducibilityResult:
    return find_submodule(M, np.random.default_rng(seed), seed=seed)


def chop(M: GModule, seed: int = 0) -> list[GModule]:
    """Composition factors of ``M`` (with repetition), bottom of a
    composition series first."""
    rng = np.random.default_rng(seed)
    out: list[GModule] = []
    stack = [M]
    while stack:
        X = stack.pop()
        if X.dim == 0:
            continue
        res = find_submodule(X, rng, seed=seed)
        if res.irreducible:
            X.irreducibility = res
            out.append(X)
            continue
        sub = submodule(X, res.submodule, name=X.name)
        quo = quotient(X, res.submodule, name=X.name)
        stack.append(quo)
        stack.append(sub)
    return out


def endo_degree(M: GModule) -> int:
    """Degree of the endomorphism field of an irreducible module."""
    return hom_dim(M, M)


def isomorphic(M: GModule, N: GModule, irreducible: bool = False, seed: int = 0) -> bool:
    """Module isomorphism.  For irreducible modules this is exact (Schur's
    lemma); otherwise an isomorphism is searched for among random elements of
    ``Hom(M, N)``, which can only err by missing one (probability below
    1e-8 after the allotted tries)."""
    if M.dim != N.dim or M.field != N.field:
        return False
    if M.dim == 0:
        return True
    H = hom_space(M, N)
    if irreducible:
        return H.dim > 0
    if H.dim == 0 or H.dim != hom_dim(M, M):
        return False
    from .linalg import rank

    F = M.field
    rng = np.random.default_rng(seed)
    for _ in range(ISO_TRIES):
        c = F.random(H.dim, rng)
        X = np.zeros((M.dim, N.dim), dtype=np.int64)
        for ci, B in zip(c, H.basis):
            X = F.add(X, F.mul(B, int(ci)))
        if rank(X, F) == M.dim:
            return True
    return False


def composition_factors(M: GModule, seed: int = 0) -> list[tuple[GModule, int]]:
    """Distinct composition factors with multiplicities."""
    out: list[list] = []
    for X in chop(M, seed):
        for entry in out:
            if isomorphic(entry[0], X, irreducible=True):
                entry[1] += 1
                break
        else:
            out.append([X, 1])
    return [(X, k) for X, k in out]


# -- conjugacy classes and the number of irreducibles -------------------------------


def _power_rows(E: np.ndarray, e: int) -> np.ndarray:
    """Row-wise ``x^e`` for an array of permutations."""
    n = E.shape[1]
    out = np.broadcast_to(np.arange(n, dtype=E.dtype), E.shape).copy()
    base = E.copy()
    while e:
        if e & 1:
            out = np.take_along_axis(base, out, axis=1)
        e >>= 1
        if e:
            base = np.take_along_axis(base, base, axis=1)
    return out


def element_orders(G: PermGroup) -> np.ndarray:
    E = G.element_array()
    ident = np.arange(E.shape[1])
    orders = np.zeros(len(E), dtype=np.int64)
    cur = E.copy()
    k = 1
    while (orders == 0).any():
        hit = (orders == 0) & (cur == ident).all(axis=1)
        orders[hit] = k
        cur = np.take_along_axis(E, cur, axis=1)
        k += 1
    return orders


def _lookup(G: PermGroup, rows: np.ndarray) -> np.ndarray:
    index = G.element_index()
    return np.array([index[r.tobytes()] for r in rows], dtype=np.int64)


def conjugacy_class_labels(G: PermGroup) -> np.ndarray:
    """Class label for every element (labels are 0, 1, ... by first element)."""
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    E = G.element_array()
    N = len(E)
    src, dst = [], []
    for g in G.generators:
        ginv = g.inverse()
        conj = g.a[E[:, ginv.a]]
        src.append(np.arange(N))
        dst.append(_lookup(G, conj))
    graph = coo_matrix((np.ones(N * len(src)), (np.concatenate(src), np.concatenate(dst))), shape=(N, N))
    _, labels = connected_components(graph, directed=True, connection="weak")
    # relabel by first occurrence for determinism
    first = {}
    out = np.empty(N, dtype=np.int64)
    for i, lab in enumerate(labels):
        out[i] = first.setdefault(lab, len(first))
    return out


def count_irreducibles(G: PermGroup, F: Field) -> int:
    """Number of irreducible ``F G``-modules: the number of ``F``-conjugacy
    classes of ``p``-regular elements, where ``x`` is fused with ``x^q``."""
    labels = conjugacy_class_labels(G)
    orders = element_orders(G)
    E = G.element_array()
    q_pow = _lookup(G, _power_rows(E, F.q))
    parent = list(range(labels.max() + 1))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(len(E)):
        a, b = find(labels[i]), find(labels[q_pow[i]])
        if a != b:
            parent[max(a, b)] = min(a, b)
    regular = {find(labels[i]) for i in range(len(E)) if orders[i] % F.p}
    return len(regular)


# -- all irreducibles -------------------------------------------------------------------


@dataclass
class IrreducibleList:
    modules: list[GModule]
    expected_count: int
    complete: bool
    sources: list[str] = field(default_factory=list)


def irreducibles(G: PermGroup, F: Field, seed: int = 0, bound: int | None = None,
                 deep: bool = False) -> list[GModule]:
    return irreducibles_report(G, F, seed, bound, deep).modules


def irreducibles_report(G: PermGroup, F: Field, seed: int = 0, bound: int | None = None,
                        deep: bool = False) -> IrreducibleList:
    """All irreducible ``F G``-modules up to isomorphism.

    Candidates are chopped in order: trivial, natural permutation module,
    tensor products, duals and exterior squares of what has been found, and
    finally the regular module.  The search stops once the number of
    irreducibles reaches the count of ``F``-classes of ``p``-regular
    elements, which both certifies completeness and avoids chopping the
    regular module in most cases.
    """
    if bound is None:
        bound = IRREDUCIBLES_DEEP_BOUND if deep else IRREDUCIBLES_BOUND
    order = G.order()
    if order > bound:
        raise OverflowError(f"group order {order} exceeds the irreducibles bound {bound}")
    target = count_irreducibles(G, F)
    found: list[GModule] = []
    sources: list[str] = []

    def absorb(M: GModule, label: str):
        for X in chop(M, seed):
            if any(Y.dim == X.dim and isomorphic(Y, X, irreducible=True) for Y in found):
                continue
            X.name = f"irr:{len(found)}"
            found.append(X)
            sources.append(label)
            if len(found) == target:
                return True
        return False

    if absorb(trivial_module(G, F), "trivial"):
        return _finish(found, target, sources)
    if G.degree <= 256 and absorb(permutation_module(G, F), "perm"):
        return _finish(found, target, sources)
    done_pairs = set()
    tensor_cap = 400
    progress = True
    while progress:
        progress = False
        snapshot = list(found)
        for i, X in enumerate(snapshot):
            if ("dual", i) not in done_pairs:
                done_pairs.add(("dual", i))
                before = len(found)
                if absorb(dual(X), f"dual:{i}"):
                    return _finish(found, target, sources)
                progress |= len(found) > before
            if X.dim >= 2 and X.dim * (X.dim - 1) // 2 <= tensor_cap and ("w2", i) not in done_pairs:
                done_pairs.add(("w2", i))
                before = len(found)
                if absorb(wedge2(X), f"wedge2:{i}"):
                    return _finish(found, target, sources)
                progress |= len(found) > before
            for j, Y in enumerate(snapshot[: i + 1]):
                if X.dim * Y.dim > tensor_cap:
                    continue
                if (i, j) in done_pairs:
                    continue
                done_pairs.add((i, j))
                before = len(found)
                if absorb(tensor(X, Y), f"tensor:{i},{j}"):
                    return _finish(found, target, sources)
                progress |= len(found) > before
    absorb(regular_module(G, F), "regular")
    return _finish(found, target, sources)


def _finish(found, target, sources) -> IrreducibleList:
    if len(found) != target:
        raise RuntimeError(f"found {len(found)} irreducibles, expected {target}")
    order = sorted(range(len(found)), key=lambda i: (found[i].dim, i))
    mods = [found[i] for i in order]
    for k, M in enumerate(mods):
        M.name = f"irr:{k}"
    return IrreducibleList(mods, target, True, [sources[i] for i in order])


def splitting_check(M: GModule) -> bool:
    """Absolutely irreducible: irreducible with trivial endomorphism field."""
    return bool(is_irreducible(M)) and endo_degree(M) == 1


class NotIrreducibleError(ValueError):
    pass


def heart(P: GModule, seed: int = 0) -> GModule:
    """The nontrivial composition factor of a transitive permutation module:
    the sum-zero vectors, modulo the all-ones vector when the characteristic
    divides the degree.  Raises unless the result is irreducible."""
    F = P.field
    n = P.dim
    if P.group is not None and not P.group.is_transitive():
        raise ValueError("heart needs a transitive action")
    sum_zero = np.zeros((n - 1, n), dtype=np.int64)
    sum_zero[np.arange(n - 1), np.arange(n - 1)] = 1
    sum_zero[:, n - 1] = F.neg(1)
    H = submodule(P, sum_zero, name="heart")
    if n % F.p == 0:
        # the all-ones vector in the echelon basis of the sum-zero space
        ones = np.ones((1, n - 1), dtype=np.int64)
        H = quotient(H, ones, name="heart")
    res = is_irreducible(H, seed)
    if not res:
        raise NotIrreducibleError(f"heart of degree {n} over {F} is reducible")
    H.irreducibility = res
    return H
