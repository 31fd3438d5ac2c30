"""Univariate polynomials over a finite field.

A polynomial is an ``int64`` array of encoded coefficients, constant term
first, with no trailing zeros (the zero polynomial is the empty array).
"""

from __future__ import annotations

import numpy as np

from .field import Field

ZERO = np.zeros(0, dtype=np.int64)


def trim(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    nz = np.flatnonzero(a)
    return a[: nz[-1] + 1].copy() if nz.size else ZERO.copy()


def degree(a) -> int:
    return len(a) - 1


def _pad(a, n):
    out = np.zeros(n, dtype=np.int64)
    out[: len(a)] = a
    return out


def add(a, b, F: Field) -> np.ndarray:
    n = max(len(a), len(b))
    return trim(F.add(_pad(a, n), _pad(b, n)))


def sub(a, b, F: Field) -> np.ndarray:
    n = max(len(a), len(b))
    return trim(F.sub(_pad(a, n), _pad(b, n)))


def scale(a, c: int, F: Field) -> np.ndarray:
    return trim(F.mul(a, c))


def mul(a, b, F: Field) -> np.ndarray:
    if len(a) == 0 or len(b) == 0:
        return ZERO.copy()
    if F.k == 1:
        return trim(np.convolve(a, b) % F.p)
    prod = F.mul(np.asarray(a)[:, None], np.asarray(b)[None, :])
    digits = F.digits(prod)  # k x len(a) x len(b)
    out = np.zeros((F.k, len(a) + len(b) - 1), dtype=np.int64)
    idx = np.add.outer(np.arange(len(a)), np.arange(len(b))).ravel()
    for d in range(F.k):
        np.add.at(out[d], idx, digits[d].ravel())
    return trim(F.from_digits(out % F.p))


def monic(a, F: Field) -> np.ndarray:
    if len(a) == 0:
        return ZERO.copy()
    return F.mul(a, int(F.inv(a[-1])))


def divmod_(a, b, F: Field) -> tuple[np.ndarray, np.ndarray]:
    b = trim(b)
    if len(b) == 0:
        raise ZeroDivisionError("polynomial division by zero")
    r = trim(a).copy()
    db = len(b) - 1
    if len(r) - 1 < db:
        return ZERO.copy(), r
    q = np.zeros(len(r) - db, dtype=np.int64)
    inv_lead = int(F.inv(b[-1]))
    for k in range(len(r) - 1, db - 1, -1):
        c = int(r[k])
        if c == 0:
            continue
        c = int(F.mul(c, inv_lead))
        q[k - db] = c
        r[k - db : k + 1] = F.sub(r[k - db : k + 1], F.mul(b, c))
    return trim(q), trim(r[:db])


def mod(a, b, F: Field) -> np.ndarray:
    return divmod_(a, b, F)[1]


def gcd(a, b, F: Field) -> np.ndarray:
    a, b = trim(a), trim(b)
    while len(b):
        a, b = b, mod(a, b, F)
    return monic(a, F)


def powmod(a, e: int, m, F: Field) -> np.ndarray:
    out = np.array([1], dtype=np.int64)
    base = mod(a, m, F)
    while e:
        if e & 1:
            out = mod(mul(out, base, F), m, F)
        e >>= 1
        if e:
            base = mod(mul(base, base, F), m, F)
    return out


X = np.array([0, 1], dtype=np.int64)


def distinct_factors(f, F: Field, rng: np.random.Generator) -> list[np.ndarray]:
    """The distinct monic irreducible factors of ``f`` (multiplicities are
    dropped)."""
    f = monic(trim(f), F)
    out: list[np.ndarray] = []
    if len(f) <= 1:
        return out
    rest = f
    h = X.copy()
    d = 0
    while len(rest) > 1:
        d += 1
        if 2 * d > len(rest) - 1:
            # no factor of degree < d is left, so rest is irreducible
            out.append(rest)
            break
        h = powmod(h, F.q, rest, F)
        g = gcd(sub(h, X, F), rest, F)
        if len(g) > 1:
            for piece in _equal_degree(g, d, F, rng):
                out.append(piece)
                while True:
                    quo, rem = divmod_(rest, piece, F)
                    if len(rem):
                        break
                    rest = quo
            h = mod(h, rest, F) if len(rest) > 1 else h
    return out


def _equal_degree(g, d: int, F: Field, rng: np.random.Generator) -> list[np.ndarray]:
    """Split a squarefree product of degree-``d`` irreducibles."""
    n = len(g) - 1
    if n == d:
        return [g]
    while True:
        a = trim(rng.integers(0, F.q, size=n))
        if len(a) <= 1:
            continue
        if F.p == 2:
            t = a.copy()
            s = a.copy()
            for _ in range(F.k * d - 1):
                s = mod(mul(s, s, F), g, F)
                t = add(t, s, F)
            b = t
        else:
            b = sub(powmod(a, (F.q ** d - 1) // 2, g, F), np.array([1]), F)
        c = gcd(b, g, F)
        if 1 < len(c) < len(g):
            other = divmod_(g, c, F)[0]
            parts = _equal_degree(c, d, F, rng) + _equal_degree(monic(other, F), d, F, rng)
            return sorted(parts, key=lambda p: p.tolist())
