"""Finite fields GF(p^k) with vectorised arithmetic on integer arrays.

Elements are encoded as integers ``0 <= a < q``; for ``k > 1`` the base-``p``
digits of ``a`` are the coefficients (low degree first) of a polynomial in
``t`` reduced modulo the field's defining polynomial.  All arithmetic accepts
numpy arrays of encoded elements and returns ``int64`` arrays.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

MAX_ORDER = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def _polymulmod_int(a, b, modulus, p):
    """Multiply coefficient lists ``a, b`` modulo the monic ``modulus``."""
    k = len(modulus) - 1
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for i in range(k):
                prod[d - k + i] = (prod[d - k + i] - c * modulus[i]) % p
            prod[d] = 0
    return prod[:k]


def _is_irreducible(coeffs: tuple[int, ...], p: int) -> bool:
    """Brute-force irreducibility test for a monic polynomial of small degree."""
    k = len(coeffs) - 1
    if k == 1:
        return True
    # a polynomial of degree <= 3 is irreducible iff it has no roots; in
    # general test divisibility by every monic polynomial of degree <= k/2
    for d in range(1, k // 2 + 1):
        for low in range(p ** d):
            div = [(low // p ** i) % p for i in range(d)] + [1]
            rem = list(coeffs)
            for top in range(k, d - 1, -1):
                c = rem[top]
                if c:
                    for i in range(d + 1):
                        rem[top - d + i] = (rem[top - d + i] - c * div[i]) % p
            if not any(rem[:d]):
                return False
    return True


def conway_free_modulus(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest irreducible monic polynomial of degree ``k``.

    Candidates are ordered by the integer whose base-``p`` digits are the
    non-leading coefficients, constant term least significant.
    """
    for low in range(p ** k):
        coeffs = tuple((low // p ** i) % p for i in range(k)) + (1,)
        if coeffs[0] == 0:
            continue
        if _is_irreducible(coeffs, p):
            return coeffs
    raise ValueError(f"no irreducible polynomial of degree {k} over F_{p}")


class Field:
    """The finite field with ``q = p**k`` elements."""

    def __init__(self, p: int, k: int = 1):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if k < 1:
            raise ValueError("degree must be positive")
        if p ** k > MAX_ORDER:
            raise ValueError(f"field of order {p}^{k} exceeds {MAX_ORDER}")
        self.p = p
        self.k = k
        self.q = p ** k
        if k == 1:
            self.modulus: tuple[int, ...] = (0, 1)
            self._digits = None
            self._exp = self._log = None
            self._inv = np.array([0] + [pow(a, p - 2, p) for a in range(1, p)], dtype=np.int64)
        else:
            self.modulus = conway_free_modulus(p, k)
            self._digits = np.array(
                [[(a // p ** i) % p for i in range(k)] for a in range(self.q)], dtype=np.int64
            )
            self._weights = np.array([p ** i for i in range(k)], dtype=np.int64)
            self._build_tables()

    def _build_tables(self):
        q, p, k = self.q, self.p, self.k
        for g in range(p, q):
            gd = [(g // p ** i) % p for i in range(k)]
            exp = np.zeros(q - 1, dtype=np.int64)
            cur = [1] + [0] * (k - 1)
            ok = True
            for e in range(q - 1):
                val = sum(c * p ** i for i, c in enumerate(cur))
                if e > 0 and val == 1:
                    ok = False
                    break
                exp[e] = val
                cur = _polymulmod_int(cur, gd, self.modulus, p)
            if ok:
                self.primitive = g
                self._exp = exp
                log = np.zeros(q, dtype=np.int64)
                log[exp] = np.arange(q - 1)
                self._log = log
                inv = np.zeros(q, dtype=np.int64)
                inv[exp] = exp[(-np.arange(q - 1)) % (q - 1)]
                self._inv = inv
                return
        raise AssertionError("no primitive element found")

    # -- identity -----------------------------------------------------------
    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash((self.p, self.k))

    @property
    def is_prime_field(self) -> bool:
        return self.k == 1

    # -- encoding ------------------------------------------------------------
    def element(self, coeffs) -> int:
        """Encode a polynomial in ``t`` (coefficients, low degree first)."""
        coeffs = [c % self.p for c in coeffs]
        k, p = self.k, self.p
        for d in range(len(coeffs) - 1, k - 1, -1):
            c = coeffs[d]
            if c:
                for i in range(k):
                    coeffs[d - k + i] = (coeffs[d - k + i] - c * self.modulus[i]) % p
        return int(sum(c * p ** i for i, c in enumerate(coeffs[:k])))

    def from_int(self, n) -> np.ndarray:
        """Image of integers under the ring map Z -> F."""
        return np.asarray(n, dtype=np.int64) % self.p

    def asarray(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if a.size and (a.min() < 0 or a.max() >= self.q):
            raise ValueError(f"entries out of range for {self}")
        return a

    def digits(self, a) -> np.ndarray:
        """Stack of base-p digit arrays, shape ``(k,) + a.shape``."""
        a = np.asarray(a, dtype=np.int64)
        if self.k == 1:
            return a[None]
        return np.moveaxis(self._digits[a], -1, 0)

    def from_digits(self, d) -> np.ndarray:
        if self.k == 1:
            return np.asarray(d[0], dtype=np.int64)
        return np.tensordot(self._weights, np.asarray(d, dtype=np.int64), axes=(0, 0))

    # -- arithmetic ----------------------------------------------------------
    def add(self, a, b):
        if self.k == 1:
            return (np.asarray(a, dtype=np.int64) + b) % self.p
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        return ((self._digits[a] + self._digits[b]) % self.p) @ self._weights

    def neg(self, a):
        if self.k == 1:
            return (-np.asarray(a, dtype=np.int64)) % self.p
        a = np.asarray(a, dtype=np.int64)
        return ((-self._digits[a]) % self.p) @ self._weights

    def sub(self, a, b):
        if self.k == 1:
            return (np.asarray(a, dtype=np.int64) - b) % self.p
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        return ((self._digits[a] - self._digits[b]) % self.p) @ self._weights

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a * b) % self.p
        out = self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        return self._inv[a]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e > 0 else 1
        if self.k == 1:
            return pow(int(a), e % (self.p - 1), self.p)
        return int(self._exp[(int(self._log[a]) * e) % (self.q - 1)])

    def outer(self, u, v):
        """Outer product ``u_i * v_j``."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if self.k == 1:
            return np.outer(u, v) % self.p
        return self.mul(u[:, None], v[None, :])

    def matmul(self, A, B):
        """Matrix product over the field; either operand may be scipy-sparse
        provided its entries lie in the prime subfield."""
        import scipy.sparse as sp

        p = self.p
        if self.k == 1:
            if sp.issparse(A) or sp.issparse(B):
                out = A @ B
                out = out.toarray() if sp.issparse(out) else np.asarray(out)
                return np.asarray(out, dtype=np.int64) % p
            prod = np.asarray(A, dtype=np.float64) @ np.asarray(B, dtype=np.float64)
            # integer % is several times faster than float np.mod
            return prod.astype(np.int64) % p
        if sp.issparse(B):
            dA = self.digits(A).astype(np.float64)
            out = np.stack([np.asarray(d @ B) for d in dA])
            return self.from_digits(np.mod(out, p).astype(np.int64))
        if sp.issparse(A):
            dB = self.digits(B).astype(np.float64)
            out = np.stack([np.asarray(A @ d) for d in dB])
            return self.from_digits(np.mod(out, p).astype(np.int64))
        dA = self.digits(A).astype(np.float64)
        dB = self.digits(B).astype(np.float64)
        k = self.k
        shape = dA.shape[1:-1] + dB.shape[2:]
        acc = np.zeros((2 * k - 1,) + shape)
        for i in range(k):
            for j in range(k):
                acc[i + j] += dA[i] @ dB[j]
        acc = np.mod(acc, p)
        m = self.modulus
        for d in range(2 * k - 2, k - 1, -1):
            top = acc[d]
            for i in range(k):
                if m[i]:
                    acc[d - k + i] -= m[i] * top
            acc[d - k : d] = np.mod(acc[d - k : d], p)
        return self.from_digits(acc[:k].astype(np.int64))

    def dot(self, u, v) -> int:
        return int(self.matmul(np.asarray(u)[None, :], np.asarray(v)[:, None])[0, 0])

    def random(self, shape, rng: np.random.Generator) -> np.ndarray:
        return rng.integers(0, self.q, size=shape, dtype=np.int64)

    def frobenius(self, a, times: int = 1):
        """Apply ``x -> x^(p^times)`` elementwise."""
        a = np.asarray(a, dtype=np.int64)
        if self.k == 1:
            return a.copy()
        e = self.p ** (times % self.k)
        out = self._exp[(self._log[a] * e) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def subfield_elements(self, degree: int) -> np.ndarray:
        """Elements of the subfield of order ``p**degree``."""
        if self.k % degree:
            raise ValueError("not a subfield degree")
        a = self.elements()
        return a[self.frobenius(a, degree) == a]


@lru_cache(maxsize=None)
def field_make(p: int, k: int = 1) -> Field:
    """Cached constructor; the same (p, k) always yields the same object."""
    return Field(p, k)


GF = field_make
