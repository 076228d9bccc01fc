"""Table-backed arithmetic in small finite fields and their extensions.

Elements are plain integers (or integer numpy arrays).  The element
``sum(c_i * x**i)`` of ``F_p[x]/(f)`` is encoded as ``sum(c_i * p**i)``, so the
prime subfield ``F_p`` is always the codes ``0 .. p-1`` and the codes are stable
across runs.  Multiplication goes through discrete-log tables of a primitive
element and addition through a Zech-log table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from sympy import factorint, isprime

ORDER_CAP = 2**20
TABLE_MAX = 2048


class FieldError(ValueError):
    pass


# -- polynomials over F_p, coefficient lists low degree first ---------------


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, f, p):
    a = list(a)
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(_trim(a)) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
    return a


def _pmulmod(a, b, f, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pmod(out, f, p)


def _ppowmod(a, e, f, p):
    result = [1]
    base = _pmod(a, f, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, p)
        base = _pmulmod(base, base, f, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _trim(_pmod(a, b, p))
    return a


def _is_irreducible(f, p):
    """Rabin's test for a monic polynomial ``f`` over ``F_p``."""
    m = len(f) - 1
    if m == 1:
        return True
    x = [0, 1]
    if _trim(_psub(_ppowmod(x, p**m, f, p), x, p)):
        return False
    for r in factorint(m):
        h = _psub(_ppowmod(x, p ** (m // r), f, p), x, p)
        if len(_pgcd(f, h, p)) > 1:
            return False
    return True


def _psub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def smallest_irreducible(p: int, m: int) -> list[int]:
    """Lexicographically smallest monic irreducible of degree ``m`` over F_p.

    Candidates are compared on their coefficient tuple from ``x**(m-1)`` down
    to the constant term, which is the order of the integer ``sum(c_i p**i)``.
    """
    for code in range(p**m):
        low = [(code // p**i) % p for i in range(m)]
        if m > 1 and low[0] == 0:
            continue
        f = low + [1]
        if _is_irreducible(f, p):
            return f
    raise FieldError(f"no irreducible of degree {m} over F_{p}")  # pragma: no cover


def _code_to_poly(c: int, p: int, m: int) -> list[int]:
    return [(c // p**i) % p for i in range(m)]


def _poly_to_code(a, p: int) -> int:
    return sum(int(x) * p**i for i, x in enumerate(a))


# -- scalar rings -----------------------------------------------------------


class ScalarRing:
    """Common vectorized surface for the coefficient rings of group algebras.

    Subclasses implement the ``_*_raw`` kernels on integer arrays; full
    operation tables are cached when the ring is small enough.
    """

    order: int

    def _add_raw(self, a, b):
        raise NotImplementedError

    def _mul_raw(self, a, b):
        raise NotImplementedError

    def _neg_raw(self, a):
        raise NotImplementedError

    def _sigma_raw(self, a):
        raise NotImplementedError

    @cached_property
    def dtype(self):
        return np.min_scalar_type(self.order - 1) if self.order <= 2**16 else np.int64

    @cached_property
    def _tables(self):
        if self.order > TABLE_MAX:
            return None
        els = np.arange(self.order, dtype=np.int64)
        A, B = np.meshgrid(els, els, indexing="ij")
        dt = self.dtype
        return (
            self._add_raw(A, B).astype(dt),
            self._mul_raw(A, B).astype(dt),
            self._neg_raw(els).astype(dt),
        )

    @cached_property
    def _sigma_table(self):
        if self.order > TABLE_MAX:
            return None
        return self._sigma_raw(np.arange(self.order, dtype=np.int64)).astype(self.dtype)

    def add(self, a, b):
        t = self._tables
        if t is not None:
            return t[0][a, b]
        return self._add_raw(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))

    def mul(self, a, b):
        t = self._tables
        if t is not None:
            return t[1][a, b]
        return self._mul_raw(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))

    def neg(self, a):
        t = self._tables
        if t is not None:
            return t[2][a]
        return self._neg_raw(np.asarray(a, dtype=np.int64))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def sigma(self, a):
        t = self._sigma_table
        if t is not None:
            return t[a]
        return self._sigma_raw(np.asarray(a, dtype=np.int64))

    def sum(self, arr, axis=0):
        arr = np.moveaxis(np.asarray(arr), axis, 0)
        if arr.shape[0] == 0:
            return np.zeros(arr.shape[1:], dtype=self.dtype)
        acc = arr[0]
        for row in arr[1:]:
            acc = self.add(acc, row)
        return acc

    def is_unit(self, a):
        raise NotImplementedError

    def elements(self):
        return np.arange(self.order, dtype=self.dtype)


@dataclass(frozen=True)
class FieldSpec:
    p: int
    m: int

    @property
    def order(self) -> int:
        return self.p**self.m


class FieldTable(ScalarRing):
    """The field ``F_{p^m}`` with log/antilog/Zech tables.

    ``sigma`` is the unique involutive automorphism ``x -> x**(p**(m/2))`` and
    only exists for even ``m``.
    """

    def __init__(self, p: int, m: int):
        if not isprime(p):
            raise FieldError(f"p not prime: {p}")
        if m < 1:
            raise FieldError(f"degree must be >= 1, got {m}")
        if p**m > ORDER_CAP:
            raise FieldError(f"field order {p}^{m} exceeds cap 2^20")
        self.spec = FieldSpec(p, m)
        self.p = p
        self.m = m
        self.order = p**m
        self.poly = smallest_irreducible(p, m)
        self._weights = np.array([p**i for i in range(m)], dtype=np.int64)
        self.primitive = self._find_primitive()
        self._build_logs()

    def __repr__(self):
        return f"FieldTable(p={self.p}, m={self.m})"

    # construction

    def _find_primitive(self) -> int:
        Q = self.order
        if Q == 2:
            return 1
        primes = list(factorint(Q - 1))
        for c in range(2, Q):
            a = _code_to_poly(c, self.p, self.m)
            if all(_trim(_ppowmod(a, (Q - 1) // r, self.poly, self.p)) != [1] for r in primes):
                return c
        raise FieldError("no primitive element")  # pragma: no cover

    def _mulmat(self, c: int) -> np.ndarray:
        a = _code_to_poly(c, self.p, self.m)
        rows = []
        for j in range(self.m):
            xj = [0] * j + [1]
            prod = _pmulmod(a, xj, self.poly, self.p)
            rows.append(prod + [0] * (self.m - len(prod)))
        return np.array(rows, dtype=np.int64)

    def to_digits(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] // self._weights) % self.p

    def from_digits(self, d) -> np.ndarray:
        return (np.asarray(d, dtype=np.int64) % self.p) @ self._weights

    def _build_logs(self):
        Q = self.order
        N = Q - 1
        exp = np.ones(1, dtype=np.int64)
        g = self.primitive
        while exp.size < N:
            k = exp.size
            gk = _poly_to_code(
                _ppowmod(_code_to_poly(g, self.p, self.m), k, self.poly, self.p), self.p
            )
            block = self.from_digits(self.to_digits(exp) @ self._mulmat(gk))
            exp = np.concatenate([exp, block])[:N]
        log = np.full(Q, -1, dtype=np.int64)
        log[exp] = np.arange(N)
        if np.any(log[1:] < 0):
            raise FieldError("primitive element does not generate")  # pragma: no cover
        self.exp = np.concatenate([exp, exp])
        self.log = log
        plus_one = exp - exp % self.p + (exp % self.p + 1) % self.p
        self.zech = log[plus_one]  # -1 where 1 + g^k == 0

    # arithmetic kernels

    def _add_raw(self, a, b):
        N = self.order - 1
        la, lb = self.log[a], self.log[b]
        z = self.zech[(lb - la) % N] if N else np.zeros_like(la)
        out = np.where(z < 0, 0, self.exp[(la + z) % N if N else 0])
        out = np.where(b == 0, a, out)
        return np.where(a == 0, b, out)

    def _mul_raw(self, a, b):
        N = self.order - 1
        return np.where((a == 0) | (b == 0), 0, self.exp[(self.log[a] + self.log[b]) % N])

    def _neg_raw(self, a):
        if self.p == 2:
            return a
        N = self.order - 1
        return np.where(a == 0, 0, self.exp[(self.log[a] + N // 2) % N])

    def _sigma_raw(self, a):
        if self.m % 2:
            raise FieldError(f"F_{self.order} has no automorphism of order 2")
        return self.power(a, self.p ** (self.m // 2))

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        N = self.order - 1
        return self.exp[(-self.log[a]) % N]

    def power(self, a, k: int):
        a = np.asarray(a, dtype=np.int64)
        N = self.order - 1
        out = self.exp[(self.log[np.where(a == 0, 1, a)] * (k % N)) % N]
        if k == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, out)

    def is_unit(self, a):
        return np.asarray(a) != 0

    def residue(self, a):
        return np.asarray(a)

    @property
    def residue_field(self) -> "FieldTable":
        return self

    @property
    def sub_order(self) -> int:
        """Order ``q`` of the subfield fixed by ``sigma``."""
        if self.m % 2:
            raise FieldError(f"F_{self.order} is not a quadratic extension")
        return self.p ** (self.m // 2)

    def frob(self, x, subfield_order: int):
        """``x -> x**subfield_order``; the argument must be a power of p."""
        k, r = 0, subfield_order
        while r > 1 and r % self.p == 0:
            r //= self.p
            k += 1
        if r != 1:
            raise FieldError(f"{subfield_order} is not a power of {self.p}")
        return self.power(x, subfield_order)

    def in_subfield(self, x, sub_order: int):
        return self.frob(x, sub_order) == np.asarray(x)

    def norm(self, x):
        """Relative norm ``x**(q+1)`` from ``F_{q^2}`` down to ``F_q``."""
        return self.power(x, self.sub_order + 1)

    def solve_norm(self, c: int) -> list[int]:
        """All ``v`` with ``v**(q+1) == c``, sorted by code."""
        q = self.sub_order
        c = int(c)
        if c == 0:
            return [0]
        lc = int(self.log[c])
        if lc % (q + 1):
            return []
        base = lc // (q + 1)
        N = self.order - 1
        return sorted(int(self.exp[(base + k * (q - 1)) % N]) for k in range(q + 1))

    def scalar(self, k: int) -> int:
        """Image of the integer ``k`` in the prime field."""
        return k % self.p


def build_field(p: int, m: int) -> FieldTable:
    return _build_field_cached(p, m)


_FIELD_CACHE: dict[tuple[int, int], FieldTable] = {}


def _build_field_cached(p, m):
    key = (p, m)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = FieldTable(p, m)
    return _FIELD_CACHE[key]


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q = p**m``; raise if q is not a prime power."""
    if q < 2:
        raise FieldError(f"q must be a prime power, got {q}")
    f = factorint(q)
    if len(f) != 1:
        raise FieldError(f"q must be a prime power, got {q}")
    ((p, m),) = f.items()
    return p, m


def embedding(small: FieldTable, big: FieldTable) -> np.ndarray:
    """Injective ring map ``small -> big`` as a lookup table.

    The generator ``x`` of ``small`` goes to the smallest-code root of its
    defining polynomial in ``big``.
    """
    if small.p != big.p or big.m % small.m:
        raise FieldError(f"F_{small.order} is not a subfield of F_{big.order}")
    els = np.arange(big.order, dtype=np.int64)
    acc = np.zeros_like(els)
    for c in reversed(small.poly):
        acc = big.add(big.mul(acc, els), np.full_like(els, c))
    roots = np.flatnonzero(acc == 0)
    rho = int(roots[0])
    powers = [1]
    for _ in range(small.m - 1):
        powers.append(int(big.mul(powers[-1], rho)))
    digits = small.to_digits(np.arange(small.order))
    table = np.zeros(small.order, dtype=np.int64)
    for i, pw in enumerate(powers):
        table = big.add(table, big.mul(digits[:, i], pw))
    return table


def multiplicative_order(a: int, n: int) -> int:
    if n == 1:
        return 1
    k, x = 1, a % n
    while x != 1:
        x = x * a % n
        k += 1
    return k


@dataclass
class TowerContext:
    """``F_q`` inside ``F_{q^2}`` inside the field splitting ``x**N - 1``."""

    q: int
    exponent: int
    base: FieldTable
    quad: FieldTable
    splitting: FieldTable
    t: int
    base_to_quad: np.ndarray = field(repr=False)
    quad_to_split: np.ndarray = field(repr=False)
    split_to_quad: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, q: int, exponent: int) -> "TowerContext":
        p, m = prime_power(q)
        if np.gcd(exponent, q) != 1:
            raise FieldError(f"gcd(n, q) must be 1 (exponent {exponent}, q {q})")
        t = multiplicative_order(q * q, exponent)
        base = build_field(p, m)
        quad = build_field(p, 2 * m)
        splitting = build_field(p, 2 * m * t)
        b2q = embedding(base, quad)
        q2s = embedding(quad, splitting)
        s2q = np.full(splitting.order, -1, dtype=np.int64)
        s2q[q2s] = np.arange(quad.order)
        return cls(q, exponent, base, quad, splitting, t, b2q, q2s, s2q)

    def in_base(self, x):
        return self.quad.in_subfield(x, self.q)
