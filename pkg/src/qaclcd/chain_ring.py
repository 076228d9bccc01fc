"""Finite chain rings with a degree-2 Galois extension S|R.

Two families are implemented:

* ``uA`` -- ``S = F_{q^2}[u]/(u^s)`` over ``R = F_q[u]/(u^s)``.  Element code
  ``sum c_k Q**k`` with ``Q = q^2`` and ``c_k`` a field code.
* ``gr`` -- ``S = GR(p^s, 2m)`` over ``R = GR(p^s, m)``, realised as
  ``Z_{p^s}[x]/(F)`` where ``F`` is the Hensel lift of the smallest degree-2m
  irreducible over ``F_p`` dividing ``x^{p^{2m}-1} - 1``.  Element code
  ``sum c_i (p^s)**i``.

In both families the code of ``1`` is ``1`` and the residue of a code is a
code of ``F_{q^2}`` built by :func:`qaclcd.gf.build_field`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .gf import FieldError, ScalarRing, build_field, prime_power

SIZE_CAP = 2**24


class ChainRingError(ValueError):
    pass


@dataclass(frozen=True)
class ChainRingSpec:
    family: str  # "A" or "B"
    s: int
    q: int | None = None
    p: int | None = None
    m: int | None = None

    @classmethod
    def parse(cls, text: str) -> "ChainRingSpec":
        """Parse ``uA:q=2,s=2`` or ``gr:p=3,s=2,m=1``."""
        mt = re.fullmatch(r"\s*(uA|gr)\s*:\s*(.*)", text)
        if not mt:
            raise ChainRingError(f"bad ring descriptor {text!r}")
        kv = {}
        for part in mt.group(2).split(","):
            if "=" not in part:
                raise ChainRingError(f"bad ring descriptor {text!r}")
            k, v = part.split("=", 1)
            kv[k.strip()] = int(v)
        try:
            if mt.group(1) == "uA":
                return cls("A", kv["s"], q=kv["q"])
            return cls("B", kv["s"], p=kv["p"], m=kv["m"])
        except KeyError as exc:
            raise ChainRingError(f"missing parameter {exc} in {text!r}") from exc

    def __str__(self):
        if self.family == "A":
            return f"uA:q={self.q},s={self.s}"
        return f"gr:p={self.p},s={self.s},m={self.m}"


class ChainRing(ScalarRing):
    """Shared behaviour of the two families; see the module docstring."""

    spec: ChainRingSpec
    s: int
    q: int
    residue_field: object

    def residue(self, a):
        raise NotImplementedError

    def lift(self, x, mode: str = "naive"):
        raise NotImplementedError

    def from_int(self, k: int) -> int:
        raise NotImplementedError

    @property
    def uniformizer(self) -> int:
        raise NotImplementedError

    def is_unit(self, a):
        return self.residue(a) != 0

    def newton_steps(self) -> int:
        return math.ceil(math.log2(self.s)) + 1

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if not np.all(self.is_unit(a)):
            raise ZeroDivisionError("not a unit")
        F = self.residue_field
        x = self.lift(F.inv(self.residue(a)))
        two = self.from_int(2)
        for _ in range(self.newton_steps()):
            x = self.mul(x, self.sub(two, self.mul(a, x)))
        return x

    def power(self, a, k: int):
        a = np.asarray(a, dtype=np.int64)
        result = np.ones_like(a)
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def in_base(self, a):
        """Membership in the fixed ring R of sigma."""
        return self.sigma(a) == np.asarray(a)


class FamilyA(ChainRing):
    def __init__(self, q: int, s: int):
        p, m = prime_power(q)
        if s < 1:
            raise ChainRingError("s must be >= 1")
        F = build_field(p, 2 * m)
        if F.order**s > SIZE_CAP:
            raise ChainRingError(f"|S| = {F.order}^{s} exceeds cap 2^24")
        self.spec = ChainRingSpec("A", s, q=q)
        self.q, self.s, self.p = q, s, p
        self.residue_field = F
        self.Q = F.order
        self.order = self.Q**s
        self._w = np.array([self.Q**k for k in range(s)], dtype=np.int64)

    def __repr__(self):
        return f"FamilyA(q={self.q}, s={self.s})"

    def digits(self, a):
        return (np.asarray(a, dtype=np.int64)[..., None] // self._w) % self.Q

    def undigits(self, d):
        return np.asarray(d, dtype=np.int64) @ self._w

    def _add_raw(self, a, b):
        F = self.residue_field
        return self.undigits(F.add(self.digits(a), self.digits(b)))

    def _neg_raw(self, a):
        return self.undigits(self.residue_field.neg(self.digits(a)))

    def _mul_raw(self, a, b):
        F = self.residue_field
        da, db = self.digits(a), self.digits(b)
        da, db = np.broadcast_arrays(da, db)
        out = np.zeros(da.shape, dtype=np.int64)
        for i in range(self.s):
            for j in range(self.s - i):
                out[..., i + j] = F.add(out[..., i + j], F.mul(da[..., i], db[..., j]))
        return self.undigits(out)

    def _sigma_raw(self, a):
        return self.undigits(self.residue_field.sigma(self.digits(a)))

    def residue(self, a):
        return np.asarray(a) % self.Q

    def lift(self, x, mode: str = "naive"):
        # F_{q^2} sits inside S as the constants, which are already Teichmuller.
        if mode not in ("naive", "teichmuller"):
            raise ChainRingError(f"unknown lift mode {mode}")
        return np.asarray(x, dtype=np.int64)

    def from_int(self, k: int) -> int:
        return k % self.p

    @property
    def uniformizer(self) -> int:
        return self.Q if self.s > 1 else 0


# -- polynomials over Z/N, coefficient lists low degree first ---------------


def _zmod(a, f, N):
    """Remainder of ``a`` modulo the monic ``f`` over Z/N."""
    a = [x % N for x in a]
    d = len(f) - 1
    for i in range(len(a) - 1, d - 1, -1):
        c = a[i]
        if c:
            for j in range(d + 1):
                a[i - d + j] = (a[i - d + j] - c * f[j]) % N
    return (a + [0] * d)[:d]


def _zmul(a, b, N):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % N
    return out


def _zdivexact(a, f, N):
    """Quotient of ``a`` by the monic ``f`` over Z/N (remainder discarded)."""
    a = [x % N for x in a]
    d = len(f) - 1
    qt = [0] * max(1, len(a) - d)
    for i in range(len(a) - 1, d - 1, -1):
        c = a[i]
        qt[i - d] = c
        if c:
            for j in range(d + 1):
                a[i - d + j] = (a[i - d + j] - c * f[j]) % N
    return qt


def _fp_xgcd(a, b, p):
    """Polynomials ``(u, v)`` over F_p with ``u a + v b = 1``."""

    def trim(x):
        x = [c % p for c in x]
        while x and x[-1] == 0:
            x.pop()
        return x

    def sub(x, y):
        n = max(len(x), len(y))
        return trim([(x[i] if i < len(x) else 0) - (y[i] if i < len(y) else 0) for i in range(n)])

    def divmod_(x, y):
        x = trim(x)
        inv = pow(y[-1], -1, p)
        qt = [0] * max(1, len(x) - len(y) + 1)
        while len(x) >= len(y):
            c = x[-1] * inv % p
            k = len(x) - len(y)
            qt[k] = c
            x = sub(x, [0] * k + [c * t for t in y])
        return trim(qt), x

    r0, r1 = trim(a), trim(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        qt, r = divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, trim(_zmul(qt, s1, p)) if s1 else [])
        t0, t1 = t1, sub(t0, trim(_zmul(qt, t1, p)) if t1 else [])
    if len(r0) != 1:
        raise ChainRingError("polynomials are not coprime")  # pragma: no cover
    inv = pow(r0[0], -1, p)
    return [c * inv % p for c in s0], [c * inv % p for c in t0]


def hensel_lift(f: list[int], p: int, s: int) -> list[int]:
    """Monic lift of ``f`` to Z/p^s dividing ``x^{p^deg f - 1} - 1``.

    Linear Hensel lifting of the factorization ``x^{Q-1} - 1 = f h`` mod p,
    one p-adic digit per step.
    """
    D = len(f) - 1
    Q = p**D
    P = [-1] + [0] * (Q - 2) + [1]
    h = _zdivexact(P, f, p)
    a, b = _fp_xgcd(f, h, p)  # a f + b h = 1
    F, H = list(f), list(h)
    for k in range(1, s):
        pk = p**k
        N = pk * p
        FH = _zmul(F, H, N)
        diff = [((P[i] if i < len(P) else 0) - (FH[i] if i < len(FH) else 0)) % N for i in range(max(len(P), len(FH)))]
        if any(x % pk for x in diff):  # pragma: no cover
            raise ChainRingError("Hensel invariant broken")
        e = [(x // pk) % p for x in diff]
        dF = _zmod(_zmul(b, e, p), f, p)
        dH = _zmod(_zmul(a, e, p), h, p)
        F = [(F[i] + pk * (dF[i] if i < len(dF) else 0)) % N for i in range(len(F))]
        H = [(H[i] + pk * (dH[i] if i < len(dH) else 0)) % N for i in range(len(H))]
    return F


class FamilyB(ChainRing):
    def __init__(self, p: int, s: int, m: int):
        if s < 1 or m < 1:
            raise ChainRingError("s and m must be >= 1")
        try:
            F = build_field(p, 2 * m)
        except FieldError as exc:
            raise ChainRingError(str(exc)) from exc
        D = 2 * m
        self.N = p**s
        if self.N**D > SIZE_CAP:
            raise ChainRingError(f"|S| = {p}^{2 * m * s} exceeds cap 2^24")
        self.spec = ChainRingSpec("B", s, p=p, m=m)
        self.p, self.s, self.m, self.D = p, s, m, D
        self.q = p**m
        self.residue_field = F
        self.order = self.N**D
        self.modulus = hensel_lift(F.poly, p, s)
        self._w = np.array([self.N**i for i in range(D)], dtype=np.int64)
        self._wres = np.array([p**i for i in range(D)], dtype=np.int64)
        # x^k mod F for k = 0 .. 2D-2, as coefficient rows
        red = []
        for k in range(2 * D - 1):
            red.append(_zmod([0] * k + [1], self.modulus, self.N))
        self._red = np.array(red, dtype=np.int64)
        # sigma: x -> x^{p^m}
        xpm = self._pow_vec([0, 1] + [0] * (D - 2), self.q)
        imgs = [[1] + [0] * (D - 1)]
        for _ in range(D - 1):
            imgs.append(self._mul_vec(imgs[-1], xpm))
        self._sigma_mat = np.array(imgs, dtype=np.int64)

    def __repr__(self):
        return f"FamilyB(p={self.p}, s={self.s}, m={self.m})"

    def _mul_vec(self, a, b):
        full = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)) % self.N
        full = np.concatenate([full, np.zeros(2 * self.D - 1 - full.size, dtype=np.int64)])
        return list((full @ self._red) % self.N)

    def _pow_vec(self, a, k):
        result = [1] + [0] * (self.D - 1)
        base = list(a)
        while k:
            if k & 1:
                result = self._mul_vec(result, base)
            base = self._mul_vec(base, base)
            k >>= 1
        return result

    def digits(self, a):
        return (np.asarray(a, dtype=np.int64)[..., None] // self._w) % self.N

    def undigits(self, d):
        return (np.asarray(d, dtype=np.int64) % self.N) @ self._w

    def _add_raw(self, a, b):
        return self.undigits(self.digits(a) + self.digits(b))

    def _neg_raw(self, a):
        return self.undigits(-self.digits(a))

    def _mul_raw(self, a, b):
        da, db = np.broadcast_arrays(self.digits(a), self.digits(b))
        D = self.D
        full = np.zeros(da.shape[:-1] + (2 * D - 1,), dtype=np.int64)
        for i in range(D):
            for j in range(D):
                full[..., i + j] += da[..., i] * db[..., j]
        full %= self.N
        return self.undigits(full @ self._red)

    def _sigma_raw(self, a):
        return self.undigits(self.digits(a) @ self._sigma_mat)

    def residue(self, a):
        return (self.digits(a) % self.p) @ self._wres

    def lift(self, x, mode: str = "naive"):
        F = self.residue_field
        naive = self.undigits(F.to_digits(x))
        if mode == "naive":
            return naive
        if mode == "teichmuller":
            return self.power(naive, F.order ** (self.s - 1))
        raise ChainRingError(f"unknown lift mode {mode}")

    def from_int(self, k: int) -> int:
        return k % self.N

    @property
    def uniformizer(self) -> int:
        return self.p % self.N


def build_chain_ring(spec: ChainRingSpec | str) -> ChainRing:
    if isinstance(spec, str):
        spec = ChainRingSpec.parse(spec)
    if spec.family == "A":
        if spec.q is None:
            raise ChainRingError("family A needs q")
        return FamilyA(spec.q, spec.s)
    if spec.p is None or spec.m is None:
        raise ChainRingError("family B needs p and m")
    return FamilyB(spec.p, spec.s, spec.m)


def pi(S: ChainRing, x):
    return S.residue(x)


def lift(S: ChainRing, x, mode: str = "naive"):
    return S.lift(x, mode)


def sigma_ring(S: ChainRing, x):
    return S.sigma(x)


def is_unit_chain(S: ChainRing, x):
    return S.is_unit(x)


def ideals(S: ChainRing) -> list[frozenset[int]]:
    """All distinct principal ideals ``S x`` (every ideal of a chain ring is principal)."""
    els = np.arange(S.order, dtype=np.int64)
    seen = {}
    for x in range(S.order):
        key = frozenset(np.unique(S.mul(els, x)).tolist())
        seen[key] = True
    return sorted(seen, key=len, reverse=True)


def maximal_ideal_powers(S: ChainRing) -> list[frozenset[int]]:
    """``m^k`` for ``k = 0 .. s`` as element sets."""
    els = np.arange(S.order, dtype=np.int64)
    out = []
    gen = 1
    for _ in range(S.s + 1):
        out.append(frozenset(np.unique(S.mul(els, gen)).tolist()))
        gen = int(S.mul(gen, S.uniformizer)) if S.s > 1 else 0
    return out


def cyclic_submodules(S: ChainRing) -> list[frozenset[tuple[int, int]]]:
    """Distinct submodules of ``S^2`` generated by at most two vectors."""
    els = np.arange(S.order, dtype=np.int64)
    cyc = set()
    for a in range(S.order):
        for b in range(S.order):
            xs = S.mul(els, a)
            ys = S.mul(els, b)
            cyc.add(frozenset(zip(xs.tolist(), ys.tolist())))
    cyc = list(cyc)
    mods = set(cyc)
    arrs = [np.array(sorted(c), dtype=np.int64) for c in cyc]
    for i in range(len(arrs)):
        for j in range(i + 1, len(arrs)):
            A, B = arrs[i], arrs[j]
            x = S.add(A[:, None, 0], B[None, :, 0]).ravel()
            y = S.add(A[:, None, 1], B[None, :, 1]).ravel()
            mods.add(frozenset(zip(x.tolist(), y.tolist())))
    return sorted(mods, key=lambda m: (len(m), sorted(m)))


def nakayama_holds(S: ChainRing, M: frozenset[tuple[int, int]]) -> bool:
    """For nonzero ``M``: ``M * m != M`` (``m`` generated by the uniformizer)."""
    if M == frozenset({(0, 0)}):
        return True
    t = S.uniformizer
    scaled = frozenset((int(S.mul(x, t)), int(S.mul(y, t))) for x, y in M)
    return scaled != M
