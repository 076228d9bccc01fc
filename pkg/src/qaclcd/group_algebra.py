"""Commutative group algebras RG of finite abelian groups.

The group ``Z_{n_1} x ... x Z_{n_k}`` is indexed in mixed radix with the first
invariant factor most significant; index 0 is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import gcd, prod

import numpy as np

from . import linalg
from .gf import FieldTable, ScalarRing


class GroupError(ValueError):
    pass


@dataclass(frozen=True)
class GroupSpec:
    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        f = tuple(int(x) for x in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", f)
        if not f or any(x < 1 for x in f):
            raise GroupError(f"bad invariant factors {f}")
        for a, b in zip(f, f[1:]):
            if b % a:
                raise GroupError(f"invariant factors must divide each other: {f}")
        if prod(f) % 2 == 0:
            raise GroupError(f"group order must be odd, got {prod(f)}")

    @classmethod
    def parse(cls, text: str) -> "GroupSpec":
        """``"7"`` or ``"3,3"`` (comma- or x-separated invariant factors)."""
        parts = text.replace("x", ",").split(",")
        try:
            return cls(tuple(int(p) for p in parts if p.strip()))
        except ValueError as exc:
            raise GroupError(f"cannot parse group {text!r}") from exc

    @property
    def n(self) -> int:
        return prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1]

    def check_coprime(self, q: int):
        if gcd(self.n, q) != 1:
            raise GroupError(f"gcd(n, q) must be 1, got n={self.n}, q={q}")

    def __str__(self):
        return "x".join(str(x) for x in self.invariant_factors)

    @cached_property
    def tuples(self) -> np.ndarray:
        """``(n, k)`` array of coordinates of every element."""
        out = np.zeros((self.n, len(self.invariant_factors)), dtype=np.int64)
        idx = np.arange(self.n)
        for j in reversed(range(len(self.invariant_factors))):
            nj = self.invariant_factors[j]
            out[:, j] = idx % nj
            idx = idx // nj
        return out

    def index(self, coords) -> np.ndarray:
        coords = np.asarray(coords) % np.array(self.invariant_factors)
        out = np.zeros(coords.shape[:-1], dtype=np.int64)
        for j, nj in enumerate(self.invariant_factors):
            out = out * nj + coords[..., j]
        return out

    @cached_property
    def mul_idx(self) -> np.ndarray:
        t = self.tuples
        return self.index(t[:, None, :] + t[None, :, :])

    @cached_property
    def inv_idx(self) -> np.ndarray:
        return self.index(-self.tuples)

    @cached_property
    def div_idx(self) -> np.ndarray:
        """``div_idx[g, h]`` is the index of ``g^{-1} h``."""
        t = self.tuples
        return self.index(t[None, :, :] - t[:, None, :])


def _ro(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class AlgebraElem:
    ring: ScalarRing
    group: GroupSpec
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.int64)
        if c.shape != (self.group.n,):
            raise GroupError(f"expected {self.group.n} coefficients, got shape {c.shape}")
        object.__setattr__(self, "coeffs", _ro(c))

    @classmethod
    def zero(cls, ring, group):
        return cls(ring, group, np.zeros(group.n, dtype=np.int64))

    @classmethod
    def one(cls, ring, group):
        return cls.scalar(ring, group, 1)

    @classmethod
    def scalar(cls, ring, group, c: int):
        v = np.zeros(group.n, dtype=np.int64)
        v[0] = c
        return cls(ring, group, v)

    @classmethod
    def basis(cls, ring, group, g: int, c: int = 1):
        v = np.zeros(group.n, dtype=np.int64)
        v[g] = c
        return cls(ring, group, v)

    def _check(self, other: "AlgebraElem"):
        if other.ring is not self.ring or other.group != self.group:
            raise GroupError("group/ring mismatch")

    def __add__(self, other):
        self._check(other)
        return AlgebraElem(self.ring, self.group, self.ring.add(self.coeffs, other.coeffs))

    def __sub__(self, other):
        self._check(other)
        return AlgebraElem(self.ring, self.group, self.ring.sub(self.coeffs, other.coeffs))

    def __neg__(self):
        return AlgebraElem(self.ring, self.group, self.ring.neg(self.coeffs))

    def __mul__(self, other):
        if isinstance(other, AlgebraElem):
            return convolve(self, other)
        return AlgebraElem(self.ring, self.group, self.ring.mul(self.coeffs, int(other)))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, AlgebraElem):
            return NotImplemented
        return self.group == other.group and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.group, self.coeffs.tobytes()))

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def map(self, fn, ring: ScalarRing) -> "AlgebraElem":
        """Apply a coefficientwise map landing in ``ring``."""
        return AlgebraElem(ring, self.group, fn(self.coeffs))


def convolve(a: AlgebraElem, b: AlgebraElem) -> AlgebraElem:
    a._check(b)
    return AlgebraElem(a.ring, a.group, convolve_many(a.ring, a.group, a.coeffs[None], b.coeffs)[0])


def convolve_many(R: ScalarRing, G: GroupSpec, A, b) -> np.ndarray:
    """Products ``a * b`` for every row ``a`` of ``A`` with a fixed ``b``."""
    A = np.asarray(A)
    B = np.asarray(b)[G.div_idx]  # B[g, h] = b_{g^-1 h}
    out = None
    for g in range(G.n):
        term = R.mul(A[:, g : g + 1], B[g][None, :])
        out = term if out is None else R.add(out, term)
    return out


def convolve_pairs(R: ScalarRing, G: GroupSpec, A, B) -> np.ndarray:
    """Rowwise products ``A[i] * B[i]``."""
    A = np.asarray(A)
    B = np.asarray(B)
    out = None
    for g in range(G.n):
        term = R.mul(A[:, g : g + 1], B[:, G.div_idx[g]])
        out = term if out is None else R.add(out, term)
    return out


def sigma_hat_many(R: ScalarRing, G: GroupSpec, A) -> np.ndarray:
    A = np.asarray(A)
    return R.sigma(A[..., G.inv_idx])


def sigma_hat(a: AlgebraElem) -> AlgebraElem:
    return AlgebraElem(a.ring, a.group, sigma_hat_many(a.ring, a.group, a.coeffs))


def phi(a: AlgebraElem) -> int:
    return int(a.coeffs[0])


def hermitian(a: AlgebraElem, b: AlgebraElem) -> int:
    """``sum_g a_g sigma(b_g)`` computed directly."""
    R = a.ring
    return int(R.sum(R.mul(a.coeffs, R.sigma(b.coeffs))))


def weight(a: AlgebraElem) -> int:
    return int(np.count_nonzero(a.coeffs))


def translate(a: AlgebraElem, g: int) -> AlgebraElem:
    return a * AlgebraElem.basis(a.ring, a.group, g)


def mult_matrix(a: AlgebraElem) -> np.ndarray:
    """Matrix ``M`` with ``M @ coeffs(x) == coeffs(a * x)`` (column convention)."""
    G = a.group
    # (a x)_h = sum_g a_{h g^-1} x_g, and h g^-1 = (g^-1 h)
    return a.coeffs[G.div_idx].T.copy()


def is_unit(a: AlgebraElem) -> bool:
    R = a.ring
    if isinstance(R, FieldTable):
        return linalg.is_nonsingular(R, mult_matrix(a))
    return is_unit(residue(a))


def residue(a: AlgebraElem) -> AlgebraElem:
    """Coefficientwise residue map into the residue field's group algebra."""
    R = a.ring
    return AlgebraElem(R.residue_field, a.group, R.residue(a.coeffs))


def try_inverse(a: AlgebraElem) -> AlgebraElem | None:
    R = a.ring
    G = a.group
    one = AlgebraElem.one(R, G)
    if isinstance(R, FieldTable):
        rhs = np.zeros(G.n, dtype=np.int64)
        rhs[0] = 1
        M = mult_matrix(a)
        if not linalg.is_nonsingular(R, M):
            return None
        return AlgebraElem(R, G, linalg.solve(R, M, rhs))
    r = try_inverse(residue(a))
    if r is None:
        return None
    x = AlgebraElem(R, G, R.lift(r.coeffs))
    two = AlgebraElem.scalar(R, G, R.from_int(2))
    for _ in range(R.newton_steps()):
        if a * x == one:
            break
        x = x * (two - a * x)
    if a * x != one:  # pragma: no cover
        raise ArithmeticError("Newton inversion did not converge")
    return x


def random_elem(R: ScalarRing, G: GroupSpec, rng: np.random.Generator) -> AlgebraElem:
    return AlgebraElem(R, G, rng.integers(0, R.order, G.n))


def all_elements(R: ScalarRing, G: GroupSpec, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Coefficient rows for the integers ``start..stop`` read in base ``|R|``.

    Row ``k`` holds the base-``|R|`` digits of ``k`` with group index ``g``
    weighted by ``|R|**g``.
    """
    total = R.order**G.n
    stop = total if stop is None else min(stop, total)
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.zeros((idx.size, G.n), dtype=R.dtype)
    for g in range(G.n):
        out[:, g] = idx % R.order
        idx //= R.order
    return out


_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def serialize(a: AlgebraElem) -> str:
    """Comma-free base-``|R|`` digit string, most significant group index first.

    Orders up to 36 use one character from ``0-9a-z``; larger orders use
    zero-padded decimal fields of fixed width.
    """
    Q = a.ring.order
    coeffs = a.coeffs[::-1]
    if Q <= 36:
        return "".join(_DIGITS[int(c)] for c in coeffs)
    w = len(str(Q - 1))
    return "".join(str(int(c)).zfill(w) for c in coeffs)


def deserialize(R: ScalarRing, G: GroupSpec, text: str) -> AlgebraElem:
    Q = R.order
    if Q <= 36:
        if len(text) != G.n:
            raise GroupError(f"expected {G.n} digits, got {len(text)}")
        vals = [_DIGITS.index(ch) for ch in text.lower()]
    else:
        w = len(str(Q - 1))
        if len(text) != G.n * w:
            raise GroupError(f"expected {G.n * w} characters, got {len(text)}")
        vals = [int(text[i : i + w]) for i in range(0, len(text), w)]
    if any(v >= Q for v in vals):
        raise GroupError(f"digit out of range for ring of order {Q}")
    return AlgebraElem(R, G, np.array(vals[::-1]))
