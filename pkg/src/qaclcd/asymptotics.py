"""Entropy, counting bounds and small-length diagnostics.

Linear parts of every exponent are exact (``Fraction``/``int``).  Logarithms
go through ``mpmath`` interval arithmetic so that a reported comparison is
rigorous: a bound is said to hold only when it holds at the unfavourable end
of the interval.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod

import mpmath
import numpy as np
from mpmath import iv

from . import linalg
from .gf import multiplicative_order
from .idempotents import IdempotentSystem, component_basis
from .lcd_field import count_D_lambda

GRID_BITS = 20
iv.prec = 96
mpmath.mp.prec = 96


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x).limit_denominator(10**12) if isinstance(x, float) else Fraction(x)


def _check_range(q: int, delta: Fraction):
    if delta < 0 or delta > 1 - Fraction(1, q):
        raise ValueError(f"delta = {delta} outside [0, 1 - 1/{q}]")


def entropy_iv(q: int, delta) -> "iv.mpf":
    """Interval enclosure of ``h_q(delta)``."""
    d = _frac(delta)
    _check_range(q, d)
    if d == 0:
        return iv.mpf(0)
    dv = iv.mpf(d.numerator) / d.denominator
    lq = iv.log(q)
    out = dv * iv.log(q - 1) / lq - dv * iv.log(dv) / lq
    if d != 1:
        out -= (1 - dv) * iv.log(1 - dv) / lq
    return out


def entropy_hq(q: int, delta) -> float:
    """``h_q(delta) = delta log_q(q-1) - delta log_q delta - (1-delta) log_q(1-delta)``."""
    d = _frac(delta)
    _check_range(q, d)
    if d == 0:
        return 0.0
    dv = mpmath.mpf(d.numerator) / d.denominator
    out = dv * mpmath.log(q - 1, q) - dv * mpmath.log(dv, q)
    if d != 1:
        out -= (1 - dv) * mpmath.log(1 - dv, q)
    return float(out)


def _log_ratio_iv(q: int, n: int, mu: int):
    return iv.log(n) / iv.log(q) / mu


def margin_iv(q: int, n: int, mu: int, delta):
    """Enclosure of ``1/2 - h_q(delta) - log_q n / mu``."""
    return iv.mpf(0.5) - entropy_iv(q, delta) - _log_ratio_iv(q, n, mu)


def _lo(x) -> float:
    return float(mpmath.mpf(x.a))


def _hi(x) -> float:
    return float(mpmath.mpf(x.b))


@dataclass
class BoundReport:
    q: int
    n: int
    mu: int
    lam: int | None = None
    delta: Fraction | None = None
    hypothesis_ok: bool | None = None
    status: str = "ok"
    lower_bound: int | None = None
    exact_count: int | None = None
    cor41_hypothesis: bool | None = None
    cor41_holds: bool | None = None
    upper_bound_le_delta: float | None = None
    ratio_bound: float | None = None
    census_le_delta: int | None = None
    census_ratio: Fraction | None = None
    bound_holds_vs_census: bool | None = None
    notes: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        out = {}
        for k, v in self.__dict__.items():
            if isinstance(v, Fraction):
                v = f"{v.numerator}/{v.denominator}"
            out[k] = v
        return out


def cor41_check(system: IdempotentSystem, lam: int) -> BoundReport:
    """Compare ``q^{n-2}`` with ``|D_lambda|``; hypothesis ``log_q n <= mu`` tested as ``n <= q^mu``."""
    q, n, mu = system.q, system.group.n, system.mu
    count, _ = count_D_lambda(system, lam)
    rep = BoundReport(q, n, mu, lam)
    rep.lower_bound = q ** (n - 2)
    rep.exact_count = count
    rep.cor41_hypothesis = n <= q**mu
    rep.cor41_holds = rep.lower_bound <= count
    return rep


def thm311_bound(
    system: IdempotentSystem, delta, lam: int | None = None, census: int | None = None, total: int | None = None
) -> BoundReport:
    """Upper bound ``q^{n + 4 - 2 mu x}`` on ``|D^{<= delta}|`` and ratio bound ``q^{-2 mu x + 6}``.

    ``x = 1/2 - h_q(delta) - log_q n / mu``; when ``x > 0`` cannot be certified
    the report carries status ``not-applicable``.
    """
    q, n, mu = system.q, system.group.n, system.mu
    d = _frac(delta)
    rep = BoundReport(q, n, mu, lam, d)
    x = margin_iv(q, n, mu, d)
    rep.hypothesis_ok = _lo(x) > 0
    rep.census_le_delta = census
    if census is not None and total:
        rep.census_ratio = Fraction(census, total)
    if not rep.hypothesis_ok:
        rep.status = "not-applicable"
        if _hi(x) > 0:
            rep.notes.append("hypothesis margin straddles 0 at working precision")
        return rep
    expo = n + 4 - 2 * mu * x
    ratio = 6 - 2 * mu * x
    rep.upper_bound_le_delta = float(mpmath.mpf(q) ** mpmath.mpf(expo.b))
    rep.ratio_bound = float(mpmath.mpf(q) ** mpmath.mpf(ratio.b))
    if census is not None:
        # certified only if census is below the smallest value in the enclosure
        rep.bound_holds_vs_census = census <= mpmath.mpf(q) ** mpmath.mpf(expo.a)
    return rep


def max_good_delta(q: int, n: int, mu: int) -> Fraction | None:
    """Largest ``k / 2^20`` with a certified positive margin, or None."""
    if not _lo(margin_iv(q, n, mu, 0)) > 0:
        return None
    scale = 1 << GRID_BITS
    top = (scale * (q - 1)) // q  # last grid point inside the entropy domain
    lo, hi = 0, top + 1  # margin(lo) > 0; hi is a sentinel
    if _lo(margin_iv(q, n, mu, Fraction(top, scale))) > 0:
        return Fraction(top, scale)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _lo(margin_iv(q, n, mu, Fraction(mid, scale))) > 0:
            lo = mid
        else:
            hi = mid
    return Fraction(lo, scale)


def mu_cyclic(q: int, n: int) -> int:
    """``mu_q(n)`` for the cyclic group of order n: the least ``ord_d(q^2)`` over divisors ``d > 1``."""
    return min(multiplicative_order(q * q % d, d) for d in range(2, n + 1) if n % d == 0)


@dataclass(frozen=True)
class LengthRow:
    n: int
    mu: int
    ratio: float


def scan_lengths(q: int, n_max: int) -> list[LengthRow]:
    rows = []
    for n in range(3, n_max + 1, 2):
        if gcd(n, q) != 1:
            continue
        mu = mu_cyclic(q, n)
        rows.append(LengthRow(n, mu, float(mpmath.log(n, q) / mu)))
    rows.sort(key=lambda r: (r.ratio, r.n))
    return rows


@dataclass
class ProductIneq:
    q: int
    exponents: tuple[int, ...]
    hypothesis_ok: bool
    a_lhs: int
    a_rhs: int
    a_holds: bool
    b_lhs: int
    b_rhs: int
    b_holds: bool


def product_ineq_report(q: int, exponents) -> ProductIneq:
    """Both sides of ``prod(q^l - 1) >= q^{sum l} - 2`` and ``prod(q^l + 1) <= q^{sum l} + 2``."""
    ls = tuple(int(x) for x in exponents)
    m = len(ls)
    total = q ** sum(ls)
    a_lhs = prod(q**x - 1 for x in ls)
    b_lhs = prod(q**x + 1 for x in ls)
    return ProductIneq(
        q,
        ls,
        all(q**x >= m for x in ls),
        a_lhs,
        total - 2,
        a_lhs >= total - 2,
        b_lhs,
        total + 2,
        b_lhs <= total + 2,
    )


def omega_sizes(system: IdempotentSystem) -> dict[int, int]:
    """``|Omega_l|``: subsets of the nontrivial merged idempotents with ``sum k = l``."""
    ks = [c.k for c in system.components[1:]]
    if len(ks) > 20:
        raise ValueError("too many components to enumerate subsets")
    out: dict[int, int] = {}
    for r in range(1, len(ks) + 1):
        for sub in itertools.combinations(ks, r):
            out[sum(sub)] = out.get(sum(sub), 0) + 1
    return dict(sorted(out.items()))


def omega_check(system: IdempotentSystem) -> list[tuple[int, int, bool]]:
    """``(l, |Omega_l|, |Omega_l| < n^{l/mu})`` with the power compared exactly."""
    n, mu = system.group.n, system.mu
    # |Omega| < n^{l/mu}  <=>  |Omega|^mu < n^l
    return [(ell, size, size**mu < n**ell) for ell, size in omega_sizes(system).items()]


def ball_bound_check(system: IdempotentSystem, deltas=None, cap: int = 2**22) -> list[dict]:
    """Weight-ball counts in ``I x I`` for each merged component ideal ``I``.

    The count of pairs with ``wt(x) + wt(y) <= 2 n delta`` is compared with
    ``q^{h_q(delta) * 2 dim_F(I x I)}``.  Components with ``|I|^2 > cap`` are skipped.
    """
    F = system.field
    n = system.group.n
    q = system.q
    if deltas is None:
        deltas = [Fraction(k, 10) for k in range(1, 7)]
    out = []
    for comp in system.components:
        basis = component_basis(F, comp.idem)
        size = F.order ** len(basis)
        if size * size > cap:
            continue
        w = np.count_nonzero(linalg.span(F, basis), axis=1)
        hist = np.bincount(w, minlength=n + 1).astype(object)
        pair_hist = np.convolve(hist, hist)
        dim_fq = 2 * (2 * comp.k)
        for d in deltas:
            d = _frac(d)
            if d > 1 - Fraction(1, q):
                continue
            radius = int(2 * n * d)  # floor of 2 n delta
            count = int(sum(pair_hist[: radius + 1]))
            bound = iv.mpf(q) ** (entropy_iv(q, d) * dim_fq)
            out.append(
                {
                    "component": comp.label,
                    "delta": d,
                    "count": count,
                    "bound": float(mpmath.mpf(bound.a)),
                    "holds": bool(count <= mpmath.mpf(bound.a)),
                }
            )
    return out
