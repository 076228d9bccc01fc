"""Codes ``C_{a,b} = {s(a, b) : s in FG}`` over ``F = F_{q^2}`` and the family ``D_lambda``.

``D_lambda`` is parameterised by the elements ``beta`` of ``FG`` with
``beta * beta^tau = lambda - 1``.  Solutions are assembled component by
component from the merged idempotent decomposition; an exhaustive scan of
``FG`` serves as the independent oracle.
"""

from __future__ import annotations

import itertools
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import prod

import numpy as np
from sympy import factorint

from . import linalg
from .gf import FieldTable, ScalarRing
from .group_algebra import (
    AlgebraElem,
    GroupSpec,
    all_elements,
    convolve_many,
    convolve_pairs,
    mult_matrix,
    serialize,
    sigma_hat,
    sigma_hat_many,
)
from .idempotents import Component, IdempotentSystem, component_basis

log = logging.getLogger(__name__)

EXHAUSTIVE_COMPONENT_CAP = 2**20
SCAN_CAP = 2**26
CHUNK = 2**16


class CapExceeded(ValueError):
    pass


def default_threads() -> int:
    env = os.environ.get("QACLCD_THREADS")
    return max(1, int(env)) if env else 1


# -- codes ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class QuasiAbelianCode:
    a: AlgebraElem
    b: AlgebraElem

    @property
    def ring(self) -> ScalarRing:
        return self.a.ring

    @property
    def group(self) -> GroupSpec:
        return self.a.group

    @cached_property
    def generator_matrix(self) -> np.ndarray:
        """Rows ``g (a, b)`` for ``g`` in G."""
        return np.hstack([mult_matrix(self.a).T, mult_matrix(self.b).T])

    @cached_property
    def rank(self) -> int:
        return linalg.rank(self.ring, self.generator_matrix)


def code_from_pair(a: AlgebraElem, b: AlgebraElem) -> QuasiAbelianCode:
    a._check(b)
    return QuasiAbelianCode(a, b)


def sufficient_lcd_check(a: AlgebraElem, b: AlgebraElem) -> int | None:
    """``lambda`` if ``a a^tau + b b^tau`` is a nonzero constant, else None."""
    t = a * sigma_hat(a) + b * sigma_hat(b)
    c = t.coeffs
    if c[0] != 0 and not c[1:].any():
        return int(c[0])
    return None


def hermitian_gram(R: ScalarRing, M) -> np.ndarray:
    """``M sigma(M)^T``: entry ``(i, j)`` is ``<row_i, row_j>_H``."""
    M = np.asarray(M)
    return linalg.matmul(R, M, R.sigma(M).T)


def intersection_dim(F: FieldTable, M) -> int:
    """``dim (C cap C^perp_H)`` from a nullspace basis of the dual."""
    M = np.asarray(M, dtype=np.int64)
    dual = linalg.nullspace(F, F.sigma(M))
    rk_c = linalg.rank(F, M)
    if dual.shape[0] == 0:
        return 0
    return rk_c + dual.shape[0] - linalg.rank(F, np.vstack([M, dual]))


def exact_lcd_check(code: QuasiAbelianCode, cross_check: bool | None = None) -> bool:
    """Hermitian LCD test by nonsingularity of the Gram matrix.

    For ``n <= 12`` the answer is cross-validated against the dimension of
    ``C cap C^perp_H`` computed from a nullspace basis of the dual.
    """
    F = code.ring
    M = code.generator_matrix
    n = code.group.n
    if code.rank != n:
        raise ValueError(f"generator matrix has rank {code.rank} < n = {n}")
    lcd = linalg.is_nonsingular(F, hermitian_gram(F, M))
    if cross_check is None:
        cross_check = n <= 12
    if cross_check:
        other = intersection_dim(F, M) == 0
        if other != lcd:  # pragma: no cover
            raise ArithmeticError("Gram and nullspace LCD tests disagree")
    return lcd


# -- lambda admissibility ---------------------------------------------------


def lambda_problem(system: IdempotentSystem, lam: int) -> str | None:
    """Why ``lambda`` is not admissible, or None when ``lambda - 1 in F_q^*``."""
    F = system.field
    q = system.q
    if q == 2:
        return "no admissible λ for q=2"
    if not 0 <= lam < F.order:
        return f"lambda {lam} is not an element code of F_{F.order}"
    if lam == 0:
        return "lambda must be nonzero"
    lm1 = int(F.sub(lam, 1))
    if lm1 == 0:
        return "lambda - 1 must be nonzero"
    if not bool(system.tower.in_base(lm1)):
        return f"lambda - 1 = {lm1} is not in F_{q}"
    return None


def admissible_lambdas(system: IdempotentSystem) -> list[int]:
    return [lam for lam in range(system.field.order) if lambda_problem(system, lam) is None]


# -- components as fields ---------------------------------------------------


class ComponentField:
    """The field ``F G e`` for a primitive idempotent ``e`` (identity ``e``)."""

    def __init__(self, system: IdempotentSystem, e: AlgebraElem):
        self.F = system.field
        self.G = system.group
        self.e = e
        self.basis = component_basis(self.F, e)
        self.k = len(self.basis)
        self.order = self.F.order**self.k

    def mul(self, A, b) -> np.ndarray:
        return convolve_many(self.F, self.G, A, b)

    def power(self, a: np.ndarray, k: int) -> np.ndarray:
        result = self.e.coeffs.copy()
        base = np.asarray(a)
        while k:
            if k & 1:
                result = self.mul(result[None], base)[0]
            base = self.mul(base[None], base)[0]
            k >>= 1
        return result

    def random(self, rng: np.random.Generator) -> np.ndarray:
        c = rng.integers(0, self.F.order, self.k)
        return linalg.matmul(self.F, c[None], self.basis)[0]

    def find_primitive(self, seed: int = 0) -> np.ndarray:
        """Random search for a generator of ``(F G e)^x`` with an order test."""
        rng = np.random.default_rng(seed)
        N = self.order - 1
        primes = list(factorint(N))
        e = self.e.coeffs
        while True:
            g = self.random(rng)
            if not g.any():
                continue
            if all(not np.array_equal(self.power(g, N // r), e) for r in primes):
                return g

    def all_powers(self, gamma: np.ndarray) -> np.ndarray:
        """``gamma**j`` for ``j = 0 .. order-2`` as rows."""
        N = self.order - 1
        P = self.e.coeffs[None].astype(np.int64)
        while len(P) < N:
            step = self.power(gamma, len(P))
            P = np.vstack([P, self.mul(P, step)])[:N]
        return P

    def elements(self) -> np.ndarray:
        return linalg.span(self.F, self.basis)


@dataclass
class NormSolutionSet:
    component: Component
    kind: str
    expected: int
    solutions: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.solutions)


def _sort_rows(A: np.ndarray) -> np.ndarray:
    if len(A) == 0:
        return A
    return A[np.lexsort(A.T)]


def _norm_products(F, G, A) -> np.ndarray:
    return convolve_pairs(F, G, A, sigma_hat_many(F, G, A))


def solve_component_norm(
    system: IdempotentSystem, comp: Component, lam: int, *, verify: bool = True
) -> NormSolutionSet:
    """All ``alpha`` in the component with ``alpha alpha^tau = (lambda-1) idem``."""
    F = system.field
    G = system.group
    q = system.q
    lm1 = int(F.sub(lam, 1))
    target = F.mul(comp.idem.coeffs, lm1)
    if lm1 == 0:
        log.warning("lambda - 1 = 0: degenerate component equation")
        return NormSolutionSet(comp, comp.kind, 0, np.zeros((0, G.n), dtype=np.int64))
    in_base = bool(system.tower.in_base(lm1))

    if comp.kind == "e0":
        nus = F.solve_norm(lm1)
        sols = F.mul(np.array(nus, dtype=np.int64)[:, None], comp.idem.coeffs[None, :])
        sols = sols.reshape(len(nus), G.n)
        expected = q + 1 if in_base else 0

    elif comp.kind == "fixed":
        K = ComponentField(system, comp.idem)
        expected = q**comp.k + 1 if in_base else 0
        if K.order <= EXHAUSTIVE_COMPONENT_CAP:
            parts = []
            elems = K.elements()
            for i in range(0, len(elems), CHUNK):
                blk = elems[i : i + CHUNK]
                hit = np.all(_norm_products(F, G, blk) == target, axis=1)
                parts.append(blk[hit])
            sols = np.vstack(parts)
        else:
            sols = _fixed_by_logs(K, q, comp.k, lm1) if in_base else np.zeros((0, G.n), dtype=np.int64)

    elif comp.kind == "paired":
        K = ComponentField(system, comp.primitive)
        expected = q**comp.k - 1 if in_base else 0
        gamma = K.find_primitive()
        P = K.all_powers(gamma)
        N = len(P)
        inv = P[(-np.arange(N)) % N]
        other = F.mul(sigma_hat_many(F, G, inv), lm1)
        other = convolve_many(F, G, other, comp.partner.coeffs)
        sols = F.add(P, other)
        if not in_base:
            # the trivial component already rules these out; keep the count honest
            ok = np.all(_norm_products(F, G, sols) == target, axis=1)
            sols = sols[ok]
    else:  # pragma: no cover
        raise ValueError(comp.kind)

    sols = _sort_rows(np.asarray(sols, dtype=np.int64))
    if verify and len(sols):
        bad = ~np.all(_norm_products(F, G, sols) == target, axis=1)
        if bad.any():
            raise ArithmeticError(f"{int(bad.sum())} component solutions fail the norm equation")
    return NormSolutionSet(comp, comp.kind, expected, sols)


def _fixed_by_logs(K: ComponentField, q: int, k: int, lm1: int) -> np.ndarray:
    """Norm solutions in a large tau-fixed component via discrete logs.

    On ``F G e_i`` tau acts as ``x -> x^{q^k}``, so the equation reads
    ``alpha^{q^k + 1} = (lambda - 1) e_i``.
    """
    F = K.F
    gamma = K.find_primitive()
    N = K.order - 1
    M = q**k - 1
    # (lambda-1) e_i lies in the copy of F_q^*, generated by gamma^{N/(q-1)}
    eta_step = N // (q - 1)
    target = F.mul(K.e.coeffs, lm1)
    eta = K.power(gamma, eta_step)
    cur = K.e.coeffs.copy()
    j0 = None
    for j in range(q - 1):
        if np.array_equal(cur, target):
            j0 = j
            break
        cur = K.mul(cur[None], eta)[0]
    if j0 is None:  # pragma: no cover
        raise ArithmeticError("lambda - 1 not found in the prime-field copy")
    base = j0 * (M // (q - 1))
    exps = [(base + t * M) % N for t in range(q**k + 1)]
    return np.array([K.power(gamma, x) for x in exps])


def component_solutions(system: IdempotentSystem, lam: int, *, verify: bool = True) -> list[NormSolutionSet]:
    return [solve_component_norm(system, c, lam, verify=verify) for c in system.components]


def materialize_D_lambda(system: IdempotentSystem, lam: int) -> np.ndarray:
    """Every ``beta`` in ``D_lambda`` as rows, in Cartesian component order.

    The first component (trivial) varies slowest; within a component rows are
    sorted by their integer id.
    """
    problem = lambda_problem(system, lam)
    G = system.group
    if problem:
        log.warning(problem)
        return np.zeros((0, G.n), dtype=np.int64)
    F = system.field
    acc = np.zeros((1, G.n), dtype=np.int64)
    for sol in component_solutions(system, lam):
        acc = F.add(acc[:, None, :], sol.solutions[None, :, :]).reshape(-1, G.n)
    return acc


def enumerate_D_lambda(system: IdempotentSystem, lam: int, *, debug: bool = False):
    """Iterate ``beta`` in ``D_lambda`` as ``AlgebraElem`` (same order as materialize)."""
    problem = lambda_problem(system, lam)
    if problem:
        log.warning(problem)
        return
    F = system.field
    G = system.group
    sets = [s.solutions for s in component_solutions(system, lam)]
    target = AlgebraElem.scalar(F, G, int(F.sub(lam, 1)))
    for parts in itertools.product(*sets):
        v = parts[0]
        for w in parts[1:]:
            v = F.add(v, w)
        beta = AlgebraElem(F, G, v)
        if debug and beta * sigma_hat(beta) != target:
            raise ArithmeticError(f"beta {serialize(beta)} fails the norm equation")
        yield beta


def count_D_lambda(system: IdempotentSystem, lam: int) -> tuple[int, list[tuple[str, int]]]:
    """Closed-form ``|D_lambda|`` with its per-component factors."""
    q = system.q
    if lambda_problem(system, lam):
        return 0, []
    factors = [("e0", q + 1)]
    factors += [(c.label, q**c.k + 1) for c in system.fixed]
    factors += [(c.label, q**c.k - 1) for c in system.paired]
    return prod(f for _, f in factors), factors


def _scan_chunk(F, G, target, start, stop) -> int:
    B = all_elements(F, G, start, stop)
    SB = F.sigma(B)
    for h in range(G.n):
        # coefficient at h of beta * sigma_hat(beta) is sum_g beta_g sigma(beta_{h^-1 g})
        val = F.sum(F.mul(B, SB[:, G.div_idx[h]]), axis=1)
        keep = val == target[h]
        B, SB = B[keep], SB[keep]
        if not len(B):
            return 0
    return len(B)


def brute_force_D_lambda(system: IdempotentSystem, lam: int, threads: int | None = None) -> int:
    """Exhaustive count of ``beta`` in FG with ``beta sigma_hat(beta) = (lambda-1) 1_G``."""
    F = system.field
    G = system.group
    total = F.order**G.n
    if total > SCAN_CAP:
        raise CapExceeded(f"(q^2)^n = {total} exceeds scan cap 2^26")
    target = np.zeros(G.n, dtype=np.int64)
    target[0] = int(F.sub(lam, 1))
    F._tables  # build shared tables before threads start
    F._sigma_table
    bounds = [(i, min(i + CHUNK * 4, total)) for i in range(0, total, CHUNK * 4)]
    threads = threads or default_threads()
    if threads == 1:
        return sum(_scan_chunk(F, G, target, a, b) for a, b in bounds)
    with ThreadPoolExecutor(threads) as ex:
        return sum(ex.map(lambda ab: _scan_chunk(F, G, target, *ab), bounds))


# -- weights ------------------------------------------------------------------


def _span_chunks(R: ScalarRing, rows: np.ndarray, max_rows: int = 2**20):
    """Yield ``(offset, block)`` covering the span of ``rows`` in span order."""
    rows = np.asarray(rows)
    Q = R.order
    n_low = len(rows)
    while n_low > 0 and Q**n_low > max_rows:
        n_low -= 1
    low = linalg.span(R, rows[:n_low])
    high = rows[n_low:]
    if len(high) == 0:
        yield 0, low
        return
    combos = linalg.span(R, high)
    for i, shift in enumerate(combos):
        yield i * len(low), R.add(low, shift[None, :].astype(low.dtype))


def span_min_weight(R: ScalarRing, rows, cap: int = SCAN_CAP) -> int:
    """Minimum weight of a nonzero word in the span of ``rows`` (exhaustive)."""
    rows = np.asarray(rows)
    total = R.order ** len(rows)
    if total > cap:
        raise CapExceeded(f"{total} codewords exceed exact-scan cap")
    best = None
    for _, blk in _span_chunks(R, rows):
        w = np.count_nonzero(blk, axis=1)
        w = w[w > 0]
        if len(w):
            m = int(w.min())
            best = m if best is None else min(best, m)
    return 0 if best is None else best


def min_weight_exact(code: QuasiAbelianCode, cap: int = SCAN_CAP) -> int:
    """Exact minimum weight of ``C_{a,b}`` over all nonzero codewords."""
    return span_min_weight(code.ring, code.generator_matrix, cap)


def min_weight_one_beta(R: ScalarRing, G: GroupSpec, beta, cap: int = SCAN_CAP) -> int:
    """``min_{s != 0} wt(s) + wt(s beta)`` for ``C_{1,beta}``; the ``wt(s)`` part is reused."""
    total = R.order**G.n
    if total > cap:
        raise CapExceeded(f"(|R|)^n = {total} exceeds exact-scan cap")
    rows = mult_matrix(AlgebraElem(R, G, beta)).T
    ws_all = _identity_weights(R.order, G.n)
    best = None
    for off, blk in _span_chunks(R, rows):
        w = ws_all[off : off + len(blk)] + np.count_nonzero(blk, axis=1)
        if off == 0:
            w = w[1:]
        m = int(w.min())
        best = m if best is None else min(best, m)
    return best


_IDW: dict = {}


def _identity_weights(Q: int, n: int) -> np.ndarray:
    key = (Q, n)
    if key not in _IDW:
        idx = np.arange(Q**n, dtype=np.int64)
        w = np.zeros(idx.size, dtype=np.int16)
        for _ in range(n):
            w += (idx % Q != 0).astype(np.int16)
            idx //= Q
        _IDW[key] = w
    return _IDW[key]


def sparse_samples(R: ScalarRing, n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """``k`` random nonzero vectors: support size uniform in ``1..n``, then support and values."""
    sizes = rng.integers(1, n + 1, k)
    keys = rng.random((k, n))
    ranks = np.argsort(np.argsort(keys, axis=1), axis=1)
    mask = ranks < sizes[:, None]
    units = R.elements()[1:]
    vals = units[rng.integers(0, len(units), (k, n))]
    return np.where(mask, vals, 0)


def min_weight_sampled(code: QuasiAbelianCode, trials: int, seed: int = 0) -> int:
    """Upper bound on the minimum weight from ``trials`` random nonzero ``s``."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    R = code.ring
    M = code.generator_matrix
    rng = np.random.default_rng(seed)
    best = M.shape[1]
    done = 0
    while done < trials:
        k = min(CHUNK, trials - done)
        S = sparse_samples(R, M.shape[0], k, rng)
        done += k
        w = np.count_nonzero(linalg.matmul(R, S, M), axis=1)
        w = w[w > 0]
        if len(w):
            best = min(best, int(w.min()))
    return best


# -- census -----------------------------------------------------------------


@dataclass(frozen=True)
class CensusRow:
    beta_id: str
    min_wt: int
    delta: Fraction
    lcd_sufficient: bool
    lcd_exact: bool
    exact_scan: bool = True


def census_rows(system: IdempotentSystem, lam: int, threads: int | None = None) -> list[CensusRow]:
    """One row per ``beta`` in ``D_lambda`` with exact minimum weight and LCD flags."""
    F = system.field
    G = system.group
    betas = materialize_D_lambda(system, lam)
    if F.order**G.n > SCAN_CAP:
        raise CapExceeded("exact census needs (q^2)^n <= 2^26")
    F._tables
    F._sigma_table
    _identity_weights(F.order, G.n)
    one = AlgebraElem.one(F, G)

    def row(b):
        beta = AlgebraElem(F, G, b)
        mw = min_weight_one_beta(F, G, b)
        suff = sufficient_lcd_check(one, beta) is not None
        exact = exact_lcd_check(code_from_pair(one, beta))
        return CensusRow(serialize(beta), mw, Fraction(mw, 2 * G.n), suff, exact)

    threads = threads or default_threads()
    if threads == 1:
        return [row(b) for b in betas]
    with ThreadPoolExecutor(threads) as ex:
        return list(ex.map(row, betas))


def census_le_delta(rows: list[CensusRow], delta: Fraction) -> int:
    return sum(1 for r in rows if r.delta <= delta)


# -- supports and D_{a,b} ---------------------------------------------------


def support_ell(system: IdempotentSystem, a: AlgebraElem) -> tuple[list[Component], int]:
    """Merged nontrivial idempotents not annihilating ``a`` and the sum of their ``k``."""
    comps = [c for c in system.components[1:] if not (c.idem * a).is_zero()]
    return comps, sum(c.k for c in comps)


def support_mask(system: IdempotentSystem, a: AlgebraElem) -> tuple[bool, ...]:
    return tuple(not (c.idem * a).is_zero() for c in system.components)


def count_D_ab(
    system: IdempotentSystem, lam: int, a: AlgebraElem, b: AlgebraElem, family: np.ndarray | None = None
) -> tuple[int, bool]:
    """``#{beta in D_lambda : b = a beta}`` and whether ``E_a == E_b``."""
    F = system.field
    G = system.group
    same = support_mask(system, a) == support_mask(system, b)
    if family is None:
        family = materialize_D_lambda(system, lam)
    if not same:
        return 0, False
    prods = convolve_many(F, G, family, a.coeffs)
    return int(np.sum(np.all(prods == b.coeffs, axis=1))), True
