"""Codes over ``SG`` for a finite chain ring ``S``: idempotent lifting, LCD tests, lifting of field codes."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import linalg
from .chain_ring import ChainRing
from .group_algebra import (
    AlgebraElem,
    all_elements,
    is_unit,
    mult_matrix,
    residue,
    sigma_hat,
)
from .idempotents import Component, IdempotentSystem
from .lcd_field import (
    CapExceeded,
    code_from_pair,
    exact_lcd_check,
    hermitian_gram,
    min_weight_one_beta,
    span_min_weight,
    sparse_samples,
)

CHAIN_SCAN_CAP = 2**22
CHUNK = 2**16


class LiftError(ArithmeticError):
    pass


def lift_idempotent(S: ChainRing, f: AlgebraElem, start: AlgebraElem) -> AlgebraElem:
    """Idempotent of ``SG`` over ``f`` reached from ``start`` by ``h <- 3h^2 - 2h^3``."""
    if not np.array_equal(S.residue(start.coeffs), f.coeffs):
        raise LiftError("start is not a preimage of f")
    three = AlgebraElem.scalar(S, start.group, S.from_int(3))
    two = AlgebraElem.scalar(S, start.group, S.from_int(2))
    h = start
    for _ in range(S.newton_steps() + 1):
        h2 = h * h
        if h2 == h:
            return h
        h = three * h2 - two * h2 * h
    if h * h != h:
        raise LiftError("idempotent lifting did not converge")
    return h


@dataclass(frozen=True, eq=False)
class LiftedSystem:
    ring: ChainRing
    system: IdempotentSystem
    components: tuple[Component, ...]
    lifts: tuple[AlgebraElem, ...]

    def checks(self) -> list[tuple[str, bool]]:
        S = self.ring
        G = self.system.group
        L = self.lifts
        zero = AlgebraElem.zero(S, G)
        total = zero
        for x in L:
            total = total + x
        return [
            ("lifted idempotents are idempotent", all(x * x == x for x in L)),
            ("pairwise products vanish", all(L[i] * L[j] == zero for i in range(len(L)) for j in range(i + 1, len(L)))),
            ("lifts sum to 1", total == AlgebraElem.one(S, G)),
            (
                "residues match",
                all(np.array_equal(S.residue(x.coeffs), c.idem.coeffs) for x, c in zip(L, self.components)),
            ),
        ]


def _default_start(S: ChainRing, e: AlgebraElem) -> AlgebraElem:
    mode = "naive" if S.spec.family == "A" else "teichmuller"
    return AlgebraElem(S, e.group, S.lift(e.coeffs, mode))


def random_start(S: ChainRing, e: AlgebraElem, rng: np.random.Generator) -> AlgebraElem:
    """A random preimage of ``e``: naive lift plus a random element of the maximal ideal."""
    t = S.uniformizer
    noise = S.mul(rng.integers(0, S.order, e.group.n), t)
    return AlgebraElem(S, e.group, S.add(S.lift(e.coeffs), noise))


def decompose_SG(S: ChainRing, system: IdempotentSystem) -> LiftedSystem:
    """Lift every merged idempotent (trivial, fixed, paired) to ``SG``."""
    if S.residue_field is not system.field:
        raise LiftError("residue field of S differs from the idempotent system's field")
    comps = system.components
    lifts = tuple(lift_idempotent(S, c.idem, _default_start(S, c.idem)) for c in comps)
    return LiftedSystem(S, system, comps, lifts)


@dataclass(frozen=True, eq=False)
class ChainCode:
    c: AlgebraElem
    d: AlgebraElem

    @property
    def ring(self) -> ChainRing:
        return self.c.ring

    @property
    def group(self):
        return self.c.group

    @cached_property
    def generator_matrix(self) -> np.ndarray:
        return np.hstack([mult_matrix(self.c).T, mult_matrix(self.d).T])

    @cached_property
    def rank(self) -> int:
        """Free rank: number of unit pivots."""
        return linalg.unit_pivot_rank(self.ring, self.generator_matrix)

    @property
    def is_free(self) -> bool:
        return self.rank == self.group.n


def chain_code_from_pair(c: AlgebraElem, d: AlgebraElem) -> ChainCode:
    c._check(d)
    return ChainCode(c, d)


def unit_lcd_check(c: AlgebraElem, d: AlgebraElem) -> bool:
    return is_unit(residue(c * sigma_hat(c) + d * sigma_hat(d)))


def dual_generator(d: AlgebraElem) -> np.ndarray:
    """Rows ``g (-sigma_hat(d), 1)`` generating the Hermitian dual of the ``c = 1`` code."""
    S = d.ring
    one = AlgebraElem.one(S, d.group)
    return ChainCode(-sigma_hat(d), one).generator_matrix


def dual_is_free(d: AlgebraElem) -> bool:
    S = d.ring
    M = ChainCode(AlgebraElem.one(S, d.group), d).generator_matrix
    N = dual_generator(d)
    orth = not linalg.matmul(S, M, S.sigma(N).T).any()
    return orth and linalg.unit_pivot_rank(S, N) == d.group.n


def _scan_kernel(S, G, gram, M, start, stop) -> bool:
    U = all_elements(S, G, start, stop)
    for col in range(gram.shape[1]):
        v = S.sum(S.mul(U, gram[:, col][None, :]), axis=1)
        U = U[v == 0]
        if not len(U):
            return False
    U = U[U.any(axis=1)]
    if not len(U):
        return False
    return bool(linalg.matmul(S, U, M).any())


def lcd_direct(code: ChainCode, cap: int = CHAIN_SCAN_CAP) -> bool:
    """Exhaustive test that no nonzero codeword lies in the Hermitian dual.

    ``u M`` is in the dual iff ``u M sigma(M)^T = 0``; the scan filters the
    candidates ``u`` one Gram column at a time.
    """
    S = code.ring
    G = code.group
    total = S.order**G.n
    if total > cap:
        raise CapExceeded(f"|S|^n = {total} exceeds chain scan cap 2^22")
    M = code.generator_matrix
    gram = hermitian_gram(S, M)
    step = CHUNK * 4
    return not any(_scan_kernel(S, G, gram, M, a, min(a + step, total)) for a in range(0, total, step))


def lcd_equiv_check(d: AlgebraElem, cap: int = CHAIN_SCAN_CAP) -> tuple[bool, bool | None, bool | None]:
    """``(lcd_residue, lcd_direct, agree)``; the last two are None beyond ``cap``."""
    S = d.ring
    F = S.residue_field
    G = d.group
    beta = residue(d)
    res = exact_lcd_check(code_from_pair(AlgebraElem.one(F, G), beta))
    try:
        direct = lcd_direct(chain_code_from_pair(AlgebraElem.one(S, G), d), cap)
    except CapExceeded:
        return res, None, None
    return res, direct, res == direct


def chain_min_weight(
    code: ChainCode, mode: str = "exact", seed: int = 0, trials: int = 10_000
) -> tuple[int, bool]:
    """Minimum weight and an exactness flag (False means sampled upper bound)."""
    S = code.ring
    G = code.group
    if mode == "exact":
        if S.order**G.n > CHAIN_SCAN_CAP:
            raise CapExceeded(f"|S|^n = {S.order**G.n} exceeds chain scan cap 2^22")
        if code.c == AlgebraElem.one(S, G):
            return min_weight_one_beta(S, G, code.d.coeffs, CHAIN_SCAN_CAP), True
        return span_min_weight(S, code.generator_matrix, CHAIN_SCAN_CAP), True
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode}")
    if trials <= 0:
        raise ValueError("trials must be positive")
    rng = np.random.default_rng(seed)
    M = code.generator_matrix
    best = M.shape[1]
    done = 0
    while done < trials:
        k = min(CHUNK, trials - done)
        U = sparse_samples(S, G.n, k, rng)
        done += k
        W = linalg.matmul(S, U, M)
        w = np.count_nonzero(W, axis=1)
        w = w[w > 0]
        if len(w):
            best = min(best, int(w.min()))
    return best, False


@dataclass
class LiftReport:
    beta: str
    d: str
    residue_params: tuple[int, int, int]
    chain_params: tuple[int, int, int]
    chain_min_wt_exact: bool
    lcd_residue: bool
    lcd_unit_criterion: bool
    lcd_direct: bool | None
    residue_identity: bool
    extra: dict = field(default_factory=dict)


def lift_code(
    S: ChainRing, beta: AlgebraElem, mode: str = "naive", *, sampled: bool = False, seed: int = 0, trials: int = 10_000
) -> LiftReport:
    """Lift ``C_{1,beta}`` to ``c_{1,d}`` with ``d`` the coefficientwise lift of ``beta``."""
    from .group_algebra import serialize

    F = S.residue_field
    if beta.ring is not F:
        raise LiftError("beta must live over the residue field of S")
    G = beta.group
    n = G.n
    d = AlgebraElem(S, G, S.lift(beta.coeffs, mode))
    field_code = code_from_pair(AlgebraElem.one(F, G), beta)
    chain = chain_code_from_pair(AlgebraElem.one(S, G), d)
    identity = np.array_equal(S.residue(chain.generator_matrix), field_code.generator_matrix)
    if not identity:  # pragma: no cover
        raise LiftError("residue of the lifted generator matrix differs from C_{1,beta}")
    res_wt = min_weight_one_beta(F, G, beta.coeffs)
    if sampled:
        ch_wt, exact = chain_min_weight(chain, "sampled", seed, trials)
    else:
        ch_wt, exact = chain_min_weight(chain, "exact")
    lcd_res = exact_lcd_check(field_code)
    try:
        direct = lcd_direct(chain)
    except CapExceeded:
        direct = None
    return LiftReport(
        beta=serialize(beta),
        d=serialize(d),
        residue_params=(2 * n, field_code.rank, res_wt),
        chain_params=(2 * n, chain.rank, ch_wt),
        chain_min_wt_exact=exact,
        lcd_residue=lcd_res,
        lcd_unit_criterion=unit_lcd_check(AlgebraElem.one(S, G), d),
        lcd_direct=direct,
        residue_identity=identity,
    )
