"""Primitive idempotents of F_{q^2}G and their classification under tau.

Primitive idempotents of the semisimple algebra ``F_{q^2}G`` correspond to the
orbits of ``a -> q^2 a`` on the character group (identified with G).  Each one
is a character sum evaluated in the splitting field and pulled back into
``F_{q^2}``.  ``tau`` maps the orbit of ``a`` to the orbit of ``-q a``.

Dimensions ``k`` are over ``F = F_{q^2}``, not over ``F_q``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from . import linalg
from .gf import TowerContext, build_field
from .group_algebra import (
    AlgebraElem,
    GroupSpec,
    convolve_many,
    convolve_pairs,
    sigma_hat,
    sigma_hat_many,
)


class IdempotentError(ValueError):
    pass


@dataclass(frozen=True)
class CharOrbit:
    representative: int
    members: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.members)


def compute_orbits(G: GroupSpec, qsq: int) -> list[CharOrbit]:
    """Partition of the character indices into orbits under ``a -> qsq * a``."""
    if gcd(G.n, qsq) != 1:
        raise IdempotentError(f"gcd(n, q) must be 1, got n={G.n}")
    seen = np.zeros(G.n, dtype=bool)
    times = G.index(G.tuples * qsq)
    orbits = []
    for a in range(G.n):
        if seen[a]:
            continue
        members = [a]
        b = int(times[a])
        while b != a:
            members.append(b)
            b = int(times[b])
        seen[members] = True
        orbits.append(CharOrbit(a, tuple(members)))
    return orbits


def tau_orbit_image(G: GroupSpec, orbits: list[CharOrbit], q: int, o: CharOrbit) -> CharOrbit:
    target = int(G.index(G.tuples[o.representative] * (-q)))
    for other in orbits:
        if target in other.members:
            return other
    raise IdempotentError("orbit list is not a partition")  # pragma: no cover


@dataclass(frozen=True, eq=False)
class Component:
    """One element of the merged set: ``e0``, a tau-fixed ``e_i``, or ``e + e^tau``.

    ``idem`` is the merged idempotent; for paired components ``primitive`` and
    ``partner`` hold ``e_{r+j}`` and ``e_{r+j}^tau``.  ``k`` is the dimension of
    ``F G idem`` over ``F``.
    """

    kind: str
    orbits: tuple[CharOrbit, ...]
    idem: AlgebraElem
    k: int
    primitive: AlgebraElem | None = None
    partner: AlgebraElem | None = None

    @property
    def label(self) -> str:
        return f"{self.kind}:{self.orbits[0].representative}"


@dataclass(frozen=True, eq=False)
class IdempotentSystem:
    group: GroupSpec
    tower: TowerContext
    orbits: tuple[CharOrbit, ...]
    e0: Component
    fixed: tuple[Component, ...]
    paired: tuple[Component, ...]
    primitive_idems: dict  # orbit representative -> AlgebraElem

    @property
    def q(self) -> int:
        return self.tower.q

    @property
    def field(self):
        return self.tower.quad

    @property
    def r(self) -> int:
        return len(self.fixed)

    @property
    def s(self) -> int:
        return len(self.paired)

    @property
    def t(self) -> int:
        return self.tower.t

    @property
    def components(self) -> tuple[Component, ...]:
        """Merged idempotents in the fixed order: trivial, fixed, paired."""
        return (self.e0, *self.fixed, *self.paired)

    @property
    def mu(self) -> int:
        return mu_q(self)


def _character_idempotent(G: GroupSpec, tower: TowerContext, orbit: CharOrbit) -> np.ndarray:
    K = tower.splitting
    N = G.exponent
    zeta = int(K.exp[(K.order - 1) // N])
    scale = np.array([N // ni for ni in G.invariant_factors], dtype=np.int64)
    a = G.tuples[list(orbit.members)]  # (|O|, k)
    # chi_a(g^{-1}) = zeta^{-<a, g>}
    expo = (-(a * scale) @ G.tuples.T) % N
    vals = K.exp[(K.log[zeta] * expo) % (K.order - 1)]
    sums = K.sum(vals, axis=0)
    pulled = tower.split_to_quad[sums]
    if np.any(pulled < 0):
        raise IdempotentError(f"idempotent coefficient outside F_{tower.quad.order}")
    F = tower.quad
    n_inv = pow(G.n, -1, F.p)
    return F.mul(pulled, n_inv)


def build_idempotents(G: GroupSpec, q: int, tower: TowerContext | None = None) -> IdempotentSystem:
    G.check_coprime(q)
    if tower is None:
        tower = TowerContext.build(q, G.exponent)
    F = tower.quad
    orbits = compute_orbits(G, q * q)
    prims = {o.representative: AlgebraElem(F, G, _character_idempotent(G, tower, o)) for o in orbits}
    e0 = Component("e0", (orbits[0],), prims[0], 1)
    fixed, paired = [], []
    done = set()
    for o in orbits[1:]:
        if o.representative in done:
            continue
        img = tau_orbit_image(G, orbits, q, o)
        e = prims[o.representative]
        if sigma_hat(e) != prims[img.representative]:
            raise IdempotentError("tau does not permute primitive idempotents as predicted")
        if img == o:
            fixed.append(Component("fixed", (o,), e, o.size))
        else:
            et = prims[img.representative]
            paired.append(Component("paired", (o, img), e + et, o.size + img.size, e, et))
            done.add(img.representative)
        done.add(o.representative)
    return IdempotentSystem(G, tower, tuple(orbits), e0, tuple(fixed), tuple(paired), prims)


def mu_q(system: IdempotentSystem) -> int:
    """Minimum ``dim_F FGe`` over nontrivial primitive idempotents."""
    sizes = [o.size for o in system.orbits[1:]]
    if not sizes:
        raise IdempotentError("n = 1 has no nontrivial idempotent")
    return min(sizes)


def component_basis(F, e: AlgebraElem) -> np.ndarray:
    """F-basis (rows) of the ideal ``F G e``."""
    G = e.group
    gens = np.array([(e * AlgebraElem.basis(F, G, g)).coeffs for g in range(G.n)])
    R, piv = linalg.rref(F, gens)
    return R[: len(piv)]


def tau_fixed_dim(system: IdempotentSystem, comp: Component) -> int:
    """``dim_{F_q}`` of ``{a in F G e : a^tau = a}``.

    Computed as the nullity of ``tau - id`` over the prime field, acting on the
    ``F_p``-coordinates of the component.
    """
    F = system.field
    G = system.group
    basis = component_basis(F, comp.idem)
    # F_p-basis: x^j * b_i
    scalars = np.array([F.p**j for j in range(F.m)])
    fp_basis = F.mul(scalars[:, None, None], basis[None, :, :]).reshape(-1, G.n)
    image = F.sub(sigma_hat_many(F, G, fp_basis), fp_basis)
    Fp = build_field(F.p, 1)
    coords = F.to_digits(image).reshape(len(fp_basis), -1)
    rk = linalg.rank(Fp, coords)
    nullity = len(fp_basis) - rk
    base_m = system.tower.base.m
    if nullity % base_m:  # pragma: no cover
        raise IdempotentError("tau-fixed space is not an F_q-space")
    return nullity // base_m


def primitive_list(system: IdempotentSystem) -> list[AlgebraElem]:
    return [system.primitive_idems[o.representative] for o in system.orbits]


def count_component_idempotents(system: IdempotentSystem, e: AlgebraElem, cap: int = 2**16) -> int | None:
    """Number of idempotents in ``F G e``; None when the component exceeds ``cap``."""
    F = system.field
    basis = component_basis(F, e)
    if F.order ** len(basis) > cap:
        return None
    elems = linalg.span(F, basis)
    G = system.group
    sq = convolve_pairs(F, G, elems, elems)
    return int(np.sum(np.all(sq == elems, axis=1)))


def check_system(system: IdempotentSystem) -> list[tuple[str, bool]]:
    """Exact bookkeeping checks for a built system."""
    F = system.field
    G = system.group
    prims = primitive_list(system)
    one = AlgebraElem.one(F, G)
    zero = AlgebraElem.zero(F, G)
    out = []
    out.append(("idempotent e*e == e", all(e * e == e for e in prims)))
    out.append(
        (
            "orthogonal e*f == 0",
            all(prims[i] * prims[j] == zero for i in range(len(prims)) for j in range(i + 1, len(prims))),
        )
    )
    total = zero
    for c in system.components:
        total = total + c.idem
    out.append(("merged idempotents sum to 1", total == one))
    dims = 1 + sum(c.k for c in system.fixed) + sum(c.k for c in system.paired)
    out.append(("1 + sum k_i + sum k_hat == n", dims == G.n))
    out.append(("every k_hat even", all(c.k % 2 == 0 for c in system.paired)))
    for c in system.components:
        out.append((f"dim_F F G e == k ({c.label})", len(component_basis(F, c.idem)) == c.k))
    return out


def idempotent_products(system: IdempotentSystem, a_rows) -> np.ndarray:
    """``(len(a_rows), #components)`` mask: does ``e * a`` vanish."""
    F = system.field
    G = system.group
    out = []
    for c in system.components:
        prod = convolve_many(F, G, a_rows, c.idem.coeffs)
        out.append(np.any(prod != 0, axis=1))
    return np.stack(out, axis=1)
