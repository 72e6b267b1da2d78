"""
Chains (x_1, ..., x_i) of nonzero values with every consecutive pair on the
basic curve, plus the u- and z-subtowers and the separated-variable forms.

Over GF(ell) every z_s equals -1, so the z-side identities are vacuous there;
pass a larger field (``spec.extension_field(2)``) to exercise them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from towerlab.basic_field import (
    PointPair,
    TowerSpec,
    fiber,
    is_point,
    recover_u,
    wz_map,
)
from towerlab.errors import CapExceeded, IdentityViolation, ZeroArgument
from towerlab.finite_field import ENUMERATION_CAP, FieldSpec, Felt, trace_q

Chain = tuple[Felt, ...]


@dataclass(frozen=True)
class SubtowerChain:
    u: tuple[Felt, ...]
    z: tuple[Felt, ...]


def is_chain(spec: TowerSpec, chain: Chain) -> bool:
    if not chain or not all(chain):
        return False
    return all(is_point(spec, a, b) for a, b in zip(chain, chain[1:]))


def extend(spec: TowerSpec, chain: Chain) -> list[Chain]:
    return [chain + (y,) for y in fiber(spec, chain[-1])]


def chains(spec: TowerSpec, level: int, field: FieldSpec | None = None) -> Iterator[Chain]:
    """All level-``level`` chains over ``field`` (default GF(ell)), lexicographic order."""
    field = field or spec.ell_field
    fibers: dict[int, list[Felt]] = {}

    def fib(x: Felt) -> list[Felt]:
        if x.value not in fibers:
            fibers[x.value] = fiber(spec, x)
        return fibers[x.value]

    def walk(prefix: Chain) -> Iterator[Chain]:
        if len(prefix) == level:
            yield prefix
            return
        for y in fib(prefix[-1]):
            yield from walk(prefix + (y,))

    for x in field.nonzero():
        yield from walk((x,))


def fiber_sizes(spec: TowerSpec, field: FieldSpec | None = None) -> dict[int, int]:
    """Histogram {fiber size: number of nonzero beta with that size}."""
    field = field or spec.ell_field
    hist: dict[int, int] = {}
    for b in field.nonzero():
        s = len(fiber(spec, b))
        hist[s] = hist.get(s, 0) + 1
    return hist


def count_chains(spec: TowerSpec, level: int, field: FieldSpec | None = None) -> int:
    """Exact number of level-``level`` chains.

    Levels up to 3 are enumerated.  Beyond that the count is the level-3 count
    times s^(level-3), valid only once every fiber is confirmed to have the
    same size s (so every chain has the same number of extensions).
    """
    if level < 1:
        raise ValueError("level must be >= 1")
    field = field or spec.ell_field
    predicted = (field.size - 1) * (spec.q ** (spec.n - 1)) ** (level - 1)
    if min(level, 3) > 1 and (field.size - 1) * (spec.q ** (spec.n - 1)) ** (min(level, 3) - 1) > ENUMERATION_CAP:
        raise CapExceeded(f"level {level} over {field!r}")
    if level <= 3:
        return sum(1 for _ in chains(spec, level, field))
    hist = fiber_sizes(spec, field)
    if len(hist) != 1:
        if predicted > ENUMERATION_CAP:
            raise CapExceeded(f"non-uniform fibers and level {level} too deep")
        return sum(1 for _ in chains(spec, level, field))
    (s,) = hist
    return count_chains(spec, 3, field) * s ** (level - 3)


def _tr(spec: TowerSpec, v: Felt, a: int) -> Felt:
    return trace_q(v, spec.q, a)


def subtower_values(spec: TowerSpec, chain: Chain) -> SubtowerChain:
    """u_s from each consecutive pair, z_s = -x_s^(q^n-1), and the u-recursion check."""
    if len(chain) < 2:
        raise ValueError("subtower values need a chain of level >= 2")
    q = spec.q
    qn, qj, qk = q**spec.n, q**spec.j, q**spec.k
    us = tuple(recover_u(spec, PointPair(a, b)) for a, b in zip(chain, chain[1:]))
    zs = tuple(-(x ** (qn - 1)) for x in chain)
    for s, (a, b) in enumerate(zip(chain, chain[1:])):
        w, z = wz_map(spec, PointPair(a, b), us[s])
        if w != zs[s] or z != zs[s + 1]:
            raise IdentityViolation(f"z-subtower mismatch at step {s + 1}")
    for s in range(len(us) - 1):
        cur, nxt = us[s], us[s + 1]
        den_cur = _tr(spec, cur, spec.k) + spec.alpha
        den_nxt = _tr(spec, nxt, spec.k) + spec.alpha
        if not den_cur or not den_nxt:
            continue
        left = _tr(spec, nxt, spec.j) / den_nxt**qj
        right = _tr(spec, cur, spec.j) ** qk / den_cur
        if left != right or left != zs[s + 1]:
            raise IdentityViolation(f"u-subtower recursion fails at step {s + 1}")
    return SubtowerChain(us, zs)


def sepvar_x_sides(spec: TowerSpec, x: Felt, y: Felt) -> tuple[Felt, Felt]:
    q = spec.q
    qn, qj, qk = q**spec.n, q**spec.j, q**spec.k
    left = (y**qn - y) / y**qj
    right = (x**qn - x) / x ** (qn - qk + 1)
    return left, right


def check_sepvar_x(spec: TowerSpec, pair: PointPair) -> bool:
    """(Y^(q^n) - Y) / Y^(q^j) == (X^(q^n) - X) / X^(q^n - q^k + 1) at (X, Y) = (x, y)."""
    x, y = pair
    if not x or not y:
        raise ZeroArgument("separated-variable form needs nonzero x, y")
    left, right = sepvar_x_sides(spec, x, y)
    return left == right


def sepvar_x_fiber(spec: TowerSpec, x: Felt) -> list[Felt]:
    """All nonzero y in x's field satisfying the separated-variable x-equation."""
    if not x:
        raise ZeroArgument("x = 0")
    right = sepvar_x_sides(spec, x, x)[1]
    q = spec.q
    qn, qj = q**spec.n, q**spec.j
    return [y for y in x.field.nonzero() if (y**qn - y) / y**qj == right]


def sepvar_z_sides(spec: TowerSpec, z: Felt, z_next: Felt) -> tuple[Felt, Felt]:
    Nn, Nj = spec.N(spec.n), spec.N(spec.j)
    qk = spec.q**spec.k
    left = (z_next + 1) ** Nn / z_next**Nj
    right = (z + 1) ** Nn / z ** (qk * Nj)
    return left, right


def check_sepvar_z(spec: TowerSpec, z: Felt, z_next: Felt) -> bool:
    """(Y+1)^N_n / Y^N_j == (X+1)^N_n / X^(q^k N_j) at (X, Y) = (z, z_next)."""
    if not z or not z_next:
        raise ZeroArgument("separated-variable z-form needs nonzero z values")
    left, right = sepvar_z_sides(spec, z, z_next)
    return left == right
