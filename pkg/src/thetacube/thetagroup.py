"""Central extensions of a finite abelian group by roots of unity, given by
normalized 2-cocycle tables in exponents mod M; Heisenberg normal forms,
commutator pairings, extension normalization and Lagrangian level subgroups.

Scalar-modulus escalation: the scalar group here is the truncation mu_M of a
divisible group. Coboundary and lift equations that are solvable over the
divisible group can be obstructed over mu_M (the obstruction lives in
Ext^1(K, Z/M)); where that happens the equations are solved over mu_{M*d}
for the smallest divisor d of exponent(K) that clears the obstruction
(d = exponent(K) always does). The achieved modulus is recorded on the
returned object, and equals M whenever the unescalated equation is solvable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import DegenerateFormError, InvalidArgumentError, MathematicalError
from .fingroup import FinAbGroup, GroupElement, ModLinearSolver, SubgroupData, subgroups_of_order
from .pairing import (AlternatingForm, ElementaryDivisorVector, SymplecticBasis,
                      elementary_divisors, is_nondegenerate)

__all__ = [
    "CocycleExtension",
    "ThetaElement",
    "LevelSubgroup",
    "NormalizedExtension",
    "ext_multiply",
    "commutator_pairing",
    "is_nondegenerate_extension",
    "heisenberg",
    "normalize_extension",
    "lagrangian_subgroups",
    "enumerate_cocycles",
    "coboundary_table",
]


@dataclass(frozen=True)
class ThetaElement:
    """(scalar exponent, base point) in a cocycle extension."""

    scalar: int
    point: GroupElement


class CocycleExtension:
    """Extension of `group` by mu_`modulus` with multiplication
    (a, x)(b, y) = (a + b + f(x, y), x + y) for a normalized 2-cocycle f."""

    def __init__(self, group: FinAbGroup, modulus: int, table):
        if modulus < 1:
            raise InvalidArgumentError("modulus must be positive")
        f = np.ascontiguousarray(np.asarray(table, dtype=np.int64) % modulus)
        n = group.order
        if f.shape != (n, n):
            raise InvalidArgumentError(f"cocycle table must be {n}x{n}, got {f.shape}")
        if np.any(f[0, :]) or np.any(f[:, 0]):
            raise InvalidArgumentError("cocycle not normalized: f(0,.) and f(.,0) must vanish")
        bad = _kernels.cocycle_defect(f, group.add_table, modulus)
        if bad[0] >= 0:
            raise InvalidArgumentError(f"2-cocycle identity fails at triple {bad}")
        self.group = group
        self.modulus = modulus
        self.table = f

    def element(self, scalar: int, coords: GroupElement | Sequence[int]) -> ThetaElement:
        el = coords if isinstance(coords, GroupElement) else self.group.element(coords)
        return ThetaElement(scalar % self.modulus, el)

    @property
    def identity(self) -> ThetaElement:
        return ThetaElement(0, self.group.zero)

    def multiply(self, a: ThetaElement, b: ThetaElement) -> ThetaElement:
        if a.point.group != self.group or b.point.group != self.group:
            raise InvalidArgumentError("theta elements belong to a different group")
        f = int(self.table[a.point.index, b.point.index])
        return ThetaElement((a.scalar + b.scalar + f) % self.modulus, a.point + b.point)

    def inverse(self, a: ThetaElement) -> ThetaElement:
        x = a.point
        return ThetaElement((-a.scalar - int(self.table[x.index, (-x).index])) % self.modulus, -x)

    def push_scalars(self, new_modulus: int) -> "CocycleExtension":
        """Push out along mu_M -> mu_M' (exponent scaling by M'/M)."""
        if new_modulus % self.modulus:
            raise InvalidArgumentError("new modulus must be a multiple of the old one")
        s = new_modulus // self.modulus
        return CocycleExtension(self.group, new_modulus, (self.table * s) % new_modulus)

    def __eq__(self, other) -> bool:
        return (isinstance(other, CocycleExtension) and self.group == other.group
                and self.modulus == other.modulus and np.array_equal(self.table, other.table))

    def __hash__(self) -> int:
        return hash((self.group, self.modulus, self.table.tobytes()))

    def __repr__(self) -> str:
        return f"CocycleExtension({self.group}, mod {self.modulus})"


def ext_multiply(ext: CocycleExtension, a: ThetaElement, b: ThetaElement) -> ThetaElement:
    return ext.multiply(a, b)


def commutator_pairing(ext: CocycleExtension) -> AlternatingForm:
    """e(x, y) = f(x, y) - f(y, x); bilinear and alternating, asserted
    against the full commutator table."""
    g = ext.group
    M = ext.modulus
    comm = (ext.table - ext.table.T) % M
    B = np.zeros((g.rank, g.rank), dtype=np.int64)
    for i, s in enumerate(g.strides):
        gi = s if g.moduli[i] > 1 else 0
        for j, t in enumerate(g.strides):
            gj = t if g.moduli[j] > 1 else 0
            B[i, j] = comm[gi, gj]
    form = AlternatingForm(g, M, B)
    if not np.array_equal(form.table, comm):
        raise MathematicalError("internal: commutator of a 2-cocycle failed to be bilinear")
    return form


def is_nondegenerate_extension(ext: CocycleExtension) -> bool:
    return is_nondegenerate(commutator_pairing(ext))


def heisenberg(delta: ElementaryDivisorVector | Sequence[int],
               modulus: int | None = None) -> CocycleExtension:
    """The Heisenberg extension of K(delta) + K(delta)^D with cocycle
    f((x,l),(x',l')) = l'(x)."""
    if not isinstance(delta, ElementaryDivisorVector):
        delta = ElementaryDivisorVector(tuple(delta))
    g = delta.domain()
    M = g.exponent if modulus is None else int(modulus)
    if M % g.exponent:
        raise InvalidArgumentError(
            f"modulus {M} not divisible by the exponent {g.exponent}")
    k = len(delta)
    a = g.elements
    if k == 0:
        return CocycleExtension(g, M, np.zeros((1, 1), dtype=np.int64))
    w = np.array([M // d for d in delta], dtype=np.int64)
    f = (a[:, :k] * w) @ a[:, k:].T % M
    return CocycleExtension(g, M, f)


def coboundary_table(group: FinAbGroup, cochain: Sequence[int], modulus: int) -> np.ndarray:
    """Table of the 2-coboundary c(x) + c(y) - c(x+y) mod modulus; the
    cochain is indexed by the canonical element order and must vanish at 0."""
    c = np.asarray(cochain, dtype=np.int64) % modulus
    if c.shape != (group.order,):
        raise InvalidArgumentError("cochain must have one value per group element")
    if c[0] % modulus:
        raise InvalidArgumentError("cochain must vanish at the identity")
    return (c[:, None] + c[None, :] - c[group.add_table]) % modulus


@dataclass(frozen=True)
class LevelSubgroup:
    """An isotropic subgroup with a lift making h -> (lift(h), h) a
    homomorphism into the extension pushed to `lift_modulus`.

    `lift` is indexed along base.element_indices.
    """

    extension: CocycleExtension
    base: SubgroupData
    lift: tuple[int, ...]
    lift_modulus: int

    def __post_init__(self):
        E, H = self.extension, self.base
        if H.ambient != E.group:
            raise InvalidArgumentError("subgroup does not live in the extension's base group")
        if self.lift_modulus % E.modulus or len(self.lift) != H.order:
            raise InvalidArgumentError("lift must give one value per subgroup element "
                                       "over a multiple of the extension modulus")
        idx = H.element_indices
        pos = {int(a): i for i, a in enumerate(idx)}
        Mp = self.lift_modulus
        s = Mp // E.modulus
        add = E.group.add_table
        c = self.lift
        if c[pos[0]] % Mp:
            raise InvalidArgumentError("lift must vanish on the identity")
        for i, h in enumerate(idx):
            for j, hp in enumerate(idx):
                rhs = c[pos[int(add[h, hp])]]
                if (c[i] + c[j] + s * int(E.table[h, hp]) - rhs) % Mp:
                    raise InvalidArgumentError(
                        f"lift is not a section homomorphism at pair {(int(h), int(hp))}")

    def section(self, el: GroupElement | Sequence[int]) -> ThetaElement:
        coords = el if isinstance(el, GroupElement) else self.extension.group.element(el)
        i = int(np.searchsorted(self.base.element_indices, coords.index))
        if i >= len(self.lift) or self.base.element_indices[i] != coords.index:
            raise InvalidArgumentError("element outside the level subgroup")
        return ThetaElement(self.lift[i] % self.lift_modulus, coords)


def _escalation_moduli(base_modulus: int, exponent: int) -> list[int]:
    divs = sorted(d for d in range(1, exponent + 1) if exponent % d == 0)
    return [base_modulus * d for d in divs]


_COBOUNDARY_SOLVERS: dict[tuple, ModLinearSolver] = {}


def _coboundary_solver(group: FinAbGroup, modulus: int) -> ModLinearSolver:
    """Solver for d(c)(x,y) = b over cochains c vanishing at 0, cached per
    (group, modulus). Rows are (x, y) over nonzero elements, row-major."""
    key = (group.moduli, modulus)
    if key not in _COBOUNDARY_SOLVERS:
        n = group.order
        add = group.add_table
        rows = []
        for x in range(1, n):
            for y in range(1, n):
                row = [0] * (n - 1)
                row[x - 1] += 1
                row[y - 1] += 1
                z = int(add[x, y])
                if z:
                    row[z - 1] -= 1
                rows.append(row)
        _COBOUNDARY_SOLVERS[key] = ModLinearSolver(np.array(rows, dtype=np.int64), modulus)
    return _COBOUNDARY_SOLVERS[key]


def _solve_coboundary(group: FinAbGroup, target: np.ndarray, modulus: int,
                      exponent: int) -> tuple[np.ndarray, int]:
    """Find (c, M') with c(x)+c(y)-c(x+y) = (M'/modulus) * target mod M',
    escalating M' = modulus * d over divisors d of `exponent` as needed."""
    n = group.order
    b0 = np.array([target[x, y] for x in range(1, n) for y in range(1, n)], dtype=np.int64)
    for mp in _escalation_moduli(modulus, exponent):
        s = mp // modulus
        sol = _coboundary_solver(group, mp).solve((s * b0) % mp)
        if sol is not None:
            c = np.zeros(n, dtype=np.int64)
            c[1:] = sol % mp
            return c, mp
    raise MathematicalError("internal: coboundary obstruction survived full escalation")


@dataclass(frozen=True)
class NormalizedExtension:
    """Equivalence data onto the Heisenberg normal form G(delta):
    (modulus'/modulus) * (f(phi u, phi v) - f_std(u, v)) = c(u)+c(v)-c(u+v)
    over mu_modulus', with c indexed by K(delta)+K(delta)^D."""

    delta: ElementaryDivisorVector
    basis: SymplecticBasis
    cochain: tuple[int, ...]
    scalar_modulus: int


def normalize_extension(ext: CocycleExtension) -> NormalizedExtension:
    """Reduce a nondegenerate extension to its Heisenberg normal form."""
    e = commutator_pairing(ext)
    if not is_nondegenerate(e):
        raise DegenerateFormError("extension has degenerate commutator pairing")
    delta, basis = elementary_divisors(e)
    M = ext.modulus
    idx = basis.index_map
    pulled = ext.table[np.ix_(idx, idx)]
    std = heisenberg(delta, M)
    diff = (pulled - std.table) % M
    c, mp = _solve_coboundary(std.group, diff, M, ext.group.exponent)
    return NormalizedExtension(delta, basis, tuple(int(v) for v in c), mp)


def lagrangian_subgroups(ext: CocycleExtension) -> list[LevelSubgroup]:
    """All isotropic subgroups of order r = sqrt(|K|), each with a lift;
    lifts escalate the scalar modulus when mu_M obstructs them."""
    e = commutator_pairing(ext)
    if not is_nondegenerate(e):
        raise DegenerateFormError("extension has degenerate commutator pairing")
    g = ext.group
    r = math.isqrt(g.order)
    if r * r != g.order:
        raise InvalidArgumentError("group order is not a perfect square")
    M = ext.modulus
    out = []
    for H in subgroups_of_order(g, r):
        idx = H.element_indices
        if np.any(e.table[np.ix_(idx, idx)]):
            continue
        lift = _solve_lift(ext, idx, M)
        out.append(lift)
    return out


def _solve_lift(ext: CocycleExtension, idx: np.ndarray, modulus: int) -> LevelSubgroup:
    g = ext.group
    add = g.add_table
    pos = {int(a): i for i, a in enumerate(idx)}
    h = idx.size
    rows, targets = [], []
    for i in range(1, h):
        for j in range(1, h):
            row = [0] * (h - 1)
            row[i - 1] += 1
            row[j - 1] += 1
            k = pos[int(add[idx[i], idx[j]])]
            if k:
                row[k - 1] -= 1
            rows.append(row)
            targets.append(-int(ext.table[idx[i], idx[j]]))
    b0 = np.array(targets, dtype=np.int64)
    A = np.array(rows, dtype=np.int64) if rows else np.zeros((0, 0), dtype=np.int64)
    sub = SubgroupData(g, [g.coords(int(a)) for a in idx])
    if h == 1:
        return LevelSubgroup(ext, sub, (0,), modulus)
    exp_h = math.lcm(*(g.element_order(g.coords(int(a))) for a in idx))
    for mp in _escalation_moduli(modulus, exp_h):
        s = mp // modulus
        sol = ModLinearSolver(A, mp).solve((s * b0) % mp)
        if sol is not None:
            lift = [0] * h
            for i in range(1, h):
                lift[i] = int(sol[i - 1]) % mp
            return LevelSubgroup(ext, sub, tuple(lift), mp)
    raise MathematicalError("internal: lift obstruction survived full escalation")


def enumerate_cocycles(group: FinAbGroup, modulus: int) -> np.ndarray:
    """Every normalized 2-cocycle table on the group mod `modulus`, as an
    array of shape (count, order, order), deterministic order."""
    n = group.order
    add = group.add_table
    if n == 1:
        return np.zeros((1, 1, 1), dtype=np.int64)
    nv = (n - 1) ** 2
    var = lambda x, y: (x - 1) * (n - 1) + (y - 1)
    rows = []
    for x in range(1, n):
        for y in range(1, n):
            for z in range(1, n):
                row = [0] * nv
                row[var(x, y)] += 1
                xy = int(add[x, y])
                if xy:
                    row[var(xy, z)] += 1
                row[var(y, z)] -= 1
                yz = int(add[y, z])
                if yz:
                    row[var(x, yz)] -= 1
                rows.append(row)
    solver = ModLinearSolver(np.array(rows, dtype=np.int64), modulus)
    vecs = solver.kernel_all()
    out = np.zeros((vecs.shape[0], n, n), dtype=np.int64)
    out[:, 1:, 1:] = vecs.reshape(-1, n - 1, n - 1)
    return out
