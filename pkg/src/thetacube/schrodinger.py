"""Weight-1 representations of nondegenerate theta groups as exact monomial
matrices, with irreducibility, faithfulness and invariant-dimension checks
done by rank computations over a prime field F_p with p = 1 mod M.

A monomial matrix is stored as (perm, exps): column y holds zeta^exps[y] in
row perm[y] and zeros elsewhere, zeta a fixed primitive M-th root of unity.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .errors import InvalidArgumentError
from .fingroup import FinAbGroup, GroupElement, smallest_prime_1mod, is_prime
from .pairing import ElementaryDivisorVector
from .thetagroup import CocycleExtension, LevelSubgroup, ThetaElement, heisenberg

__all__ = [
    "MonomialMatrix",
    "SchrodingerRep",
    "FunctionModule",
    "schrodinger",
    "projective_rep",
    "is_irreducible",
    "is_faithful_projective",
    "invariants_dimension",
    "matrix_coefficient_check",
    "coefficient_matrix",
    "span_rank",
    "primitive_root_of_unity",
]


class MonomialMatrix:
    """Generalized permutation matrix with root-of-unity entries, kept in
    (perm, exps) form; products and inverses never leave this form."""

    def __init__(self, modulus: int, perm, exps):
        if modulus < 1:
            raise InvalidArgumentError("modulus must be positive")
        p = np.ascontiguousarray(np.asarray(perm, dtype=np.int64))
        e = np.ascontiguousarray(np.asarray(exps, dtype=np.int64) % modulus)
        if p.ndim != 1 or p.shape != e.shape:
            raise InvalidArgumentError("perm and exps must be 1-d arrays of the same length")
        if not np.array_equal(np.sort(p), np.arange(p.size)):
            raise InvalidArgumentError("perm is not a permutation")
        self.modulus = modulus
        self.perm = p
        self.exps = e

    @classmethod
    def identity(cls, size: int, modulus: int) -> "MonomialMatrix":
        return cls(modulus, np.arange(size), np.zeros(size, dtype=np.int64))

    @property
    def size(self) -> int:
        return int(self.perm.size)

    def __matmul__(self, other: "MonomialMatrix") -> "MonomialMatrix":
        if self.modulus != other.modulus or self.size != other.size:
            raise InvalidArgumentError("matrix shapes or moduli differ")
        return MonomialMatrix(self.modulus, self.perm[other.perm],
                              (other.exps + self.exps[other.perm]) % self.modulus)

    def inverse(self) -> "MonomialMatrix":
        inv = np.argsort(self.perm)
        return MonomialMatrix(self.modulus, inv, (-self.exps[inv]) % self.modulus)

    def scaled(self, shift: int) -> "MonomialMatrix":
        """Multiply by the scalar zeta^shift."""
        return MonomialMatrix(self.modulus, self.perm, (self.exps + shift) % self.modulus)

    def is_scalar(self) -> int | None:
        """Exponent alpha if the matrix is zeta^alpha times the identity."""
        if not np.array_equal(self.perm, np.arange(self.size)):
            return None
        if np.any(self.exps != self.exps[0]):
            return None
        return int(self.exps[0])

    def dense(self, prime: int, zeta: int) -> np.ndarray:
        """Dense int64 matrix over F_prime with zeta substituted."""
        powers = np.array([pow(zeta, int(k), prime) for k in range(self.modulus)],
                          dtype=np.int64)
        out = np.zeros((self.size, self.size), dtype=np.int64)
        out[self.perm, np.arange(self.size)] = powers[self.exps]
        return out

    def to_json(self) -> dict:
        return {"perm": [int(v) for v in self.perm],
                "exps": [int(v) for v in self.exps],
                "modulus": self.modulus}

    def __eq__(self, other) -> bool:
        return (isinstance(other, MonomialMatrix) and self.modulus == other.modulus
                and np.array_equal(self.perm, other.perm)
                and np.array_equal(self.exps, other.exps))

    def __hash__(self) -> int:
        return hash((self.modulus, self.perm.tobytes(), self.exps.tobytes()))

    def __repr__(self) -> str:
        return f"MonomialMatrix(mod {self.modulus}, perm {self.perm.tolist()}, exps {self.exps.tolist()})"


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def primitive_root_of_unity(prime: int, order: int) -> int:
    """Smallest z in F_prime of multiplicative order exactly `order`."""
    if (prime - 1) % order:
        raise InvalidArgumentError(f"{prime} is not 1 mod {order}")
    if order == 1:
        return 1
    qs = _prime_factors(order)
    for g in range(2, prime):
        z = pow(g, (prime - 1) // order, prime)
        if all(pow(z, order // q, prime) != 1 for q in qs):
            return z
    raise InvalidArgumentError(f"no element of order {order} in F_{prime}")


def _check_prime(prime: int | None, modulus: int) -> int:
    if prime is None:
        return smallest_prime_1mod(modulus)
    if not is_prime(prime):
        raise InvalidArgumentError(f"{prime} is not prime")
    if (prime - 1) % modulus:
        raise InvalidArgumentError(f"prime must be 1 mod {modulus}, got {prime}")
    return prime


class SchrodingerRep:
    """Function realization of the weight-1 representation of the Heisenberg
    extension of K(delta) + K(delta)^D on functions on K(delta):
    (U_{(alpha,x,l)} phi)(y) = zeta^{alpha + l(y)} phi(y + x)."""

    def __init__(self, delta: ElementaryDivisorVector, modulus: int):
        self.delta = delta
        self.modulus = modulus
        self.extension = heisenberg(delta, modulus)
        self.space = FinAbGroup(tuple(delta))

    @property
    def dimension(self) -> int:
        return self.space.order

    @cached_property
    def _weights(self) -> np.ndarray:
        return np.array([self.modulus // d for d in self.delta], dtype=np.int64)

    def operator(self, scalar: int | ThetaElement,
                 point: GroupElement | Sequence[int] | None = None) -> MonomialMatrix:
        """Monomial matrix of (scalar, point); accepts a ThetaElement too."""
        if isinstance(scalar, ThetaElement):
            scalar, point = scalar.scalar, scalar.point
        g = self.extension.group
        el = point if isinstance(point, GroupElement) else g.element(point)
        if el.group != g:
            raise InvalidArgumentError("point does not belong to K(delta) + K(delta)^D")
        k = len(self.delta)
        x, ell = el.coords[:k], el.coords[k:]
        zs = self.space.elements
        w = (zs - np.asarray(x, dtype=np.int64)) % np.asarray(self.space.moduli, dtype=np.int64)
        perm = self.space.encode(w)
        exps = (int(scalar) + w @ (self._weights * np.asarray(ell, dtype=np.int64))) % self.modulus
        return MonomialMatrix(self.modulus, perm, exps)

    def projective_operator(self, point: GroupElement | Sequence[int]) -> MonomialMatrix:
        """Scalar-normalized representative: exps[0] == 0."""
        u = self.operator(0, point)
        return u.scaled(-int(u.exps[0]))


def schrodinger(delta: ElementaryDivisorVector | Sequence[int],
                modulus: int | None = None) -> SchrodingerRep:
    if not isinstance(delta, ElementaryDivisorVector):
        delta = ElementaryDivisorVector(tuple(delta))
    g = delta.domain()
    m = g.exponent if modulus is None else int(modulus)
    if m % g.exponent:
        raise InvalidArgumentError(f"modulus {m} not divisible by the exponent {g.exponent}")
    return SchrodingerRep(delta, m)


def projective_rep(rep: SchrodingerRep) -> Callable[[GroupElement | Sequence[int]], MonomialMatrix]:
    """x -> scalar-normalized monomial matrix; independent of the lift."""
    return rep.projective_operator


def span_rank(matrices: Sequence[MonomialMatrix | None], prime: int, modulus: int) -> int:
    """Rank over F_prime of the span of the given matrices (None = zero
    matrix), flattened to vectors; zeta is the canonical primitive root."""
    size = next((m.size for m in matrices if m is not None), 0)
    if size == 0:
        return 0
    zeta = primitive_root_of_unity(prime, modulus)
    rows = np.zeros((len(matrices), size * size), dtype=np.int64)
    for i, m in enumerate(matrices):
        if m is not None:
            rows[i] = m.dense(prime, zeta).reshape(-1)
    return _kernels.rank_mod_p(rows, prime)


def is_irreducible(rep: SchrodingerRep, prime: int | None = None) -> bool:
    """True iff the operators of the full group span all r x r matrices."""
    p = _check_prime(prime, rep.modulus)
    mats = [rep.operator(0, rep.extension.group.coords(i))
            for i in range(rep.extension.group.order)]
    return span_rank(mats, p, rep.modulus) == rep.dimension ** 2


def is_faithful_projective(rep: SchrodingerRep,
                           operators: Sequence[MonomialMatrix | None] | None = None) -> bool:
    """True iff no nonzero group element acts by a scalar; `operators`
    overrides the table, indexed by the canonical element order."""
    if operators is None:
        operators = [rep.projective_operator(rep.extension.group.coords(i))
                     for i in range(rep.extension.group.order)]
    for i, m in enumerate(operators):
        if i and m is not None and m.is_scalar() is not None:
            return False
    return True


def coefficient_matrix(rep: SchrodingerRep, prime: int | None = None,
                       operators: Sequence[MonomialMatrix | None] | None = None) -> np.ndarray:
    """Matrix of all matrix-coefficient functions x -> <U(0,x) e_y, e_y'>:
    rows indexed by pairs (y, y'), columns by group elements, over F_prime."""
    p = _check_prime(prime, rep.modulus)
    zeta = primitive_root_of_unity(p, rep.modulus)
    n = rep.extension.group.order
    r = rep.dimension
    if operators is None:
        operators = [rep.operator(0, rep.extension.group.coords(i)) for i in range(n)]
    out = np.zeros((r * r, n), dtype=np.int64)
    for x, m in enumerate(operators):
        if m is not None:
            out[:, x] = m.dense(p, zeta).T.reshape(-1)
    return out


def matrix_coefficient_check(rep: SchrodingerRep, prime: int | None = None,
                             operators: Sequence[MonomialMatrix | None] | None = None) -> bool:
    """True iff the r^2 matrix-coefficient functions are a basis of the
    weight-1 coordinate module (their evaluation matrix has rank r^2)."""
    p = _check_prime(prime, rep.modulus)
    t = coefficient_matrix(rep, p, operators)
    return _kernels.rank_mod_p(t, p) == rep.dimension ** 2


class FunctionModule:
    """The weight-1 coordinate module of a cocycle extension: dimension |K|,
    basis F_z indexed by K, with the two-sided monomial action
    (g1, g2) F_z = zeta^E F_{z+u-v} for g1 = (a,u), g2 = (b,v)."""

    def __init__(self, extension: CocycleExtension):
        self.extension = extension

    @property
    def dimension(self) -> int:
        return self.extension.group.order

    def act(self, left: ThetaElement, right: ThetaElement) -> MonomialMatrix:
        E = self.extension
        g = E.group
        for t in (left, right):
            if t.point.group != g:
                raise InvalidArgumentError("theta element outside the module's group")
        a, u = left.scalar, left.point
        b, v = right.scalar, right.point
        M = E.modulus
        f = E.table
        uv = u - v
        add = g.add_table
        zi = np.arange(g.order)
        perm = add[zi, uv.index]
        zmv = add[zi, (-v).index]
        exps = (-a - int(f[u.index, (-u).index]) + f[(-u).index, perm]
                + b + f[zmv, v.index]) % M
        return MonomialMatrix(M, perm, exps)

    def left_operator(self, t: ThetaElement) -> MonomialMatrix:
        return self.act(t, ThetaElement(0, self.extension.group.zero))

    def right_operator(self, t: ThetaElement) -> MonomialMatrix:
        return self.act(ThetaElement(0, self.extension.group.zero), t)


def invariants_dimension(module: FunctionModule, level: LevelSubgroup,
                         prime: int | None = None) -> int:
    """Dimension of the invariants of the second-factor action of a level
    subgroup, computed as the rank of the sum of its operators."""
    if level.extension != module.extension:
        raise InvalidArgumentError("level subgroup belongs to a different extension")
    E = module.extension
    mp = level.lift_modulus
    s = mp // E.modulus
    p = _check_prime(prime, mp)
    zeta = primitive_root_of_unity(p, mp)
    g = E.group
    add = g.add_table
    zi = np.arange(g.order)
    total = np.zeros((g.order, g.order), dtype=np.int64)
    for pos, h in enumerate(level.base.element_indices):
        hneg = int(g.neg_table[int(h)])
        perm = add[zi, hneg]
        exps = (int(level.lift[pos]) + s * E.table[perm, int(h)]) % mp
        mat = MonomialMatrix(mp, perm, exps)
        total = (total + mat.dense(p, zeta)) % p
    return _kernels.rank_mod_p(total, p)
