"""r-torsion Brauer group presentations for abelian varieties, the Hilbert
symbol as a wedge of torsion characters, and structure-constant cyclic
algebras with Azumaya and splitting checks over a prime field.

The ambient module is (Z/r)^(C(2g,2)) with basis w_ij, i < j in
lexicographic order, holding coordinates of alternating forms on A[r];
the presentation is its quotient by the span of the Neron-Severi images.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import InvalidArgumentError, MathematicalError, UnsupportedError
from .fingroup import (FinAbGroup, ProjectionMap, SubgroupData, is_prime,
                       quotient_presentation)
from .schrodinger import primitive_root_of_unity

__all__ = [
    "AbelianVarietyData",
    "BrauerPresentation",
    "TorsionChar",
    "CyclicAlgebra",
    "ExplicitSplitting",
    "principal_ns",
    "wedge_pairs",
    "flatten_alternating",
    "unflatten_alternating",
    "brauer_presentation",
    "hilbert_symbol",
    "symbol_is_trivial",
    "cyclic_algebra",
    "azumaya_check",
    "explicit_splitting",
]


def wedge_pairs(n: int) -> list[tuple[int, int]]:
    """Index pairs (i, j), i < j, in lexicographic order."""
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _as_alternating(matrix, size: int, modulus: int) -> np.ndarray:
    m = np.asarray(matrix, dtype=np.int64)
    if m.shape != (size, size):
        raise InvalidArgumentError(f"matrix must be {size}x{size}, got {m.shape}")
    if np.any(m.diagonal() % modulus):
        raise InvalidArgumentError("matrix is not alternating: nonzero diagonal")
    if np.any((m + m.T) % modulus):
        raise InvalidArgumentError("matrix is not alternating: not skew-symmetric")
    return m % modulus


def flatten_alternating(matrix, size: int, modulus: int) -> np.ndarray:
    """Upper-triangular coordinates of an alternating matrix in w_ij order."""
    m = _as_alternating(matrix, size, modulus)
    return np.array([m[i, j] for i, j in wedge_pairs(size)], dtype=np.int64)


def unflatten_alternating(coords, size: int, modulus: int) -> np.ndarray:
    v = np.asarray(coords, dtype=np.int64) % modulus
    if v.shape != (comb(size, 2),):
        raise InvalidArgumentError(f"need {comb(size, 2)} wedge coordinates")
    m = np.zeros((size, size), dtype=np.int64)
    for val, (i, j) in zip(v, wedge_pairs(size)):
        m[i, j] = val
        m[j, i] = (-val) % modulus
    return m


def principal_ns(g: int) -> np.ndarray:
    """The standard principal polarization matrix [[0, I], [-I, 0]]."""
    m = np.zeros((2 * g, 2 * g), dtype=np.int64)
    for i in range(g):
        m[i, g + i] = 1
        m[g + i, i] = -1
    return m


@dataclass(frozen=True)
class TorsionChar:
    """A character of A[r], i.e. a vector in (Z/r)^(2g)."""

    modulus: int
    coords: tuple[int, ...]

    def __post_init__(self):
        if self.modulus < 1:
            raise InvalidArgumentError("modulus must be positive")
        object.__setattr__(self, "coords", tuple(int(c) % self.modulus for c in self.coords))

    def __add__(self, other: "TorsionChar") -> "TorsionChar":
        if self.modulus != other.modulus or len(self.coords) != len(other.coords):
            raise InvalidArgumentError("characters live on different groups")
        return TorsionChar(self.modulus,
                           tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __len__(self) -> int:
        return len(self.coords)


class AbelianVarietyData:
    """Dimension g, torsion level r, and the images of a Neron-Severi basis
    as alternating matrices on A[r] = (Z/r)^(2g)."""

    def __init__(self, g: int, r: int, ns_generators: Sequence | None,
                 allow_empty_ns: bool = False):
        if g < 1:
            raise InvalidArgumentError("dimension g must be at least 1")
        if r < 1:
            raise InvalidArgumentError("torsion level r must be at least 1")
        gens = [] if ns_generators is None else list(ns_generators)
        if not gens and not allow_empty_ns:
            raise InvalidArgumentError(
                "empty Neron-Severi list requires allow_empty_ns=True")
        self.g = g
        self.r = r
        self.ns_generators = [_as_alternating(m, 2 * g, r) for m in gens]

    def to_json(self) -> dict:
        return {"g": self.g, "r": self.r,
                "ns": [m.tolist() for m in self.ns_generators]}


class BrauerPresentation:
    """Quotient of the ambient wedge module by the Neron-Severi span, with a
    projection map onto a cyclic-factor presentation."""

    def __init__(self, av: AbelianVarietyData):
        self.av = av
        n = 2 * av.g
        self.ambient_rank = comb(n, 2)
        self.ambient = FinAbGroup((av.r,) * self.ambient_rank)
        rows = [flatten_alternating(m, n, av.r) for m in av.ns_generators]
        self.image = SubgroupData(self.ambient, rows)
        self.quotient, self.projection = quotient_presentation(self.ambient, self.image)
        if self.quotient.order * self.image.order != self.ambient.order:
            raise MathematicalError("internal: quotient and image orders do not multiply up")

    @property
    def quotient_moduli(self) -> tuple[int, ...]:
        return self.quotient.moduli

    @property
    def order(self) -> int:
        return self.quotient.order

    def project_form(self, matrix) -> tuple[int, ...]:
        """Class of an alternating matrix on A[r] in the quotient."""
        v = flatten_alternating(matrix, 2 * self.av.g, self.av.r)
        return self.projection(v).coords

    def project_coords(self, coords) -> tuple[int, ...]:
        """Class of a wedge-coordinate vector in the quotient."""
        return self.projection(coords).coords

    def to_json(self) -> dict:
        return {"ambient_rank": self.ambient_rank,
                "quotient_moduli": list(self.quotient_moduli),
                "projection": [list(row) for row in self.projection.matrix]}


def brauer_presentation(av: AbelianVarietyData) -> BrauerPresentation:
    return BrauerPresentation(av)


def hilbert_symbol(alpha: TorsionChar, beta: TorsionChar,
                   pres: BrauerPresentation) -> tuple[int, ...]:
    """Image of the wedge alpha ^ beta (coordinates a_i b_j - a_j b_i) in
    the Brauer quotient."""
    n = 2 * pres.av.g
    r = pres.av.r
    if len(alpha) != n or len(beta) != n:
        raise InvalidArgumentError(f"characters must have length {n}")
    if alpha.modulus != r or beta.modulus != r:
        raise InvalidArgumentError(f"characters must be mod {r}")
    a = np.array(alpha.coords, dtype=np.int64)
    b = np.array(beta.coords, dtype=np.int64)
    w = np.array([a[i] * b[j] - a[j] * b[i] for i, j in wedge_pairs(n)], dtype=np.int64) % r
    return pres.project_coords(w)


def symbol_is_trivial(alpha: TorsionChar, beta: TorsionChar,
                      pres: BrauerPresentation) -> bool:
    """True iff alpha ^ beta lies in the Neron-Severi image subgroup."""
    return not any(hilbert_symbol(alpha, beta, pres))


class CyclicAlgebra:
    """Algebra of dimension r^2 over F_prime with basis u^i v^j and
    (u^i v^j)(u^k v^l) = zeta^{jk} a^{(i+k) div r} b^{(j+l) div r}
    u^{(i+k) mod r} v^{(j+l) mod r}."""

    def __init__(self, r: int, zeta: int, a: int, b: int, prime: int):
        self.r = r
        self.prime = prime
        self.zeta = zeta % prime
        self.a = a % prime
        self.b = b % prime
        rr = np.arange(r, dtype=np.int64)
        I = rr[:, None, None, None]
        J = rr[None, :, None, None]
        K = rr[None, None, :, None]
        L = rr[None, None, None, :]
        zpow = np.array([pow(self.zeta, int(t), prime) for t in range(r)], dtype=np.int64)
        apow = np.array([1, self.a], dtype=np.int64)
        bpow = np.array([1, self.b], dtype=np.int64)
        coef = zpow[(J * K) % r] * apow[(I + K) // r] % prime * bpow[(J + L) // r] % prime
        idx = ((I + K) % r) * r + (J + L) % r
        self.coef = np.ascontiguousarray(coef.reshape(r * r, r * r))
        self.idx = np.ascontiguousarray(idx.reshape(r * r, r * r))
        self._check_relations()

    @property
    def dimension(self) -> int:
        return self.r * self.r

    def basis_index(self, i: int, j: int) -> int:
        return (i % self.r) * self.r + (j % self.r)

    def basis_vector(self, i: int, j: int) -> np.ndarray:
        out = np.zeros(self.dimension, dtype=np.int64)
        out[self.basis_index(i, j)] = 1
        return out

    @property
    def one(self) -> np.ndarray:
        return self.basis_vector(0, 0)

    def basis_product(self, m1: int, m2: int) -> tuple[int, int]:
        """(coefficient, basis index) of the product of two basis elements."""
        return int(self.coef[m1, m2]), int(self.idx[m1, m2])

    def multiply(self, x, y) -> np.ndarray:
        """Product of two coefficient vectors over F_prime."""
        xv = np.asarray(x, dtype=np.int64) % self.prime
        yv = np.asarray(y, dtype=np.int64) % self.prime
        if xv.shape != (self.dimension,) or yv.shape != (self.dimension,):
            raise InvalidArgumentError(f"vectors must have length {self.dimension}")
        terms = xv[:, None] * yv[None, :] % self.prime * self.coef % self.prime
        out = np.zeros(self.dimension, dtype=np.int64)
        np.add.at(out, self.idx.reshape(-1), terms.reshape(-1))
        return out % self.prime

    def _check_relations(self):
        if self.r == 1:
            return
        u = self.basis_index(1, 0)
        v = self.basis_index(0, 1)
        cuv, muv = self.basis_product(u, v)
        cvu, mvu = self.basis_product(v, u)
        if muv != mvu or cvu != self.zeta * cuv % self.prime:
            raise MathematicalError("internal: v*u != zeta*(u*v) in the structure constants")
        acc_c, acc_m = 1, u
        for _ in range(self.r - 1):
            c, acc_m = self.basis_product(acc_m, u)
            acc_c = acc_c * c % self.prime
        if acc_m != 0 or acc_c != self.a:
            raise MathematicalError("internal: u^r != a in the structure constants")
        acc_c, acc_m = 1, v
        for _ in range(self.r - 1):
            c, acc_m = self.basis_product(acc_m, v)
            acc_c = acc_c * c % self.prime
        if acc_m != 0 or acc_c != self.b:
            raise MathematicalError("internal: v^r != b in the structure constants")


def cyclic_algebra(r: int, zeta_exp: int, a: int, b: int, prime: int) -> CyclicAlgebra:
    """Structure-constant cyclic algebra; zeta_exp must be an element of
    multiplicative order exactly r in F_prime and a, b units."""
    if r < 1:
        raise InvalidArgumentError("r must be at least 1")
    if not is_prime(prime):
        raise InvalidArgumentError(f"{prime} is not prime")
    if (prime - 1) % r:
        raise InvalidArgumentError(f"prime must be 1 mod {r}, got {prime}")
    z = zeta_exp % prime
    if pow(z, r, prime) != 1 or any(pow(z, r // q, prime) == 1
                                    for q in _prime_divisors(r)):
        raise InvalidArgumentError(f"{zeta_exp} does not have order exactly {r} mod {prime}")
    if a % prime == 0 or b % prime == 0:
        raise InvalidArgumentError("a and b must be units in the field")
    return CyclicAlgebra(r, z, a, b, prime)


def _prime_divisors(n: int) -> list[int]:
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


def azumaya_check(alg: CyclicAlgebra) -> bool:
    """True iff the sandwich map x tensor y -> (z -> x z y) is bijective,
    i.e. its r^4 x r^4 matrix over F_prime has full rank."""
    d = alg.dimension
    p = alg.prime
    z = np.arange(d)
    s = np.zeros((d * d, d * d), dtype=np.int64)
    for m1 in range(d):
        z1 = alg.idx[m1, z]
        c1 = alg.coef[m1, z]
        for m2 in range(d):
            z2 = alg.idx[z1, m2]
            c2 = alg.coef[z1, m2]
            s[z2 * d + z, m1 * d + m2] = c1 * c2 % p
    return _kernels.rank_mod_p(s, p) == d * d


@dataclass(frozen=True)
class ExplicitSplitting:
    """Images of the basis u^i v^j as r x r matrices over F_prime."""

    prime: int
    zeta: int
    images: tuple

    def image(self, i: int, j: int) -> np.ndarray:
        r = round(len(self.images) ** 0.5)
        return self.images[(i % r) * r + (j % r)]


def explicit_splitting(alg: CyclicAlgebra) -> ExplicitSplitting:
    """Isomorphism onto the full r x r matrix algebra for a = b = 1:
    u -> cyclic shift, v -> diag(zeta^j); verified as a homomorphism with
    image spanning all matrices."""
    if alg.a != 1 % alg.prime or alg.b != 1 % alg.prime:
        raise UnsupportedError("explicit splitting is implemented only for a = b = 1")
    r, p, zeta = alg.r, alg.prime, alg.zeta
    zs = np.arange(r)
    images = []
    for i in range(r):
        for j in range(r):
            m = np.zeros((r, r), dtype=np.int64)
            m[(zs + i) % r, zs] = np.array([pow(zeta, int(j * t), p) for t in zs],
                                           dtype=np.int64)
            images.append(m)
    for m1 in range(r * r):
        for m2 in range(r * r):
            c, m3 = alg.basis_product(m1, m2)
            if not np.array_equal(images[m1] @ images[m2] % p, c * images[m3] % p):
                raise MathematicalError(
                    f"internal: splitting fails the product rule at {(m1, m2)}")
    flat = np.stack([m.reshape(-1) for m in images])
    if _kernels.rank_mod_p(flat, p) != r * r:
        raise MathematicalError("internal: splitting image does not span the matrix algebra")
    return ExplicitSplitting(p, zeta, tuple(images))
