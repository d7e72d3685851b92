"""Bilinear and alternating pairings on finite abelian groups, elementary
divisors of nondegenerate alternating forms, and the standard symplectic
normal form.

Pairings take values in exponents mod M (multiplicatively: in the M-th roots
of unity). A form is a matrix B over Z/M with e(x, y) = x^T B y; it is well
defined on the group exactly when m_i B_ij = m_j B_ij = 0 (mod M).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import DegenerateFormError, InvalidArgumentError
from .fingroup import FinAbGroup, GroupElement, SubgroupData

__all__ = [
    "BilinearForm",
    "AlternatingForm",
    "ElementaryDivisorVector",
    "SymplecticBasis",
    "form_eval",
    "radical",
    "is_nondegenerate",
    "elementary_divisors",
    "standard_form",
    "enumerate_alternating_forms",
]


class BilinearForm:
    """e(x, y) = x^T B y in exponents mod `modulus`."""

    def __init__(self, group: FinAbGroup, modulus: int, matrix):
        if modulus < 1:
            raise InvalidArgumentError("modulus must be positive")
        B = np.asarray(matrix, dtype=np.int64) % modulus
        k = group.rank
        if B.shape != (k, k):
            raise InvalidArgumentError(f"form matrix must be {k}x{k}, got {B.shape}")
        m = np.array(group.moduli, dtype=np.int64).reshape(-1, 1)
        if k and (np.any(m * B % modulus) or np.any(B * m.T % modulus)):
            raise InvalidArgumentError(
                "form not well defined: m_i * B_ij must vanish mod the modulus")
        self.group = group
        self.modulus = modulus
        self.matrix = B

    def eval(self, x: GroupElement | Sequence[int], y: GroupElement | Sequence[int]) -> int:
        cx = x.coords if isinstance(x, GroupElement) else x
        cy = y.coords if isinstance(y, GroupElement) else y
        return int(np.asarray(cx, dtype=np.int64) @ self.matrix @ np.asarray(cy, dtype=np.int64)) % self.modulus

    @cached_property
    def table(self) -> np.ndarray:
        """Values on all element pairs, shape (order, order), canonical order."""
        a = self.group.elements
        return (a @ self.matrix @ a.T) % self.modulus

    def __eq__(self, other) -> bool:
        return (isinstance(other, BilinearForm) and self.group == other.group
                and self.modulus == other.modulus and np.array_equal(self.matrix, other.matrix))

    def __hash__(self) -> int:
        return hash((self.group, self.modulus, self.matrix.tobytes()))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.group}, mod {self.modulus}, {self.matrix.tolist()})"


class AlternatingForm(BilinearForm):
    """Bilinear form with e(x, x) = 0 for every x.

    Zero diagonal plus skew-symmetry of the matrix is equivalent to the
    exhaustive condition: e(x,x) = sum_i x_i^2 B_ii + sum_{i<j} x_i x_j (B_ij + B_ji).
    """

    def __init__(self, group: FinAbGroup, modulus: int, matrix):
        super().__init__(group, modulus, matrix)
        B = self.matrix
        if np.any(np.diagonal(B) % modulus):
            raise InvalidArgumentError("alternating form must have zero diagonal")
        if np.any((B + B.T) % modulus):
            raise InvalidArgumentError("alternating form must be skew-symmetric")


def form_eval(form: BilinearForm, x, y) -> int:
    """Value of the form on a pair of elements, as an exponent mod M."""
    return form.eval(x, y)


def radical(form: BilinearForm) -> SubgroupData:
    """The subgroup {x : e(x, y) = 0 for all y}."""
    rows = np.nonzero(~form.table.any(axis=1))[0]
    g = form.group
    return SubgroupData(g, [g.coords(int(i)) for i in rows])


def is_nondegenerate(form: BilinearForm) -> bool:
    """True when x -> e(x, .) is injective into the dual."""
    return radical(form).order == 1


@dataclass(frozen=True)
class ElementaryDivisorVector:
    """delta = (d_1, ..., d_k), every d_i > 1, with d_{i+1} | d_i."""

    delta: tuple[int, ...]

    def __post_init__(self):
        d = tuple(int(x) for x in self.delta)
        object.__setattr__(self, "delta", d)
        if any(x <= 1 for x in d):
            raise InvalidArgumentError(f"elementary divisors must exceed 1, got {d}")
        for a, b in zip(d, d[1:]):
            if a % b:
                raise InvalidArgumentError(f"divisibility chain broken in {d}")

    @property
    def r(self) -> int:
        """prod d_i, the square root of the order of K(delta) + K(delta)^D."""
        return math.prod(self.delta)

    def domain(self) -> FinAbGroup:
        """K(delta) + K(delta)^D with the x-block first."""
        return FinAbGroup(list(self.delta) + list(self.delta))

    def __iter__(self):
        return iter(self.delta)

    def __len__(self):
        return len(self.delta)


@dataclass(frozen=True)
class SymplecticBasis:
    """Basis change phi: K(delta) + K(delta)^D -> K carrying the standard
    form to the reduced form; images lists the x-generators then the
    y-generators."""

    delta: ElementaryDivisorVector
    codomain: FinAbGroup
    images: tuple[GroupElement, ...]

    @property
    def domain(self) -> FinAbGroup:
        return self.delta.domain()

    @cached_property
    def index_map(self) -> np.ndarray:
        """Element index permutation: index_map[i] = index of phi(element i)."""
        dom = self.domain
        if not self.images:
            return np.zeros(1, dtype=np.int64)
        W = np.array([g.coords for g in self.images], dtype=np.int64)
        out = self.codomain.encode(dom.elements @ W)
        if np.unique(out).size != dom.order or dom.order != self.codomain.order:
            raise InvalidArgumentError("internal: basis change is not bijective")
        return out

    @cached_property
    def inverse_index_map(self) -> np.ndarray:
        return np.argsort(self.index_map).astype(np.int64)

    def __call__(self, el: GroupElement | Sequence[int]) -> GroupElement:
        coords = el.coords if isinstance(el, GroupElement) else el
        dom = self.domain
        if len(coords) != dom.rank:
            raise InvalidArgumentError("coordinate count mismatch")
        return self.codomain.element_by_index(int(self.index_map[dom.index(coords)]))


def standard_form(delta: ElementaryDivisorVector | Sequence[int], modulus: int) -> AlternatingForm:
    """The standard symplectic form e((x,l),(x',l')) = l'(x) - l(x') on
    K(delta) + K(delta)^D, in exponents mod `modulus`."""
    if not isinstance(delta, ElementaryDivisorVector):
        delta = ElementaryDivisorVector(tuple(delta))
    for d in delta:
        if modulus % d:
            raise InvalidArgumentError(f"modulus {modulus} not divisible by divisor {d}")
    k = len(delta)
    B = np.zeros((2 * k, 2 * k), dtype=np.int64)
    for i, d in enumerate(delta):
        B[i, k + i] = modulus // d
        B[k + i, i] = (-(modulus // d)) % modulus
    return AlternatingForm(delta.domain(), modulus, B)


def elementary_divisors(form: AlternatingForm) -> tuple[ElementaryDivisorVector, SymplecticBasis]:
    """Greedy symplectic reduction of a nondegenerate alternating form.

    Repeatedly select the pair (x, y) whose pairing value has maximal order
    in Z/M, tie-broken by lexicographically smallest (x, then y) in the
    canonical enumeration order; rescale y so e(x, y) = M/d exactly; recurse
    on the orthogonal complement of the plane <x, y>.
    """
    if not is_nondegenerate(form):
        raise DegenerateFormError("form has a nonzero radical")
    g = form.group
    M = form.modulus
    E = form.table
    live = np.arange(g.order)
    xs: list[int] = []
    ys: list[int] = []
    ds: list[int] = []
    while live.size > 1:
        sub = E[np.ix_(live, live)]
        orders = M // np.gcd(sub, M)
        d = int(orders.max())
        if d == 1:
            raise DegenerateFormError("internal: nonzero orthogonal complement pairs trivially")
        flat = int(np.argmax(orders == d))
        i, j = divmod(flat, live.size)
        x = int(live[i])
        y = int(live[j])
        # rescale y so the pairing value is exactly M/d
        w = int(E[x, y]) // (M // d)
        c = pow(w % d, -1, d)
        y = int(g.encode(np.asarray(g.coords(y), dtype=np.int64) * c))
        if int(E[x, y]) != M // d:
            raise DegenerateFormError("internal: rescaled pairing value not primitive")
        if ds and ds[-1] % d:
            raise DegenerateFormError("internal: divisibility chain broken")
        xs.append(x)
        ys.append(y)
        ds.append(d)
        live = live[(E[live, x] % M == 0) & (E[live, y] % M == 0)]
    delta = ElementaryDivisorVector(tuple(ds))
    images = tuple(g.element_by_index(i) for i in xs + ys)
    basis = SymplecticBasis(delta, g, images)
    basis.index_map  # force the bijectivity check
    return delta, basis


def enumerate_alternating_forms(group: FinAbGroup, modulus: int,
                                nondegenerate_only: bool = False) -> list[AlternatingForm]:
    """All alternating forms on the group mod `modulus`, deterministic order.

    The strictly-upper entries B_ij range over the multiples of
    M/gcd(m_i, m_j); the lower triangle is forced by skew-symmetry.
    """
    k = group.rank
    m = group.moduli
    slots = [(i, j, math.gcd(m[i], m[j])) for i in range(k) for j in range(i + 1, k)]
    out = []
    total = math.prod(c for _, _, c in slots) if slots else 1
    for t in range(total):
        B = np.zeros((k, k), dtype=np.int64)
        rem = t
        for i, j, c in slots:
            rem, digit = rem // c, rem % c
            B[i, j] = digit * (modulus // c)
            B[j, i] = (-B[i, j]) % modulus
        form = AlternatingForm(group, modulus, B)
        if nondegenerate_only and not is_nondegenerate(form):
            continue
        out.append(form)
    return out
