"""Finite abelian groups presented as explicit direct sums of cyclic groups.

An element of G = Z/m_1 + ... + Z/m_k is a coordinate tuple reduced mod the
moduli. The canonical enumeration order is little-endian mixed radix: the
first coordinate varies fastest, so the element with index i has coordinates
(i % m_1, (i // m_1) % m_2, ...). Every table, JSON document and witness
report in this package uses that order.

Also here: exact Smith normal form with transformation matrices, linear
solving and kernel enumeration mod M, quotient presentations, duplicate-free
subgroup enumeration with Hermite-normal-form canonical generators, and
abstract presentations of subgroups with explicit embeddings.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import InvalidArgumentError

__all__ = [
    "FinAbGroup",
    "GroupElement",
    "Character",
    "SubgroupData",
    "SubgroupPresentation",
    "ProjectionMap",
    "group_new",
    "dual_group",
    "smith_normal_form",
    "int_inverse",
    "quotient_presentation",
    "subgroups_of_order",
    "subgroup_presentation",
    "ModLinearSolver",
    "is_prime",
    "smallest_prime_1mod",
]


class FinAbGroup:
    """Z/m_1 + ... + Z/m_k with elements enumerated little-endian."""

    def __init__(self, moduli: Iterable[int]):
        moduli = tuple(int(m) for m in moduli)
        if any(m < 1 for m in moduli):
            raise InvalidArgumentError(f"moduli must be positive, got {moduli}")
        self.moduli = moduli

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @cached_property
    def order(self) -> int:
        return math.prod(self.moduli)

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*self.moduli) if self.moduli else 1

    @cached_property
    def strides(self) -> tuple[int, ...]:
        out, acc = [], 1
        for m in self.moduli:
            out.append(acc)
            acc *= m
        return tuple(out)

    def index(self, coords: Sequence[int]) -> int:
        if len(coords) != self.rank:
            raise InvalidArgumentError(f"expected {self.rank} coordinates, got {len(coords)}")
        return sum((int(c) % m) * s for c, m, s in zip(coords, self.moduli, self.strides))

    def coords(self, index: int) -> tuple[int, ...]:
        out = []
        for m in self.moduli:
            index, r = divmod(index, m)
            out.append(r)
        return tuple(out)

    def element(self, coords: Sequence[int]) -> "GroupElement":
        if len(coords) != self.rank:
            raise InvalidArgumentError(f"expected {self.rank} coordinates, got {len(coords)}")
        return GroupElement(self, tuple(int(c) % m for c, m in zip(coords, self.moduli)))

    def element_by_index(self, index: int) -> "GroupElement":
        if not 0 <= index < self.order:
            raise InvalidArgumentError(f"element index {index} out of range")
        return GroupElement(self, self.coords(index))

    @property
    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    @cached_property
    def elements(self) -> np.ndarray:
        """All element coordinates, shape (order, rank), canonical order."""
        idx = np.arange(self.order)
        cols = [(idx // s) % m for s, m in zip(self.strides, self.moduli)]
        if not cols:
            return np.zeros((1, 0), dtype=np.int64)
        return np.ascontiguousarray(np.stack(cols, axis=1), dtype=np.int64)

    def encode(self, coords: np.ndarray) -> np.ndarray:
        """Vectorized coordinate-array -> index map."""
        coords = np.asarray(coords, dtype=np.int64)
        m = np.array(self.moduli, dtype=np.int64)
        s = np.array(self.strides, dtype=np.int64)
        if self.rank == 0:
            return np.zeros(coords.shape[:-1], dtype=np.int64)
        return ((coords % m) * s).sum(axis=-1)

    @cached_property
    def add_table(self) -> np.ndarray:
        a = self.elements
        return self.encode(a[:, None, :] + a[None, :, :])

    @cached_property
    def neg_table(self) -> np.ndarray:
        return self.encode(-self.elements)

    def element_order(self, el: "GroupElement | Sequence[int]") -> int:
        coords = el.coords if isinstance(el, GroupElement) else el
        return math.lcm(*(m // math.gcd(int(c), m) for c, m in zip(coords, self.moduli))) if self.moduli else 1

    def __iter__(self) -> Iterator["GroupElement"]:
        for i in range(self.order):
            yield self.element_by_index(i)

    def __eq__(self, other) -> bool:
        return isinstance(other, FinAbGroup) and self.moduli == other.moduli

    def __hash__(self) -> int:
        return hash(self.moduli)

    def __repr__(self) -> str:
        return f"FinAbGroup({list(self.moduli)})"


@dataclass(frozen=True)
class GroupElement:
    group: FinAbGroup
    coords: tuple[int, ...]

    @property
    def index(self) -> int:
        return self.group.index(self.coords)

    def __add__(self, other: "GroupElement") -> "GroupElement":
        if other.group != self.group:
            raise InvalidArgumentError("elements of different groups")
        return self.group.element([a + b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> "GroupElement":
        return self.group.element([-a for a in self.coords])

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __mul__(self, n: int) -> "GroupElement":
        return self.group.element([n * a for a in self.coords])

    __rmul__ = __mul__

    @property
    def order(self) -> int:
        return self.group.element_order(self)

    def __repr__(self) -> str:
        return f"<{','.join(map(str, self.coords))}>"


def group_new(moduli: Iterable[int]) -> FinAbGroup:
    """Construct a group from its cyclic moduli."""
    return FinAbGroup(moduli)


def dual_group(group: FinAbGroup) -> FinAbGroup:
    """The Cartier dual, presented with the same moduli; its elements are
    the coordinate vectors of characters."""
    return FinAbGroup(group.moduli)


@dataclass(frozen=True)
class Character:
    """A character of `group` with values in exponents mod `modulus`.

    eval(x) = sum_i coords_i * x_i * (modulus / m_i)  (mod modulus);
    requires every modulus m_i of the group to divide `modulus`.
    """

    group: FinAbGroup
    coords: tuple[int, ...]
    modulus: int

    def __post_init__(self):
        if len(self.coords) != self.group.rank:
            raise InvalidArgumentError("character coordinate count mismatch")
        for m in self.group.moduli:
            if self.modulus % m:
                raise InvalidArgumentError(
                    f"modulus {self.modulus} not divisible by group modulus {m}")

    def eval(self, x: GroupElement | Sequence[int]) -> int:
        coords = x.coords if isinstance(x, GroupElement) else x
        M = self.modulus
        return sum(int(l) * int(c) * (M // m)
                   for l, c, m in zip(self.coords, coords, self.group.moduli)) % M

    def table(self) -> np.ndarray:
        """Values on all elements in canonical order."""
        M = self.modulus
        w = np.array([int(l) * (M // m) for l, m in zip(self.coords, self.group.moduli)],
                     dtype=np.int64)
        if self.group.rank == 0:
            return np.zeros(1, dtype=np.int64)
        return (self.group.elements @ w) % M


# ---------------------------------------------------------------------------
# Smith normal form and exact linear algebra mod M
# ---------------------------------------------------------------------------

def smith_normal_form(a) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Exact Smith normal form U @ A @ V = D over the integers.

    U and V are unimodular; D is diagonal with nonnegative entries and
    d_i | d_{i+1}. Arithmetic is done with Python integers, so no overflow.
    """
    A = [[int(x) for x in row] for row in np.atleast_2d(np.asarray(a, dtype=object))]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_op(i, j, q):  # row i -= q * row j
        A[i] = [x - q * y for x, y in zip(A[i], A[j])]
        U[i] = [x - q * y for x, y in zip(U[i], U[j])]

    def col_op(i, j, q):  # col i -= q * col j
        for r in range(m):
            A[r][i] -= q * A[r][j]
        for r in range(n):
            V[r][i] -= q * V[r][j]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in range(m):
            A[r][i], A[r][j] = A[r][j], A[r][i]
        for r in range(n):
            V[r][i], V[r][j] = V[r][j], V[r][i]

    t = 0
    while t < min(m, n):
        # pick the nonzero entry of smallest magnitude as pivot
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            if A[t][t] < 0:
                A[t] = [-x for x in A[t]]
                U[t] = [-x for x in U[t]]
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    row_op(i, t, A[i][t] // p)
                    if A[i][t]:
                        swap_rows(t, i)
                        dirty = True
                        break
            if dirty:
                continue
            for j in range(t + 1, n):
                if A[t][j]:
                    col_op(j, t, A[t][j] // p)
                    if A[t][j]:
                        swap_cols(t, j)
                        dirty = True
                        break
            if dirty:
                continue
            # divisibility fix-up: pivot must divide the rest of the block
            p = A[t][t]
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            A[t] = [x + y for x, y in zip(A[t], A[bad])]
            U[t] = [x + y for x, y in zip(U[t], U[bad])]
        t += 1

    D = [[0] * n for _ in range(m)]
    for i in range(min(m, n)):
        D[i][i] = A[i][i]
    to_arr = lambda rows, r, c: np.array(rows, dtype=np.int64).reshape(r, c)
    return to_arr(U, m, m), to_arr(D, m, n), to_arr(V, n, n)


def int_inverse(u: np.ndarray) -> np.ndarray:
    """Exact inverse of a unimodular integer matrix."""
    uu, d, vv = smith_normal_form(u)
    n = d.shape[0]
    if d.shape[0] != d.shape[1] or np.any(np.diag(d) != 1):
        raise InvalidArgumentError("matrix is not unimodular")
    return (vv @ uu).astype(np.int64)


class ModLinearSolver:
    """Solve A v = b (mod M) for many right-hand sides, and enumerate the
    kernel, from one Smith normal form of A."""

    def __init__(self, a: np.ndarray, modulus: int):
        a = np.atleast_2d(np.asarray(a, dtype=np.int64))
        if modulus < 1:
            raise InvalidArgumentError("modulus must be positive")
        self.modulus = modulus
        self.shape = a.shape
        self.U, D, self.V = smith_normal_form(a)
        self.diag = [int(D[i, i]) for i in range(min(a.shape))]

    def solve(self, b: np.ndarray) -> np.ndarray | None:
        """One particular solution, or None when the system is unsolvable."""
        M = self.modulus
        c = (self.U @ np.asarray(b, dtype=np.int64)) % M
        m, n = self.shape
        w = np.zeros(n, dtype=np.int64)
        for i in range(m):
            ci = int(c[i])
            d = self.diag[i] if i < len(self.diag) else 0
            if d == 0:
                if ci % M:
                    return None
                continue
            g = math.gcd(d, M)
            if ci % g:
                return None
            if i < n:
                Mg = M // g
                w[i] = (ci // g) * pow(d // g, -1, Mg) % Mg
        return (self.V @ w) % M

    def kernel_gens(self) -> list[tuple[np.ndarray, int]]:
        """Generators (v, order) of the solution group of A v = 0 (mod M);
        the kernel is the set of sums sum s_i v_i with s_i in [0, order_i)."""
        M = self.modulus
        n = self.shape[1]
        out = []
        for j in range(n):
            d = self.diag[j] if j < len(self.diag) else 0
            g = math.gcd(d, M) if d else M
            if g > 1:
                v = (self.V[:, j] * (M // g)) % M
                out.append((v.astype(np.int64), g))
        return out

    def kernel_count(self) -> int:
        return math.prod(g for _, g in self.kernel_gens())

    def kernel_all(self) -> np.ndarray:
        """Every kernel vector, shape (count, n), deterministic order."""
        gens = self.kernel_gens()
        n = self.shape[1]
        if not gens:
            return np.zeros((1, n), dtype=np.int64)
        vecs = np.stack([v for v, _ in gens])
        orders = [g for _, g in gens]
        total = math.prod(orders)
        digits = np.zeros((total, len(gens)), dtype=np.int64)
        idx = np.arange(total)
        for i, g in enumerate(orders):
            idx, r = np.divmod(idx, g)
            digits[:, i] = r
        return (digits @ vecs) % self.modulus


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def smallest_prime_1mod(modulus: int, floor: int = 5) -> int:
    """Smallest prime p >= floor with p = 1 (mod modulus)."""
    p = floor
    while not (is_prime(p) and (p - 1) % modulus == 0):
        p += 1
    return p


# ---------------------------------------------------------------------------
# subgroups
# ---------------------------------------------------------------------------

def _hnf_rows(rows: list[list[int]], k: int) -> tuple[tuple[int, ...], ...]:
    """Row-style Hermite normal form of the lattice spanned by `rows`.

    The input must span a full-rank sublattice of Z^k (callers always include
    the ambient relation rows diag(m)), so the result is k x k upper
    triangular with positive diagonal and above-pivot entries reduced into
    [0, pivot). This is the unique canonical basis of the lattice.
    """
    H = [list(map(int, r)) for r in rows]
    pr = 0
    for col in range(k):
        while True:
            nz = [i for i in range(pr, len(H)) if H[i][col]]
            if not nz:
                raise InvalidArgumentError("lattice not of full rank")
            if len(nz) == 1:
                break
            nz.sort(key=lambda i: (abs(H[i][col]), i))
            i0 = nz[0]
            for i in nz[1:]:
                q = H[i][col] // H[i0][col]
                H[i] = [a - q * b for a, b in zip(H[i], H[i0])]
        i0 = nz[0]
        H[pr], H[i0] = H[i0], H[pr]
        if H[pr][col] < 0:
            H[pr] = [-a for a in H[pr]]
        for i in range(pr):
            q = H[i][col] // H[pr][col]
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[pr])]
        pr += 1
    return tuple(tuple(r) for r in H[:k])


def _closure(add: np.ndarray, seed: np.ndarray) -> np.ndarray:
    cur = np.unique(seed)
    while True:
        new = np.unique(add[np.ix_(cur, cur)])
        if new.size == cur.size:
            return new
        cur = new


class SubgroupData:
    """A subgroup of an ambient group, canonicalized by the Hermite normal
    form of its coordinate lattice (generators plus ambient relations)."""

    def __init__(self, ambient: FinAbGroup, generators: Iterable[Sequence[int] | GroupElement]):
        self.ambient = ambient
        gens = []
        for g in generators:
            el = g if isinstance(g, GroupElement) else ambient.element(g)
            if el.group != ambient:
                raise InvalidArgumentError("generator outside the ambient group")
            gens.append(el)
        k = ambient.rank
        rows = [[int(c) for c in el.coords] for el in gens]
        rows += [[ambient.moduli[i] if j == i else 0 for j in range(k)] for i in range(k)]
        self.hnf = _hnf_rows(rows, k) if k else ()
        canon = []
        for row in self.hnf:
            coords = tuple(c % m for c, m in zip(row, ambient.moduli))
            if any(coords):
                canon.append(GroupElement(ambient, coords))
        self.generators = tuple(canon)
        seed = np.array([0] + [el.index for el in self.generators], dtype=np.int64)
        self.element_indices = _closure(ambient.add_table, seed)
        self.order = int(self.element_indices.size)

    @property
    def key(self) -> tuple:
        return self.hnf

    def contains(self, el: GroupElement | Sequence[int]) -> bool:
        idx = el.index if isinstance(el, GroupElement) else self.ambient.index(el)
        return bool(np.isin(idx, self.element_indices))

    def elements(self) -> list[GroupElement]:
        return [self.ambient.element_by_index(int(i)) for i in self.element_indices]

    def __eq__(self, other) -> bool:
        return (isinstance(other, SubgroupData) and self.ambient == other.ambient
                and self.hnf == other.hnf)

    def __hash__(self) -> int:
        return hash((self.ambient, self.hnf))

    def __repr__(self) -> str:
        return f"SubgroupData(order={self.order}, generators={list(self.generators)})"


def subgroups_of_order(group: FinAbGroup, n: int) -> list[SubgroupData]:
    """Every subgroup of the given order, duplicate-free, deterministic order.

    Breadth-first closure over one-generator extensions; any subgroup of
    order n is reached through a chain of subgroups whose orders divide n,
    so the search prunes everything else. Deduplication is by the canonical
    Hermite-normal-form key.
    """
    if n < 1:
        raise InvalidArgumentError(f"subgroup order must be positive, got {n}")
    if group.order % n:
        return []
    add = group.add_table
    trivial = SubgroupData(group, [])
    seen: dict[tuple, SubgroupData] = {trivial.key: trivial}
    sets: dict[tuple, np.ndarray] = {trivial.key: trivial.element_indices}
    frontier = [trivial.key]
    while frontier:
        nxt = []
        for key in frontier:
            cur = sets[key]
            if cur.size == n:
                continue
            outside = np.setdiff1d(np.arange(group.order), cur, assume_unique=True)
            for x in outside:
                grown = _closure(add, np.append(cur, x))
                if n % grown.size:
                    continue
                sub = SubgroupData(group, [group.coords(int(i)) for i in grown])
                if sub.key not in seen:
                    seen[sub.key] = sub
                    sets[sub.key] = sub.element_indices
                    nxt.append(sub.key)
        frontier = nxt
    out = [s for s in seen.values() if s.order == n]
    out.sort(key=lambda s: s.key)
    return out


# ---------------------------------------------------------------------------
# quotients and presentations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProjectionMap:
    """Surjective homomorphism source -> target given by an integer matrix:
    x maps to (matrix @ x) reduced mod the target moduli."""

    source: FinAbGroup
    target: FinAbGroup
    matrix: tuple[tuple[int, ...], ...]

    def __call__(self, el: GroupElement | Sequence[int]) -> GroupElement:
        coords = el.coords if isinstance(el, GroupElement) else el
        if len(coords) != self.source.rank:
            raise InvalidArgumentError("coordinate count mismatch")
        out = [sum(r * int(c) for r, c in zip(row, coords)) for row in self.matrix]
        return self.target.element(out)


def quotient_presentation(ambient: FinAbGroup, sub: SubgroupData) -> tuple[FinAbGroup, ProjectionMap]:
    """Cyclic-moduli presentation of ambient/sub with an explicit projection.

    The relation lattice (ambient relations and subgroup generators, as
    columns) is put in Smith normal form U R V = D; the quotient is the sum
    of Z/d_i over diagonal entries d_i > 1 and the projection is the
    corresponding rows of U.
    """
    if sub.ambient != ambient:
        raise InvalidArgumentError("subgroup does not live in the given ambient group")
    k = ambient.rank
    cols = [[ambient.moduli[i] if j == i else 0 for j in range(k)] for i in range(k)]
    cols += [[int(c) for c in g.coords] for g in sub.generators]
    R = np.array(cols, dtype=np.int64).T if cols else np.zeros((k, 0), dtype=np.int64)
    if k == 0:
        q = FinAbGroup([])
        return q, ProjectionMap(ambient, q, ())
    U, D, _ = smith_normal_form(R)
    keep = [i for i in range(k) if D[i, i] > 1]
    q = FinAbGroup([int(D[i, i]) for i in keep])
    matrix = tuple(tuple(int(x) for x in U[i]) for i in keep)
    return q, ProjectionMap(ambient, q, matrix)


@dataclass(frozen=True)
class SubgroupPresentation:
    """Abstract cyclic decomposition of a subgroup with an explicit embedding.

    `group` is the abstract presentation; `embedding[j]` is the ambient image
    of the j-th abstract generator. `ambient_index` maps abstract element
    indices to ambient element indices.
    """

    subgroup: SubgroupData
    group: FinAbGroup
    embedding: tuple[GroupElement, ...]

    @cached_property
    def ambient_index(self) -> np.ndarray:
        amb = self.subgroup.ambient
        if self.group.rank == 0:
            return np.zeros(1, dtype=np.int64)
        emb = np.array([e.coords for e in self.embedding], dtype=np.int64)
        return amb.encode(self.group.elements @ emb)

    @cached_property
    def abstract_index(self) -> dict[int, int]:
        return {int(a): i for i, a in enumerate(self.ambient_index)}

    def embed(self, el: GroupElement | Sequence[int]) -> GroupElement:
        coords = el.coords if isinstance(el, GroupElement) else el
        amb = self.subgroup.ambient
        out = amb.zero
        for c, g in zip(coords, self.embedding):
            out = out + int(c) * g
        return out


def subgroup_presentation(sub: SubgroupData) -> SubgroupPresentation:
    """Abstract presentation K = Z/d_1 + ... + Z/d_t of a subgroup, with the
    embedding of each abstract generator into the ambient group."""
    amb = sub.ambient
    gens = sub.generators
    s, k = len(gens), amb.rank
    if s == 0:
        return SubgroupPresentation(sub, FinAbGroup([]), ())
    gamma = np.array([g.coords for g in gens], dtype=np.int64)  # s x k
    # kernel lattice of Z^s -> ambient: v with v @ gamma = 0 mod moduli
    aug = np.hstack([gamma.T, np.diag(np.array(amb.moduli, dtype=np.int64))])  # k x (s+k)
    _, D, V = smith_normal_form(aug)
    rank = sum(1 for i in range(min(D.shape)) if D[i, i] != 0)
    basis = V[:s, rank:]  # columns span the kernel's first-block projection
    if basis.shape[1] != s:
        raise InvalidArgumentError("internal: kernel lattice of unexpected rank")
    U2, D2, _ = smith_normal_form(basis)
    u2inv = int_inverse(U2)
    keep = [i for i in range(s) if D2[i, i] > 1]
    group = FinAbGroup([int(D2[i, i]) for i in keep])
    embedding = []
    for j in keep:
        v = u2inv[:, j]  # abstract generator as a Z^s combination of gens
        el = amb.zero
        for c, g in zip(v, gens):
            el = el + int(c) * g
        embedding.append(el)
    pres = SubgroupPresentation(sub, group, tuple(embedding))
    if group.order != sub.order:
        raise InvalidArgumentError("internal: presentation order mismatch")
    return pres
