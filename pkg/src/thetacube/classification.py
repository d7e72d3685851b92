"""Classification of homogeneous irreducible projective-space bundles on a
g-dimensional abelian variety at torsion level r: enumeration of pairs
(K, e), realization as theta groups with Schrodinger data and as cubic
couples, and the induced r-torsion Brauer classes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .brauer import (AbelianVarietyData, BrauerPresentation,
                     brauer_presentation, wedge_pairs)
from .cubic import CubicCouple, cubic_from_central
from .errors import InvalidArgumentError, MathematicalError, UnsupportedError
from .fingroup import (FinAbGroup, ModLinearSolver, SubgroupData,
                       SubgroupPresentation, is_prime, subgroup_presentation,
                       subgroups_of_order)
from .pairing import (AlternatingForm, ElementaryDivisorVector, SymplecticBasis,
                      elementary_divisors, enumerate_alternating_forms,
                      is_nondegenerate)
from .schrodinger import (MonomialMatrix, SchrodingerRep, is_faithful_projective,
                          is_irreducible, schrodinger)
from .thetagroup import CocycleExtension, commutator_pairing, heisenberg

__all__ = [
    "SymplecticPair",
    "BundleDescriptor",
    "enumerate_pairs",
    "pair_to_bundle",
    "pair_to_cubic",
    "bundle_to_brauer",
    "brauer_classes",
]


@dataclass(frozen=True)
class SymplecticPair:
    """A subgroup K of A[r] = (Z/r)^(2g) with a nondegenerate alternating
    form on its abstract presentation, values mod r."""

    subgroup: SubgroupData
    presentation: SubgroupPresentation
    form: AlternatingForm

    def __iter__(self) -> Iterator:
        return iter((self.subgroup, self.form))


def enumerate_pairs(g: int, r: int) -> list[SymplecticPair]:
    """All pairs (K, e): subgroups of order r^2 in (Z/r)^(2g) joined with
    every nondegenerate alternating form mod r, in deterministic order."""
    if r < 2:
        raise InvalidArgumentError("torsion level r must be at least 2")
    if g < 1:
        raise InvalidArgumentError("dimension g must be at least 1")
    ambient = FinAbGroup((r,) * (2 * g))
    out = []
    for sub in subgroups_of_order(ambient, r * r):
        pres = subgroup_presentation(sub)
        for form in enumerate_alternating_forms(pres.group, r, nondegenerate_only=True):
            out.append(SymplecticPair(sub, pres, form))
    return out


def _normalize_pair(pair_or_sub, form=None) -> tuple[SubgroupData, SubgroupPresentation,
                                                     AlternatingForm]:
    if isinstance(pair_or_sub, SymplecticPair):
        if form is not None:
            raise InvalidArgumentError("form is already part of the pair")
        return pair_or_sub.subgroup, pair_or_sub.presentation, pair_or_sub.form
    if not isinstance(pair_or_sub, SubgroupData) or not isinstance(form, AlternatingForm):
        raise InvalidArgumentError("expected a SymplecticPair or (SubgroupData, AlternatingForm)")
    pres = subgroup_presentation(pair_or_sub)
    if form.group != pres.group:
        raise InvalidArgumentError(
            "form must live on the canonical presentation of the subgroup")
    return pair_or_sub, pres, form


class BundleDescriptor:
    """Realization data of the bundle attached to (K, e): the normal-form
    invariant delta, the transported theta group on K, and the Schrodinger
    representation giving the projective action rho: K -> PGL_r."""

    def __init__(self, subgroup: SubgroupData, presentation: SubgroupPresentation,
                 form: AlternatingForm, delta: ElementaryDivisorVector,
                 basis: SymplecticBasis, theta: CocycleExtension, rep: SchrodingerRep):
        self.subgroup = subgroup
        self.presentation = presentation
        self.form = form
        self.delta = delta
        self.basis = basis
        self.theta = theta
        self.rep = rep

    @property
    def level(self) -> int:
        return self.delta.r

    def rho(self, el) -> MonomialMatrix:
        """Projective operator of an element of the abstract group K."""
        g = self.presentation.group
        idx = el if isinstance(el, (int, np.integer)) else g.element(el).index
        dom_index = int(self.basis.inverse_index_map[idx])
        return self.rep.projective_operator(self.rep.extension.group.coords(dom_index))

    def to_json(self) -> dict:
        return {
            "K": {"generators": [list(gen.coords) for gen in self.subgroup.generators],
                  "moduli": list(self.presentation.group.moduli)},
            "e": {"matrix": self.form.matrix.tolist(), "modulus": self.form.modulus},
            "delta": list(self.delta),
        }


def pair_to_bundle(pair_or_sub, form: AlternatingForm | None = None,
                   g: int | None = None, r: int | None = None) -> BundleDescriptor:
    """Bundle data of a pair: delta from the form, the Heisenberg extension
    transported onto K along the symplectic basis, and the Schrodinger
    representation, all at scalar modulus r."""
    sub, pres, e = _normalize_pair(pair_or_sub, form)
    level = math.isqrt(sub.order)
    if level * level != sub.order:
        raise InvalidArgumentError("subgroup order is not a perfect square")
    if r is not None and r != e.modulus:
        raise InvalidArgumentError(f"form modulus {e.modulus} does not match r = {r}")
    if g is not None and sub.ambient.rank != 2 * g:
        raise InvalidArgumentError(f"ambient rank {sub.ambient.rank} does not match g = {g}")
    if not is_nondegenerate(e):
        raise InvalidArgumentError("form is degenerate")
    delta, basis = elementary_divisors(e)
    if delta.r != level:
        raise MathematicalError("internal: nondegenerate form with wrong divisor volume")
    modulus = e.modulus
    std = heisenberg(delta, modulus)
    inv = basis.inverse_index_map
    table = std.table[np.ix_(inv, inv)]
    theta = CocycleExtension(pres.group, modulus, table)
    if not np.array_equal(commutator_pairing(theta).table, e.table):
        raise MathematicalError("internal: transported commutator differs from the form")
    rep = schrodinger(delta, modulus)
    if not is_irreducible(rep):
        raise MathematicalError("internal: Schrodinger representation not irreducible")
    if not is_faithful_projective(rep):
        raise MathematicalError("internal: Schrodinger representation not faithful")
    return BundleDescriptor(sub, pres, e, delta, basis, theta, rep)


def pair_to_cubic(pair_or_sub, form: AlternatingForm | None = None) -> CubicCouple:
    """The nondegenerate cubic couple on K induced by the pair's theta
    group; its commutator pairing is exactly e."""
    sub, pres, e = _normalize_pair(pair_or_sub, form)
    if not is_nondegenerate(e):
        raise InvalidArgumentError("form is degenerate")
    delta, basis = elementary_divisors(e)
    std = heisenberg(delta, e.modulus)
    inv = basis.inverse_index_map
    theta = CocycleExtension(pres.group, e.modulus, std.table[np.ix_(inv, inv)])
    return cubic_from_central(theta)


def _inv_mod_p(mat: np.ndarray, p: int) -> np.ndarray:
    n = mat.shape[0]
    a = np.concatenate([mat % p, np.eye(n, dtype=np.int64)], axis=1)
    row = 0
    for col in range(n):
        piv = None
        for i in range(row, n):
            if a[i, col] % p:
                piv = i
                break
        if piv is None:
            raise MathematicalError("internal: singular matrix over the prime field")
        a[[row, piv]] = a[[piv, row]]
        a[row] = a[row] * pow(int(a[row, col]), -1, p) % p
        for i in range(n):
            if i != row and a[i, col]:
                a[i] = (a[i] - a[i, col] * a[row]) % p
        row += 1
    return a[:, n:]


def _complete_basis(rows: list[np.ndarray], r: int, n: int) -> np.ndarray:
    """Extend independent rows to a basis of F_r^n by standard vectors."""
    basis = [np.asarray(v, dtype=np.int64) % r for v in rows]
    echelon: list[np.ndarray] = []
    pivots: list[int] = []

    def reduce(v: np.ndarray) -> np.ndarray:
        v = v.copy()
        for w, piv in zip(echelon, pivots):
            if v[piv] % r:
                v = (v - v[piv] * pow(int(w[piv]), -1, r) % r * w) % r
        return v

    for v in basis:
        red = reduce(v)
        nz = np.flatnonzero(red)
        if nz.size == 0:
            raise MathematicalError("internal: dependent rows in a symplectic basis")
        echelon.append(red)
        pivots.append(int(nz[0]))
    for j in range(n):
        if len(basis) == n:
            break
        cand = np.zeros(n, dtype=np.int64)
        cand[j] = 1
        red = reduce(cand)
        if np.any(red):
            basis.append(cand)
            echelon.append(red)
            pivots.append(int(np.flatnonzero(red)[0]))
    return np.stack(basis)


def _canonical_extension(descriptor: BundleDescriptor, r: int) -> np.ndarray:
    """Alternating matrix on A[r] restricting to e on K: complete the
    symplectic basis of K to a basis of the ambient space and extend by
    zero on the new directions."""
    pres = descriptor.presentation
    n = descriptor.subgroup.ambient.rank
    k = len(descriptor.delta)
    amb = [np.array(pres.embed(img).coords, dtype=np.int64)
           for img in descriptor.basis.images]
    P = _complete_basis(amb, r, n)
    B = np.zeros((n, n), dtype=np.int64)
    for i, d in enumerate(descriptor.delta):
        B[i, k + i] = r // d
        B[k + i, i] = (-(r // d)) % r
    Pinv = _inv_mod_p(P, r)
    return Pinv @ B @ Pinv.T % r


def _restriction_rows(descriptor: BundleDescriptor, r: int) -> tuple[np.ndarray, np.ndarray]:
    """Linear system over F_r expressing `wedge coordinates restrict to e
    on K` in the unknown ambient form coordinates."""
    pres = descriptor.presentation
    n = descriptor.subgroup.ambient.rank
    pairs = wedge_pairs(n)
    gens = [np.array(g.coords, dtype=np.int64) for g in pres.embedding]
    rows, rhs = [], []
    for s in range(len(gens)):
        for t in range(s + 1, len(gens)):
            u, v = gens[s], gens[t]
            rows.append([int(u[i] * v[j] - u[j] * v[i]) % r for i, j in pairs])
            rhs.append(int(descriptor.form.matrix[s, t]) % r)
    return np.array(rows, dtype=np.int64), np.array(rhs, dtype=np.int64)


def _check_brauer_inputs(descriptor: BundleDescriptor, av: AbelianVarietyData):
    r = av.r
    if not is_prime(r):
        raise UnsupportedError(
            f"Brauer classes are computed only for prime torsion level, got r = {r}")
    if descriptor.level != r:
        raise InvalidArgumentError(
            f"descriptor level {descriptor.level} does not match r = {r}")
    if descriptor.subgroup.ambient.rank != 2 * av.g:
        raise InvalidArgumentError("descriptor ambient does not match the variety dimension")


def bundle_to_brauer(descriptor: BundleDescriptor, av: AbelianVarietyData,
                     extension=None, pres: BrauerPresentation | None = None) -> tuple[int, ...]:
    """Brauer class of the bundle: extend e from K to an alternating form
    on A[r] (canonically unless `extension` is given) and project it into
    the presentation quotient. Prime r only."""
    _check_brauer_inputs(descriptor, av)
    r = av.r
    if pres is None:
        pres = brauer_presentation(av)
    if extension is None:
        ext = _canonical_extension(descriptor, r)
    else:
        ext = np.asarray(extension, dtype=np.int64) % r
        a, b = _restriction_rows(descriptor, r)
        flat = np.array([ext[i, j] for i, j in wedge_pairs(2 * av.g)], dtype=np.int64)
        if np.any((a @ flat - b) % r):
            raise InvalidArgumentError("extension does not restrict to e on K")
    return pres.project_form(ext)


def brauer_classes(descriptor: BundleDescriptor, av: AbelianVarietyData,
                   pres: BrauerPresentation | None = None) -> list[tuple[int, ...]]:
    """Distinct Brauer classes over every alternating extension of e to
    A[r], sorted; more than one entry flags a genuine choice-dependence."""
    _check_brauer_inputs(descriptor, av)
    r = av.r
    if pres is None:
        pres = brauer_presentation(av)
    a, b = _restriction_rows(descriptor, r)
    solver = ModLinearSolver(a, r)
    particular = solver.solve(b)
    if particular is None:
        raise MathematicalError("internal: no alternating extension of a restrictable form")
    classes = {pres.project_coords((particular + h) % r)
               for h in solver.kernel_all()}
    return sorted(classes)
