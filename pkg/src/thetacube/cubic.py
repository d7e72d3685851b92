"""Cubic structures on trivialized torsors, symmetric biextension structures,
trivializations, and the round-trip equivalences with central extensions.

All torsor data is held in trivialized coordinates, so every structure is an
exponent table over the canonical element order and every axiom is a table
equation checked exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .errors import (IncompatibleTrivializationError, InvalidArgumentError,
                     MathematicalError)
from .fingroup import FinAbGroup
from .pairing import is_nondegenerate
from .thetagroup import CocycleExtension, commutator_pairing

__all__ = [
    "CubicStructure",
    "BiextensionStructure",
    "CubicCouple",
    "CubicCheckResult",
    "is_cubic",
    "cubic_coboundary",
    "theta_of_cocycle",
    "cubic_to_biextension",
    "biextension_to_cubic",
    "central_from_cubic",
    "cubic_from_central",
    "is_nondegenerate_couple",
]

_CUBIC_CHECKS = {
    _kernels.CUBIC_NOT_NORMALIZED: "normalization",
    _kernels.CUBIC_NOT_SYMMETRIC_XY: "symmetry in the first two slots",
    _kernels.CUBIC_NOT_SYMMETRIC_YZ: "symmetry in the last two slots",
    _kernels.CUBIC_PAIR_COCYCLE_1: "pair cocycle identity in the first two slots",
    _kernels.CUBIC_PAIR_COCYCLE_2: "pair cocycle identity in the last two slots",
}


@dataclass(frozen=True)
class CubicCheckResult:
    """Outcome of is_cubic: truthy iff valid, else the first failed check
    with a witness tuple of element indices."""

    ok: bool
    failed_check: str | None = None
    witness: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "cubic"
        return f"not cubic: {self.failed_check} fails at {self.witness}"


def _check_table(group: FinAbGroup, modulus: int, table: np.ndarray) -> CubicCheckResult:
    code, *witness = _kernels.cubic_defect(table, group.add_table, modulus)
    if code == _kernels.CUBIC_OK:
        return CubicCheckResult(True)
    return CubicCheckResult(False, _CUBIC_CHECKS[int(code)], tuple(int(w) for w in witness))


class CubicStructure:
    """S3-invariant table t: K^3 -> Z/M, normalized and a 2-cocycle in each
    pair of variables."""

    def __init__(self, group: FinAbGroup, modulus: int, table):
        if modulus < 1:
            raise InvalidArgumentError("modulus must be positive")
        n = group.order
        t = np.ascontiguousarray(np.asarray(table, dtype=np.int64) % modulus)
        if t.shape != (n, n, n):
            raise InvalidArgumentError(f"cubic table must be {n}x{n}x{n}, got {t.shape}")
        res = _check_table(group, modulus, t)
        if not res:
            raise InvalidArgumentError(str(res))
        self.group = group
        self.modulus = modulus
        self.table = t

    def __eq__(self, other) -> bool:
        return (isinstance(other, CubicStructure) and self.group == other.group
                and self.modulus == other.modulus and np.array_equal(self.table, other.table))

    def __hash__(self) -> int:
        return hash((self.group, self.modulus, self.table.tobytes()))

    def __repr__(self) -> str:
        return f"CubicStructure({self.group}, mod {self.modulus})"


def is_cubic(group: FinAbGroup, modulus: int, table) -> CubicCheckResult:
    """Check a raw table for all cubic-structure axioms; on failure the
    result names the first violated identity and a witness index tuple."""
    n = group.order
    t = np.ascontiguousarray(np.asarray(table, dtype=np.int64) % modulus)
    if t.shape != (n, n, n):
        raise InvalidArgumentError(f"cubic table must be {n}x{n}x{n}, got {t.shape}")
    return _check_table(group, modulus, t)


def cubic_coboundary(group: FinAbGroup, values: Sequence[int] | Callable[[int], int],
                     modulus: int) -> CubicStructure:
    """Third difference of a function l on K vanishing at 0:
    t(x,y,z) = l(x+y+z) - l(x+y) - l(x+z) - l(y+z) + l(x) + l(y) + l(z)."""
    n = group.order
    if callable(values):
        l = np.array([values(i) for i in range(n)], dtype=np.int64) % modulus
    else:
        l = np.asarray(values, dtype=np.int64) % modulus
    if l.shape != (n,):
        raise InvalidArgumentError("need one value per group element")
    if l[0] % modulus:
        raise InvalidArgumentError("function must vanish at the identity")
    add = group.add_table
    add3 = add[add, :]
    t = (l[add3] - l[add][:, :, None] - l[add][:, None, :] - l[add][None, :, :]
         + l[:, None, None] + l[None, :, None] + l[None, None, :]) % modulus
    return CubicStructure(group, modulus, t)


def theta_of_cocycle(ext: CocycleExtension) -> CubicStructure:
    """t(x,y,z) = f(x+y,z) - f(x,z) - f(y,z); asserted equal to
    f(x,y+z) - f(x,y) - f(x,z), which is exactly the cocycle identity."""
    add = ext.group.add_table
    t = _kernels.theta_table(ext.table, add, ext.modulus)
    t_alt = _kernels.theta_table_alt(ext.table, add, ext.modulus)
    if not np.array_equal(t, t_alt):
        raise MathematicalError("internal: the two difference formulas disagree on a cocycle")
    return CubicStructure(ext.group, ext.modulus, t)


class BiextensionStructure:
    """Two partial-law constant tables on K x K: c1(x; y, y') composes the
    second slot over fixed x, c2(x, x'; y) the first slot over fixed y.
    Axioms: normalization, commutativity and associativity in each slot,
    and the interchange law."""

    def __init__(self, group: FinAbGroup, modulus: int, c1, c2):
        if modulus < 1:
            raise InvalidArgumentError("modulus must be positive")
        n = group.order
        a1 = np.ascontiguousarray(np.asarray(c1, dtype=np.int64) % modulus)
        a2 = np.ascontiguousarray(np.asarray(c2, dtype=np.int64) % modulus)
        if a1.shape != (n, n, n) or a2.shape != (n, n, n):
            raise InvalidArgumentError(f"law tables must be {n}x{n}x{n}")
        bad = _biextension_defect(group, modulus, a1, a2)
        if bad is not None:
            raise InvalidArgumentError(f"biextension axiom fails: {bad[0]} at {bad[1]}")
        self.group = group
        self.modulus = modulus
        self.c1 = a1
        self.c2 = a2

    def __eq__(self, other) -> bool:
        return (isinstance(other, BiextensionStructure) and self.group == other.group
                and self.modulus == other.modulus
                and np.array_equal(self.c1, other.c1) and np.array_equal(self.c2, other.c2))

    def __hash__(self) -> int:
        return hash((self.group, self.modulus, self.c1.tobytes(), self.c2.tobytes()))


def _first_nonzero(d: np.ndarray) -> tuple[int, ...] | None:
    flat = np.flatnonzero(d)
    if flat.size == 0:
        return None
    return tuple(int(v) for v in np.unravel_index(int(flat[0]), d.shape))


def _biextension_defect(group: FinAbGroup, modulus: int, c1: np.ndarray,
                        c2: np.ndarray) -> tuple[str, tuple[int, ...]] | None:
    add = group.add_table
    if np.any(c1[:, 0, :]) or np.any(c1[:, :, 0]) or np.any(c2[0, :, :]) or np.any(c2[:, 0, :]):
        for name, t in (("first-law normalization", np.maximum(c1[:, 0, :], c1[:, :, 0])),
                        ("second-law normalization", np.maximum(c2[0, :, :], c2[:, 0, :]))):
            w = _first_nonzero(t % modulus)
            if w is not None:
                return name, w
    w = _first_nonzero((c1 - c1.transpose(0, 2, 1)) % modulus)
    if w is not None:
        return "first-law commutativity", w
    w = _first_nonzero((c2 - c2.transpose(1, 0, 2)) % modulus)
    if w is not None:
        return "second-law commutativity", w
    d = (c1[:, :, :, None] + c1[:, add, :] - c1[:, None, :, :] - c1[:, :, add]) % modulus
    w = _first_nonzero(d)
    if w is not None:
        return "first-law associativity", w
    d = (c2[:, :, None, :] + c2[add, :, :] - c2[None, :, :, :] - c2[:, add, :]) % modulus
    w = _first_nonzero(d)
    if w is not None:
        return "second-law associativity", w
    d = (c1[:, None, :, :] + c1[None, :, :, :] + c2[:, :, add]
         - c2[:, :, :, None] - c2[:, :, None, :] - c1[add, :, :]) % modulus
    w = _first_nonzero(d)
    if w is not None:
        return "interchange law", w
    return None


def cubic_to_biextension(t: CubicStructure) -> BiextensionStructure:
    """Both partial laws are read off the cubic table itself: c1 = c2 = t."""
    return BiextensionStructure(t.group, t.modulus, t.table, t.table)


def biextension_to_cubic(b: BiextensionStructure) -> CubicStructure:
    """Inverse of cubic_to_biextension; requires the symmetric case c1 = c2."""
    if not np.array_equal(b.c1, b.c2):
        w = _first_nonzero((b.c1 - b.c2) % b.modulus)
        raise InvalidArgumentError(f"biextension is not symmetric: c1 != c2 at {w}")
    return CubicStructure(b.group, b.modulus, b.c1)


class CubicCouple:
    """A cubic structure together with a trivialization table sigma whose
    second differences recover the cubic table in both slot groupings."""

    def __init__(self, cubic: CubicStructure, sigma):
        group, modulus = cubic.group, cubic.modulus
        n = group.order
        s = np.ascontiguousarray(np.asarray(sigma, dtype=np.int64) % modulus)
        if s.shape != (n, n):
            raise InvalidArgumentError(f"sigma must be {n}x{n}, got {s.shape}")
        if np.any(s[0, :]) or np.any(s[:, 0]):
            raise InvalidArgumentError("sigma must be normalized: sigma(0,.) = sigma(.,0) = 0")
        add = group.add_table
        d = (s[add, :] - s[:, None, :] - s[None, :, :] - cubic.table) % modulus
        w = _first_nonzero(d)
        if w is not None:
            raise IncompatibleTrivializationError(
                "t(x,y,z) != sigma(x+y,z) - sigma(x,z) - sigma(y,z)", witness=w)
        d = (s[:, add] - s[:, :, None] - s[:, None, :] - cubic.table) % modulus
        w = _first_nonzero(d)
        if w is not None:
            raise IncompatibleTrivializationError(
                "t(x,y,z) != sigma(x,y+z) - sigma(x,y) - sigma(x,z)", witness=w)
        self.cubic = cubic
        self.sigma = s

    @property
    def group(self) -> FinAbGroup:
        return self.cubic.group

    @property
    def modulus(self) -> int:
        return self.cubic.modulus

    def __eq__(self, other) -> bool:
        return (isinstance(other, CubicCouple) and self.cubic == other.cubic
                and np.array_equal(self.sigma, other.sigma))

    def __hash__(self) -> int:
        return hash((self.cubic, self.sigma.tobytes()))


def central_from_cubic(couple: CubicCouple) -> CocycleExtension:
    """The trivialization is a 2-cocycle (that is exactly the couple's
    compatibility), so it is the cocycle of a central extension."""
    return CocycleExtension(couple.group, couple.modulus, couple.sigma)


def cubic_from_central(ext: CocycleExtension) -> CubicCouple:
    """Couple with t the difference table of the cocycle and sigma the
    cocycle itself; inverse to central_from_cubic on the nose."""
    return CubicCouple(theta_of_cocycle(ext), ext.table)


def is_nondegenerate_couple(couple: CubicCouple) -> bool:
    """True iff the central extension of the couple has perfect commutator
    pairing e(x,y) = sigma(x,y) - sigma(y,x)."""
    return is_nondegenerate(commutator_pairing(central_from_cubic(couple)))
