"""Monomial matrices, Schrodinger representations, irreducibility, invariants."""
from __future__ import annotations

from itertools import product

import numpy as np
import pytest

from thetacube.errors import InvalidArgumentError
from thetacube.fingroup import SubgroupData, group_new, smallest_prime_1mod
from thetacube.pairing import form_eval
from thetacube.schrodinger import (FunctionModule, MonomialMatrix,
                                   coefficient_matrix, invariants_dimension,
                                   is_faithful_projective, is_irreducible,
                                   matrix_coefficient_check,
                                   primitive_root_of_unity, projective_rep,
                                   schrodinger, span_rank)
from thetacube.thetagroup import (LevelSubgroup, ThetaElement, commutator_pairing,
                                  heisenberg, lagrangian_subgroups)


def test_monomial_matrix_product_matches_dense():
    rng = np.random.default_rng(6)
    p, zeta = 5, primitive_root_of_unity(5, 4)
    for _ in range(20):
        a = MonomialMatrix(4, rng.permutation(5), rng.integers(0, 4, size=5))
        b = MonomialMatrix(4, rng.permutation(5), rng.integers(0, 4, size=5))
        dense = (a.dense(p, zeta) @ b.dense(p, zeta)) % p
        assert np.array_equal((a @ b).dense(p, zeta), dense)
        ia = a.inverse()
        assert np.array_equal((a @ ia).dense(p, zeta), np.eye(5, dtype=np.int64))
        assert (a @ ia).is_scalar() == 0


def test_monomial_matrix_validation():
    with pytest.raises(InvalidArgumentError):
        MonomialMatrix(2, [0, 0], [0, 0])  # not a permutation


def test_monomial_is_scalar():
    m = MonomialMatrix(4, [0, 1, 2], [3, 3, 3])
    assert m.is_scalar() == 3
    assert MonomialMatrix.identity(3, 4).is_scalar() == 0
    assert MonomialMatrix(4, [1, 0, 2], [0, 0, 0]).is_scalar() is None
    assert MonomialMatrix(4, [0, 1, 2], [1, 2, 1]).is_scalar() is None


def test_primitive_root_of_unity():
    for p, order in [(5, 2), (5, 4), (7, 3), (7, 6), (13, 12), (37, 36)]:
        z = primitive_root_of_unity(p, order)
        assert pow(z, order, p) == 1
        for k in range(1, order):
            assert pow(z, k, p) != 1
    with pytest.raises(InvalidArgumentError):
        primitive_root_of_unity(5, 3)  # 3 does not divide 4


def test_pauli_patterns_delta2():
    rep = schrodinger((2,))
    x = rep.operator(0, (1, 0))
    z = rep.operator(0, (0, 1))
    p, zeta = 5, primitive_root_of_unity(5, 2)
    assert np.array_equal(x.dense(p, zeta), [[0, 1], [1, 0]])
    assert np.array_equal(z.dense(p, zeta), [[1, 0], [0, 4]])
    # scalars act as the central character
    for alpha in range(2):
        u = rep.operator(alpha, (0, 0))
        assert u.is_scalar() == alpha


def test_representation_homomorphism_exhaustive():
    # U(g) U(h) = zeta^f(g,h) U(g+h) over whole extensions, delta=(4)
    for delta in [(2,), (3,), (4,), (2, 2)]:
        rep = schrodinger(delta)
        ext = rep.extension
        g = ext.group
        ops = [rep.operator(0, g.coords(i)) for i in range(g.order)]
        for i in range(g.order):
            for j in range(g.order):
                prod = ops[i] @ ops[j]
                expect = ops[g.add_table[i, j]].scaled(int(ext.table[i, j]))
                assert prod == expect


def test_projective_commutation_relation():
    # rho(x) rho(y) = zeta^e(x,y) rho(y) rho(x)
    for delta in [(2,), (3,), (2, 2)]:
        rep = schrodinger(delta)
        g = rep.extension.group
        e = commutator_pairing(rep.extension)
        rho = projective_rep(rep)
        for i in range(g.order):
            for j in range(g.order):
                a = rho(g.coords(i)) @ rho(g.coords(j))
                b = rho(g.coords(j)) @ rho(g.coords(i))
                assert a == b.scaled(int(e.table[i, j]))


def test_irreducibility():
    assert is_irreducible(schrodinger((2,)))
    assert is_irreducible(schrodinger((2,)), prime=5)
    assert is_irreducible(schrodinger((3,)))
    assert is_irreducible(schrodinger((2, 2)))
    assert is_irreducible(schrodinger((4,)))


def test_irreducibility_prime_independent():
    rep = schrodinger((3,))
    p1 = smallest_prime_1mod(3)
    p2 = smallest_prime_1mod(3, floor=p1 + 1)
    assert p1 != p2
    assert is_irreducible(rep, prime=p1) and is_irreducible(rep, prime=p2)


def test_span_rank_scalars_only():
    rep = schrodinger((2,))
    ops = [rep.operator(a, (0, 0)) for a in range(2)]
    assert span_rank(ops, 5, 2) == 1
    # None entries are zero matrices and contribute nothing
    assert span_rank([None, ops[0]], 5, 2) == 1
    assert span_rank([None, None], 5, 2) == 0


def test_faithful_projective():
    rep = schrodinger((2, 2))
    assert is_faithful_projective(rep)
    # overriding one non-identity operator with a scalar breaks faithfulness
    g = rep.extension.group
    ops = [rep.projective_operator(g.coords(i)) for i in range(g.order)]
    ops[3] = MonomialMatrix.identity(rep.dimension, rep.modulus)
    assert not is_faithful_projective(rep, operators=ops)


def test_matrix_coefficient_check():
    assert matrix_coefficient_check(schrodinger((2,)))
    assert matrix_coefficient_check(schrodinger((3,)))
    rep = schrodinger((2,))
    g = rep.extension.group
    ops = [rep.operator(0, g.coords(i)) for i in range(g.order)]
    full = coefficient_matrix(rep, operators=ops)
    assert full.shape == (4, 4)
    # zeroing an operator (None) collapses the rank below r^2
    assert not matrix_coefficient_check(rep, operators=[ops[0], None, ops[2], None])


def test_coefficient_matrix_columns_are_operator_entries():
    rep = schrodinger((2,))
    g = rep.extension.group
    p = smallest_prime_1mod(2)
    zeta = primitive_root_of_unity(p, 2)
    mat = coefficient_matrix(rep, prime=p)
    for i in range(g.order):
        dense = rep.operator(0, g.coords(i)).dense(p, zeta)
        assert np.array_equal(mat[:, i], dense.T.reshape(-1))


def test_function_module_weights():
    # the two-sided module has weight -1 on the left and +1 on the right
    rep = schrodinger((4,))
    mod = FunctionModule(rep.extension)
    t = ThetaElement(1, rep.extension.group.zero)
    left = mod.left_operator(t)
    right = mod.right_operator(t)
    assert left.is_scalar() == 3  # zeta^{-1}
    assert right.is_scalar() == 1


def test_function_module_is_biaction():
    # commuting left/right actions: act(g1, 0) act(0, g2) = act(g1, g2)
    ext = heisenberg((2,))
    mod = FunctionModule(ext)
    g = ext.group
    elems = [ThetaElement(s, g.element_by_index(i)) for s in range(2) for i in range(4)]
    for t1 in elems:
        for t2 in elems:
            assert mod.left_operator(t1) @ mod.right_operator(t2) == mod.act(t1, t2)
            assert mod.right_operator(t2) @ mod.left_operator(t1) == mod.act(t1, t2)


def test_function_module_left_is_homomorphism():
    ext = heisenberg((2,))
    lifted = ext.push_scalars(2)
    mod = FunctionModule(ext)
    g = ext.group
    elems = [ext.element(s, g.coords(i)) for s in range(2) for i in range(4)]
    for a in elems:
        for b in elems:
            ab = ext.multiply(a, b)
            assert mod.left_operator(a) @ mod.left_operator(b) == mod.left_operator(ab)
            assert mod.right_operator(a) @ mod.right_operator(b) == mod.right_operator(ab)


def test_invariants_dimension_lagrangian():
    # rank r^2 / |H|: Lagrangians give r, the trivial subgroup gives r^2
    for delta in [(2,), (3,), (2, 2)]:
        ext = heisenberg(delta)
        mod = FunctionModule(ext)
        r = int(np.prod(delta))
        for level in lagrangian_subgroups(ext):
            assert invariants_dimension(mod, level) == r
        triv = SubgroupData(ext.group, [])
        level0 = LevelSubgroup(ext, triv, (0,), ext.modulus)
        assert invariants_dimension(mod, level0) == r * r


def test_invariants_dimension_intermediate():
    # |H| = 2 inside delta=(4): dimension 16/2 = 8
    ext = heisenberg((4,))
    mod = FunctionModule(ext)
    h = SubgroupData(ext.group, [(2, 0)])
    level = LevelSubgroup(ext, h, (0, 0), 4)
    assert invariants_dimension(mod, level) == 8


def test_invariants_rejects_foreign_level():
    ext = heisenberg((2,))
    other = heisenberg((3,))
    mod = FunctionModule(ext)
    level = lagrangian_subgroups(other)[0]
    with pytest.raises(InvalidArgumentError):
        invariants_dimension(mod, level)


def test_schrodinger_rejects_bad_delta():
    with pytest.raises(InvalidArgumentError):
        schrodinger((1,))
    with pytest.raises(InvalidArgumentError):
        schrodinger((2, 4))


def test_operator_accepts_theta_element():
    rep = schrodinger((3,))
    ext = rep.extension
    t = ext.element(2, (1, 2))
    assert rep.operator(t) == rep.operator(2, (1, 2))
