"""Alternating forms, symplectic reduction to elementary divisors."""
from __future__ import annotations

from itertools import product

import numpy as np
import pytest

from thetacube.errors import DegenerateFormError, InvalidArgumentError
from thetacube.fingroup import group_new
from thetacube.pairing import (AlternatingForm, BilinearForm, ElementaryDivisorVector,
                               elementary_divisors, enumerate_alternating_forms,
                               form_eval, is_nondegenerate, radical, standard_form)


def test_bilinear_form_eval_and_table():
    g = group_new((2, 2))
    form = BilinearForm(g, 2, [[0, 1], [0, 0]])
    x, y = g.element((1, 0)), g.element((0, 1))
    assert form_eval(form, x, y) == 1
    assert form_eval(form, y, x) == 0
    for a, b in product(g, repeat=2):
        assert form.table[a.index, b.index] == form_eval(form, a, b)


def test_alternating_validation():
    g = group_new((3, 3))
    AlternatingForm(g, 3, [[0, 1], [-1, 0]])
    with pytest.raises(InvalidArgumentError):
        AlternatingForm(g, 3, [[1, 0], [0, 0]])  # nonzero diagonal
    with pytest.raises(InvalidArgumentError):
        AlternatingForm(g, 3, [[0, 1], [1, 0]])  # not skew


def test_bilinearity_exhaustive():
    g = group_new((2, 4))
    form = BilinearForm(g, 4, [[2, 2], [2, 1]])
    for x, y, z in product(g, repeat=3):
        assert (form_eval(form, x + y, z)
                - form_eval(form, x, z) - form_eval(form, y, z)) % 4 == 0
        assert (form_eval(form, x, y + z)
                - form_eval(form, x, y) - form_eval(form, x, z)) % 4 == 0


def test_standard_form_delta2():
    delta = ElementaryDivisorVector((2,))
    form = standard_form(delta, 2)
    g = form.group
    assert g.moduli == (2, 2)
    assert form_eval(form, g.element((1, 0)), g.element((0, 1))) == 1
    assert form_eval(form, g.element((0, 1)), g.element((1, 0))) == 1  # -1 mod 2


def test_standard_form_block_structure():
    delta = ElementaryDivisorVector((4, 2))
    form = standard_form(delta, 4)
    b = np.array(form.matrix)
    assert b.shape == (4, 4)
    assert b[0, 2] == 1 and b[1, 3] == 2  # M/d_i
    assert b[2, 0] == 3 and b[3, 1] == 2  # negatives mod 4
    assert is_nondegenerate(form)


def test_radical_and_nondegeneracy():
    g = group_new((2, 2))
    zero = AlternatingForm(g, 2, [[0, 0], [0, 0]])
    assert radical(zero).order == 4
    assert not is_nondegenerate(zero)
    full = AlternatingForm(g, 2, [[0, 1], [1, 0]])
    assert radical(full).order == 1
    assert is_nondegenerate(full)
    # a degenerate form on a larger group has the right radical
    g4 = group_new((2, 2, 2, 2))
    b = np.zeros((4, 4), dtype=int)
    b[0, 1] = b[1, 0] = 1
    part = AlternatingForm(g4, 2, b)
    assert radical(part).order == 4


def test_elementary_divisors_z6_square():
    g = group_new((6, 6))
    form = AlternatingForm(g, 6, [[0, 1], [-1, 0]])
    delta, basis = elementary_divisors(form)
    assert tuple(delta) == (6,)
    assert delta.r == 6


def test_elementary_divisors_rejects_degenerate():
    g = group_new((2, 2))
    with pytest.raises(DegenerateFormError):
        elementary_divisors(AlternatingForm(g, 2, [[0, 0], [0, 0]]))


def test_elementary_divisors_transport_reproduces_standard():
    # transporting the form along the symplectic basis yields the standard form
    cases = [
        ((2, 2), 2, [[0, 1], [1, 0]]),
        ((4, 4), 4, [[0, 1], [-1, 0]]),
        ((4, 4), 4, [[0, 3], [-3, 0]]),
        ((2, 2, 2, 2), 2, [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]),
        ((2, 2, 2, 2), 2, [[0, 1, 1, 0], [1, 0, 0, 1], [1, 0, 0, 1], [0, 1, 1, 0]]),
        ((6, 6), 6, [[0, 5], [1, 0]]),
        ((2, 4), 4, [[0, 2], [-2, 0]]),
    ]
    for moduli, modulus, matrix in cases:
        g = group_new(moduli)
        form = AlternatingForm(g, modulus, matrix)
        if not is_nondegenerate(form):
            continue
        delta, basis = elementary_divisors(form)
        std = standard_form(delta, modulus)
        dom = std.group
        assert dom.order == g.order
        for x, y in product(dom, repeat=2):
            assert form_eval(form, basis(x), basis(y)) == form_eval(std, x, y)


def test_elementary_divisors_mixed_group():
    # Z/2 x Z/4 with a perfect pairing of elementary divisor (4) does not exist;
    # the nondegenerate case needs matching halves, so check (Z/4)^2 -> (4,)
    g = group_new((4, 4))
    form = AlternatingForm(g, 4, [[0, 1], [-1, 0]])
    delta, basis = elementary_divisors(form)
    assert tuple(delta) == (4,)
    # basis images generate the whole group
    seen = set()
    for a in range(4):
        for b in range(4):
            seen.add((a * basis.images[0] + b * basis.images[1]).index)
    assert len(seen) == 16


def test_symplectic_basis_index_maps():
    g = group_new((3, 3))
    form = AlternatingForm(g, 3, [[0, 1], [-1, 0]])
    delta, basis = elementary_divisors(form)
    idx = basis.index_map
    inv = basis.inverse_index_map
    assert sorted(idx.tolist()) == list(range(9))
    assert all(inv[idx[i]] == i for i in range(9))


def test_enumerate_alternating_forms_counts():
    g = group_new((2, 2))
    allf = enumerate_alternating_forms(g, 2)
    assert len(allf) == 2  # b in {0,1}
    nd = enumerate_alternating_forms(g, 2, nondegenerate_only=True)
    assert len(nd) == 1
    g3 = group_new((3, 3))
    assert len(enumerate_alternating_forms(g3, 3)) == 3
    assert len(enumerate_alternating_forms(g3, 3, nondegenerate_only=True)) == 2
    g4 = group_new((2, 2, 2, 2))
    forms4 = enumerate_alternating_forms(g4, 2)
    assert len(forms4) == 2 ** 6  # six free entries above the diagonal
    nd4 = enumerate_alternating_forms(g4, 2, nondegenerate_only=True)
    # alternating nondegenerate forms on F_2^4: 2^6 minus degenerate ones = 28
    brute = 0
    for bits in product(range(2), repeat=6):
        b = np.zeros((4, 4), dtype=int)
        b[np.triu_indices(4, 1)] = bits
        b = (b - b.T) % 2
        if is_nondegenerate(AlternatingForm(g4, 2, b)):
            brute += 1
    assert len(nd4) == brute == 28


def test_elementary_divisor_vector_validation():
    with pytest.raises(InvalidArgumentError):
        ElementaryDivisorVector((1,))
    with pytest.raises(InvalidArgumentError):
        ElementaryDivisorVector((2, 4))  # divisibility must decrease
    d = ElementaryDivisorVector((4, 2))
    assert d.r == 8
    assert d.domain().moduli == (4, 2, 4, 2)
