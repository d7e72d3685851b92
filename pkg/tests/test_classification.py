"""Pair enumeration and the pipeline from pairs to bundles to Brauer classes."""
from __future__ import annotations

from itertools import product

import numpy as np
import pytest

from thetacube.brauer import AbelianVarietyData, principal_ns
from thetacube.classification import (BundleDescriptor, SymplecticPair,
                                      brauer_classes, bundle_to_brauer,
                                      enumerate_pairs, pair_to_bundle,
                                      pair_to_cubic)
from thetacube.cubic import is_nondegenerate_couple
from thetacube.errors import InvalidArgumentError, UnsupportedError
from thetacube.fingroup import group_new, subgroups_of_order
from thetacube.pairing import AlternatingForm, is_nondegenerate
from thetacube.schrodinger import is_faithful_projective, is_irreducible
from thetacube.thetagroup import commutator_pairing


def brute_pair_count(g: int, r: int) -> int:
    # independent oracle: order-r^2 subgroups paired with raw alternating
    # matrices mod r that are nondegenerate on the subgroup presentation
    ambient = group_new((r,) * (2 * g))
    total = 0
    for sub in subgroups_of_order(ambient, r * r):
        from thetacube.fingroup import subgroup_presentation
        pres = subgroup_presentation(sub)
        k = pres.group.rank
        seen = set()
        for entries in product(range(r), repeat=k * (k - 1) // 2):
            b = np.zeros((k, k), dtype=int)
            pos = 0
            for i in range(k):
                for j in range(i + 1, k):
                    b[i, j] = entries[pos]
                    b[j, i] = (-entries[pos]) % r
                    pos += 1
            try:
                form = AlternatingForm(pres.group, r, b)
            except InvalidArgumentError:
                continue
            if is_nondegenerate(form):
                seen.add(tuple(map(tuple, form.matrix)))
        total += len(seen)
    return total


def test_enumerate_pairs_counts():
    assert len(enumerate_pairs(1, 2)) == 1
    assert len(enumerate_pairs(1, 3)) == 2
    assert len(enumerate_pairs(2, 2)) == 35


def test_enumerate_pairs_matches_brute_force():
    for g, r in [(1, 2), (1, 3), (1, 4), (2, 2)]:
        assert len(enumerate_pairs(g, r)) == brute_pair_count(g, r)


def test_enumerate_pairs_deterministic():
    a = enumerate_pairs(2, 2)
    b = enumerate_pairs(2, 2)
    assert len(a) == len(b)
    for p, q in zip(a, b):
        assert p.subgroup == q.subgroup
        assert np.array_equal(p.form.matrix, q.form.matrix)


def test_enumerate_pairs_validation():
    with pytest.raises(InvalidArgumentError):
        enumerate_pairs(0, 2)
    with pytest.raises(InvalidArgumentError):
        enumerate_pairs(1, 1)


def test_pair_to_bundle_invariants():
    for g, r in [(1, 2), (1, 3), (2, 2)]:
        for pair in enumerate_pairs(g, r):
            d = pair_to_bundle(pair)
            assert d.level ** 2 == pair.subgroup.order
            # transported commutator equals the abstract form on the nose
            e = commutator_pairing(d.theta)
            assert np.array_equal(e.table, pair.form.table)
            assert is_irreducible(d.rep)
            assert is_faithful_projective(d.rep)


def test_pair_to_bundle_delta4():
    # one g=1, r=4 pair reduces to delta=(4); another to (2,2) cannot occur
    # at g=1 since K is (Z/4)^2 only when the subgroup is the full 4-torsion
    pairs = enumerate_pairs(1, 4)
    deltas = set()
    for pair in pairs:
        d = pair_to_bundle(pair)
        deltas.add(tuple(d.delta))
        e = commutator_pairing(d.theta)
        assert np.array_equal(e.table, pair.form.table)
    assert (4,) in deltas


def test_pair_to_cubic_nondegenerate():
    for pair in enumerate_pairs(1, 2) + enumerate_pairs(1, 3):
        couple = pair_to_cubic(pair)
        assert is_nondegenerate_couple(couple)


def test_bundle_to_brauer_g1():
    av = AbelianVarietyData(1, 2, [principal_ns(1)])
    d = pair_to_bundle(enumerate_pairs(1, 2)[0])
    # quotient is trivial at g=1 with principal NS, so the class is empty
    assert bundle_to_brauer(d, av) == ()
    assert brauer_classes(d, av) == [()]


def test_bundle_to_brauer_rejects_composite_level():
    av = AbelianVarietyData(1, 4, [principal_ns(1)])
    pair = next(p for p in enumerate_pairs(1, 4)
                if tuple(pair_to_bundle(p).delta) == (4,))
    d = pair_to_bundle(pair)
    with pytest.raises(UnsupportedError):
        bundle_to_brauer(d, av)


def test_bundle_to_brauer_rejects_mismatched_av():
    av = AbelianVarietyData(2, 3, [principal_ns(2)])
    d = pair_to_bundle(enumerate_pairs(1, 3)[0])
    with pytest.raises(InvalidArgumentError):
        bundle_to_brauer(d, av)


def test_brauer_classes_all_extensions_share_restriction():
    # every reported class comes from an extension restricting to e; the
    # class of the canonical extension is among them
    av = AbelianVarietyData(2, 2, [principal_ns(2)])
    pairs = enumerate_pairs(2, 2)
    d = pair_to_bundle(pairs[0])
    classes = brauer_classes(d, av)
    assert bundle_to_brauer(d, av) in classes
    assert len(set(classes)) == len(classes)  # sorted, deduplicated


def test_explicit_extension_must_restrict_to_e():
    av = AbelianVarietyData(2, 2, [principal_ns(2)])
    d = pair_to_bundle(enumerate_pairs(2, 2)[0])
    wrong = np.zeros((4, 4), dtype=int)
    with pytest.raises(InvalidArgumentError):
        bundle_to_brauer(d, av, extension=wrong)


def test_pair_to_bundle_accepts_subgroup_and_form():
    pair = enumerate_pairs(1, 2)[0]
    d1 = pair_to_bundle(pair)
    d2 = pair_to_bundle(pair.subgroup, pair.form)
    assert np.array_equal(d1.theta.table, d2.theta.table)


def test_bundle_descriptor_json_shape():
    d = pair_to_bundle(enumerate_pairs(1, 3)[0])
    doc = d.to_json()
    assert set(doc) == {"K", "e", "delta"}
    assert doc["delta"] == [3]
    assert doc["e"]["modulus"] == 3
    assert all(len(gen) == 2 for gen in doc["K"]["generators"])


def test_symplectic_pair_iter():
    pair = enumerate_pairs(1, 2)[0]
    sub, form = pair
    assert sub is pair.subgroup and form is pair.form
