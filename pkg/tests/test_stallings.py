"""Stallings core graphs: folding, membership, index, relative growth.
Oracles: fold-by-hand graphs, closure-based membership, brute-force
membership filters, numpy spectral radii."""

import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from growthlab import MarkedGroup, ball_elements, relative_growth, stallings_fold
from growthlab.errors import NotFreeGroup, PowerIterationDiverged
from growthlab.stallings import power_iteration

from oracles import closure_membership, free_reduce, spectral_radius


def fold(f2, words):
    return stallings_fold(f2, [f2.parse(w) for w in words])


# -- folding -----------------------------------------------------------------

def test_fold_single_loop(f2):
    core = fold(f2, ["a"])
    assert core.canonical_form() == (1, ((0, 0, 0),))


def test_fold_by_hand_two_vertex(f2):
    # <a, bab^-1>: a-loop at base, b-edge to v1, a-loop at v1
    core = fold(f2, ["a", "baB"])
    assert core.canonical_form() == (2, ((0, 0, 0), (0, 1, 1), (1, 0, 1)))


def test_fold_index_two_subgroup(f2):
    core = fold(f2, ["aa", "b", "abA"])
    assert core.index() == 2
    # membership oracle on the ball: the even-a-count criterion is implicit;
    # compare against padded closure membership
    members = closure_membership(2, ["aa", "b", "abA"], 4)
    for w in ball_elements(f2, 4):
        assert core.contains(w) == ((free_reduce(str(w)) if not w.is_identity else "") in members)


def test_not_free_group(z23):
    with pytest.raises(NotFreeGroup):
        stallings_fold(z23, [z23.parse("x")])


def test_fold_order_independence(f2):
    gens = ["a", "baB", "bbabb", "aBa"]
    reference = fold(f2, gens).canonical_form()
    rng = random.Random(7)
    for _ in range(12):
        shuffled = gens[:]
        rng.shuffle(shuffled)
        assert fold(f2, shuffled).canonical_form() == reference
    # idempotent under repetition and inverses
    assert fold(f2, gens + gens).canonical_form() == reference
    assert fold(f2, [g.upper()[::-1].swapcase().swapcase() for g in gens] + gens).canonical_form() == reference


@given(st.lists(st.lists(st.sampled_from("abAB"), min_size=1, max_size=5).map("".join),
                min_size=1, max_size=3))
@settings(max_examples=25, deadline=None)
def test_fold_membership_against_closure(gens):
    f2 = MarkedGroup.free(2)
    core = stallings_fold(f2, [f2.parse(g) for g in gens])
    members = closure_membership(2, gens, 3, pad=6)
    for w in ball_elements(f2, 3):
        key = free_reduce(str(w)) if not w.is_identity else ""
        assert core.contains(w) == (key in members)


# -- contains / index ----------------------------------------------------------

def test_contains_examples(f2):
    core = fold(f2, ["a", "baB"])
    assert core.contains(f2.identity())
    assert not core.contains(f2.parse("b"))
    assert core.contains(f2.parse("baBa"))


def test_index_examples(f2):
    assert fold(f2, ["a", "b"]).index() == 1
    assert fold(f2, ["a"]).index() == math.inf


# -- relative growth -------------------------------------------------------------

def test_cyclic_subgroup_counts(f2):
    rg = relative_growth(fold(f2, ["a"]), 8)
    assert rg.counts.sphere_sizes == (1, 2, 2, 2, 2, 2, 2, 2, 2)
    assert rg.rate == pytest.approx(0.0, abs=1e-12)


def test_counts_match_membership_filter(f2):
    core = fold(f2, ["a", "baB"])
    rg = relative_growth(core, 10)
    brute = [0] * 11
    for w in ball_elements(f2, 10):
        if core.contains(w):
            brute[w.length] += 1
    assert rg.counts.sphere_sizes == tuple(brute)


def test_rose_rate_is_log3(f2):
    rg = relative_growth(fold(f2, ["a", "b"]), 10)
    assert abs(rg.spectral.rate - math.log(3)) < 1e-9


def test_spectral_matches_numpy_eigenvalues(f2):
    core = fold(f2, ["a", "baB"])
    rg = relative_growth(core, 10)
    rho = spectral_radius(core.transfer_matrix())
    assert abs(rg.spectral.rate - math.log(rho)) < 1e-8


def test_enumeration_matches_counts(f2):
    core = fold(f2, ["a", "baB"])
    rg = relative_growth(core, 7)
    elements = list(core.elements_in_ball(7))
    assert len(elements) == len(set(elements))
    by_len = [0] * 8
    for w in elements:
        by_len[w.length] += 1
        assert core.contains(w)
    assert tuple(by_len) == rg.counts.sphere_sizes


def test_power_iteration_periodic_matrix_raises():
    # eigenvalues +-sqrt(2): the Rayleigh quotient oscillates forever
    T = np.array([[0.0, 2.0], [1.0, 0.0]])
    with pytest.raises(PowerIterationDiverged):
        power_iteration(T, max_iter=2000)


def test_power_iteration_identity():
    rho, _ = power_iteration(np.eye(4))
    assert rho == pytest.approx(1.0, abs=1e-12)
