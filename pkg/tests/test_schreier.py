"""Schreier coset automata and quotient growth.
Oracle: brute-force coset classification of ball elements via
closure-based membership."""

import math

import pytest

from growthlab import MarkedGroup, ball_elements, schreier_growth, stallings_fold
from growthlab.errors import BudgetExceeded
from growthlab.schreier import SchreierAutomaton

from oracles import closure_membership, free_reduce


def fold(f2, words):
    return stallings_fold(f2, [f2.parse(w) for w in words])


def oracle_coset_counts(gens, radius):
    """|{Hu : |u| <= r}| by classifying ball elements with the closure oracle."""
    members = closure_membership(2, gens, 2 * radius + 2, pad=6)

    def same_coset(u, v):
        return free_reduce(u + "".join(ch.swapcase() for ch in reversed(v))) in members or \
            free_reduce(u + "".join(ch.swapcase() for ch in reversed(v))) == ""

    from oracles import free_ball
    _, elements = free_ball(2, radius)
    by_len = sorted(elements, key=len)
    reps = []
    counts = []
    for r in range(radius + 1):
        for u in [w for w in by_len if len(w) == r]:
            if not any(same_coset(u, v) for v in reps):
                reps.append(u)
        counts.append(len(reps))
    return counts


def test_cyclic_subgroup_radius_one(f2):
    aut = SchreierAutomaton(fold(f2, ["a"]))
    assert aut.counts(1) == [1, 3]  # {H, Hb, HB}


def test_counts_match_coset_oracle(f2):
    for gens in (["a"], ["a", "baB"], ["aa", "bb"]):
        aut = SchreierAutomaton(fold(f2, gens))
        assert aut.counts(5) == oracle_coset_counts(gens, 5)


def test_finite_index_single_coset(f2):
    sg = schreier_growth(fold(f2, ["a", "b"]), 8)
    assert sg.right_counts.cumulative == (1,) * 9
    assert sg.right.rate == 0.0


def test_quotient_rate_cyclic(f2):
    sg = schreier_growth(fold(f2, ["a"]), 14)
    assert abs(sg.right.rate - math.log(3)) <= 0.05
    assert sg.left_counts.cumulative == sg.right_counts.cumulative


def test_quotient_rate_rank_two_subgroup(f2):
    sg = schreier_growth(fold(f2, ["a", "baB"]), 14)
    assert abs(sg.right.rate - math.log(3)) <= 0.05


def test_left_equals_right_every_radius(f2):
    for gens in (["a"], ["a", "baB"], ["aa", "b"]):
        sg = schreier_growth(fold(f2, gens), 9)
        assert sg.left_counts.sphere_sizes == sg.right_counts.sphere_sizes


def test_coset_distance_examples(f2):
    aut = SchreierAutomaton(fold(f2, ["a"]))
    for text, expected in [("1", 0), ("a", 0), ("b", 1), ("ba", 2), ("ab", 1), ("bb", 2)]:
        assert aut.coset_distance(f2.parse(text)) == expected


def test_coset_distance_is_orbit_distance(f2):
    # d(w, H o) = min |h^-1 w| over h in H, brute-forced over the closure
    gens = ["a", "baB"]
    aut = SchreierAutomaton(fold(f2, gens))
    members = closure_membership(2, gens, 10, pad=4)
    for w in ball_elements(f2, 4):
        brute = min(len(free_reduce("".join(ch.swapcase() for ch in reversed(h)) + str(w).replace("1", "")))
                    for h in members)
        assert aut.coset_distance(w) == brute


def test_state_cap(f2):
    with pytest.raises(BudgetExceeded):
        SchreierAutomaton(fold(f2, ["a"]), max_states=50).complete_to(8)
