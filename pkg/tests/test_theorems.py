"""Theorem pipelines: growth gap, quotient growth, amalgam injectivity,
free subgroups, coarse quotients.  Includes report determinism."""

import json
import math

import pytest

from growthlab import MarkedGroup, stallings_fold
from growthlab.closure import find_selector_power, geometric_separation_power, find_transversal_conjugate
from growthlab.errors import CounterexampleFound, HypothesisFailed, PreconditionFailed
from growthlab.orbits import FiniteSubgroup, FreeSubgroup
from growthlab.reports import render_json
from growthlab.theorems import (ExperimentConfig, amalgam_injectivity,
                                coarse_quotient_check, free_subgroup_witness,
                                verify_growth_gap, verify_quotient_growth)


def fold(group, words):
    return stallings_fold(group, [group.parse(w) for w in words])


# -- growth gap -----------------------------------------------------------------

def test_gap_cyclic_subgroup():
    cfg = ExperimentConfig(group="free:2", subgroup=("a",), g0="ab")
    rep = verify_growth_gap(cfg)
    assert rep.verdict == "PASS"
    assert rep.omega_h == pytest.approx(0.0, abs=1e-9)
    assert rep.omega_g == pytest.approx(math.log(3), abs=1e-3)
    assert all(rep.hypotheses.values())


def test_gap_rank_two_subgroup():
    cfg = ExperimentConfig(group="free:2", subgroup=("a", "baB"), g0="ab")
    rep = verify_growth_gap(cfg)
    assert rep.verdict == "PASS"
    # omega_H = log 2 for this subgroup (spectral radius 2 transfer matrix)
    assert rep.omega_h == pytest.approx(math.log(2), abs=1e-6)
    assert rep.omega_h < rep.omega_g - 0.1


def test_gap_finite_index_inapplicable():
    cfg = ExperimentConfig(group="free:2", subgroup=("a", "b"), g0="ab")
    with pytest.raises(HypothesisFailed) as exc:
        verify_growth_gap(cfg)
    assert exc.value.hypothesis == "infinite_index"
    assert exc.value.report.verdict == "INAPPLICABLE"
    rep = verify_growth_gap(cfg, raise_on_hypothesis=False)
    assert rep.verdict == "INAPPLICABLE"
    assert not rep.hypotheses["infinite_index"]


def test_gap_pass_requires_all_hypotheses():
    cfg = ExperimentConfig(group="free:2", subgroup=("a",), g0="ab")
    rep = verify_growth_gap(cfg)
    assert rep.verdict == "PASS"
    assert all(rep.hypotheses.values())


# -- quotient growth ---------------------------------------------------------------

def test_quotient_cyclic_subgroup():
    cfg = ExperimentConfig(group="free:2", subgroup=("a",), r_schreier=14)
    rep = verify_quotient_growth(cfg)
    assert rep.verdict == "PASS"
    assert abs(rep.omega_quotient - math.log(3)) <= 0.05
    assert rep.details["left_equals_right"]


def test_quotient_rank_two():
    cfg = ExperimentConfig(group="free:2", subgroup=("a", "baB"), r_schreier=14)
    rep = verify_quotient_growth(cfg)
    assert rep.verdict == "PASS"


def test_quotient_finite_index_note():
    cfg = ExperimentConfig(group="free:2", subgroup=("a", "b"))
    rep = verify_quotient_growth(cfg, raise_on_hypothesis=False)
    assert rep.verdict == "INAPPLICABLE"
    assert rep.omega_quotient == 0.0
    assert "0 <= omega_G" in rep.details["note"]


# -- amalgams -----------------------------------------------------------------------

def test_amalgam_free_case(f2):
    sub = FreeSubgroup(fold(f2, ["a"]))
    rep = amalgam_injectivity(sub, f2.parse("b"), M=1, n_syllables=6, letter_cap=4)
    assert rep.verdict == "PASS"
    assert rep.duplicates == 0
    assert rep.h_cap_e == ("1",)


def test_amalgam_small_power_refuted(f2):
    # M = 1 genuinely fails for H = <a, bab^-1>:
    # (b a^-1 b^-1) . b . a . b^-1 = 1
    sub = FreeSubgroup(fold(f2, ["a", "baB"]))
    w = f2.parse("bAB") * f2.parse("b") * f2.parse("a") * f2.parse("B")
    assert w.is_identity
    with pytest.raises(CounterexampleFound):
        amalgam_injectivity(sub, f2.parse("b"), M=1, n_syllables=4, letter_cap=4)


def test_amalgam_with_searched_power(f2):
    sub = FreeSubgroup(fold(f2, ["a", "baB"]))
    m = geometric_separation_power(sub, f2.parse("b"), epsilon=1, theta=2)["M"]
    rep = amalgam_injectivity(sub, f2.parse("b"), M=m, n_syllables=4, letter_cap=4)
    assert rep.verdict == "PASS"


def test_amalgam_free_product_with_torsion(z23):
    # H = <x> finite; g a transversal conjugate of the constricting xy
    sub = FiniteSubgroup(z23, [z23.parse("x")])
    g0 = z23.parse("xy")
    rec = find_transversal_conjugate(sub, g0, 3, theta=1, orbit_radius=3)
    g = g0.conjugated_by(rec.k)
    rep = amalgam_injectivity(sub, g, M=2, n_syllables=4, letter_cap=6)
    assert rep.verdict == "PASS"


# -- free subgroup witnesses -----------------------------------------------------------

def test_free_witness_basis(f2):
    assert free_subgroup_witness(f2.parse("a"), f2.parse("b"), 1, 6)["verdict"] == "PASS"


def test_free_witness_ab_ba(f2):
    assert free_subgroup_witness(f2.parse("ab"), f2.parse("ba"), 2, 5)["verdict"] == "PASS"


def test_free_witness_z23(z23):
    rep = free_subgroup_witness(z23.parse("xy"), z23.parse("yx"), 2, 5)
    assert rep["verdict"] == "PASS"


def test_free_witness_same_axis_rejected(f2):
    with pytest.raises(PreconditionFailed):
        free_subgroup_witness(f2.parse("ab"), f2.parse("abab"), 1, 4)


# -- coarse quotient ----------------------------------------------------------------------

def test_coarse_quotient_cyclic(f2):
    sub = FreeSubgroup(fold(f2, ["a"]))
    m, sel = find_selector_power(f2.parse("b"), epsilon=0, theta=1,
                                 y=f2.identity(), sample_radius=5)
    rep = coarse_quotient_check(sub, f2.parse("b"), sel, 5)
    assert rep.verdict == "PASS"
    assert rep.theta_cq1 == 0  # same phi-coset forces equal basepoint image
    assert rep.theta_cq2 == m  # |f(u)| = |g^M|
    assert all(ok for (_, _, _, ok) in rep.counting)


def test_coarse_quotient_trivial_pair(f2):
    sub = FreeSubgroup(fold(f2, ["a"]))
    _, sel = find_selector_power(f2.parse("b"), epsilon=0, theta=1,
                                 y=f2.identity(), sample_radius=4)
    rep = coarse_quotient_check(sub, f2.parse("b"), sel, 4, counting_radii=(3, 4))
    # u = v is in the same class with distance 0; theta_cq1 stays 0
    assert rep.theta_cq1 == 0


# -- report determinism ---------------------------------------------------------------------

def test_reports_are_deterministic():
    cfg = ExperimentConfig(group="free:2", subgroup=("a",), g0="ab")
    a = verify_growth_gap(cfg).to_dict()
    b = verify_growth_gap(cfg).to_dict()
    ja = json.loads(render_json(a))
    jb = json.loads(render_json(b))
    ja.pop("timestamp"), jb.pop("timestamp")
    assert json.dumps(ja, sort_keys=True) == json.dumps(jb, sort_keys=True)


def test_coarse_quotient_theta_cap_violation(f2):
    from growthlab.errors import CQViolation
    sub = FreeSubgroup(fold(f2, ["a"]))
    _, sel = find_selector_power(f2.parse("b"), epsilon=0, theta=1,
                                 y=f2.identity(), sample_radius=4)
    with pytest.raises(CQViolation):
        coarse_quotient_check(sub, f2.parse("b"), sel, 4, counting_radii=(3,),
                              theta_cap=0)
