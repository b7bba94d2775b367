"""Monotonicity classification, the valuation axioms, and transforms."""

import math

import numpy as np
import pytest

from posetval import (
    CONSTANT,
    ISOTONE_NOT_STRICT,
    NONE,
    STRICTLY_ANTITONE,
    STRICTLY_ISOTONE,
    NonMonotone,
    NonPositiveValue,
    PreconditionUnmet,
    WeightFunction,
    WeightPosetMismatch,
    ZeroScale,
    affine_transform,
    build_poset,
    cardinal_filter_valuation,
    cardinal_ideal_valuation,
    check_valuation,
    check_valuation_leclerc,
    check_valuation_monjardet,
    cumulative_lower,
    cumulative_upper,
    kappa_valuation,
    log_affine_transform,
    log_transform,
    make_valuation,
    named_poset,
    parse_weights_text,
)

import suites


@pytest.fixture
def p1():
    return named_poset("P1")


@pytest.fixture
def m2():
    return named_poset("M2")


@pytest.fixture
def chain3():
    return build_poset({("0", "m"), ("m", "1")})


# -- monotonicity ---------------------------------------------------------------


def test_cardinal_ideal_is_strictly_isotone(p1):
    assert cardinal_ideal_valuation(p1).monotonicity == STRICTLY_ISOTONE


def test_cardinal_filter_is_strictly_antitone(p1):
    assert cardinal_filter_valuation(p1).monotonicity == STRICTLY_ANTITONE


def test_constant_tag(p1):
    v = make_valuation(p1, {x: 5.0 for x in p1.elements})
    assert v.monotonicity == CONSTANT
    assert v.isotone_direction  # constants take the isotone branch


def test_non_monotone_tag(m2):
    v = make_valuation(m2, {"0": 1.0, "p": 0.0, "q": 2.0, "1": 1.0})
    assert v.monotonicity == NONE
    with pytest.raises(NonMonotone):
        check_valuation(v)


def test_not_strict_tag(chain3):
    v = make_valuation(chain3, {"0": 1.0, "m": 1.0, "1": 2.0})
    assert v.monotonicity == ISOTONE_NOT_STRICT


def test_antichain_is_constant():
    p = build_poset(set(), elements=["x", "y"])
    v = make_valuation(p, {"x": 1.0, "y": 7.0})
    assert v.monotonicity == CONSTANT


def test_valuation_requires_totality(m2):
    with pytest.raises(WeightPosetMismatch):
        make_valuation(m2, {"0": 1.0, "p": 2.0})


# -- extremal bounds ---------------------------------------------------------------


def test_f_minus_f_plus_on_p1(p1):
    v = cardinal_ideal_valuation(p1)
    assert v.f_minus("d", "e") == 2.0
    assert v.f_plus("d", "e") == 7.0  # ideal size of the top


def test_f_plus_empty_filter_is_infinite():
    p = build_poset(set(), elements=["p", "q"])
    v = make_valuation(p, {"p": 1.0, "q": 2.0})
    assert v.f_plus("p", "q") == float("inf")
    assert v.f_minus("p", "q") == float("-inf")


def test_f_diagonal_equals_value(p1):
    v = cardinal_ideal_valuation(p1)
    for x in p1.elements:
        assert v.f_minus(x, x) == v.value(x)
        assert v.f_plus(x, x) == v.value(x)


def test_f_symmetry_random():
    rng = np.random.default_rng(3)
    for _ in range(25):
        p = suites.rand_poset(rng, max_n=7)
        v = suites.rand_strictly_isotone_valuation(rng, p)
        for x in p.elements:
            for y in p.elements:
                assert v.f_minus(x, y) == v.f_minus(y, x)
                assert v.f_plus(x, y) == v.f_plus(y, x)


def test_antitone_conventions():
    p = build_poset(set(), elements=["p", "q"])
    v = make_valuation(p, {"p": 2.0, "q": 1.0})
    forced = make_valuation(build_poset({("p", "q")}, elements=[]), {"p": 2.0, "q": 1.0})
    assert forced.monotonicity == STRICTLY_ANTITONE
    assert forced.f_minus("p", "q") == 2.0  # inf over the ideal of p
    assert forced.f_plus("p", "q") == 1.0


# -- the central counterexample ------------------------------------------------------


def test_p1_cardinal_ideal_is_not_lower(p1):
    verdict = check_valuation(cardinal_ideal_valuation(p1))
    assert not verdict.is_lower
    assert verdict.domain_lower_ok  # bounded, so only the inequality fails
    lower = [w for w in verdict.witnesses if w.axiom == "lower"]
    assert len(lower) == 1
    w = lower[0]
    assert (w.x, w.y) == ("d", "e")
    assert w.lhs == 10.0 and w.rhs == 9.0


def test_p1_cardinal_filter_is_lower(p1):
    # the dual deviation of this poset is 1, so filter sizes do give a lower valuation
    verdict = check_valuation(cardinal_filter_valuation(p1))
    assert verdict.is_lower


def test_m2_cardinal_ideal_lower_not_upper(m2):
    verdict = check_valuation(cardinal_ideal_valuation(m2))
    assert verdict.is_lower
    assert not verdict.is_upper


def test_chain_isotone_is_both(chain3):
    v = make_valuation(chain3, {"0": 0.3, "m": 1.1, "1": 4.0})
    verdict = check_valuation(v)
    assert verdict.is_lower and verdict.is_upper


def test_antichain_domain_failure():
    p = build_poset(set(), elements=["x", "y"])
    v = make_valuation(p, {"x": 1.0, "y": 1.0})
    verdict = check_valuation(v)
    assert not verdict.is_lower and not verdict.is_upper
    assert not verdict.domain_condition_ok
    axioms = {w.axiom for w in verdict.witnesses}
    assert axioms == {"lower_domain", "upper_domain"}


def test_witnesses_reproducible(p1):
    v = cardinal_ideal_valuation(p1)
    for w in check_valuation(v).witnesses:
        if w.axiom == "lower":
            assert w.lhs == v.value(w.x) + v.value(w.y)
            assert w.rhs == v.f_minus(w.x, w.y) + v.f_plus(w.x, w.y)


# -- Monjardet and Leclerc variants ----------------------------------------------------


def test_monjardet_agrees_on_m2(m2):
    v = cardinal_ideal_valuation(m2)
    assert check_valuation_monjardet(v).is_lower
    assert check_valuation(v).is_lower
    assert check_valuation_leclerc(v).is_lower


def test_monjardet_p1_fails_via_top(p1):
    verdict = check_valuation_monjardet(cardinal_ideal_valuation(p1))
    assert not verdict.is_lower
    lower = [w for w in verdict.witnesses if w.axiom == "lower"]
    assert [(w.x, w.y, w.via) for w in lower] == [("d", "e", "1")]
    assert lower[0].lhs == 10.0 and lower[0].rhs == 9.0


def test_monjardet_requires_isotone(p1):
    with pytest.raises(PreconditionUnmet):
        check_valuation_monjardet(cardinal_filter_valuation(p1))


def test_monjardet_requires_bottom():
    p = build_poset({("x", "t"), ("y", "t")})
    v = make_valuation(p, {"x": 1.0, "y": 1.0, "t": 2.0})
    with pytest.raises(PreconditionUnmet):
        check_valuation_monjardet(v, which="lower")
    assert check_valuation_monjardet(v, which="upper").is_upper


def test_leclerc_requires_strict(chain3):
    v = make_valuation(chain3, {x: 5.0 for x in chain3.elements})
    with pytest.raises(PreconditionUnmet):
        check_valuation_leclerc(v)


def test_leclerc_requires_semilattice(p1):
    with pytest.raises(PreconditionUnmet):
        check_valuation_leclerc(cardinal_ideal_valuation(p1), which="lower")


def test_cross_definition_agreement_random_lattices():
    rng = np.random.default_rng(17)
    for _ in range(40):
        p = suites.rand_lattice(rng)
        v = suites.rand_strictly_isotone_valuation(rng, p)
        d1 = check_valuation(v)
        mo = check_valuation_monjardet(v)
        le = check_valuation_leclerc(v)
        assert d1.is_lower == mo.is_lower == le.is_lower
        assert d1.is_upper == mo.is_upper == le.is_upper


# -- weighted cumulative valuations -----------------------------------------------------


def test_cumulative_lower_chain(chain3):
    v = cumulative_lower(chain3, WeightFunction.constant(chain3))
    assert [v.value(x) for x in ("0", "m", "1")] == [1.0, 2.0, 3.0]
    assert v.monotonicity == STRICTLY_ISOTONE


def test_cumulative_equals_ideal_size_for_unit_weights(m2):
    v = cumulative_lower(m2, WeightFunction.constant(m2))
    w = cardinal_ideal_valuation(m2)
    assert all(v.value(x) == w.value(x) for x in m2.elements)


def test_cumulative_lower_m2_weights(m2):
    t = WeightFunction(m2, {"0": 0.1, "p": 0.2, "q": 0.3, "1": 0.4})
    v = cumulative_lower(m2, t)
    assert {x: round(v.value(x), 10) for x in m2.elements} == {
        "0": 0.1, "p": 0.3, "q": 0.4, "1": 1.0,
    }
    assert check_valuation(v).is_lower


def test_cumulative_upper_m2_weights(m2):
    t = WeightFunction(m2, {"0": 0.1, "p": 0.2, "q": 0.3, "1": 0.4})
    v = cumulative_upper(m2, t)
    assert {x: round(v.value(x), 10) for x in m2.elements} == {
        "0": 1.0, "p": 0.6, "q": 0.7, "1": 0.4,
    }
    assert v.monotonicity == STRICTLY_ANTITONE
    assert check_valuation(v).is_lower


def test_cumulative_upper_chain(chain3):
    v = cumulative_upper(chain3, WeightFunction.constant(chain3))
    assert [v.value(x) for x in ("0", "m", "1")] == [3.0, 2.0, 1.0]


def test_cumulative_warns_off_semilattice(p1):
    with pytest.warns(UserWarning, match="not a meet-semilattice"):
        cumulative_lower(p1, WeightFunction.constant(p1))


def test_cumulative_lower_random_meet_semilattices():
    rng = np.random.default_rng(29)
    for _ in range(30):
        p = suites.rand_lattice(rng)
        t = suites.rand_positive_weights(rng, p)
        assert check_valuation(cumulative_lower(p, t)).is_lower


def test_weight_poset_mismatch(m2, chain3):
    t = WeightFunction.constant(chain3)
    with pytest.raises(WeightPosetMismatch):
        cumulative_lower(m2, t)


def test_negative_weight_rejected(m2):
    with pytest.raises(ValueError):
        WeightFunction(m2, {"0": -0.1, "p": 0.2, "q": 0.3, "1": 0.4})


def test_parse_weights(m2):
    t = parse_weights_text("# demo\n0 0.1\np 0.2\nq 0.3\n1 0.4\n", m2)
    assert t.normalized
    with pytest.raises(WeightPosetMismatch):
        parse_weights_text("0 0.1\np 0.2\n", m2)


# -- kappa -------------------------------------------------------------------------------


def test_kappa_m2(m2):
    k = kappa_valuation(m2, m2.meet_irreducibles(), 2.0)
    assert {x: k.value(x) for x in m2.elements} == {"0": 0.0, "p": 1.0, "q": 1.0, "1": 2.0}
    assert check_valuation(k).is_upper


def test_kappa_empty_subset_is_constant(m2):
    k = kappa_valuation(m2, (), 3.5)
    assert k.monotonicity == CONSTANT
    assert all(k.value(x) == 3.5 for x in m2.elements)


def test_kappa_upper_on_random_join_semilattices():
    rng = np.random.default_rng(31)
    for _ in range(30):
        p = suites.rand_tree(rng)  # trees are join-semilattices
        names = list(p.elements)
        subset = [x for x in names if rng.random() < 0.5]
        k = kappa_valuation(p, subset, float(len(subset)))
        assert check_valuation(k).is_upper


# -- transforms ----------------------------------------------------------------------------


def test_affine_identity(m2):
    v = cardinal_ideal_valuation(m2)
    w = affine_transform(v, 1.0, 0.0)
    assert all(w.value(x) == v.value(x) for x in m2.elements)


def test_affine_zero_scale(m2):
    with pytest.raises(ZeroScale):
        affine_transform(cardinal_ideal_valuation(m2), 0.0, 1.0)


def test_affine_pointwise(m2):
    t = WeightFunction(m2, {"0": 0.1, "p": 0.2, "q": 0.3, "1": 0.4})
    v = affine_transform(cumulative_lower(m2, t), 2.0, 1.0)
    assert {x: round(v.value(x), 10) for x in m2.elements} == {
        "0": 1.2, "p": 1.6, "q": 1.8, "1": 3.0,
    }


def test_negation_swaps_lower_upper_and_direction(m2):
    v = cardinal_ideal_valuation(m2)  # strictly isotone, lower, not upper
    before = check_valuation(v)
    w = affine_transform(v, -1.0, 0.0)
    after = check_valuation(w)
    assert w.monotonicity == STRICTLY_ANTITONE
    assert after.is_lower == before.is_upper
    assert after.is_upper == before.is_lower


def test_log_requires_positive(m2):
    v = make_valuation(m2, {"0": 0.0, "p": 1.0, "q": 1.0, "1": 2.0})
    with pytest.raises(NonPositiveValue, match="'0'"):
        log_transform(v)


def test_log_of_constant_e(m2):
    v = make_valuation(m2, {x: math.e for x in m2.elements})
    w = log_transform(v)
    assert all(abs(w.value(x) - 1.0) < 1e-12 for x in m2.elements)


def test_log_preserves_upper_on_kappa(m2):
    k = kappa_valuation(m2, m2.meet_irreducibles(), 3.0)  # values 1,2,2,3 > 0
    assert check_valuation(k).is_upper
    assert check_valuation(log_transform(k)).is_upper


def test_m2_log_upper_counterexample(m2):
    # heavy top mass: v(p) v(q) < v(0), breaking the upper axiom after log
    t = WeightFunction(m2, {"0": 0.05, "p": 0.05, "q": 0.05, "1": 0.85})
    logged = log_transform(cumulative_lower(m2, t))
    verdict = check_valuation(logged)
    assert verdict.is_lower
    assert not verdict.is_upper
    assert [(w.x, w.y) for w in verdict.witnesses] == [("p", "q")]


def test_m2_log_lower_counterexample(m2):
    # heavy middle mass: v(p) v(q) > v(0), breaking the lower axiom after log
    t = WeightFunction(m2, {"0": 0.05, "p": 0.4, "q": 0.4, "1": 0.15})
    logged = log_transform(cumulative_lower(m2, t))
    verdict = check_valuation(logged)
    assert not verdict.is_lower
    assert verdict.is_upper
    assert [(w.x, w.y) for w in verdict.witnesses] == [("p", "q")]


def test_log_affine_matches_log_transform(m2):
    k = kappa_valuation(m2, m2.meet_irreducibles(), 3.0)
    a = log_affine_transform(k, 1.0, 0.0)
    b = log_transform(k)
    assert all(a.value(x) == b.value(x) for x in m2.elements)


def test_log_affine_negated_lower(m2):
    t = WeightFunction(m2, {"0": 0.1, "p": 0.2, "q": 0.3, "1": 0.4})
    v = cumulative_lower(m2, t)  # isotone lower, values (0.1, 0.3, 0.4, 1.0)
    out = log_affine_transform(v, -1.0, 2.0, negate=True)
    assert out.monotonicity == STRICTLY_ISOTONE
    assert abs(out.value("0") - (-math.log(1.9))) < 1e-12
    assert abs(out.value("1") - 0.0) < 1e-12
    assert check_valuation(out).is_lower


def test_log_affine_domain_guard(m2):
    v = cardinal_ideal_valuation(m2)  # max value 4
    with pytest.raises(NonPositiveValue):
        log_affine_transform(v, -1.0, 4.0, negate=True)  # hits zero at the top
