from fractions import Fraction

import pytest

from posdiam.formulas import (
    KNOWN,
    OUT_OF_RANGE,
    TAGS,
    UNKNOWN,
    FormulaResult,
    diam_formula,
    eta,
    formula_t_provider,
    s_formula,
    s_from_quotients,
    s_upper_bound,
    t_formula,
    t_upper_bound,
)
from posdiam.groups import group_types_up_to, make_group
from posdiam.oracle import absolute_diameter_oracle, s_oracle, t_oracle

SMALL = group_types_up_to(16)


def oracle_t(Q, rho):
    return t_oracle(Q, rho)


# -- examples -------------------------------------------------------------


@pytest.mark.parametrize("moduli, d", [([2, 4], 4), ([7], 6), ([13], 12), ([], 0), ([3, 3, 3], 6)])
def test_diam_formula_examples(moduli, d):
    assert diam_formula(make_group(moduli)) == d


def test_t_formula_examples():
    assert t_formula(make_group([9]), 4) == FormulaResult(3, KNOWN, "2.7i")
    assert t_formula(make_group([2, 2, 2, 2]), 4) == FormulaResult(5, KNOWN, "eq2.1")
    res = t_formula(make_group([5, 5]), 4)
    assert res.status == UNKNOWN and res.value is None


def test_s_formula_examples():
    assert s_formula(make_group([10]), 4).value == 4
    assert s_formula(make_group([2, 2, 2, 2]), 4) == FormulaResult(5, KNOWN, "eq2.1")
    assert s_formula(make_group([9]), 4).value == 3


def test_out_of_range_is_zero():
    G = make_group([2, 4])
    for f in (t_formula, s_formula):
        for rho in (0, 5, 9):
            res = f(G, rho)
            assert res.status == OUT_OF_RANGE and res.value == 0 and res.known


def test_eta_examples():
    assert eta(make_group([10])) == 2
    assert eta(make_group([7])) == 0
    for r in range(1, 7):
        assert eta(make_group([2] * r)) == 0


@pytest.mark.parametrize(
    "moduli, rho, value",
    [([5], 3, 2), ([2, 8], 6, 3), ([7], 6, 2), ([11], 10, 2), ([16], 15, 2)],
)
def test_t_upper_bound_examples(moduli, rho, value):
    assert t_upper_bound(make_group(moduli), rho) == value


def test_s_upper_bound_examples():
    assert s_upper_bound(make_group([10]), 4) == 4
    assert s_upper_bound(make_group([2, 2, 2, 2]), 4) == Fraction(32, 5)
    assert s_upper_bound(make_group([12]), 5) == 4
    with pytest.raises(ValueError):
        s_upper_bound(make_group([12]), 3)


def test_s_from_quotients_examples():
    assert s_from_quotients(make_group([10]), 4, oracle_t) == 4
    assert s_from_quotients(make_group([2, 2, 2, 2]), 4, oracle_t) == 5
    G = make_group([2, 4])
    assert s_from_quotients(G, 5, oracle_t) == 0
    assert s_from_quotients(G, 7, formula_t_provider) == 0


def test_unknown_quotient_propagates():
    # Z5+Z5 has t_4 unknown in closed form, so the recursion cannot finish
    assert s_from_quotients(make_group([5, 5]), 4, formula_t_provider) is None


def test_known_results_carry_tags():
    with pytest.raises(ValueError):
        FormulaResult(3, KNOWN, "9.9")
    for G in SMALL:
        for rho in range(1, diam_formula(G) + 2):
            for res in (t_formula(G, rho), s_formula(G, rho)):
                if res.status == KNOWN:
                    assert res.source in TAGS


def test_no_formula_when_divisor_two_mod_three():
    # non-cyclic, |G| coprime to 3 with a divisor = 2 mod 3, exponent != 2, diameter > 4
    for moduli in ([4, 4], [2, 8], [2, 2, 4], [5, 5], [2, 10]):
        assert t_formula(make_group(moduli), 4).status == UNKNOWN


# -- agreement with the oracle -------------------------------------------


@pytest.mark.parametrize("G", SMALL, ids=str)
def test_diam_formula_matches_oracle(G):
    assert diam_formula(G) == absolute_diameter_oracle(G)


@pytest.mark.parametrize("G", SMALL, ids=str)
def test_formulas_match_oracle(G):
    for rho in range(1, diam_formula(G) + 2):
        t, s = t_formula(G, rho), s_formula(G, rho)
        if t.known:
            assert t.value == t_oracle(G, rho), (rho, t)
        if s.known:
            assert s.value == s_oracle(G, rho), (rho, s)


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_prime_cyclic_t_equals_s(p):
    G = make_group([p])
    for rho in range(2, p):
        t, s = t_formula(G, rho), s_formula(G, rho)
        assert t.value == s.value == (p - 2) // (rho - 1) + 1


@pytest.mark.parametrize("G", SMALL, ids=str)
def test_formulas_respect_bounds(G):
    for rho in range(2, diam_formula(G) + 1):
        t = t_formula(G, rho)
        if t.known:
            assert t.value <= t_upper_bound(G, rho)
        if rho >= 4:
            assert s_oracle(G, rho) <= s_upper_bound(G, rho)


def test_no_conflicts_up_to_order_64():
    # every applicable closed form is evaluated and must agree
    for G in group_types_up_to(64):
        for rho in range(1, diam_formula(G) + 2):
            t_formula(G, rho)
            s_formula(G, rho)


def test_cyclic_formulas_match_oracle_up_to_16():
    for m in range(3, 17):
        G = make_group([m])
        for rho in range(2, m):
            assert t_formula(G, rho).value == t_oracle(G, rho) == (m - 2) // (rho - 1) + 1
            assert s_formula(G, rho).value == s_oracle(G, rho)
