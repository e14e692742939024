import random

import pytest

from posdiam.constructions import (
    ConstructionError,
    NearStandardSpec,
    decompose_near_standard,
    double_coset,
    four_maximal_witness,
    interval_set,
    lengths_match_decomposition,
    lift,
    near_standard,
    near_standard_elements,
    near_standard_family,
    near_standard_specs,
    odd_pairing_set,
    product_4maximal,
    punctured_coset,
    recognize_near_standard,
    standard_generating_set,
    validate_witness,
)
from posdiam.formulas import all_divisors_one_mod_three, diam_formula, t_formula
from posdiam.groups import enumerate_subgroups, group_types_up_to, make_group, subgroup_closure
from posdiam.oracle import enumerate_extremal_generating_sets, t_oracle
from posdiam.sets import ElementSet, bounded_generation, diameter, dilate, length_table, sumset

SMALL = group_types_up_to(16)


def S(moduli, *elems):
    G = make_group(moduli)
    return ElementSet.from_elements(G, [(e,) if isinstance(e, int) else e for e in elems])


def H_of(G, *gens):
    return subgroup_closure(G, [(g,) if isinstance(g, int) else g for g in gens])


# -- standard and near-standard sets -------------------------------------


def test_standard_generating_set_examples():
    assert standard_generating_set(make_group([2, 4])) == S([2, 4], (1, 0), (0, 1))
    assert standard_generating_set(make_group([7])) == S([7], 1)
    assert standard_generating_set(make_group([])) == ElementSet(make_group([]))


@pytest.mark.parametrize("G", SMALL, ids=str)
def test_standard_set_attains_absolute_diameter(G):
    assert diameter(standard_generating_set(G)) == diam_formula(G)


def test_near_standard_examples():
    G = make_group([2, 4])
    A = near_standard(G, NearStandardSpec.make([(1, 0), (0, 1)], {1: 2}))
    assert A == S([2, 4], (0, 0), (1, 1), (0, 1))
    assert diameter(A) == 4
    V = make_group([2, 2, 2])
    A = near_standard(V, NearStandardSpec.make([(1, 0, 0), (0, 1, 0), (0, 0, 1)], {1: 3, 2: 3}))
    assert A == S([2, 2, 2], (0, 0, 0), (1, 0, 1), (0, 1, 1), (0, 0, 1))
    assert diameter(A) == 3
    for G in SMALL:
        basis = [tuple(int(i == j) for j in range(G.rank)) for i in range(G.rank)]
        assert near_standard(G, NearStandardSpec.make(basis)) == standard_generating_set(G).with_zero()


def test_near_standard_rejects_bad_specs():
    G = make_group([2, 4])
    with pytest.raises(ConstructionError):
        near_standard(G, NearStandardSpec.make([(1, 0), (0, 1)], {2: 1}))
    with pytest.raises(ConstructionError):
        near_standard(G, NearStandardSpec.make([(1, 0), (0, 2)]))
    with pytest.raises(ConstructionError):
        near_standard(G, NearStandardSpec.make([(1, 0), (0, 1)], {1: 3}))


def test_decompose_examples():
    G = make_group([2, 4])
    spec = NearStandardSpec.make([(1, 0), (0, 1)], {1: 2})
    A = near_standard(G, spec)
    d = decompose_near_standard(G, spec, A, (1, 3))
    assert d.coefficients == (1, 2) and d.total == 3 == length_table(A)[(1, 3)]
    assert decompose_near_standard(G, spec, A, (0, 0)).coefficients == (0, 0)
    a = near_standard_elements(G, spec)
    top = G.add(G.scale(1, a[0]), G.scale(3, a[1]))
    assert decompose_near_standard(G, spec, A, top).total == diam_formula(G)
    with pytest.raises(ConstructionError):
        decompose_near_standard(G, spec, standard_generating_set(G).with_zero(), (1, 3))


def _reduce(G, spec, mu):
    """Coefficient reduction: m_j a_j = m_j a_sigma(j), or 0 when sigma(j) is undefined."""
    mu = list(mu)
    sigma = spec.sigma_map
    ms = G.invariant_factors
    while True:
        over = [j for j in range(len(mu)) if mu[j] >= ms[j]]
        if not over:
            return tuple(mu)
        j = over[0]
        mu[j] -= ms[j]
        if j + 1 in sigma:
            mu[sigma[j + 1] - 1] += ms[j]


@pytest.mark.parametrize("G", [G for G in SMALL if G.rank >= 1], ids=str)
def test_decomposition_matches_reduction_loop(G):
    rng = random.Random(G.order * 31 + G.rank)
    specs = list(near_standard_specs(G).values())
    for spec in rng.sample(specs, min(6, len(specs))):
        A = near_standard(G, spec)
        a = near_standard_elements(G, spec)
        for _ in range(40):
            mu = [rng.randrange(0, 3 * m) for m in G.invariant_factors]
            g = G.zero
            for c, x in zip(mu, a):
                g = G.add(g, G.scale(c, x))
            lam = _reduce(G, spec, mu)
            assert decompose_near_standard(G, spec, A, g).coefficients == lam
            assert sum(lam) <= sum(mu)


@pytest.mark.parametrize("G", [G for G in SMALL if G.order <= 12], ids=str)
def test_near_standard_family_equals_extremal_sets(G):
    assert near_standard_family(G) == enumerate_extremal_generating_sets(G)


@pytest.mark.parametrize("G", [G for G in SMALL if G.order <= 12 and G.rank >= 1], ids=str)
def test_lengths_equal_coefficient_totals(G):
    for spec in near_standard_specs(G).values():
        assert lengths_match_decomposition(G, spec)


def test_recognize_near_standard():
    G = make_group([2, 4])
    A = S([2, 4], (0, 0), (1, 1), (0, 1))
    spec = recognize_near_standard(A)
    assert spec is not None and near_standard(G, spec) == A
    assert recognize_near_standard(S([2, 4], (0, 0), (1, 0), (0, 2))) is None
    with pytest.raises(ConstructionError):
        recognize_near_standard(ElementSet.whole(make_group([16])))


# -- intervals, punctured cosets, pairings --------------------------------


def test_interval_examples():
    assert interval_set(9, 4) == S([9], 0, 1, 2)
    assert interval_set(5, 4) == S([5], 0, 1)
    for m in range(3, 20):
        assert interval_set(m, m - 1) == S([m], 0, 1)
    with pytest.raises(ConstructionError):
        interval_set(5, 5)


@pytest.mark.parametrize("m", range(3, 17))
def test_interval_is_extremal_witness(m):
    for rho in range(2, m):
        A = interval_set(m, rho)
        assert len(A) == t_formula(make_group([m]), rho).value
        chk = validate_witness(A, rho)
        assert chk.aperiodic and chk.rho_maximal and chk.diameter >= rho


def test_punctured_coset_examples():
    Z10 = make_group([10])
    A = punctured_coset(Z10, H_of(Z10, 2), (1,))
    assert A == S([10], 0, 3, 5, 7, 9)
    assert bounded_generation(A, 2) == ElementSet.whole(Z10).difference(S([10], 1))
    Z9 = make_group([9])
    A = punctured_coset(Z9, H_of(Z9, 3), (1,))
    assert A == S([9], 0, 4, 7)
    chk = validate_witness(A, 4)
    assert chk.rho_maximal and chk.aperiodic and len(A) == t_oracle(Z9, 4)
    with pytest.raises(ConstructionError):
        punctured_coset(Z10, H_of(Z10, 2), (4,))


@pytest.mark.parametrize("G", [G for G in SMALL if G.order >= 6], ids=str)
def test_punctured_coset_attains_order_over_index(G):
    for H in enumerate_subgroups(G):
        n = H.index
        if H.order < 3 or not H.quotient_type.is_cyclic or n < 2:
            continue
        g = next(x for x in G.elements() if H.quotient.project_index(x) == 1)
        A = punctured_coset(G, H, g)
        assert bounded_generation(A, n) == ElementSet.whole(G).difference(ElementSet.from_elements(G, [g]))
        chk = validate_witness(A, n + 1)
        assert chk.aperiodic and chk.rho_maximal and chk.diameter != float("inf")
        assert len(A) == G.order // n


def test_odd_pairing_examples():
    assert odd_pairing_set(make_group([5]), (1,)) == S([5], 0, 2)
    for m, g in ((7, 1), (9, 3), (15, 4), (13, 6)):
        G = make_group([m])
        A = odd_pairing_set(G, (g,))
        assert len(A) == (m - 1) // 2 and 0 in A and (g,) not in A
        assert (g,) not in sumset(A, A)
        chk = validate_witness(A)
        assert chk.aperiodic and chk.diameter != float("inf")
    for bad in ((make_group([6]), (1,)), (make_group([3]), (1,)), (make_group([7]), (0,))):
        with pytest.raises(ConstructionError):
            odd_pairing_set(*bad)


def test_odd_pairing_in_noncyclic_group():
    G = make_group([3, 3])
    for g in list(G.elements())[1:]:
        A = odd_pairing_set(G, g)
        assert len(A) == 4 and g not in sumset(A, A)
        assert validate_witness(A, 3).rho_maximal


# -- product witnesses for rho = 4 ----------------------------------------


def test_product_4maximal_example():
    Z7 = make_group([7])
    A = product_4maximal(Z7, S([7], 0, 1))
    assert A.group.invariant_factors == (7, 7)
    assert len(A) == 16
    chk = validate_witness(A, 4)
    assert chk.aperiodic and chk.rho_maximal and chk.diameter >= 4


def test_product_4maximal_preconditions():
    # m = 4 is admissible: A1 = {0}
    A = product_4maximal(make_group([4]), S([7], 0, 1))
    assert len(A) == (28 - 1) // 3 and validate_witness(A, 4).rho_maximal
    with pytest.raises(ConstructionError):
        product_4maximal(make_group([5]), S([7], 0, 1))
    with pytest.raises(ConstructionError):
        product_4maximal(make_group([7]), S([7], 1, 2))  # maximal sets contain 0


@pytest.mark.parametrize("n", [4, 7, 13, 16, 19, 28, 49])
def test_four_maximal_witness(n):
    for G in group_types_up_to(n, min_order=n):
        if not all_divisors_one_mod_three(G.order):
            continue
        A = four_maximal_witness(G)
        assert A.group == G and len(A) == (n - 1) // 3
        chk = validate_witness(A, 4)
        assert chk.aperiodic and chk.rho_maximal


# -- double cosets and lifts ---------------------------------------------


def test_double_coset_examples():
    Z10 = make_group([10])
    A = double_coset(Z10, H_of(Z10, 5), (1,))
    assert A == S([10], 0, 1, 5, 6)
    assert diameter(A) >= 4 and length_table(A)[(4,)] == 4
    Z12 = make_group([12])
    A = double_coset(Z12, H_of(Z12, 6), (1,))
    assert len(A) == 4 and diameter(A) >= 5
    with pytest.raises(ConstructionError):
        double_coset(Z10, H_of(Z10, 5), (5,))


def test_lift_examples():
    Z4 = make_group([4])
    H = H_of(Z4, 2)
    Abar = ElementSet.whole(H.quotient_type)
    A = lift(Z4, H, Abar)
    assert A == ElementSet.whole(Z4) and diameter(A) == diameter(Abar) == 1
    Z10 = make_group([10])
    H = H_of(Z10, 5)
    Q = H.quotient
    Abar = ElementSet.from_indices(Q.type, [0, Q.project_index((1,))])
    A = lift(Z10, H, Abar)
    assert A == S([10], 0, 1, 5, 6) == double_coset(Z10, H, (1,))
    assert diameter(A) == diameter(Abar) == 4
    with pytest.raises(ConstructionError):
        lift(Z10, H, ElementSet.from_indices(Q.type, [1]))


def test_lift_project_identity_random():
    rng = random.Random(7)
    groups = [G for G in group_types_up_to(32) if G.order >= 2]
    done = 0
    while done < 200:
        G = rng.choice(groups)
        # proper subgroups only: G/G is trivial with diameter 0, its lift G has diameter 1
        H = rng.choice(enumerate_subgroups(G)[:-1])
        Q = H.quotient
        Abar = ElementSet(Q.type, rng.randrange(1 << Q.type.order) | 1)
        A = lift(G, H, Abar)
        assert Q.project_set(A) == Abar
        assert diameter(A) == diameter(Abar)
        assert A.translate(G.element(H.members.indices()[-1])) == A  # H stabilises the lift
        done += 1


def test_dilation_of_whole_group():
    # p * G is the subgroup of p-multiples
    G = make_group([2, 8])
    assert dilate(2, ElementSet.whole(G)) == H_of(G, (0, 2)).members
