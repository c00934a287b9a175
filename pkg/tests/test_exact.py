import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

import oracles
from osplab.exact import (
    PhaseType,
    StaircaseIdeal,
    build_corner_chain,
    build_osp_chain,
    erlang_ph,
    exponential_ph,
    lst_equal,
    lst_eval,
    marginal_U_chain,
    marginal_V_chain,
    moments,
    solve,
    staircase_ideals,
)

# E[T] from the dense Gauss-Jordan oracle over all permutations (frozen)
EXPECTED_MEAN = {2: Fraction(1), 3: Fraction(5, 2), 4: Fraction(25, 6), 5: Fraction(1915, 324)}


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_frozen_means_match_dense_oracle(n):
    alpha, S = oracles.osp_generator_dense(n)
    assert oracles.dense_mean(alpha, S) == EXPECTED_MEAN[n]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_chain_means(n):
    assert moments(build_osp_chain(n), 1) == EXPECTED_MEAN[n]
    assert moments(build_corner_chain(n), 1) == EXPECTED_MEAN[n]


def test_n5_mean_by_bareiss_on_dense_oracle_chain():
    alpha, S = oracles.osp_generator_dense(5)
    ph = PhaseType.from_dense(alpha, S)
    assert moments(ph, 1, method="bareiss") == EXPECTED_MEAN[5]


def test_small_chains():
    ph = build_osp_chain(2)
    assert ph.d == 1 and ph.dense() == [[-1]]
    assert build_corner_chain(2).d == 1


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_osp_state_count(n):
    assert build_osp_chain(n).d == math.factorial(n) - 1


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_ideal_counts_match_subset_enumeration(n):
    brute = oracles.ideals_by_subsets(n)
    ours = staircase_ideals(n)
    assert {lam.cells() for lam in ours} == set(brute)
    assert len(ours) == math.comb(2 * n, n) // (n + 1)  # Catalan
    assert build_corner_chain(n).d == len(brute) - 1


def test_n3_corner_chain_has_four_transient_ideals():
    # cells (1,1), (1,2), (2,1): ideals {}, {11}, {11,12}, {11,21}, full
    assert build_corner_chain(3).d == 4


def test_ideal_operations():
    lam = StaircaseIdeal.empty(4)
    assert lam.addable() == [(1, 1)]
    lam = lam.add(1).add(2)
    assert lam.cells() == {(1, 1), (2, 1)}
    assert lam.contains(2, 1) and not lam.contains(1, 2)
    assert sorted(lam.addable()) == [(1, 2), (3, 1)]
    with pytest.raises(ValueError):
        StaircaseIdeal(4, (1, 2, 0))
    assert StaircaseIdeal.full(4).addable() == []


def test_lst_analytic_values():
    assert lst_eval(exponential_ph(), 1) == Fraction(1, 2)
    assert lst_eval(exponential_ph(), 3) == Fraction(1, 4)
    assert lst_eval(erlang_ph(2), 1) == Fraction(1, 4)
    assert moments(exponential_ph(), 2) == 2
    assert moments(erlang_ph(3, Fraction(1, 2)), 1) == 6


def test_lst_matches_dense_oracle():
    alpha, S = oracles.osp_generator_dense(4)
    ph = build_osp_chain(4)
    corner = build_corner_chain(4)
    for s in (Fraction(1), Fraction(7, 3), Fraction(10)):
        assert lst_eval(ph, s) == oracles.dense_lst(alpha, S, s) == lst_eval(corner, s)


def test_lst_equal_examples():
    assert lst_equal(exponential_ph(), exponential_ph()).passed
    cert = lst_equal(exponential_ph(), erlang_ph(2))
    assert not cert.passed and cert.discrepancy == 1
    assert cert.table[0] == (1, Fraction(1, 2), Fraction(1, 4))


@pytest.mark.parametrize("n,points", [(2, 3), (3, 10), (4, 37), (5, 161)])
def test_identity_certificates(n, points):
    cert = lst_equal(build_osp_chain(n), build_corner_chain(n))
    assert cert.passed and cert.n_points == points
    assert all(a == b for _, a, b in cert.table)
    assert cert.to_dict()["points"] == points


@pytest.mark.long
def test_identity_certificate_n6():
    cert = lst_equal(build_osp_chain(6), build_corner_chain(6))
    assert cert.passed and cert.n_points == 719 + 131 + 1


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_marginal_certificates(n):
    for k in range(1, n):
        assert lst_equal(marginal_U_chain(n, k), marginal_V_chain(n, k)).passed


@pytest.mark.long
def test_marginal_certificates_n6():
    for k in range(1, 6):
        assert lst_equal(marginal_U_chain(6, k), marginal_V_chain(6, k)).passed


def test_marginal_examples():
    assert lst_equal(marginal_U_chain(2, 1), exponential_ph()).passed
    assert lst_equal(marginal_V_chain(2, 1), exponential_ph()).passed
    assert moments(marginal_U_chain(3, 1), 1) == 2 == moments(marginal_V_chain(3, 1), 1)
    # L(1, 2) = w11 + w12 is Erlang(2)
    assert lst_equal(marginal_V_chain(3, 1), erlang_ph(2)).passed


def test_second_moment_two_ways():
    ph = build_osp_chain(3)
    m2 = moments(ph, 2)
    dense = ph.dense()
    numeric, _ = quad(lambda t: 2 * t * (1 - oracles.ph_cdf(ph.alpha, dense, t)), 0, np.inf, epsabs=1e-12, epsrel=1e-12)
    assert abs(float(m2) - numeric) < 1e-8


def test_bareiss_matches_triangular():
    ph = build_osp_chain(4)
    rhs = [Fraction(i + 1, 3) for i in range(ph.d)]
    assert solve(ph, Fraction(3), rhs, "bareiss") == solve(ph, Fraction(3), rhs, "triangular")
    with pytest.raises(ValueError):
        solve(PhaseType.from_dense([1, 0], [[-2, 1], [1, -2]]), 1, [1, 1], "triangular")


@st.composite
def cyclic_phase_types(draw):
    d = draw(st.integers(1, 5))
    S = []
    for i in range(d):
        row = [Fraction(draw(st.integers(0, 3))) if j != i else Fraction(0) for j in range(d)]
        exit_rate = Fraction(draw(st.integers(1, 3)))
        row[i] = -(sum(row) + exit_rate)
        S.append(row)
    weights = [draw(st.integers(0, 3)) for _ in range(d)]
    if sum(weights) == 0:
        weights[0] = 1
    alpha = [Fraction(w, sum(weights)) for w in weights]
    return alpha, S


@settings(max_examples=60, deadline=None)
@given(cyclic_phase_types(), st.fractions(0, 20))
def test_general_solver_matches_oracle(ph_data, s):
    alpha, S = ph_data
    ph = PhaseType.from_dense(alpha, S)
    assert lst_eval(ph, s) == oracles.dense_lst(alpha, S, s)
    assert lst_eval(ph, 0) == 1
    assert moments(ph, 1) > 0 and moments(ph, 2) > 0


def test_phase_type_validation():
    with pytest.raises(ValueError):
        PhaseType.from_dense([1], [[1]])
    with pytest.raises(ValueError):
        PhaseType.from_dense([Fraction(1, 2)], [[-1]])
    with pytest.raises(ValueError):
        PhaseType.from_dense([1, 0], [[-1, 1], [0, 0]])  # state 1 never absorbs
    with pytest.raises(TypeError):
        lst_eval(exponential_ph(), 0.5)
    with pytest.raises(ValueError):
        build_osp_chain(7)
    with pytest.raises(ValueError):
        lst_equal(exponential_ph(), exponential_ph(), points=[1, 1])


@pytest.mark.parametrize("n", [3, 4])
def test_exact_mean_matches_monte_carlo(n):
    from osplab.lpp import lpp_batch
    from osplab.osp import osp_batch

    mean = float(EXPECTED_MEAN[n])
    for T in (osp_batch(n, range(30_000), 3, keep_u=False)[0], lpp_batch(n, range(30_000), 3, keep_v=False)[0]):
        assert abs(T.mean() - mean) < 4 * T.std() / np.sqrt(T.size)
