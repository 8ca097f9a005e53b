import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from affchar.characters import character, handle_parameters, random_character, unit_value
from affchar.dehn_twist import (TwistData, block_gram, boundary_family, genus2_standard_twists,
                                genus2_twist_pair, higher_genus_rep, load_genus2_fixture, matrix_in_classes,
                                twist_action_on_Z1, twist_cocycle_mu, twist_form_constant, twist_mu_values,
                                transvected_family, verify_torelli, word_action_matrix)
from affchar.rng import make_rng
from affchar.surface_group import Word, abelianize
from affchar.twisted_cohomology import (VOLUME_NORMALIZATION, DegenerateCharacterError, coboundary,
                                        cohomology_basis, eval_cocycle, gram_matrix, hermitian_pairing,
                                        is_coboundary, make_cocycle, random_cocycle, volume_gram)


def generic(seed, g=2):
    return random_character(seed, g, radial_scale=0.5)


def test_fixture_matches_construction():
    shipped = load_genus2_fixture()
    built = genus2_twist_pair()
    assert [d.to_json() for d in shipped] == [d.to_json() for d in built]
    assert [d.name for d in shipped] == ["delta1", "delta2"]


@pytest.mark.parametrize("data", list(genus2_twist_pair()) + boundary_family(4) + transvected_family(4),
                         ids=lambda d: f"{d.name}_g{d.genus}")
def test_twists_are_torelli_and_separating(data):
    assert data.is_separating()
    assert verify_torelli(data)
    alpha = generic(3, data.genus)
    make_cocycle(alpha, twist_mu_values(alpha, data))


def test_verify_torelli_rejects_nonseparating_data():
    e1 = np.array([1, 0, 0, 0])
    bad = TwistData("bad", 2, Word.parse("a1"), {1: [(1, e1)], 2: [], 3: [], 4: []})
    assert not verify_torelli(bad)
    empty = TwistData("empty", 2, Word.parse("a1 b1 a1' b1'"), {k: [] for k in range(1, 5)})
    assert verify_torelli(empty)


def test_mu_on_partner_curve_matches_handle_product():
    first, second = load_genus2_fixture()
    alpha = character([2, 1, 3, 1])
    mu1 = twist_cocycle_mu(alpha, first)
    assert eval_cocycle(mu1, second.based_curve) == pytest.approx(1 - 2 + 2 * 3 - 3)
    # the same value as a signed sum over the classes 0, a1^-1, a1^-1 a2^-1, a2^-1
    classes = [(1, [0, 0, 0, 0]), (-1, [-1, 0, 0, 0]), (1, [-1, 0, -1, 0]), (-1, [0, 0, -1, 0])]
    assert sum(s / alpha.on_class(h) for s, h in classes) == pytest.approx(2)


def test_mu_vanishes_on_own_curve_and_on_untouched_generators():
    first, second = load_genus2_fixture()
    alpha = generic(5)
    for data in (first, second):
        mu = twist_cocycle_mu(alpha, data)
        assert abs(eval_cocycle(mu, data.based_curve)) < 1e-12
    mu2 = twist_cocycle_mu(alpha, second)
    assert mu2.values[2] == 0 and mu2.values[3] == 0


def test_action_examples():
    first, _ = load_genus2_fixture()
    alpha = generic(6)
    act = twist_action_on_Z1(alpha, first)
    rng = make_rng(6)
    lam, other = random_cocycle(alpha, rng), random_cocycle(alpha, rng)
    back = act.inverse_matrix() @ (act.matrix @ lam.values)
    assert np.allclose(back, lam.values, atol=1e-12)
    assert is_coboundary(act.apply(coboundary(alpha, 2)))
    f = act.functional
    on_curve_zero = lam.values - (f @ lam.values) / (f @ other.values) * other.values
    assert np.allclose(act.matrix @ on_curve_zero, on_curve_zero, atol=1e-12)


def test_closed_form_examples():
    M1, M2 = genus2_standard_twists(character([2, 1, 3, 1]))
    assert M1[0, 1] == pytest.approx(1 / 3)
    assert M2[1, 0] == pytest.approx(2)
    with pytest.raises(DegenerateCharacterError):
        genus2_standard_twists(character([1, 1, 3, 1]))
    M1, M2 = genus2_standard_twists(character([unit_value(0.1), 1, unit_value(0.35), 1]))
    assert M2[1, 0] == pytest.approx(np.conj(M1[0, 1]))


@pytest.mark.parametrize("seed", range(20))
def test_word_level_action_matches_closed_form(seed):
    alpha = generic(seed)
    first, second = load_genus2_fixture()
    mus = [twist_cocycle_mu(alpha, first), twist_cocycle_mu(alpha, second)]
    M1, M2 = genus2_standard_twists(alpha)
    for data, M in ((first, M1), (second, M2)):
        W = word_action_matrix(alpha, data.images)
        assert np.allclose(twist_action_on_Z1(alpha, data).matrix, W, atol=1e-10)
        assert np.abs(matrix_in_classes(W, mus) - M).max() <= 1e-10


def test_higher_genus_rep_at_genus_two_is_the_swapped_closed_form():
    swap = np.array([[0, 1], [1, 0]])
    for seed in range(20):
        alpha = generic(seed)
        rep = higher_genus_rep(alpha)
        M1, M2 = genus2_standard_twists(alpha)
        assert np.allclose(swap @ rep.generator_matrices[0] @ swap, M2)
        assert np.allclose(swap @ rep.generator_matrices[1] @ swap, M1)


def test_genus_four_blocks():
    rep = higher_genus_rep(generic(1, 4))
    gens = rep.generator_matrices
    assert len(gens) == 6 and all(M.shape == (6, 6) for M in gens)
    I = np.eye(6)
    for j, k in itertools.combinations(range(6), 2):
        if rep.handle_of(j) != rep.handle_of(k):
            assert np.array_equal(gens[j] @ gens[k], gens[k] @ gens[j])
    for M in gens:
        assert np.array_equal((M - I) @ (M - I), np.zeros((6, 6)))
        assert np.linalg.det(M) == pytest.approx(1)


def test_higher_genus_rep_refuses_degenerate_handles():
    with pytest.raises(DegenerateCharacterError):
        higher_genus_rep(character([2, 1, 1, 1, 3, 1]))


def test_block_parameters_span():
    alpha = generic(2, 3)
    rep = higher_genus_rep(alpha)
    assert rep.handle_params == [handle_parameters(alpha, i) for i in (1, 2)]
    assert np.linalg.matrix_rank(block_gram(alpha, rep)) == 4


@pytest.mark.parametrize("g", [2, 3, 4])
def test_form_identity_for_concrete_twists(g):
    alpha = random_character(g, g, law="unitary")
    rng = make_rng(g, 5)
    for data in boundary_family(g) + transvected_family(g):
        mu = twist_cocycle_mu(alpha, data)
        c = twist_form_constant(data)
        for _ in range(3):
            x = random_cocycle(alpha, rng)
            assert abs(hermitian_pairing(x, mu) - c * eval_cocycle(x, data.based_curve)) < 1e-10


@pytest.mark.parametrize("g", [2, 3, 4])
def test_concrete_twists_preserve_the_form(g):
    alpha = random_character(10 + g, g, law="unitary")
    basis = cohomology_basis(alpha)
    G = volume_gram(alpha, basis).matrix
    for data in boundary_family(g) + transvected_family(g):
        C = matrix_in_classes(word_action_matrix(alpha, data.images), basis.representatives)
        assert np.abs(C.conj().T @ G @ C - G).max() <= 1e-9 * np.abs(G).max()


def test_block_gram_is_the_concrete_gram_in_genus_two():
    alpha = random_character(21, 2, law="unitary")
    first, second = load_genus2_fixture()
    concrete = gram_matrix([twist_cocycle_mu(alpha, second), twist_cocycle_mu(alpha, first)])
    assert np.allclose(concrete, block_gram(alpha), atol=1e-12)
    assert block_gram(alpha)[0, 1] == pytest.approx(VOLUME_NORMALIZATION * handle_parameters(alpha, 1)[0])


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6))
def test_block_generators_preserve_block_gram(seed):
    alpha = random_character(seed, 3, law="unitary")
    rep = higher_genus_rep(alpha)
    G = block_gram(alpha, rep)
    for M in rep.generator_matrices:
        assert np.abs(M.conj().T @ G @ M - G).max() <= 1e-12 * max(1.0, np.abs(G).max())


def test_twist_data_json_round_trip():
    for data in transvected_family(3):
        back = TwistData.from_json(data.to_json())
        assert back.to_json() == data.to_json()
        assert not abelianize(back.based_curve, 3).any()
