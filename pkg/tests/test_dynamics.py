from collections import deque
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from affchar.characters import character, unit_value
from affchar.dehn_twist import genus2_standard_twists
from affchar.dynamics import (ELEMENTARY, INCONCLUSIVE, N_CELLS, NONDISCRETE, WalkConfig, cell_total_variation,
                              closure_hint, commutator_trace_elementary, cp1_cells, elementary_pair,
                              equidistribution_stat, jorgensen_value, nondiscreteness_hint, projective_walk,
                              sp_generators, sp_walk, symplectic_inverse)
from affchar.rng import make_rng
from affchar.surface_group import symplectic_form_matrix

U_FIXTURE = character([1 + 0.5j, 1, 1 + 1j / 3, 1])
complexes = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


def test_jorgensen_examples():
    I = np.eye(2)
    assert jorgensen_value(I, I) == 0
    A, B = elementary_pair(1 / 3, 2)
    assert jorgensen_value(A, B) == pytest.approx(4 / 9, abs=1e-15)
    R = np.array([[0, -1], [1, 0]])
    assert jorgensen_value(R, I) == pytest.approx(4)
    with pytest.raises(ValueError):
        jorgensen_value(2 * I, I)


def test_hint_examples():
    assert nondiscreteness_hint(Fraction(1, 3), 2) == NONDISCRETE
    assert nondiscreteness_hint(0, 5) == ELEMENTARY
    assert nondiscreteness_hint(2, 2) == INCONCLUSIVE
    assert nondiscreteness_hint((Fraction(1, 2), Fraction(1, 2)), (1, 0)) == NONDISCRETE
    assert nondiscreteness_hint(1, 1) == INCONCLUSIVE


@given(complexes, complexes)
def test_trace_identity(a, b):
    lhs = commutator_trace_elementary(a, b)
    rhs = 2 + (a * b) ** 2
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs)) * 4


@settings(max_examples=50)
@given(complexes, complexes, st.integers(0, 10 ** 6))
def test_jorgensen_conjugation_invariance(a, b, seed):
    rng = make_rng(seed)
    P = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    P /= np.sqrt(np.linalg.det(P))
    Pi = np.linalg.inv(P)
    A, B = elementary_pair(a, b)
    j0 = jorgensen_value(A, B)
    j1 = jorgensen_value(P @ A @ Pi, P @ B @ Pi, tol=1e-8)
    scale = max(1.0, np.linalg.cond(P)) ** 2
    assert abs(j0 - j1) <= 1e-9 * max(1.0, j0) * scale


def test_closure_hint_examples():
    al = character([unit_value(0.1), 1, unit_value(0.27), 1])
    # frozen: seed 0, unitary character with t s real
    assert closure_hint(list(genus2_standard_twists(al))) == "real_form_like"
    assert closure_hint([np.array([[1, 2], [0, 1]]), np.array([[1, 0], [3, 1]])]) == "real_form_like"
    assert closure_hint([np.eye(2)]) == "undetermined"
    R = np.array([[unit_value(0.1), 0], [0, unit_value(-0.1)]])
    S = np.array([[np.cos(0.3), -np.sin(0.3)], [np.sin(0.3), np.cos(0.3)]], dtype=complex)
    assert closure_hint([R, S]) == "unitary_like"
    assert closure_hint(list(genus2_standard_twists(U_FIXTURE))) == "full_SL2C_like"


def test_cells_have_equal_measure():
    rng = make_rng(1)
    P = rng.standard_normal((200000, 2)) + 1j * rng.standard_normal((200000, 2))
    counts = np.bincount(cp1_cells(P), minlength=N_CELLS) / len(P)
    assert np.abs(counts - 1 / N_CELLS).max() < 0.0015


def test_statistic_examples():
    assert equidistribution_stat(np.tile([1, 0], (50, 1))) == pytest.approx(1 - 1 / 200)
    antipodal = np.array([[1, 0], [0, 1]] * 10)
    assert equidistribution_stat(antipodal) == pytest.approx(1 / 2 - 1 / 200)
    assert cell_total_variation(antipodal) == pytest.approx(1 - 2 / 200)
    rng = make_rng(2024, 3)
    P = rng.standard_normal((100000, 2)) + 1j * rng.standard_normal((100000, 2))
    # frozen on first run
    assert equidistribution_stat(P) == pytest.approx(0.00063, abs=1e-12)
    assert cell_total_variation(P) == pytest.approx(0.01916, abs=1e-12)


def test_torus_statistic():
    rng = make_rng(4)
    assert equidistribution_stat(rng.random((50000, 4)), "torus") < 0.01
    assert equidistribution_stat(np.zeros((10, 4)), "torus") == pytest.approx(1 - 1 / 200)
    with pytest.raises(ValueError):
        equidistribution_stat(np.zeros((3, 2)), "sphere")


def test_identity_walk_stays_put():
    rec = projective_walk([np.eye(2)], [0.6, 0.8j], WalkConfig(1, 500))
    assert np.allclose(rec.points, rec.points[0])
    assert rec.stats["equidistribution"] == pytest.approx(1 - 1 / 200)


def test_walk_is_projective():
    M1, M2 = genus2_standard_twists(U_FIXTURE)
    cfg = WalkConfig(7, 300)
    a = projective_walk([M1, M2], [1, 2j], cfg)
    b = projective_walk([3j * M1, -0.5 * M2], [2, 4j], cfg)
    assert np.allclose(a.points, b.points, atol=1e-10)


def test_walk_regression():
    M1, M2 = genus2_standard_twists(U_FIXTURE)
    rec = projective_walk([M1, M2], [1, 1], WalkConfig(2024, 100000))
    assert rec.stats["visited_cells"] == 200
    # frozen on first run
    assert rec.stats["equidistribution"] == pytest.approx(0.00863, abs=1e-12)
    control = projective_walk([M1], [1, 1], WalkConfig(2024, 100000))
    assert control.stats["equidistribution"] == pytest.approx(0.61221, abs=1e-12)


def test_summaries_are_deterministic():
    M1, M2 = genus2_standard_twists(U_FIXTURE)
    s1 = projective_walk([M1, M2], [1, 0], WalkConfig(5, 2000)).summary()
    s2 = projective_walk([M1, M2], [1, 0], WalkConfig(5, 2000)).summary()
    assert s1 == s2
    assert s1["prng"] == "philox4x64-v1"


@pytest.mark.parametrize("g", [1, 2, 3])
def test_sp_generators_are_symplectic(g):
    J = symplectic_form_matrix(g)
    for M in sp_generators(g):
        assert np.array_equal(M.T @ J @ M, J)
        assert round(np.linalg.det(M)) == 1
        assert np.array_equal(symplectic_inverse(M) @ M, np.eye(2 * g, dtype=int))


def test_genus_one_generators_are_the_elementary_matrices():
    gens = {tuple(M.ravel()) for M in sp_generators(1)}
    assert gens == {(1, -1, 0, 1), (1, 0, 1, 1)}


def _generated_group_size(gens, p):
    n = gens[0].shape[0]
    start = tuple(np.eye(n, dtype=int).ravel() % p)
    seen = {start}
    queue = deque([start])
    while queue:
        M = np.array(queue.popleft()).reshape(n, n)
        for G in gens:
            N = tuple((M @ G % p).ravel())
            if N not in seen:
                seen.add(N)
                queue.append(N)
    return len(seen)


def test_generators_reach_all_of_sp4_mod_2():
    # |Sp(4, F_2)| = 720 and |SL(2, F_3)| = 24
    assert _generated_group_size(sp_generators(2), 2) == 720
    assert _generated_group_size(sp_generators(1), 3) == 24


def test_sp_walk_exact_examples():
    rec = sp_walk([1, 0, 0, 0], [0, 1, 0, 0], WalkConfig(3, 2000), exact=True)
    assert rec.stats["omega"] == "1" and rec.stats["max_drift"] == "0"
    rec = sp_walk([1, 2, 3, 4], [0, 0, 0, 0], WalkConfig(3, 500), exact=True)
    assert rec.stats["omega"] == "0" and rec.stats["max_drift"] == "0"


@settings(max_examples=20, deadline=None)
@given(st.lists(st.fractions(max_denominator=50), min_size=4, max_size=4),
       st.lists(st.fractions(max_denominator=50), min_size=4, max_size=4), st.integers(0, 10 ** 6))
def test_sp_walk_conserves_exactly(x, y, seed):
    rec = sp_walk(x, y, WalkConfig(seed, 200), exact=True)
    assert rec.stats["max_drift"] == "0"


def test_sp_walk_float_fixture():
    rec = sp_walk([0.3, 0.1, 0.7, 0.2], [0.5, 0.9, 0.4, 0.6], WalkConfig(2024, 10000))
    assert rec.stats["max_relative_drift"] <= 1e-9
    assert rec.stats["log_norm_growth"] == pytest.approx(1808.7207479192691, rel=1e-9)
    assert rec.stats["equidistribution"] < 0.05


def test_walk_config_validation():
    with pytest.raises(ValueError):
        WalkConfig(1, 0)
    with pytest.raises(ValueError):
        WalkConfig(1, 10, record_every=0)
