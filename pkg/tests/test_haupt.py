import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from affchar.dynamics import sp_generators
from affchar.haupt import (FAILS_LATTICE_VOLUME, FAILS_POSITIVITY, REALIZABLE, PeriodCharacter, detect_lattice,
                           gauss_reduce, haupt_check, integer_row_basis, symplectic_volume)

I = (0, 1)

fractions = st.fractions(min_value=-6, max_value=6, max_denominator=6)
gaussian = st.tuples(fractions, fractions)
periods = st.lists(gaussian, min_size=4, max_size=4).map(PeriodCharacter.from_exact)


def test_volume_examples():
    assert symplectic_volume(PeriodCharacter.from_exact([1, I, 1, I])) == 2
    assert symplectic_volume(PeriodCharacter.from_exact([1, 2, Fraction(1, 2), 7])) == 0
    w = PeriodCharacter.from_complex([1 + 2j, 0.5 - 1j, 3j, 2])
    wbar = PeriodCharacter.from_complex(np.conj(w.values))
    assert symplectic_volume(w) == pytest.approx(-symplectic_volume(wbar))


def test_lattice_examples():
    info = detect_lattice(PeriodCharacter.from_exact([1, I, I, 1]))
    assert info.is_lattice and info.covolume == 1 and not info.heuristic
    info = detect_lattice(PeriodCharacter.from_exact([1, Fraction(1, 2), 0, 1]))
    assert not info.is_lattice and info.rank == 1
    info = detect_lattice(PeriodCharacter.from_complex([1, np.sqrt(2), 1j, 0]))
    assert not info.is_lattice and info.heuristic


def test_float_lattice_fit_is_flagged():
    info = detect_lattice(PeriodCharacter.from_complex([1, 0.5 + 0.25j, 1j, 0]))
    assert info.is_lattice and info.heuristic and info.covolume == pytest.approx(0.25)


def test_haupt_fixtures():
    assert haupt_check(PeriodCharacter.from_exact([1, I, 1, I])).status == REALIZABLE
    v = haupt_check(PeriodCharacter.from_exact([1, I, 0, 0]))
    assert v.status == FAILS_LATTICE_VOLUME and v.volume == 1 and v.lattice.covolume == 1
    assert haupt_check(PeriodCharacter.from_exact([1, 2, 3, 4])).status == FAILS_POSITIVITY


def test_genus_one_refused():
    with pytest.raises(ValueError):
        haupt_check(PeriodCharacter.from_exact([1, I]))


def _minor_gcd(vectors):
    """Covolume of the span of integer vectors: the gcd of all 2x2 minors."""
    g = 0
    for u, v in itertools.combinations(vectors, 2):
        g = math.gcd(g, u[0] * v[1] - u[1] * v[0])
    return g


@given(st.lists(st.tuples(st.integers(-9, 9), st.integers(-9, 9)), min_size=1, max_size=5))
def test_integer_basis_against_minor_gcd(vectors):
    basis = integer_row_basis(vectors)
    rank = int(np.linalg.matrix_rank(np.array(vectors, dtype=float)))
    assert len(basis) == rank
    if rank == 2:
        u, v = basis
        assert abs(u[0] * v[1] - u[1] * v[0]) == _minor_gcd(vectors)


@given(st.tuples(st.integers(-9, 9), st.integers(-9, 9)), st.tuples(st.integers(-9, 9), st.integers(-9, 9)))
def test_gauss_reduction_keeps_lattice_and_reduces(u, v):
    det = u[0] * v[1] - u[1] * v[0]
    if det == 0:
        return
    r, s = gauss_reduce(u, v)
    assert abs(r[0] * s[1] - r[1] * s[0]) == abs(det)
    n = r[0] ** 2 + r[1] ** 2
    assert n <= s[0] ** 2 + s[1] ** 2
    assert 2 * abs(r[0] * s[0] + r[1] * s[1]) <= n


@given(periods)
def test_values_lie_in_the_detected_lattice(omega):
    info = detect_lattice(omega)
    if not info.is_lattice:
        return
    (p, q), (r, s) = info.basis
    assert info.covolume == abs(p * s - q * r)
    det = p * s - q * r
    for x, y in omega.exact:
        m = (x * s - y * r) / det
        n = (p * y - q * x) / det
        assert m.denominator == 1 and n.denominator == 1


@given(periods, st.tuples(fractions, fractions))
def test_lattice_answer_invariant_under_scaling(omega, c):
    if c == (0, 0):
        return
    assert detect_lattice(omega).is_lattice == detect_lattice(omega.scaled(c)).is_lattice


@given(periods, st.fractions(min_value=Fraction(1, 10), max_value=10))
def test_verdict_invariant_under_positive_scaling(omega, c):
    assert haupt_check(omega).status == haupt_check(omega.scaled(c)).status


@settings(max_examples=30)
@given(periods, st.lists(st.integers(0, 4), min_size=1, max_size=6))
def test_volume_invariant_under_symplectic_moves(omega, path):
    gens = sp_generators(2)
    re, im = omega.real_part(), omega.imag_part()
    for k in path:
        M = gens[k]
        re = [sum(int(M[i, j]) * re[j] for j in range(4)) for i in range(4)]
        im = [sum(int(M[i, j]) * im[j] for j in range(4)) for i in range(4)]
    moved = PeriodCharacter.from_exact(list(zip(re, im)))
    assert symplectic_volume(moved) == symplectic_volume(omega)


def test_json_round_trip():
    omega = PeriodCharacter.from_exact([(Fraction(1, 3), 2), I, 0, (5, Fraction(-1, 7))])
    back = PeriodCharacter.from_json(omega.to_json())
    assert back.exact == omega.exact
    with pytest.raises(ValueError):
        PeriodCharacter.from_json({"genus": 3, "mode": "exact", "values": [{"re": "1"}] * 4})
