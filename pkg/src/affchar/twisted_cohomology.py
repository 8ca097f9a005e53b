"""Twisted cocycles, cohomology with an explicit basis, cup pairing and volume.

For a character ``alpha`` a cocycle is a map ``lam`` with
``lam(xy) = lam(x) + alpha(x) lam(y)``.  It is fixed by its values on the
generators, subject to one linear condition: its value on the relator must
vanish.  Coboundaries are the multiples of ``1 - alpha``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .characters import Character, classify_character
from .surface_group import Word, check_genus, make_surface_group

CONSTRAINT_TOL = 1e-10
RANK_GAP = 1e6

# Normalisation of the volume: v(lam) = VOLUME_NORMALIZATION * cup(lam, conj(lam)).
# With i/2 the volume is real and the Gram matrix has signature (g-1, g-1).
VOLUME_NORMALIZATION = 0.5j


class CocycleError(ValueError):
    def __init__(self, message: str, residual: complex):
        super().__init__(f"{message} (residual {residual})")
        self.residual = residual


class DegenerateCharacterError(ValueError):
    """The operation is undefined at this character."""


@dataclass(frozen=True, eq=False)
class Cocycle:
    character: Character
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128).copy()
        if v.shape != (2 * self.character.genus,):
            raise ValueError("cocycle needs one value per generator")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def genus(self) -> int:
        return self.character.genus

    def __call__(self, w: Word) -> complex:
        return eval_cocycle(self, w)

    def __add__(self, other: "Cocycle") -> "Cocycle":
        return Cocycle(self.character, self.values + other.values)

    def __sub__(self, other: "Cocycle") -> "Cocycle":
        return Cocycle(self.character, self.values - other.values)

    def scale(self, c: complex) -> "Cocycle":
        return Cocycle(self.character, c * self.values)

    def conjugate(self) -> "Cocycle":
        """Complex conjugate, a cocycle for the conjugate character."""
        return Cocycle(self.character.conjugate(), np.conj(self.values))

    def to_json(self) -> dict:
        return {"alpha": self.character.to_json(),
                "values": [{"re": float(z.real), "im": float(z.imag)} for z in self.values]}


def eval_word(values: Sequence, alpha_values: Sequence, letters: Sequence[int]):
    """Twisted evaluation of a word from generator data, left to right.

    Plain arithmetic is used, so ``Fraction`` inputs give exact results.
    Returns the pair ``(lam(w), alpha(w))``.
    """
    total = 0
    prefix = 1
    for x in letters:
        k = abs(x) - 1
        if x > 0:
            total = total + prefix * values[k]
            prefix = prefix * alpha_values[k]
        else:
            prefix = prefix / alpha_values[k]
            total = total - prefix * values[k]
    return total, prefix


def eval_cocycle(lam: Cocycle, w: Word) -> complex:
    check_genus(w, lam.genus)
    return complex(eval_word(lam.values, lam.character.values, w.letters)[0])


def relation_row(alpha: Character) -> np.ndarray:
    """Row ``r`` with ``lam(relator) = r . values``, computed letter by letter."""
    g = alpha.genus
    rel = make_surface_group(g).relator.letters
    eye = np.eye(2 * g, dtype=np.complex128)
    return np.array([eval_word(eye[j], alpha.values, rel)[0] for j in range(2 * g)])


def closed_form_relation(alpha_values: Sequence, values: Sequence):
    """``sum_i lam(a_i)(1 - alpha(b_i)) + lam(b_i)(alpha(a_i) - 1)``."""
    total = 0
    for i in range(0, len(values), 2):
        total = total + values[i] * (1 - alpha_values[i + 1]) + values[i + 1] * (alpha_values[i] - 1)
    return total


def constraint_residual(alpha: Character, values) -> complex:
    rel = make_surface_group(alpha.genus).relator.letters
    return complex(eval_word(np.asarray(values, dtype=np.complex128), alpha.values, rel)[0])


def _scale(alpha: Character, values) -> float:
    a = np.abs(alpha.values)
    return max(1.0, float(np.max(np.abs(values), initial=0.0)) * float(max(a.max(), (1 / a).max())))


def make_cocycle(alpha: Character, values, tol: float = CONSTRAINT_TOL) -> Cocycle:
    """Validate the relator constraint and build the cocycle.

    The tolerance is absolute for unit-scale data and grows with the size of
    the values and of the character.
    """
    values = np.asarray(values, dtype=np.complex128)
    if values.shape != (2 * alpha.genus,):
        raise ValueError("cocycle needs one value per generator")
    res = constraint_residual(alpha, values)
    if abs(res) > tol * _scale(alpha, values):
        raise CocycleError("values violate the cocycle constraint", res)
    return Cocycle(alpha, values)


def coboundary(alpha: Character, z: complex) -> Cocycle:
    return Cocycle(alpha, z * (1 - alpha.values))


def conjugate_action(a: complex, b: complex, lam: Cocycle) -> Cocycle:
    """Effect of conjugating by ``z -> a z + b``: ``b(1 - alpha) + a lam``."""
    if a == 0:
        raise ValueError("conjugating element needs a != 0")
    return Cocycle(lam.character, b * (1 - lam.character.values) + a * lam.values)


def random_cocycle(alpha: Character, rng: np.random.Generator) -> Cocycle:
    """Gaussian values on the free coordinates, pivot solved from the constraint."""
    r = relation_row(alpha)
    p = int(np.argmax(np.abs(r)))
    if abs(r[p]) == 0:
        raise DegenerateCharacterError("trivial character: every value tuple is a cocycle")
    v = rng.standard_normal(2 * alpha.genus) + 1j * rng.standard_normal(2 * alpha.genus)
    v[p] = 0
    v[p] = -(r @ v) / r[p]
    return Cocycle(alpha, v)


def numeric_rank(M: np.ndarray, gap: float = RANK_GAP) -> int:
    """Rank read off the largest singular-value gap of at least ``gap``.

    Without such a gap every singular value is counted as nonzero unless the
    whole matrix is negligible.
    """
    s = np.linalg.svd(np.atleast_2d(M), compute_uv=False)
    if s.size == 0 or s[0] <= 1e-300:
        return 0
    for k in range(len(s) - 1):
        if s[k + 1] == 0 or s[k] / s[k + 1] >= gap:
            return k + 1
    return int(len(s)) if s[-1] / s[0] > 1 / gap else 0


@dataclass(frozen=True, eq=False)
class CohomologyBasis:
    """Representatives completing ``1 - alpha`` to a basis of the cocycles.

    ``pivot`` is the coordinate solved from the relation, ``eliminated`` the
    coordinate used to quotient out the coboundary line, ``free`` the
    coordinates that index the representatives.
    """

    character: Character
    representatives: tuple[Cocycle, ...]
    relation: np.ndarray
    coboundary_vector: np.ndarray
    pivot: int
    eliminated: int
    free: tuple[int, ...]

    @property
    def dimension(self) -> int:
        return len(self.representatives)

    def matrix(self) -> np.ndarray:
        """Representatives as columns of a ``2g x (2g-2)`` matrix."""
        return np.column_stack([r.values for r in self.representatives])

    def coordinates(self, values) -> np.ndarray:
        v = np.asarray(values, dtype=np.complex128)
        c = self.coboundary_vector
        q = self.eliminated
        return np.array([v[j] - v[q] / c[q] * c[j] for j in self.free])

    def rank_certificate(self) -> dict:
        M = np.column_stack([self.matrix(), self.coboundary_vector])
        s = np.linalg.svd(M, compute_uv=False)
        return {"rank": numeric_rank(M), "singular_values": [float(x) for x in s]}


def cohomology_basis(alpha: Character) -> CohomologyBasis:
    g = alpha.genus
    if classify_character(alpha, tol=0.0).trivial:
        raise DegenerateCharacterError("fiber undefined at trivial character")
    r = relation_row(alpha)
    c = 1 - alpha.values
    p = int(np.argmax(np.abs(r)))
    if abs(r[p]) == 0:
        raise DegenerateCharacterError("fiber undefined at trivial character")
    rest = [j for j in range(2 * g) if j != p]
    q = max(rest, key=lambda j: (abs(c[j]), -j))
    if abs(c[q]) == 0:
        raise DegenerateCharacterError("coboundary vanishes on the free coordinates")
    free = tuple(j for j in rest if j != q)
    reps = []
    for j in free:
        v = np.zeros(2 * g, dtype=np.complex128)
        v[j] = 1
        v[p] = -r[j] / r[p]
        reps.append(Cocycle(alpha, v))
    return CohomologyBasis(alpha, tuple(reps), r, c, p, q, free)


def cohomology_class(lam: Cocycle, basis: CohomologyBasis) -> np.ndarray:
    if lam.character is not basis.character and not np.array_equal(lam.character.values, basis.character.values):
        raise ValueError("cocycle and basis live over different characters")
    return basis.coordinates(lam.values)


def cocycle_dimensions(alpha: Character) -> dict:
    """Numeric dimensions of the cocycle space and of cohomology."""
    g = alpha.genus
    r = relation_row(alpha)
    dz = 2 * g - numeric_rank(r.reshape(1, -1))
    # coboundary line inside the cocycles
    db = numeric_rank((1 - alpha.values).reshape(1, -1))
    return {"Z1": dz, "B1": db, "H1": dz - db}


def is_coboundary(lam: Cocycle, tol: float = 1e-9) -> bool:
    c = 1 - lam.character.values
    n = np.vdot(c, c).real
    if n == 0:
        return bool(np.max(np.abs(lam.values)) <= tol)
    z = np.vdot(c, lam.values) / n
    return bool(np.max(np.abs(lam.values - z * c)) <= tol * max(1.0, np.max(np.abs(lam.values))))


def cup_values(u: Sequence, alpha_values: Sequence, v: Sequence, beta_values: Sequence,
               relator: Sequence[int]):
    """Cup product of two cocycles evaluated on the fundamental class.

    ``u`` is a cocycle for ``alpha`` and ``v`` one for ``beta``.  The cochain
    ``(g, h) -> u(g) beta(g) v(h)`` is paired with the 2-chain read off the
    relator: a letter ``x`` after prefix ``p`` contributes ``[p | x]`` and a
    letter ``x^{-1}`` ending at prefix ``p`` contributes ``-[p | x]``.  Plain
    arithmetic is used so rational inputs give exact values.
    """
    total = 0
    u_p = 0
    a_p = 1
    b_p = 1
    for x in relator:
        k = abs(x) - 1
        if x > 0:
            total = total + u_p * b_p * v[k]
            u_p = u_p + a_p * u[k]
            a_p = a_p * alpha_values[k]
            b_p = b_p * beta_values[k]
        else:
            a_p = a_p / alpha_values[k]
            b_p = b_p / beta_values[k]
            u_p = u_p - a_p * u[k]
            total = total - u_p * b_p * v[k]
    return total


def cup_pairing(u: Cocycle, v: Cocycle) -> complex:
    if u.genus != v.genus:
        raise ValueError("genus mismatch in cup pairing")
    rel = make_surface_group(u.genus).relator.letters
    return complex(cup_values(u.values, u.character.values, v.values, v.character.values, rel))


def classical_intersection(u: Sequence, v: Sequence):
    """``sum_i u(a_i) v(b_i) - u(b_i) v(a_i)``, the untwisted cup product."""
    total = 0
    for i in range(0, len(u), 2):
        total = total + u[i] * v[i + 1] - u[i + 1] * v[i]
    return total


def _require_unitary(alpha: Character, tol: float = 1e-9) -> None:
    flags = classify_character(alpha, tol)
    if not flags.unitary:
        raise DegenerateCharacterError("volume needs a unitary character")
    if flags.trivial:
        raise DegenerateCharacterError("volume undefined at the trivial character")


def hermitian_pairing(x: Cocycle, y: Cocycle) -> complex:
    """``H(x, y) = N cup(x, conj y)``, linear in ``x`` and antilinear in ``y``."""
    return VOLUME_NORMALIZATION * cup_pairing(x, y.conjugate())


def volume(lam: Cocycle) -> float:
    _require_unitary(lam.character)
    return float(hermitian_pairing(lam, lam).real)


@dataclass(frozen=True, eq=False)
class HermitianGram:
    character: Character
    matrix: np.ndarray

    def hermitian_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))


def gram_matrix(vectors: Sequence[Cocycle]) -> np.ndarray:
    """``G[j, k] = H(vectors[k], vectors[j])`` so that ``v(sum c_k x_k) = c^* G c``."""
    n = len(vectors)
    G = np.empty((n, n), dtype=np.complex128)
    for j in range(n):
        for k in range(n):
            G[j, k] = hermitian_pairing(vectors[k], vectors[j])
    return G


def volume_gram(alpha: Character, basis: CohomologyBasis | None = None) -> HermitianGram:
    _require_unitary(alpha)
    basis = basis or cohomology_basis(alpha)
    return HermitianGram(alpha, gram_matrix(basis.representatives))


def signature(H, tol: float = 1e-9, herm_tol: float = 1e-10) -> tuple[int, int, int]:
    """Counts of positive, negative and near-zero eigenvalues."""
    M = H.matrix if isinstance(H, HermitianGram) else np.asarray(H)
    scale = max(1.0, float(np.max(np.abs(M), initial=0.0)))
    if np.max(np.abs(M - M.conj().T), initial=0.0) > herm_tol * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    ev = np.linalg.eigvalsh((M + M.conj().T) / 2)
    pos = int(np.sum(ev > tol))
    neg = int(np.sum(ev < -tol))
    return pos, neg, len(ev) - pos - neg
