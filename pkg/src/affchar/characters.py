"""Characters of the surface group into the multiplicative group of C.

A character is stored by its values on the generators ``a_1, b_1, ...``.
Two numeric modes exist.  Floating characters carry complex values only.
Exact characters additionally carry, for every generator, a positive
rational modulus and an argument written as a turn (a fraction of a full
rotation); a turn of ``None`` marks an argument known to be an irrational
multiple of a full turn.  Only exact characters can answer whether they are
almost real.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .rng import make_rng
from .surface_group import Word, abelianize, check_genus

DEFAULT_TOL = 1e-9


class UndecidableError(ValueError):
    """Raised when a question has no answer in floating mode."""


@dataclass(frozen=True)
class ExactValue:
    """``modulus * exp(2 pi i turn)`` with rational modulus and turn."""

    modulus: Fraction
    turn: Optional[Fraction]
    approx_turn: float = 0.0

    def __post_init__(self):
        if self.modulus <= 0:
            raise ValueError("modulus must be positive")
        if self.turn is not None:
            object.__setattr__(self, "turn", Fraction(self.turn) % 1)

    @property
    def angle_turn(self) -> float:
        return float(self.turn) if self.turn is not None else self.approx_turn

    def to_complex(self) -> complex:
        theta = 2.0 * math.pi * self.angle_turn
        return float(self.modulus) * complex(math.cos(theta), math.sin(theta))

    def to_json(self) -> dict:
        if self.turn is None:
            return {"mod": str(self.modulus), "arg": "irrational", "approx": self.approx_turn}
        return {"mod": str(self.modulus), "arg": str(self.turn)}


@dataclass(frozen=True)
class ClassificationFlags:
    trivial: bool
    unitary: bool
    real: bool
    almost_real: Optional[bool] = None


@dataclass(frozen=True, eq=False)
class Character:
    """A homomorphism from the surface group to ``C^*``."""

    genus: int
    values: np.ndarray
    exact: Optional[tuple[ExactValue, ...]] = None

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128).copy()
        if vals.shape != (2 * self.genus,):
            raise ValueError(f"expected {2 * self.genus} values, got shape {vals.shape}")
        if np.any(vals == 0):
            raise ValueError("character values must be nonzero")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if self.exact is not None and len(self.exact) != 2 * self.genus:
            raise ValueError("exact data has the wrong length")

    @property
    def mode(self) -> str:
        return "float" if self.exact is None else "exact"

    @classmethod
    def from_exact(cls, genus: int, exact: Sequence[ExactValue]) -> "Character":
        exact = tuple(exact)
        return cls(genus, np.array([e.to_complex() for e in exact]), exact)

    def inverse(self) -> "Character":
        ex = None
        if self.exact is not None:
            ex = tuple(ExactValue(1 / e.modulus, None if e.turn is None else -e.turn, -e.approx_turn)
                       for e in self.exact)
        return Character(self.genus, 1.0 / self.values, ex)

    def conjugate(self) -> "Character":
        return Character(self.genus, np.conj(self.values))

    def on_class(self, h) -> complex:
        """Evaluate on an integer homology vector."""
        h = np.asarray(h, dtype=np.int64)
        return complex(np.prod(self.values ** h))

    def __call__(self, w: Word) -> complex:
        return eval_character(self, w)

    def to_json(self) -> dict:
        if self.exact is not None:
            return {"genus": self.genus, "mode": "exact", "values": [e.to_json() for e in self.exact]}
        return {"genus": self.genus, "mode": "float",
                "values": [{"re": float(z.real), "im": float(z.imag)} for z in self.values]}

    @classmethod
    def from_json(cls, data: dict) -> "Character":
        try:
            genus = int(data["genus"])
            mode = data.get("mode", "float")
            raw = data["values"]
            if mode == "float":
                return cls(genus, np.array([complex(float(v["re"]), float(v.get("im", 0.0))) for v in raw]))
            if mode == "exact":
                vals = []
                for v in raw:
                    if v["arg"] == "irrational":
                        vals.append(ExactValue(Fraction(v["mod"]), None, float(v["approx"])))
                    else:
                        vals.append(ExactValue(Fraction(v["mod"]), Fraction(v["arg"])))
                return cls.from_exact(genus, vals)
        except (KeyError, TypeError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed character JSON: {exc!r}") from exc
        raise ValueError(f"unknown character mode {mode!r}")


def character(values: Sequence[complex]) -> Character:
    """Floating character from a flat list of generator values."""
    values = list(values)
    if len(values) % 2:
        raise ValueError("need an even number of values")
    return Character(len(values) // 2, np.array(values, dtype=np.complex128))


def trivial_character(genus: int) -> Character:
    return Character(genus, np.ones(2 * genus, dtype=np.complex128))


def eval_character(alpha: Character, w: Word) -> complex:
    """Value of the character on a word; only the abelianization matters."""
    check_genus(w, alpha.genus)
    return alpha.on_class(abelianize(w, alpha.genus))


def classify_character(alpha: Character, tol: float = DEFAULT_TOL) -> ClassificationFlags:
    if alpha.exact is not None:
        ex = alpha.exact
        unitary = all(e.modulus == 1 for e in ex)
        real = all(e.turn is not None and e.turn in (0, Fraction(1, 2)) for e in ex)
        trivial = unitary and all(e.turn == 0 for e in ex)
        almost_real = all(e.turn is not None for e in ex)
        return ClassificationFlags(trivial, unitary, real, almost_real)
    v = alpha.values
    trivial = bool(np.all(np.abs(v - 1) <= tol))
    unitary = bool(np.all(np.abs(np.abs(v) - 1) <= tol))
    real = bool(np.all(np.abs(v.imag) <= tol))
    return ClassificationFlags(trivial, unitary, real, None)


def is_almost_real(alpha: Character) -> bool:
    """Some finite index subgroup maps into the nonzero reals.

    Equivalent to every argument being a rational multiple of a full turn,
    which can only be read off exact data.
    """
    if alpha.exact is None:
        raise UndecidableError("almost-real is undecidable in floating mode")
    return bool(classify_character(alpha).almost_real)


@dataclass(frozen=True, eq=False)
class AffineRepresentation:
    """``rho(g) = z -> alpha(g) z + lambda(g)`` on each generator."""

    character: Character
    translation: np.ndarray = field(default=None)

    def __post_init__(self):
        t = np.asarray(self.translation, dtype=np.complex128)
        if t.shape != (2 * self.character.genus,):
            raise ValueError("translation part has the wrong length")
        object.__setattr__(self, "translation", t)

    def generator_matrices(self) -> list[np.ndarray]:
        """Each generator as the 2x2 matrix ``[[A, U], [0, 1]]``."""
        return [np.array([[A, U], [0.0, 1.0]]) for A, U in zip(self.character.values, self.translation)]


@dataclass(frozen=True)
class RepresentationFlags:
    abelian: bool
    unitary: bool
    real: bool
    almost_real: Optional[bool]
    strictly_affine: Optional[bool]


def classify_representation(rho: AffineRepresentation, tol: float = DEFAULT_TOL) -> RepresentationFlags:
    """Flags of an affine representation.

    ``strictly_affine`` means nonabelian, not unitary and not almost real.  It
    is ``None`` when that depends on the undecidable almost-real flag.
    """
    from .twisted_cohomology import is_coboundary, make_cocycle

    alpha = rho.character
    lam = make_cocycle(alpha, rho.translation, tol=max(tol, 1e-10))
    flags = classify_character(alpha, tol)
    abelian = flags.trivial or is_coboundary(lam, tol=tol)
    if abelian or flags.unitary or flags.almost_real:
        strictly = False
    elif flags.almost_real is None:
        strictly = None
    else:
        strictly = True
    return RepresentationFlags(abelian, flags.unitary, flags.real, flags.almost_real, strictly)


def torus_coordinates(alpha: Character) -> tuple[np.ndarray, np.ndarray]:
    """Turns in ``[0, 1)`` and log-moduli of the generator values."""
    v = alpha.values
    turns = np.mod(np.angle(v) / (2 * np.pi), 1.0)
    turns = np.where(turns >= 1.0, 0.0, turns)
    return turns, np.log(np.abs(v))


def from_torus_coordinates(turns, logs) -> Character:
    turns = np.asarray(turns, dtype=float)
    logs = np.asarray(logs, dtype=float)
    return character(np.exp(logs) * np.exp(2j * np.pi * turns))


def set_U_product(alpha: Character) -> complex:
    """``(1 - A_1)(1 - A_2)(1 - 1/A_1)(1 - 1/A_2)`` for ``A_i = alpha(a_i)``."""
    if alpha.genus != 2:
        raise ValueError("the set U is defined in genus 2 only")
    A1, A2 = alpha.values[0], alpha.values[2]
    return complex((1 - A1) * (1 - A2) * (1 - 1 / A1) * (1 - 1 / A2))


def in_set_U(alpha: Character, tol: float = DEFAULT_TOL) -> bool:
    P = set_U_product(alpha)
    return bool(abs(P) < 1 and abs(P.imag) > tol)


def default_handle_classes(genus: int, i: int) -> tuple[np.ndarray, np.ndarray]:
    """Homology classes attached to handle ``i``: ``[a_i]`` and ``[a_{i+1}]``."""
    if not 1 <= i <= genus - 1:
        raise ValueError(f"handle index {i} out of range 1..{genus - 1}")
    x = np.zeros(2 * genus, dtype=np.int64)
    y = np.zeros(2 * genus, dtype=np.int64)
    x[2 * i - 2] = 1
    y[2 * i] = 1
    return x, y


def handle_parameters(alpha: Character, i: int, classes=None) -> tuple[complex, complex]:
    """``t = (1 - alpha(x))(1 - alpha(y))`` and ``s = (1 - 1/alpha(x))(1 - 1/alpha(y))``.

    ``classes`` overrides the default pair ``(x, y)`` of handle ``i``.
    """
    if not 1 <= i <= alpha.genus - 1:
        raise ValueError(f"handle index {i} out of range 1..{alpha.genus - 1}")
    x, y = classes if classes is not None else default_handle_classes(alpha.genus, i)
    X, Y = alpha.on_class(x), alpha.on_class(y)
    return (1 - X) * (1 - Y), (1 - 1 / X) * (1 - 1 / Y)


def random_character(seed: int, genus: int, law: str = "torus-gaussian", stream_id: int = 0,
                     radial_scale: float = 1.0) -> Character:
    """Seeded random character.

    ``law="torus-gaussian"``: uniform turn and centred gaussian log-modulus.
    ``law="unitary"``: uniform turn on the unit circle.
    """
    rng = make_rng(seed, stream_id)
    turns = rng.random(2 * genus)
    theta = 2 * np.pi * turns
    unit = np.cos(theta) + 1j * np.sin(theta)
    if law == "unitary":
        return Character(genus, unit)
    if law == "torus-gaussian":
        return Character(genus, np.exp(radial_scale * rng.standard_normal(2 * genus)) * unit)
    raise ValueError(f"unknown law {law!r}")


def unit_value(turn: float) -> complex:
    return cmath.exp(2j * math.pi * turn)
