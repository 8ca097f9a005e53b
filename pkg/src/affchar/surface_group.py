"""Surface groups: words, the one-relator presentation, and homology.

Generators of the genus ``g`` surface group are numbered ``1..2g`` with
``a_i -> 2i - 1`` and ``b_i -> 2i``.  A letter is a nonzero integer whose
absolute value is the generator index and whose sign is the exponent, so
``-3`` stands for ``a_2^{-1}``.  Words are immutable and always freely
reduced.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


def a(i: int) -> int:
    """Letter of the generator ``a_i``."""
    return 2 * i - 1


def b(i: int) -> int:
    """Letter of the generator ``b_i``."""
    return 2 * i


def generator_name(letter: int) -> str:
    idx = abs(letter)
    name = ("a" if idx % 2 == 1 else "b") + str((idx + 1) // 2)
    return name if letter > 0 else name + "'"


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    """Cancel adjacent ``x x^{-1}`` pairs until none remain (stack based)."""
    out: list[int] = []
    for x in letters:
        if x == 0:
            raise ValueError("0 is not a valid letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(int(x))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """A freely reduced word in the surface group generators."""

    letters: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", free_reduce(self.letters))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def inverse(self) -> "Word":
        return Word(tuple(-x for x in reversed(self.letters)))

    def conjugate_by(self, h: "Word") -> "Word":
        """Return ``h w h^{-1}``."""
        return h * self * h.inverse()

    def max_generator(self) -> int:
        return max((abs(x) for x in self.letters), default=0)

    def substitute(self, images: dict[int, "Word"]) -> "Word":
        """Apply the endomorphism sending generator ``k`` to ``images[k]``.

        Generators missing from ``images`` are left fixed.
        """
        out: list[int] = []
        for x in self.letters:
            img = images.get(abs(x))
            if img is None:
                out.append(x)
            elif x > 0:
                out.extend(img.letters)
            else:
                out.extend(img.inverse().letters)
        return Word(tuple(out))

    def __str__(self) -> str:
        return " ".join(generator_name(x) for x in self.letters)

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Parse the whitespace syntax ``"a1 b1 a1' b1'"``."""
        letters = []
        for tok in text.split():
            inverse = tok.endswith("'")
            core = tok.rstrip("'")
            if tok.count("'") > 1 or len(core) < 2 or core[0] not in "ab" or not core[1:].isdigit():
                raise ValueError(f"cannot parse generator token {tok!r}")
            i = int(core[1:])
            if i < 1:
                raise ValueError(f"handle index must be positive in {tok!r}")
            letter = a(i) if core[0] == "a" else b(i)
            letters.append(-letter if inverse else letter)
        return cls(tuple(letters))


def commutator(x: Word, y: Word) -> Word:
    """``[x, y] = x y x^{-1} y^{-1}``."""
    return x * y * x.inverse() * y.inverse()


@dataclass(frozen=True)
class Presentation:
    """The standard one-relator presentation of a closed genus ``g`` surface group."""

    genus: int
    generator_names: tuple[str, ...]
    relator: Word

    @property
    def rank(self) -> int:
        return 2 * self.genus

    def generators(self) -> list[Word]:
        return [Word((k,)) for k in range(1, self.rank + 1)]

    def handle_boundary(self, i: int) -> Word:
        """The product ``[a_1,b_1]...[a_i,b_i]``, a separating curve for ``1 <= i < g``."""
        if not 0 <= i <= self.genus:
            raise ValueError("handle index out of range")
        return Word(self.relator.letters[: 4 * i])


def make_surface_group(g: int) -> Presentation:
    if g < 2:
        raise ValueError("genus out of scope: need g >= 2")
    letters: list[int] = []
    for i in range(1, g + 1):
        letters += [a(i), b(i), -a(i), -b(i)]
    names = tuple(generator_name(k) for k in range(1, 2 * g + 1))
    return Presentation(genus=g, generator_names=names, relator=Word(tuple(letters)))


def check_genus(w: Word, genus: int) -> None:
    if w.max_generator() > 2 * genus:
        raise ValueError(f"word {w} uses generators outside genus {genus}")


def abelianize(w: Word | Sequence[int], genus: int) -> np.ndarray:
    """Signed letter counts per generator, an integer vector of length ``2g``."""
    letters = w.letters if isinstance(w, Word) else tuple(w)
    v = np.zeros(2 * genus, dtype=np.int64)
    for x in letters:
        if abs(x) > 2 * genus:
            raise ValueError(f"letter {x} outside genus {genus}")
        v[abs(x) - 1] += 1 if x > 0 else -1
    return v


def symplectic_form_matrix(genus: int) -> np.ndarray:
    """Integer matrix ``J`` with ``omega(u, v) = u^T J v``."""
    J = np.zeros((2 * genus, 2 * genus), dtype=np.int64)
    for i in range(genus):
        J[2 * i, 2 * i + 1] = 1
        J[2 * i + 1, 2 * i] = -1
    return J


def intersection_pairing(u, v):
    """``sum_i u(a_i) v(b_i) - u(b_i) v(a_i)``.

    Works for integer, float, complex or ``Fraction`` entries; the arithmetic
    is done in whatever type the inputs carry.
    """
    if len(u) != len(v):
        raise ValueError("dimension mismatch in intersection pairing")
    if len(u) % 2:
        raise ValueError("homology vectors have even length")
    total = 0
    for i in range(0, len(u), 2):
        total += u[i] * v[i + 1] - u[i + 1] * v[i]
    return total
