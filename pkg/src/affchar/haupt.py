"""Realizability of period characters by translation surfaces.

A period character assigns a complex number to each generator ``a_1, b_1,
...`` of first homology.  It is realizable by a holomorphic one-form when

* the symplectic volume ``sum Re w(a_i) Im w(b_i) - Re w(b_i) Im w(a_i)`` is
  strictly positive, and
* if the values generate a lattice ``L`` in ``C``, that volume strictly
  exceeds the covolume of ``L``.

Exact mode stores Gaussian rationals as pairs of ``Fraction``; the lattice
question is then decided exactly.  Floating mode can only guess.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

GaussianRational = tuple[Fraction, Fraction]

REALIZABLE = "realizable"
FAILS_POSITIVITY = "fails_positivity"
FAILS_LATTICE_VOLUME = "fails_lattice_volume"

# Floating lattice fit: largest denominator tried when rationalising values.
FLOAT_MAX_DENOMINATOR = 1000


def _gaussian(z) -> GaussianRational:
    if isinstance(z, tuple):
        return Fraction(z[0]), Fraction(z[1])
    if isinstance(z, complex):
        raise TypeError("complex floats are not exact; pass (re, im) fractions")
    return Fraction(z), Fraction(0)


@dataclass(frozen=True, eq=False)
class PeriodCharacter:
    """Values of a class in ``H^1(S, C)`` on ``a_1, b_1, ..., a_g, b_g``."""

    genus: int
    values: np.ndarray
    exact: Optional[tuple[GaussianRational, ...]] = None

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128).copy()
        if vals.shape != (2 * self.genus,):
            raise ValueError(f"expected {2 * self.genus} values, got shape {vals.shape}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if self.exact is not None and len(self.exact) != 2 * self.genus:
            raise ValueError("exact data has the wrong length")

    @property
    def mode(self) -> str:
        return "float" if self.exact is None else "exact"

    @classmethod
    def from_exact(cls, values: Sequence) -> "PeriodCharacter":
        """Build from ints, ``Fraction`` or ``(re, im)`` pairs of them."""
        ex = tuple(_gaussian(z) for z in values)
        if len(ex) % 2:
            raise ValueError("need an even number of values")
        return cls(len(ex) // 2, np.array([complex(float(r), float(i)) for r, i in ex]), ex)

    @classmethod
    def from_complex(cls, values: Sequence[complex]) -> "PeriodCharacter":
        values = list(values)
        if len(values) % 2:
            raise ValueError("need an even number of values")
        return cls(len(values) // 2, np.array(values, dtype=np.complex128))

    def scaled(self, c) -> "PeriodCharacter":
        """Multiply every value by ``c`` (a Gaussian rational in exact mode)."""
        if self.exact is None:
            return PeriodCharacter(self.genus, self.values * complex(c))
        cr, ci = _gaussian(c)
        return PeriodCharacter.from_exact([(r * cr - i * ci, r * ci + i * cr) for r, i in self.exact])

    def real_part(self) -> list:
        if self.exact is not None:
            return [r for r, _ in self.exact]
        return list(self.values.real)

    def imag_part(self) -> list:
        if self.exact is not None:
            return [i for _, i in self.exact]
        return list(self.values.imag)

    def to_json(self) -> dict:
        if self.exact is not None:
            return {"genus": self.genus, "mode": "exact",
                    "values": [{"re": str(r), "im": str(i)} for r, i in self.exact]}
        return {"genus": self.genus, "mode": "float",
                "values": [{"re": float(z.real), "im": float(z.imag)} for z in self.values]}

    @classmethod
    def from_json(cls, data: dict) -> "PeriodCharacter":
        try:
            genus = int(data["genus"])
            mode = data.get("mode", "float")
            raw = data["values"]
            if mode == "exact":
                omega = cls.from_exact([(Fraction(str(v["re"])), Fraction(str(v.get("im", "0")))) for v in raw])
            elif mode == "float":
                omega = cls.from_complex([complex(float(v["re"]), float(v.get("im", 0.0))) for v in raw])
            else:
                raise ValueError(f"unknown period mode {mode!r}")
        except (KeyError, TypeError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed period JSON: {exc!r}") from exc
        if omega.genus != genus:
            raise ValueError(f"genus {genus} does not match {len(raw)} values")
        return omega


@dataclass(frozen=True)
class LatticeInfo:
    """Outcome of lattice detection.

    ``basis`` is a reduced basis ``(z1, z2)`` and ``covolume`` equals
    ``|Im(conj(z1) z2)|``, both only when ``is_lattice``.  ``heuristic`` marks
    answers obtained from floating data.
    """

    is_lattice: bool
    rank: int
    basis: Optional[tuple] = None
    covolume: Optional[Union[Fraction, float]] = None
    heuristic: bool = False
    note: str = ""

    def to_json(self) -> dict:
        out = {"is_lattice": self.is_lattice, "rank": self.rank, "heuristic": self.heuristic}
        if self.basis is not None:
            out["basis"] = [_complex_json(z) for z in self.basis]
            out["covolume"] = _scalar_json(self.covolume)
        if self.note:
            out["note"] = self.note
        return out


def _scalar_json(x):
    return str(x) if isinstance(x, Fraction) else float(x)


def _complex_json(z):
    if isinstance(z, tuple):
        return {"re": str(z[0]), "im": str(z[1])}
    return {"re": float(z.real), "im": float(z.imag)}


@dataclass(frozen=True)
class HauptVerdict:
    status: str
    volume: Union[Fraction, float]
    lattice: LatticeInfo

    @property
    def realizable(self) -> bool:
        return self.status == REALIZABLE

    def to_json(self) -> dict:
        return {"status": self.status, "volume": _scalar_json(self.volume), "lattice": self.lattice.to_json()}


def symplectic_volume(omega: PeriodCharacter):
    """Intersection pairing of ``Re w`` with ``Im w``; a ``Fraction`` in exact mode."""
    re, im = omega.real_part(), omega.imag_part()
    total = Fraction(0) if omega.exact is not None else 0.0
    for i in range(omega.genus):
        total += re[2 * i] * im[2 * i + 1] - re[2 * i + 1] * im[2 * i]
    return total


# ------------------------------------------------------------ integer lattices

def integer_row_basis(vectors: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis of the subgroup of ``Z^2`` spanned by ``vectors``.

    Euclidean elimination on the first coordinate leaves one vector with a
    nonzero first entry (the gcd) and a remainder group on the second axis,
    itself cyclic.  The result has length equal to the rank.
    """
    pivot: Optional[list[int]] = None
    second = 0
    for x, y in vectors:
        v = [int(x), int(y)]
        if pivot is None:
            if v[0] != 0:
                pivot = v
                continue
        else:
            while v[0] != 0:
                q = pivot[0] // v[0]
                pivot, v = v, [pivot[0] - q * v[0], pivot[1] - q * v[1]]
        second = math.gcd(second, v[1])
    basis = []
    if pivot is not None:
        if pivot[0] < 0:
            pivot = [-pivot[0], -pivot[1]]
        if second:
            pivot[1] %= second
        basis.append(pivot)
    if second:
        basis.append([0, second])
    return basis


def gauss_reduce(u: Sequence[int], v: Sequence[int]):
    """Lagrange-Gauss reduction of a basis of a rank-2 lattice in ``Z^2``.

    Returns ``(u, v)`` with ``|u| <= |v|`` and ``|<u, v>| <= |u|^2 / 2``.
    """
    u, v = list(u), list(v)

    def dot(p, q):
        return p[0] * q[0] + p[1] * q[1]

    if dot(u, u) > dot(v, v):
        u, v = v, u
    while True:
        n = dot(u, u)
        # round(<u,v>/|u|^2) with exact integer arithmetic
        q = (2 * dot(u, v) + n) // (2 * n)
        v = [v[0] - q * u[0], v[1] - q * u[1]]
        if dot(v, v) >= n:
            return u, v
        u, v = v, u


def _exact_lattice(values: Sequence[GaussianRational]) -> LatticeInfo:
    denom = 1
    for r, i in values:
        denom = math.lcm(denom, r.denominator, i.denominator)
    ints = [(int(r * denom), int(i * denom)) for r, i in values]
    basis = integer_row_basis(ints)
    if len(basis) < 2:
        return LatticeInfo(False, len(basis), note="rank below 2")
    u, v = gauss_reduce(*basis)
    covol = Fraction(abs(u[0] * v[1] - u[1] * v[0]), denom * denom)
    z1 = (Fraction(u[0], denom), Fraction(u[1], denom))
    z2 = (Fraction(v[0], denom), Fraction(v[1], denom))
    return LatticeInfo(True, 2, (z1, z2), covol)


def _float_lattice(values: np.ndarray, tol: float) -> LatticeInfo:
    scale = float(np.max(np.abs(values))) if len(values) else 0.0
    if scale == 0.0:
        return LatticeInfo(False, 0, heuristic=True, note="all values vanish")
    fitted = []
    for z in values / scale:
        r = Fraction(float(z.real)).limit_denominator(FLOAT_MAX_DENOMINATOR)
        i = Fraction(float(z.imag)).limit_denominator(FLOAT_MAX_DENOMINATOR)
        if abs(complex(float(r), float(i)) - z) > tol:
            return LatticeInfo(False, 2, heuristic=True,
                               note=f"no rational fit with denominator <= {FLOAT_MAX_DENOMINATOR}; likely dense")
        fitted.append((r, i))
    info = _exact_lattice(fitted)
    if not info.is_lattice:
        return LatticeInfo(False, info.rank, heuristic=True, note=info.note)
    z1, z2 = (complex(float(r) * scale, float(i) * scale) for r, i in info.basis)
    return LatticeInfo(True, 2, (z1, z2), float(info.covolume) * scale * scale, heuristic=True,
                       note=f"rational fit at tolerance {tol:g}")


def detect_lattice(omega: PeriodCharacter, tol: float = 1e-9) -> LatticeInfo:
    """Decide whether the values generate a lattice (discrete, rank 2) in ``C``.

    Exact mode is decisive.  A finitely generated subgroup of ``Q + iQ``
    is always discrete, so the only failure there is rank below 2.
    Floating mode rationalises the values and is flagged heuristic.
    """
    if omega.exact is not None:
        return _exact_lattice(omega.exact)
    return _float_lattice(np.asarray(omega.values), tol)


def haupt_check(omega: PeriodCharacter, tol: float = 1e-9) -> HauptVerdict:
    """Both realizability conditions, with strict inequalities.

    Equality in either condition is a failure.  In floating mode the
    comparisons use the raw floats; only the lattice answer is heuristic.
    """
    if omega.genus < 2:
        raise ValueError("genus out of scope: need g >= 2")
    vol = symplectic_volume(omega)
    lattice = detect_lattice(omega, tol)
    if vol <= 0:
        return HauptVerdict(FAILS_POSITIVITY, vol, lattice)
    if lattice.is_lattice and vol <= lattice.covolume:
        return HauptVerdict(FAILS_LATTICE_VOLUME, vol, lattice)
    return HauptVerdict(REALIZABLE, vol, lattice)
