"""Dehn twists along separating curves acting on twisted cocycles.

A twist ``T`` along a separating curve with based representative ``d`` sends
each generator ``x`` to ``x * prod_i beta_i^{-1} d^{e_i} beta_i``.  Because
``d`` is null-homologous, pulling a cocycle back along ``T`` gives

    lam(T x) = lam(x) + lam(d) * mu(x),   mu(x) = alpha(x) * sum_i e_i / alpha(beta_i),

so only the signs ``e_i`` and the homology classes of the ``beta_i`` matter.
That data is what :class:`TwistData` stores.  When the automorphism itself
is known, its generator images are kept too and serve as an independent
word-level oracle.

Convention for the action: ``lam -> lam o T`` on cocycles, and the matrix of
a twist in a basis of cohomology classes has the images of the basis vectors
as its columns.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional, Sequence

import numpy as np

from .characters import Character, default_handle_classes, handle_parameters
from .surface_group import Word, a, abelianize, b, make_surface_group
from .twisted_cohomology import (
    Cocycle,
    CocycleError,
    DegenerateCharacterError,
    constraint_residual,
    eval_word,
)

TWIST_TOL = 1e-10

BetaList = list[tuple[int, np.ndarray]]


@dataclass(eq=False)
class TwistData:
    """Intersection data of a twist along a based curve.

    ``beta_data[k]`` lists ``(sign, class)`` for generator ``k`` (1-based).
    ``images`` optionally holds the automorphism on generators.
    ``direction`` is ``+1`` when the twist is conjugate to conjugation of a
    subsurface by the curve, ``-1`` for conjugation by its inverse and ``0``
    when unknown.
    """

    name: str
    genus: int
    based_curve: Word
    beta_data: dict[int, BetaList]
    images: Optional[dict[int, Word]] = None
    direction: int = 0

    def is_separating(self) -> bool:
        return not np.any(abelianize(self.based_curve, self.genus))

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "genus": self.genus,
            "based_curve": str(self.based_curve),
            "beta_data": {str(k): [[int(s), [int(x) for x in h]] for s, h in v]
                          for k, v in sorted(self.beta_data.items())},
        }
        if self.images is not None:
            out["images"] = {str(k): str(w) for k, w in sorted(self.images.items())}
        out["direction"] = self.direction
        return out

    @classmethod
    def from_json(cls, data: dict) -> "TwistData":
        g = int(data["genus"])
        beta = {int(k): [(int(s), np.array(h, dtype=np.int64)) for s, h in v]
                for k, v in data["beta_data"].items()}
        for k in range(1, 2 * g + 1):
            beta.setdefault(k, [])
        images = None
        if "images" in data:
            images = {int(k): Word.parse(w) for k, w in data["images"].items()}
        return cls(data["name"], g, Word.parse(data["based_curve"]), beta, images,
                   int(data.get("direction", 0)))


def homomorphism_images(genus: int, images: dict[int, Word]) -> dict[int, Word]:
    return {k: images.get(k, Word((k,))) for k in range(1, 2 * genus + 1)}


def homology_action(genus: int, images: dict[int, Word]) -> np.ndarray:
    """Integer matrix whose column ``k`` is the class of the image of generator ``k``."""
    imgs = homomorphism_images(genus, images)
    return np.column_stack([abelianize(imgs[k], genus) for k in range(1, 2 * genus + 1)])


def compose_images(outer: dict[int, Word], inner: dict[int, Word], genus: int) -> dict[int, Word]:
    """Images of ``outer o inner``."""
    inner = homomorphism_images(genus, inner)
    return {k: inner[k].substitute(outer) for k in range(1, 2 * genus + 1)}


def conjugation_twist(genus: int, curve: Word, generators: Sequence[int], exponent: int,
                      name: str = "") -> TwistData:
    """Twist conjugating ``generators`` by ``curve**exponent`` and fixing the rest.

    For ``x`` in the list, ``c x c^{-1} = x (x^{-1} c x) c^{-1}`` with ``c = curve**e``
    gives the data ``[(e, [x]), (-e, 0)]``.
    """
    if exponent not in (1, -1):
        raise ValueError("exponent must be +1 or -1")
    c = curve if exponent == 1 else curve.inverse()
    beta: dict[int, BetaList] = {k: [] for k in range(1, 2 * genus + 1)}
    images = {}
    for k in generators:
        ek = np.zeros(2 * genus, dtype=np.int64)
        ek[k - 1] = 1
        beta[k] = [(exponent, ek), (-exponent, np.zeros(2 * genus, dtype=np.int64))]
        images[k] = Word((k,)).conjugate_by(c)
    return TwistData(name, genus, curve, beta, homomorphism_images(genus, images), exponent)


def handle_boundary_twist(genus: int, i: int, exponent: int = -1, name: str = "") -> TwistData:
    """Twist along the boundary of the first ``i`` handles, ``[a_1,b_1]...[a_i,b_i]``."""
    pres = make_surface_group(genus)
    curve = pres.handle_boundary(i)
    gens = list(range(1, 2 * i + 1))
    return conjugation_twist(genus, curve, gens, exponent, name or f"boundary_{i}")


def transport_twist(data: TwistData, sigma: dict[int, Word], sigma_inv: dict[int, Word],
                    name: str = "") -> TwistData:
    """Twist data of ``sigma o T o sigma^{-1}``, a twist along ``sigma(curve)``.

    For ``w = sigma^{-1}(x)`` with letters ``x_1 ... x_n`` and suffixes
    ``s_j = x_{j+1} ... x_n``, the factors of ``T`` attached to each letter are
    moved to the right end; their conjugators pick up ``s_j`` (and ``x_j^{-1}``
    for inverse letters) before ``sigma`` is applied to everything.
    """
    g = data.genus
    sigma = homomorphism_images(g, sigma)
    sigma_inv = homomorphism_images(g, sigma_inv)
    S = homology_action(g, sigma)
    new_beta: dict[int, BetaList] = {}
    for k in range(1, 2 * g + 1):
        w = sigma_inv[k].letters
        entries: BetaList = []
        suffix = np.zeros(2 * g, dtype=np.int64)
        per_letter = []
        for x in reversed(w):
            j = abs(x)
            if x > 0:
                items = [(e, h + suffix) for e, h in data.beta_data[j]]
            else:
                ej = np.zeros(2 * g, dtype=np.int64)
                ej[j - 1] = 1
                items = [(-e, h - ej + suffix) for e, h in reversed(data.beta_data[j])]
            per_letter.append(items)
            suffix = suffix + abelianize((x,), g)
        for items in reversed(per_letter):
            entries.extend((e, S @ h) for e, h in items)
        new_beta[k] = entries
    images = None
    if data.images is not None:
        T = homomorphism_images(g, data.images)
        images = {k: sigma_inv[k].substitute(T).substitute(sigma) for k in range(1, 2 * g + 1)}
    curve = data.based_curve.substitute(sigma)
    return TwistData(name or data.name, g, curve, new_beta, images, data.direction)


def pair_transvection(genus: int, i: int, conjugate_block: bool = True):
    """Automorphism acting on handles ``i, i+1`` as a transvection along ``[a_i] + [a_{i+1}]``.

    ``b_i -> a_i^{-1} a_{i+1}^{-1} b_i`` and ``b_{i+1} -> a_{i+1}^{-1} a_i^{-1} b_{i+1}``,
    the ``a`` generators fixed.  With ``conjugate_block`` the four images are
    further conjugated by ``a_i a_{i+1}``, which makes the relator fixed
    exactly; the other handles are untouched.  Returns images and inverse images.
    """
    if not 1 <= i <= genus - 1:
        raise ValueError("pair index out of range")
    ai, bi, aj, bj = a(i), b(i), a(i + 1), b(i + 1)
    base = {ai: Word((ai,)), aj: Word((aj,)),
            bi: Word((-ai, -aj, bi)), bj: Word((-aj, -ai, bj))}
    base_inv = {ai: Word((ai,)), aj: Word((aj,)),
                bi: Word((aj, ai, bi)), bj: Word((ai, aj, bj))}
    if not conjugate_block:
        return homomorphism_images(genus, base), homomorphism_images(genus, base_inv)
    u = Word((ai, aj))
    img = {k: w.conjugate_by(u) for k, w in base.items()}
    inv = {k: Word((k,)).conjugate_by(u.inverse()).substitute(base_inv) for k in base}
    return homomorphism_images(genus, img), homomorphism_images(genus, inv)


def genus2_twist_pair() -> tuple[TwistData, TwistData]:
    """The two genus-2 separating twists used for the explicit matrices.

    The first is along ``sigma(d)`` with ``d = [a_1, b_1]`` and ``sigma`` the
    pair transvection; it equals ``sigma o T o sigma^{-1}`` where ``T``
    conjugates the first handle by ``d``.  The second is along ``d`` itself
    and conjugates the first handle by ``d^{-1}``.
    """
    base = handle_boundary_twist(2, 1, exponent=1)
    sigma, sigma_inv = pair_transvection(2, 1, conjugate_block=False)
    first = transport_twist(base, sigma, sigma_inv, name="delta1")
    second = handle_boundary_twist(2, 1, exponent=-1, name="delta2")
    return first, second


def load_genus2_fixture() -> tuple[TwistData, TwistData]:
    """The frozen genus-2 twist data shipped with the package."""
    text = resources.files("affchar").joinpath("data/genus2_twists.json").read_text()
    raw = json.loads(text)
    return tuple(TwistData.from_json(d) for d in raw["twists"])


def twist_mu_values(alpha: Character, data: TwistData) -> np.ndarray:
    A = alpha.values
    out = np.zeros(2 * data.genus, dtype=np.complex128)
    for k in range(1, 2 * data.genus + 1):
        acc = 0j
        for sign, h in data.beta_data.get(k, []):
            acc += sign / alpha.on_class(h)
        out[k - 1] = A[k - 1] * acc
    return out


def twist_cocycle_mu(alpha: Character, data: TwistData, tol: float = TWIST_TOL) -> Cocycle:
    if not data.is_separating():
        raise ValueError(f"curve of {data.name!r} is not null-homologous")
    mu = twist_mu_values(alpha, data)
    res = constraint_residual(alpha, mu)
    if abs(res) > tol * max(1.0, float(np.max(np.abs(mu)))):
        raise CocycleError("inconsistent beta data", res)
    return Cocycle(alpha, mu)


def curve_functional(alpha: Character, curve: Word) -> np.ndarray:
    """Row ``f`` with ``lam(curve) = f . lam.values`` for every cocycle."""
    g = alpha.genus
    eye = np.eye(2 * g, dtype=np.complex128)
    return np.array([eval_word(eye[j], alpha.values, curve.letters)[0] for j in range(2 * g)])


@dataclass(eq=False)
class TwistAction:
    """The linear map ``lam -> lam + lam(curve) mu`` on generator values."""

    data: TwistData
    mu: Cocycle
    functional: np.ndarray
    matrix: np.ndarray = field(init=False)

    def __post_init__(self):
        self.matrix = np.eye(len(self.functional), dtype=np.complex128) + np.outer(self.mu.values, self.functional)

    def apply(self, lam: Cocycle, power: int = 1) -> Cocycle:
        return Cocycle(lam.character, lam.values + power * (self.functional @ lam.values) * self.mu.values)

    def inverse_matrix(self) -> np.ndarray:
        return np.eye(len(self.functional), dtype=np.complex128) - np.outer(self.mu.values, self.functional)


def twist_action_on_Z1(alpha: Character, data: TwistData, tol: float = TWIST_TOL) -> TwistAction:
    mu = twist_cocycle_mu(alpha, data, tol)
    f = curve_functional(alpha, data.based_curve)
    self_value = f @ mu.values
    if abs(self_value) > tol * max(1.0, float(np.max(np.abs(mu.values)))):
        raise ValueError(f"mu does not vanish on its own curve ({self_value})")
    return TwistAction(data, mu, f)


def word_action_matrix(alpha: Character, images: dict[int, Word]) -> np.ndarray:
    """Matrix of ``lam -> lam o phi`` on generator values, straight from image words."""
    g = alpha.genus
    imgs = homomorphism_images(g, images)
    eye = np.eye(2 * g, dtype=np.complex128)
    M = np.empty((2 * g, 2 * g), dtype=np.complex128)
    for k in range(1, 2 * g + 1):
        for j in range(2 * g):
            M[k - 1, j] = eval_word(eye[j], alpha.values, imgs[k].letters)[0]
    return M


def matrix_in_classes(action: np.ndarray, vectors: Sequence[Cocycle]) -> np.ndarray:
    """Matrix of a cocycle map on the span of ``vectors`` modulo coboundaries."""
    alpha = vectors[0].character
    basis = np.column_stack([v.values for v in vectors] + [1 - alpha.values])
    images = np.column_stack([action @ v.values for v in vectors])
    coeffs, *_ = np.linalg.lstsq(basis, images, rcond=None)
    return coeffs[: len(vectors)]


def _check_nondegenerate(t: complex, s: complex, tol: float) -> None:
    if abs(t) <= tol or abs(s) <= tol:
        raise DegenerateCharacterError("basis degenerate at this character")


def genus2_standard_twists(alpha: Character, tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form matrices of the two genus-2 twists in the basis of their cocycles."""
    if alpha.genus != 2:
        raise ValueError("genus 2 only")
    t, s = handle_parameters(alpha, 1)
    _check_nondegenerate(t, s, tol)
    M1 = np.array([[1, s], [0, 1]], dtype=np.complex128)
    M2 = np.array([[1, 0], [t, 1]], dtype=np.complex128)
    return M1, M2


@dataclass(eq=False)
class TorelliRep:
    """Block-elementary generators on cohomology in the basis ``mu_1, nu_1, ...``."""

    character: Character
    generator_matrices: list[np.ndarray]
    handle_params: list[tuple[complex, complex]]

    def handle_of(self, k: int) -> int:
        """Handle index (1-based) of generator ``k`` (0-based)."""
        return k // 2 + 1


def higher_genus_rep(alpha: Character, classes=None, tol: float = 1e-12) -> TorelliRep:
    """Generators ``[[1, t_i], [0, 1]]`` and ``[[1, 0], [s_i, 1]]`` on block ``i``.

    ``classes`` optionally maps a handle index to its pair of homology classes.
    """
    g = alpha.genus
    n = 2 * g - 2
    gens, params = [], []
    for i in range(1, g):
        cl = classes.get(i) if classes else None
        t, s = handle_parameters(alpha, i, cl)
        if abs(t) <= tol or abs(s) <= tol:
            raise DegenerateCharacterError(f"degenerate handle {i}: t = {t}, s = {s}")
        params.append((t, s))
        upper = np.eye(n, dtype=np.complex128)
        upper[2 * i - 2, 2 * i - 1] = t
        lower = np.eye(n, dtype=np.complex128)
        lower[2 * i - 1, 2 * i - 2] = s
        gens += [upper, lower]
    return TorelliRep(alpha, gens, params)


def degenerate_factors(alpha: Character, tol: float = 1e-12) -> list[str]:
    """Names of the vanishing factors ``(1 - alpha(x))`` over all handles."""
    out = []
    g = alpha.genus
    for i in range(1, g):
        for h in default_handle_classes(g, i):
            k = int(np.flatnonzero(h)[0])
            name = ("a" if k % 2 == 0 else "b") + str(k // 2 + 1)
            if abs(1 - alpha.on_class(h)) <= tol:
                out.append(f"(1-alpha({name}))")
    return sorted(set(out))


def verify_torelli(data: TwistData) -> bool:
    """True iff the twist acts trivially on homology.

    Each generator image is ``x * prod beta^{-1} d^{e} beta``, whose class is
    ``[x] + (sum e) [d]``.  Stored image words, when present, are checked too.
    """
    g = data.genus
    d = abelianize(data.based_curve, g)
    for k in range(1, 2 * g + 1):
        total = sum(s for s, _ in data.beta_data.get(k, []))
        if total != 0 and np.any(d):
            return False
    if data.images is not None:
        H = homology_action(g, data.images)
        if not np.array_equal(H, np.eye(2 * g, dtype=np.int64)):
            return False
    return True


def boundary_family(genus: int) -> list[TwistData]:
    """The twists along the nested separating curves ``[a_1,b_1]...[a_i,b_i]``."""
    return [handle_boundary_twist(genus, i, exponent=-1, name=f"eta{i}") for i in range(1, genus)]


def transvected_family(genus: int) -> list[TwistData]:
    """Separating twists along ``sigma_i([a_1,b_1]...[a_i,b_i])``, ``sigma_i`` the pair transvection.

    These are honest Torelli elements in every genus.  For ``genus >= 3`` the
    curves of different members intersect, so the family is used to probe
    invariance of the volume form, not to build the block representation.
    """
    out = []
    for i in range(1, genus):
        base = handle_boundary_twist(genus, i, exponent=1)
        conj = genus > 2
        s, si = pair_transvection(genus, i, conjugate_block=conj)
        out.append(transport_twist(base, s, si, name=f"delta{i}"))
    return out


def twist_form_constant(data: TwistData) -> complex:
    """Constant ``c`` in ``H(x, mu) = c * x(curve)`` for the twist cocycle ``mu``.

    It equals ``-direction * N`` with ``N`` the volume normalisation.  The
    identity is a consequence of naturality of the cup product and is checked
    on every concrete twist in the test-suite.
    """
    from .twisted_cohomology import VOLUME_NORMALIZATION

    if data.direction not in (1, -1):
        raise ValueError("twist direction unknown")
    return -data.direction * VOLUME_NORMALIZATION


def block_gram(alpha: Character, rep: TorelliRep | None = None) -> np.ndarray:
    """Matrix of the volume form in the block basis of :func:`higher_genus_rep`.

    Block ``i`` has basis ``(m_i, n_i)``: ``m_i`` is the cocycle of the twist
    along ``[a_1,b_1]...[a_i,b_i]`` (conjugation by its inverse) and ``n_i``
    that of the transvected partner curve.  With ``H(x, m_i) = N x(d_i)`` and
    ``H(x, n_i) = -N x(e_i)`` the nonzero entries are
    ``G[m_i, n_i] = N t_i`` and ``G[n_i, m_i] = -N s_i``; cross-block entries
    vanish because each cocycle vanishes on the curves of the other blocks.
    """
    from .twisted_cohomology import VOLUME_NORMALIZATION as N

    rep = rep or higher_genus_rep(alpha)
    n = 2 * alpha.genus - 2
    G = np.zeros((n, n), dtype=np.complex128)
    for i, (t, s) in enumerate(rep.handle_params):
        G[2 * i, 2 * i + 1] = N * t
        G[2 * i + 1, 2 * i] = -N * s
    return G
