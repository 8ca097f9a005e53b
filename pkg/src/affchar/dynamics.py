"""Discreteness hints and seeded random-walk experiments.

The walks are regression experiments.  An equidistribution statistic close
to zero is consistent with an ergodic action but proves nothing; the
statements they probe are measure-theoretic and cannot be certified by a
finite computation.

Projective points on CP^1 are binned into 200 cells of equal Fubini-Study
measure.  On the round sphere the cells are 20 bands of equal height
(hence equal area) times 10 longitude sectors::

    height  +1 .--------------------------.   band 19
               |  |  |  |  |  |  |  |  |  |
               |  |  |  |  |  |  |  |  |  |   ...
               |  |  |  |  |  |  |  |  |  |
    height  -1 '--------------------------'   band 0
               0        longitude       2pi

For a unit vector ``(p, q)`` the height is ``|p|^2 - |q|^2`` and the
longitude is the argument of ``p * conj(q)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, asdict
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .rng import PRNG_NAME, make_rng
from .surface_group import symplectic_form_matrix

N_BANDS = 20
N_SECTORS = 10
N_CELLS = N_BANDS * N_SECTORS

NONDISCRETE = "nondiscrete_nonelementary"
INCONCLUSIVE = "inconclusive"
ELEMENTARY = "elementary"


# ---------------------------------------------------------------- Jorgensen

def _det_ok(M: np.ndarray, tol: float) -> bool:
    return abs(np.linalg.det(M) - 1) <= tol


def jorgensen_value(A, B, tol: float = 1e-10) -> float:
    """``|tr(A)^2 - 4| + |tr(A B A^-1 B^-1) - 2|`` for unimodular ``A, B``."""
    A = np.asarray(A, dtype=np.complex128)
    B = np.asarray(B, dtype=np.complex128)
    if not (_det_ok(A, tol) and _det_ok(B, tol)):
        raise ValueError("matrices must have determinant 1")
    C = A @ B @ np.linalg.inv(A) @ np.linalg.inv(B)
    return float(abs(np.trace(A) ** 2 - 4) + abs(np.trace(C) - 2))


def elementary_pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    """``[[1, a], [0, 1]]`` and ``[[1, 0], [b, 1]]``."""
    return (np.array([[1, a], [0, 1]], dtype=np.complex128),
            np.array([[1, 0], [b, 1]], dtype=np.complex128))


def commutator_trace_elementary(a, b) -> complex:
    A, B = elementary_pair(a, b)
    return complex(np.trace(A @ B @ np.linalg.inv(A) @ np.linalg.inv(B)))


def _abs2(z):
    if isinstance(z, (int, Fraction)):
        return z * z
    if isinstance(z, tuple):
        return z[0] * z[0] + z[1] * z[1]
    return abs(complex(z)) ** 2


def _mul(x, y):
    """Product of complex numbers given either natively or as exact ``(re, im)`` pairs."""
    if isinstance(x, tuple) or isinstance(y, tuple):
        xr, xi = x if isinstance(x, tuple) else (x, 0)
        yr, yi = y if isinstance(y, tuple) else (y, 0)
        return (xr * yr - xi * yi, xr * yi + xi * yr)
    return x * y


def _is_zero(z) -> bool:
    if isinstance(z, tuple):
        return z[0] == 0 and z[1] == 0
    return z == 0


def nondiscreteness_hint(a, b) -> str:
    """Regime of ``<[[1,a],[0,1]], [[1,0],[b,1]]>`` read off the Jorgensen inequality.

    Exact inputs (ints, ``Fraction`` or ``(re, im)`` pairs of them) are compared
    exactly through ``|ab|^2 < 1``.
    """
    if _is_zero(a) or _is_zero(b):
        return ELEMENTARY
    if _abs2(_mul(a, b)) < 1:
        return NONDISCRETE
    return INCONCLUSIVE


def _random_products(mats: Sequence[np.ndarray], rng, n_samples: int, max_len: int):
    inv = [np.linalg.inv(M) for M in mats]
    pool = list(mats) + inv
    for _ in range(n_samples):
        L = int(rng.integers(1, max_len + 1))
        P = np.eye(mats[0].shape[0], dtype=np.complex128)
        for k in rng.integers(0, len(pool), size=L):
            P = P @ pool[k]
        yield P


def _max_norm_along_walk(mats: Sequence[np.ndarray], rng, steps: int, bound: float) -> float:
    """Largest operator norm met by one long random product, stopping past ``bound``."""
    pool = list(mats) + [np.linalg.inv(M) for M in mats]
    P = np.eye(mats[0].shape[0], dtype=np.complex128)
    worst = 1.0
    for k in rng.integers(0, len(pool), size=steps):
        P = P @ pool[k]
        worst = max(worst, float(np.linalg.norm(P, 2)))
        if worst > bound:
            break
    return worst


def closure_hint(matrices, seed: int = 0, n_samples: int = 400, max_len: int = 40,
                 bound: float = 1e3, walk_steps: int = 20000, tol: float = 1e-9) -> str:
    """Heuristic guess at the closure type of the group generated by ``matrices``.

    Boundedness is read off one long random product of ``walk_steps``
    letters; reality of traces off ``n_samples`` shorter random words.
    Returns ``unitary_like`` when the long product stays below ``bound``,
    otherwise ``real_form_like`` when every sampled trace is real and
    ``full_SL2C_like`` when some trace is not.  The trivial group (or
    ``+-I`` only) gives ``undetermined``.  Finite extensions of a compact
    group are not distinguished from the group.
    """
    mats = [np.asarray(M, dtype=np.complex128) for M in matrices]
    if not mats:
        return "undetermined"
    for M in mats:
        if not _det_ok(M, 1e-9):
            raise ValueError("matrices must have determinant 1")
    eye = np.eye(mats[0].shape[0])
    if all(np.allclose(M, eye) or np.allclose(M, -eye) for M in mats):
        return "undetermined"
    rng = make_rng(seed, 7)
    sample = list(mats) + list(_random_products(mats, rng, n_samples, max_len))
    traces = np.array([np.trace(P) for P in sample])
    scale = np.maximum(1.0, np.abs(traces))
    real = bool(np.all(np.abs(traces.imag) <= tol * scale))
    # compact groups have real traces too, so boundedness is tested first
    if _max_norm_along_walk(mats, rng, walk_steps, bound) <= bound:
        return "unitary_like"
    if real:
        return "real_form_like"
    return "full_SL2C_like"


# ---------------------------------------------------------------- statistics

def cp1_cells(points) -> np.ndarray:
    """Cell index in ``0..199`` of each CP^1 point given as rows ``(p, q)``."""
    P = np.asarray(points, dtype=np.complex128).reshape(-1, 2)
    norm2 = np.sum(np.abs(P) ** 2, axis=1)
    h = (np.abs(P[:, 0]) ** 2 - np.abs(P[:, 1]) ** 2) / norm2
    phi = np.mod(np.angle(P[:, 0] * np.conj(P[:, 1])), 2 * np.pi)
    band = np.clip(np.floor((h + 1) / 2 * N_BANDS).astype(int), 0, N_BANDS - 1)
    sector = np.clip(np.floor(phi / (2 * np.pi) * N_SECTORS).astype(int), 0, N_SECTORS - 1)
    return band * N_SECTORS + sector


def _cell_masses(cells: np.ndarray, n_cells: int) -> np.ndarray:
    return np.bincount(cells, minlength=n_cells) / len(cells)


def _max_cell_deviation(cells: np.ndarray, n_cells: int) -> float:
    return float(np.max(np.abs(_cell_masses(cells, n_cells) - 1.0 / n_cells)))


def _total_variation(cells: np.ndarray, n_cells: int) -> float:
    return float(0.5 * np.sum(np.abs(_cell_masses(cells, n_cells) - 1.0 / n_cells)))


def torus_pair_cells(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """200 equal-area cells on a 2-torus: 20 by 10 boxes."""
    i = np.clip(np.floor(np.mod(x, 1.0) * N_BANDS).astype(int), 0, N_BANDS - 1)
    j = np.clip(np.floor(np.mod(y, 1.0) * N_SECTORS).astype(int), 0, N_SECTORS - 1)
    return i * N_SECTORS + j


def _projected_stat(points, space: str, reducer) -> float:
    P = np.asarray(points)
    if P.size == 0:
        raise ValueError("no points")
    P = P.reshape(len(P), -1)
    if space == "projective":
        if P.shape[1] == 2:
            return reducer(cp1_cells(P), N_CELLS)
        best = 0.0
        for i, j in itertools.combinations(range(P.shape[1]), 2):
            sub = P[:, [i, j]]
            keep = np.sum(np.abs(sub) ** 2, axis=1) > 0
            if keep.any():
                best = max(best, reducer(cp1_cells(sub[keep]), N_CELLS))
        return best
    if space == "torus":
        best = 0.0
        for i, j in itertools.combinations(range(P.shape[1]), 2):
            best = max(best, reducer(torus_pair_cells(P[:, i], P[:, j]), N_CELLS))
        return best
    raise ValueError(f"unknown space {space!r}")


def equidistribution_stat(points, space: str = "projective") -> float:
    """Largest deviation of a single cell mass from the uniform mass ``1/200``.

    For CP^n with ``n > 1`` and for tori the value is maximised over
    coordinate-pair projections.  ``0`` is perfect balance.
    """
    return _projected_stat(points, space, _max_cell_deviation)


def cell_total_variation(points, space: str = "projective") -> float:
    """Half the l1 distance between empirical and uniform cell masses.

    A stricter companion of :func:`equidistribution_stat`; it equals the
    largest discrepancy over unions of cells.
    """
    return _projected_stat(points, space, _total_variation)


def visited_cells(points) -> int:
    return int(np.unique(cp1_cells(points)).size)


# ---------------------------------------------------------------- walks

@dataclass
class WalkConfig:
    seed: int
    steps: int
    burn_in: int = 0
    stream_id: int = 0
    record_every: int = 1

    def __post_init__(self):
        if self.steps <= 0:
            raise ValueError("steps must be positive")
        if self.burn_in < 0 or self.record_every < 1:
            raise ValueError("invalid burn-in or recording stride")


@dataclass
class ExperimentRecord:
    config: WalkConfig
    points: np.ndarray
    stats: dict
    conserved: list = field(default_factory=list)
    kind: str = ""

    def summary(self) -> dict:
        """JSON-ready summary (points excluded)."""
        return {
            "schema": "experiment-record/1",
            "kind": self.kind,
            "prng": PRNG_NAME,
            "config": asdict(self.config),
            "stats": self.stats,
            "conserved": [{"name": n, "max_drift": d} for n, d in self.conserved],
            "n_points": int(len(self.points)),
        }


def symmetrized(matrices: Sequence[np.ndarray]) -> list[np.ndarray]:
    mats = [np.asarray(M, dtype=np.complex128) for M in matrices]
    return mats + [np.linalg.inv(M) for M in mats]


def projective_walk(matrices, start, cfg: WalkConfig) -> ExperimentRecord:
    """Random walk ``v -> M v`` with ``M`` uniform in the symmetrised generating set.

    Points are stored as unit vectors whose largest-modulus coordinate is made
    real positive, so rescaling the generators does not change them.
    """
    gens = symmetrized(matrices)
    n = gens[0].shape[0]
    v = np.asarray(start, dtype=np.complex128).reshape(-1)
    if v.shape != (n,) or any(M.shape != (n, n) for M in gens):
        raise ValueError("dimension mismatch between start point and generators")
    # rescaling the generators by scalars must not move the projective points
    gens = [M / np.linalg.norm(M) for M in gens]
    rng = make_rng(cfg.seed, cfg.stream_id)
    choice = rng.integers(0, len(gens), size=cfg.burn_in + cfg.steps)
    pts = []
    v = v / np.linalg.norm(v)
    for step, k in enumerate(choice):
        v = gens[k] @ v
        v = v / np.linalg.norm(v)
        if step >= cfg.burn_in and (step - cfg.burn_in) % cfg.record_every == 0:
            pts.append(v)
    P = _canonical_projective(np.array(pts))
    stats = {"equidistribution": equidistribution_stat(P), "total_variation": cell_total_variation(P)}
    if n == 2:
        stats["visited_cells"] = visited_cells(P)
    return ExperimentRecord(cfg, P, stats, [], "projective")


def _canonical_projective(P: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(P), axis=1)
    lead = P[np.arange(len(P)), idx]
    phase = lead / np.abs(lead)
    return P / phase[:, None]


def sp_generators(g: int) -> list[np.ndarray]:
    """Symplectic transvections ``x -> x + omega(x, v) v`` generating ``Sp(2g, Z)``.

    The vectors ``v`` run over ``a_i``, ``b_i`` and ``a_i - a_{i+1}``, the
    homology classes of a Lickorish family of curves.
    """
    if g < 1:
        raise ValueError("genus must be at least 1")
    J = symplectic_form_matrix(g)
    vecs = []
    for i in range(g):
        e = np.zeros(2 * g, dtype=np.int64)
        e[2 * i] = 1
        vecs.append(e)
        f = np.zeros(2 * g, dtype=np.int64)
        f[2 * i + 1] = 1
        vecs.append(f)
    for i in range(g - 1):
        c = np.zeros(2 * g, dtype=np.int64)
        c[2 * i] = 1
        c[2 * i + 2] = -1
        vecs.append(c)
    # omega(x, v) = x^T J v, so T_v = I + v (J v)^T
    return [np.eye(2 * g, dtype=np.int64) + np.outer(v, J @ v) for v in vecs]


def symplectic_inverse(M: np.ndarray) -> np.ndarray:
    """``M^{-1} = -J M^T J`` for a symplectic matrix."""
    J = symplectic_form_matrix(M.shape[0] // 2)
    return -J @ M.T @ J


def _exact_matvec(M, x):
    return [sum(int(M[i, j]) * x[j] for j in range(len(x)) if M[i, j]) for i in range(len(x))]


def _omega_exact(x, y):
    return sum(x[i] * y[i + 1] - x[i + 1] * y[i] for i in range(0, len(x), 2))


def sp_walk(x, y, cfg: WalkConfig, project_to_torus: bool = True, exact: bool = False,
            genus: Optional[int] = None) -> ExperimentRecord:
    """Apply random symplectic generators to the pair ``(x, y)``.

    The lifted pairing ``omega(x, y)`` is conserved.  Exact mode keeps ``x``
    and ``y`` as Fractions and the drift is exactly zero or the walk is
    wrong.  Float mode keeps unit-norm copies of the lifts plus their log
    norms and reports the drift relative to ``|x| |y|``.  With
    ``project_to_torus`` the torus point ``x mod Z^2g`` is tracked through
    the same matrices and recorded.
    """
    g = genus or len(x) // 2
    gens = sp_generators(g)
    gens = gens + [symplectic_inverse(M) for M in gens]
    rng = make_rng(cfg.seed, cfg.stream_id)
    choice = rng.integers(0, len(gens), size=cfg.burn_in + cfg.steps)
    pts = []
    if exact:
        xe = [Fraction(v) for v in x]
        ye = [Fraction(v) for v in y]
        w0 = _omega_exact(xe, ye)
        drift = Fraction(0)
        for step, k in enumerate(choice):
            xe = _exact_matvec(gens[k], xe)
            ye = _exact_matvec(gens[k], ye)
            drift = max(drift, abs(_omega_exact(xe, ye) - w0))
            if project_to_torus and step >= cfg.burn_in and (step - cfg.burn_in) % cfg.record_every == 0:
                pts.append([float(v - math.floor(v)) for v in xe])
        stats = {"omega": str(w0), "max_drift": str(drift)}
        if pts:
            stats["equidistribution"] = equidistribution_stat(np.array(pts), "torus")
            stats["total_variation"] = cell_total_variation(np.array(pts), "torus")
        return ExperimentRecord(cfg, np.array(pts), stats, [("omega", float(drift))], "sp-exact")
    J = symplectic_form_matrix(g).astype(float)
    xf = np.asarray(x, dtype=float)
    yf = np.asarray(y, dtype=float)
    nx, ny = np.linalg.norm(xf), np.linalg.norm(yf)
    w0 = float(xf @ J @ yf)
    log_scale = 0.0
    xu = xf / nx if nx else xf
    yu = yf / ny if ny else yf
    log_scale = (math.log(nx) if nx else 0.0) + (math.log(ny) if ny else 0.0)
    torus = np.mod(xf, 1.0)
    gf = [M.astype(float) for M in gens]
    drift = 0.0
    for step, k in enumerate(choice):
        M = gf[k]
        xu = M @ xu
        yu = M @ yu
        sx, sy = np.linalg.norm(xu), np.linalg.norm(yu)
        if sx:
            xu /= sx
            log_scale += math.log(sx)
        if sy:
            yu /= sy
            log_scale += math.log(sy)
        # |omega(x, y) - w0| / (|x||y|) with x = e^{.} xu etc.
        drift = max(drift, abs(float(xu @ J @ yu) - w0 * math.exp(-log_scale)))
        if project_to_torus:
            torus = np.mod(M @ torus, 1.0)
            if step >= cfg.burn_in and (step - cfg.burn_in) % cfg.record_every == 0:
                pts.append(torus.copy())
    stats = {"omega": w0, "max_relative_drift": drift, "log_norm_growth": log_scale}
    if pts:
        stats["equidistribution"] = equidistribution_stat(np.array(pts), "torus")
        stats["total_variation"] = cell_total_variation(np.array(pts), "torus")
    return ExperimentRecord(cfg, np.array(pts), stats, [("omega", drift)], "sp-float")
