"""Nuclear geometry and the single-particle lower bound for the Coulomb energy.

The electrostatic inequality used here is

    V_c >= -sum_i W(x_i) + (Z^2/8) sum_j 1/D_j

where D_j is half the distance from nucleus j to its nearest neighbour and
W is a piecewise potential on the Voronoi cell of each nucleus, with the
branch radius fixed at 10 D_j / 11.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DomainError

BRANCH_RATIO = 10.0 / 11.0


def _as_points(positions) -> np.ndarray:
    pts = np.asarray(positions, dtype=float)
    if pts.ndim == 1 and pts.size == 3:
        pts = pts.reshape(1, 3)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise DomainError(f"expected an (n, 3) array of points, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise DomainError("positions must be finite")
    return pts


@dataclass(frozen=True)
class NuclearConfig:
    positions: np.ndarray
    Z: float

    def __post_init__(self):
        pts = _as_points(self.positions)
        if len(pts) == 0:
            raise DomainError("at least one nucleus is required")
        if self.Z < 0:
            raise DomainError("Z must be nonnegative")
        if len(pts) > 1:
            d = _pairwise(pts)
            np.fill_diagonal(d, np.inf)
            if d.min() <= 0:
                raise DomainError("nuclei must be pairwise distinct")
        object.__setattr__(self, "positions", pts)

    @property
    def K(self) -> int:
        return len(self.positions)

    def to_json(self) -> dict:
        return {"Z": self.Z, "positions": self.positions.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "NuclearConfig":
        return cls(np.asarray(data["positions"], dtype=float), float(data["Z"]))


@dataclass(frozen=True)
class ElectronConfig:
    positions: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "positions", _as_points(self.positions))

    @property
    def N(self) -> int:
        return len(self.positions)

    def to_json(self) -> list:
        return self.positions.tolist()

    @classmethod
    def from_json(cls, data) -> "ElectronConfig":
        return cls(np.asarray(data, dtype=float))


def _pairwise(a: np.ndarray, b: np.ndarray | None = None) -> np.ndarray:
    b = a if b is None else b
    return np.linalg.norm(a[:, None, :] - b[None, :, :], axis=-1)


def voronoi_radii(config: NuclearConfig) -> np.ndarray:
    """D_j = half the distance from nucleus j to its nearest other nucleus.

    A lone nucleus gets D = inf, so W never uses its short-range branch.
    """
    pts = config.positions
    if len(pts) == 1:
        return np.array([np.inf])
    d = _pairwise(pts)
    np.fill_diagonal(d, np.inf)
    return 0.5 * d.min(axis=1)


def nearest_nucleus(x, config: NuclearConfig) -> tuple[int, float]:
    """Index of the Voronoi cell containing ``x`` (ties go to the lowest index)."""
    d = np.linalg.norm(config.positions - np.asarray(x, dtype=float), axis=1)
    j = int(np.argmin(d))
    return j, float(d[j])


def W(x, config: NuclearConfig, D: np.ndarray | None = None) -> float:
    """Single-particle potential at ``x``; +inf on top of a nucleus.

    At exactly ``r = 10 D_j / 11`` the long-range branch is used.
    """
    if D is None:
        D = voronoi_radii(config)
    j, r = nearest_nucleus(x, config)
    if r == 0.0:
        return math.inf
    Z = config.Z
    Dj = D[j]
    if math.isinf(Dj) or r >= BRANCH_RATIO * Dj:
        return (math.sqrt(Z) + 1.0 / math.sqrt(2.0)) ** 2 / r
    return Z / r + 121.0 / (42.0 * Dj)


def vc(electrons: ElectronConfig, nuclei: NuclearConfig) -> float:
    """Coulomb energy of electrons and nuclei (without the alpha prefactor).

    An electron on a nucleus gives -inf, two coincident electrons +inf;
    both at once is ambiguous and raises.
    """
    X, R, Z = electrons.positions, nuclei.positions, nuclei.Z
    attract = 0.0
    if Z > 0:
        d_en = _pairwise(X, R)
        attract = -math.inf if np.any(d_en == 0) else -Z * float(np.sum(1.0 / d_en))
    repel = 0.0
    if len(X) > 1:
        iu = np.triu_indices(len(X), k=1)
        d_ee = _pairwise(X)[iu]
        repel = math.inf if np.any(d_ee == 0) else float(np.sum(1.0 / d_ee))
    nuclear = 0.0
    if len(R) > 1 and Z > 0:
        iu = np.triu_indices(len(R), k=1)
        nuclear = Z * Z * float(np.sum(1.0 / _pairwise(R)[iu]))
    if math.isinf(attract) and math.isinf(repel):
        raise DomainError("electron-nucleus and electron-electron coincidences together")
    return attract + repel + nuclear


def coulomb_lower_bound(electrons: ElectronConfig, nuclei: NuclearConfig) -> float:
    """``-sum_i W(x_i) + (Z^2/8) sum_j 1/D_j``."""
    D = voronoi_radii(nuclei)
    w = sum(W(x, nuclei, D) for x in electrons.positions)
    return -w + nuclei.Z**2 / 8.0 * float(np.sum(1.0 / D))


def coulomb_lower_bound_margin(electrons: ElectronConfig, nuclei: NuclearConfig) -> float:
    """``V_c`` minus its single-particle lower bound; nonnegative for every configuration.

    Returns nan for a configuration with an electron on a nucleus, where both
    sides are -inf and there is nothing to compare.
    """
    v = vc(electrons, nuclei)
    lb = coulomb_lower_bound(electrons, nuclei)
    if math.isinf(v) and math.isinf(lb):
        return math.nan
    return v - lb


def localized_coulomb_bound(N: int, L: float, Z: float) -> tuple[float, float]:
    """Lower bounds on the localized relativistic Coulomb Hamiltonian.

    Returns ``(sharp, weak)``:

        sharp = -(N / 2L) max{(sqrt(2Z) + 1)^2, 2Z + 110/21}
        weak  = -(N / 2L) (sqrt(2Z) + 2.3)^2

    valid when the kinetic prefactor is at least ``max(q/0.031, pi Z)``.
    """
    if L <= 0:
        raise DomainError("L must be positive")
    s = math.sqrt(2.0 * Z)
    sharp = -N / (2.0 * L) * max((s + 1.0) ** 2, 2.0 * Z + 110.0 / 21.0)
    weak = -N / (2.0 * L) * (s + 2.3) ** 2
    assert sharp >= weak
    return sharp, weak


def random_configuration(
    rng: np.random.Generator, N: int, K: int, Z: float, scale: float = 1.0
) -> tuple[ElectronConfig, NuclearConfig]:
    """Random nuclei in a cube; electrons either uniform or clustered near nuclei.

    The clustered mode samples offsets over three decades of length so that
    both branches of W and the cell boundaries are exercised.
    """
    R = rng.uniform(-scale, scale, size=(K, 3))
    mode = rng.integers(0, 3)
    if mode == 0:
        X = rng.uniform(-scale, scale, size=(N, 3))
    elif mode == 1:
        owners = rng.integers(0, K, size=N)
        spread = scale * 10.0 ** rng.uniform(-3, 0, size=(N, 1))
        X = R[owners] + spread * rng.normal(size=(N, 3))
    else:
        # electrons on bisector planes between random nucleus pairs
        X = np.empty((N, 3))
        for i in range(N):
            if K > 1:
                a, b = rng.choice(K, size=2, replace=False)
                mid = 0.5 * (R[a] + R[b])
                n = R[b] - R[a]
                t = rng.normal(size=3)
                t -= t.dot(n) / n.dot(n) * n
                X[i] = mid + rng.uniform(0, scale) * t / np.linalg.norm(t)
            else:
                X[i] = rng.uniform(-scale, scale, size=3)
    return ElectronConfig(X), NuclearConfig(R, Z)
