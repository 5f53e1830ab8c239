"""Localization functions F, G concentrating kinetic energy near the nuclei.

phi1 is the uniform-ball average (radius L) of the indicator of the union of
radius-2L balls around the nuclei, phi2 = 1 - phi1, and

    F = phi1 / sqrt(phi1^2 + phi2^2),   G = phi2 / sqrt(phi1^2 + phi2^2).

In the continuum |grad F|^2 + |grad G|^2 <= 4 |grad phi1|^2 <= 36 / L^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import RegularGridInterpolator
from scipy.signal import fftconvolve

from .core import DomainError
from .geometry import NuclearConfig


@dataclass(frozen=True)
class LocalizationFamily:
    L: float
    h: float
    axes: tuple[np.ndarray, np.ndarray, np.ndarray]
    nuclei: np.ndarray
    phi1: np.ndarray
    F: np.ndarray
    G: np.ndarray

    @property
    def phi2(self) -> np.ndarray:
        return 1.0 - self.phi1

    def distance_to_nuclei(self) -> np.ndarray:
        """Grid-sampled distance to the nearest nucleus."""
        X, Y, Zg = np.meshgrid(*self.axes, indexing="ij")
        pts = np.stack([X, Y, Zg], axis=-1)
        d = np.full(X.shape, np.inf)
        for R in self.nuclei:
            d = np.minimum(d, np.linalg.norm(pts - R, axis=-1))
        return d

    def sample(self, points, which: str = "F") -> np.ndarray:
        """Trilinear interpolation of ``F``, ``G`` or ``phi1``; zero off the grid."""
        field = {"F": self.F, "G": self.G, "phi1": self.phi1}[which]
        fill = 1.0 if which == "G" else 0.0
        interp = RegularGridInterpolator(self.axes, field, bounds_error=False, fill_value=fill)
        return interp(np.atleast_2d(np.asarray(points, dtype=float)))


def _ball_offsets(radius: float, h: float) -> np.ndarray:
    n = int(np.floor(radius / h + 1e-9))
    i = np.arange(-n, n + 1) * h
    X, Y, Z = np.meshgrid(i, i, i, indexing="ij")
    return (X**2 + Y**2 + Z**2 <= radius**2 * (1 + 1e-12)).astype(float)


def build_localization(nuclei: NuclearConfig, L: float, h: float) -> LocalizationFamily:
    """Sample phi1, F, G on a cubic grid of spacing ``h`` covering every 3L-ball.

    The convolution counts lattice points of the radius-L ball that fall in
    the union of 2L-balls; counts are integers, so the FFT result is rounded
    before normalizing and phi1 carries no transform noise.
    """
    if L <= 0:
        raise DomainError("L must be positive")
    if not (0 < h <= L / 8 * (1 + 1e-12)):
        raise DomainError(f"grid spacing {h} too coarse; need h <= L/8 = {L / 8}")
    R = nuclei.positions
    pad = 3.0 * L + 2.0 * h
    npad = int(np.ceil(pad / h))
    axes = []
    for dim in range(3):
        lo = R[:, dim].min() - npad * h
        n = int(np.ceil((R[:, dim].max() - R[:, dim].min()) / h)) + 2 * npad + 1
        axes.append(lo + h * np.arange(n))
    X, Y, Zg = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([X, Y, Zg], axis=-1)
    dist = np.full(X.shape, np.inf)
    for Rj in R:
        dist = np.minimum(dist, np.linalg.norm(pts - Rj, axis=-1))
    inside = (dist <= 2.0 * L).astype(float)
    kernel = _ball_offsets(L, h)
    counts = np.rint(fftconvolve(inside, kernel, mode="same"))
    phi1 = counts / kernel.sum()
    phi2 = 1.0 - phi1
    norm = np.sqrt(phi1**2 + phi2**2)
    return LocalizationFamily(
        L=L, h=h, axes=tuple(axes), nuclei=R.copy(), phi1=phi1, F=phi1 / norm, G=phi2 / norm
    )


@dataclass(frozen=True)
class GradientCheck:
    sup: float
    bound: float
    passed: bool


def gradient_bound_check(family: LocalizationFamily, slack: float = 1.0) -> GradientCheck:
    """Compare the central-difference sup of |grad F|^2 + |grad G|^2 with 36/L^2.

    The bound carries a discretization allowance ``(1 + slack h / L)``.
    """
    h, L = family.h, family.L
    gF = np.gradient(family.F, h)
    gG = np.gradient(family.G, h)
    total = sum(g**2 for g in gF) + sum(g**2 for g in gG)
    sup = float(total.max())
    bound = 36.0 / L**2 * (1.0 + slack * h / L)
    return GradientCheck(sup=sup, bound=bound, passed=sup <= bound)
