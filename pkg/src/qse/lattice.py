"""Periodic-box Dirac and Pauli operators, and a discrete Lieb-Thirring diagnostic.

Momentum acts spectrally, so on trigonometric polynomials whose pairwise
products stay below the grid band the commutator [p, A] is exactly -i grad A
and the Dirac square identity holds to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

from .core import DomainError
from .spectral import PAULI, dirac_matrices


@dataclass(frozen=True)
class LatticeGauge:
    """A real vector potential on an n^3 periodic grid of side ``box``.

    ``band`` is the largest integer wavenumber (per axis) present in A.
    """

    box: float
    n: int
    A: np.ndarray  # (3, n, n, n)
    band: int

    def __post_init__(self):
        if self.n < 8 or self.n % 2:
            raise DomainError("grid size must be even and >= 8")
        if self.box <= 0:
            raise DomainError("box length must be positive")
        A = np.asarray(self.A, dtype=float)
        if A.shape != (3, self.n, self.n, self.n):
            raise DomainError(f"A must have shape (3, {self.n}, {self.n}, {self.n})")
        object.__setattr__(self, "A", A)

    @property
    def wavenumbers(self) -> np.ndarray:
        """Angular wavenumbers along one axis, FFT order, Nyquist set to 0."""
        idx = np.fft.fftfreq(self.n, d=1.0 / self.n)
        idx[self.n // 2] = 0.0
        return 2.0 * math.pi / self.box * idx

    @property
    def band_limited(self) -> bool:
        """True when products of A with a field of the same band stay below Nyquist."""
        return 2 * self.band < self.n // 2

    @property
    def spacing(self) -> float:
        return self.box / self.n

    def derivative(self, f: np.ndarray, axis: int) -> np.ndarray:
        """Spectral d/dx_axis over the last three axes of ``f``."""
        k = self.wavenumbers
        shape = [1, 1, 1]
        shape[axis] = self.n
        ax = f.ndim - 3 + axis
        return np.fft.ifft(1j * k.reshape(shape) * np.fft.fft(f, axis=ax), axis=ax)

    def momentum(self, f: np.ndarray, axis: int) -> np.ndarray:
        return -1j * self.derivative(f, axis)

    @property
    def B(self) -> np.ndarray:
        """curl A, computed spectrally."""
        d = self.derivative
        A = self.A
        return np.real(
            np.stack(
                [d(A[2], 1) - d(A[1], 2), d(A[0], 2) - d(A[2], 0), d(A[1], 0) - d(A[0], 1)]
            )
        )

    @classmethod
    def zero(cls, box: float, n: int) -> "LatticeGauge":
        return cls(box, n, np.zeros((3, n, n, n)), 0)


def band_limited_field(
    rng: np.random.Generator, n: int, band: int, n_components: int = 3, amplitude: float = 1.0
) -> np.ndarray:
    """Random real trigonometric polynomial with integer wavenumbers |k_i| <= band."""
    idx = np.fft.fftfreq(n, d=1.0 / n)
    mask1 = np.abs(idx) <= band
    mask = mask1[:, None, None] & mask1[None, :, None] & mask1[None, None, :]
    coeffs = rng.normal(size=(n_components, n, n, n)) + 1j * rng.normal(size=(n_components, n, n, n))
    coeffs *= mask
    f = np.real(np.fft.ifftn(coeffs, axes=(1, 2, 3)))
    scale = np.abs(f).max()
    return f if scale == 0 else amplitude * f / scale


def random_gauge(
    rng: np.random.Generator, box: float, n: int, band: int, amplitude: float = 1.0
) -> LatticeGauge:
    return LatticeGauge(box, n, band_limited_field(rng, n, band, 3, amplitude), band)


def single_mode_gauge(
    box: float, n: int, wavevector, polarization, amplitude: float = 1.0
) -> LatticeGauge:
    """A = amplitude * polarization * cos(2 pi k.x / box) for an integer wavevector."""
    k = np.asarray(wavevector, dtype=int)
    x = np.arange(n) * box / n
    X = np.meshgrid(x, x, x, indexing="ij")
    phase = 2.0 * math.pi / box * sum(ki * Xi for ki, Xi in zip(k, X))
    A = amplitude * np.asarray(polarization, dtype=float)[:, None, None, None] * np.cos(phase)
    return LatticeGauge(box, n, A, int(np.abs(k).max()))


def _kinetic(lat: LatticeGauge, psi: np.ndarray, sqrt_alpha: float, axis: int) -> np.ndarray:
    # (p + sqrt(alpha) A)_axis applied to a spinor field (c, n, n, n)
    return lat.momentum(psi, axis) + sqrt_alpha * lat.A[axis] * psi


def apply_dirac(lat: LatticeGauge, psi: np.ndarray, alpha: float, m: float) -> np.ndarray:
    """D(A) psi = alpha.(p + sqrt(alpha) A) psi + m beta psi for psi of shape (4, n, n, n)."""
    amat, beta = dirac_matrices()
    sa = math.sqrt(alpha)
    out = m * np.einsum("ab,b...->a...", beta, psi)
    for i in range(3):
        out = out + np.einsum("ab,b...->a...", amat[i], _kinetic(lat, psi, sa, i))
    return out


def apply_pauli(lat: LatticeGauge, phi: np.ndarray, alpha: float) -> np.ndarray:
    """T(A) phi = (p + sqrt(alpha) A)^2 phi + sqrt(alpha) sigma.B phi, phi of shape (2, n, n, n)."""
    sa = math.sqrt(alpha)
    out = np.zeros_like(phi, dtype=complex)
    for i in range(3):
        out += _kinetic(lat, _kinetic(lat, phi, sa, i), sa, i)
    B = lat.B
    for i in range(3):
        out += sa * B[i] * np.einsum("ab,b...->a...", PAULI[i], phi)
    return out


def dirac_square_identity(
    lat: LatticeGauge,
    alpha: float,
    m: float,
    n_probes: int = 4,
    seed: int = 0,
    probe_band: int | None = None,
    allow_aliasing: bool = False,
) -> float:
    """max over random probes of ||D^2 psi - (T^P + m^2) psi|| / ||psi||.

    Probes share the band of A unless ``probe_band`` is given.  Without
    ``allow_aliasing``, a gauge or probe whose products reach the Nyquist
    band raises.
    """
    if alpha < 0:
        raise DomainError("alpha must be nonnegative")
    pb = lat.band if probe_band is None else probe_band
    if not allow_aliasing and lat.band + pb >= lat.n // 2:
        raise DomainError(
            f"band {lat.band} + probe band {pb} reaches the grid band {lat.n // 2}"
        )
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_probes):
        psi = band_limited_field(rng, lat.n, pb, 4) + 1j * band_limited_field(rng, lat.n, pb, 4)
        lhs = apply_dirac(lat, apply_dirac(lat, psi, alpha, m), alpha, m)
        rhs = np.concatenate(
            [apply_pauli(lat, psi[:2], alpha), apply_pauli(lat, psi[2:], alpha)]
        ) + m * m * psi
        worst = max(worst, float(np.linalg.norm(lhs - rhs) / np.linalg.norm(psi)))
    return worst


# --- Lieb-Thirring ---------------------------------------------------------

LT_ELL = 0.060


def dirichlet_laplacian(n: int, h: float) -> sp.csr_matrix:
    """Seven-point -Laplacian on an n^3 grid with zero Dirichlet boundary."""
    d1 = sp.diags([-np.ones(n - 1), 2 * np.ones(n), -np.ones(n - 1)], [-1, 0, 1]) / h**2
    I = sp.identity(n)
    return (sp.kron(sp.kron(d1, I), I) + sp.kron(sp.kron(I, d1), I) + sp.kron(sp.kron(I, I), d1)).tocsr()


def negative_eigenvalues(H: sp.spmatrix, start: int = 16) -> np.ndarray:
    """All negative eigenvalues of a sparse symmetric matrix."""
    dim = H.shape[0]
    k = min(start, dim - 1)
    while True:
        if k >= dim - 1 or dim <= 64:
            e = np.linalg.eigvalsh(H.toarray())
            return e[e < 0]
        e = eigsh(H, k=k, which="SA", return_eigenvectors=False)
        e = np.sort(e)
        if e[-1] >= 0:
            return e[e < 0]
        k = min(2 * k, dim - 1)


def lieb_thirring_ratio(V: np.ndarray, h: float, c1: float = 1.0, ell: float = LT_ELL) -> float:
    """(sum_i sqrt|e_i|) / (ell c1^{-3/2} int V^2) for c1 (-Laplacian) - V.

    ``V`` is a nonnegative potential sampled on an n^3 grid of spacing ``h``
    (Dirichlet boundary).  Returns 0 when V vanishes.
    """
    V = np.asarray(V, dtype=float)
    if V.ndim != 3 or len(set(V.shape)) != 1:
        raise DomainError("V must be an n^3 array")
    if np.any(V < 0):
        raise DomainError("V must be nonnegative")
    if c1 <= 0 or h <= 0:
        raise DomainError("c1 and h must be positive")
    integral = float(np.sum(V**2)) * h**3
    if integral == 0:
        return 0.0
    H = c1 * dirichlet_laplacian(V.shape[0], h) - sp.diags(V.ravel())
    e = negative_eigenvalues(H.tocsr())
    return float(np.sum(np.sqrt(-e))) / (ell * c1**-1.5 * integral)


def gaussian_well(n: int, h: float, depth: float, width: float) -> np.ndarray:
    """depth * exp(-r^2 / (2 width^2)) centred in an n^3 grid."""
    x = (np.arange(n) - (n - 1) / 2) * h
    X, Y, Z = np.meshgrid(x, x, x, indexing="ij")
    return depth * np.exp(-(X**2 + Y**2 + Z**2) / (2 * width**2))
