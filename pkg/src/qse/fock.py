"""Discretized photon modes and field operators on a truncated Fock space.

A continuum mode integral ``int_{|k|<=Lambda} dk`` becomes a weighted sum over
k-points.  Each discrete mode carries ``sqrt(weight)`` so that the discrete
operators a_m = sqrt(w_p) a(k_p) obey [a_m, a_n^*] = delta_mn and mode sums
reproduce the continuum integrals.  Under this convention

    A(x) = (1/2pi) sum_m sqrt(w_p / |k_p|) eps_m (a_m e^{ik.x} + h.c.)

and H_f = sum_m |k_p| a_m^* a_m.  Mode index ``m = 2 p + lambda``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.spatial.transform import Rotation

from .core import DomainError, ResourceError

DEFAULT_DIM_CAP = 250_000


def polarization_pair(k) -> np.ndarray:
    """Two orthonormal vectors perpendicular to ``k``, shape (2, 3).

    eps1 = normalize(z x k), falling back to x-hat when k is parallel to z;
    eps2 = k-hat x eps1.
    """
    k = np.asarray(k, dtype=float)
    khat = k / np.linalg.norm(k)
    e1 = np.cross([0.0, 0.0, 1.0], khat)
    n = np.linalg.norm(e1)
    e1 = np.array([1.0, 0.0, 0.0]) if n <= 1e-8 else e1 / n
    e2 = np.cross(khat, e1)
    return np.stack([e1, e2])


@dataclass(frozen=True)
class ModeSet:
    """k-points in the ball |k| <= Lambda, closed under k -> -k."""

    Lambda: float
    kpoints: np.ndarray      # (P, 3)
    weights: np.ndarray      # (P,)
    polarizations: np.ndarray  # (P, 2, 3)
    antipode: np.ndarray     # (P,) index of -k

    @property
    def n_points(self) -> int:
        return len(self.kpoints)

    @property
    def n_modes(self) -> int:
        return 2 * len(self.kpoints)

    @property
    def kabs(self) -> np.ndarray:
        return np.linalg.norm(self.kpoints, axis=1)

    def mode_point(self) -> np.ndarray:
        return np.repeat(np.arange(self.n_points), 2)

    def to_json(self) -> dict:
        return {
            "Lambda": self.Lambda,
            "kpoints": self.kpoints.tolist(),
            "weights": self.weights.tolist(),
            "polarizations": self.polarizations.tolist(),
        }

    @classmethod
    def from_points(cls, Lambda: float, kpoints, weights) -> "ModeSet":
        k = np.asarray(kpoints, dtype=float).reshape(-1, 3)
        w = np.asarray(weights, dtype=float).reshape(-1)
        if len(k) != len(w):
            raise DomainError("kpoints and weights differ in length")
        if len(k) and np.any(np.linalg.norm(k, axis=1) > Lambda * (1 + 1e-12)):
            raise DomainError("k-points must lie in the ball |k| <= Lambda")
        if np.any(w <= 0):
            raise DomainError("weights must be positive")
        anti = np.empty(len(k), dtype=int)
        for p, kp in enumerate(k):
            d = np.linalg.norm(k + kp, axis=1)
            q = int(np.argmin(d))
            if d[q] > 1e-10 * max(1.0, Lambda) or abs(w[q] - w[p]) > 1e-12 * w[p]:
                raise DomainError("mode set is not symmetric under k -> -k")
            anti[p] = q
        pol = np.array([polarization_pair(kp) for kp in k]).reshape(-1, 2, 3)
        return cls(float(Lambda), k, w, pol, anti)


def build_modeset(
    Lambda: float, n_radial: int, n_angular: int, seed: Optional[int] = None
) -> ModeSet:
    """Product quadrature on the ball |k| <= Lambda.

    Radial Gauss-Legendre on [0, Lambda] (weight r^2 folded in), Gauss-Legendre
    in cos(theta) with ``n_angular`` nodes, and ``2 n_angular`` equally spaced
    azimuths offset by half a step.  The design is antipodally symmetric and
    integrates angular polynomials of degree <= 2 n_angular - 1 exactly.  A
    ``seed`` applies a reproducible random rotation.
    """
    if n_radial < 1 or n_angular < 1:
        raise DomainError("quadrature counts must be >= 1")
    r, wr = np.polynomial.legendre.leggauss(n_radial)
    r = 0.5 * Lambda * (r + 1.0)
    wr = 0.5 * Lambda * wr * r**2
    mu, wmu = np.polynomial.legendre.leggauss(n_angular)
    n_phi = 2 * n_angular
    phi = (np.arange(n_phi) + 0.5) * 2.0 * math.pi / n_phi
    wphi = 2.0 * math.pi / n_phi
    dirs, wdir = [], []
    for m_, wm in zip(mu, wmu):
        s = math.sqrt(max(0.0, 1.0 - m_ * m_))
        for ph in phi:
            dirs.append([s * math.cos(ph), s * math.sin(ph), m_])
            wdir.append(wm * wphi)
    dirs = np.array(dirs)
    if seed is not None:
        dirs = Rotation.random(random_state=seed).apply(dirs)
    k = (r[:, None, None] * dirs[None, :, :]).reshape(-1, 3)
    w = (wr[:, None] * np.array(wdir)[None, :]).reshape(-1)
    return ModeSet.from_points(Lambda, k, w)


def fock_dimension(n_modes: int, n_max: int) -> int:
    """Number of multisets of size <= n_max drawn from n_modes modes."""
    return math.comb(n_modes + n_max, n_max)


class TruncatedFock:
    """Bosonic Fock space over a mode set with total photon number <= n_max.

    Basis states are sorted mode multisets, ordered by photon number, so every
    sector cutoff is a leading block.
    """

    def __init__(self, modes: ModeSet, n_max: int, dim_cap: int = DEFAULT_DIM_CAP):
        if n_max < 0:
            raise DomainError("n_max must be >= 0")
        self.modes = modes
        self.n_max = n_max
        M = modes.n_modes
        dim = fock_dimension(M, n_max)
        if dim > dim_cap:
            raise ResourceError(f"Fock dimension {dim} exceeds cap {dim_cap}")
        self.dim = dim
        basis = []
        for n in range(n_max + 1):
            basis.extend(itertools.combinations_with_replacement(range(M), n))
        self.basis = basis
        self.index = {s: i for i, s in enumerate(basis)}
        self.sector = np.array([len(s) for s in basis], dtype=int)
        self._build_annihilators()

    def _build_annihilators(self):
        rows, cols, vals, mode = [], [], [], []
        for col, s in enumerate(self.basis):
            for m, cnt in _counts(s):
                t = list(s)
                t.remove(m)
                rows.append(self.index[tuple(t)])
                cols.append(col)
                vals.append(math.sqrt(cnt))
                mode.append(m)
        # entries of different a_m never share a (row, col) position
        self._rows = np.array(rows, dtype=int)
        self._cols = np.array(cols, dtype=int)
        self._vals = np.array(vals, dtype=float)
        self._mode = np.array(mode, dtype=int)

    def sector_size(self, max_sector: int) -> int:
        """Number of basis states with at most ``max_sector`` photons."""
        return int(np.searchsorted(self.sector, max_sector, side="right"))

    def annihilator(self, m: int) -> sp.csr_matrix:
        sel = self._mode == m
        return sp.csr_matrix(
            (self._vals[sel], (self._rows[sel], self._cols[sel])), shape=(self.dim, self.dim)
        )

    def lowering(self, coeffs) -> sp.csr_matrix:
        """``sum_m coeffs[m] a_m``."""
        c = np.asarray(coeffs, dtype=complex)
        if c.shape != (self.modes.n_modes,):
            raise DomainError("one coefficient per mode is required")
        return sp.csr_matrix(
            (self._vals * c[self._mode], (self._rows, self._cols)), shape=(self.dim, self.dim)
        )

    def field(self, coeffs) -> sp.csr_matrix:
        """Hermitian linear field ``sum_m (c_m a_m + conj(c_m) a_m^*)``."""
        low = self.lowering(coeffs)
        return (low + low.conj().T).tocsr()

    def one_body(self, h) -> sp.csr_matrix:
        """``sum_mn h[m, n] a_m^* a_n``."""
        h = np.asarray(h, dtype=complex)
        out = sp.csr_matrix((self.dim, self.dim), dtype=complex)
        for m in range(self.modes.n_modes):
            if np.any(h[m]):
                out = out + self.annihilator(m).T @ self.lowering(h[m])
        return out.tocsr()

    def pair(self, P) -> sp.csr_matrix:
        """``sum_mn P[m, n] a_m a_n``."""
        P = np.asarray(P, dtype=complex)
        out = sp.csr_matrix((self.dim, self.dim), dtype=complex)
        for m in range(self.modes.n_modes):
            if np.any(P[m]):
                out = out + self.annihilator(m) @ self.lowering(P[m])
        return out.tocsr()

    def number_weighted(self, omega) -> sp.csr_matrix:
        """Diagonal ``sum_m omega[m] a_m^* a_m``."""
        omega = np.asarray(omega, dtype=float)
        diag = np.array([sum(omega[m] for m in s) for s in self.basis])
        return sp.diags(diag).tocsr()

    def compress(self, op, max_sector: int) -> np.ndarray:
        """Dense block of ``op`` on states with at most ``max_sector`` photons."""
        n = self.sector_size(max_sector)
        block = op[:n, :n]
        return block.toarray() if sp.issparse(block) else np.asarray(block)


def _counts(s):
    for m, grp in itertools.groupby(s):
        yield m, len(list(grp))


def _expand(point_values: np.ndarray) -> np.ndarray:
    # per-point, per-polarization arrays (P, 2, ...) -> per-mode (2P, ...)
    return point_values.reshape((-1,) + point_values.shape[2:])


def field_coefficients(modes: ModeSet, x, which: str) -> np.ndarray:
    """Lowering-operator coefficients c[m, i] of the field component i at x.

    ``which`` is ``"A"``, ``"B"`` or ``"E"``; shape (2P, 3).
    """
    x = np.asarray(x, dtype=float)
    k = modes.kpoints
    kabs = modes.kabs
    phase = np.exp(1j * k @ x)
    amp = np.sqrt(modes.weights) * phase / (2.0 * math.pi)
    eps = modes.polarizations  # (P, 2, 3)
    if which == "A":
        vec = eps / np.sqrt(kabs)[:, None, None]
        c = amp[:, None, None] * vec
    elif which == "B":
        kxe = np.cross(k[:, None, :], eps)
        c = 1j * amp[:, None, None] * kxe / np.sqrt(kabs)[:, None, None]
    elif which == "E":
        c = 1j * amp[:, None, None] * eps * np.sqrt(kabs)[:, None, None]
    else:
        raise DomainError(f"unknown field {which!r}")
    return _expand(c)


@dataclass
class FieldOperators:
    A: list
    B: list
    E: list
    Hf: sp.csr_matrix

    def component(self, which: str) -> list:
        return {"A": self.A, "B": self.B, "E": self.E}[which]


def build_hf(fock: TruncatedFock) -> sp.csr_matrix:
    return fock.number_weighted(np.repeat(fock.modes.kabs, 2))


def build_operators(fock: TruncatedFock, x) -> FieldOperators:
    ops = {}
    for which in "ABE":
        c = field_coefficients(fock.modes, x, which)
        ops[which] = [fock.field(c[:, i]) for i in range(3)]
    return FieldOperators(ops["A"], ops["B"], ops["E"], build_hf(fock))


def vacuum_A2_closed_form(modes: ModeSet) -> float:
    """``<0| A(x)^2 |0> = (1/4 pi^2) sum_{lambda,k} w / |k|``."""
    return float(2.0 * np.sum(modes.weights / modes.kabs) / (4.0 * math.pi**2))


def ccr_residual(fock: TruncatedFock) -> float:
    """max_{m,n} of max|[a_m, a_n^*] - delta_mn| on states with <= n_max - 1 photons."""
    if fock.n_max < 1:
        return 0.0
    top = fock.n_max - 1
    a = [fock.annihilator(m) for m in range(fock.modes.n_modes)]
    worst = 0.0
    n = fock.sector_size(top)
    eye = np.eye(n)
    for m, am in enumerate(a):
        for k, ak in enumerate(a):
            comm = fock.compress(am @ ak.T - ak.T @ am, top)
            target = eye if m == k else 0.0
            worst = max(worst, float(np.abs(comm - target).max()) if n else 0.0)
    return worst


def field_commutators(fock: TruncatedFock, x, y) -> dict:
    """Largest entry of [A_i(x), A_j(y)], [B_i(x), B_j(y)], [A_i(x), B_j(y)].

    Evaluated on states with <= n_max - 1 photons, where products of
    truncated fields are exact.
    """
    if fock.n_max < 1:
        raise DomainError("need n_max >= 1")
    top = fock.n_max - 1
    fx, fy = build_operators(fock, x), build_operators(fock, y)
    out = {}
    for name, left, right in (("AA", fx.A, fy.A), ("BB", fx.B, fy.B), ("AB", fx.A, fy.B)):
        worst = 0.0
        for i in range(3):
            for j in range(3):
                c = fock.compress(left[i] @ right[j] - right[j] @ left[i], top)
                worst = max(worst, float(np.abs(c).max()))
        out[name] = worst
    return out
