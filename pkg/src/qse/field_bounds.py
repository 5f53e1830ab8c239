"""Lower bounds on the field energy by quadratic forms in the field.

For coefficient families ``v[m, j]`` (one row per discrete mode, one column
per component j) and a weight ``w`` on space, define

    L_j(y) = sum_m sqrt(|k_m| w_m) v[m, j] e^{i k_m.y} a_m.

Then H_f >= sum_j int w L_j^* L_j exactly when the matrix ``vnorm_matrix`` has
largest eigenvalue <= 1; for w >= 0 the symmetrized forms (L +- L^*)^2 follow
with a constant subtraction.  All spatial integrals of w enter through the
two kernels

    Wminus[p, q] = int w(y) e^{i (k_q - k_p).y} dy,
    Wplus[p, q]  = int w(y) e^{i (k_p + k_q).y} dy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
import scipy.sparse as sp

from .core import DomainError, PreconditionError
from .fock import ModeSet, TruncatedFock, build_hf, build_operators, _expand

VNORM_TOL = 1e-9
TWO_PI_CUBED = (2.0 * math.pi) ** 3


# --- weights ---------------------------------------------------------------


@dataclass(frozen=True)
class ConstantWeight:
    """w(y) = value everywhere.

    Its Fourier transform is a delta at k = 0; on a mode set the delta is the
    quadrature-consistent Kronecker delta ``delta_pq / weight_p``.
    """

    value: float

    def nonnegative(self) -> bool:
        return self.value >= 0

    def total(self) -> float:
        return 0.0 if self.value == 0 else math.copysign(math.inf, self.value)

    def kernels(self, modes: ModeSet):
        P = modes.n_points
        diag = self.value * TWO_PI_CUBED / modes.weights
        minus = np.diag(diag).astype(complex)
        plus = np.zeros((P, P), dtype=complex)
        plus[np.arange(P), modes.antipode] = diag
        return minus, plus


@dataclass(frozen=True)
class DeltaWeight:
    """w(y) = sum_i c_i delta(y - x_i)."""

    points: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).reshape(-1, 3)
        c = np.asarray(self.coeffs, dtype=float).reshape(-1)
        if len(pts) != len(c):
            raise DomainError("one coefficient per point is required")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "coeffs", c)

    def nonnegative(self) -> bool:
        return bool(np.all(self.coeffs >= 0))

    def total(self) -> float:
        return float(self.coeffs.sum())

    def kernels(self, modes: ModeSet):
        # e_p(y) = e^{i k_p . y}, shape (P, n_points)
        e = np.exp(1j * modes.kpoints @ self.points.T)
        minus = (e.conj() * self.coeffs) @ e.T
        plus = (e * self.coeffs) @ e.T
        return minus, plus


def point_weight(x, C: float) -> DeltaWeight:
    """``C delta(y - x)``."""
    return DeltaWeight(np.asarray(x, dtype=float).reshape(1, 3), np.array([float(C)]))


def grid_weight(points, values, cell_volume: float) -> DeltaWeight:
    """A grid-sampled w integrated by the midpoint rule."""
    return DeltaWeight(points, np.asarray(values, dtype=float).reshape(-1) * cell_volume)


Weight = Union[ConstantWeight, DeltaWeight]


def _check_weight(w) -> None:
    if not isinstance(w, (ConstantWeight, DeltaWeight)):
        raise DomainError(f"unsupported weight description {type(w).__name__}")


# --- coefficient families --------------------------------------------------


def v_family(modes: ModeSet, family: Union[str, Callable]) -> np.ndarray:
    """Coefficients ``v[m, j]`` of shape (2P, 3).

    ``"B"``: (k ^ eps)/((2 pi)^{3/2} |k|), ``"E"``: eps/(2 pi)^{3/2},
    ``"A"``: eps/((2 pi)^{3/2} |k|).  A callable receives ``(k, eps)`` arrays
    of shapes (P, 3) and (P, 2, 3) and returns (P, 2, 3).
    """
    k = modes.kpoints
    eps = modes.polarizations
    kabs = modes.kabs[:, None, None]
    norm = (2.0 * math.pi) ** 1.5
    if callable(family):
        v = np.asarray(family(k, eps), dtype=complex)
    elif family == "B":
        v = np.cross(k[:, None, :], eps) / (norm * kabs)
    elif family == "E":
        v = eps / norm
    elif family == "A":
        v = eps / (norm * kabs)
    else:
        raise DomainError(f"unknown coefficient family {family!r}")
    if v.shape != (modes.n_points, 2, 3):
        raise DomainError(f"coefficient family has shape {v.shape}, expected {(modes.n_points, 2, 3)}")
    return _expand(v.astype(complex))


def vnorm_matrix(w, v: np.ndarray, modes: ModeSet) -> np.ndarray:
    """M[m, n] = sqrt(w_m w_n) sum_j conj(v[m, j]) v[n, j] Wminus[p_m, p_n]."""
    _check_weight(w)
    minus, _ = w.kernels(modes)
    pt = modes.mode_point()
    sw = np.sqrt(modes.weights)[pt]
    gram = v.conj() @ v.T
    return sw[:, None] * sw[None, :] * gram * minus[np.ix_(pt, pt)]


def vnorm(w, v, modes: ModeSet) -> float:
    """Largest eigenvalue of the discretized norm kernel (0 for no modes).

    ``v`` is either a family name accepted by :func:`v_family` or an array.
    """
    _check_weight(w)
    if modes.n_modes == 0:
        return 0.0
    if isinstance(v, str) or callable(v):
        v = v_family(modes, v)
    M = vnorm_matrix(w, v, modes)
    M = 0.5 * (M + M.conj().T)
    return float(np.linalg.eigvalsh(M)[-1])


# --- quadratic-form bound ---------------------------------------------------


def _ell0(v: np.ndarray, modes: ModeSet) -> np.ndarray:
    pt = modes.mode_point()
    return (np.sqrt(modes.kabs * modes.weights)[pt])[:, None] * v


def quadratic_bound_operator(fock: TruncatedFock, w, v, form: str = "normal"):
    """Sparse ``H_f - RHS`` for the chosen form, plus the constant part of RHS.

    ``form`` is ``"normal"`` for int w L^*L, or ``"symmetrized_plus"`` /
    ``"symmetrized_minus"`` for the (L +- L^*)^2 forms.  Returns
    ``(operator, constant)`` where the constant (already included) is the
    subtraction term.
    """
    _check_weight(w)
    modes = fock.modes
    if isinstance(v, str) or callable(v):
        v = v_family(modes, v)
    if form not in ("normal", "symmetrized_plus", "symmetrized_minus"):
        raise DomainError(f"unknown form {form!r}")
    hf = build_hf(fock)
    if modes.n_modes == 0:
        return hf, 0.0
    minus, plus = w.kernels(modes)
    pt = modes.mode_point()
    ell = _ell0(v, modes)
    Q = np.zeros((modes.n_modes,) * 2, dtype=complex)
    for j in range(v.shape[1]):
        Q += np.outer(ell[:, j].conj(), ell[:, j]) * minus[np.ix_(pt, pt)]
    if form == "normal":
        return (hf - fock.one_body(Q)).tocsr(), 0.0
    if not w.nonnegative():
        raise DomainError("symmetrized forms need a nonnegative weight")
    total = w.total()
    if not math.isfinite(total):
        raise DomainError("symmetrized forms need a weight with finite integral")
    sign = 1.0 if form == "symmetrized_plus" else -1.0
    P = np.zeros_like(Q)
    for j in range(v.shape[1]):
        P += np.outer(ell[:, j], ell[:, j]) * plus[np.ix_(pt, pt)]
    pair = fock.pair(P)
    c = float(np.sum(np.abs(ell) ** 2))
    rhs = 0.25 * sign * (pair + pair.conj().T) + 0.5 * fock.one_body(Q)
    # -(1/4) c int w from reordering, then -(1/2) c int w from the bound itself
    constant = 0.5 * c * total
    const_op = (0.25 * c * total - constant) * sp.identity(fock.dim, format="csr")
    return (hf - rhs - const_op).tocsr(), constant


def _min_eig(block: np.ndarray) -> float:
    if block.size == 0:
        return math.inf
    return float(np.linalg.eigvalsh(0.5 * (block + block.conj().T))[0])


def quadratic_bound_check(fock: TruncatedFock, w, v, form: str = "normal") -> float:
    """Minimum eigenvalue of ``H_f - RHS`` on photon sectors <= n_max - 2.

    Raises :class:`PreconditionError` when the norm condition fails.
    """
    modes = fock.modes
    if isinstance(v, str) or callable(v):
        v = v_family(modes, v)
    nv = vnorm(w, v, modes)
    if nv > 1.0 + VNORM_TOL:
        raise PreconditionError(f"norm condition violated: {nv:.6g} > 1")
    if fock.n_max < 2:
        raise DomainError("quadratic_bound_check needs n_max >= 2")
    op, _ = quadratic_bound_operator(fock, w, v, form)
    return _min_eig(fock.compress(op, fock.n_max - 2))


# --- closed-form bounds ----------------------------------------------------

BOUND_KINDS = ("smeared_B", "pointwise_B", "pointwise_E", "pointwise_A")


@dataclass(frozen=True)
class BoundConstants:
    kind: str
    field: str
    prefactor: float
    subtraction: float
    C: float | None
    per_unit_weight: bool
    derived: bool


def bound_constants(kind: str, Lambda: float) -> BoundConstants:
    """Prefactor and subtraction of the closed-form field-energy bounds.

    smeared_B:   H_f >= (1/8pi) int B^2 w - (Lambda^4/8pi^2) int w
    pointwise_B: H_f >= (9pi/8) Lambda^-3 B(x)^2 - (9/8) Lambda,    C = 9 pi^2 / Lambda^3
    pointwise_E: as pointwise_B with E in place of B (derived by the same normalization)
    pointwise_A: H_f >= (3pi/8) Lambda^-1 A(x)^2 - (3/4) Lambda,    C = 3 pi^2 / Lambda
    """
    if not Lambda > 0:
        raise DomainError("Lambda must be positive")
    if kind == "smeared_B":
        return BoundConstants(kind, "B", 1 / (8 * math.pi), Lambda**4 / (8 * math.pi**2), None, True, False)
    if kind in ("pointwise_B", "pointwise_E"):
        return BoundConstants(
            kind,
            kind[-1],
            9 * math.pi / (8 * Lambda**3),
            9 * Lambda / 8,
            9 * math.pi**2 / Lambda**3,
            False,
            kind == "pointwise_E",
        )
    if kind == "pointwise_A":
        return BoundConstants(kind, "A", 3 * math.pi / (8 * Lambda), 3 * Lambda / 4, 3 * math.pi**2 / Lambda, False, False)
    raise DomainError(f"unknown bound kind {kind!r}; expected one of {BOUND_KINDS}")


def pointwise_bound_check(fock: TruncatedFock, x, which: str = "B") -> float:
    """Minimum eigenvalue of ``H_f - prefactor X(x)^2 + subtraction`` on sectors <= n_max - 2."""
    if which not in ("B", "E", "A"):
        raise DomainError(f"unknown field {which!r}")
    if fock.n_max < 3:
        raise DomainError("pointwise_bound_check needs n_max >= 3")
    const = bound_constants("pointwise_" + which, fock.modes.Lambda)
    top = fock.n_max - 2
    hf = fock.compress(build_hf(fock), top)
    if fock.modes.n_modes == 0:
        return _min_eig(hf + const.subtraction * np.eye(len(hf)))
    comps = build_operators(fock, x).component(which)
    sq = sum(fock.compress(X @ X, top) for X in comps)
    return _min_eig(hf - const.prefactor * sq + const.subtraction * np.eye(len(hf)))
