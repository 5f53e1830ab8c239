"""Trace inequalities and spectral symmetries on finite Hermitian matrices."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import DomainError, PreconditionError

HERMITIAN_TOL = 1e-13
PSD_TOL = 1e-10


@dataclass(frozen=True)
class HermitianOperator:
    """A Hermitian matrix with a label; hermiticity is checked on construction."""

    entries: np.ndarray
    label: str = ""
    _evals: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        M = np.asarray(self.entries, dtype=complex)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise DomainError("a square matrix is required")
        scale = max(1.0, float(np.abs(M).max(initial=0.0)))
        if np.abs(M - M.conj().T).max(initial=0.0) > HERMITIAN_TOL * scale:
            raise DomainError("matrix is not Hermitian")
        object.__setattr__(self, "entries", 0.5 * (M + M.conj().T))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def eigvals(self) -> np.ndarray:
        if self._evals is None:
            object.__setattr__(self, "_evals", np.linalg.eigvalsh(self.entries))
        return self._evals


def _herm(H) -> HermitianOperator:
    return H if isinstance(H, HermitianOperator) else HermitianOperator(H)


def negative_part_trace(H, p: float = 1.0, zero_tol: float = 0.0) -> float:
    """``sum |e|^p`` over the negative eigenvalues of ``H``.

    Eigenvalues with ``|e| <= zero_tol`` count as zero; with p < 1 this keeps
    rounding-level negatives from being inflated by the power.
    """
    e = _herm(H).eigvals()
    neg = -e[e < -zero_tol]
    return float(np.sum(neg**p))


def positive_part_trace(H, p: float = 1.0) -> float:
    e = _herm(H).eigvals()
    return float(np.sum(e[e > 0] ** p))


def _check_psd(M, name: str) -> np.ndarray:
    M = _herm(M)
    e = M.eigvals()
    scale = max(1.0, float(np.abs(e).max(initial=0.0)))
    if e.size and e[0] < -PSD_TOL * scale:
        raise DomainError(f"{name} is not positive semidefinite (min eigenvalue {e[0]:.3g})")
    return M.entries


def bks_check(A, B, tol: float = 1e-10) -> tuple[float, float, bool]:
    """Tr[A - B]_- <= Tr[A^2 - B^2]_-^{1/2} for PSD ``A``, ``B``.

    Returns ``(lhs, rhs, passed)``.
    """
    A = _check_psd(A, "A")
    B = _check_psd(B, "B")
    if A.shape != B.shape:
        raise DomainError("A and B differ in shape")
    lhs = negative_part_trace(A - B, 1.0)
    rhs = negative_part_trace(A @ A - B @ B, 0.5)
    return lhs, rhs, lhs <= rhs + tol * max(1.0, rhs)


def _psd_sqrt(M: np.ndarray) -> np.ndarray:
    e, V = np.linalg.eigh(0.5 * (M + M.conj().T))
    return (V * np.sqrt(np.clip(e, 0.0, None))) @ V.conj().T


def _negative_part(X: np.ndarray) -> np.ndarray:
    e, V = np.linalg.eigh(X)
    return (V * np.clip(-e, 0.0, None)) @ V.conj().T


def _trace_sqrt_psd(M: np.ndarray, zero_tol: float = 0.0) -> float:
    e = np.linalg.eigvalsh(0.5 * (M + M.conj().T))
    return float(np.sum(np.sqrt(e[e > zero_tol])))


def _match_nonzero(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    scale = max(1.0, float(np.abs(np.concatenate([a, b])).max(initial=0.0)))
    a = np.sort(a[np.abs(a) > tol * scale])
    b = np.sort(b[np.abs(b) > tol * scale])
    # eigenvalues near the cut may fall on either side; compare the rest
    if len(a) != len(b):
        big = 10 * tol * scale
        a, b = a[np.abs(a) > big], b[np.abs(b) > big]
        if len(a) != len(b):
            return False
    return bool(np.allclose(a, b, rtol=0.0, atol=tol * scale))


@dataclass(frozen=True)
class ProjectionChecks:
    min_max: tuple[float, float]
    sqrt_trace: tuple[float, float]
    same_nonzero_spectrum: bool

    @property
    def passed(self) -> bool:
        tol = 1e-10
        return (
            self.min_max[0] <= self.min_max[1] + tol * max(1.0, self.min_max[1])
            and self.sqrt_trace[0] <= self.sqrt_trace[1] + tol * max(1.0, self.sqrt_trace[1])
            and self.same_nonzero_spectrum
        )


def projection_trace_checks(F, X, Y) -> ProjectionChecks:
    """Three compression inequalities for a contraction ``F``.

    (i)   Tr[F X F^*]_-^{1/2} <= Tr(F [X]_- F^*)^{1/2}
    (ii)  Tr(F Y F^*)^{1/2} <= Tr Y^{1/2}
    (iii) T^*T and T T^* share nonzero spectra, with T = Y^{1/2} F^*.

    ``F`` may be rectangular (m x n) with X, Y of size n.
    """
    F = np.asarray(F, dtype=complex)
    X = _herm(X).entries
    Y = _check_psd(Y, "Y")
    if F.ndim != 2 or F.shape[1] != X.shape[0] or X.shape != Y.shape:
        raise DomainError("shape mismatch")
    if np.linalg.norm(F, 2) > 1.0 + 1e-12:
        raise DomainError("F must be a contraction")
    Fs = F.conj().T
    zero = 1e-13 * max(1.0, float(np.abs(X).max(initial=0.0)))
    lhs1 = negative_part_trace(F @ X @ Fs, 0.5, zero)
    rhs1 = _trace_sqrt_psd(F @ _negative_part(X) @ Fs, zero)
    lhs2 = _trace_sqrt_psd(F @ Y @ Fs)
    rhs2 = _trace_sqrt_psd(Y)
    T = _psd_sqrt(Y) @ Fs
    same = _match_nonzero(
        np.linalg.eigvalsh(T.conj().T @ T), np.linalg.eigvalsh(T @ T.conj().T), 1e-10
    )
    return ProjectionChecks((lhs1, rhs1), (lhs2, rhs2), same)


# --- chiral symmetry -------------------------------------------------------


def chiral_U(n: int = 2) -> np.ndarray:
    """The block matrix [[0, I], [-I, 0]] with n x n blocks; U^2 = -I."""
    I = np.eye(n)
    Z = np.zeros((n, n))
    return np.block([[Z, I], [-I, Z]]).astype(complex)


PAULI = np.array(
    [[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex
)


def dirac_matrices() -> tuple[np.ndarray, np.ndarray]:
    """Standard-representation alpha (3, 4, 4) and beta (4, 4)."""
    Z = np.zeros((2, 2))
    alpha = np.array([np.block([[Z, s], [s, Z]]) for s in PAULI])
    beta = np.diag([1.0, 1.0, -1.0, -1.0]).astype(complex)
    return alpha, beta


def free_dirac(p, m: float) -> np.ndarray:
    """4x4 free Dirac symbol ``alpha.p + m beta``."""
    alpha, beta = dirac_matrices()
    return np.tensordot(np.asarray(p, dtype=float), alpha, axes=1) + m * beta


def spectral_projectors(H: np.ndarray, gap_tol: float = 1e-10):
    """Projectors onto the positive and negative spectral subspaces.

    Returns None when H has an eigenvalue within ``gap_tol`` of 0, where the
    splitting is a matter of convention.
    """
    e, V = np.linalg.eigh(H)
    scale = max(1.0, float(np.abs(e).max(initial=0.0)))
    if np.any(np.abs(e) <= gap_tol * scale):
        return None
    Vp, Vm = V[:, e > 0], V[:, e < 0]
    return Vp @ Vp.conj().T, Vm @ Vm.conj().T


@dataclass(frozen=True)
class ChiralResult:
    skipped: bool
    projector_residual: float
    spectrum_symmetric: bool
    compressed_spectra_match: bool | None

    @property
    def passed(self) -> bool:
        return self.skipped or (
            self.projector_residual <= 1e-10
            and self.spectrum_symmetric
            and self.compressed_spectra_match is not False
        )


def chiral_projector_check(H, U, S=None, tol: float = 1e-12) -> ChiralResult:
    """P^-(H) = U^* P^+(H) U when U H U^{-1} = -H, plus the compressed-spectrum test.

    ``S`` (optional) must commute with ``U``; then P^+ S P^+ and P^- S P^-
    have the same spectrum.
    """
    H = _herm(H).entries
    U = np.asarray(U, dtype=complex)
    Uinv = np.linalg.inv(U)
    scale = max(1.0, float(np.abs(H).max()))
    if np.abs(U @ H @ Uinv + H).max() > tol * scale:
        raise PreconditionError("U H U^{-1} != -H")
    proj = spectral_projectors(H)
    if proj is None:
        return ChiralResult(True, 0.0, True, None)
    Pp, Pm = proj
    res = float(np.abs(Pm - U.conj().T @ Pp @ U).max())
    e = np.linalg.eigvalsh(H)
    sym = bool(np.allclose(np.sort(e), np.sort(-e), rtol=0.0, atol=1e-10 * scale))
    match = None
    if S is not None:
        S = _herm(S).entries
        if np.abs(S @ U - U @ S).max() > tol * max(1.0, float(np.abs(S).max())):
            raise PreconditionError("S does not commute with U")
        a = np.linalg.eigvalsh(Pp @ S @ Pp)
        b = np.linalg.eigvalsh(Pm @ S @ Pm)
        match = bool(np.allclose(a, b, rtol=0.0, atol=1e-10 * max(1.0, float(np.abs(S).max()))))
    return ChiralResult(False, res, sym, match)


def random_chiral_hamiltonian(rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Random Hermitian H of size 2n with U H U^{-1} = -H, and the matching U."""
    U = chiral_U(n)
    G = rng.normal(size=(2 * n, 2 * n)) + 1j * rng.normal(size=(2 * n, 2 * n))
    G = G + G.conj().T
    H = G - U @ G @ np.linalg.inv(U)
    return 0.5 * (H + H.conj().T), U


def block_diag_twice(Y: np.ndarray) -> np.ndarray:
    """diag(Y, Y), which commutes with :func:`chiral_U`."""
    n = Y.shape[0]
    out = np.zeros((2 * n, 2 * n), dtype=complex)
    out[:n, :n] = Y
    out[n:, n:] = Y
    return out


# --- random ensembles ------------------------------------------------------


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    G = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (G + G.conj().T)


def random_psd(rng: np.random.Generator, n: int, kind: str = "wishart") -> np.ndarray:
    """Random PSD matrix from the ``wishart``, ``diagonal`` or ``rank_deficient`` ensemble."""
    if kind == "wishart":
        G = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        return G @ G.conj().T / n
    if kind == "diagonal":
        Q, _ = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
        return (Q * rng.exponential(size=n)) @ Q.conj().T
    if kind == "rank_deficient":
        r = int(rng.integers(0, n))
        G = rng.normal(size=(n, r)) + 1j * rng.normal(size=(n, r))
        return G @ G.conj().T / max(r, 1)
    raise DomainError(f"unknown ensemble {kind!r}")


def random_contraction(rng: np.random.Generator, m: int, n: int, rank: int | None = None) -> np.ndarray:
    """Random m x n matrix with operator norm <= 1, optionally of reduced rank."""
    G = rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n))
    U, s, Vh = np.linalg.svd(G, full_matrices=False)
    s = rng.uniform(0.0, 1.0, size=len(s))
    if rank is not None:
        s[rank:] = 0.0
    return (U * s) @ Vh
