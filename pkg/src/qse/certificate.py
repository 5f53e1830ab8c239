"""Feasibility of the constant system and the resulting energy lower bound.

Three conditions must hold for some kappa and epsilon >= 0:

    kappa >= max(q / 0.031, pi Z)                                  (charge)
    (kappa alpha)^2 < 1 - epsilon <= 1                             (kinetic)
    (1-eps)^2 alpha / (1 - eps - kappa^2 alpha^2)^(3/2) <= 1/(8 pi l)   (field)

with the Lieb-Thirring constant ``l = 0.060``.  Given a feasible epsilon the
bound is

    E >= sqrt(eps) m N - (18 Lambda / pi) K C2^3,
    C2^4 = (N/K) [6 sqrt(1-eps) + (alpha/2)(sqrt(2Z) + 2.3)^2] (2 pi / 27).

kappa is always taken at its minimum; the first condition is one-sided and a
larger kappa only tightens the other two.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .core import DomainError, EnergyBoundReport, InfeasibleError, PhysicalParams

LT_CONSTANT = 0.060
FIELD_THRESHOLD = 1.0 / (8.0 * math.pi * LT_CONSTANT)
SPIN_STATES = 2
ROUNDED_KAPPA_FLOOR = 64.5
COULOMB_SHIFT = 2.3

BISECTION_TOL = 1e-12
GOLDEN_TOL = 1e-10
_GOLDEN_SCAN_POINTS = 257


def kappa_min(Z: float, q: int = SPIN_STATES, paper_mode: bool = False) -> float:
    """Smallest kinetic prefactor allowed for charge ``Z`` and ``q`` spin states.

    ``paper_mode`` replaces 2/0.031 = 64.516... by the rounded 64.5.
    """
    if q not in (2, 4):
        raise DomainError(f"q must be 2 or 4, got {q}")
    if Z < 0:
        raise DomainError(f"Z must be nonnegative, got {Z}")
    floor = ROUNDED_KAPPA_FLOOR if (paper_mode and q == 2) else q / 0.031
    return max(floor, math.pi * Z)


def needs2_lhs(epsilon: float, kappa: float, alpha: float) -> float:
    """Left side of the field-domination condition.

    Raises :class:`InfeasibleError` when ``1 - eps - (kappa alpha)^2 <= 0``.
    """
    x = 1.0 - epsilon
    den = x - (kappa * alpha) ** 2
    # a denominator at rounding level means epsilon sits on 1 - (kappa alpha)^2
    if den <= 1e-15 * max(x, 1e-300):
        raise InfeasibleError(
            f"1 - eps - (kappa alpha)^2 = {den:.3g} <= 0 (kinetic condition fails)"
        )
    return x * x * alpha / den**1.5


def conditions_hold(epsilon: float, kappa: float, alpha: float) -> bool:
    if not (0.0 <= epsilon < 1.0):
        return False
    try:
        return needs2_lhs(epsilon, kappa, alpha) <= FIELD_THRESHOLD
    except InfeasibleError:
        return False


def kappa_alpha_boundary(alpha: float, epsilon: float = 0.0) -> Optional[float]:
    """Largest kappa*alpha satisfying the kinetic and field conditions at ``epsilon``.

    Closed form: ``y^2 <= (1-eps) - ((1-eps)^2 alpha / T)^(2/3)``.
    """
    x = 1.0 - epsilon
    y2 = x - (x * x * alpha / FIELD_THRESHOLD) ** (2.0 / 3.0)
    if y2 <= 0:
        return None
    return math.sqrt(y2)


def _bisect(pred, feasible: float, infeasible: float, tol: float) -> float:
    # Returns a point on the feasible side within tol of the boundary.
    while abs(feasible - infeasible) > tol:
        mid = 0.5 * (feasible + infeasible)
        if pred(mid):
            feasible = mid
        else:
            infeasible = mid
    return feasible


def feasible_eps_interval(alpha: float, kappa: float) -> Optional[tuple[float, float]]:
    """The set of feasible epsilon as a closed interval, or None if empty.

    With ``x = 1 - eps`` and ``c = (kappa alpha)^2`` the field condition reads
    ``x^2 / (x - c)^(3/2) <= T / alpha``; the left side is unimodal in ``x``
    with its minimum at ``x = 4c``, so the feasible set is an interval.
    It contains ``eps = 0`` whenever ``kappa >= 64.5`` and ``alpha`` is in
    the physical range, but that is checked rather than assumed.
    """
    if alpha <= 0 or kappa <= 0:
        raise DomainError("alpha and kappa must be positive")
    c = (kappa * alpha) ** 2
    if c >= 1.0:
        return None
    x_star = min(4.0 * c, 1.0)
    eps_star = 1.0 - x_star

    def ok(eps: float) -> bool:
        return conditions_hold(eps, kappa, alpha)

    if not ok(eps_star):
        return None
    # eps increases as x decreases toward c, where the field condition blows up.
    hi = _bisect(ok, eps_star, 1.0 - c, BISECTION_TOL)
    if ok(0.0):
        lo = 0.0
    else:
        lo = _bisect(ok, eps_star, 0.0, BISECTION_TOL)
    return lo, hi


def eps_max(alpha: float, kappa: float) -> Optional[float]:
    """Largest feasible epsilon (bisection to 1e-12), or None if there is none."""
    interval = feasible_eps_interval(alpha, kappa)
    return None if interval is None else interval[1]


def coulomb_coefficient(alpha: float, Z: float) -> float:
    return 0.5 * alpha * (math.sqrt(2.0 * Z) + COULOMB_SHIFT) ** 2


def optimal_C2(params: PhysicalParams, epsilon: float) -> float:
    """Length scale (in units of 1/Lambda) minimizing the negative terms."""
    a = 6.0 * math.sqrt(1.0 - epsilon) + coulomb_coefficient(params.alpha, params.Z)
    return ((params.N / params.K) * a * 2.0 * math.pi / 27.0) ** 0.25


def energy_report(
    params: PhysicalParams, kappa: float, epsilon: float, C2: Optional[float] = None
) -> EnergyBoundReport:
    """Evaluate the four bound terms at ``epsilon`` and localization scale ``C2``.

    Leaving ``C2`` unset uses the optimal value.
    """
    if not (0.0 <= epsilon < 1.0):
        raise DomainError(f"epsilon must lie in [0, 1), got {epsilon}")
    if C2 is None:
        C2 = optimal_C2(params, epsilon)
    if C2 <= 0:
        raise DomainError("C2 must be positive")
    lam, N, K = params.Lambda, params.N, params.K
    C3 = 6.0 * math.sqrt(1.0 - epsilon) / C2
    return EnergyBoundReport(
        kappa=kappa,
        epsilon=epsilon,
        C2=C2,
        C3=C3,
        term_mass=math.sqrt(epsilon) * params.m * N,
        term_c3=-C3 * lam * N,
        term_coulomb=-coulomb_coefficient(params.alpha, params.Z) * lam * N / C2,
        term_field=-(9.0 / (2.0 * math.pi)) * lam * C2**3 * K,
        N=N,
    )


def closed_form_bound(params: PhysicalParams, epsilon: float) -> float:
    """``sqrt(eps) m N - (18 Lambda/pi) K C2^3`` at the optimal C2."""
    C2 = optimal_C2(params, epsilon)
    return (
        math.sqrt(epsilon) * params.m * params.N
        - 18.0 * params.Lambda / math.pi * params.K * C2**3
    )


@dataclass(frozen=True)
class StabilityCertificate:
    params: PhysicalParams
    kappa: float
    epsilon: Optional[float]
    feasible: bool
    report: Optional[EnergyBoundReport] = None
    paper_mode: bool = False
    notes: tuple[str, ...] = field(default=())

    @property
    def C2(self) -> Optional[float]:
        return None if self.report is None else self.report.C2

    @property
    def C3(self) -> Optional[float]:
        return None if self.report is None else self.report.C3

    def as_dict(self) -> dict:
        return {
            "params": self.params.as_dict(),
            "kappa": self.kappa,
            "epsilon": self.epsilon,
            "C2": self.C2,
            "C3": self.C3,
            "feasible": self.feasible,
            "paper_mode": self.paper_mode,
            "report": None if self.report is None else self.report.as_dict(),
            "notes": list(self.notes),
        }


def _golden_max(fun, a: float, b: float, tol: float) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fun(d)
    return 0.5 * (a + b)


def optimize_eps(params: PhysicalParams, paper_mode: bool = False) -> float:
    """epsilon in the feasible interval maximizing the bound per electron.

    A coarse scan brackets the maximum, then golden-section search narrows
    it to width 1e-10.  The objective need not be unimodal on the whole
    interval, hence the scan.
    """
    kappa = kappa_min(params.Z, paper_mode=paper_mode)
    interval = feasible_eps_interval(params.alpha, kappa)
    if interval is None:
        raise InfeasibleError(f"no feasible epsilon for alpha={params.alpha}, Z={params.Z}")
    lo, hi = interval

    def objective(eps: float) -> float:
        return energy_report(params, kappa, eps).total_per_electron

    if hi - lo <= GOLDEN_TOL:
        return hi
    n = _GOLDEN_SCAN_POINTS
    grid = [lo + (hi - lo) * i / (n - 1) for i in range(n)]
    grid[-1] = hi
    values = [objective(e) for e in grid]
    i = max(range(n), key=values.__getitem__)
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, n - 1)]
    best = _golden_max(objective, a, b, GOLDEN_TOL)
    # golden search never evaluates the bracket ends exactly
    candidates = [best, a, b]
    return max(candidates, key=objective)


def mass_coefficient_notes(epsilon: float) -> tuple[str, ...]:
    notes = [f"mass coefficient per electron is sqrt(epsilon) = {math.sqrt(epsilon):.6f}"]
    if abs(epsilon - 0.771) < 5e-4:
        notes.append(
            "the frequently quoted 0.866 equals sqrt(0.75), not sqrt(0.771) = 0.878; "
            "sqrt(epsilon) is reported"
        )
    return tuple(notes)


def certify(
    params: PhysicalParams, epsilon: Optional[float] = None, paper_mode: bool = False
) -> StabilityCertificate:
    """Solve the constant system for ``params`` and evaluate the bound.

    If ``epsilon`` is omitted the bound-maximizing feasible value is used.
    An infeasible system yields ``feasible=False`` and no report.
    """
    kappa = kappa_min(params.Z, paper_mode=paper_mode)
    if epsilon is None:
        try:
            epsilon = optimize_eps(params, paper_mode=paper_mode)
        except InfeasibleError:
            return StabilityCertificate(
                params, kappa, None, False, None, paper_mode,
                ("no epsilon >= 0 satisfies the kinetic and field conditions",),
            )
    elif not (0.0 <= epsilon < 1.0):
        raise DomainError(f"epsilon must lie in [0, 1), got {epsilon}")

    if not conditions_hold(epsilon, kappa, params.alpha):
        return StabilityCertificate(
            params, kappa, epsilon, False, None, paper_mode,
            (f"conditions fail at epsilon = {epsilon}",),
        )
    report = energy_report(params, kappa, epsilon)
    return StabilityCertificate(
        params, kappa, epsilon, True, report, paper_mode, mass_coefficient_notes(epsilon)
    )


def z_feasible(alpha: float, Z: float, paper_mode: bool = False) -> bool:
    return feasible_eps_interval(alpha, kappa_min(Z, paper_mode=paper_mode)) is not None


def max_Z(alpha: float, paper_mode: bool = False, Z_cap: int = 10**9) -> int:
    """Largest integer charge with a feasible certificate (0 if none).

    Feasibility is monotone in Z (kappa grows with Z and the field condition
    tightens with kappa), so doubling then bisecting over integers finds the
    same value as a linear scan.
    """
    if alpha <= 0:
        raise DomainError("alpha must be positive")
    if not z_feasible(alpha, 0, paper_mode):
        return 0
    good, bad = 0, 1
    while z_feasible(alpha, bad, paper_mode):
        good = bad
        if bad >= Z_cap:
            return Z_cap
        bad = min(2 * bad, Z_cap)
    while bad - good > 1:
        mid = (good + bad) // 2
        if z_feasible(alpha, mid, paper_mode):
            good = mid
        else:
            bad = mid
    return good


@dataclass(frozen=True)
class PhaseRow:
    alpha: float
    max_Z: int
    eps: Optional[float]


def _phase_row(args) -> PhaseRow:
    alpha, Z_max, paper_mode = args
    z = max_Z(alpha, paper_mode=paper_mode, Z_cap=Z_max)
    e = eps_max(alpha, kappa_min(z, paper_mode=paper_mode))
    return PhaseRow(alpha, z, e)


def phase_scan(
    alpha_grid: Sequence[float],
    Z_max: int = 10**9,
    paper_mode: bool = False,
    jobs: int = 1,
) -> list[PhaseRow]:
    """One row ``(alpha, max_Z, eps_max at max_Z)`` per grid value, in grid order."""
    grid = list(alpha_grid)
    if any(a <= 0 for a in grid):
        raise DomainError("alpha grid values must be positive")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise DomainError("alpha grid must be ascending")
    tasks: Iterable = [(a, Z_max, paper_mode) for a in grid]
    if jobs > 1 and len(grid) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_phase_row, tasks))
    return [_phase_row(t) for t in tasks]
