"""Seeded randomized verification suites.

Every trial draws from ``np.random.default_rng([seed, trial])``, so any
single trial can be replayed in isolation and results do not depend on the
number of worker processes.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import field_bounds as fb
from .fock import TruncatedFock, build_modeset, ccr_residual, field_commutators
from .geometry import NuclearConfig, coulomb_lower_bound_margin, random_configuration, vc
from .lattice import dirac_square_identity, gaussian_well, lieb_thirring_ratio, random_gauge
from .localization import build_localization, gradient_bound_check
from .spectral import (
    bks_check,
    block_diag_twice,
    chiral_projector_check,
    chiral_U,
    free_dirac,
    projection_trace_checks,
    random_chiral_hamiltonian,
    random_contraction,
    random_hermitian,
    random_psd,
    spectral_projectors,
)

PSD_ENSEMBLES = ("wishart", "diagonal", "rank_deficient")
COULOMB_CHARGES = (1.0, 10.0, 42.0)


@dataclass
class SuiteResult:
    name: str
    records: list
    diagnostic: bool = False
    summary: dict = field(default_factory=dict)

    @property
    def failures(self) -> int:
        return sum(not r["passed"] for r in self.records)

    @property
    def passed(self) -> bool:
        return self.diagnostic or self.failures == 0

    def as_dict(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "diagnostic": self.diagnostic,
            "trials": len(self.records),
            "failures": self.failures,
            "summary": self.summary,
            "records": self.records,
        }


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


# --- per-trial workers (module level so they pickle) -----------------------


def bks_trial(seed: int, trial: int, tol: float = 1e-10) -> dict:
    rng = trial_rng(seed, trial)
    n = int(rng.integers(2, 21))
    kinds = (PSD_ENSEMBLES[trial % 3], PSD_ENSEMBLES[(trial // 3) % 3])
    A = random_psd(rng, n, kinds[0])
    B = random_psd(rng, n, kinds[1])
    lhs, rhs, ok = bks_check(A, B, tol)
    return {"trial": trial, "dim": n, "ensembles": list(kinds), "lhs": lhs, "rhs": rhs,
            "margin": rhs - lhs, "passed": bool(ok)}


def coulomb_trial(seed: int, trial: int, tol: float = 1e-12) -> dict:
    rng = trial_rng(seed, trial)
    N = int(rng.integers(1, 5))
    K = int(rng.integers(1, 5))
    Z = COULOMB_CHARGES[trial % len(COULOMB_CHARGES)]
    scale = float(10.0 ** rng.uniform(-1, 1))
    el, nu = random_configuration(rng, N, K, Z, scale)
    margin = coulomb_lower_bound_margin(el, nu)
    v = vc(el, nu)
    ok = math.isnan(margin) or margin >= -tol * abs(v)
    return {"trial": trial, "N": N, "K": K, "Z": Z, "vc": v, "margin": margin, "passed": bool(ok)}


def localization_trial(seed: int, trial: int, L: float = 1.0, h: Optional[float] = None) -> dict:
    rng = trial_rng(seed, trial)
    K = int(rng.integers(1, 5))
    h = L / 12.0 if h is None else h
    positions = rng.uniform(-2.0 * L, 2.0 * L, size=(K, 3))
    fam = build_localization(NuclearConfig(positions, 1.0), L, h)
    chk = gradient_bound_check(fam)
    return {"trial": trial, "K": K, "L": L, "h": h, "sup": chk.sup, "bound": chk.bound,
            "passed": bool(chk.passed)}


def dirac_trial(seed: int, trial: int, n: int = 16, tol: float = 1e-10) -> dict:
    rng = trial_rng(seed, trial)
    band = int(rng.integers(1, n // 4))
    box = float(rng.uniform(1.0, 10.0))
    alpha = float(rng.uniform(0.001, 1.0))
    m = float(rng.uniform(0.0, 2.0))
    lat = random_gauge(rng, box, n, band, amplitude=float(rng.uniform(0.1, 5.0)))
    res = dirac_square_identity(lat, alpha, m, n_probes=2, seed=int(rng.integers(2**31)))
    return {"trial": trial, "band": band, "alpha": alpha, "m": m, "residual": res, "passed": res <= tol}


def projector_trial(seed: int, trial: int) -> dict:
    """Chiral projector symmetry, free Dirac spectrum, and the compression trace inequalities."""
    rng = trial_rng(seed, trial)
    n = int(rng.integers(1, 8))
    H, U = random_chiral_hamiltonian(rng, n)
    S = block_diag_twice(random_hermitian(rng, n))
    chiral = chiral_projector_check(H, U, S)

    p = rng.normal(size=3)
    mass = float(rng.uniform(0.1, 2.0))
    D = free_dirac(p, mass)
    free = chiral_projector_check(D, chiral_U(2))
    e = np.linalg.eigvalsh(D)
    E = math.sqrt(p @ p + mass * mass)
    free_spec = bool(np.allclose(e, [-E, -E, E, E], atol=1e-12 * max(1.0, E)))
    Pp, _ = spectral_projectors(D)
    rank_two = int(round(np.trace(Pp).real)) == 2

    d = int(rng.integers(2, 31))
    rows = int(rng.integers(1, d + 1))
    rank = int(rng.integers(0, rows + 1)) if trial % 2 else None
    F = random_contraction(rng, rows, d, rank)
    trace = projection_trace_checks(F, random_hermitian(rng, d), random_psd(rng, d, PSD_ENSEMBLES[trial % 3]))
    ok = chiral.passed and free.passed and free_spec and rank_two and trace.passed
    return {
        "trial": trial,
        "chiral_residual": chiral.projector_residual,
        "compressed_spectra_match": chiral.compressed_spectra_match,
        "free_dirac_ok": bool(free.passed and free_spec and rank_two),
        "min_max": list(trace.min_max),
        "sqrt_trace": list(trace.sqrt_trace),
        "same_nonzero_spectrum": trace.same_nonzero_spectrum,
        "passed": bool(ok),
    }


def fock_trial(seed: int, trial: int, tol: float = 1e-8) -> dict:
    """Pointwise field bounds and commutators at a random point on a 48-mode space."""
    rng = trial_rng(seed, trial)
    Lam = float(rng.uniform(0.5, 2.0))
    modes = build_modeset(Lam, 3, 2, seed=int(rng.integers(2**31)))
    fock = TruncatedFock(modes, 3)
    x = rng.uniform(-2.0, 2.0, size=3)
    margins = {w: fb.pointwise_bound_check(fock, x, w) for w in "BAE"}
    comm = field_commutators(fock, x, rng.uniform(-2.0, 2.0, size=3)) if trial == 0 else {}
    ok = all(v >= -tol for v in margins.values()) and all(v <= 1e-12 for v in comm.values())
    return {"trial": trial, "Lambda": Lam, "margins": margins, "commutators": comm, "passed": bool(ok)}


# --- suite drivers ---------------------------------------------------------


def resolve_jobs(jobs: Optional[int]) -> int:
    if jobs is None:
        env = os.environ.get("QSE_JOBS")
        jobs = int(env) if env else 1
    return max(1, int(jobs))


def _run_trials(worker: Callable, seed: int, trials: int, jobs: Optional[int]) -> list:
    jobs = resolve_jobs(jobs)
    seeds = [seed] * trials
    idx = list(range(trials))
    if jobs > 1 and trials > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(worker, seeds, idx, chunksize=max(1, trials // (4 * jobs))))
    return [worker(s, i) for s, i in zip(seeds, idx)]


def run_bks(trials: int = 10_000, seed: int = 0, jobs: Optional[int] = None) -> SuiteResult:
    recs = _run_trials(bks_trial, seed, trials, jobs)
    return SuiteResult("bks", recs, summary={"min_margin": min((r["margin"] for r in recs), default=None)})


def run_coulomb(trials: int = 10_000, seed: int = 0, jobs: Optional[int] = None) -> SuiteResult:
    recs = _run_trials(coulomb_trial, seed, trials, jobs)
    rel = [r["margin"] / abs(r["vc"]) for r in recs
           if not math.isnan(r["margin"]) and r["vc"] not in (0.0,) and math.isfinite(r["vc"])]
    return SuiteResult("coulomb", recs, summary={"min_relative_margin": min(rel, default=None)})


def run_localization(trials: int = 8, seed: int = 0, jobs: Optional[int] = None) -> SuiteResult:
    recs = _run_trials(localization_trial, seed, trials, jobs)
    return SuiteResult("localization", recs, summary={"max_sup_over_bound": max((r["sup"] / r["bound"] for r in recs), default=None)})


def run_dirac(trials: int = 20, seed: int = 0, jobs: Optional[int] = None) -> SuiteResult:
    recs = _run_trials(dirac_trial, seed, trials, jobs)
    return SuiteResult("dirac", recs, summary={"max_residual": max((r["residual"] for r in recs), default=None)})


def run_projector(trials: int = 1000, seed: int = 0, jobs: Optional[int] = None) -> SuiteResult:
    recs = _run_trials(projector_trial, seed, trials, jobs)
    return SuiteResult("projector", recs)


def run_fock(trials: int = 3, seed: int = 0, jobs: Optional[int] = None) -> SuiteResult:
    """Smeared-B norm convergence, the projected CCR, then per-trial pointwise checks."""
    levels = []
    for n_radial, n_angular in ((1, 1), (2, 2), (3, 4)):
        modes = build_modeset(1.0, n_radial, n_angular)
        levels.append(fb.vnorm(fb.ConstantWeight(1.0), "B", modes))
    ccr = ccr_residual(TruncatedFock(build_modeset(1.0, 1, 2), 3))
    recs = [{"trial": "vnorm_smeared_B", "levels": levels, "passed": abs(levels[-1] - 1.0) <= 1e-2},
            {"trial": "ccr", "residual": ccr, "passed": ccr <= 1e-12}]
    recs += _run_trials(fock_trial, seed, trials, jobs)
    return SuiteResult("fock", recs)


# smooth wells: (grid points, spacing, depth, width)
LT_WELLS = (
    (16, 0.25, 16.0, 0.6),
    (16, 0.25, 64.0, 0.6),
    (16, 0.3, 8.0, 1.0),
    (16, 0.3, 32.0, 1.0),
    (20, 0.25, 20.0, 0.8),
    (20, 0.25, 80.0, 0.8),
)


def lt_trial(seed: int, trial: int) -> dict:
    n, h, depth, width = LT_WELLS[trial % len(LT_WELLS)]
    ratio = lieb_thirring_ratio(gaussian_well(n, h, depth, width), h)
    return {"trial": trial, "n": n, "h": h, "depth": depth, "width": width, "ratio": ratio,
            "passed": ratio <= 1.2}


def run_lt(trials: int = len(LT_WELLS), seed: int = 0, jobs: Optional[int] = None) -> SuiteResult:
    """Diagnostic: ratios are logged; the suite never fails a run."""
    recs = _run_trials(lt_trial, seed, min(trials, len(LT_WELLS)), jobs)
    return SuiteResult("lt", recs, diagnostic=True,
                       summary={"max_ratio": max((r["ratio"] for r in recs), default=None)})


SUITES = {
    "bks": run_bks,
    "fock": run_fock,
    "coulomb": run_coulomb,
    "localization": run_localization,
    "dirac": run_dirac,
    "lt": run_lt,
    "projector": run_projector,
}


def run_suite(name: str, trials: Optional[int] = None, seed: int = 0, jobs: Optional[int] = None) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(name)
    fn = SUITES[name]
    return fn(seed=seed, jobs=jobs) if trials is None else fn(trials=trials, seed=seed, jobs=jobs)
