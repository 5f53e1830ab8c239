"""Acceptance criteria.  Each test records one PASS/FAIL line (shown in the terminal summary)."""

import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from qse import field_bounds as fb
from qse.atlas import Kind, classify, critical_Z, table_rows
from qse.certificate import certify, eps_max, kappa_alpha_boundary, max_Z, z_feasible
from qse.core import PhysicalParams
from qse.fock import TruncatedFock, build_modeset, field_commutators
from qse.lattice import LatticeGauge, dirac_square_identity, random_gauge, single_mode_gauge
from qse.suites import run_suite

ALPHA = 1 / 137


@contextmanager
def criterion(number: int, title: str, limit: float):
    """Time the body, require it under ``limit`` seconds, log one line either way."""
    detail = {}
    t0 = time.perf_counter()
    ok = False
    try:
        yield detail
        ok = True
    finally:
        elapsed = time.perf_counter() - t0
        within = elapsed < limit
        status = "PASS" if ok and within else "FAIL"
        extra = ", ".join(f"{k}={v}" for k, v in detail.items())
        line = f"{status} criterion {number}: {title} [{elapsed:.2f}s < {limit:g}s] {extra}".rstrip()
        ACCEPTANCE_LINES.append(line)
        print(line)
    assert within, f"criterion {number} took {elapsed:.1f}s (limit {limit}s)"


def test_criterion_01_max_z():
    with criterion(1, "max_Z(1/137, paper_mode) == 42, 43 rejected", 1.0) as d:
        z = max_Z(ALPHA, paper_mode=True)
        d["max_Z"] = z
        assert z == 42
        assert z_feasible(ALPHA, 42, paper_mode=True)
        assert not z_feasible(ALPHA, 43, paper_mode=True)


def test_criterion_02_kappa_alpha_boundary():
    with criterion(2, "epsilon=0 boundary kappa*alpha ~ 0.97", 1.0) as d:
        y = kappa_alpha_boundary(ALPHA, 0.0)
        d["kappa_alpha"] = round(y, 6)
        assert abs(y - 0.97) <= 0.005


def test_criterion_03_eps_max():
    with criterion(3, "eps_max(1/137, 64.5) ~ 0.771", 1.0) as d:
        e = eps_max(ALPHA, 64.5)
        d["eps_max"] = round(e, 6)
        assert abs(e - 0.771) <= 0.005


def test_criterion_04_hydrogen():
    with criterion(4, "hydrogen C2 ~ 0.908, Lambda coefficient ~ -4.29", 1.0) as d:
        p = PhysicalParams(alpha=ALPHA, Z=1, N=1, K=1)
        c = certify(p, epsilon=0.771, paper_mode=True)
        assert c.feasible
        coef = -18.0 / math.pi * c.C2**3
        # the four report terms at m=0 give the same Lambda coefficient
        r = c.report
        assert (r.term_c3 + r.term_coulomb + r.term_field) / p.N == pytest.approx(coef, rel=1e-12)
        d["C2"] = round(c.C2, 5)
        d["coef"] = round(coef, 4)
        assert abs(c.C2 - 0.908) <= 0.001
        assert abs(coef + 4.29) <= 0.01
        assert r.term_mass == pytest.approx(math.sqrt(0.771))
        assert any("0.866" in n for n in c.notes)


def test_criterion_05_coulomb_suite():
    with criterion(5, "Coulomb single-particle lower bound, 1e4 configurations", 30.0) as d:
        r = run_suite("coulomb", trials=10_000, seed=0)
        d["failures"] = r.failures
        d["min_relative_margin"] = r.summary["min_relative_margin"]
        assert len(r.records) == 10_000 and r.failures == 0


def test_criterion_06_bks_suite():
    with criterion(6, "BKS inequality, 1e4 PSD pairs", 60.0) as d:
        r = run_suite("bks", trials=10_000, seed=0)
        d["failures"] = r.failures
        d["min_margin"] = r.summary["min_margin"]
        assert len(r.records) == 10_000 and r.failures == 0


def test_criterion_07_field_energy():
    with criterion(7, "field-energy norm -> 1 and pointwise B/A margins", 600.0) as d:
        levels = [fb.vnorm(fb.ConstantWeight(1.0), "B", build_modeset(1.0, nr, na))
                  for nr, na in ((1, 1), (2, 2), (3, 4))]
        d["vnorm_levels"] = [round(v, 12) for v in levels]
        assert abs(levels[-1] - 1.0) <= 1e-2
        rng = np.random.default_rng(0)
        worst = math.inf
        for _ in range(3):
            modes = build_modeset(float(rng.uniform(0.5, 2.0)), 3, 2, seed=int(rng.integers(2**31)))
            assert modes.n_modes <= 48
            fock = TruncatedFock(modes, 3)
            x = rng.uniform(-2, 2, size=3)
            for which in ("B", "A"):
                worst = min(worst, fb.pointwise_bound_check(fock, x, which))
        d["min_margin"] = worst
        assert worst >= -1e-8


def test_criterion_08_commutators():
    with criterion(8, "field commutators vanish on symmetric mode sets", 60.0) as d:
        rng = np.random.default_rng(1)
        worst = 0.0
        for nr, na, nmax in ((1, 2, 3), (2, 2, 2), (3, 2, 2)):
            fock = TruncatedFock(build_modeset(1.0, nr, na, seed=int(rng.integers(2**31))), nmax)
            comm = field_commutators(fock, rng.uniform(-2, 2, 3), rng.uniform(-2, 2, 3))
            worst = max(worst, *comm.values())
        d["max_commutator"] = worst
        assert worst <= 1e-12


def test_criterion_09_dirac_and_chiral():
    with criterion(9, "Dirac square identity on 16^3 and 1e3 chiral projector trials", 120.0) as d:
        res = [dirac_square_identity(LatticeGauge.zero(2 * math.pi, 16), ALPHA, 1.0),
               dirac_square_identity(single_mode_gauge(3.0, 16, [1, 1, 0], [1, -1, 0.5], 2.0), ALPHA, 1.0)]
        rng = np.random.default_rng(2)
        for band in (1, 2, 3):
            res.append(dirac_square_identity(random_gauge(rng, 4.0, 16, band, 3.0), 0.5, 1.0, n_probes=2))
        d["max_residual"] = max(res)
        assert max(res) <= 1e-10
        r = run_suite("projector", trials=1000, seed=0)
        d["projector_failures"] = r.failures
        assert len(r.records) == 1000 and r.failures == 0


def test_criterion_10_gradient_bound():
    with criterion(10, "localization gradient bound 36/L^2 (1 + h/L), K <= 4", 60.0) as d:
        r = run_suite("localization", trials=8, seed=0)
        d["max_sup_over_bound"] = r.summary["max_sup_over_bound"]
        assert max(rec["K"] for rec in r.records) <= 4
        assert r.failures == 0


def test_criterion_11_table_fidelity():
    with criterion(11, "decision tables reproduced, Z_fourpi(1/137) ~ 174.4", 1.0) as d:
        rows = table_rows()
        assert len(rows) == 8
        for row in rows:
            if len(row.expected) == 1:
                assert classify(row.variant, 1e-3, Z=1).kind is row.expected[0]
            else:
                assert classify(row.variant, ALPHA, Z=1).kind is row.expected[0]
                assert classify(row.variant, ALPHA, Z=200).kind is row.expected[1]
        z, _ = critical_Z(ALPHA)
        d["Z_fourpi"] = round(z, 3)
        assert abs(z - 174.4) <= 0.1
        assert Kind.INSTABILITY_FIRST_KIND.unstable


def test_criterion_12_lieb_thirring():
    with criterion(12, "Lieb-Thirring diagnostic ratios <= 1.2 on curated wells", 300.0) as d:
        r = run_suite("lt", seed=0)
        ratios = [rec["ratio"] for rec in r.records]
        d["ratios"] = [round(x, 4) for x in ratios]
        assert r.diagnostic and ratios
        assert all(x <= 1.2 for x in ratios)
