import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from qse.atlas import (
    FIELDS,
    PROJECTORS,
    Kind,
    ModelVariant,
    classify,
    critical_Z,
    free_projector_upper_bound,
    nuclei_instability_condition,
    table_rows,
)
from qse.certificate import certify
from qse.core import DomainError, PhysicalParams

ALPHA = 1 / 137


def all_variants():
    for p, f, c, q in itertools.product(PROJECTORS, FIELDS, (False, True), (False, True)):
        yield ModelVariant(p, f, c, q)


class TestClassifyExamples:
    def test_free_no_cutoff(self):
        v = classify(ModelVariant("free_D0", "classical", False, False), 1e-3)
        assert v.kind is Kind.INSTABILITY_FIRST_KIND

    def test_dressed_z42(self):
        v = classify(ModelVariant("dressed_DA", "quantized", True, True), ALPHA, Z=42, paper_mode=True)
        assert v.kind is Kind.STABLE_SECOND_KIND

    def test_dressed_z200(self):
        assert 200 * ALPHA == pytest.approx(1.46, abs=0.005)
        v = classify(ModelVariant("dressed_DA", "quantized", True, True), ALPHA, Z=200)
        assert v.kind is Kind.INSTABILITY_FIRST_KIND

    def test_alpha_c_branch(self):
        var = ModelVariant("dressed_DA", "classical", False, True)
        assert classify(var, 0.5, Z=1).kind is Kind.CONDITIONAL
        assert classify(var, 0.5, Z=1, alpha_c=0.1).kind is Kind.INSTABILITY_FIRST_KIND
        assert classify(var, 0.5, Z=1, alpha_c=0.9).kind is Kind.CONDITIONAL

    def test_bad_variant(self):
        with pytest.raises(DomainError):
            ModelVariant("other", "classical", True, True)
        with pytest.raises(DomainError):
            ModelVariant("free_D0", "semi", True, True)


def test_free_projector_ignores_coulomb():
    for v in all_variants():
        if v.projector == "free_D0":
            kind = classify(v, 1e-6).kind
            assert kind is (Kind.INSTABILITY_SECOND_KIND if v.cutoff else Kind.INSTABILITY_FIRST_KIND)


@settings(max_examples=200, deadline=None)
@given(
    st.sampled_from(list(all_variants())),
    st.floats(1e-4, 2.0),
    st.floats(0.5, 300.0),
    st.integers(1, 5),
    st.integers(1, 5),
)
def test_totality_and_consistency(variant, alpha, Z, N, K):
    v = classify(variant, alpha, Z, N, K)
    assert isinstance(v.kind, Kind) and v.citations
    if variant.projector == "dressed_DA" and variant.coulomb and not (variant.field == "quantized" and not variant.cutoff):
        feasible = certify(PhysicalParams(alpha=alpha, Z=Z, N=N, K=K)).feasible
        assert (v.kind is Kind.STABLE_SECOND_KIND) == feasible
        if not feasible and Z * alpha > 4 / math.pi:
            assert v.kind is Kind.INSTABILITY_FIRST_KIND


def test_table_fidelity():
    rows = table_rows()
    assert len(rows) == 8
    assert len({(r.table, r.variant) for r in rows}) == 8
    for r in rows:
        if len(r.expected) == 1:
            assert classify(r.variant, 1e-3, Z=1).kind is r.expected[0]
        else:
            small, large = r.expected
            assert classify(r.variant, ALPHA, Z=1).kind is small
            assert classify(r.variant, ALPHA, Z=200).kind is large


class TestCriticalZ:
    def test_value(self):
        z, _ = critical_Z(ALPHA)
        assert z == pytest.approx(174.4, abs=0.1)
        assert z == pytest.approx(548 / math.pi)

    def test_eps_three_doubles(self):
        z, ze = critical_Z(ALPHA, 3.0)
        assert ze == pytest.approx(2 * z)

    @given(st.floats(1e-4, 1.0), st.floats(0, 10), st.floats(0, 10))
    def test_monotone(self, alpha, e1, e2):
        lo, hi = sorted((e1, e2))
        assert critical_Z(alpha, lo)[1] <= critical_Z(alpha, hi)[1]

    def test_errors(self):
        with pytest.raises(DomainError):
            critical_Z(0.0)
        with pytest.raises(DomainError):
            critical_Z(0.1, -1.0)


class TestScalingBound:
    def test_arithmetic(self):
        r = free_projector_upper_bound(2, 1.0, 1.0, 1.0, 1.0)
        assert r.scaled == pytest.approx(2 ** (1 / 3) - 4) and r.scaled < 0
        assert r.unscaled == pytest.approx(2 ** (4 / 3) - 4)

    @given(st.floats(0.1, 100), st.floats(0.01, 10), st.floats(0.01, 10))
    def test_linear_in_mu(self, N, a, mu):
        r1 = free_projector_upper_bound(N, 0.1, a, 1.0, mu)
        r2 = free_projector_upper_bound(N, 0.1, a, 1.0, 2 * mu)
        assert r2.scaled == pytest.approx(2 * r1.scaled, rel=1e-12, abs=1e-300)

    @given(st.floats(0.01, 100), st.floats(0.01, 0.99))
    def test_threshold_sign(self, a, frac):
        alpha, b = 0.01, 1.0
        r = free_projector_upper_bound(1.0, alpha, a, b)
        below = frac * r.N_crit_scaled
        for mu in (0.1, 1.0, 10.0):
            assert free_projector_upper_bound(below, alpha, a, b, mu).scaled > 0
        above = r.N_crit_scaled / frac
        assert free_projector_upper_bound(above, alpha, a, b).scaled < 0
        assert free_projector_upper_bound(frac * r.N_crit_unscaled, alpha, a, b).unscaled > 0
        assert free_projector_upper_bound(r.N_crit_unscaled / frac, alpha, a, b).unscaled < 0

    @pytest.mark.parametrize("kw", [dict(a=0), dict(b=-1), dict(mu=0)])
    def test_errors(self, kw):
        args = dict(N=1.0, alpha=0.1, a=1.0, b=1.0, mu=1.0) | kw
        with pytest.raises(DomainError):
            free_projector_upper_bound(**args)


def test_nuclei_condition():
    c = 1.0
    need = ALPHA**-1.5
    assert nuclei_instability_condition([need], ALPHA, c)
    assert not nuclei_instability_condition([need * 0.99], ALPHA, c)
    assert not nuclei_instability_condition([1.0], 1.0, 1.0)  # sum of squares 1 < 2
    assert nuclei_instability_condition([1.0, 1.0], 1.0, 1.0)
    with pytest.raises(DomainError):
        nuclei_instability_condition([1.0], 0.1, 0.0)
