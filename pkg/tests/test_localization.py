import numpy as np
import pytest

from qse.core import DomainError
from qse.geometry import NuclearConfig
from qse.localization import build_localization, gradient_bound_check


@pytest.fixture(scope="module")
def single():
    return build_localization(NuclearConfig(np.zeros((1, 3)), 1.0), 1.0, 1 / 16)


def test_values_at_distances(single):
    assert single.sample([[0.5, 0, 0]], "F")[0] == pytest.approx(1.0)
    assert single.sample([[0, 4.0, 0]], "F")[0] == 0.0
    assert single.sample([[0, 4.0, 0]], "G")[0] == 1.0


def test_grid_invariants(single):
    d = single.distance_to_nuclei()
    assert np.all((single.phi1 >= 0) & (single.phi1 <= 1))
    assert np.all(single.phi1**2 + single.phi2**2 >= 0.5 - 1e-15)
    assert np.allclose(single.F**2 + single.G**2, 1.0, atol=1e-15)
    assert np.all(single.F[d < 1.0] == 1.0)
    assert np.all(single.F[d > 3.0] == 0.0)
    assert np.all((single.F >= 0) & (single.F <= 1) & (single.G >= 0) & (single.G <= 1))


def test_normalization_at_random_points(single):
    rng = np.random.default_rng(0)
    idx = tuple(rng.integers(0, s, size=1000) for s in single.F.shape)
    assert np.allclose(single.F[idx] ** 2 + single.G[idx] ** 2, 1.0, atol=1e-15)


def test_gradient_bound_single(single):
    chk = gradient_bound_check(single)
    assert chk.passed
    assert chk.bound == pytest.approx(36 * (1 + 1 / 16))


def test_flat_region_has_zero_gradient(single):
    h = single.h
    gF = np.gradient(single.F, h)
    d = single.distance_to_nuclei()
    inner = d < 1.0 - 2 * h
    assert max(np.abs(g[inner]).max() for g in gF) == 0.0


def test_far_apart_pair_matches_single(single):
    pair = build_localization(NuclearConfig(np.array([[0, 0, 0], [10.0, 0, 0]]), 1.0), 1.0, 1 / 16)
    assert gradient_bound_check(pair).sup == pytest.approx(gradient_bound_check(single).sup, rel=1e-12)


@pytest.mark.parametrize("L", [0.5, 2.0])
def test_scaling_with_L(L):
    fam = build_localization(NuclearConfig(np.zeros((1, 3)), 1.0), L, L / 8)
    chk = gradient_bound_check(fam)
    assert chk.passed and chk.bound == pytest.approx(36 / L**2 * (1 + 1 / 8))


def test_too_coarse():
    with pytest.raises(DomainError):
        build_localization(NuclearConfig(np.zeros((1, 3)), 1.0), 1.0, 0.2)
    with pytest.raises(DomainError):
        build_localization(NuclearConfig(np.zeros((1, 3)), 1.0), 0.0, 0.01)
