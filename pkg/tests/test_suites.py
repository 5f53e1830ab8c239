import pytest

from qse.suites import SUITES, SuiteResult, resolve_jobs, run_suite, trial_rng


def test_trial_rng_independent_of_order():
    a = trial_rng(3, 5).normal(size=4)
    trial_rng(3, 4).normal(size=100)
    assert (trial_rng(3, 5).normal(size=4) == a).all()


@pytest.mark.parametrize("name,trials", [("bks", 30), ("coulomb", 30), ("projector", 10), ("dirac", 2)])
def test_deterministic(name, trials):
    a = run_suite(name, trials=trials, seed=11).as_dict()
    b = run_suite(name, trials=trials, seed=11).as_dict()
    assert a == b and a["passed"]


def test_parallel_matches_serial():
    serial = run_suite("bks", trials=40, seed=2, jobs=1).as_dict()
    parallel = run_suite("bks", trials=40, seed=2, jobs=2).as_dict()
    assert serial == parallel


def test_resolve_jobs(monkeypatch):
    monkeypatch.delenv("QSE_JOBS", raising=False)
    assert resolve_jobs(None) == 1
    monkeypatch.setenv("QSE_JOBS", "3")
    assert resolve_jobs(None) == 3
    assert resolve_jobs(2) == 2
    assert resolve_jobs(0) == 1


def test_diagnostic_never_fails():
    r = SuiteResult("x", [{"passed": False}], diagnostic=True)
    assert r.passed and r.failures == 1
    assert not SuiteResult("y", [{"passed": False}]).passed


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope")
    assert set(SUITES) == {"bks", "fock", "coulomb", "localization", "dirac", "lt", "projector"}


def test_localization_small():
    r = run_suite("localization", trials=1, seed=0)
    assert r.passed and r.records[0]["sup"] <= r.records[0]["bound"]
