import json

import numpy as np

from gurlab import bch
from gurlab.problem import parse_problem
from gurlab.scenarios import SIGMA_X, SIGMA_Y
from gurlab.selftest import SUITES, bch_residual_order, pre_asymptotic, random_instance, run_selftest


def test_suites_pass_small_run():
    results = run_selftest(seed=3, n=60)
    assert [r.name for r in results] == list(SUITES)
    assert all(r.ok for r in results)


def test_zero_instances_is_vacuous():
    assert all(r.ok and r.total == 0 for r in run_selftest(n=0))


def test_suite_streams_are_independent():
    a = run_selftest(seed=11, n=20, suites=("taylor_coefficient_oracle",))
    b = run_selftest(seed=11, n=20)
    assert a[0].passed == b[-1].passed


def test_instances_are_replayable():
    inst = random_instance(np.random.default_rng(5))
    p = parse_problem(json.dumps(inst.problem()))
    assert np.max(np.abs(p.observables["X"].matrix - inst.x)) <= 1e-15
    assert p.params["s"] == inst.s


def test_pauli_pair_is_in_asymptotic_regime():
    slope, _ = bch_residual_order(SIGMA_X, SIGMA_Y)
    assert 5.3 <= slope <= 6.7
    assert not pre_asymptotic(SIGMA_X, SIGMA_Y)


def test_wrong_odd_coefficient_is_never_excused(monkeypatch):
    # a bad z21 leaves an eps^3 odd residual; the pre-asymptotic escape must refuse it
    monkeypatch.setitem(bch.BCH_COEFFICIENTS, "z21", -1 / 12)
    rng = np.random.default_rng(0)
    for _ in range(10):
        inst = random_instance(rng, dims=(2, 3), norm_range=(1.0, 2.0))
        assert not pre_asymptotic(inst.x, inst.y)
    res = run_selftest(n=30, suites=("bch_scaling_order",))[0]
    assert res.skipped == 0 and len(res.failures) == 30


def test_flipped_z11_fails_taylor_suite(monkeypatch):
    monkeypatch.setitem(bch.BCH_COEFFICIENTS, "z11", -0.5)
    res = run_selftest(n=40, suites=("taylor_coefficient_oracle",))[0]
    assert not res.ok and len(res.failures) == 40
