import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import random_functions
from sacq import circuits
from sacq.boolfn import all_functions, sac_report
from sacq.estimators import (
    ExperimentConfig,
    classical_estimate,
    confidence_interval,
    estimate,
    hoeffding_margin,
    nqubit_estimate,
    plan_samples,
    qsac_estimate,
    qsac_coverage,
)

N3 = list(all_functions(3))


# --- planning --------------------------------------------------------------

def test_plan_qsac_738():
    assert plan_samples(0.05, 0.05, "QSAC", 4) == oracles.hoeffding_m(math.log(40), 0.005) == 738


def test_plan_qsac_independent_of_n():
    assert plan_samples(0.05, 0.05, "QSAC", 2) == plan_samples(0.05, 0.05, "QSAC", 20)
    assert plan_samples(0.05, 0.05, "AUTOCORRELATION", 9) == 738


def test_plan_classical():
    assert plan_samples(1, 0.05, "CLASSICAL", 4) == 60
    # 256 * ln 40 / 0.0025 = 377741.25...
    assert plan_samples(0.05, 0.05, "CLASSICAL", 8) == 377742


def test_plan_nqubit():
    expected = math.ceil(15 * math.log(40) / (2 * 0.05 ** 2))
    assert plan_samples(0.05, 0.05, "DIRECT", 4) == expected == 11067
    assert plan_samples(0.05, 0.05, "FORRELATION", 4) == expected


def test_plan_acceptance_m():
    assert plan_samples(0.1, 0.1, "QSAC", 4) == 150


@pytest.mark.parametrize("t,delta", [(0, 0.05), (-1, 0.05), (0.1, 0), (0.1, 1), (0.1, 1.5)])
def test_plan_rejects(t, delta):
    with pytest.raises(ValueError):
        plan_samples(t, delta, "QSAC", 3)


def test_plan_unknown_variant():
    with pytest.raises(ValueError):
        plan_samples(0.1, 0.1, "GROVER", 3)


def test_confidence_interval_inverts_plan():
    lo, hi = confidence_interval(0.3, 738, 0.05, 1.0)
    assert abs((hi - lo) / 2 - 0.05) < 1e-4
    assert abs((hi + lo) / 2 - 0.3) < 1e-15


@given(st.integers(1, 10 ** 6), st.floats(0.001, 0.999), st.floats(0.1, 100))
def test_margin_scaling(m, delta, width):
    t = hoeffding_margin(m, delta, width)
    assert math.isclose(hoeffding_margin(4 * m, delta, width), t / 2, rel_tol=1e-12)
    assert math.isclose(hoeffding_margin(m, delta, 2 * width), 2 * t, rel_tol=1e-12)
    # plugging back into 2 exp(-2 m t^2 / w^2) recovers delta
    assert math.isclose(2 * math.exp(-2 * m * t * t / width ** 2), delta, rel_tol=1e-9)


def test_margin_rejects():
    with pytest.raises(ValueError):
        hoeffding_margin(0, 0.1)
    with pytest.raises(ValueError):
        hoeffding_margin(10, 1.0)


# --- config ----------------------------------------------------------------

def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig("QSAC", m=0)
    with pytest.raises(ValueError):
        ExperimentConfig("QSAC")
    with pytest.raises(ValueError):
        ExperimentConfig("QSAC", t=0.1, delta=1.0)
    with pytest.raises(ValueError):
        ExperimentConfig("GROVER", m=5)
    with pytest.raises(ValueError):
        ExperimentConfig("QSAC", m=5, seed=2 ** 64)
    assert ExperimentConfig("qsac", t=0.05, delta=0.05).samples(7) == 738


# --- classical -------------------------------------------------------------

def test_classical_x1_exact_for_any_m(x1_2):
    rep = classical_estimate(x1_2, ExperimentConfig("CLASSICAL", m=37, seed=5))
    d1 = rep.directions[0]
    assert d1.sample_mean == -1 and d1.bias_estimate == -4
    assert rep.directions[1].bias_estimate == 4
    assert rep.aggregate == 4
    assert rep.oracle_calls == 2 * 37 * 2


def test_classical_exhaustive_x1(x1_2):
    rep = classical_estimate(x1_2, ExperimentConfig("CLASSICAL", exhaustive=True))
    assert rep.aggregate == 4 == sac_report(x1_2).epsilon_exact
    assert rep.m == 4


def test_classical_exhaustive_matches_exact_n3():
    cfg = ExperimentConfig("CLASSICAL", exhaustive=True)
    for f in N3:
        rep = classical_estimate(f, cfg)
        assert rep.aggregate == oracles.epsilon(f.table.tolist())
        assert [d.bias_estimate for d in rep.directions] == \
            oracles.weight1_autocorr(f.table.tolist())


def test_classical_sac_intervals_contain_zero(bent4):
    cfg = ExperimentConfig("CLASSICAL", m=10 ** 4, t=1.0, delta=0.05, seed=8)
    rep = classical_estimate(bent4, cfg)
    for d in rep.directions:
        lo, hi = d.interval
        assert lo <= 0 <= hi
    assert rep.planned_m == plan_samples(1.0, 0.05, "CLASSICAL", 4)


def test_classical_reproducible(bent4):
    cfg = ExperimentConfig("CLASSICAL", m=500, seed=77)
    assert classical_estimate(bent4, cfg).to_dict() == classical_estimate(bent4, cfg).to_dict()


# --- QSAC ------------------------------------------------------------------

def test_qsac_x1_deterministic(x1_2):
    rep = qsac_estimate(x1_2, ExperimentConfig("QSAC", m=50, seed=1))
    assert rep.directions[0].sample_mean == 0
    assert rep.directions[0].bias_estimate == 4
    assert rep.directions[1].sample_mean == 1
    assert rep.aggregate == 4


def test_qsac_exact_matches_exact_n3():
    cfg = ExperimentConfig("QSAC", exhaustive=True)
    for f in N3:
        rep = qsac_estimate(f, cfg)
        assert rep.aggregate == oracles.epsilon(f.table.tolist())
        mags = [abs(v) for v in oracles.weight1_autocorr(f.table.tolist())]
        assert [d.bias_estimate for d in rep.directions] == mags


def test_qsac_sign_relation_n3():
    # the autocorrelation at e_i equals 2^n (p_i - (1 - p_i)) with p_i = Pr[target = 1]
    for f in N3:
        ac = oracles.weight1_autocorr(f.table.tolist())
        for i in range(1, 4):
            p = circuits.qsac_iteration(f, i).exact[1]
            assert abs(8 * (2 * p - 1) - ac[i - 1]) <= 1e-12


def test_qsac_sac_planned(bent4):
    hits = 0
    for seed in range(40):
        rep = qsac_estimate(bent4, ExperimentConfig("QSAC", t=0.05, delta=0.05, seed=seed))
        assert rep.m == 738
        hits += sum(abs(1 - 2 * d.sample_mean) <= 0.2 for d in rep.directions)
    assert hits / (40 * 4) >= 0.95


def test_qsac_consistency_improves_with_m():
    for f in random_functions(4, 5, seed=31):
        eps = sac_report(f).epsilon_exact
        err = {}
        for m in (10 ** 3, 10 ** 5):
            errs = [abs(qsac_estimate(f, ExperimentConfig("QSAC", m=m, seed=s)).aggregate - eps)
                    for s in range(10)]
            err[m] = np.mean(errs)
        assert err[10 ** 5] < err[10 ** 3]


def test_qsac_coverage_small():
    f = random_functions(4, 1, seed=2)[0]
    cov = qsac_coverage(f, 0.1, 0.1, repetitions=100, seed=1)
    assert cov.m == 150
    assert min(cov.per_coordinate) >= 0.85


# --- direct / forrelation --------------------------------------------------

def test_direct_sac_no_zero_outcomes(bent4):
    rep = nqubit_estimate(bent4, ExperimentConfig("DIRECT", m=10 ** 4, seed=3))
    assert all(d.counts[0] == 0 for d in rep.directions)
    assert rep.verdict is True
    assert rep.aggregate == 0
    assert rep.oracle_calls == 4 * 2 * 10 ** 4


def test_direct_not_sac(x1_2):
    rep = nqubit_estimate(x1_2, ExperimentConfig("DIRECT", m=100, seed=3))
    assert rep.verdict is False
    assert rep.aggregate == 4


def test_direct_exact_n3():
    cfg = ExperimentConfig("DIRECT", exhaustive=True)
    for f in N3:
        rep = nqubit_estimate(f, cfg)
        assert rep.aggregate == oracles.epsilon(f.table.tolist())
        assert rep.verdict == (rep.aggregate == 0)


def test_forrelation_verdicts(bent4, x1_2):
    rep = nqubit_estimate(bent4, ExperimentConfig("FORRELATION", m=2000, seed=4))
    assert rep.verdict is True and rep.aggregate is None
    assert all(d.sample_mean == 1 for d in rep.directions)
    assert rep.oracle_calls == 4 * 5 * 2000
    f = random_functions(3, 1, seed=12)[0]
    if not sac_report(f).is_sac:
        rep = nqubit_estimate(f, ExperimentConfig("FORRELATION", exhaustive=True))
        assert rep.verdict is False


def test_estimate_dispatch(bent4):
    for alg in ("CLASSICAL", "QSAC", "DIRECT", "FORRELATION"):
        rep = estimate(bent4, ExperimentConfig(alg, exhaustive=True))
        assert rep.algorithm == alg
        assert rep.verdict is True


def test_wrong_config_rejected(bent4):
    with pytest.raises(ValueError):
        qsac_estimate(bent4, ExperimentConfig("CLASSICAL", m=3))
    with pytest.raises(ValueError):
        classical_estimate(bent4, ExperimentConfig("QSAC", m=3))
    with pytest.raises(ValueError):
        nqubit_estimate(bent4, ExperimentConfig("QSAC", m=3))
