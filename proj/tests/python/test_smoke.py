import math

import pytest

import zrp


@pytest.fixture
def model():
    return zrp.RateModel(2.0, 1.0, 0.5)


def test_model_validation():
    with pytest.raises(zrp.DomainError):
        zrp.RateModel(1.0, 2.0, 0.5)
    with pytest.raises(ValueError):
        zrp.RateModel(2.0, 1.0, 1.5, mode="particle")


def test_model_cutoff(model):
    assert model.cutoff(10, 30) == 5
    particle = zrp.RateModel(2.0, 1.0, 0.5, mode="particle")
    assert particle.cutoff(10, 30) == 15
    assert model.rate(0, 2) == 0.0
    assert model.rate(3, 2) == 1.0


def test_grand_canonical(model):
    rho_c, phi_c = zrp.critical_density(model)
    assert rho_c == pytest.approx(1.0)
    assert phi_c == pytest.approx(1.0)
    assert zrp.s_fluid(1.0, model) == pytest.approx(math.log(2.0))
    p = zrp.invert_phi(0.5, 10, model)
    assert zrp.rho_R(p["phi"], 10, model) == pytest.approx(0.5, rel=1e-9)


def test_thresholds(model):
    assert zrp.rho_trans(model) == pytest.approx(2.5403998246707373, rel=1e-12)
    assert zrp.rho_meta(model) == pytest.approx(1.5)
    assert zrp.phase_label(3.0, model) == "C/F"
    xf, xc = zrp.lifetime_exponents(zrp.rho_trans(model), model)
    assert xf == pytest.approx(xc, abs=1e-10)


def test_partition_against_enumeration():
    m = zrp.RateModel(2.0, 1.0, 0.0, R=2)
    total = 0.0
    for a in range(5):
        for b in range(5 - a):
            c = 4 - a - b
            total += math.exp(sum(zrp.log_weight(k, 2, m) for k in (a, b, c)))
    assert zrp.log_partition(3, 4, m) == pytest.approx(math.log(total), rel=1e-12)


def test_phase_decomposition(model):
    d = zrp.phase_decomposition(100, 300, model)
    assert sum(d["probabilities"]) == pytest.approx(1.0)
    assert d["probabilities"][1] > 0.99


def test_sampler_and_simulation(model):
    eta = zrp.sample_canonical(20, 50, model, "condensed", seed=3)
    assert sum(eta) == 50
    assert sum(1 for k in eta if k > 10) == 1
    with pytest.raises(zrp.EmptyPhase):
        zrp.sample_canonical(4, 2, model, "condensed")
    run = zrp.simulate(20, 50, model, init="fluid", t_max=50.0, sample_dt=5.0, seed=1)
    assert len(run["t"]) == 11
    again = zrp.simulate(20, 50, model, init="fluid", t_max=50.0, sample_dt=5.0, seed=1)
    assert run == again


def test_stationarity_oracle():
    m = zrp.RateModel(2.0, 1.0, 0.0)
    r = zrp.check_stationarity(3, 4, 2, m)
    assert r["states"] == 15
    assert r["max_residual"] <= 1e-12
    asym = zrp.check_stationarity(3, 4, 2, m, kernel="asymmetric", p_right=0.8)
    assert asym["max_residual"] <= 1e-12
    assert not asym["detailed_balance"]


def test_lifetimes_and_lln(model):
    recs = zrp.lifetime_sweep([8, 10], 2.5, model, replicas=4, seed=2, workers=2)
    assert [r["L"] for r in recs] == [8, 10]
    assert all(r["fluid"]["mean"] > 0 for r in recs)
    b = zrp.lln_batches(1000, 60, 2.0, zrp.RateModel(2.0, 1.0, 0.0), batches=5, seed=1)
    assert len(b["means"]) == 5
    assert b["target"] == pytest.approx(1.0)
