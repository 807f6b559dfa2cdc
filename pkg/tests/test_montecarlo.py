import numpy as np
import pytest
from scipy.stats import expon, kstest

from qstime.chain import srw_chain
from qstime.graphs import build_complete, build_cycle
from qstime.killed import target_set
from qstime.laws import hitting_law, tail_from_pi
from qstime.montecarlo import (
    HitSample,
    SimConfig,
    empirical_tail,
    sample_hitting,
    sample_killed_local_time,
    wilson_interval,
)


@pytest.fixture(scope="module")
def k4():
    return srw_chain(build_complete(4))


@pytest.fixture(scope="module")
def c4():
    return srw_chain(build_cycle(4))


def test_fixed_seed_reproducible(k4):
    cfg = SimConfig(samples=5000, seed=123, start="pi")
    a = sample_hitting(k4, [0], cfg)
    b = sample_hitting(k4, [0], cfg)
    assert np.array_equal(a.hit_times, b.hit_times)
    assert np.array_equal(a.jumps, b.jumps)
    assert np.array_equal(a.local_times, b.local_times)


def test_workers_reproducible_and_split(k4):
    cfg = SimConfig(samples=5001, seed=5, start="pi", workers=3)
    a = sample_hitting(k4, [0], cfg)
    b = sample_hitting(k4, [0], cfg)
    assert np.array_equal(a.hit_times, b.hit_times)
    assert len(a) == 5001


def test_start_inside_target_hits_immediately(k4):
    cfg = SimConfig(samples=100, seed=1, start="vertex:0")
    batch = sample_hitting(k4, [0], cfg)
    assert np.all(batch.hit_times == 0.0)
    assert np.all(batch.jumps == 0)


def test_k4_mean_within_three_sigma(k4):
    n = 100_000
    batch = sample_hitting(k4, [0], SimConfig(samples=n, seed=42, start="vertex:1"))
    assert abs(batch.hit_times.mean() - 3.0) < 3.0 * (3.0 / np.sqrt(n))
    assert batch.censored_fraction == 0.0


def test_c4_tail_within_wilson_band(c4):
    n = 100_000
    law = hitting_law(c4, target_set(c4, [0]))
    batch = sample_hitting(c4, [0], SimConfig(samples=n, seed=7, start="pi"))
    grid = np.array([0.25, 0.5, 1.0, 2.0, 4.0])
    est = empirical_tail(batch, grid, z=3.0)
    exact = tail_from_pi(law, grid)
    assert np.all(est.lower <= exact) and np.all(exact <= est.upper)


def test_empirical_tail_monotone_and_t0(c4):
    batch = sample_hitting(c4, [0], SimConfig(samples=20_000, seed=3, start="pi"))
    grid = np.linspace(0.0, 5.0, 21)
    est = empirical_tail(batch, grid)
    assert np.all(np.diff(est.survival) <= 0)
    # at t = 0 the survival equals the fraction not starting inside A
    frac_outside = float((batch.hit_times > 0).mean())
    assert est.survival[0] == pytest.approx(frac_outside)
    assert np.all(est.lower <= est.survival) and np.all(est.survival <= est.upper)


def test_quasi_stationary_start_is_exponential(c4):
    n = 50_000
    law = hitting_law(c4, target_set(c4, [0]))
    batch = sample_hitting(c4, [0], SimConfig(samples=n, seed=9, start="qs"))
    stat = kstest(batch.hit_times, expon(scale=law.e_alpha_ta).cdf).statistic
    assert stat < 1.62762 / np.sqrt(n)  # 1% critical value


def test_quasi_stationary_component_start():
    c8 = srw_chain(build_cycle(8))
    # component 1 of C_8 split at {0, 4} is {5, 6, 7}; its law is exponential too
    comps = target_set(c8, [0, 4]).components
    assert comps[1].tolist() == [5, 6, 7]
    batch = sample_hitting(c8, [0, 4], SimConfig(samples=4000, seed=13, start="qs:1"))
    assert batch.hit_times.min() > 0
    with pytest.raises(ValueError, match="out of range"):
        sample_hitting(c8, [0, 4], SimConfig(samples=10, seed=1, start="qs:5"))


def test_censoring_counted_and_flagged(k4):
    with pytest.warns(UserWarning, match="censored"):
        batch = sample_hitting(
            k4, [0], SimConfig(samples=2000, seed=11, start="vertex:2", horizon=0.5)
        )
    assert batch.flagged
    assert batch.censored.sum() > 0
    assert np.all(batch.hit_times[batch.censored] == 0.5)
    with pytest.raises(ValueError, match="censored"):
        empirical_tail(batch, [1.0])


def test_batch_iterates_as_samples(k4):
    batch = sample_hitting(k4, [0], SimConfig(samples=16, seed=2, start="pi"))
    samples = list(batch)
    assert len(samples) == 16
    assert all(isinstance(s, HitSample) for s in samples)
    assert all(s.local_time_at_origin <= s.hit_time or s.hit_time == 0.0 for s in samples)


def test_invalid_configs(k4):
    with pytest.raises(ValueError):
        SimConfig(samples=0, seed=1)
    with pytest.raises(ValueError):
        SimConfig(samples=10, seed=1, horizon=-1.0)
    with pytest.raises(ValueError):
        sample_hitting(k4, [0, 1, 2, 3], SimConfig(samples=10, seed=1))
    with pytest.raises(ValueError):
        sample_hitting(k4, [0], SimConfig(samples=10, seed=1, start="nowhere"))


def test_local_time_positive_from_origin(k4):
    lt = sample_killed_local_time(k4, 0, 1.0, SimConfig(samples=500, seed=21, start="vertex:0"))
    assert np.all(lt.local_times > 0)
    assert np.all(lt.hit_before_kill)


def test_local_time_ratio_matches_memoryless_identity(k4):
    # E_x[L_o(tau)] / E_o[L_o(tau)] = P_x(T_o <= tau) = 1/3 on K_4 at rate 1/t_2
    n = 100_000
    rate = 1.0 / (2.0 * k4.t_rel)
    lt_x = sample_killed_local_time(k4, 0, rate, SimConfig(samples=n, seed=31, start="vertex:1"))
    lt_o = sample_killed_local_time(k4, 0, rate, SimConfig(samples=n, seed=32, start="vertex:0"))
    mx, mo = lt_x.local_times.mean(), lt_o.local_times.mean()
    ratio = mx / mo
    sigma = ratio * np.sqrt(
        lt_x.local_times.var() / (n * mx**2) + lt_o.local_times.var() / (n * mo**2)
    )
    assert abs(ratio - 1.0 / 3.0) < 3.0 * sigma
    # the hit indicator estimates the same probability
    assert abs(lt_x.hit_before_kill.mean() - 1.0 / 3.0) < 3.0 * np.sqrt(2.0 / 9.0 / n)


def test_hit_probability_decreases_with_kill_rate(k4):
    cfg = lambda seed: SimConfig(samples=20_000, seed=seed, start="vertex:1")
    slow = sample_killed_local_time(k4, 0, 0.2, cfg(41))
    fast = sample_killed_local_time(k4, 0, 20.0, cfg(41))
    assert fast.hit_before_kill.mean() < slow.hit_before_kill.mean()
    assert fast.hit_before_kill.mean() < 0.2


def test_wilson_interval_basic():
    lo, hi = wilson_interval(np.array([50.0]), 100, z=1.96)
    assert lo[0] < 0.5 < hi[0]
    lo0, hi0 = wilson_interval(np.array([0.0]), 100, z=1.96)
    assert lo0[0] == 0.0 and hi0[0] > 0.0
    loN, hiN = wilson_interval(np.array([100.0]), 100, z=1.96)
    assert hiN[0] == pytest.approx(1.0, abs=1e-12) and loN[0] < 1.0
