import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from thzvlc.channel import vlc_channel_gain
from thzvlc.power import (MilpSolution, VlcDemand, branch_and_bound, min_sensing_fraction,
                          minimize_network_power, non_optimized_power, solve_decomposed,
                          solve_power_split, vlc_min_power, vlc_snr, vlc_snr_root)
from thzvlc.scenario import Point3, UserRx, drop_users
from thzvlc.sensing import sensing_gains

from oracles import milp_exhaustive, milp_scipy

FIXED = 2.0056


def random_instance(rng, n_aps=None, n_users=None, p_max=5.0):
    n_aps = n_aps or int(rng.integers(1, 9))
    n_users = n_users or int(rng.integers(1, 13))
    demands = []
    for n in range(n_users):
        ap = int(rng.integers(n_aps))
        coeff = float(10 ** rng.uniform(-8, -4))
        rhs = float(10 ** rng.uniform(-11, -7))
        demands.append(VlcDemand(n, ap, coeff, rhs))
    return demands, n_aps, p_max


def _oracle_rows(demands, p_max):
    return [(d.ap, d.coeff, d.rhs) for d in demands if d.min_power <= p_max]


def test_decomposition_matches_exhaustive_search():
    rng = np.random.default_rng(11)
    for _ in range(100):
        demands, n_aps, p_max = random_instance(rng)
        sol = solve_decomposed(demands, n_aps, p_max, FIXED)
        best = milp_exhaustive(_oracle_rows(demands, p_max), n_aps, p_max, FIXED)
        assert abs(sol.objective - best[0]) <= 1e-9
        assert sol.unserved == {d.user for d in demands if d.min_power > p_max}


def test_branch_and_bound_matches_exhaustive_search():
    rng = np.random.default_rng(12)
    for _ in range(40):
        demands, n_aps, p_max = random_instance(rng)
        bb = branch_and_bound(demands, n_aps, p_max, FIXED)
        best = milp_exhaustive(_oracle_rows(demands, p_max), n_aps, p_max, FIXED)
        assert bb.objective == pytest.approx(best[0], abs=1e-9)
        assert bb.unserved == solve_decomposed(demands, n_aps, p_max, FIXED).unserved


def test_scipy_milp_agrees():
    rng = np.random.default_rng(13)
    for _ in range(30):
        demands, n_aps, p_max = random_instance(rng)
        rows = _oracle_rows(demands, p_max)
        sol = solve_decomposed(demands, n_aps, p_max, FIXED)
        assert sol.objective == pytest.approx(milp_scipy(rows, n_aps, p_max, FIXED), abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_solution_invariants(seed):
    rng = np.random.default_rng(seed)
    demands, n_aps, p_max = random_instance(rng)
    sol = solve_decomposed(demands, n_aps, p_max, FIXED)
    for a, p in zip(sol.alpha, sol.power):
        assert 0.0 <= p <= a * p_max
        assert a in (0, 1) and (a == 1) == (p > 0)
    assert sol.objective == pytest.approx(sum(sol.power) + FIXED, rel=1e-15)
    for d in demands:
        if d.user not in sol.unserved:
            # served users meet the constraint to 1e-9 relative
            assert d.coeff * sol.power[d.ap] >= d.rhs * (1 - 1e-9)


def test_objective_grows_with_users():
    rng = np.random.default_rng(3)
    demands, n_aps, p_max = random_instance(rng, n_aps=4, n_users=12)
    objs = [solve_decomposed(demands[:k], n_aps, p_max, FIXED).objective for k in range(13)]
    assert all(a <= b for a, b in zip(objs, objs[1:]))
    assert objs[0] == FIXED


def test_single_user_four_aps_picks_its_ap():
    d = VlcDemand(0, 2, 1e-5, 1e-9)
    sol = solve_decomposed([d], 4, 5.0, FIXED)
    assert sol.alpha == (0, 0, 1, 0)
    assert sol.power[2] == pytest.approx(1e-4)
    best = milp_exhaustive([(2, 1e-5, 1e-9)], 4, 5.0, FIXED)
    assert best[1] == (0, 0, 1, 0)


def test_non_optimized(scenario):
    sol = non_optimized_power(scenario)
    assert sol.objective == pytest.approx(22.0056, abs=1e-12)
    assert sol.alpha == (1, 1, 1, 1)
    none = non_optimized_power(replace(scenario, vlc_aps=(), mode="non_optimized"))
    assert none.objective == pytest.approx(2.0056)
    assert minimize_network_power([], scenario).objective == pytest.approx(2.0056)


def test_vlc_min_power_scaling(scenario):
    ap = scenario.vlc_aps[0]
    u = UserRx(Point3(2.0, 1.0, 0.85))
    p = vlc_min_power(u, ap, scenario)
    assert vlc_min_power(u, ap, scenario, los_weight=2.0) == pytest.approx(p / 2, rel=1e-14)
    th4 = replace(scenario, thresholds=replace(scenario.thresholds, vlc_snr=4 * scenario.thresholds.vlc_snr))
    assert vlc_min_power(u, ap, th4) == pytest.approx(2 * p, rel=1e-14)
    h = vlc_channel_gain(ap, u).gain
    assert vlc_snr(h, p, scenario) == pytest.approx(scenario.thresholds.vlc_snr, rel=1e-12)
    assert vlc_min_power(u, ap, scenario, los_weight=1e-9) == math.inf
    assert vlc_min_power(u, ap, scenario, los_weight=0.0) == math.inf


def test_min_sensing_fraction_is_max(scenario):
    users = [UserRx(Point3(x, 2.0, 0.85)) for x in (1.0, 3.0, 4.9)]
    rho = min_sensing_fraction(users, scenario)
    each = [min_sensing_fraction([u], scenario) for u in users]
    assert rho == max(each)
    doubled = replace(scenario, thresholds=replace(scenario.thresholds, sensing_snr=2 * scenario.thresholds.sensing_snr))
    assert min_sensing_fraction(users, doubled) == pytest.approx(2 * rho, rel=1e-14)
    with pytest.raises(ValueError):
        min_sensing_fraction([], scenario)


def test_split_constraints_hold(scenario):
    th = scenario.thresholds
    for seed in range(50):
        drop = drop_users(scenario, seed)
        sol = solve_power_split(scenario, drop)
        assert 0.0 <= sol.rho1 <= 1.0
        assert sol.sensing_ok == (sol.required_fraction <= 1.0)
        g = sensing_gains(scenario, drop.positions, drop.rcs, blocked=False)
        for n in sol.feasible_for:
            sens = scenario.thz.budget * sol.rho1 * g[n] / scenario.thz.noise_power
            assert sens >= th.sensing_snr * (1 - 1e-12)


def test_split_with_vacuous_comm_threshold(scenario):
    relaxed = replace(scenario, thresholds=replace(scenario.thresholds, comm_snr=1e-300))
    for seed in range(20):
        drop = drop_users(relaxed, seed)
        sol = solve_power_split(relaxed, drop)
        if sol.sensing_ok and sol.rho1 < 1:
            assert sol.feasible_for == frozenset(range(len(drop)))


def test_fixed_rho1(scenario):
    s = replace(scenario, thz=replace(scenario.thz, rho1=0.3))
    assert solve_power_split(s, drop_users(s, 0)).rho1 == 0.3


def test_vlc_snr_root(scenario):
    ap = scenario.vlc_aps[0]
    assert vlc_snr_root(scenario) == pytest.approx(
        math.sqrt(scenario.thresholds.vlc_snr * ap.noise_psd * ap.bandwidth), rel=1e-15)


def test_milp_solution_vlc_power():
    assert MilpSolution((1, 0), (0.5, 0.0), 2.5056, frozenset()).vlc_power == 0.5
