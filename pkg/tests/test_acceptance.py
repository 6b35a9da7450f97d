"""Acceptance criteria, each checked at its stated tolerance and trial count.

Every test records one PASS/FAIL line; the lines are repeated in the pytest
terminal summary.  Monte Carlo criteria use BASE_SEED for every point so
that comparisons across modes, blockage states and sweep values are paired.
"""

from __future__ import annotations

import subprocess
import sys
from dataclasses import replace

import numpy as np
import pytest

from thzvlc.engine import TRIAL_FIELDS, aggregate, run_trial, trial_seed
from thzvlc.power import VlcDemand, minimize_network_power, solve_power_split, vlc_snr, vlc_snr_root
from thzvlc.power import vlc_coefficient
from thzvlc.scenario import default_scenario, drop_users
from thzvlc.sensing import detection_probability, sensing_gains
from thzvlc.channel import lambertian_order, concentrator_gain, sensing_path_loss_array, thz_spreading_gain

from oracles import detection_probability_quad, milp_exhaustive

pytestmark = pytest.mark.acceptance

BASE_SEED = 20240601
TRIALS = 1000
NON_OPTIMIZED_TOTAL = 22.0056

_cache: dict = {}
_checked = {"trials": 0, "violations": 0}


def mc(s, trials: int = TRIALS, seed: int = BASE_SEED) -> dict[str, float]:
    """Mean of every trial field; also audits user conservation trial by trial."""
    key = (s, trials, seed)
    if key not in _cache:
        rows = []
        for i in range(trials):
            t = run_trial(s, trial_seed(seed, i))
            m = t.metrics
            _checked["trials"] += 1
            if m.thz_user_count + m.vlc_user_count + m.unserved_count != s.user_count:
                _checked["violations"] += 1
            rows.append(t.scalars())
        _cache[key] = aggregate(rows, seed).mean
    return _cache[key]


def with_users(s, n):
    return replace(s, user_count=n)


def with_lambda(s, lam):
    return replace(s.with_blockage(True), blockage=replace(s.blockage, density=lam))


def with_fa(s, fa):
    return replace(s, thresholds=replace(s.thresholds, false_alarm=fa))


def nondecreasing(xs, strict=False):
    return all((b > a) if strict else (b >= a) for a, b in zip(xs, xs[1:]))


def fmt(xs):
    return "[" + ", ".join(f"{x:.4g}" for x in xs) + "]"


S = default_scenario()
LAMBDAS = (2.0, 4.0, 6.0, 8.0)
# fa_p = 1 is outside the detector's domain; 0.9 closes the axis
FALSE_ALARMS = (1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 0.9)


# 1 -------------------------------------------------------------------------
def test_c01_detection_anchor(verdict):
    worst = max(abs(detection_probability(0.0, fa) - fa) for fa in (1e-5, 1e-2, 0.3, 0.9))
    pd = detection_probability(10.0, 1e-2)
    oracle = detection_probability_quad(10.0, 1e-2)
    ok = worst <= 1e-12 and abs(pd - 0.7986) <= 5e-4 and abs(pd - oracle) <= 5e-4
    assert verdict("1 detection anchor", ok,
                   f"max |P_d(0)-fa|={worst:.1e}; P_d(10,1e-2)={pd:.6f}, quadrature {oracle:.6f}")


# 2 -------------------------------------------------------------------------
def test_c02_milp_optimality(verdict):
    rng = np.random.default_rng(BASE_SEED)
    root = vlc_snr_root(S)
    gamma = S.thresholds.vlc_snr
    worst_gap, worst_snr = 0.0, 0.0
    for _ in range(100):
        n_aps = int(rng.integers(1, 9))
        n_users = int(rng.integers(1, 13))
        s = replace(S, vlc_aps=tuple(S.vlc_aps[0] for _ in range(n_aps)))
        gains = 10 ** rng.uniform(-12, -4, size=n_users)  # spans served and out-of-reach users
        aps = rng.integers(n_aps, size=n_users)
        coeff = vlc_coefficient(gains, s)
        demands = [VlcDemand(n, int(a), float(c), root) for n, (a, c) in enumerate(zip(aps, coeff))]
        sol = minimize_network_power(demands, s)
        p_max = s.vlc_aps[0].max_power
        rows = [(d.ap, d.coeff, d.rhs) for d in demands if d.min_power <= p_max]
        best = milp_exhaustive(rows, n_aps, p_max, s.thz.budget)
        worst_gap = max(worst_gap, abs(sol.objective - best[0]))
        for n in range(n_users):
            if n not in sol.unserved:
                snr = vlc_snr(gains[n], sol.power[aps[n]], s)
                worst_snr = max(worst_snr, (gamma - snr) / gamma)
    ok = worst_gap <= 1e-9 and worst_snr <= 1e-9
    assert verdict("2 MILP optimality", ok,
                   f"max |obj - exhaustive| = {worst_gap:.1e} W; max SNR shortfall = {max(worst_snr, 0):.1e} rel")


# 3 -------------------------------------------------------------------------
def test_c03_power_split_tradeoff(verdict):
    means, worst = [], 0.0
    per_trial_ok = True
    for p_w in (2.0, 4.0, 6.0):
        s = replace(S, thz=replace(S.thz, total_power=p_w))
        rho = []
        for i in range(TRIALS):
            drop = drop_users(s, trial_seed(BASE_SEED, i))
            sol = solve_power_split(s, drop)
            rho.append(sol.rho1)
            g_s = sensing_gains(s, drop.positions, drop.rcs, blocked=False)
            pos = drop.positions
            d_c = np.linalg.norm(pos - s.thz_comm_ap.as_array(), axis=1)
            g_c = thz_spreading_gain(d_c, s.thz.carrier_frequency) * np.exp(
                -0.5 * s.thz.absorption_coefficient * d_c)
            for n in sol.feasible_for:
                sens = s.thz.budget * sol.rho1 * g_s[n] / s.thz.noise_power
                comm = s.thz.budget * (1 - sol.rho1) * g_c[n] / s.thz.noise_power
                worst = max(worst, (s.thresholds.sensing_snr - sens) / s.thresholds.sensing_snr,
                            (s.thresholds.comm_snr - comm) / s.thresholds.comm_snr)
        means.append(float(np.mean(rho)))
        _cache.setdefault(("rho", p_w), rho)
    for a, b in zip((2.0, 4.0), (4.0, 6.0)):
        per_trial_ok &= all(y <= x for x, y in zip(_cache[("rho", a)], _cache[("rho", b)]))
    # "zero slack violation" read as no shortfall beyond floating-point rounding (1e-12 relative)
    ok = nondecreasing(means[::-1], strict=True) and per_trial_ok and worst <= 1e-12
    assert verdict("3 power-split trade-off", ok,
                   f"mean rho1 at P_w=2,4,6: {fmt(means)}; per-trial nonincreasing={per_trial_ok}; "
                   f"max constraint shortfall {max(worst, 0):.1e} rel")


# 4 -------------------------------------------------------------------------
def _lambda_sweep(field):
    return [mc(with_lambda(S, lam))[field] for lam in LAMBDAS]


def test_c04a_pd_decreasing_in_blockage(verdict):
    pd = _lambda_sweep("p_d")
    assert verdict("4a P_d strictly decreasing in lambda_B", nondecreasing(pd[::-1], strict=True),
                   f"P_d over lambda_B=2,4,6,8: {fmt(pd)}")


def test_c04b_scp_nonincreasing_in_blockage(verdict):
    scp = _lambda_sweep("sc_p")
    ok = nondecreasing(scp[::-1]) and scp[0] >= scp[-1]
    assert verdict("4b SC_p nonincreasing in lambda_B", ok, f"SC_p over lambda_B=2,4,6,8: {fmt(scp)}")


def test_c04c_vlc_count_nondecreasing_in_blockage(verdict):
    vlc = _lambda_sweep("vlc_user_count")
    unserved = _lambda_sweep("unserved_count")
    ok = nondecreasing(vlc)
    assert verdict("4c VLC count nondecreasing in lambda_B", ok,
                   f"VLC users {fmt(vlc)}, unserved {fmt(unserved)} over lambda_B=2,4,6,8")


# 5 -------------------------------------------------------------------------
def test_c05a_thz_count_vs_false_alarm(verdict):
    thz = [mc(with_fa(S, fa))["thz_user_count"] for fa in FALSE_ALARMS]
    assert verdict("5a THz count nondecreasing in FA_p (blockage off)", nondecreasing(thz),
                   f"THz users over FA_p={FALSE_ALARMS}: {fmt(thz)}")


def test_c05b_vlc_count_blockage_on_vs_off(verdict):
    off = [mc(with_fa(S, fa))["vlc_user_count"] for fa in FALSE_ALARMS]
    on = [mc(with_fa(S.with_blockage(True), fa))["vlc_user_count"] for fa in FALSE_ALARMS]
    ok = all(b >= a for a, b in zip(off, on))
    assert verdict("5b VLC count with blockage >= without, every FA_p", ok,
                   f"off {fmt(off)}, on {fmt(on)}")


# 6 -------------------------------------------------------------------------
def test_c06_coverage_anchor(verdict):
    off = mc(S)["sc_p"]
    on = mc(S.with_blockage(True))["sc_p"]
    ok = off >= 0.98 and on <= off
    assert verdict("6 coverage anchor", ok, f"SC_p off={off:.4f} (>= 0.98), on={on:.4f}")


# 7 -------------------------------------------------------------------------
def test_c07_power_minimization(verdict):
    power = [mc(with_users(S, n))["total_power"] for n in range(1, 11)]
    ok = nondecreasing(power) and all(p < NON_OPTIMIZED_TOTAL for p in power) and 2 <= power[-1] <= 5
    assert verdict("7 power minimization", ok,
                   f"mean total power N=1..10: {fmt(power)} W; non-optimized {NON_OPTIMIZED_TOTAL} W")


# 8 -------------------------------------------------------------------------
def test_c08_ee_dominance(verdict):
    worst = np.inf
    cases = [with_users(S, n).with_blockage(b) for n in range(1, 11) for b in (False, True)]
    cases += [with_lambda(S, lam) for lam in LAMBDAS]
    for s in cases:
        opt = mc(s)["avg_ee"]
        base = mc(s.with_mode("non_optimized"))["avg_ee"]
        worst = min(worst, opt - base)
    assert verdict("8 EE dominance", worst > 0,
                   f"min (optimized - non-optimized) mean EE over {len(cases)} points = {worst:.4g} bit/J/Hz")


# 9 -------------------------------------------------------------------------
def test_c09_se_dominance(verdict):
    gaps = {False: [], True: []}
    for b in (False, True):
        for n in range(2, 11):
            s = with_users(S, n).with_blockage(b)
            gaps[b].append(mc(s)["avg_se"] - mc(s.with_mode("standalone_thz"))["avg_se"])
    ok = all(g >= 0 for g in gaps[False] + gaps[True]) and all(g > 0 for g in gaps[True])
    assert verdict("9 SE dominance", ok,
                   f"SE gap N=2..10 off {fmt(gaps[False])}; on {fmt(gaps[True])}")


# 10 ------------------------------------------------------------------------
def test_c10_determinism_and_conservation(verdict, tmp_path):
    outputs = []
    for threads in (1, 8):
        out = tmp_path / f"t{threads}"
        cmds = [
            ["run", "--trials", "200"],
            ["sweep", "--trials", "100", "--param", "lambda_B", "--values", "2,8", "--blockage", "both",
             "--modes", "proposed,standalone_thz,non_optimized"],
        ]
        for cmd in cmds:
            subprocess.run([sys.executable, "-m", "thzvlc.cli", *cmd, "--seed", str(BASE_SEED),
                            "--threads", str(threads), "--out", str(out)], check=True,
                           capture_output=True)
        outputs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
    identical = outputs[0] == outputs[1] and len(outputs[0]) == 3
    # conservation audit over every Monte Carlo trial run by this suite (plus a fresh batch)
    for mode in ("proposed", "standalone_thz", "non_optimized"):
        for b in (False, True):
            mc(S.with_mode(mode).with_blockage(b), trials=200, seed=BASE_SEED + 1)
    ok = identical and _checked["violations"] == 0 and _checked["trials"] > 0
    assert verdict("10 determinism and conservation", ok,
                   f"threads 1 vs 8 byte-identical={identical} ({len(outputs[0])} files); "
                   f"conservation violations {_checked['violations']} in {_checked['trials']} trials")


# 11 ------------------------------------------------------------------------
def test_c11_channel_units(verdict):
    d = np.logspace(-1, 2, 31)
    sens = sensing_path_loss_array(d, 370e9, 0.0, 1.0)
    thz = thz_spreading_gain(d, 370e9)
    err4 = float(np.max(np.abs(sens * d ** 4 / (sens[0] * d[0] ** 4) - 1)))
    err1 = float(np.max(np.abs(thz * d / (thz[0] * d[0]) - 1)))
    m = lambertian_order(np.radians(60.0))
    outside = concentrator_gain(np.radians(61.0), np.radians(60.0), 1.5)
    ok = m == 1.0 and outside == 0.0 and err4 <= 1e-12 and err1 <= 1e-12
    assert verdict("11 channel unit tests", ok,
                   f"m(60deg)={m!r}; g(psi>psi_c)={outside}; d^-4 err {err4:.1e}; 1/d err {err1:.1e}")
