"""Monte Carlo trial pipeline.

One trial: drop users, split THz power, sense, associate, allocate VLC power,
score.  Trial ``i`` of a run draws from ``SeedSequence(base_seed, spawn_key=(i,))``
so results do not depend on how trials are scheduled over workers.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .blockage import los_weight_array
from .channel import lambertian_order, vlc_gain_array
from .metrics import (THZ, UNSERVED, VLC, Association, MetricsSnapshot, METRIC_NAMES,
                      snapshot)
from .power import (MilpSolution, SplitSolution, VlcDemand, minimize_network_power,
                    non_optimized_power, solve_power_split, thz_comm_gains, vlc_coefficient,
                    vlc_snr, vlc_snr_root)
from .scenario import Scenario, UserDrop, drop_users
from .sensing import DetectionOutcome, detect, sensing_gains

# Scalars aggregated per trial, in output column order.
TRIAL_FIELDS = METRIC_NAMES + ("p_d", "rho1", "split_feasible", "active_vlc_aps")


def associate_users(detections: Sequence[DetectionOutcome], thz_snrs: Sequence[float],
                    vlc_snrs: np.ndarray, pd_th: float, *, gamma_comm: float = 0.0,
                    gamma_vlc: float = 0.0, allow_vlc: bool = True) -> Association:
    """Serve detected users over THz, the rest from their best LED.

    A user goes to THz when ``P_d > pd_th`` and its THz SNR reaches
    ``gamma_comm``.  Otherwise it takes the LED with the highest SNR (lowest
    index on ties) provided that SNR, evaluated at ``p_max``, reaches
    ``gamma_vlc``; failing that it is unserved.  ``vlc_snrs`` has shape
    ``(N, L)``.
    """
    vlc_snrs = np.asarray(vlc_snrs, dtype=float).reshape(len(detections), -1)
    link, ap_idx, snr = [], [], []
    for n, det in enumerate(detections):
        if det.p_d > pd_th and thz_snrs[n] >= gamma_comm:
            link.append(THZ)
            ap_idx.append(-1)
            snr.append(float(thz_snrs[n]))
            continue
        if allow_vlc and vlc_snrs.shape[1]:
            best = int(np.argmax(vlc_snrs[n]))
            if vlc_snrs[n, best] > 0 and vlc_snrs[n, best] >= gamma_vlc:
                link.append(VLC)
                ap_idx.append(best)
                snr.append(float(vlc_snrs[n, best]))
                continue
        link.append(UNSERVED)
        ap_idx.append(-1)
        snr.append(0.0)
    return Association(tuple(link), tuple(ap_idx), tuple(snr))


@dataclass(frozen=True)
class TrialResult:
    users: UserDrop
    split: SplitSolution
    detections: tuple[DetectionOutcome, ...]
    thz_snr: np.ndarray      # THz communication SNR per user at 1 - rho1
    vlc_gain: np.ndarray     # blockage-weighted LED gains, (N, L)
    association: Association
    milp: MilpSolution
    metrics: MetricsSnapshot

    @property
    def rho1(self) -> float:
        return self.split.rho1

    def scalars(self) -> tuple[float, ...]:
        m = self.metrics
        p_d = math.fsum(d.p_d for d in self.detections) / len(self.detections)
        values = [float(getattr(m, name)) for name in METRIC_NAMES]
        values += [p_d, self.split.rho1, float(self.split.sensing_ok), float(sum(self.milp.alpha))]
        return tuple(values)


def _illuminance_ok(s: Scenario, unblocked_gain: np.ndarray, milp: MilpSolution) -> bool:
    if not s.vlc_aps:
        return s.thresholds.min_illuminance <= 0
    g_m = np.array([ap.lumen_constant for ap in s.vlc_aps])
    flux = g_m * np.asarray(milp.power) * np.asarray(milp.alpha)
    lux = unblocked_gain @ flux / s.user_template.pd_area
    return bool(np.all(lux >= s.thresholds.min_illuminance))


def run_trial(s: Scenario, seed) -> TrialResult:
    """One realisation of the network under ``s.mode``; deterministic in ``seed``."""
    drop = drop_users(s, seed)
    pos = drop.positions
    noise = s.thz.noise_power
    blk = s.blockage_enabled

    split = solve_power_split(s, drop)
    snr_sens = s.thz.budget * split.rho1 * sensing_gains(s, pos, drop.rcs, blocked=True) / noise
    detections = tuple(detect(snr_sens, s))

    w_comm = los_weight_array(s.thz_comm_ap.as_array()[None, :], pos, s.blockage,
                              s.mount_height, blk)[:, 0]
    thz_snr = s.thz.budget * (1.0 - split.rho1) * thz_comm_gains(s, pos) * w_comm / noise

    if s.vlc_aps:
        ref = s.vlc_aps[0]
        ap_xyz = np.array([ap.position.as_array() for ap in s.vlc_aps])
        u = s.user_template
        h0 = vlc_gain_array(ap_xyz, pos, order=lambertian_order(ref.semi_angle),
                            filter_gain=ref.filter_gain, ci=ref.concentrator_index,
                            pd_area=u.pd_area, fov=u.fov)
        h = h0 * los_weight_array(ap_xyz, pos, s.blockage, s.mount_height, blk)
        p_max = np.array([ap.max_power for ap in s.vlc_aps])
        snr_at_max = vlc_snr(h, p_max[None, :], s)
        root = vlc_snr_root(s)
    else:
        h0 = h = np.zeros((len(drop), 0))
        snr_at_max = h
        root = 0.0

    th = s.thresholds
    assoc = associate_users(detections, thz_snr, snr_at_max, th.detection,
                            gamma_comm=th.comm_snr * (1.0 - 1e-12),
                            gamma_vlc=th.vlc_snr * (1.0 - 1e-12),
                            allow_vlc=s.mode != "standalone_thz")
    coeff = vlc_coefficient(h, s)
    demands = [VlcDemand(n, a, float(coeff[n, a]), root)
               for n, (k, a) in enumerate(zip(assoc.link, assoc.vlc_ap)) if k == VLC]

    if s.mode == "non_optimized":
        milp = non_optimized_power(s, demands)
    elif s.mode == "proposed":
        milp = minimize_network_power(demands, s)
    else:
        n_aps = len(s.vlc_aps)
        milp = MilpSolution((0,) * n_aps, (0.0,) * n_aps, s.thz.budget, frozenset())

    # realised SNR at the allocated LED power; anything the solver dropped is unserved
    link, snr = list(assoc.link), list(assoc.snr)
    vlc_ap = list(assoc.vlc_ap)
    for n, k in enumerate(link):
        if k != VLC:
            continue
        if n in milp.unserved:
            link[n], vlc_ap[n], snr[n] = UNSERVED, -1, 0.0
        else:
            a = vlc_ap[n]
            snr[n] = float(vlc_snr(h[n, a], milp.power[a], s))
    assoc = Association(tuple(link), tuple(vlc_ap), tuple(snr))

    vlc_bw = s.vlc_aps[0].bandwidth if s.vlc_aps else 0.0
    metrics = snapshot(assoc, detections, total_power=milp.objective,
                       thz_bandwidth=s.thz.bandwidth, vlc_bandwidth=vlc_bw,
                       illuminance_ok=_illuminance_ok(s, h0, milp))
    return TrialResult(users=drop, split=split, detections=detections, thz_snr=thz_snr,
                       vlc_gain=h, association=assoc, milp=milp, metrics=metrics)


# --- Monte Carlo ---------------------------------------------------------------

def trial_seed(base_seed: int, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(base_seed, spawn_key=(index,))


@dataclass(frozen=True)
class AggregateResult:
    trials: int
    base_seed: int
    mean: dict[str, float]
    std: dict[str, float]


def _run_chunk(s: Scenario, base_seed: int, start: int, stop: int) -> list[tuple[float, ...]]:
    return [run_trial(s, trial_seed(base_seed, i)).scalars() for i in range(start, stop)]


def aggregate(rows: Sequence[Sequence[float]], base_seed: int) -> AggregateResult:
    """Mean and population std per field; exactly rounded sums, so row order is irrelevant."""
    if not rows:
        raise ValueError("need at least one trial")
    n = len(rows)
    mean, std = {}, {}
    for j, name in enumerate(TRIAL_FIELDS):
        col = [r[j] for r in rows]
        mu = math.fsum(col) / n
        mean[name] = mu
        std[name] = math.sqrt(math.fsum((x - mu) ** 2 for x in col) / n)
    return AggregateResult(trials=n, base_seed=base_seed, mean=mean, std=std)


def default_threads() -> int:
    return os.cpu_count() or 1


def make_executor(threads: int | None) -> Executor | None:
    threads = default_threads() if threads is None else threads
    if threads <= 1:
        return None
    return ProcessPoolExecutor(max_workers=threads)


def trial_rows(s: Scenario, trials: int, base_seed: int, *,
               executor: Executor | None = None, chunks: int = 0) -> list[tuple[float, ...]]:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if executor is None:
        return _run_chunk(s, base_seed, 0, trials)
    n_chunks = chunks or min(trials, 4 * getattr(executor, "_max_workers", 4))
    edges = np.linspace(0, trials, n_chunks + 1).astype(int)
    futures = [executor.submit(_run_chunk, s, base_seed, int(a), int(b))
               for a, b in zip(edges[:-1], edges[1:]) if b > a]
    rows: list[tuple[float, ...]] = []
    for f in futures:  # submission order == trial order
        rows.extend(f.result())
    return rows


def run_monte_carlo(s: Scenario, trials: int, base_seed: int, *, threads: int = 1,
                    executor: Executor | None = None) -> AggregateResult:
    """Aggregate ``trials`` independent trials.

    Pass an existing ``executor`` to reuse worker processes across calls;
    otherwise ``threads > 1`` spins up a temporary pool.
    """
    if executor is not None:
        return aggregate(trial_rows(s, trials, base_seed, executor=executor), base_seed)
    pool = make_executor(threads)
    try:
        return aggregate(trial_rows(s, trials, base_seed, executor=pool), base_seed)
    finally:
        if pool is not None:
            pool.shutdown()


def with_params(s: Scenario, **changes) -> Scenario:
    """Convenience for sweeps: ``with_params(s, user_count=4)``."""
    return replace(s, **changes)
