"""Power allocation.

Two problems live here:

* the THz power split: the smallest sensing fraction ``rho1`` that lets every
  user reach the sensing SNR threshold, leaving ``1 - rho1`` for communication;
* VLC network power minimisation: binary LED activation ``alpha_l`` and
  transmit power ``rho_l`` minimising ``sum(alpha_l rho_l) + P_w + P_cir``
  subject to each VLC user's SNR threshold at its serving LED and
  ``rho_l <= alpha_l p_max``.

With every VLC user pinned to one LED the second problem separates per LED,
which is what :func:`minimize_network_power` exploits.  :func:`branch_and_bound`
solves the same MILP without using that structure and is kept to check it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linprog

from .channel import molecular_absorption_gain, thz_spreading_gain, vlc_channel_gain
from .scenario import Scenario, UserDrop, UserRx, VlcAp
from .sensing import THRESHOLD_RTOL, sensing_gains

INTEGRALITY_TOL = 1e-9
_HIGHS = {"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10}


# --- THz sensing / communication split --------------------------------------

@dataclass(frozen=True)
class SplitSolution:
    rho1: float
    required_fraction: float  # unclamped; above 1 means sensing is infeasible
    feasible_for: frozenset[int]
    sensing_ok: bool


def _as_drop(users, s: Scenario) -> UserDrop:
    if isinstance(users, UserDrop):
        return users
    users = list(users)
    pos = np.array([[u.position.x, u.position.y, u.position.z] for u in users], dtype=float)
    rcs = np.array([u.rcs for u in users], dtype=float)
    return UserDrop(positions=pos.reshape(-1, 3), rcs=rcs, template=s.user_template)


def required_fractions(gains: np.ndarray, s: Scenario) -> np.ndarray:
    """Per-user sensing fraction meeting the sensing threshold; inf for zero gain."""
    need = s.thresholds.sensing_snr * s.thz.noise_power / s.thz.budget
    with np.errstate(divide="ignore"):
        return np.where(gains > 0, need / np.where(gains > 0, gains, 1.0), np.inf)


def min_sensing_fraction(candidates: Sequence[UserRx] | UserDrop, s: Scenario) -> float:
    """Smallest ``rho1`` satisfying the sensing constraint of every candidate.

    The value is not clamped: anything above 1 means the THz budget cannot
    cover all candidates.
    """
    drop = _as_drop(candidates, s)
    if len(drop) == 0:
        raise ValueError("need at least one sensing candidate")
    gains = sensing_gains(s, drop.positions, drop.rcs, blocked=False)
    return float(np.max(required_fractions(gains, s)))


def thz_comm_gains(s: Scenario, positions: np.ndarray) -> np.ndarray:
    d = np.linalg.norm(positions - s.thz_comm_ap.as_array(), axis=1)
    return s.thz.tx_gain * s.thz.rx_gain * thz_spreading_gain(d, s.thz.carrier_frequency) \
        * molecular_absorption_gain(s.thz.absorption_coefficient, d)


def solve_power_split(s: Scenario, users: Sequence[UserRx] | UserDrop) -> SplitSolution:
    """Split the THz budget between sensing and communication.

    Both constraints use the unobstructed LoS gains; blockage only enters the
    realised SNRs downstream.  A fixed ``thz.rho1`` in the scenario replaces the
    solved fraction.
    """
    drop = _as_drop(users, s)
    g_s = sensing_gains(s, drop.positions, drop.rcs, blocked=False)
    per_user = required_fractions(g_s, s)
    required = float(np.max(per_user))
    rho1 = min(required, 1.0) if s.thz.rho1 is None else s.thz.rho1

    sens_ok = per_user <= rho1 * (1.0 + THRESHOLD_RTOL)
    comm_snr = s.thz.budget * (1.0 - rho1) * thz_comm_gains(s, drop.positions) / s.thz.noise_power
    comm_ok = comm_snr >= s.thresholds.comm_snr * (1.0 - THRESHOLD_RTOL)
    feasible = frozenset(int(n) for n in np.flatnonzero(sens_ok & comm_ok))
    return SplitSolution(rho1=rho1, required_fraction=required, feasible_for=feasible,
                         sensing_ok=bool(np.all(sens_ok)))


# --- VLC power ---------------------------------------------------------------

def vlc_snr_root(s: Scenario) -> float:
    """``sqrt(gamma_VLC N_VLC B_VLC)``, the right-hand side of the linear SNR constraint."""
    ap = s.vlc_aps[0]
    return math.sqrt(s.thresholds.vlc_snr * ap.noise_psd * ap.bandwidth)


def vlc_coefficient(gain, s: Scenario):
    """Photocurrent per watt, ``R H / k_oe``; SNR = (coeff * rho)^2 / (N B)."""
    u = s.user_template
    return u.responsivity * np.asarray(gain, dtype=float) / u.oe_conversion


def vlc_snr(gain, power, s: Scenario):
    ap = s.vlc_aps[0]
    return (vlc_coefficient(gain, s) * power) ** 2 / (ap.noise_psd * ap.bandwidth)


def vlc_min_power(user: UserRx, ap: VlcAp, s: Scenario, los_weight: float = 1.0) -> float:
    """Smallest LED power meeting the VLC SNR threshold; inf when unreachable.

    Returns ``math.inf`` for a zero gain (outside FOV or fully blocked) and for
    requirements above ``p_max``.
    """
    h = vlc_channel_gain(ap, user).gain * los_weight
    if h <= 0:
        return math.inf
    rho = vlc_snr_root(s) / float(vlc_coefficient(h, s))
    return rho if rho <= ap.max_power else math.inf


@dataclass(frozen=True)
class VlcDemand:
    """One VLC user's constraint ``coeff * rho_ap >= rhs`` at its serving LED."""

    user: int
    ap: int
    coeff: float
    rhs: float

    @property
    def min_power(self) -> float:
        return self.rhs / self.coeff if self.coeff > 0 else math.inf


@dataclass(frozen=True)
class MilpSolution:
    alpha: tuple[int, ...]
    power: tuple[float, ...]
    objective: float
    unserved: frozenset[int]

    @property
    def vlc_power(self) -> float:
        return math.fsum(a * p for a, p in zip(self.alpha, self.power))


def solve_decomposed(demands: Iterable[VlcDemand], n_aps: int, p_max: float,
                     fixed_power: float) -> MilpSolution:
    """Exact optimum when every user is pinned to one LED: per LED, the max requirement."""
    power = [0.0] * n_aps
    unserved = set()
    for d in demands:
        need = d.min_power
        if need > p_max:
            unserved.add(d.user)
        elif need > power[d.ap]:
            power[d.ap] = need
    alpha = tuple(int(p > 0) for p in power)
    objective = math.fsum(power) + fixed_power
    return MilpSolution(alpha=alpha, power=tuple(power), objective=objective,
                        unserved=frozenset(unserved))


def minimize_network_power(demands: Iterable[VlcDemand], s: Scenario) -> MilpSolution:
    return solve_decomposed(demands, len(s.vlc_aps), _p_max(s), s.thz.budget)


def non_optimized_power(s: Scenario, demands: Iterable[VlcDemand] = ()) -> MilpSolution:
    """Every LED on at ``p_max``; users unreachable even then are unserved."""
    p_max = _p_max(s) if s.vlc_aps else 0.0
    unserved = frozenset(d.user for d in demands if d.min_power > p_max)
    n = len(s.vlc_aps)
    return MilpSolution(alpha=(1,) * n, power=(p_max,) * n,
                        objective=n * p_max + s.thz.budget, unserved=unserved)


def _p_max(s: Scenario) -> float:
    return min(ap.max_power for ap in s.vlc_aps) if s.vlc_aps else 0.0


# --- branch and bound ---------------------------------------------------------

@dataclass
class _Node:
    lower: np.ndarray  # alpha lower bounds
    upper: np.ndarray  # alpha upper bounds


def _relaxation(c, a_ub, b_ub, n_aps, node: _Node):
    bounds = [(0.0, None)] * n_aps + list(zip(node.lower, node.upper))
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs", options=_HIGHS)
    if res.status != 0:
        return None
    return res


def branch_and_bound(demands: Sequence[VlcDemand], n_aps: int, p_max: float,
                     fixed_power: float) -> MilpSolution:
    """Depth-first branch and bound over the LED activation binaries.

    Variables are ``[rho_1..rho_L, alpha_1..alpha_L]``.  Since ``rho_l`` is
    forced to 0 when ``alpha_l = 0`` the bilinear objective equals
    ``sum(rho_l)``, which keeps every node an LP.  Users whose requirement
    exceeds ``p_max`` would make the MILP infeasible and are set aside as
    unserved before solving.
    """
    demands = list(demands)
    unserved = frozenset(d.user for d in demands if d.min_power > p_max)
    rows = [d for d in demands if d.user not in unserved]
    if n_aps == 0:
        return MilpSolution((), (), fixed_power, unserved)

    c = np.concatenate([np.ones(n_aps), np.zeros(n_aps)])
    a_ub, b_ub = [], []
    for d in rows:
        # scaled to (coeff / rhs) rho >= 1; raw photocurrent rows sit below solver tolerances
        r = np.zeros(2 * n_aps)
        r[d.ap] = -d.coeff / d.rhs
        a_ub.append(r)
        b_ub.append(-1.0)
    for l in range(n_aps):
        r = np.zeros(2 * n_aps)
        r[l] = 1.0
        r[n_aps + l] = -p_max
        a_ub.append(r)
        b_ub.append(0.0)
    a_ub = np.array(a_ub)
    b_ub = np.array(b_ub)

    best_obj = math.inf
    best_x = None
    stack = [_Node(np.zeros(n_aps), np.ones(n_aps))]
    while stack:
        node = stack.pop()
        res = _relaxation(c, a_ub, b_ub, n_aps, node)
        if res is None or res.fun >= best_obj - 1e-15:
            continue
        alpha = res.x[n_aps:]
        frac = np.abs(alpha - np.round(alpha))
        if np.all(frac <= INTEGRALITY_TOL):
            best_obj, best_x = res.fun, res.x
            continue
        j = int(np.argmax(frac))
        down = _Node(node.lower.copy(), node.upper.copy())
        down.upper[j] = 0.0
        up = _Node(node.lower.copy(), node.upper.copy())
        up.lower[j] = 1.0
        stack.append(down)
        stack.append(up)  # explored first

    if best_x is None:
        raise RuntimeError("power MILP infeasible after removing unreachable users")
    power = np.clip(best_x[:n_aps], 0.0, None)
    alpha = tuple(int(p > 0) for p in power)
    power = tuple(float(p) if a else 0.0 for p, a in zip(power, alpha))
    return MilpSolution(alpha=alpha, power=power, objective=math.fsum(power) + fixed_power,
                        unserved=unserved)
