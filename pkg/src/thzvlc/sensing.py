"""Monostatic THz detection: sensing SNR, Neyman-Pearson P_d, coverage."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .blockage import los_weight_array
from .channel import sensing_path_loss_array
from .scenario import Scenario, UserRx
from .special import erfc, erfcinv, erfinv

# Relative slack when comparing an SNR to a threshold it was solved to meet.
THRESHOLD_RTOL = 1e-12


@dataclass(frozen=True)
class DetectionOutcome:
    snr_sens: float
    p_d: float
    covered: bool
    detected: bool


def sensing_gains(s: Scenario, positions: np.ndarray, rcs: np.ndarray, *,
                  blocked: bool) -> np.ndarray:
    """``G_t G_r L(d_f)`` per user, optionally times the blockage weight."""
    ap = s.thz_sensing_ap.as_array()
    d_f = np.linalg.norm(positions - ap, axis=1)
    g = s.thz.tx_gain * s.thz.rx_gain * sensing_path_loss_array(
        d_f, s.thz.carrier_frequency, s.thz.absorption_coefficient, rcs)
    if blocked:
        g = g * los_weight_array(ap[None, :], positions, s.blockage, s.mount_height,
                                 s.blockage_enabled)[:, 0]
    return g


def sensing_snr(user: UserRx, scenario: Scenario, rho1: float) -> float:
    """Blockage-weighted sensing SNR of one user at split ``rho1``."""
    if not 0.0 <= rho1 <= 1.0:
        raise ValueError("rho1 must lie in [0, 1]")
    g = sensing_gains(scenario, user.position.as_array()[None, :], np.array([user.rcs]),
                      blocked=True)[0]
    return scenario.thz.budget * rho1 * g / scenario.thz.noise_power


def detection_probability(snr: float, fa_p: float, form: str = "standard") -> float:
    """Gaussian Neyman-Pearson detector: ``0.5 erfc(erfcinv(2 FA) - sqrt(snr / 2))``.

    ``form="printed_alt"`` evaluates the variant
    ``0.5 erfc(erfinv(2 FA) - sqrt(snr) / 2)`` for comparison only; it does not
    reduce to ``FA`` at zero SNR.
    """
    if not 0.0 < fa_p < 1.0:
        raise ValueError("false-alarm probability must lie in (0, 1)")
    if snr < 0:
        raise ValueError("SNR must be nonnegative")
    if form == "standard":
        return 0.5 * erfc(erfcinv(2.0 * fa_p) - math.sqrt(snr / 2.0))
    if form == "printed_alt":
        return 0.5 * erfc(erfinv(2.0 * fa_p) - math.sqrt(snr) / 2.0)
    raise ValueError(f"unknown detector form {form!r}")


def detect(snrs: Sequence[float], scenario: Scenario) -> list[DetectionOutcome]:
    th = scenario.thresholds
    out = []
    for snr in snrs:
        p_d = detection_probability(float(snr), th.false_alarm, th.pd_formula)
        out.append(DetectionOutcome(
            snr_sens=float(snr),
            p_d=p_d,
            covered=bool(snr >= th.sensing_snr * (1.0 - THRESHOLD_RTOL)),
            detected=p_d > th.detection,
        ))
    return out


def sensing_coverage(outcomes: Sequence[DetectionOutcome]) -> float:
    """Fraction of users whose sensing SNR reaches the sensing threshold."""
    if not outcomes:
        raise ValueError("sensing coverage needs at least one user")
    return sum(o.covered for o in outcomes) / len(outcomes)
