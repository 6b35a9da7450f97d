"""Line-of-sight channel gains: THz communication, THz monostatic sensing, VLC.

The scalar entry points return :class:`LinkGain`; the ``*_array`` helpers take
numpy arrays and are what the trial engine uses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from .scenario import MIN_SEMI_ANGLE, UserRx, VlcAp

FOUR_PI = 4.0 * math.pi


@dataclass(frozen=True)
class LinkGain:
    gain: float
    distance: float
    kind: str  # "thz_comm" | "vlc" | "thz_sensing"


def _check_positive(name: str, value) -> None:
    if np.any(np.asarray(value) <= 0):
        raise ValueError(f"{name} must be positive")


def _check_nonnegative(name: str, value) -> None:
    if np.any(np.asarray(value) < 0):
        raise ValueError(f"{name} must be nonnegative")


def thz_spreading_gain(d, f):
    """Free-space spreading term ``c / (4 pi d f)``."""
    _check_positive("distance", d)
    _check_positive("frequency", f)
    return SPEED_OF_LIGHT / (FOUR_PI * np.asarray(d, dtype=float) * f)


def molecular_absorption_gain(k_abs, d):
    """Absorption term ``exp(-k d / 2)``."""
    _check_nonnegative("absorption coefficient", k_abs)
    _check_nonnegative("distance", d)
    return np.exp(-0.5 * np.asarray(k_abs, dtype=float) * np.asarray(d, dtype=float))


def thz_comm_gain(d: float, f: float, k_abs: float) -> LinkGain:
    # the two factors are composed as printed, without squaring
    g = thz_spreading_gain(d, f) * molecular_absorption_gain(k_abs, d)
    return LinkGain(gain=float(g), distance=float(d), kind="thz_comm")


def lambertian_order(semi_angle: float) -> float:
    """``m = -ln 2 / ln cos(phi_half)``; exactly 1 at 60 degrees."""
    if not (MIN_SEMI_ANGLE <= semi_angle < math.pi / 2):
        raise ValueError("semi-angle must lie in [1 mrad, pi/2)")
    if semi_angle == math.pi / 3:
        # cos(pi/3) rounds to 0.5000000000000001 in binary
        return 1.0
    return -math.log(2.0) / math.log(math.cos(semi_angle))


def concentrator_gain(psi, psi_c: float, ci: float):
    if psi_c <= 0:
        raise ValueError("concentrator FOV must be positive")
    _check_nonnegative("incidence angle", psi)
    inside = ci ** 2 / math.sin(psi_c) ** 2
    if np.ndim(psi):
        return np.where(np.asarray(psi) <= psi_c, inside, 0.0)
    return inside if psi <= psi_c else 0.0


def vlc_gain_array(ap_xyz: np.ndarray, user_xyz: np.ndarray, *, order: float,
                   filter_gain: float, ci: float, pd_area: float, fov: float) -> np.ndarray:
    """LoS gains for every (user, AP) pair; returns shape ``(N, L)``.

    The LED points straight down and the photodetector straight up, so the
    irradiance angle equals the incidence angle.
    """
    ap_xyz = np.atleast_2d(ap_xyz)
    user_xyz = np.atleast_2d(user_xyz)
    diff = ap_xyz[None, :, :] - user_xyz[:, None, :]
    dist = np.linalg.norm(diff, axis=2)
    drop = diff[:, :, 2]
    if np.any(dist <= 0):
        raise ValueError("user coincides with a VLC AP")
    if np.any(drop <= 0):
        raise ValueError("user must be below the AP plane")
    cos_t = drop / dist
    psi = np.arccos(np.clip(cos_t, -1.0, 1.0))
    g = concentrator_gain(psi, fov, ci)
    gain = (order + 1.0) * pd_area / (2.0 * math.pi * dist ** 2) * cos_t ** order \
        * filter_gain * g * cos_t
    return np.where(psi <= fov, gain, 0.0)


def vlc_channel_gain(ap: VlcAp, user: UserRx) -> LinkGain:
    m = lambertian_order(ap.semi_angle)
    a = ap.position.as_array()
    u = user.position.as_array()
    gain = vlc_gain_array(a, u, order=m, filter_gain=ap.filter_gain,
                          ci=ap.concentrator_index, pd_area=user.pd_area, fov=user.fov)
    return LinkGain(gain=float(gain[0, 0]), distance=float(np.linalg.norm(a - u)), kind="vlc")


def sensing_path_loss_array(d_f, f: float, k_abs: float, rcs):
    """Round-trip radar gain ``c^2 sigma / ((4 pi)^3 f^2 d^4) * exp(-2 k d)``."""
    _check_positive("sensing distance", d_f)
    _check_nonnegative("RCS", rcs)
    d = np.asarray(d_f, dtype=float)
    return SPEED_OF_LIGHT ** 2 * np.asarray(rcs, dtype=float) / (FOUR_PI ** 3 * f ** 2 * d ** 4) \
        * np.exp(-2.0 * k_abs * d)


def sensing_path_loss(d_f: float, f: float, k_abs: float, rcs: float) -> LinkGain:
    g = sensing_path_loss_array(d_f, f, k_abs, rcs)
    return LinkGain(gain=float(g), distance=float(d_f), kind="thz_sensing")


def illuminance_at(user: UserRx, active_vlc: Iterable[tuple[VlcAp, float]]) -> float:
    """Horizontal illuminance in lux from the listed (AP, optical power) pairs.

    Luminous flux is ``G_m * p`` per LED; the received flux is divided by the
    photodetector area to express it per square metre.
    """
    total = 0.0
    for ap, power in active_vlc:
        if power < 0:
            raise ValueError("optical power must be nonnegative")
        if power == 0:
            continue
        h = vlc_channel_gain(ap, user).gain
        total += h * ap.lumen_constant * power / user.pd_area
    return total
