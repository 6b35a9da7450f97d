"""Human blockage: Matern type-II density, blocking geometry and LoS weights."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scenario import BlockageParams, Point3


@dataclass(frozen=True)
class BlockageWeight:
    p_block: float
    los_weight: float
    d_b: float


def effective_density(lambda_p: float, delta: float) -> float:
    """Retained density of a Matern II thinning of a PPP with intensity ``lambda_p``."""
    if delta <= 0:
        raise ValueError("hard-core distance must be positive")
    if lambda_p < 0:
        raise ValueError("baseline intensity must be nonnegative")
    area = math.pi * delta ** 2
    # -expm1 keeps the small-intensity limit accurate
    return -math.expm1(-lambda_p * area) / area


def blocker_distance(d_t, h_b: float, height: float):
    """AP-side horizontal distance ``d_T (1 - h_B / H)`` inside which a blocker cuts the ray."""
    if not (0 < h_b <= height):
        raise ValueError("need 0 < h_B <= H")
    if np.any(np.asarray(d_t) < 0):
        raise ValueError("horizontal distance must be nonnegative")
    return d_t * (1.0 - h_b / height)


def _exponent(density, d_b, radius):
    return 2.0 * density * d_b * radius ** 2


def blockage_probability(density: float, d_b: float, radius: float) -> BlockageWeight:
    if density < 0 or d_b < 0:
        raise ValueError("density and d_B must be nonnegative")
    if radius <= 0:
        raise ValueError("blocker radius must be positive")
    los = math.exp(-_exponent(density, d_b, radius))
    return BlockageWeight(p_block=1.0 - los, los_weight=los, d_b=d_b)


def los_weight_array(ap_xy: np.ndarray, user_xy: np.ndarray, params: BlockageParams,
                     mount_height: float, enabled: bool) -> np.ndarray:
    """SNR weight for each (user, AP) pair, shape ``(N, L)``.

    Returns ones when blockage is disabled.  With ``literal_pb_weighting`` the
    blocking probability itself is returned instead of its complement.
    """
    ap_xy = np.atleast_2d(ap_xy)[:, :2]
    user_xy = np.atleast_2d(user_xy)[:, :2]
    if not enabled:
        return np.ones((user_xy.shape[0], ap_xy.shape[0]))
    d_t = np.linalg.norm(user_xy[:, None, :] - ap_xy[None, :, :], axis=2)
    d_b = blocker_distance(d_t, params.height, mount_height)
    x = _exponent(params.density, d_b, params.radius)
    if params.literal_pb_weighting:
        return -np.expm1(-x)
    return np.exp(-x)


def link_blockage_weight(ap_pos: Point3, user_pos: Point3, params: BlockageParams,
                         enabled: bool, mount_height: float | None = None) -> BlockageWeight:
    if not enabled:
        return BlockageWeight(p_block=0.0, los_weight=1.0, d_b=0.0)
    height = ap_pos.z if mount_height is None else mount_height
    d_t = math.hypot(ap_pos.x - user_pos.x, ap_pos.y - user_pos.y)
    d_b = blocker_distance(d_t, params.height, height)
    return blockage_probability(params.density, d_b, params.radius)
