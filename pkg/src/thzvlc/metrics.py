"""Per-trial performance metrics: spectral/energy efficiency, link rates, coverage."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Sequence

from .sensing import DetectionOutcome

THZ = "thz"
VLC = "vlc"
UNSERVED = "unserved"


@dataclass(frozen=True)
class Association:
    """Serving decision and realised SNR per user.

    ``vlc_ap[n]`` is the serving LED index for VLC users and -1 otherwise.
    """

    link: tuple[str, ...]
    vlc_ap: tuple[int, ...]
    snr: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.link)

    def count(self, kind: str) -> int:
        return sum(1 for k in self.link if k == kind)

    def served(self) -> list[int]:
        return [n for n, k in enumerate(self.link) if k != UNSERVED]


@dataclass(frozen=True)
class MetricsSnapshot:
    avg_se: float          # bit/s/Hz
    avg_ee: float          # bit/J/Hz
    avg_sens_rate: float   # bit/s
    avg_comm_rate: float   # bit/s
    sc_p: float
    total_power: float     # W
    thz_user_count: int
    vlc_user_count: int
    unserved_count: int
    min_illuminance_ok: bool


METRIC_NAMES = tuple(f.name for f in fields(MetricsSnapshot))


def average_se(association: Association) -> float:
    """Sum of log2(1 + SNR) over served users, divided by all N users."""
    n = len(association)
    if n == 0:
        return 0.0
    return math.fsum(math.log2(1.0 + association.snr[i]) for i in association.served()) / n


def average_ee(avg_se: float, total_power: float) -> float:
    if total_power <= 0:
        raise ValueError("total power must be positive")
    return avg_se / total_power


def shannon_rate(bandwidth: float, snr: float) -> float:
    return bandwidth * math.log2(1.0 + snr)


def link_rates(association: Association, detections: Sequence[DetectionOutcome],
               thz_bandwidth: float, vlc_bandwidth: float) -> tuple[float, float]:
    """Mean sensing rate over covered users and mean communication rate over served users.

    Both are Shannon rates over the respective link bandwidths; an empty user
    set gives 0.
    """
    sens = [shannon_rate(thz_bandwidth, d.snr_sens) for d in detections if d.covered]
    comm = []
    for n in association.served():
        bw = thz_bandwidth if association.link[n] == THZ else vlc_bandwidth
        comm.append(shannon_rate(bw, association.snr[n]))
    mean = lambda xs: math.fsum(xs) / len(xs) if xs else 0.0  # noqa: E731
    return mean(sens), mean(comm)


def snapshot(association: Association, detections: Sequence[DetectionOutcome], *,
             total_power: float, thz_bandwidth: float, vlc_bandwidth: float,
             illuminance_ok: bool) -> MetricsSnapshot:
    se = average_se(association)
    sens_rate, comm_rate = link_rates(association, detections, thz_bandwidth, vlc_bandwidth)
    sc_p = sum(d.covered for d in detections) / len(detections) if detections else 0.0
    return MetricsSnapshot(
        avg_se=se,
        avg_ee=average_ee(se, total_power),
        avg_sens_rate=sens_rate,
        avg_comm_rate=comm_rate,
        sc_p=sc_p,
        total_power=total_power,
        thz_user_count=association.count(THZ),
        vlc_user_count=association.count(VLC),
        unserved_count=association.count(UNSERVED),
        min_illuminance_ok=illuminance_ok,
    )
