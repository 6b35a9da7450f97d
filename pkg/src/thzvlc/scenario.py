"""Scenario description: room, access points, PHY constants, blockage and thresholds.

Everything inside a :class:`Scenario` is stored in linear SI units (W, Hz, m,
rad, linear SNR).  dB, dBm and degrees only appear in the JSON configuration
handled by :func:`scenario_from_config` / :func:`scenario_to_config`.
"""

from __future__ import annotations

import copy
import hashlib
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

import numpy as np

MODES = ("proposed", "standalone_thz", "non_optimized")
PD_FORMULAS = ("standard", "printed_alt")

# Smallest accepted LED semi-angle; the Lambertian order diverges as it goes to 0.
MIN_SEMI_ANGLE = 1e-3


class ScenarioError(ValueError):
    """A configuration value violates a scenario invariant.

    ``path`` is the dotted config location of the offending field, e.g.
    ``thresholds.fa_p``.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class Point3:
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)


@dataclass(frozen=True)
class Room:
    length: float
    width: float
    height: float


@dataclass(frozen=True)
class ThzPhy:
    carrier_frequency: float      # Hz
    absorption_coefficient: float  # 1/m
    tx_gain: float
    rx_gain: float
    bandwidth: float              # Hz
    noise_psd: float              # W/Hz
    total_power: float            # W, shared by sensing and communication
    circuit_power: float          # W
    rho1: float | None = None     # fixed sensing fraction; None means solve it

    @property
    def noise_power(self) -> float:
        return self.noise_psd * self.bandwidth

    @property
    def budget(self) -> float:
        """Power that the split factor divides, ``P_w + P_cir``."""
        return self.total_power + self.circuit_power


@dataclass(frozen=True)
class VlcAp:
    position: Point3
    semi_angle: float         # rad
    max_power: float          # W
    filter_gain: float = 1.0
    concentrator_index: float = 1.0
    bandwidth: float = 40e6   # Hz
    noise_psd: float = 1e-30  # W/Hz
    lumen_constant: float = 300.0  # lm/W


@dataclass(frozen=True)
class UserRx:
    position: Point3
    pd_area: float = 1e-4     # m^2
    responsivity: float = 0.53
    oe_conversion: float = 3.0
    fov: float = math.pi / 2  # rad; also the concentrator FOV
    rcs: float = 1.0          # m^2


@dataclass(frozen=True)
class BlockageParams:
    """Human blockers as a Matern type-II hard-core process.

    ``density`` is the effective blocker density.  When ``baseline_intensity``
    and ``hardcore_distance`` are both given the config loader derives
    ``density`` from them instead.
    """

    density: float
    radius: float
    height: float
    baseline_intensity: float | None = None
    hardcore_distance: float | None = None
    literal_pb_weighting: bool = False


@dataclass(frozen=True)
class Thresholds:
    sensing_snr: float
    comm_snr: float
    vlc_snr: float
    false_alarm: float
    detection: float
    min_illuminance: float = 300.0
    pd_formula: str = "standard"


@dataclass(frozen=True)
class Scenario:
    room: Room
    thz_sensing_ap: Point3
    thz_comm_ap: Point3
    vlc_aps: tuple[VlcAp, ...]
    thz: ThzPhy
    user_count: int
    user_template: UserRx
    blockage: BlockageParams
    thresholds: Thresholds
    blockage_enabled: bool = False
    mode: str = "proposed"

    @property
    def mount_height(self) -> float:
        return self.thz_comm_ap.z

    @property
    def user_height(self) -> float:
        return self.user_template.position.z

    def with_mode(self, mode: str) -> "Scenario":
        return replace(self, mode=mode)

    def with_blockage(self, enabled: bool) -> "Scenario":
        return replace(self, blockage_enabled=enabled)


# --- unit helpers -----------------------------------------------------------

def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


def dbm_per_hz_to_w(dbm_hz: float) -> float:
    return 10.0 ** ((dbm_hz - 30.0) / 10.0)


def w_to_dbm_per_hz(w_hz: float) -> float:
    return 10.0 * math.log10(w_hz) + 30.0


def dbm_per_mhz_to_w_per_hz(dbm_mhz: float) -> float:
    # dBm/MHz -> dBm/Hz is a 60 dB shift
    return dbm_per_hz_to_w(dbm_mhz - 60.0)


def w_per_hz_to_dbm_per_mhz(w_hz: float) -> float:
    return w_to_dbm_per_hz(w_hz) + 60.0


# --- defaults ---------------------------------------------------------------

DEFAULT_CONFIG: dict[str, Any] = {
    "room": {"length": 5.0, "width": 5.0, "height": 3.0},
    "aps": {
        "thz_sensing": [1.5, 2.5, 2.8],
        "thz_comm": [3.0, 2.5, 2.8],
        "vlc": [
            [1.25, 1.25, 2.8],
            [1.25, 3.75, 2.8],
            [3.75, 3.75, 2.8],
            [3.75, 1.25, 2.8],
        ],
    },
    "thz": {
        "f_hz": 370e9,
        "k_abs_per_m": 0.0033,
        "g_t": 1.0,
        "g_r": 1.0,
        "bandwidth_hz": 100e6,
        "noise_psd_dbm_hz": -174.0,
        "p_w": 2.0,
        "p_cir": 5.6e-3,
        "rho1": None,
    },
    "vlc": {
        "semi_angle_deg": 60.0,
        "p_max": 5.0,
        "t_s": 1.0,
        "ci": 1.0,
        "bandwidth_hz": 40e6,
        "noise_psd_dbm_mhz": -210.0,
        "g_m": 300.0,
    },
    "users": {
        "count": 10,
        "height": 0.85,
        "pd_area_m2": 1e-4,
        "responsivity": 0.53,
        "k_oe": 3.0,
        "fov_deg": 90.0,
    },
    "blockage": {
        "enabled": False,
        "lambda_b": 4.0,
        "lambda_p": None,
        "delta": None,
        "r_b": 2.0,
        "h_b": 1.8,
        "literal_pb_weighting": False,
    },
    "thresholds": {
        "gamma_sens_db": -5.0,
        "gamma_comm_db": 25.0,
        "gamma_vlc_db": 15.0,
        "fa_p": 1e-2,
        "pd_th": 0.5,
        "min_illuminance_lux": 300.0,
        "pd_formula": "standard",
    },
    "mode": "proposed",
}


def default_config() -> dict[str, Any]:
    return copy.deepcopy(DEFAULT_CONFIG)


def default_scenario() -> Scenario:
    """The 5 x 5 x 3 m office with one sensing AP, one THz AP and four LEDs."""
    return scenario_from_config(DEFAULT_CONFIG)


# --- config parsing ---------------------------------------------------------

def _merge(base: dict, overlay: dict, path: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, value in overlay.items():
        where = f"{path}.{key}" if path else key
        if key not in base:
            raise ScenarioError(where, "unknown key")
        if isinstance(base[key], dict) and not isinstance(value, dict):
            raise ScenarioError(where, "expected an object")
        if isinstance(base[key], dict):
            out[key] = _merge(base[key], value, where)
        else:
            out[key] = copy.deepcopy(value)
    return out


def _num(cfg: dict, section: str, key: str) -> float:
    value = cfg[section][key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{section}.{key}", f"expected a number, got {value!r}")
    return float(value)


def _opt_num(cfg: dict, section: str, key: str) -> float | None:
    if cfg[section][key] is None:
        return None
    return _num(cfg, section, key)


def _point(value: Any, path: str) -> Point3:
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        raise ScenarioError(path, "expected [x, y, z]")
    try:
        x, y, z = (float(v) for v in value)
    except (TypeError, ValueError):
        raise ScenarioError(path, "coordinates must be numbers") from None
    return Point3(x, y, z)


def scenario_from_config(config: dict[str, Any]) -> Scenario:
    """Build and validate a :class:`Scenario` from a (partial) config dict.

    Missing keys fall back to the defaults; unknown keys raise
    :class:`ScenarioError`.
    """
    cfg = _merge(DEFAULT_CONFIG, config)

    room = Room(_num(cfg, "room", "length"), _num(cfg, "room", "width"),
                _num(cfg, "room", "height"))

    aps = cfg["aps"]
    sensing = _point(aps["thz_sensing"], "aps.thz_sensing")
    comm = _point(aps["thz_comm"], "aps.thz_comm")
    if not isinstance(aps["vlc"], list):
        raise ScenarioError("aps.vlc", "expected a list of [x, y, z]")
    vlc_positions = [_point(p, f"aps.vlc[{i}]") for i, p in enumerate(aps["vlc"])]

    rho1 = _opt_num(cfg, "thz", "rho1")
    thz = ThzPhy(
        carrier_frequency=_num(cfg, "thz", "f_hz"),
        absorption_coefficient=_num(cfg, "thz", "k_abs_per_m"),
        tx_gain=_num(cfg, "thz", "g_t"),
        rx_gain=_num(cfg, "thz", "g_r"),
        bandwidth=_num(cfg, "thz", "bandwidth_hz"),
        noise_psd=dbm_per_hz_to_w(_num(cfg, "thz", "noise_psd_dbm_hz")),
        total_power=_num(cfg, "thz", "p_w"),
        circuit_power=_num(cfg, "thz", "p_cir"),
        rho1=rho1,
    )

    v = "vlc"
    vlc_aps = tuple(
        VlcAp(
            position=pos,
            semi_angle=math.radians(_num(cfg, v, "semi_angle_deg")),
            max_power=_num(cfg, v, "p_max"),
            filter_gain=_num(cfg, v, "t_s"),
            concentrator_index=_num(cfg, v, "ci"),
            bandwidth=_num(cfg, v, "bandwidth_hz"),
            noise_psd=dbm_per_mhz_to_w_per_hz(_num(cfg, v, "noise_psd_dbm_mhz")),
            lumen_constant=_num(cfg, v, "g_m"),
        )
        for pos in vlc_positions
    )

    count = cfg["users"]["count"]
    if isinstance(count, bool) or not isinstance(count, int):
        if isinstance(count, float) and count.is_integer():
            count = int(count)
        else:
            raise ScenarioError("users.count", f"expected an integer, got {count!r}")
    template = UserRx(
        position=Point3(room.length / 2, room.width / 2, _num(cfg, "users", "height")),
        pd_area=_num(cfg, "users", "pd_area_m2"),
        responsivity=_num(cfg, "users", "responsivity"),
        oe_conversion=_num(cfg, "users", "k_oe"),
        fov=math.radians(_num(cfg, "users", "fov_deg")),
        rcs=1.0,
    )

    b = cfg["blockage"]
    if not isinstance(b["enabled"], bool):
        raise ScenarioError("blockage.enabled", "expected true or false")
    if not isinstance(b["literal_pb_weighting"], bool):
        raise ScenarioError("blockage.literal_pb_weighting", "expected true or false")
    lambda_p = _opt_num(cfg, "blockage", "lambda_p")
    delta = _opt_num(cfg, "blockage", "delta")
    if (lambda_p is None) != (delta is None):
        raise ScenarioError("blockage.lambda_p", "lambda_p and delta must be given together")
    if lambda_p is not None:
        from .blockage import effective_density

        if delta <= 0:
            raise ScenarioError("blockage.delta", "delta must be positive")
        if lambda_p < 0:
            raise ScenarioError("blockage.lambda_p", "lambda_p must be nonnegative")
        density = effective_density(lambda_p, delta)
    else:
        density = _num(cfg, "blockage", "lambda_b")
    blockage = BlockageParams(
        density=density,
        radius=_num(cfg, "blockage", "r_b"),
        height=_num(cfg, "blockage", "h_b"),
        baseline_intensity=lambda_p,
        hardcore_distance=delta,
        literal_pb_weighting=b["literal_pb_weighting"],
    )

    t = "thresholds"
    pd_formula = cfg[t]["pd_formula"]
    thresholds = Thresholds(
        sensing_snr=db_to_linear(_num(cfg, t, "gamma_sens_db")),
        comm_snr=db_to_linear(_num(cfg, t, "gamma_comm_db")),
        vlc_snr=db_to_linear(_num(cfg, t, "gamma_vlc_db")),
        false_alarm=_num(cfg, t, "fa_p"),
        detection=_num(cfg, t, "pd_th"),
        min_illuminance=_num(cfg, t, "min_illuminance_lux"),
        pd_formula=pd_formula,
    )

    scenario = Scenario(
        room=room,
        thz_sensing_ap=sensing,
        thz_comm_ap=comm,
        vlc_aps=vlc_aps,
        thz=thz,
        user_count=count,
        user_template=template,
        blockage=blockage,
        thresholds=thresholds,
        blockage_enabled=b["enabled"],
        mode=cfg["mode"],
    )
    return validate_scenario(scenario)


def scenario_to_config(s: Scenario) -> dict[str, Any]:
    """Inverse of :func:`scenario_from_config` (boundary units restored)."""
    if s.vlc_aps:
        ref = s.vlc_aps[0]
        for i, ap in enumerate(s.vlc_aps):
            if replace(ap, position=ref.position) != ref:
                raise ScenarioError(f"aps.vlc[{i}]", "config format needs identical LED parameters")
    else:
        ref = VlcAp(Point3(0, 0, 0), math.radians(60), 5.0)
    pos = lambda p: [p.x, p.y, p.z]  # noqa: E731
    b = s.blockage
    derived = b.baseline_intensity is not None
    return {
        "room": {"length": s.room.length, "width": s.room.width, "height": s.room.height},
        "aps": {
            "thz_sensing": pos(s.thz_sensing_ap),
            "thz_comm": pos(s.thz_comm_ap),
            "vlc": [pos(ap.position) for ap in s.vlc_aps],
        },
        "thz": {
            "f_hz": s.thz.carrier_frequency,
            "k_abs_per_m": s.thz.absorption_coefficient,
            "g_t": s.thz.tx_gain,
            "g_r": s.thz.rx_gain,
            "bandwidth_hz": s.thz.bandwidth,
            "noise_psd_dbm_hz": w_to_dbm_per_hz(s.thz.noise_psd),
            "p_w": s.thz.total_power,
            "p_cir": s.thz.circuit_power,
            "rho1": s.thz.rho1,
        },
        "vlc": {
            "semi_angle_deg": math.degrees(ref.semi_angle),
            "p_max": ref.max_power,
            "t_s": ref.filter_gain,
            "ci": ref.concentrator_index,
            "bandwidth_hz": ref.bandwidth,
            "noise_psd_dbm_mhz": w_per_hz_to_dbm_per_mhz(ref.noise_psd),
            "g_m": ref.lumen_constant,
        },
        "users": {
            "count": s.user_count,
            "height": s.user_height,
            "pd_area_m2": s.user_template.pd_area,
            "responsivity": s.user_template.responsivity,
            "k_oe": s.user_template.oe_conversion,
            "fov_deg": math.degrees(s.user_template.fov),
        },
        "blockage": {
            "enabled": s.blockage_enabled,
            "lambda_b": b.density,
            "lambda_p": b.baseline_intensity if derived else None,
            "delta": b.hardcore_distance if derived else None,
            "r_b": b.radius,
            "h_b": b.height,
            "literal_pb_weighting": b.literal_pb_weighting,
        },
        "thresholds": {
            "gamma_sens_db": linear_to_db(s.thresholds.sensing_snr),
            "gamma_comm_db": linear_to_db(s.thresholds.comm_snr),
            "gamma_vlc_db": linear_to_db(s.thresholds.vlc_snr),
            "fa_p": s.thresholds.false_alarm,
            "pd_th": s.thresholds.detection,
            "min_illuminance_lux": s.thresholds.min_illuminance,
            "pd_formula": s.thresholds.pd_formula,
        },
        "mode": s.mode,
    }


def load_config(path: str | Path) -> dict[str, Any]:
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ScenarioError("<root>", "config must be a JSON object")
    return data


def load_scenario(path: str | Path) -> Scenario:
    return scenario_from_config(load_config(path))


def fingerprint(s: Scenario) -> str:
    """sha256 of the canonical JSON form of the validated scenario."""
    blob = json.dumps(scenario_to_config(s), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def apply_overrides(config: dict[str, Any], overrides: list[str]) -> dict[str, Any]:
    """Apply ``section.key=value`` strings; values are parsed as JSON when possible."""
    out = copy.deepcopy(config)
    for item in overrides:
        if "=" not in item:
            raise ScenarioError(item, "override must look like section.key=value")
        dotted, raw = item.split("=", 1)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        parts = dotted.strip().split(".")
        node = out
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ScenarioError(dotted, "cannot override inside a non-object")
        node[parts[-1]] = value
    return out


# --- validation -------------------------------------------------------------

def _finite(value: float, path: str) -> None:
    if not math.isfinite(value):
        raise ScenarioError(path, "must be finite")


def _positive(value: float, path: str, name: str) -> None:
    _finite(value, path)
    if value <= 0:
        raise ScenarioError(path, f"{name} must be positive")


def _nonnegative(value: float, path: str, name: str) -> None:
    _finite(value, path)
    if value < 0:
        raise ScenarioError(path, f"{name} must be nonnegative")


def _open_unit(value: float, path: str, name: str) -> None:
    if not (0.0 < value < 1.0):
        raise ScenarioError(path, f"{name} must lie strictly between 0 and 1")


def validate_scenario(s: Scenario) -> Scenario:
    """Return ``s`` unchanged if every invariant holds, else raise ScenarioError."""
    _positive(s.room.length, "room.length", "L")
    _positive(s.room.width, "room.width", "W")
    _positive(s.room.height, "room.height", "H")

    aps = [("aps.thz_sensing", s.thz_sensing_ap), ("aps.thz_comm", s.thz_comm_ap)]
    aps += [(f"aps.vlc[{i}]", ap.position) for i, ap in enumerate(s.vlc_aps)]
    mount = s.thz_comm_ap.z
    for path, p in aps:
        for v in (p.x, p.y, p.z):
            _finite(v, path)
        if not (0 <= p.x <= s.room.length and 0 <= p.y <= s.room.width):
            raise ScenarioError(path, "AP outside the room footprint")
        if p.z > s.room.height:
            raise ScenarioError(path, "AP above the ceiling")
        if p.z != mount:
            raise ScenarioError(path, "all APs must share one ceiling mount height")

    t = s.thz
    _positive(t.carrier_frequency, "thz.f_hz", "f")
    _nonnegative(t.absorption_coefficient, "thz.k_abs_per_m", "k_abs")
    _positive(t.tx_gain, "thz.g_t", "G_t")
    _positive(t.rx_gain, "thz.g_r", "G_r")
    _positive(t.bandwidth, "thz.bandwidth_hz", "B_THz")
    _positive(t.noise_psd, "thz.noise_psd_dbm_hz", "N_THz")
    _positive(t.total_power, "thz.p_w", "P_w")
    _nonnegative(t.circuit_power, "thz.p_cir", "P_cir")
    if t.rho1 is not None and not (0.0 <= t.rho1 <= 1.0):
        raise ScenarioError("thz.rho1", "rho1 must lie in [0, 1]")

    if s.mode not in MODES:
        raise ScenarioError("mode", f"mode must be one of {', '.join(MODES)}")
    if s.mode == "proposed" and not s.vlc_aps:
        raise ScenarioError("aps.vlc", "proposed mode needs at least one VLC AP")
    for i, ap in enumerate(s.vlc_aps):
        if not (MIN_SEMI_ANGLE <= ap.semi_angle < math.pi / 2):
            raise ScenarioError("vlc.semi_angle_deg", "semi-angle must lie in [1 mrad, 90 deg)")
        _positive(ap.max_power, "vlc.p_max", "p_max")
        _positive(ap.filter_gain, "vlc.t_s", "T_s")
        if not ap.concentrator_index >= 1.0:
            raise ScenarioError("vlc.ci", "ci must be at least 1")
        _positive(ap.bandwidth, "vlc.bandwidth_hz", "B_VLC")
        _positive(ap.noise_psd, "vlc.noise_psd_dbm_mhz", "N_VLC")
        _nonnegative(ap.lumen_constant, "vlc.g_m", "G_m")

    if s.user_count < 1:
        raise ScenarioError("users.count", "N must be at least 1")
    u = s.user_template
    _finite(u.position.z, "users.height")
    if not (0 <= u.position.z < mount):
        raise ScenarioError("users.height", "user plane must lie between floor and AP plane")
    _positive(u.pd_area, "users.pd_area_m2", "A")
    _positive(u.responsivity, "users.responsivity", "R")
    _positive(u.oe_conversion, "users.k_oe", "k_oe")
    if not (0 < u.fov <= math.pi / 2):
        raise ScenarioError("users.fov_deg", "FOV must lie in (0, 90] deg")
    _nonnegative(u.rcs, "users.rcs", "sigma_RCS")

    b = s.blockage
    _nonnegative(b.density, "blockage.lambda_b", "lambda_B")
    _positive(b.radius, "blockage.r_b", "r_B")
    _positive(b.height, "blockage.h_b", "h_B")
    if b.height > s.room.height or b.height > mount:
        raise ScenarioError("blockage.h_b", "blocker height must not exceed the AP mount height")
    if b.hardcore_distance is not None:
        cap = 1.0 / (math.pi * b.hardcore_distance ** 2)
        if b.density > cap * (1 + 1e-12):
            raise ScenarioError("blockage.lambda_b", "derived density exceeds 1/(pi delta^2)")

    th = s.thresholds
    _positive(th.sensing_snr, "thresholds.gamma_sens_db", "gamma_sens")
    _positive(th.comm_snr, "thresholds.gamma_comm_db", "gamma_comm")
    _positive(th.vlc_snr, "thresholds.gamma_vlc_db", "gamma_vlc")
    _open_unit(th.false_alarm, "thresholds.fa_p", "fa_p")
    _open_unit(th.detection, "thresholds.pd_th", "pd_th")
    _nonnegative(th.min_illuminance, "thresholds.min_illuminance_lux", "min_illuminance")
    if th.pd_formula not in PD_FORMULAS:
        raise ScenarioError("thresholds.pd_formula", f"must be one of {', '.join(PD_FORMULAS)}")
    if th.pd_formula == "printed_alt" and th.false_alarm > 0.5:
        raise ScenarioError("thresholds.fa_p", "printed_alt detector needs fa_p <= 0.5")
    return s


# --- users ------------------------------------------------------------------

@dataclass(frozen=True)
class UserDrop:
    """Positions and RCS draws for one realization, in array form."""

    positions: np.ndarray  # (N, 3)
    rcs: np.ndarray        # (N,)
    template: UserRx = field(repr=False)

    def __len__(self) -> int:
        return len(self.rcs)

    def user(self, n: int) -> UserRx:
        x, y, z = self.positions[n]
        return replace(self.template, position=Point3(float(x), float(y), float(z)), rcs=float(self.rcs[n]))

    def users(self) -> list[UserRx]:
        return [self.user(n) for n in range(len(self))]


def _as_generator(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def drop_users(s: Scenario, seed) -> UserDrop:
    """Uniform positions on the user plane and Exp(1) radar cross-sections.

    One ``(N, 3)`` block of uniforms is drawn row by row, so the first ``k``
    users of an ``N``-user drop equal a ``k``-user drop with the same seed.
    """
    rng = _as_generator(seed)
    u = rng.random((s.user_count, 3))
    positions = np.column_stack([
        u[:, 0] * s.room.length,
        u[:, 1] * s.room.width,
        np.full(s.user_count, s.user_height),
    ])
    rcs = -np.log1p(-u[:, 2])  # inverse CDF of Exp(1)
    return UserDrop(positions=positions, rcs=rcs, template=s.user_template)


def place_users(s: Scenario, seed) -> list[UserRx]:
    return drop_users(s, seed).users()


def scale_room(s: Scenario, factor: float) -> Scenario:
    """Stretch the floor plan (and AP x/y coordinates) by ``factor``; heights unchanged."""
    if factor <= 0:
        raise ScenarioError("room_scale", "scale must be positive")
    sc = lambda p: Point3(p.x * factor, p.y * factor, p.z)  # noqa: E731
    return validate_scenario(replace(
        s,
        room=replace(s.room, length=s.room.length * factor, width=s.room.width * factor),
        thz_sensing_ap=sc(s.thz_sensing_ap),
        thz_comm_ap=sc(s.thz_comm_ap),
        vlc_aps=tuple(replace(ap, position=sc(ap.position)) for ap in s.vlc_aps),
        user_template=replace(s.user_template, position=sc(s.user_template.position)),
    ))
