"""Parameter sweeps and their CSV serialisation."""

from __future__ import annotations

import csv
import io
from concurrent.futures import Executor
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from .engine import TRIAL_FIELDS, AggregateResult, run_monte_carlo
from .scenario import (MODES, Scenario, ScenarioError, apply_overrides, fingerprint,
                       scale_room, scenario_from_config, scenario_to_config)

# sweep parameter -> config location; room_scale acts on the built scenario
SWEEP_PARAMS: dict[str, str | None] = {
    "user_count": "users.count",
    "lambda_B": "blockage.lambda_b",
    "fa_p": "thresholds.fa_p",
    "total_power": "thz.p_w",
    "rho1": "thz.rho1",
    "room_scale": None,
}
BLOCKAGE_STATES = {"off": (False,), "on": (True,), "both": (False, True)}

STAT_COLUMNS = tuple(f"mean_{f}" for f in TRIAL_FIELDS) + tuple(f"std_{f}" for f in TRIAL_FIELDS)
SWEEP_COLUMNS = ("value", "mode", "blockage", "trials") + STAT_COLUMNS
FIGURE_COLUMNS = ("series",) + SWEEP_COLUMNS


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    values: tuple[float, ...]
    trials: int
    base_seed: int
    modes: tuple[str, ...] = ("proposed",)
    blockage: str = "off"

    def __post_init__(self):
        if self.parameter not in SWEEP_PARAMS:
            raise ScenarioError("sweep.parameter",
                                f"unknown parameter {self.parameter!r}; pick one of {sorted(SWEEP_PARAMS)}")
        if not self.values:
            raise ScenarioError("sweep.values", "need at least one value")
        if self.trials < 1:
            raise ScenarioError("sweep.trials", "trials must be at least 1")
        for m in self.modes:
            if m not in MODES:
                raise ScenarioError("sweep.modes", f"unknown mode {m!r}")
        if self.blockage not in BLOCKAGE_STATES:
            raise ScenarioError("sweep.blockage", "expected on, off or both")


@dataclass(frozen=True)
class SweepPoint:
    value: float
    mode: str
    blockage: bool
    scenario: Scenario
    result: AggregateResult
    series: str = ""


def _format_value(value: Any) -> str:
    if isinstance(value, float):
        return format(value, ".9g")
    return str(value)


def point_scenario(config: dict[str, Any], parameter: str, value: float, mode: str,
                   blockage: bool) -> Scenario:
    """Validated scenario for one sweep point."""
    if parameter == "user_count":
        if float(value) != int(value):
            raise ScenarioError("users.count", "user count must be an integer")
        value = int(value)
    path = SWEEP_PARAMS[parameter]
    overrides = [f"mode=\"{mode}\"", f"blockage.enabled={'true' if blockage else 'false'}"]
    if path is not None:
        overrides.append(f"{path}={_format_value(value)}")
    s = scenario_from_config(apply_overrides(config, overrides))
    if parameter == "room_scale":
        s = scale_room(s, float(value))
    return s


def run_sweep(config: dict[str, Any], spec: SweepSpec, *, executor: Executor | None = None,
              series: str = "") -> list[SweepPoint]:
    """Rows ordered by value, then blockage state (off first), then mode.

    Every point reuses ``spec.base_seed``, so modes, blockage states and
    values are compared on the same user drops.
    """
    points = []
    for value in spec.values:
        for blk in BLOCKAGE_STATES[spec.blockage]:
            for mode in spec.modes:
                s = point_scenario(config, spec.parameter, value, mode, blk)
                res = run_monte_carlo(s, spec.trials, spec.base_seed, executor=executor)
                points.append(SweepPoint(value, mode, blk, s, res, series))
    return points


def _row(p: SweepPoint) -> list[str]:
    cells = [_format_value(float(p.value)), p.mode, "on" if p.blockage else "off",
             str(p.result.trials)]
    cells += [format(p.result.mean[f], ".9g") for f in TRIAL_FIELDS]
    cells += [format(p.result.std[f], ".9g") for f in TRIAL_FIELDS]
    return cells


def render_csv(points: Iterable[SweepPoint], comments: Sequence[str] = (), *,
               with_series: bool = False) -> str:
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FIGURE_COLUMNS if with_series else SWEEP_COLUMNS)
    for p in points:
        w.writerow(([p.series] if with_series else []) + _row(p))
    return buf.getvalue()


def read_csv(text: str) -> list[dict[str, str]]:
    """Parse a CSV written by :func:`render_csv`, skipping ``#`` comment lines."""
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def config_fingerprint(config: dict[str, Any]) -> str:
    return fingerprint(scenario_from_config(config))


def canonical_config(config: dict[str, Any]) -> dict[str, Any]:
    return scenario_to_config(scenario_from_config(config))


def any_split_feasible(points: Iterable[SweepPoint]) -> bool:
    return any(p.result.mean["split_feasible"] > 0 for p in points)
