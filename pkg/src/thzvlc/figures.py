"""Predeclared figure recipes.

Each recipe is a sweep over one parameter, optionally repeated for a few
series (config overrides), written as one CSV with a ``series`` column.
"""

from __future__ import annotations

import json
from concurrent.futures import Executor
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .scenario import apply_overrides
from .sweep import SweepPoint, SweepSpec, config_fingerprint, render_csv, run_sweep

USERS_1_10 = tuple(range(1, 11))
USERS_2_10 = tuple(range(2, 11))
LAMBDAS = (2.0, 4.0, 6.0, 8.0)
# fa_p must stay strictly below 1, so the top of the false-alarm axis is 0.9
FALSE_ALARMS = (1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 0.9)


@dataclass(frozen=True)
class Recipe:
    name: str
    parameter: str
    values: tuple[float, ...]
    modes: tuple[str, ...] = ("proposed",)
    blockage: str = "off"
    series: tuple[tuple[str, tuple[str, ...]], ...] = (("base", ()),)
    fixed: tuple[str, ...] = ()  # overrides applied to every series

    @property
    def filename(self) -> str:
        return f"{self.name}.csv"


RECIPES: tuple[Recipe, ...] = (
    Recipe("fig5_rho1", "user_count", USERS_1_10,
           series=tuple((f"p_w={p:g}", (f"thz.p_w={p}",)) for p in (2.0, 4.0, 6.0))),
    Recipe("fig6_pd_vs_fap", "fa_p", FALSE_ALARMS, blockage="both",
           series=tuple((f"gamma_sens_db={g:g}", (f"thresholds.gamma_sens_db={g}",))
                        for g in (-5.0, 0.0, 5.0))),
    Recipe("fig7_assoc_vs_fap", "fa_p", FALSE_ALARMS, blockage="both"),
    Recipe("fig8_pd_scp_vs_n", "user_count", USERS_1_10, blockage="both"),
    Recipe("fig9_power_vs_n", "user_count", USERS_1_10, modes=("proposed", "non_optimized")),
    Recipe("fig10_pd_scp_vs_lambda", "lambda_B", LAMBDAS, blockage="on",
           series=tuple((f"users={n}", (f"users.count={n}",)) for n in (4, 6, 8, 10))),
    Recipe("fig11_assoc_vs_lambda", "lambda_B", LAMBDAS, blockage="on"),
    Recipe("fig12_se_vs_n", "user_count", USERS_2_10, modes=("proposed", "standalone_thz"),
           blockage="both"),
    Recipe("fig14_ee_vs_n", "user_count", USERS_1_10, modes=("proposed", "non_optimized"),
           blockage="both"),
    Recipe("fig15_ee_vs_lambda", "lambda_B", LAMBDAS, modes=("proposed", "non_optimized"),
           blockage="on"),
    Recipe("fig16_rates_vs_n", "user_count", tuple(range(4, 11)),
           modes=("proposed", "standalone_thz"), blockage="both"),
    Recipe("fig17_rates_vs_lambda", "lambda_B", LAMBDAS, modes=("proposed", "standalone_thz"),
           blockage="on"),
)
RECIPES_BY_NAME = {r.name: r for r in RECIPES}


def run_recipe(config: dict[str, Any], recipe: Recipe, trials: int, base_seed: int, *,
               executor: Executor | None = None) -> list[SweepPoint]:
    spec = SweepSpec(recipe.parameter, recipe.values, trials, base_seed, recipe.modes,
                     recipe.blockage)
    base = apply_overrides(config, list(recipe.fixed))
    points: list[SweepPoint] = []
    for label, overrides in recipe.series:
        points += run_sweep(apply_overrides(base, list(overrides)), spec, executor=executor,
                            series=label)
    return points


def recipe_header(config: dict[str, Any], recipe: Recipe, trials: int, base_seed: int) -> list[str]:
    series = {label: list(ov) for label, ov in recipe.series}
    return [
        f"figure: {recipe.name}",
        f"fingerprint: {config_fingerprint(config)}",
        f"parameter: {recipe.parameter}",
        f"values: {json.dumps(list(recipe.values))}",
        f"modes: {','.join(recipe.modes)}",
        f"blockage: {recipe.blockage}",
        f"series: {json.dumps(series, sort_keys=True)}",
        f"trials: {trials}",
        f"seed: {base_seed}",
    ]


def write_figures(config: dict[str, Any], out_dir: Path, trials: int, base_seed: int, *,
                  executor: Executor | None = None,
                  names: tuple[str, ...] | None = None) -> dict[str, list[SweepPoint]]:
    """Run the recipes and write one CSV per figure into ``out_dir``."""
    out_dir.mkdir(parents=True, exist_ok=True)
    done = {}
    for recipe in RECIPES:
        if names is not None and recipe.name not in names:
            continue
        points = run_recipe(config, recipe, trials, base_seed, executor=executor)
        text = render_csv(points, recipe_header(config, recipe, trials, base_seed),
                          with_series=True)
        (out_dir / recipe.filename).write_text(text)
        done[recipe.name] = points
    return done
