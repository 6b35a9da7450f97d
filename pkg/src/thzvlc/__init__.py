"""Indoor THz sensing with hybrid THz/VLC communication: a Monte Carlo simulator."""

from .engine import AggregateResult, TrialResult, associate_users, run_monte_carlo, run_trial
from .scenario import Scenario, ScenarioError, default_scenario, load_scenario

__all__ = [
    "AggregateResult", "Scenario", "ScenarioError", "TrialResult", "associate_users",
    "default_scenario", "load_scenario", "run_monte_carlo", "run_trial",
]
__version__ = "0.1.0"
