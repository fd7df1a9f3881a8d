"""Monte Carlo simulator for D2D-underlaid, UAV-aided disaster response networks."""

__version__ = "0.1.0"

from .config import Scenario, SimConfig  # noqa: E402
from .errors import ConfigError, DrnSimError  # noqa: E402
from .geometry import Deployment, sample_deployment  # noqa: E402
from .metrics import evaluate  # noqa: E402
from .montecarlo import ScenarioResult, TrialPlan, run_scenario, run_scenarios  # noqa: E402

__all__ = [
    "__version__", "Scenario", "SimConfig", "ConfigError", "DrnSimError", "Deployment",
    "sample_deployment", "evaluate", "ScenarioResult", "TrialPlan", "run_scenario", "run_scenarios",
]
