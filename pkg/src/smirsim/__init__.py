"""smirsim: two-level SMIR (Susceptible-Misinformed-Infected-Recovered) simulator.

Mean-field ODE dynamics with homophily, plus an agent-based pipeline that
spreads misinformation over a retweet network, samples county populations
matched to vote records, wires them into a mobility-informed contact network,
and runs discrete-time epidemics on it.
"""

__version__ = "0.1.0"

from .abm import AbmConfig, AbmState, EpidemicResult, run, seed_infection, step
from .contactnet import (
    ContactNetwork,
    SampledNodes,
    build_contact_network,
    expected_edges,
    generate_synthetic_mobility,
    load_contact_network,
    sample_population,
    save_contact_network,
)
from .infonet import (
    InfoGenConfig,
    InfoNetwork,
    MisinfoLabeling,
    generate_synthetic_infonet,
    load_infonet,
    propagate_alignment,
    save_infonet,
    spread_misinformation,
)
from .meanfield import (
    MeanFieldParams,
    MeanFieldState,
    Trajectory,
    TrajectorySummary,
    derivatives,
    initial_state,
    integrate,
    r0,
    summarize,
    sweep,
    sweep_grid,
)
from .scenario import (
    MobilityMatrix,
    Scenario,
    ScenarioConfig,
    generate_scenario,
    load_scenario,
    save_scenario,
)

__all__ = [
    "__version__",
    "AbmConfig", "AbmState", "EpidemicResult", "run", "seed_infection", "step",
    "ContactNetwork", "SampledNodes", "build_contact_network", "expected_edges",
    "generate_synthetic_mobility", "load_contact_network", "sample_population",
    "save_contact_network",
    "InfoGenConfig", "InfoNetwork", "MisinfoLabeling", "generate_synthetic_infonet",
    "load_infonet", "propagate_alignment", "save_infonet", "spread_misinformation",
    "MeanFieldParams", "MeanFieldState", "Trajectory", "TrajectorySummary",
    "derivatives", "initial_state", "integrate", "r0", "summarize", "sweep",
    "sweep_grid",
    "MobilityMatrix", "Scenario", "ScenarioConfig", "generate_scenario",
    "load_scenario", "save_scenario",
]
