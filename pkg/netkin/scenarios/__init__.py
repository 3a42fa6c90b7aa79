from netkin.scenarios.config import BoundaryCondition, InitialSegment, ScenarioConfig
from netkin.scenarios.diagnostics import ModelRun, RunDiagnostics, Snapshot, l1_distance, total_mass
from netkin.scenarios.dynamics import (
    CattaneoDynamics,
    HalfMomentDynamics,
    KellerSegelDynamics,
    KineticDynamics,
    ModelDynamics,
    NodeClosure,
    build_dynamics,
    run_label,
)
from netkin.scenarios.networks import BUILTIN_NETWORKS, large_network, resolve_network
from netkin.scenarios.presets import ALL_MODELS, PRESETS, preset_interval_riemann, preset_large_network, preset_tripod
from netkin.scenarios.simulation import NetworkSimulation, run


__all__ = [
    "ALL_MODELS",
    "BUILTIN_NETWORKS",
    "PRESETS",
    "BoundaryCondition",
    "CattaneoDynamics",
    "HalfMomentDynamics",
    "InitialSegment",
    "KellerSegelDynamics",
    "KineticDynamics",
    "ModelDynamics",
    "ModelRun",
    "NetworkSimulation",
    "NodeClosure",
    "RunDiagnostics",
    "ScenarioConfig",
    "Snapshot",
    "build_dynamics",
    "l1_distance",
    "large_network",
    "preset_interval_riemann",
    "preset_large_network",
    "preset_tripod",
    "resolve_network",
    "run",
    "run_label",
    "total_mass",
]
