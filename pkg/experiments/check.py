"""Property checks of the solvers: conservation, positivity, node-condition limits and model equivalences.

Tolerances are the acceptance bounds of the respective properties; each check returns one or more
`CheckResult` rows and never raises on a failed property.
"""

from typing import Callable, Literal

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field, ValidationError

from experiments.recorder import Recorder
from experiments.stats import CheckResult, show_check_results
from netkin.base import SimulationAborted
from netkin.coupling import (
    AlphaTransmission,
    KineticDerived,
    cattaneo_conditions,
    epsilon_limit_check,
    equivalent_transmission_alpha,
    half_moment_conditions,
    kinetic_coupling_matrix,
    solve_node_cattaneo,
)
from netkin.graph import NodeLocalFrame
from netkin.models import ModelKind, transport_system
from netkin.scenarios import (
    PRESETS,
    InitialSegment,
    NetworkSimulation,
    ScenarioConfig,
    l1_distance,
    preset_large_network,
    run,
    run_label,
)


CheckName = Literal[
    "conservation",
    "positivity",
    "limit",
    "one_to_one",
    "variants",
    "ap_dt",
    "validation",
    "eigen",
    "diffusive_limit",
    "large_ordering",
]

CONSERVATION_EPSILONS = (1.0, 0.5, 0.1, 1e-6)
MASS_TOLERANCE = 1e-12
POSITIVITY_TOLERANCE = -1e-13
LIMIT_TOLERANCE = 1e-14
ONE_TO_ONE_TOLERANCE = 1e-12
VARIANT_TOLERANCE = 1e-10
EIGEN_TOLERANCE = 1e-12
LARGE_NETWORK_TIME = 5.0
HALF_MOMENT_KINETIC_GAP = 0.05
LIMIT_EPSILONS = (0.5, 0.1, 1e-6)
# the L1 distance to Keller-Segel at the smallest epsilon halves with dx, up to this factor
HALVING_FACTOR = 1.5
# the chemoattractant diffusion bound must not bind for the time-step check
AP_DIFFUSIVITY = 0.01


class CheckCommand(BaseModel):
    preset: Literal["interval", "tripod"] = Field(
        description="Closed scenario for the conservation and positivity runs", default="tripod"
    )
    suite: list[CheckName] | None = Field(description="Checks to run, all but the slow ones when unset", default=None)
    dx: float | None = Field(description="Cell size of the check runs", default=None)
    tend: float | None = Field(description="Final time of the check runs", default=None)
    velocity_cells: int | None = Field(description="Velocity cells of the kinetic runs", default=None)
    out: str | None = Field(description="Directory for run.log", default=None)

    def scenario(self, config: ScenarioConfig, **updates) -> ScenarioConfig:
        return config.override(dx=self.dx, t_end=self.tend, velocity_cells=self.velocity_cells, **updates)


def _junction(degree: int) -> NodeLocalFrame:
    return NodeLocalFrame(node=0, edges=tuple(range(degree)), signs=(1,) * degree)


def check_conservation(command: CheckCommand) -> list[CheckResult]:
    results = []
    for eps in CONSERVATION_EPSILONS:
        diagnostics = run(command.scenario(PRESETS[command.preset](), epsilon=eps))
        drifts = {}
        for label, model_run in diagnostics.runs.items():
            # relative drift for the hyperbolic models, absolute for Keller-Segel
            scale = 1.0 if model_run.model == ModelKind.KELLER_SEGEL.value else model_run.total_mass[0]
            drifts[label] = model_run.mass_drift / scale if scale > 0 else model_run.mass_drift
        worst = max(drifts, key=drifts.get)
        results.append(
            CheckResult(
                name=f"conservation eps={eps:g}",
                passed=drifts[worst] <= MASS_TOLERANCE,
                measured=drifts[worst],
                bound=MASS_TOLERANCE,
                detail=f"worst: {worst}",
            )
        )
    return results


def check_positivity(command: CheckCommand) -> list[CheckResult]:
    config = command.scenario(PRESETS[command.preset](), models=["kinetic"], epsilon=1.0, alpha=1.0, **{"lambda": 1.0})
    model_run = run(config).runs[ModelKind.KINETIC.value]
    return [
        CheckResult(
            name="positivity",
            passed=model_run.min_distribution >= POSITIVITY_TOLERANCE,
            measured=model_run.min_distribution,
            bound=POSITIVITY_TOLERANCE,
            detail="min of f(v), f(-v) over cells, velocities and steps",
        )
    ]


def check_limit(command: CheckCommand) -> list[CheckResult]:
    A = kinetic_coupling_matrix(3)
    # continuous rho (and q_hat), zero total q (and rho_hat)
    consistent = {
        "p1": (cattaneo_conditions(KineticDerived(), A), np.array([[1.5, 0.3], [1.5, -1.0], [1.5, 0.7]])),
        "half_moment": (
            half_moment_conditions(A),
            np.array([[1.0, 0.2, 0.5, 0.3], [1.0, -0.5, -0.25, 0.3], [1.0, 0.3, -0.25, 0.3]]),
        ),
    }
    results = []
    for name, (conditions, states) in consistent.items():
        limit = epsilon_limit_check(conditions, 0.0)
        residual = float(np.max(np.abs(limit.residual(states, 0.0))))
        # full rank: the limit rows say nothing beyond continuity and zero total flux
        rank = int(np.linalg.matrix_rank(limit.matrix(0.0)))
        results.append(
            CheckResult(
                name=f"limit {name}",
                passed=residual <= LIMIT_TOLERANCE and rank == limit.rows,
                measured=residual,
                bound=LIMIT_TOLERANCE,
                detail=f"rank {rank} of {limit.rows} rows",
            )
        )
    return results


def check_one_to_one(command: CheckCommand) -> list[CheckResult]:
    interval = command.scenario(PRESETS["interval"](), models=["kinetic"], epsilon=0.5, snapshots=1)
    if command.dx is None:
        interval = interval.override(dx=0.02)
    split = interval.override(network="one_to_one", initial_density=[InitialSegment(edge=0, density=1.0)])
    whole = run(interval).runs[ModelKind.KINETIC.value].final.fields
    joined = run(split).runs[ModelKind.KINETIC.value].final.fields
    difference = max(
        float(np.max(np.abs(np.concatenate([joined[0][column], joined[1][column]]) - whole[0][column])))
        for column in whole[0]
    )
    return [
        CheckResult(
            name="one_to_one",
            passed=difference <= ONE_TO_ONE_TOLERANCE,
            measured=difference,
            bound=ONE_TO_ONE_TOLERANCE,
            detail="kinetic, eps=0.5, joined edges vs one interval",
        )
    ]


def check_variants(command: CheckCommand) -> list[CheckResult]:
    rng = np.random.default_rng(0)
    A = kinetic_coupling_matrix(3)
    results = []
    for eps in (1.0, 0.1):
        variant = AlphaTransmission(alpha=equivalent_transmission_alpha(eps))
        difference = 0.0
        for _ in range(100):
            traces = rng.normal(size=(3, 2))
            derived = solve_node_cattaneo(_junction(3), traces, KineticDerived(), A, eps, 1 / 3)
            transmitted = solve_node_cattaneo(_junction(3), traces, variant, A, eps, 1 / 3)
            difference = max(difference, float(np.max(np.abs(transmitted - derived))))
        results.append(
            CheckResult(
                name=f"variants eps={eps:g}",
                passed=difference <= VARIANT_TOLERANCE,
                measured=difference,
                bound=VARIANT_TOLERANCE,
                detail=f"alpha_ij={variant.alpha:.6g}, 100 trace sets",
            )
        )
    return results


def check_ap_dt(command: CheckCommand) -> list[CheckResult]:
    config = command.scenario(PRESETS[command.preset](), models=["kinetic"], D=AP_DIFFUSIVITY)
    moderate = NetworkSimulation(config.override(epsilon=1e-2), ModelKind.KINETIC)
    stiff = NetworkSimulation(config.override(epsilon=1e-6), ModelKind.KINETIC)
    detail = f"dt={stiff.dt:.6g}"
    try:
        finite = bool(np.all(np.isfinite(stiff.run().total_mass)))
    except SimulationAborted as e:
        finite = False
        detail = f"aborted at step {e.step}"
    return [
        CheckResult(
            name="ap_dt",
            passed=moderate.dt == stiff.dt and finite,
            measured=abs(moderate.dt - stiff.dt),
            bound=0.0,
            detail=detail,
        )
    ]


def check_validation(command: CheckCommand) -> list[CheckResult]:
    config = PRESETS[command.preset]()
    params = config.params
    try:
        config.override(epsilon=2 * params.lambda_ / params.alpha)
    except ValidationError:
        return [CheckResult(name="validation", passed=True, detail="eps > lambda/alpha rejected")]
    return [CheckResult(name="validation", passed=False, detail="eps > lambda/alpha accepted")]


def check_eigen(command: CheckCommand) -> list[CheckResult]:
    results = []
    for phi in (1 / 6, 1 / 12):
        # x^4 - (29/6) phi x^2 + phi^2 / 6 = 0 as a quadratic in x^2
        b = 29.0 / 6.0 * phi
        disc = np.sqrt(b * b - 4 * phi * phi / 6.0)
        roots = np.sqrt(np.array([(b - disc) / 2, (b + disc) / 2]))
        expected = np.sort(np.concatenate([-roots, roots]))
        difference = float(np.max(np.abs(transport_system(ModelKind.HALF_MOMENT, phi).eigenvalues - expected)))
        results.append(
            CheckResult(
                name=f"eigen phi={phi:.4g}",
                passed=difference <= EIGEN_TOLERANCE,
                measured=difference,
                bound=EIGEN_TOLERANCE,
            )
        )
    return results


def _distances_to_keller_segel(config: ScenarioConfig) -> dict[str, float]:
    diagnostics = run(config)
    reference = diagnostics.runs[ModelKind.KELLER_SEGEL.value].final.density()
    return {
        label: l1_distance(model_run.final.density(), reference, diagnostics.dx)
        for label, model_run in diagnostics.runs.items()
        if model_run.model != ModelKind.KELLER_SEGEL.value
    }


def check_diffusive_limit(command: CheckCommand) -> list[CheckResult]:
    config = command.scenario(PRESETS["interval"](), snapshots=1)
    sweep = {eps: _distances_to_keller_segel(config.override(epsilon=eps)) for eps in LIMIT_EPSILONS}
    stiff = config.override(epsilon=LIMIT_EPSILONS[-1])
    refined = _distances_to_keller_segel(stiff.override(dx=stiff.dx / 2))

    results = []
    for label, coarse in sweep[LIMIT_EPSILONS[-1]].items():
        distances = [sweep[eps][label] for eps in LIMIT_EPSILONS]
        ratio = coarse / refined[label] if refined[label] > 0 else float("inf")
        decreasing = all(later < earlier for earlier, later in zip(distances, distances[1:]))
        results.append(
            CheckResult(
                name=f"diffusive_limit {label}",
                passed=decreasing and abs(np.log(ratio / 2.0)) <= np.log(HALVING_FACTOR),
                measured=ratio,
                bound=2.0,
                detail="L1 to KS " + ", ".join(f"{d:.3g}" for d in distances) + f"; dx halving ratio {ratio:.3g}",
            )
        )
    return results


def check_large_ordering(command: CheckCommand) -> list[CheckResult]:
    config = command.scenario(preset_large_network(t_end=LARGE_NETWORK_TIME))
    masses = run(config).final_masses()
    ks = masses[ModelKind.KELLER_SEGEL.value]
    p1 = masses[run_label(ModelKind.P1, config.cattaneo)]
    hm = masses[ModelKind.HALF_MOMENT.value]
    kinetic = masses[ModelKind.KINETIC.value]
    gap = abs(hm - kinetic) / kinetic
    return [
        CheckResult(
            name="large_ordering",
            passed=ks > p1 > max(hm, kinetic) and gap <= HALF_MOMENT_KINETIC_GAP,
            measured=gap,
            bound=HALF_MOMENT_KINETIC_GAP,
            detail=f"KS {ks:.6g}, P1 {p1:.6g}, HM {hm:.6g}, kinetic {kinetic:.6g}",
        )
    ]


CHECKS: dict[str, Callable[[CheckCommand], list[CheckResult]]] = {
    "conservation": check_conservation,
    "positivity": check_positivity,
    "limit": check_limit,
    "one_to_one": check_one_to_one,
    "variants": check_variants,
    "ap_dt": check_ap_dt,
    "validation": check_validation,
    "eigen": check_eigen,
    "diffusive_limit": check_diffusive_limit,
    "large_ordering": check_large_ordering,
}
# minutes rather than seconds at full resolution, run on request only
SLOW_CHECKS = ("diffusive_limit", "large_ordering")
DEFAULT_SUITE = [name for name in CHECKS if name not in SLOW_CHECKS]


def run_checks(command: CheckCommand) -> list[CheckResult]:
    results = []
    for name in dict.fromkeys(command.suite or DEFAULT_SUITE):
        logger.info(f"Running check: {name}")
        results.extend(CHECKS[name](command))
    return results


def cmd_check(command: CheckCommand) -> int:
    """Run the property checks and print a pass/fail table; the exit status is 1 if any check fails."""
    if command.out is None:
        results = run_checks(command)
    else:
        with Recorder(command.out).logging():
            results = run_checks(command)
    show_check_results(results)
    return 0 if all(result.passed for result in results) else 1
