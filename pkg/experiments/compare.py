from typing import Literal

from loguru import logger
from pydantic import Field

from experiments.options import ScenarioOptions
from experiments.recorder import Recorder
from experiments.stats import show_distances, show_mass_ordering, show_run_summary
from netkin.models import ModelKind
from netkin.scenarios import run, run_label


class CompareCommand(ScenarioOptions):
    out: str = Field(description="Output directory", default="results_compare")
    variants: list[Literal["kinetic_derived", "alpha_transmission", "density_continuity"]] | None = Field(
        description="Cattaneo coupling variants, each run with the P1 model next to the scenario's models",
        default=None,
    )


def cmd_compare(command: CompareCommand) -> int:
    """Run a model set on one scenario and report pairwise L1 distances and the final-mass ordering."""
    config = command.scenario()
    recorder = Recorder(command.out)
    with recorder.logging():
        logger.info(f"{command=}")
        diagnostics = run(config)
        for variant in dict.fromkeys(command.variants or []):
            variant_config = config.override(models=[ModelKind.P1.value], cattaneo={"kind": variant})
            label = run_label(ModelKind.P1, variant_config.cattaneo)
            if label in diagnostics.runs:
                logger.debug(f"Already ran {label}")
                continue
            diagnostics = diagnostics.merged(run(variant_config))

        if len(diagnostics.runs) < 2:
            logger.warning("Only one run, the distance table is trivial")
        recorder.save_run(config, diagnostics, distances=True)
        show_run_summary(diagnostics)
        show_mass_ordering(diagnostics)
        show_distances(diagnostics)
    return 0
