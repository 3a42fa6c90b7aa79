from loguru import logger
from pydantic import Field

from experiments.options import ScenarioOptions
from experiments.recorder import Recorder
from experiments.stats import show_run_summary
from netkin.scenarios import run


class RunCommand(ScenarioOptions):
    out: str = Field(description="Output directory", default="results")


def cmd_run(command: RunCommand) -> int:
    """Run the models of a scenario and write per-edge snapshots, the mass series and a manifest."""
    config = command.scenario()
    recorder = Recorder(command.out)
    with recorder.logging():
        logger.info(f"{command=}")
        diagnostics = run(config)
        recorder.save_run(config, diagnostics)
        show_run_summary(diagnostics)
    return 0
