import functools
import json
import os
from contextlib import contextmanager
from os import path as osp

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field

from netkin import __version__
from netkin.base import get_import_path, instantiate
from netkin.scenarios import RunDiagnostics, ScenarioConfig


# full double precision, so plots reproduce without rounding drift
FLOAT_FORMAT = "%.17g"


def log_formatter(record: dict, *, colorize: bool = True) -> str:
    """Format log messages. Used by both the console and the per-run log handlers."""
    extra = record["extra"]
    if colorize:
        result = (
            "<green>{time:YYYY-MM-DD HH:mm:ss.SSS}</green> | "
            "<level>{level: <8}</level> | "
            "<cyan>{file}</cyan>:<cyan>{line}</cyan> | "
        )
        if "model" in extra:
            result += "<magenta>{extra[model]}</magenta> | "
        if "run" in extra:
            result += "<blue>{extra[run]}</blue> | "
        result += "<level>{message}</level>\n{exception}"
    else:
        result = "{time:YYYY-MM-DD HH:mm:ss.SSS} | {level: <8} | {file}:{line} | "
        if "model" in extra:
            result += "{extra[model]} | "
        if "run" in extra:
            result += "{extra[run]} | "
        result += "{message}\n{exception}"
    return result


class RunManifest(BaseModel):
    """What was run and what it produced; `config` reproduces the outputs exactly."""

    config: ScenarioConfig = Field(description="Resolved scenario, overrides applied")
    version: str = Field(description="netkin version that produced the outputs", default=__version__)
    dt: dict[str, float] = Field(description="Time step per model run", default_factory=dict)
    steps: dict[str, int] = Field(description="Number of time steps per model run", default_factory=dict)
    wall_time: dict[str, float] = Field(description="Seconds per model run", default_factory=dict)
    outputs: list[str] = Field(description="Output files, relative to the output directory", default_factory=list)


class Recorder:
    """Writes the outputs of one scenario run below `save_dir`."""

    def __init__(self, save_dir: str):
        self.save_dir = save_dir
        os.makedirs(save_dir, exist_ok=True)

    @contextmanager
    def logging(self):
        log_path = osp.join(self.save_dir, "run.log")
        handler_id = logger.add(log_path, format=functools.partial(log_formatter, colorize=False), level="DEBUG")
        try:
            yield
        finally:
            logger.remove(handler_id)

    def save_snapshots(self, diagnostics: RunDiagnostics) -> list[str]:
        """One CSV per model and edge, rows `t,edge,x,<fields>` for every snapshot."""
        outputs = []
        for label, model_run in diagnostics.runs.items():
            os.makedirs(osp.join(self.save_dir, label), exist_ok=True)
            columns = list(model_run.snapshots[0].fields[next(iter(diagnostics.dx))])
            for edge, centers in diagnostics.centers.items():
                blocks = [
                    np.column_stack(
                        [
                            np.full(len(centers), snapshot.time),
                            np.full(len(centers), edge),
                            centers,
                            *(snapshot.fields[edge][column] for column in columns),
                        ]
                    )
                    for snapshot in model_run.snapshots
                ]
                name = osp.join(label, f"edge_{edge}.csv")
                np.savetxt(
                    osp.join(self.save_dir, name),
                    np.vstack(blocks),
                    delimiter=",",
                    header=",".join(["t", "edge", "x", *columns]),
                    comments="",
                    fmt=[FLOAT_FORMAT, "%d", *[FLOAT_FORMAT] * (1 + len(columns))],
                )
                outputs.append(name)
        logger.debug(f"Saved {len(outputs)} snapshot files to: {self.save_dir}")
        return outputs

    def save_mass_series(self, diagnostics: RunDiagnostics) -> str:
        name = "mass.csv"
        lines = ["t,model,total_mass"]
        for label, model_run in diagnostics.runs.items():
            for t, mass in zip(model_run.times, model_run.total_mass):
                lines.append(f"{FLOAT_FORMAT % t},{label},{FLOAT_FORMAT % mass}")
        with open(osp.join(self.save_dir, name), "w") as f:
            f.write("\n".join(lines) + "\n")
        return name

    def save_distances(self, diagnostics: RunDiagnostics) -> str:
        name = "l1.csv"
        lines = ["a,b,l1"]
        for (a, b), distance in diagnostics.pairwise_l1().items():
            lines.append(f"{a},{b},{FLOAT_FORMAT % distance}")
        with open(osp.join(self.save_dir, name), "w") as f:
            f.write("\n".join(lines) + "\n")
        return name

    def save_manifest(self, config: ScenarioConfig, diagnostics: RunDiagnostics, outputs: list[str]) -> RunManifest:
        manifest = RunManifest(
            config=config,
            dt={label: run.dt for label, run in diagnostics.runs.items()},
            steps={label: run.steps for label, run in diagnostics.runs.items()},
            wall_time={label: run.wall_time for label, run in diagnostics.runs.items()},
            outputs=[*outputs, "manifest.json"],
        )
        save_path = osp.join(self.save_dir, "manifest.json")
        dic = {"_target_": get_import_path(RunManifest), **manifest.model_dump(mode="json", by_alias=True)}
        with open(save_path, "w") as f:
            f.write(json.dumps(dic, indent=2))
        logger.info(f"Saved manifest to: {save_path}")
        return manifest

    @staticmethod
    def load_manifest(load_path: str) -> RunManifest:
        with open(load_path) as f:
            manifest = instantiate(json.load(f))
        if not isinstance(manifest, RunManifest):
            raise ValueError(f"{load_path} is not a run manifest")
        if manifest.version != __version__:
            logger.warning(f"Manifest was written by netkin {manifest.version}, running {__version__}")
        return manifest

    def save_run(self, config: ScenarioConfig, diagnostics: RunDiagnostics, *, distances: bool = False) -> RunManifest:
        outputs = self.save_snapshots(diagnostics)
        outputs.append(self.save_mass_series(diagnostics))
        if distances:
            outputs.append(self.save_distances(diagnostics))
        return self.save_manifest(config, diagnostics, outputs)
