from typing import ClassVar, Literal

from pydantic import BaseModel, Field, model_validator

from experiments.recorder import Recorder
from netkin.scenarios import ALL_MODELS, PRESETS, ScenarioConfig


ModelChoice = Literal["kinetic", "p1", "half_moment", "keller_segel", "all"]
PresetChoice = Literal["interval", "tripod", "large"]


class ScenarioOptions(BaseModel):
    """Where the scenario comes from, and the overrides applied on top of it."""

    source_fields: ClassVar[tuple[str, ...]] = ("config", "preset", "manifest")

    config: str | None = Field(description="Scenario JSON file", default=None)
    preset: PresetChoice | None = Field(description="Built-in scenario", default=None)
    manifest: str | None = Field(description="Re-run the scenario recorded in a run manifest", default=None)
    model: list[ModelChoice] | None = Field(description="Models to run, `all` for the four models", default=None)
    epsilon: float | None = Field(description="Diffusive scaling parameter", default=None)
    dx: float | None = Field(description="Cell size on every edge", default=None)
    tend: float | None = Field(description="Final time", default=None)
    snapshots: int | None = Field(description="Number of output times after t=0", default=None)
    velocity_cells: int | None = Field(description="Velocity cells of the kinetic model", default=None)

    @model_validator(mode="after")
    def _one_source(self) -> "ScenarioOptions":
        given = [name for name in self.source_fields if getattr(self, name) is not None]
        if len(given) != 1:
            flags = ", ".join(f"--{name}" for name in self.source_fields)
            raise ValueError(f"give exactly one of {flags}, got {len(given)}")
        return self

    def base_scenario(self) -> ScenarioConfig:
        if self.manifest is not None:
            return Recorder.load_manifest(self.manifest).config
        if self.config is not None:
            with open(self.config) as f:
                return ScenarioConfig.model_validate_json(f.read())
        return PRESETS[self.preset]()

    def scenario(self) -> ScenarioConfig:
        models = None
        if self.model:
            models = [kind.value for kind in ALL_MODELS] if "all" in self.model else self.model
        return self.base_scenario().override(
            models=models,
            epsilon=self.epsilon,
            dx=self.dx,
            t_end=self.tend,
            snapshots=self.snapshots,
            velocity_cells=self.velocity_cells,
        )
