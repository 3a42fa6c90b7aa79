from loguru import logger
from pydantic import BaseModel, Field
from tabulate import SEPARATING_LINE, tabulate

from netkin.scenarios import RunDiagnostics


class CheckResult(BaseModel):
    name: str
    passed: bool
    measured: float | None = Field(description="Worst measured value", default=None)
    bound: float | None = Field(description="Value the measurement is compared against", default=None)
    detail: str = ""


def _log_table(title: str, rows: list, headers: list[str], width: int = 60, **kwargs) -> None:
    logger.info("")
    logger.info("=" * width)
    logger.info(title)
    logger.info("=" * width)
    for line in tabulate(rows, headers=headers, tablefmt="simple", **kwargs).split("\n"):
        logger.info(line)


def show_run_summary(diagnostics: RunDiagnostics) -> None:
    rows = [
        [label, run.dt, run.steps, f"{run.wall_time:.2f}", run.total_mass[-1], run.mass_drift]
        for label, run in diagnostics.runs.items()
    ]
    _log_table(
        f"Run Summary: {diagnostics.scenario}",
        rows,
        ["Model", "dt", "Steps", "Wall [s]", "Final mass", "Mass drift"],
        floatfmt=("", ".6g", "", "", ".12g", ".3e"),
        colalign=("left",),
    )


def show_mass_ordering(diagnostics: RunDiagnostics) -> None:
    rows = [[rank, label, mass] for rank, (label, mass) in enumerate(diagnostics.mass_ordering(), start=1)]
    _log_table("Total Mass at Final Time (largest first)", rows, ["#", "Model", "Total mass"], floatfmt=".12g")


def show_distances(diagnostics: RunDiagnostics) -> None:
    labels = list(diagnostics.runs)
    distances = diagnostics.pairwise_l1()
    rows = []
    for a in labels:
        row = [a]
        for b in labels:
            if a == b:
                row.append(0.0)
            else:
                row.append(distances[(a, b)] if (a, b) in distances else distances[(b, a)])
        rows.append(row)
    _log_table(
        "Pairwise L1 Distance of the Final Densities", rows, ["", *labels], width=90, floatfmt=".4e", colalign=("left",)
    )


def show_check_results(results: list[CheckResult]) -> None:
    rows = []
    for result in results:
        measured = "" if result.measured is None else f"{result.measured:.3e}"
        bound = "" if result.bound is None else f"{result.bound:.1e}"
        rows.append([result.name, "PASS" if result.passed else "FAIL", measured, bound, result.detail])
    n_failed = sum(not result.passed for result in results)
    rows.append(SEPARATING_LINE)
    rows.append(["Overall", "FAIL" if n_failed else "PASS", "", "", f"{len(results) - n_failed}/{len(results)} passed"])
    _log_table(
        "Check Results",
        rows,
        ["Check", "Result", "Measured", "Bound", "Detail"],
        width=90,
        colalign=("left",),
        disable_numparse=True,
    )
