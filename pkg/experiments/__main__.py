#!/usr/bin/env python
"""
Command-line front end of netkin.

Run the four models on the tripod preset:
```
python -m experiments run --preset tripod --model all --epsilon 0.1 --out results_tripod
```

Reproduce a run from its manifest (outputs are byte-identical):
```
python -m experiments run --manifest results_tripod/manifest.json --out results_again
```

Compare two Cattaneo coupling variants, and run the property checks on a coarse grid:
```
python -m experiments compare --preset tripod --model p1 --variants kinetic_derived density_continuity
python -m experiments check --dx 0.05 --velocity_cells 8
```

Set `NETKIN_THREADS` to step the edges on several threads. Exit status: 0 ok, 1 failed check or aborted
run, 2 invalid flags, input files or parameters.
"""

import functools
import sys

from loguru import logger
from pydantic import ValidationError

from experiments.check import cmd_check
from experiments.cli import cli
from experiments.compare import cmd_compare
from experiments.recorder import log_formatter
from experiments.run import cmd_run
from netkin.base import NetkinError, SimulationAborted


EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

entry = cli(cmd_run, cmd_compare, cmd_check, description="Chemotaxis models on networks")


def main(argv: list[str] | None = None) -> int:
    logger.remove()
    logger.level("DEBUG", color="<fg #808080>")
    logger.add(sys.stderr, format=functools.partial(log_formatter, colorize=True), level="INFO")

    try:
        return entry(argv)
    except SimulationAborted as e:
        logger.error(f"Run aborted: {e.report()}")
        return EXIT_FAILED
    except ValidationError as e:
        logger.error(f"Invalid input:\n{e}")
        return EXIT_USAGE
    except (NetkinError, OSError, ValueError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
