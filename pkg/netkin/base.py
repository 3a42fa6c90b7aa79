import importlib
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Iterable, Sequence, TypeVar

from beartype import BeartypeConf, beartype
from loguru import logger


T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV_VAR = "NETKIN_THREADS"

# Accept ints wherever floats are annotated (numeric tower), so `dx=1` type-checks.
typechecked = beartype(conf=BeartypeConf(is_pep484_tower=True))


class NetkinError(Exception):
    """Base class of all errors raised by netkin."""


class NetworkFormatError(NetkinError, ValueError):
    """The network description is malformed or inconsistent."""


class UnknownNodeError(NetkinError, KeyError):
    """A node id was requested that the network does not contain."""


class SpectrumError(NetkinError, ValueError):
    """A transport matrix has a non-real or defective spectrum."""


class CFLViolationError(NetkinError, ValueError):
    """An explicit transport step was requested with Courant number above one."""


class StabilityError(NetkinError, ValueError):
    """An explicit parabolic step exceeds its stability bound."""


class CouplingSolveError(NetkinError, ValueError):
    """A node system is singular or the coupling parameters are invalid."""


class SimulationAborted(NetkinError, RuntimeError):
    """A non-finite value appeared during a run."""

    def __init__(self, message: str, *, step: int, time: float, model: str, edge: int | None = None) -> None:
        super().__init__(message)
        self.step = step
        self.time = time
        self.model = model
        self.edge = edge

    def report(self) -> dict[str, Any]:
        return {"message": str(self), "step": self.step, "time": self.time, "model": self.model, "edge": self.edge}


def get_import_path(obj: Any) -> str:
    """Get the import path of an object."""
    return f"{obj.__module__}.{obj.__qualname__}"


def omni_import(path: str) -> Any:
    """Resolve a dotted path such as `netkin.scenarios.ScenarioConfig` to the object it names.

    The longest importable prefix is the module; the remaining parts are looked up as nested attributes.
    """
    module_path = path
    attrs: list[str] = []
    while module_path:
        try:
            obj = importlib.import_module(module_path)
        except ModuleNotFoundError:
            module_path, _, last = module_path.rpartition(".")
            attrs.insert(0, last)
            continue
        for attr in attrs:
            if not hasattr(obj, attr):
                raise ImportError(f"cannot resolve {path!r}: no attribute {attr!r} below module {module_path!r}")
            obj = getattr(obj, attr)
        return obj
    raise ImportError(f"cannot resolve {path!r}: no importable module")


def instantiate(config: Any) -> Any:
    """Rebuild an object from a config carrying a `_target_` import path.

    Dicts with `_target_` are passed as keyword arguments to the target, after their values have been
    instantiated recursively. A target with a `model_validate` method (pydantic) is validated instead of
    called, so nested plain dicts stay plain. Anything else is returned as is.
    """
    if isinstance(config, (tuple, list)):
        return [instantiate(item) for item in config]
    if not isinstance(config, dict):
        return config
    if "_target_" not in config:
        return {k: instantiate(v) for k, v in config.items()}

    target = omni_import(config["_target_"])
    kwargs = {k: v for k, v in config.items() if k != "_target_"}
    if hasattr(target, "model_validate"):
        return target.model_validate(kwargs)
    return target(**{k: instantiate(v) for k, v in kwargs.items()})


def worker_count() -> int:
    """Number of worker threads used to step edges, from the environment (default 1)."""
    raw = os.environ.get(THREADS_ENV_VAR, "1")
    try:
        count = int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {THREADS_ENV_VAR}={raw!r}")
        return 1
    return max(count, 1)


def map_ordered(fn: Callable[[T], R], items: Iterable[T], executor: ThreadPoolExecutor | None = None) -> list[R]:
    """Apply `fn` to every item, in parallel when an executor is given; results keep the input order."""
    if executor is None:
        return [fn(item) for item in items]
    return list(executor.map(fn, items))


def find_duplicates(values: Sequence[Any]) -> list[Any]:
    """Return the values that occur more than once, in first-seen order."""
    seen: set[Any] = set()
    duplicates: list[Any] = []
    for value in values:
        if value in seen and value not in duplicates:
            duplicates.append(value)
        seen.add(value)
    return duplicates
