import argparse
import enum
import inspect
import types
from typing import Callable, Literal, Union, get_args, get_origin

from pydantic import BaseModel
from pydantic_core import PydanticUndefined


def cli(*commands: Callable[[BaseModel], int], description: str | None = None) -> Callable[[list[str] | None], int]:
    """Build a subcommand CLI from functions taking one pydantic command model.

    Each function becomes the subcommand named after it (a `cmd_` prefix is dropped); every field of its
    command model becomes a `--field` flag, documented by the field description. The returned entry point
    parses `argv`, validates the command model and returns the function's exit status.

    Usage:
        def cmd_run(command: RunCommand) -> int:
            ...

        main = cli(cmd_run, cmd_check)
        sys.exit(main())
    """
    parser = argparse.ArgumentParser(description=description)
    subparsers = parser.add_subparsers(dest="command", required=True)
    registry: dict[str, tuple[Callable[[BaseModel], int], type[BaseModel]]] = {}

    for fn in commands:
        name = fn.__name__.removeprefix("cmd_")
        command_cls = list(inspect.signature(fn).parameters.values())[0].annotation
        subparser = subparsers.add_parser(name, help=inspect.getdoc(fn), description=inspect.getdoc(fn))
        for field_name, field_info in command_cls.model_fields.items():
            if field_info.default is not PydanticUndefined:
                default = field_info.default
            elif field_info.default_factory is not None:
                default = field_info.default_factory()
            else:
                default = None

            kwargs = _build_argparse_kwargs(field_info.annotation, default)
            if field_info.description:
                kwargs["help"] = field_info.description
            subparser.add_argument(f"--{field_name}", **kwargs)
        registry[name] = (fn, command_cls)

    def main(argv: list[str] | None = None) -> int:
        args = vars(parser.parse_args(argv))
        fn, command_cls = registry[args.pop("command")]
        return fn(command_cls.model_validate(args))

    main.parser = parser
    return main


def _build_argparse_kwargs(annotation, default, *, nullable: bool = False) -> dict:
    kwargs = {"default": default}

    origin = get_origin(annotation)
    args = get_args(annotation)

    # T | None or Optional[T]
    if origin is types.UnionType or origin is Union:
        non_none = [a for a in args if a is not type(None)]
        if len(non_none) == 1:
            return _build_argparse_kwargs(non_none[0], default, nullable=True)

    if origin is list:
        inner = _build_argparse_kwargs(args[0] if args else str, None)
        kwargs["nargs"] = "*" if nullable else "+"
        kwargs["type"] = inner["type"]
        if "choices" in inner:
            kwargs["choices"] = inner["choices"]
        return kwargs

    if origin is Literal:
        kwargs["choices"] = list(args)
        kwargs["type"] = type(args[0])
        return kwargs

    if isinstance(annotation, type) and issubclass(annotation, enum.Enum):
        kwargs["choices"] = [member.value for member in annotation]
        kwargs["type"] = str
        return kwargs

    if annotation is bool:
        kwargs["action"] = argparse.BooleanOptionalAction
        return kwargs

    if annotation in (str, int, float):
        kwargs["type"] = annotation
        return kwargs

    kwargs["type"] = str
    return kwargs
