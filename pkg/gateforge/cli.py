import dataclasses
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Final, NoReturn, cast

import click
import numpy as np
import yaml

from gateforge.canonical import decompose, local_invariants
from gateforge.circuit import (
    GateProgram,
    encode_matrix,
    evaluate,
    format_value,
    parse,
    parse_gate,
    serialize,
    serialize_gate,
)
from gateforge.classify import TOL_CLASS, classify, entangling_oracle
from gateforge.crot import TOL_VERIFY, compile_cnot
from gateforge.errors import GateforgeError, ParseError, PrimitiveGate, VerificationFailed
from gateforge.fixtures import NAMED_GATES, worked_example_program
from gateforge.matrix import CNOT, TOL_UNITARY, Matrix, check_unitary, phase_distance
from gateforge.sampling import random_unitary
from gateforge.types import ConfigDoc, ReportFormat

logger = logging.getLogger(__name__)

EXIT_INVALID: Final = 2
EXIT_PRIMITIVE: Final = 3
EXIT_VERIFY: Final = 4

ERROR: Final = "\033[31merror:\033[0m"

_FLOAT_KEYS: Final = ("tol_unitary", "tol_class", "tol_verify")


@dataclass(frozen=True)
class CliConfig:
    input: Path | None = None
    output: Path | None = None
    tol_unitary: float = TOL_UNITARY
    tol_class: float = TOL_CLASS
    tol_verify: float = TOL_VERIFY
    format: ReportFormat = "text"
    seed: int = 0

    def __post_init__(self) -> None:
        for key in _FLOAT_KEYS:
            if not getattr(self, key) > 0:
                raise ValueError(f"{key} must be positive, got {getattr(self, key)!r}")


def load_config(path: Path) -> ConfigDoc:
    """Reads a YAML file of CliConfig defaults."""
    try:
        doc = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as e:
        raise ParseError(str(e), str(path)) from e
    if doc is None:
        return {}
    if not isinstance(doc, dict):
        raise ParseError("config must be a mapping", str(path))
    for key, value in doc.items():
        where = f"{path}: {key}"
        if key in _FLOAT_KEYS:
            if not isinstance(value, int | float) or isinstance(value, bool):
                raise ParseError("expected a number", where)
        elif key == "seed":
            if not isinstance(value, int) or isinstance(value, bool):
                raise ParseError("expected an integer", where)
        elif key == "format":
            if value not in ("text", "json"):
                raise ParseError("expected 'text' or 'json'", where)
        else:
            raise ParseError(f"unknown key {key!r}", str(path))
    return cast(ConfigDoc, doc)


def _fail(error: Exception, code: int) -> NoReturn:
    click.echo(f"{ERROR} {type(error).__name__}: {error}", err=True)
    raise click.exceptions.Exit(code)


def _read_gate(config: CliConfig) -> Matrix:
    if config.input is None:
        raise click.UsageError("no input gate given")
    m = parse_gate(config.input.read_text(encoding="utf-8"))
    check_unitary(m, config.tol_unitary, what=str(config.input))
    return m


def _emit(config: CliConfig, doc: dict[str, Any]) -> None:
    if config.format == "json":
        click.echo(json.dumps(doc, indent=2))
    else:
        for key, value in doc.items():
            click.echo(f"{key}: {format_value(value)}")


_POSITIVE = click.FloatRange(min=0, min_open=True)
_INPUT_FILE = click.Path(exists=True, dir_okay=False, path_type=Path)


@click.group()
@click.option(
    "--tol-unitary",
    envvar="GATEFORGE_TOL_UNITARY",
    type=_POSITIVE,
    help="Unitarity tolerance on |U†U−I|",
)
@click.option(
    "--tol-class",
    envvar="GATEFORGE_TOL_CLASS",
    type=_POSITIVE,
    help="Angle tolerance for classification",
)
@click.option(
    "--tol-verify",
    envvar="GATEFORGE_TOL_VERIFY",
    type=_POSITIVE,
    help="Largest accepted verification residual",
)
@click.option("--format", type=click.Choice(["text", "json"], case_sensitive=False))
@click.option("--seed", envvar="GATEFORGE_SEED", type=int, help="Random seed")
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="YAML file with default settings",
)
@click.option("--verbose", is_flag=True, default=False, help="Enable debug logging")
@click.version_option()
@click.pass_context
def main(
    ctx: click.Context,
    tol_unitary: float | None,
    tol_class: float | None,
    tol_verify: float | None,
    format: str | None,
    seed: int | None,
    config_path: Path | None,
    verbose: bool,
) -> None:
    """Compile CNOT from any entangling two-qubit gate."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO)

    try:
        settings: dict[str, Any] = dict(load_config(config_path)) if config_path else {}
        flags = {
            "tol_unitary": tol_unitary,
            "tol_class": tol_class,
            "tol_verify": tol_verify,
            "format": format.lower() if format else None,
            "seed": seed,
        }
        settings.update({k: v for k, v in flags.items() if v is not None})
        ctx.obj = CliConfig(**settings)
    except (ParseError, ValueError) as e:
        _fail(e, EXIT_INVALID)
    logger.debug("Using %s", ctx.obj)


@main.command("decompose")
@click.option("--input", "input_path", type=_INPUT_FILE, required=True)
@click.pass_obj
def cmd_decompose(config: CliConfig, input_path: Path) -> None:
    """Print the canonical angles, local factors and global phase."""
    config = dataclasses.replace(config, input=input_path)
    try:
        cd = decompose(_read_gate(config), tol=config.tol_unitary)
    except GateforgeError as e:
        _fail(e, EXIT_INVALID)
    if config.format == "json":
        _emit(config, dict(cd.to_doc()))
        return
    _emit(
        config,
        {
            "theta": list(cd.core.theta),
            "global_phase": cd.global_phase,
            "after.a": encode_matrix(cd.after.first.matrix),
            "after.b": encode_matrix(cd.after.second.matrix),
            "before.a": encode_matrix(cd.before.first.matrix),
            "before.b": encode_matrix(cd.before.second.matrix),
        },
    )


@main.command("classify")
@click.option("--input", "input_path", type=_INPUT_FILE, required=True)
@click.option("--oracle", is_flag=True, default=False, help="Cross-check with product states")
@click.option("--trials", type=click.IntRange(min=0), default=100, show_default=True)
@click.pass_obj
def cmd_classify(config: CliConfig, input_path: Path, oracle: bool, trials: int) -> None:
    """Print whether the gate is primitive or entangling."""
    config = dataclasses.replace(config, input=input_path)
    try:
        m = _read_gate(config)
        cd = decompose(m, tol=config.tol_unitary)
    except GateforgeError as e:
        _fail(e, EXIT_INVALID)
    g1, g2 = local_invariants(m)
    doc: dict[str, Any] = {
        "class": str(classify(cd, config.tol_class)),
        "theta": list(cd.core.theta),
        "g1": [g1.real, g1.imag],
        "g2": g2,
    }
    if oracle:
        doc["entangling"] = entangling_oracle(m, trials, seed=config.seed)
    _emit(config, doc)


@main.command("compile")
@click.option("--input", "input_path", type=_INPUT_FILE, required=True)
@click.option(
    "--output",
    "output_path",
    type=click.Path(dir_okay=False, writable=True, path_type=Path),
    required=True,
)
@click.pass_obj
def cmd_compile(config: CliConfig, input_path: Path, output_path: Path) -> None:
    """Write a program that realizes CNOT from uses of the gate."""
    config = dataclasses.replace(config, input=input_path, output=output_path)
    try:
        program, report = compile_cnot(
            _read_gate(config),
            tol_unitary=config.tol_unitary,
            tol_class=config.tol_class,
            tol_verify=config.tol_verify,
        )
    except PrimitiveGate as e:
        _fail(e, EXIT_PRIMITIVE)
    except VerificationFailed as e:
        _fail(e, EXIT_VERIFY)
    except GateforgeError as e:
        _fail(e, EXIT_INVALID)
    if config.output is None:
        raise click.UsageError("no output path given")
    config.output.write_text(serialize(program), encoding="utf-8")
    if config.format == "json":
        click.echo(json.dumps(report.to_doc(), indent=2))
    else:
        click.echo(report.to_text())


@main.command("verify")
@click.option("--program", "program_path", type=_INPUT_FILE, required=True)
@click.option("--input", "input_path", type=_INPUT_FILE, required=True)
@click.pass_obj
def cmd_verify(config: CliConfig, program_path: Path, input_path: Path) -> None:
    """Check that a program turns the gate into CNOT."""
    config = dataclasses.replace(config, input=input_path)
    try:
        program: GateProgram = parse(
            program_path.read_text(encoding="utf-8"), tol=config.tol_unitary
        )
        m = _read_gate(config)
    except GateforgeError as e:
        _fail(e, EXIT_INVALID)
    residual = phase_distance(evaluate(program, m), CNOT)
    ok = residual <= config.tol_verify
    _emit(config, {"residual": residual, "uses_of_u": program.uses_of_u, "ok": ok})
    if not ok:
        raise click.exceptions.Exit(EXIT_VERIFY)


@main.command("random")
@click.option("--count", type=click.IntRange(min=1), default=1, show_default=True)
@click.option(
    "--output",
    "output_dir",
    type=click.Path(file_okay=False, path_type=Path),
    help="Directory for gate-NNNN.json files; prints JSON lines otherwise",
)
@click.pass_obj
def cmd_random(config: CliConfig, count: int, output_dir: Path | None) -> None:
    """Emit Haar-random two-qubit gates."""
    rng = np.random.default_rng(config.seed)
    if output_dir:
        output_dir.mkdir(parents=True, exist_ok=True)
    for i in range(count):
        text = serialize_gate(random_unitary(4, rng))
        if output_dir:
            (output_dir / f"gate-{i:04d}.json").write_text(text, encoding="utf-8")
        else:
            click.echo(json.dumps(json.loads(text)))
    logger.debug("Generated %d gates with seed %d", count, config.seed)


@main.command("example")
@click.option(
    "--output",
    "output_dir",
    type=click.Path(file_okay=False, path_type=Path),
    required=True,
)
def cmd_example(output_dir: Path) -> None:
    """Write named gate files and a hand-built CNOT program."""
    output_dir.mkdir(parents=True, exist_ok=True)
    for name, m in NAMED_GATES.items():
        (output_dir / f"{name}.json").write_text(serialize_gate(m), encoding="utf-8")
    (output_dir / "zz-pi6.program.json").write_text(
        serialize(worked_example_program()), encoding="utf-8"
    )
    click.echo(f"Wrote {len(NAMED_GATES) + 1} files to {output_dir}")


if __name__ == "__main__":
    main()
