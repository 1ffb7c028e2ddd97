import json
import math
from collections.abc import Callable
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner, Result
from conftest import dressed
from numpy.typing import ArrayLike

from gateforge.circuit import GateProgram, parse_gate, serialize
from gateforge.cli import CliConfig, load_config, main
from gateforge.errors import ParseError
from gateforge.matrix import SWAP, unitarity_defect
from gateforge.sampling import random_local_pair

WriteGate = Callable[[str, ArrayLike], Path]


@pytest.fixture
def examples(tmp_path: Path) -> Path:
    out = tmp_path / "fixtures"
    result = CliRunner().invoke(main, ["example", "--output", str(out)])
    assert result.exit_code == 0, result.output
    return out


def _run(*args: str, env: dict[str, str] | None = None) -> Result:
    return CliRunner().invoke(main, list(args), env=env)


def test_decompose_swap(examples: Path) -> None:
    result = _run("--format", "json", "decompose", "--input", str(examples / "swap.json"))
    assert result.exit_code == 0, result.output
    doc = json.loads(result.output)
    assert doc["theta"] == pytest.approx([math.pi / 4] * 3, abs=1e-9)


def test_decompose_identity(examples: Path) -> None:
    path = str(examples / "identity.json")
    result = _run("--format", "json", "decompose", "--input", path)
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)["theta"] == pytest.approx([0, 0, 0], abs=1e-12)

    text = _run("decompose", "--input", path).output
    assert text.startswith("theta: [")
    assert "global_phase: " in text


def test_decompose_non_unitary(write_gate: WriteGate) -> None:
    path = write_gate("bad", 2 * np.eye(4))
    result = _run("decompose", "--input", str(path))
    assert result.exit_code == 2
    assert "NonUnitaryInput" in result.output
    assert "entry (0, 0)" in result.output


def test_decompose_parse_error(tmp_path: Path) -> None:
    path = tmp_path / "broken.json"
    path.write_text('{"format": "gateforge-gate/1", "matrix": [[1]]}')
    result = _run("decompose", "--input", str(path))
    assert result.exit_code == 2
    assert "ParseError" in result.output


def test_classify_cnot(examples: Path) -> None:
    result = _run("classify", "--input", str(examples / "cnot.json"), "--oracle")
    assert result.exit_code == 0, result.output
    assert "class: imprimitive" in result.output
    assert "entangling: True" in result.output


def test_classify_primitive(write_gate: WriteGate, rng: np.random.Generator) -> None:
    local = random_local_pair(rng).matrix
    swapped = SWAP @ random_local_pair(rng).matrix
    for gate, expected in ((local, "primitive-local"), (swapped, "primitive-swap")):
        result = _run("--format", "json", "classify", "--input", str(write_gate(expected, gate)))
        assert result.exit_code == 0, result.output
        assert json.loads(result.output)["class"] == expected


def test_compile_then_verify(examples: Path, tmp_path: Path) -> None:
    program = tmp_path / "zz.program.json"
    gate = str(examples / "zz-pi6.json")
    result = _run("--format", "json", "compile", "--input", gate, "--output", str(program))
    assert result.exit_code == 0, result.output
    report = json.loads(result.output)
    assert report["uses_of_u"] == 2
    assert report["case"] == "direct-zz"
    assert report["residual"] <= 1e-9

    result = _run("verify", "--program", str(program), "--input", gate)
    assert result.exit_code == 0, result.output
    assert "ok: True" in result.output


def test_compile_cz_uses_once(examples: Path, tmp_path: Path) -> None:
    out = tmp_path / "cz.program.json"
    result = _run("--format", "json", "compile", "--input", str(examples / "cz.json"), "--output", str(out))
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)["uses_of_u"] == 1


def test_compile_swap_is_primitive(examples: Path, tmp_path: Path) -> None:
    out = tmp_path / "swap.program.json"
    result = _run("compile", "--input", str(examples / "swap.json"), "--output", str(out))
    assert result.exit_code == 3
    assert "PrimitiveGate" in result.output
    assert not out.exists()


def test_verify_worked_example(examples: Path) -> None:
    result = _run(
        "--format",
        "json",
        "verify",
        "--program",
        str(examples / "zz-pi6.program.json"),
        "--input",
        str(examples / "zz-pi6.json"),
    )
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)["residual"] <= 1e-9


def test_verify_wrong_gate(examples: Path, tmp_path: Path) -> None:
    program = tmp_path / "zz.program.json"
    _run("compile", "--input", str(examples / "zz-pi6.json"), "--output", str(program))
    result = _run("verify", "--program", str(program), "--input", str(examples / "iswap.json"))
    assert result.exit_code == 4


def test_verify_empty_program(examples: Path, tmp_path: Path) -> None:
    program = tmp_path / "empty.json"
    program.write_text(serialize(GateProgram()))
    result = _run("--format", "json", "verify", "--program", str(program), "--input", str(examples / "cnot.json"))
    assert result.exit_code == 4
    assert json.loads(result.output)["residual"] == pytest.approx(math.sqrt(0.5))


def test_compile_output_always_verifies(write_gate: WriteGate, tmp_path: Path) -> None:
    gate = str(write_gate("near-zz", dressed((5e-9, 0.0, 0.01), np.random.default_rng(9))))
    program = tmp_path / "near-zz.program.json"
    result = _run("--format", "json", "compile", "--input", gate, "--output", str(program))
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)["case"] == "general-doubling"

    result = _run("verify", "--program", str(program), "--input", gate)
    assert result.exit_code == 0, result.output


def test_compile_failing_verification_writes_nothing(write_gate: WriteGate, tmp_path: Path) -> None:
    gate = str(write_gate("dressed", dressed((0.2, 0.1, 0.3), np.random.default_rng(4))))
    program = tmp_path / "dressed.program.json"
    result = _run("--tol-verify", "1e-300", "compile", "--input", gate, "--output", str(program))
    assert result.exit_code == 4
    assert "VerificationFailed" in result.output
    assert not program.exists()


def test_compile_is_deterministic(examples: Path, tmp_path: Path) -> None:
    gate = str(examples / "sqrt-swap.json")
    first, second = tmp_path / "first.json", tmp_path / "second.json"
    a = _run("--format", "json", "compile", "--input", gate, "--output", str(first))
    b = _run("--format", "json", "compile", "--input", gate, "--output", str(second))
    assert a.exit_code == 0, a.output
    assert a.output == b.output
    assert first.read_bytes() == second.read_bytes()


def test_verify_rejects_bad_program(examples: Path, tmp_path: Path) -> None:
    program = tmp_path / "bad.json"
    program.write_text('{"format": "gateforge-program/1", "steps": [{"type": "u_inverse"}]}')
    result = _run("verify", "--program", str(program), "--input", str(examples / "cnot.json"))
    assert result.exit_code == 2
    assert "steps[0].type" in result.output


def test_random_is_deterministic() -> None:
    first = _run("--seed", "0", "random", "--count", "2")
    second = _run("--seed", "0", "random", "--count", "2")
    assert first.exit_code == 0, first.output
    assert first.output == second.output
    assert len(first.output.splitlines()) == 2
    assert _run("--seed", "1", "random").output != _run("--seed", "0", "random").output


def test_random_writes_files(tmp_path: Path) -> None:
    out = tmp_path / "gates"
    result = _run("random", "--count", "3", "--output", str(out))
    assert result.exit_code == 0, result.output
    files = sorted(out.iterdir())
    assert [f.name for f in files] == ["gate-0000.json", "gate-0001.json", "gate-0002.json"]
    for f in files:
        worst, _ = unitarity_defect(parse_gate(f.read_text()))
        assert worst <= 1e-12


def test_seed_from_environment() -> None:
    from_env = _run("random", env={"GATEFORGE_SEED": "5"})
    from_flag = _run("--seed", "5", "random")
    assert from_env.output == from_flag.output


def test_config_file_and_precedence(examples: Path, tmp_path: Path) -> None:
    config = tmp_path / "gateforge.yaml"
    config.write_text("format: json\nseed: 5\n")
    gate = str(examples / "cnot.json")

    result = _run("--config", str(config), "classify", "--input", gate)
    assert json.loads(result.output)["class"] == "imprimitive"

    result = _run("--config", str(config), "--format", "text", "classify", "--input", gate)
    assert result.output.startswith("class: imprimitive")


def test_config_rejects_unknown_key(tmp_path: Path) -> None:
    config = tmp_path / "gateforge.yaml"
    config.write_text("tolerance: 1\n")
    result = _run("--config", str(config), "random")
    assert result.exit_code == 2
    assert "unknown key" in result.output
    with pytest.raises(ParseError):
        load_config(config)


def test_config_rejects_bad_values(tmp_path: Path) -> None:
    config = tmp_path / "gateforge.yaml"
    config.write_text("tol_class: fast\n")
    with pytest.raises(ParseError, match="expected a number"):
        load_config(config)
    with pytest.raises(ValueError):
        CliConfig(tol_verify=0)


def test_tolerance_flags_must_be_positive() -> None:
    result = _run("--tol-class", "0", "random")
    assert result.exit_code == 2
