import copy
import json

import pytest

from src.config.config import DEFAULT_CONFIG
from src.stages.base import RUN_RECORD_NAME, RunConfig
from src.stages.result import StageResult
from src.util.errors import CheckpointError, DataError, FormatError, ManifestError


def _run(tmp_path, **kwargs):
    return RunConfig(stage="test", config=copy.deepcopy(DEFAULT_CONFIG), out_dir=tmp_path / "out", **kwargs)


def test_parameters_and_sections(tmp_path):
    run = _run(tmp_path, params={"epochs": 3, "band": None})
    assert run.seed == DEFAULT_CONFIG["seed"]
    assert run.param("epochs") == 3
    assert run.param("band", "3-6-60-80") == "3-6-60-80"
    assert run.param("missing") is None

    section = run.section("train")
    section["epochs"] = 1
    assert run.config["train"]["epochs"] == DEFAULT_CONFIG["train"]["epochs"]
    assert run.section("nonexistent") == {}


def test_require(tmp_path):
    existing = tmp_path / "manifest.json"
    existing.write_text("{}")
    run = _run(tmp_path, paths={"manifest": str(existing), "input": str(tmp_path / "gone.bxt")})

    assert run.require("manifest") == existing
    assert run.optional("manifest") == existing
    assert run.optional("volume") is None
    with pytest.raises(DataError, match="--volume is required"):
        run.require("volume")
    with pytest.raises(FormatError, match="gone.bxt"):
        run.require("input", FormatError)


@pytest.mark.parametrize(
    "name,error",
    [("manifest", ManifestError), ("checkpoints", CheckpointError), ("input", FormatError), ("volume", FormatError)],
)
def test_check_inputs_maps_missing_paths_to_errors(tmp_path, name, error):
    run = _run(tmp_path, paths={name: str(tmp_path / "missing")})
    with pytest.raises(error):
        run.check_inputs()


def test_prepare_output(tmp_path):
    """Test that the output directory appears without staging leftovers"""
    run = _run(tmp_path)
    assert run.prepare_output() == tmp_path / "out"
    assert run.out_dir.is_dir()
    assert run.prepare_output() == tmp_path / "out"
    assert [p.name for p in tmp_path.iterdir()] == ["out"]


def test_write_record(tmp_path):
    run = _run(tmp_path, paths={"manifest": "b.json", "checkpoints": "a"}, params={"epochs": 2})
    result = StageResult.text("ok").with_outputs(tmp_path / "z.csv", tmp_path / "a.csv")
    path = run.write_record(result)

    assert path.name == RUN_RECORD_NAME
    text = path.read_text()
    assert text.endswith("}\n")
    record = json.loads(text)
    assert list(record["paths"]) == ["checkpoints", "manifest"]
    assert record["params"] == {"epochs": 2}
    assert record["outputs"] == [str(tmp_path / "a.csv"), str(tmp_path / "z.csv")]
    assert record["config"] == DEFAULT_CONFIG
    assert record["log_level"] == "WARNING"
