import json

import numpy as np
import pandas as pd
import pytest

from reprosamples.command.manifest import RunManifest, file_digest
from reprosamples.service.executor import TaskRunner
from reprosamples.service.writer import ResultWriter
from reprosamples.utils import config as config_module
from reprosamples.utils.config import DEFAULTS, load_config, runtime_threads, use_config
from reprosamples.utils.errors import (
    CsvParseError,
    DegenerateResidual,
    FlagConflict,
    InvalidConfig,
    InvalidLevel,
    NonConvergence,
    ReproError,
)


@pytest.fixture(autouse=True)
def restore_config(monkeypatch):
    monkeypatch.setattr(config_module, "config", config_module.config)
    monkeypatch.delenv("REPRO_THREADS", raising=False)


class TestConfig:
    def test_missing_file_gives_defaults(self, tmp_path):
        assert load_config(tmp_path / "none.yml") == DEFAULTS

    def test_partial_override_keeps_other_keys(self, tmp_path):
        path = tmp_path / "config.yml"
        path.write_text("search:\n  d: 50\nruntime:\n  threads: 3\n")
        loaded = load_config(path)
        assert loaded["search"]["d"] == 50
        assert loaded["search"]["n_lambda"] == DEFAULTS["search"]["n_lambda"]
        assert loaded["runtime"] == {"seed": 2024, "threads": 3}
        assert DEFAULTS["search"]["d"] == 1000

    def test_malformed(self, tmp_path):
        path = tmp_path / "bad.yml"
        path.write_text("search: [1, 2\n")
        with pytest.raises(InvalidConfig):
            load_config(path)
        path.write_text("- 1\n- 2\n")
        with pytest.raises(InvalidConfig):
            load_config(path)

    def test_use_config(self, tmp_path):
        path = tmp_path / "config.yml"
        path.write_text("runtime:\n  threads: 4\n")
        use_config(path)
        assert runtime_threads() == 4
        with pytest.raises(InvalidConfig):
            use_config(tmp_path / "absent.yml")

    def test_thread_precedence(self, tmp_path, monkeypatch):
        path = tmp_path / "config.yml"
        path.write_text("runtime:\n  threads: 2\n")
        use_config(path)
        assert runtime_threads() == 2
        monkeypatch.setenv("REPRO_THREADS", "5")
        assert runtime_threads() == 5
        assert runtime_threads(3) == 3

    def test_invalid_threads(self, monkeypatch):
        with pytest.raises(InvalidConfig):
            runtime_threads(0)
        monkeypatch.setenv("REPRO_THREADS", "many")
        with pytest.raises(InvalidConfig):
            runtime_threads()


class TestErrors:
    def test_exit_codes(self):
        assert InvalidLevel("x").exit_code == 2
        assert FlagConflict("x").exit_code == 2
        assert DegenerateResidual("x").exit_code == 3
        assert ReproError("x").exit_code == 3

    def test_csv_location(self):
        assert str(CsvParseError("bad cell", row=4, column=2)) == "bad cell (row 4, column 2)"
        assert str(CsvParseError("empty")) == "empty"

    def test_non_convergence_message(self):
        error = NonConvergence(0.5, 1e-3)
        assert error.lam == 0.5
        assert "lambda=0.5" in str(error)


class TestWriter:
    def test_sorted_keys_and_special_values(self):
        text = ResultWriter.dumps({"b": np.float64(np.nan), "a": [np.int64(3), np.inf], "c": np.array([1.5])})
        assert json.loads(text) == {"a": [3, "inf"], "b": None, "c": [1.5]}
        assert text.index('"a"') < text.index('"b"')
        assert text.endswith("\n")

    def test_json_file(self, tmp_path):
        text = ResultWriter.write_json({"x": 1}, tmp_path / "nested" / "out.json")
        assert (tmp_path / "nested" / "out.json").read_text() == text

    def test_frame(self, tmp_path):
        ResultWriter.write_frame(pd.DataFrame({"v": [1.0 / 3.0]}), tmp_path / "f.csv")
        assert (tmp_path / "f.csv").read_text() == "v\n0.3333333333\n"
        assert not (tmp_path / "f.manifest.json").exists()

    def test_frame_with_manifest(self, tmp_path):
        manifest = RunManifest(command="simulate", config={}, seed=1)
        ResultWriter.write_frame(pd.DataFrame({"v": [1.0]}), tmp_path / "t.csv", manifest=manifest.attach(tmp_path / "t.csv"))
        sidecar = json.loads((tmp_path / "t.manifest.json").read_text())
        assert sidecar["command"] == "simulate"
        assert sidecar["outputs"] == ["t.csv"]
        assert manifest.to_dict()["outputs"] == ["t.csv"]


class TestManifest:
    def test_inputs_and_timing(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("1,2\n")
        manifest = RunManifest(command="search", config={}, seed=3)
        manifest.add_inputs([path])
        payload = manifest.finish().to_dict()
        assert payload["inputs"] == {"x.csv": file_digest(path)}
        assert set(payload["timing"]) == {"created", "wall_time"}
        assert len(payload["inputs"]["x.csv"]) == 64


class TestTaskRunner:
    def test_order_preserved(self):
        assert TaskRunner.map(lambda k: k * k, range(20), threads=4) == [k * k for k in range(20)]
        assert TaskRunner.map(lambda k: k + 1, [], threads=4) == []
