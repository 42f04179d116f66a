import json

import pytest

from gfagraph.core.config import GfaConfig
from gfagraph.exceptions import ConfigurationError, ParseError
from gfagraph.io.config import encodeJson, loadConfig, writeJson


class TestLoadConfig:
    def test_defaults_without_path(self):
        assert loadConfig(None) == GfaConfig()

    def test_flat_object(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"localWindow": 3, "gridSize": 4, "order": "local-then-global"}))
        assert loadConfig(path) == GfaConfig(localWindow=3, gridSize=4, order="local-then-global")

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text('{"windowSize": 3}')
        with pytest.raises(ConfigurationError):
            loadConfig(path)

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text('{"localWindow": 3,,}')
        with pytest.raises(ParseError) as info:
            loadConfig(path)
        assert info.value.offset == 18

    def test_invalid_utf8(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_bytes(b'{"seed": "\xff"}')
        with pytest.raises(ParseError) as info:
            loadConfig(path)
        assert info.value.offset == 10

    def test_offset_counts_bytes(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_bytes('{"\u00e9": ,}'.encode("utf-8"))
        with pytest.raises(ParseError) as info:
            loadConfig(path)
        assert info.value.offset == 7

    def test_invalid_value(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text('{"avgDegree": 0}')
        with pytest.raises(ConfigurationError):
            loadConfig(path)


class TestJson:
    def test_deterministic_encoding(self):
        assert encodeJson({"b": 1, "a": [1, 2]}) == b'{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'

    def test_config_round_trip(self, tmp_path):
        path = tmp_path / "cfg.json"
        cfg = GfaConfig(avgDegree=12, strategy="local-entropy")
        writeJson(path, cfg.toDict())
        assert loadConfig(path) == cfg
