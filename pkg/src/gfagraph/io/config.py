import json
import os
from pathlib import Path

from gfagraph.__logger__ import get_logger
from gfagraph.core.config import GfaConfig
from gfagraph.exceptions import ParseError
from gfagraph.io.formats import atomicWrite

logger = get_logger(__name__)


def loadConfig(path: str | os.PathLike | None) -> GfaConfig:
    """
    Load a ```GfaConfig``` from a flat JSON file. Without a path the defaults are returned.

    Raises
    ------
    ParseError
        If the file is not valid UTF-8 or not valid JSON; the offset counts bytes.
    ConfigurationError
        If a key is unknown or a value is invalid.
    """
    if path is None:
        return GfaConfig()
    payload = Path(path).read_bytes()
    try:
        text = payload.decode("utf-8")
    except UnicodeDecodeError as error:
        logger.error("configuration file %s is not UTF-8", path)
        raise ParseError(f"{path} is not valid UTF-8", error.start) from error
    try:
        values = json.loads(text)
    except json.JSONDecodeError as error:
        logger.error("malformed configuration file %s: %s", path, error.msg)
        offset = len(text[: error.pos].encode("utf-8"))
        raise ParseError(f"invalid JSON in {path}: {error.msg}", offset) from error
    config = GfaConfig.fromDict(values)
    logger.info("loaded %s from %s", config, path)
    return config


def encodeJson(values: dict) -> bytes:
    """Serialize a flat dictionary deterministically (sorted keys, two-space indent)."""
    return (json.dumps(values, sort_keys=True, indent=2) + "\n").encode("utf-8")


def writeJson(path: str | os.PathLike, values: dict) -> None:
    atomicWrite(path, encodeJson(values))
