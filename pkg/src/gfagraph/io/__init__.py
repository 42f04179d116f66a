from gfagraph.io.config import encodeJson, loadConfig, writeJson
from gfagraph.io.formats import (
    atomicWrite,
    atomicWriteAll,
    decodeImage,
    decodeTensor,
    encodeImage,
    encodePgm16,
    encodeTensor,
    readImage,
    readInput,
    readTensor,
    writeImage,
    writePgm16,
    writeTensor,
)

__all__ = [
    "atomicWrite",
    "atomicWriteAll",
    "decodeImage",
    "decodeTensor",
    "encodeImage",
    "encodePgm16",
    "encodeTensor",
    "readImage",
    "readInput",
    "readTensor",
    "writeImage",
    "writePgm16",
    "writeTensor",
    "encodeJson",
    "loadConfig",
    "writeJson",
]
