import os
import tempfile
from pathlib import Path

import numpy as np
from numpy.typing import ArrayLike

from gfagraph.__logger__ import get_logger
from gfagraph.core.tensor import FeatureMap
from gfagraph.exceptions import DomainError, ParseError

logger = get_logger(__name__)

TENSOR_MAGIC = b"FTEN"
_WHITESPACE = b" \t\n\r\v\f"


def _stage(target: Path, payload: bytes) -> str:
    handle, tmpName = tempfile.mkstemp(
        prefix=f".{target.name}.", suffix=".tmp", dir=target.parent or Path(".")
    )
    try:
        with os.fdopen(handle, "wb") as tmp:
            tmp.write(payload)
    except BaseException:
        os.remove(tmpName)
        raise
    return tmpName


def atomicWriteAll(outputs: list[tuple[str | os.PathLike, bytes]]) -> None:
    """
    Write several files at once. Every payload is first written to a temporary file next
    to its target; the temporary files are renamed only after all of them were written,
    so a failing write leaves every target untouched.

    Parameters
    ----------
    outputs : list[tuple[str | os.PathLike, bytes]]
        Target paths and their payloads.
    """
    staged: list[tuple[str, Path]] = []
    try:
        for path, payload in outputs:
            target = Path(path)
            staged.append((_stage(target, payload), target))
        for tmpName, target in staged:
            os.replace(tmpName, target)
    except BaseException:
        for tmpName, _ in staged:
            if os.path.exists(tmpName):
                os.remove(tmpName)
        logger.error("could not write %s", ", ".join(str(p) for p, _ in outputs))
        raise


def atomicWrite(path: str | os.PathLike, payload: bytes) -> None:
    """
    Write ``payload`` to a temporary file next to ``path`` and rename it on success,
    so that ``path`` is either left untouched or holds the complete payload.
    """
    atomicWriteAll([(path, payload)])


def encodeTensor(fmap: FeatureMap) -> bytes:
    """
    Encode a feature map in the FTEN v1 format: the ASCII header ``FTEN <H> <W> <C>``
    and a newline, followed by ``H*W*C`` little-endian float32 values in row-major order.
    """
    height, width, channels = fmap.getShape()
    header = f"FTEN {height} {width} {channels}\n".encode("ascii")
    return header + fmap.data.astype("<f4").tobytes()


def decodeTensor(payload: bytes) -> FeatureMap:
    """
    Decode an FTEN v1 byte string.

    Raises
    ------
    ParseError
        If the header is malformed, a dimension is not a positive integer or the
        payload length does not match the header.
    """
    end = payload.find(b"\n")
    if end < 0:
        raise ParseError("FTEN header is not terminated by a newline", len(payload))
    fields = payload[:end].split(b" ")
    if len(fields) != 4 or fields[0] != TENSOR_MAGIC:
        raise ParseError("expected header 'FTEN <H> <W> <C>'", 0)
    dims = []
    offset = len(TENSOR_MAGIC) + 1
    for field in fields[1:]:
        if not field.isdigit() or int(field) < 1:
            raise ParseError(
                f"FTEN dimension {field.decode('ascii', 'replace')!r} is not a positive integer",
                offset,
            )
        dims.append(int(field))
        offset += len(field) + 1
    height, width, channels = dims
    expected = height * width * channels * 4
    body = payload[end + 1 :]
    if len(body) != expected:
        raise ParseError(
            f"FTEN payload has {len(body)} bytes, expected {expected}",
            end + 1 + min(len(body), expected),
        )
    values = np.frombuffer(body, dtype="<f4").astype(np.float64)
    try:
        return FeatureMap(height, width, channels, values)
    except DomainError as error:
        raise ParseError(f"FTEN payload is invalid: {error}", end + 1) from error


def readTensor(path: str | os.PathLike) -> FeatureMap:
    """Read an FTEN v1 file."""
    logger.info("reading tensor %s", path)
    payload = Path(path).read_bytes()
    try:
        return decodeTensor(payload)
    except ParseError:
        logger.error("malformed tensor file %s", path)
        raise


def writeTensor(path: str | os.PathLike, fmap: FeatureMap) -> None:
    """Write an FTEN v1 file. Values are stored as float32."""
    logger.info("writing tensor %s with shape %s", path, fmap.getShape())
    atomicWrite(path, encodeTensor(fmap))


def _readToken(payload: bytes, pos: int) -> tuple[bytes, int]:
    # skip whitespace and comments up to the next header token
    while pos < len(payload):
        if payload[pos] in _WHITESPACE:
            pos += 1
        elif payload[pos : pos + 1] == b"#":
            while pos < len(payload) and payload[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
        else:
            break
    start = pos
    while pos < len(payload) and payload[pos] not in _WHITESPACE and payload[pos : pos + 1] != b"#":
        pos += 1
    if start == pos:
        raise ParseError("unexpected end of image header", start)
    return payload[start:pos], pos


def decodeImage(payload: bytes) -> FeatureMap:
    """
    Decode a binary PPM (``P6``) or PGM (``P5``) image with maxval 255. The pixel bytes
    are mapped to ``byte / 255``; PPM gives three channels, PGM one.
    """
    magic = payload[:2]
    if magic not in (b"P5", b"P6"):
        raise ParseError("expected magic P5 or P6", 0)
    channels = 3 if magic == b"P6" else 1
    pos = 2
    fields = []
    for label in ("width", "height", "maxval"):
        start = pos
        token, pos = _readToken(payload, pos)
        if not token.isdigit() or int(token) < 1:
            raise ParseError(
                f"image {label} {token.decode('ascii', 'replace')!r} is not a positive integer",
                start,
            )
        fields.append(int(token))
    width, height, maxval = fields
    if maxval != 255:
        raise ParseError(f"only maxval 255 is supported, got {maxval}", pos)
    if pos >= len(payload) or payload[pos] not in _WHITESPACE:
        raise ParseError("missing whitespace after maxval", pos)
    pos += 1
    expected = width * height * channels
    body = payload[pos:]
    if len(body) < expected:
        raise ParseError(
            f"image payload truncated: {len(body)} of {expected} bytes", len(payload)
        )
    values = np.frombuffer(body[:expected], dtype=np.uint8).astype(np.float64) / 255.0
    return FeatureMap(height, width, channels, values)


def readImage(path: str | os.PathLike) -> FeatureMap:
    """
    Read a binary PPM or PGM file.

    Parameters
    ----------
    path : String | os.PathLike
        The image file.

    Returns
    -------
    FeatureMap : gfagraph.core.tensor.FeatureMap
        Values in ``[0, 1]``; 3 channels for PPM and 1 for PGM.
    """
    logger.info("reading image %s", path)
    try:
        return decodeImage(Path(path).read_bytes())
    except ParseError:
        logger.error("malformed image file %s", path)
        raise


def encodeImage(fmap: FeatureMap) -> bytes:
    """Encode a 1- or 3-channel map with values in ``[0, 1]`` as canonical P5 / P6 bytes."""
    height, width, channels = fmap.getShape()
    if channels not in (1, 3):
        logger.error("cannot encode %s channels as an image", channels)
        raise DomainError(f"Images need 1 or 3 channels, got {channels}.")
    magic = "P5" if channels == 1 else "P6"
    pixels = np.clip(np.floor(fmap.data * 255.0 + 0.5), 0, 255).astype(np.uint8)
    return f"{magic}\n{width} {height}\n255\n".encode("ascii") + pixels.tobytes()


def writeImage(path: str | os.PathLike, fmap: FeatureMap) -> None:
    logger.info("writing image %s", path)
    atomicWrite(path, encodeImage(fmap))


def encodePgm16(values: ArrayLike) -> bytes:
    """Encode a 2-D array of integers in ``[0, 65535]`` as a 16-bit binary PGM (big-endian samples)."""
    array = np.asarray(values)
    if array.ndim != 2:
        logger.error("16-bit PGM needs a 2-D array, got shape %s", array.shape)
        raise DomainError(f"A PGM image needs a 2-D array, got shape {array.shape}.")
    if array.size and (array.min() < 0 or array.max() > 65535):
        logger.error("16-bit PGM values out of range")
        raise DomainError("16-bit PGM values must lie in [0, 65535].")
    height, width = array.shape
    header = f"P5\n{width} {height}\n65535\n".encode("ascii")
    return header + array.astype(">u2").tobytes()


def writePgm16(path: str | os.PathLike, values: ArrayLike) -> None:
    logger.info("writing 16-bit PGM %s", path)
    atomicWrite(path, encodePgm16(values))


def readInput(path: str | os.PathLike) -> FeatureMap:
    """Read an FTEN tensor or a PPM/PGM image, recognized by the magic bytes."""
    payload = Path(path).read_bytes()
    try:
        if payload.startswith(TENSOR_MAGIC):
            return decodeTensor(payload)
        return decodeImage(payload)
    except ParseError:
        logger.error("malformed input file %s", path)
        raise
