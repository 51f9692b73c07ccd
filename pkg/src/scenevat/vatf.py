"""VATF binary container for real-valued matrices.

Layout: the bytes ``VATF``; little-endian uint32 version (=1), n, d; then
n*d little-endian IEEE-754 float64 values, row-major.  Used for feature
stores (n x d) and, with d = n, for dissimilarity matrices.  Round trips
are bit-exact.
"""

from __future__ import annotations

import os
import struct
import tempfile

import numpy as np

from .errors import InputError

MAGIC = b"VATF"
VERSION = 1

_HEADER = struct.Struct("<4sIII")


def vatf_bytes(values) -> bytes:
    x = np.ascontiguousarray(values, dtype="<f8")
    if x.ndim != 2:
        raise InputError(f"VATF stores 2-D matrices, got {x.ndim}-D")
    n, d = x.shape
    return _HEADER.pack(MAGIC, VERSION, n, d) + x.tobytes(order="C")


def parse_vatf(data: bytes) -> np.ndarray:
    if len(data) < _HEADER.size:
        raise InputError("VATF data shorter than header")
    magic, version, n, d = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise InputError(f"bad VATF magic {magic!r}")
    if version != VERSION:
        raise InputError(f"unsupported VATF version {version}")
    expected = _HEADER.size + 8 * n * d
    if len(data) != expected:
        raise InputError(
            f"VATF payload is {len(data)} bytes, expected {expected} for {n}x{d}"
        )
    flat = np.frombuffer(data, dtype="<f8", offset=_HEADER.size)
    return flat.reshape(n, d).astype(np.float64)


def write_vatf(path, values) -> None:
    """Write atomically (temp file + rename)."""
    data = vatf_bytes(values)
    atomic_write_bytes(path, data)


def read_vatf(path) -> np.ndarray:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read VATF file {path}: {exc}") from exc
    try:
        return parse_vatf(data)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from exc


def atomic_write_bytes(path, data: bytes) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            os.replace(tmp, path)
        except BaseException:
            os.unlink(tmp)
            raise
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from exc


def atomic_write_text(path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))
