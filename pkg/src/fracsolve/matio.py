"""Matrix file formats: delimited text and the FRMX binary container.

CSV matrices are UTF-8, comma-delimited, one matrix row per line, with an
optional single header row; floats use shortest round-trip decimal form, so
``write -> read`` reproduces every float64 bit pattern (infinities serialize
as ``inf``/``-inf``).

FRMX is a trivial binary container: magic bytes ``FRMX``, one version byte
(1), row and column counts as little-endian u64, then the row-major
little-endian float64 payload.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import InvalidInputError

FRMX_MAGIC = b"FRMX"
FRMX_VERSION = 1
_HEADER = struct.Struct("<4sBQQ")


def format_float(value: float) -> str:
    """Shortest decimal string that round-trips to the same float64."""
    return repr(float(value))


def write_matrix_csv(path, matrix, header: list[str] | None = None) -> None:
    """Write a 2-D array as comma-delimited text, optionally with a header row."""
    M = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    lines = []
    if header is not None:
        lines.append(",".join(header))
    for row in M:
        lines.append(",".join(format_float(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_matrix_csv(path) -> np.ndarray:
    """Read a comma-delimited matrix, skipping a single header row if present.

    A header is detected when any field of the first line fails to parse as a
    float.  All data rows must have the same number of fields.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InvalidInputError(f"{path} contains no data")
    rows = []
    for ln_no, line in enumerate(lines):
        fields = line.split(",")
        try:
            rows.append([float(v) for v in fields])
        except ValueError:
            if ln_no == 0:
                continue  # header row
            raise InvalidInputError(
                f"{path}: line {ln_no + 1} contains a non-numeric field"
            ) from None
    if not rows:
        raise InvalidInputError(f"{path} contains a header but no data rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise InvalidInputError(f"{path}: rows have inconsistent field counts")
    return np.asarray(rows, dtype=np.float64)


def write_matrix_frmx(path, matrix) -> None:
    """Write a 2-D array in the FRMX binary format (bit-exact for float64)."""
    M = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    if M.ndim != 2:
        raise InvalidInputError(f"FRMX stores 2-D matrices, got shape {M.shape}")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(FRMX_MAGIC, FRMX_VERSION, M.shape[0], M.shape[1]))
        fh.write(np.ascontiguousarray(M, dtype="<f8").tobytes())


def read_matrix_frmx(path) -> np.ndarray:
    """Read an FRMX file, validating magic, version, and payload size."""
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc
    if len(raw) < _HEADER.size:
        raise InvalidInputError(f"{path} is too short to be an FRMX file")
    magic, version, rows, cols = _HEADER.unpack_from(raw)
    if magic != FRMX_MAGIC:
        raise InvalidInputError(f"{path} is not an FRMX file (bad magic)")
    if version != FRMX_VERSION:
        raise InvalidInputError(f"{path}: unsupported FRMX version {version}")
    expected = rows * cols * 8
    payload = raw[_HEADER.size:]
    if len(payload) != expected:
        raise InvalidInputError(
            f"{path}: payload is {len(payload)} bytes, expected {expected}"
        )
    return np.frombuffer(payload, dtype="<f8").astype(np.float64).reshape(rows, cols)


def read_matrix(path) -> np.ndarray:
    """Dispatch on extension: ``.frmx`` binary, anything else delimited text."""
    if str(path).endswith(".frmx"):
        return read_matrix_frmx(path)
    return read_matrix_csv(path)
