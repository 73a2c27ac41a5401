"""Binary checkpoint format for exact run continuation.

Layout (all little-endian):

    magic    8 bytes  b"LCDSPEC1"
    version  u32      format version (1)
    n        u32      grid resolution per axis
    length   f64      box side L
    time     f64      simulation time
    eta      f64      penalty length scale
    nu       f64      viscosity
    w0       3 x f64  far-field director
    payload_crc  u32  CRC-32 of the payload bytes
    header_crc   u32  CRC-32 of all preceding header bytes
    payload           u_hat then d_dev_hat, each (3, N, N, N) complex128
                      C-order (component-major, last mode index fastest)

Both CRCs are verified on load; save-then-load reproduces the state
bit-exactly.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dynamics import PhysicsParams, State
from .errors import CheckpointError
from .spectral import Grid, SpectralField

__all__ = ["CheckpointHeader", "save_checkpoint", "load_checkpoint"]

MAGIC = b"LCDSPEC1"
VERSION = 1
_HEAD_FMT = "<8sII7d"  # magic, version, n, (length, time, eta, nu, w0x, w0y, w0z)
_CRC_FMT = "<II"  # payload_crc, header_crc


@dataclass(frozen=True)
class CheckpointHeader:
    version: int
    n: int
    length: float
    time: float
    eta: float
    nu: float
    w0: tuple[float, float, float]


def save_checkpoint(path: str | Path, state: State, params: PhysicsParams) -> None:
    """Write the complete state; atomic via a temporary sibling file."""
    path = Path(path)
    g = state.grid
    payload = (
        np.ascontiguousarray(state.u_hat.coeffs).astype("<c16", copy=False).tobytes()
        + np.ascontiguousarray(state.d_dev_hat.coeffs).astype("<c16", copy=False).tobytes()
    )
    head = struct.pack(
        _HEAD_FMT,
        MAGIC,
        VERSION,
        g.n,
        g.length,
        state.time,
        params.eta,
        params.nu,
        *[float(v) for v in state.w0],
    )
    payload_crc = zlib.crc32(payload)
    header_crc = zlib.crc32(head + struct.pack("<I", payload_crc))
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(head)
        fh.write(struct.pack(_CRC_FMT, payload_crc, header_crc))
        fh.write(payload)
    tmp.replace(path)


def load_checkpoint(path: str | Path) -> tuple[State, PhysicsParams, CheckpointHeader]:
    """Read and verify a checkpoint; refuses corrupt or truncated files."""
    path = Path(path)
    head_size = struct.calcsize(_HEAD_FMT)
    crc_size = struct.calcsize(_CRC_FMT)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from exc
    if len(raw) < head_size + crc_size:
        raise CheckpointError(f"checkpoint {path} is truncated")
    head = raw[:head_size]
    payload_crc, header_crc = struct.unpack_from(_CRC_FMT, raw, head_size)
    if zlib.crc32(head + struct.pack("<I", payload_crc)) != header_crc:
        raise CheckpointError(f"checkpoint {path}: header CRC mismatch, load refused")
    magic, version, n, length, time, eta, nu, w0x, w0y, w0z = struct.unpack(_HEAD_FMT, head)
    if magic != MAGIC:
        raise CheckpointError(f"checkpoint {path}: bad magic {magic!r}")
    if version != VERSION:
        raise CheckpointError(f"checkpoint {path}: unsupported version {version}")
    payload = raw[head_size + crc_size :]
    expected = 2 * 3 * n**3 * 16
    if len(payload) != expected:
        raise CheckpointError(
            f"checkpoint {path}: payload is {len(payload)} bytes, expected {expected}"
        )
    if zlib.crc32(payload) != payload_crc:
        raise CheckpointError(f"checkpoint {path}: payload CRC mismatch, load refused")
    header = CheckpointHeader(version, n, length, time, eta, nu, (w0x, w0y, w0z))
    grid = Grid(length, n)
    arr = np.frombuffer(payload, dtype="<c16").astype(np.complex128).reshape(2, 3, n, n, n)
    state = State(
        SpectralField(grid, arr[0].copy()),
        SpectralField(grid, arr[1].copy()),
        np.array([w0x, w0y, w0z]),
        time,
    )
    return state, PhysicsParams(eta=eta, nu=nu), header
