"""Raw IQ files: interleaved little-endian float32, I then Q for each sample."""
from __future__ import annotations

import os

import numpy as np

from .cpm import IqBlock

_DTYPE = np.dtype("<f4")


def to_bytes(block: IqBlock) -> bytes:
    samples = np.asarray(block.samples)
    if not np.all(np.isfinite(samples)):
        raise ValueError("cannot export non-finite samples")
    iq = np.empty(2 * samples.size, dtype=_DTYPE)
    iq[0::2] = samples.real
    iq[1::2] = samples.imag
    return iq.tobytes()


def export_iq(block: IqBlock, sink) -> int:
    """Write ``block`` to a path or binary file object; returns the byte count."""
    data = to_bytes(block)
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "wb") as f:
            f.write(data)
    else:
        sink.write(data)
    return len(data)


def import_iq(source, dt: float = 1.0 / 16, t0: float = 0.0) -> IqBlock:
    if isinstance(source, (bytes, bytearray)):
        data = bytes(source)
    elif isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as f:
            data = f.read()
    else:
        data = source.read()
    if len(data) % 8:
        raise ValueError(f"{len(data)} bytes is not a whole number of IQ samples")
    iq = np.frombuffer(data, dtype=_DTYPE).astype(np.float64)
    return IqBlock(iq[0::2] + 1j * iq[1::2], t0=t0, dt=dt)
