"""Binary tensor files: parsing and serialization.

Layout, all little-endian::

    magic   4 bytes  b"DSG1"
    dtype   uint8    0 = float64, 1 = int64
    ndim    uint8    1 or 2
    dims    ndim x uint64
    payload product(dims) x 8 bytes, row-major

``TensorFile.parse(TensorFile(array).to_bytes())`` reproduces the array
bit for bit, including NaN payloads and signed zeros.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from shiftscope.exceptions import BadMagicError, TruncatedTensorError, UnknownDtypeError

MAGIC = b"DSG1"
FLOAT64 = 0
INT64 = 1
_NUMPY_DTYPES = {FLOAT64: np.dtype("<f8"), INT64: np.dtype("<i8")}
_HEADER_SIZE = len(MAGIC) + 2


@dataclass(frozen=True, slots=True, eq=False)
class TensorFile:
    array: np.ndarray

    def __post_init__(self) -> None:
        array = np.asarray(self.array)
        if array.ndim not in (1, 2):
            raise UnknownDtypeError(
                f"tensors must have 1 or 2 dimensions, got {array.ndim}",
                ref="tensor header",
            )
        if np.issubdtype(array.dtype, np.floating):
            array = array.astype("<f8", copy=False)
        elif np.issubdtype(array.dtype, np.integer) or array.dtype == np.bool_:
            array = array.astype("<i8", copy=False)
        else:
            raise UnknownDtypeError(
                f"unsupported element type: {array.dtype}", ref="tensor header"
            )
        object.__setattr__(self, "array", np.ascontiguousarray(array))

    @property
    def dtype_code(self) -> int:
        return FLOAT64 if self.array.dtype.kind == "f" else INT64

    @classmethod
    def parse(cls, data: bytes) -> TensorFile:
        if len(data) < _HEADER_SIZE:
            raise TruncatedTensorError("tensor header is truncated", ref="tensor header")
        if data[:4] != MAGIC:
            raise BadMagicError(
                f"bad magic {data[:4]!r}, expected {MAGIC!r}", ref="tensor header"
            )
        dtype_code = data[4]
        if dtype_code not in _NUMPY_DTYPES:
            raise UnknownDtypeError(
                f"unknown dtype code {dtype_code}", ref="tensor header"
            )
        ndim = data[5]
        if ndim not in (1, 2):
            raise UnknownDtypeError(f"unsupported ndim {ndim}", ref="tensor header")
        dims_end = _HEADER_SIZE + 8 * ndim
        if len(data) < dims_end:
            raise TruncatedTensorError("tensor dims are truncated", ref="tensor header")
        dims = tuple(
            int.from_bytes(data[offset : offset + 8], "little")
            for offset in range(_HEADER_SIZE, dims_end, 8)
        )
        dtype = _NUMPY_DTYPES[dtype_code]
        expected = math.prod(dims) * dtype.itemsize
        payload = data[dims_end:]
        if len(payload) != expected:
            raise TruncatedTensorError(
                f"tensor payload has {len(payload)} bytes, expected {expected}",
                details={"dims": dims},
                ref="tensor payload",
            )
        array = np.frombuffer(payload, dtype=dtype).reshape(dims).copy()
        return cls(array)

    def to_bytes(self) -> bytes:
        header = MAGIC + bytes([self.dtype_code, self.array.ndim])
        for size in self.array.shape:
            header += int(size).to_bytes(8, "little")
        return header + self.array.tobytes(order="C")


def write_tensor(path: str | Path, array: np.ndarray | list) -> None:
    Path(path).write_bytes(TensorFile(np.asarray(array)).to_bytes())


def read_tensor(path: str | Path) -> np.ndarray:
    return TensorFile.parse(Path(path).read_bytes()).array
