"""Self-describing binary tensor container.

One tensor per file: a UTF-8 header line ``{"dtype":"f32","shape":[...]}\n``
followed by the row-major little-endian payload. Used for CSI recordings,
skeleton tracks, and model predictions.
"""

import json
from pathlib import Path

import numpy as np

_DTYPES = {
    "f32": "<f4",
    "f64": "<f8",
    "i32": "<i4",
    "i64": "<i8",
}
_CODES = {np.dtype(v): k for k, v in _DTYPES.items()}


def dtype_code(array: np.ndarray) -> str:
    code = _CODES.get(np.dtype(array.dtype.name))
    if code is None:
        supported = ", ".join(sorted(_DTYPES))
        raise ValueError(f"unsupported dtype {array.dtype}; supported: {supported}")
    return code


def write_tensor(path, array: np.ndarray) -> None:
    path = Path(path)
    array = np.asarray(array)
    header = json.dumps({"dtype": dtype_code(array), "shape": list(array.shape)})
    with open(path, "wb") as fh:
        fh.write(header.encode("utf-8") + b"\n")
        fh.write(np.ascontiguousarray(array.astype(_DTYPES[dtype_code(array)], copy=False)).tobytes())


def read_tensor(path) -> np.ndarray:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"tensor file not found: {path}")
    with open(path, "rb") as fh:
        line = fh.readline()
        try:
            header = json.loads(line.decode("utf-8"))
            dtype = _DTYPES[header["dtype"]]
            shape = tuple(int(s) for s in header["shape"])
        except (UnicodeDecodeError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed tensor header in {path}: {exc}") from exc
        payload = fh.read()
    expected = int(np.prod(shape)) * np.dtype(dtype).itemsize
    if len(payload) != expected:
        raise ValueError(
            f"corrupt tensor payload in {path}: expected {expected} bytes, got {len(payload)}"
        )
    return np.frombuffer(payload, dtype=dtype).reshape(shape).copy()
