"""Checkpoint files: every named parameter plus the config that shaped it.

Same container idea as the dataset tensors: one UTF-8 JSON header line
describing the config and the entries, then the concatenated row-major
little-endian payloads. Loading rebuilds the model from the stored config
and validates every tensor shape against it.
"""

import json
from pathlib import Path

import numpy as np
import torch

from .config import ModelConfig
from .network import CsiPoseNet

_FORMAT = "csipose-checkpoint"
_DTYPES = {"f32": "<f4", "f64": "<f8"}
_TORCH_CODES = {torch.float32: "f32", torch.float64: "f64"}


def save_checkpoint(path, model: CsiPoseNet, extra: dict | None = None) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    entries = []
    payloads = []
    for name, tensor in model.state_dict().items():
        code = _TORCH_CODES.get(tensor.dtype)
        if code is None:
            raise ValueError(f"unsupported parameter dtype {tensor.dtype} for {name}")
        array = tensor.detach().cpu().numpy()
        entries.append({"name": name, "dtype": code, "shape": list(array.shape)})
        payloads.append(np.ascontiguousarray(array.astype(_DTYPES[code], copy=False)).tobytes())
    header = {
        "format": _FORMAT,
        "config": model.config.to_dict(),
        "entries": entries,
    }
    if extra:
        header["extra"] = extra
    with open(path, "wb") as fh:
        fh.write(json.dumps(header).encode("utf-8") + b"\n")
        for blob in payloads:
            fh.write(blob)


def read_checkpoint(path) -> tuple[ModelConfig, dict[str, torch.Tensor], dict]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"checkpoint not found: {path}")
    with open(path, "rb") as fh:
        line = fh.readline()
        try:
            header = json.loads(line.decode("utf-8"))
            if header.get("format") != _FORMAT:
                raise ValueError(f"not a {_FORMAT} file")
            config = ModelConfig.from_dict(header["config"])
            entries = header["entries"]
        except (UnicodeDecodeError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed checkpoint header in {path}: {exc}") from exc
        state = {}
        for entry in entries:
            dtype = np.dtype(_DTYPES[entry["dtype"]])
            shape = tuple(int(s) for s in entry["shape"])
            count = int(np.prod(shape)) if shape else 1
            blob = fh.read(count * dtype.itemsize)
            if len(blob) != count * dtype.itemsize:
                raise ValueError(f"truncated checkpoint payload in {path} at {entry['name']}")
            state[entry["name"]] = torch.from_numpy(
                np.frombuffer(blob, dtype=dtype).reshape(shape).copy()
            )
    return config, state, header.get("extra", {})


def load_checkpoint(path) -> CsiPoseNet:
    """Rebuild the model and load its parameters, validating shapes."""
    config, state, _ = read_checkpoint(path)
    model = CsiPoseNet(config)
    expected = model.state_dict()
    missing = set(expected) - set(state)
    extra_keys = set(state) - set(expected)
    if missing or extra_keys:
        raise ValueError(
            f"checkpoint {path} does not match config: missing {sorted(missing)}, "
            f"unexpected {sorted(extra_keys)}"
        )
    for name, tensor in state.items():
        if tuple(tensor.shape) != tuple(expected[name].shape):
            raise ValueError(
                f"checkpoint {path}: shape of {name} is {tuple(tensor.shape)}, "
                f"config implies {tuple(expected[name].shape)}"
            )
    if any(t.dtype == torch.float64 for t in state.values()):
        model.double()
    model.load_state_dict(state)
    return model
