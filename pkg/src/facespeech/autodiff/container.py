"""Flat binary container for checkpoints and array dumps.

Layout: 8-byte little-endian uint64 header length, then a UTF-8 JSON header
{"meta": {...}, "params": [{"name", "shape", "dtype"}, ...]}, then the raw
little-endian float64 payloads concatenated in header order.
"""

import json
import struct

import numpy as np

_DTYPE_TAG = "<f8"


def save_container(path, arrays, meta=None):
    entries = [
        {"name": name, "shape": list(arr.shape), "dtype": _DTYPE_TAG}
        for name, arr in arrays.items()
    ]
    header = json.dumps(
        {"meta": meta or {}, "params": entries}, sort_keys=True
    ).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(struct.pack("<Q", len(header)))
        fh.write(header)
        for name, arr in arrays.items():
            fh.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())


def load_container(path):
    with open(path, "rb") as fh:
        (hlen,) = struct.unpack("<Q", fh.read(8))
        header = json.loads(fh.read(hlen).decode("utf-8"))
        arrays = {}
        for entry in header["params"]:
            shape = tuple(entry["shape"])
            count = int(np.prod(shape)) if shape else 1
            buf = fh.read(count * 8)
            if len(buf) != count * 8:
                raise ValueError(f"truncated payload for {entry['name']}")
            arrays[entry["name"]] = np.frombuffer(buf, dtype="<f8").reshape(shape).copy()
    return arrays, header.get("meta", {})
