"""JSON and CSV formats for groups, functions, partitions, kernels and reports."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .functions import GroupFunction, fourier
from .groups import DEFAULT_SIZE_CAP, FiniteAbelianGroup, make_group
from .kernels import Kernel
from .partitions import Partition

SCHEMA = "hofa/1"


class FormatError(ValueError):
    pass


def _float(x: float) -> str:
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        raise FormatError(f"non-finite number {x} cannot be serialised")
    if x == 0:
        return "0.0"
    s = f"{x:.17g}"
    return s if any(ch in s for ch in ".en") else s + ".0"


def dumps(obj: Any, indent: int | None = 2, _level: int = 0) -> str:
    """JSON with every float written to 17 significant digits."""
    pad = "" if indent is None else "\n" + " " * (indent * (_level + 1))
    end = "" if indent is None else "\n" + " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [json.dumps(str(k)) + ": " + dumps(v, indent, _level + 1) for k, v in obj.items()]
        return "{" + pad + ("," + pad).join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        # flat numeric pairs stay on one line
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v, None) for v in obj) + "]"
        items = [dumps(v, indent, _level + 1) for v in obj]
        return "[" + pad + ("," + pad).join(items) + end + "]"
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist(), indent, _level)
    raise FormatError(f"cannot serialise {type(obj).__name__}")


def complex_pairs(values) -> list[list[float]]:
    v = np.asarray(values, dtype=np.complex128).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in v]


def parse_complex_pairs(rows, expected: int) -> np.ndarray:
    try:
        arr = np.array(rows, dtype=float)
    except (TypeError, ValueError):
        raise FormatError("values must be a list of [re, im] pairs") from None
    if arr.ndim == 1:
        arr = np.stack([arr, np.zeros_like(arr)], axis=1)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise FormatError("values must be a list of [re, im] pairs")
    if len(arr) != expected:
        raise FormatError(f"expected {expected} values, got {len(arr)}")
    return arr[:, 0] + 1j * arr[:, 1]


def group_to_json(g: FiniteAbelianGroup) -> dict:
    return {"factors": list(g.factors)}


def group_from_json(d, size_cap: int = DEFAULT_SIZE_CAP) -> FiniteAbelianGroup:
    try:
        return make_group(d["factors"], size_cap)
    except (KeyError, TypeError):
        raise FormatError('group must look like {"factors": [...]}') from None


def function_to_json(f: GroupFunction) -> dict:
    return {"group": group_to_json(f.group), "values": complex_pairs(f.values)}


def function_from_json(d) -> GroupFunction:
    if not isinstance(d, dict) or "group" not in d or "values" not in d:
        raise FormatError('function JSON needs "group" and "values"')
    g = group_from_json(d["group"])
    return GroupFunction(g, parse_complex_pairs(d["values"], g.order))


def partition_to_json(P: Partition) -> dict:
    return {"group": group_to_json(P.group), "labels": P.labels.tolist()}


def partition_from_json(d) -> Partition:
    g = group_from_json(d["group"])
    labels = d.get("labels")
    if not isinstance(labels, list) or len(labels) != g.order:
        raise FormatError(f"partition needs {g.order} labels")
    return Partition(g, np.array(labels, dtype=np.int64))


def kernel_to_json(K: Kernel) -> dict:
    return {"group": group_to_json(K.group), "values": complex_pairs(K.values)}


def kernel_from_json(d) -> Kernel:
    if not isinstance(d, dict) or "group" not in d or "values" not in d:
        raise FormatError('kernel JSON needs "group" and "values"')
    g = group_from_json(d["group"])
    return Kernel(g, parse_complex_pairs(d["values"], g.order**2).reshape(g.order, g.order))


def parse_subgroup(text: str) -> list[int]:
    """Subgroup literal: comma-separated element indices such as ``"0,2"``."""
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise FormatError(f"malformed subgroup literal {text!r}") from None


def load_json(path: str | Path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: malformed JSON ({e})") from None


def write_text(path: str | Path, text: str) -> None:
    with open(path, "w") as fh:
        fh.write(text)


def spectrum_csv(f: GroupFunction) -> str:
    """Fourier spectrum as CSV rows: xi-index, re, im, magnitude."""
    lines = ["xi,re,im,magnitude"]
    for i, c in enumerate(fourier(f)):
        lines.append(f"{i},{_float(c.real)},{_float(c.imag)},{_float(abs(c))}")
    return "\n".join(lines) + "\n"
