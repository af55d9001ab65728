"""JSONL instance files.

First line: a header object with at least
    {"d": int, "dims": [int, ...], "model": str, "params": {...}, "seed": int}
(extra keys such as the effective run config are allowed and ignored by
readers).  Each following line is {"e": [v1, ..., vd]} with 1-based
integers, lines in lexicographic edge order.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import IO

import numpy as np

from .errors import ValidationError
from .graphs import HyperGraph, validate
from .samplers import ModelSpec, WordSample


def header_for(
    spec: ModelSpec | None,
    graph: HyperGraph,
    seed: int = 0,
    words: WordSample | None = None,
    extra: dict | None = None,
) -> dict:
    params = dict(spec.params_dict()) if spec is not None else {}
    if words is not None:
        params["words"] = [w.tolist() for w in words.words]
    header = {
        "d": graph.d,
        "dims": list(graph.dims),
        "model": spec.kind if spec is not None else "custom",
        "params": params,
        "seed": int(seed),
    }
    if extra:
        header.update(extra)
    return header


def write_instance(fh: IO[str], graph: HyperGraph, header: dict) -> None:
    fh.write(json.dumps(header, sort_keys=True) + "\n")
    for row in graph.edges:
        fh.write(json.dumps({"e": [int(v) for v in row]}) + "\n")


def write_instance_file(path: str | Path, graph: HyperGraph, header: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        write_instance(fh, graph, header)


def read_instance(fh: IO[str]) -> tuple[HyperGraph, dict]:
    """Parse an instance stream, validating structure; errors name the
    offending line number (1-based)."""
    first = fh.readline()
    if not first.strip():
        raise ValidationError("line 1: missing header")
    try:
        header = json.loads(first)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"line 1: invalid JSON header: {exc}") from exc
    for key in ("d", "dims"):
        if key not in header:
            raise ValidationError(f"line 1: header missing {key!r}")
    dims = tuple(int(n) for n in header["dims"])
    d = int(header["d"])
    if len(dims) != d:
        raise ValidationError(f"line 1: header d={d} inconsistent with dims")
    edges = []
    for lineno, line in enumerate(fh, start=2):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"line {lineno}: invalid JSON: {exc}") from exc
        if "e" not in obj or not isinstance(obj["e"], list) or len(obj["e"]) != d:
            raise ValidationError(f"line {lineno}: expected an edge object with {d} coordinates")
        edges.append(obj["e"])
    arr = np.asarray(edges, dtype=np.int64) if edges else np.empty((0, d), dtype=np.int64)
    graph = HyperGraph(dims, arr)
    try:
        validate(graph)
    except ValidationError as exc:
        raise ValidationError(f"edge section: {exc}") from exc
    return graph, header


def read_instance_file(path: str | Path) -> tuple[HyperGraph, dict]:
    with open(path, "r", encoding="utf-8") as fh:
        return read_instance(fh)
