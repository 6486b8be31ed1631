"""Versioned JSON report documents.

Floats are written with 17 significant digits so that every double survives a
parse/emit round trip, and the emitter is deterministic: parsing a document
and emitting it again reproduces it byte for byte.
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from .worlds import InformationAudit, InterferenceMatrix, WorldDecomposition, WorldTrace

FORMAT_VERSION = 1


def _float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    if x == 0.0:
        x = 0.0  # drop the sign of -0.0
    return format(x, ".17g")


def _emit(obj: Any, indent: int, out: list[str]) -> None:
    pad = "  " * indent
    if obj is None or isinstance(obj, bool):
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        items = list(obj.items())
        for i, (k, v) in enumerate(items):
            out.append(f"{pad}  {json.dumps(str(k), ensure_ascii=False)}: ")
            _emit(v, indent + 1, out)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            parts: list[str] = []
            for v in obj:
                _emit(v, 0, parts)
                parts.append(", ")
            out.append("[" + "".join(parts[:-1]) + "]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(pad + "  ")
            _emit(v, indent + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(doc: dict) -> str:
    out: list[str] = []
    _emit(doc, 0, out)
    out.append("\n")
    return "".join(out)


def loads(text: str) -> dict:
    return json.loads(text)


def amplitudes(a: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in a]


def decomposition_block(d: WorldDecomposition) -> dict:
    return {
        "world_count": d.world_count,
        "residual": d.residual,
        "worlds": [
            {
                "label": w.label,
                "weight": w.weight,
                "relative_state": amplitudes(w.relative_state.amps),
            }
            for w in d.worlds
        ],
    }


def interference_block(m: InterferenceMatrix) -> dict:
    return {
        "labels": list(m.labels),
        "mass": [[float(v) for v in row] for row in m.mass],
        "leakage": [float(v) for v in m.leakage],
        "diagonal": m.is_diagonal(),
    }


def audit_block(a: InformationAudit) -> dict:
    return {
        "worlds_max": a.worlds_max,
        "bits_per_world": a.bits_per_world,
        "classical_bits_to_describe": a.classical_bits_to_describe,
        "retrievable_bits": a.retrievable_bits,
    }


def trace_document(
    world_trace: WorldTrace,
    audit: InformationAudit,
    format_version: int = FORMAT_VERSION,
    extra: dict | None = None,
) -> dict:
    doc: dict = {"format_version": format_version}
    if extra:
        doc.update(extra)
    steps = []
    for s in world_trace.per_step:
        block = {"step_index": s.step_index, "stage": s.stage}
        block.update(decomposition_block(s.decomposition))
        steps.append(block)
    doc["steps"] = steps
    doc["events"] = [
        {
            "step_index": e.step_index,
            "kind": e.kind,
            "count_before": e.count_before,
            "count_after": e.count_after,
        }
        for e in world_trace.events
    ]
    doc["reappearances"] = [
        {"step_index": r.step_index, "label": r.label, "last_seen": r.last_seen}
        for r in world_trace.reappearances
    ]
    doc["audit"] = audit_block(audit)
    return doc


def serialize_trace(
    world_trace: WorldTrace,
    audit: InformationAudit,
    format_version: int = FORMAT_VERSION,
    extra: dict | None = None,
) -> str:
    return dumps(trace_document(world_trace, audit, format_version, extra))
