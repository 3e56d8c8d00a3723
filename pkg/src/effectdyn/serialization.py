"""JSON and CSV formats for operators, observables, trajectories and scans.

Operator document: {"dim": n, "entries": [[[re, im], ...], ...]} with
canonical field order dim -> entries. Observable document:
{"outcomes": [...], "effects": [operator documents]}. Trajectory CSV columns:
t, e_00_re, e_00_im, ..., deviation, derivative_norm. Scan CSV columns:
trial, commutator_norm, t_star, min_gap. All floats in CSV are written with
17 significant digits so residuals survive a round trip; writers are
deterministic byte-for-byte.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .errors import SchemaError
from .explorer import ScanConfig, ScanResult
from .observables import Observable, OutcomeDistribution

_FLOAT_FMT = ".17g"


def _fmt(x: float) -> str:
    return format(float(x), _FLOAT_FMT)


def operator_to_document(matrix: np.ndarray) -> dict:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise SchemaError(f"operator must be square, got shape {m.shape}")
    return {
        "dim": int(m.shape[0]),
        "entries": [[[float(z.real), float(z.imag)] for z in row] for row in m],
    }


def document_to_matrix(doc) -> np.ndarray:
    """Parse an operator document into a complex matrix (SchemaError if malformed)."""
    if not isinstance(doc, dict):
        raise SchemaError(f"operator document must be an object, got {type(doc).__name__}")
    missing = {"dim", "entries"} - doc.keys()
    if missing:
        raise SchemaError(f"operator document missing fields: {sorted(missing)}")
    dim = doc["dim"]
    entries = doc["entries"]
    if not isinstance(dim, int) or dim < 1:
        raise SchemaError(f"dim must be a positive integer, got {dim!r}")
    if not isinstance(entries, list) or len(entries) != dim:
        raise SchemaError(f"entries must be a list of {dim} rows")
    out = np.empty((dim, dim), dtype=complex)
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != dim:
            raise SchemaError(f"row {i} must be a list of {dim} [re, im] pairs")
        for j, pair in enumerate(row):
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not all(isinstance(v, (int, float)) for v in pair)
            ):
                raise SchemaError(f"entry ({i},{j}) must be an [re, im] pair of numbers")
            out[i, j] = complex(pair[0], pair[1])
    return out


def operator_json(matrix: np.ndarray) -> str:
    return json.dumps(operator_to_document(matrix), indent=2) + "\n"


def parse_operator_json(text: str) -> np.ndarray:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    return document_to_matrix(doc)


def observable_to_document(obs: Observable) -> dict:
    return {
        "outcomes": list(obs.outcomes),
        "effects": [operator_to_document(e.matrix) for e in obs.effects],
    }


def observable_json(obs: Observable) -> str:
    return json.dumps(observable_to_document(obs), indent=2) + "\n"


def parse_observable_document(doc) -> tuple[tuple[str, ...], list[np.ndarray]]:
    """Parse an observable document into (labels, matrices); validation is separate."""
    if not isinstance(doc, dict):
        raise SchemaError("observable document must be an object")
    missing = {"outcomes", "effects"} - doc.keys()
    if missing:
        raise SchemaError(f"observable document missing fields: {sorted(missing)}")
    outcomes = doc["outcomes"]
    effects = doc["effects"]
    if not isinstance(outcomes, list) or not all(isinstance(o, str) for o in outcomes):
        raise SchemaError("outcomes must be a list of strings")
    if not isinstance(effects, list) or len(effects) != len(outcomes):
        raise SchemaError("effects must be a list parallel to outcomes")
    return tuple(outcomes), [document_to_matrix(e) for e in effects]


def parse_observable_json(text: str) -> tuple[tuple[str, ...], list[np.ndarray]]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    return parse_observable_document(doc)


def distribution_json(dist: OutcomeDistribution) -> str:
    return json.dumps(dist.as_dict(), indent=2) + "\n"


def trajectory_header(dim: int) -> list[str]:
    cols = ["t"]
    for i in range(dim):
        for j in range(dim):
            cols.append(f"e_{i}{j}_re")
            cols.append(f"e_{i}{j}_im")
    cols.extend(["deviation", "derivative_norm"])
    return cols


def trajectory_csv(times, matrices, deviations, derivative_norms) -> str:
    """Render evolution samples as CSV, one row per time, 17-digit floats."""
    times = list(times)
    if not times:
        raise SchemaError("trajectory needs at least one sample")
    dim = matrices[0].shape[0]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(trajectory_header(dim))
    for t, m, dev, dnorm in zip(times, matrices, deviations, derivative_norms):
        row = [_fmt(t)]
        for i in range(dim):
            for j in range(dim):
                row.append(_fmt(m[i, j].real))
                row.append(_fmt(m[i, j].imag))
        row.append(_fmt(dev))
        row.append(_fmt(dnorm))
        writer.writerow(row)
    return buf.getvalue()


def scan_csv(result: ScanResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["trial", "commutator_norm", "t_star", "min_gap"])
    for r in result.records:
        writer.writerow([r.trial, _fmt(r.commutator_norm), _fmt(r.t_star), _fmt(r.min_gap)])
    return buf.getvalue()


def scan_json(cfg: ScanConfig, result: ScanResult) -> str:
    doc = {
        "config": {
            "dim": cfg.dim,
            "trials": cfg.trials,
            "t_window": list(cfg.t_window),
            "grid_points": cfg.grid_points,
            "refine_iters": cfg.refine_iters,
            "seed": cfg.seed,
            "commutator_floor": cfg.commutator_floor,
        },
        "summary": result.summary,
        "records": [
            {
                "trial": r.trial,
                "commutator_norm": r.commutator_norm,
                "t_star": r.t_star,
                "min_gap": r.min_gap,
                "punctured_t_star": r.punctured_t_star,
                "punctured_min_gap": r.punctured_min_gap,
                "a": operator_to_document(r.a.matrix),
                "b": operator_to_document(r.b.matrix),
            }
            for r in result.records
        ],
    }
    return json.dumps(doc, indent=2) + "\n"
