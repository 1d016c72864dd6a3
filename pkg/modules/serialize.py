"""
JSON and CSV encoding of everything the CLI prints.

Complex numbers are written as [re, im] pairs; matrices as nested lists of
pairs. CSV goes through pandas.
"""

import json
from typing import Any, Dict, Iterable, List, Optional, TextIO

import numpy as np
import pandas as pd

from modules import config
from modules.contextuality import MaximizationResult, SigmaReport
from modules.errors import StateSpecError
from modules.kd import KDDistribution11, KDTable
from modules.pentagon import CONTEXT_ORDER, CONTEXTS, OUTCOMES, PATH_KEYS, PentagonFrame
from modules.tomography import RedEntries, TomographicData
from modules.weakvalues import FluctuationReport, OutcomeValueTable

RED_FIELDS = {
    "rho_1f": "r_1f",
    "rho_2f": "r_2f",
    "rho_3f": "r_3f",
    "rho_1S2": "r_1S2",
    "rho_1P2": "r_1P2",
}


def pair(z: complex) -> List[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def matrix_to_json(m: np.ndarray) -> List[List[List[float]]]:
    return [[pair(x) for x in row] for row in np.asarray(m)]


def frame_to_json(frame: PentagonFrame) -> Dict[str, Any]:
    return {
        "vectors": {outcome: [pair(x) for x in frame.vec(outcome)] for outcome in OUTCOMES},
        "contexts": {name: list(CONTEXTS[name]) for name in CONTEXT_ORDER},
    }


def eleven_to_json(terms: KDDistribution11) -> Dict[str, List[float]]:
    return {key: pair(terms[key]) for key in PATH_KEYS}


def table_to_json(table: KDTable) -> Dict[str, Any]:
    values = []
    for row in table.rows:
        values.append([
            "forbidden" if table.is_forbidden(row, column) else pair(table.entry(row, column))
            for column in table.columns
        ])
    return {
        "rows": list(table.rows),
        "columns": list(table.columns),
        "values": values,
        "forbidden": [list(entry) for entry in table.forbidden],
    }


def data_to_json(data: TomographicData) -> Dict[str, Any]:
    return {
        "p1": data.p1,
        "pf": data.pf,
        "rho_1f": pair(data.r_1f),
        "rho_1D2": pair(data.r_1D2),
        "rho_D2f": pair(data.r_D2f),
    }


def red_to_json(red: RedEntries) -> Dict[str, List[float]]:
    return {key: pair(getattr(red, attr)) for key, attr in RED_FIELDS.items()}


def red_from_json(document: Any) -> RedEntries:
    """Parse red entries; missing fields are an input error, values may be numbers or pairs."""
    if not isinstance(document, dict):
        raise StateSpecError("red entries must be a JSON object")
    values = {}
    for key, attr in RED_FIELDS.items():
        if key not in document:
            raise StateSpecError(f"red entries: missing field {key!r}")
        raw = document[key]
        if isinstance(raw, (int, float)):
            values[attr] = complex(raw)
        elif isinstance(raw, list) and len(raw) == 2 and all(isinstance(x, (int, float)) for x in raw):
            values[attr] = complex(raw[0], raw[1])
        else:
            raise StateSpecError(f"red entries: {key} must be a number or [re, im], got {raw!r}")
    return RedEntries(**values)


def sigma_to_json(report: SigmaReport) -> Dict[str, Any]:
    return {
        "sigma": report.sigma,
        "probabilities": dict(report.probabilities),
        "violated": report.violated,
        "margin": report.margin,
    }


def maximization_to_json(result: MaximizationResult) -> Dict[str, Any]:
    return {
        "sigma": result.sigma,
        "eigen_bound": result.eigen_bound,
        "restarts": result.restarts,
        "state": [pair(x) for x in result.state],
    }


def outcome_table_to_json(table: OutcomeValueTable) -> Dict[str, Any]:
    rows = []
    for row in table.rows:
        rows.append({
            "outcome": row.outcome,
            "probability": row.probability,
            "defined": row.defined,
            "values": None if row.values is None else {b: pair(w) for b, w in row.values.items()},
        })
    return {"context": table.context, "state": table.state_label, "rows": rows}


def fluctuation_to_json(report: FluctuationReport) -> Dict[str, Any]:
    return {
        "b": report.b,
        "context": report.context,
        "mean": report.mean,
        "variance": report.variance,
        "second_moment": report.second_moment,
        "probability": report.probability,
        "bound_satisfied": report.bound_satisfied(),
        "skipped": list(report.skipped),
    }


def dumps(document: Any) -> str:
    return json.dumps(document, indent=2, allow_nan=False)


# --- CSV


def _float_format() -> str:
    return f"%.{config.CSV_DIGITS}g"


def table_to_frame(table: KDTable) -> pd.DataFrame:
    records = []
    for row in table.rows:
        for column in table.columns:
            z = table.entry(row, column)
            records.append({
                "row": row,
                "column": column,
                "re": z.real,
                "im": z.imag,
                "forbidden": table.is_forbidden(row, column),
            })
    return pd.DataFrame.from_records(records)


def eleven_to_frame(terms: KDDistribution11) -> pd.DataFrame:
    return pd.DataFrame.from_records(
        [{"path": key, "re": terms[key].real, "im": terms[key].imag} for key in PATH_KEYS]
    )


def outcome_table_to_frame(table: OutcomeValueTable) -> pd.DataFrame:
    records = []
    for row in table.rows:
        for b in OUTCOMES:
            w: Optional[complex] = None if row.values is None else row.values[b]
            records.append({
                "context": table.context,
                "a": row.outcome,
                "probability": row.probability,
                "b": b,
                "re": np.nan if w is None else w.real,
                "im": np.nan if w is None else w.imag,
            })
    return pd.DataFrame.from_records(records)


def write_csv(frames: Iterable[pd.DataFrame], stream: TextIO) -> None:
    for i, df in enumerate(frames):
        if i:
            stream.write("\n")
        df.to_csv(stream, index=False, float_format=_float_format())


# --- simulation reports


def _number(x: float) -> Optional[float]:
    """Non-finite values (undefined standard errors) become null."""
    x = float(x)
    return x if np.isfinite(x) else None


def count_record_to_json(record) -> Dict[str, Any]:
    return {"basis": record.basis, "counts": record.as_dict(), "shots": record.shots}


def estimation_to_json(report) -> Dict[str, Any]:
    return {
        "settings": [count_record_to_json(r) for r in report.settings],
        "estimates": {
            "red": red_to_json(report.red),
            "red_stderr": {
                key: [_number(report.red_stderr[attr].real), _number(report.red_stderr[attr].imag)]
                for key, attr in RED_FIELDS.items()
            },
            "data": data_to_json(report.data),
            "imag_residual": report.data.imag_residual,
        },
        "reconstructed": matrix_to_json(report.reconstructed),
        "positive": report.positive,
        "min_eigenvalue": report.min_eigenvalue,
        "trace_distance": report.trace_distance,
        "seed": report.seed,
        "shots_per_setting": report.shots_per_setting,
    }


def inequality_to_json(report) -> Dict[str, Any]:
    return {
        "settings": [count_record_to_json(r) for r in report.settings],
        "estimates": {
            "probabilities": dict(report.probabilities),
            "stderr": dict(report.stderrs),
            "sigma_hat": report.sigma_hat,
            "sigma_stderr": report.stderr,
            "z_score": _number(report.z_score),
        },
        "seed": report.seed,
        "shots_per_setting": report.shots_per_context,
    }
