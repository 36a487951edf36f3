"""CSV and JSON emission with full precision and a config provenance line.

Every file starts with (CSV) or embeds (JSON) the exact configuration that
produced it, so outputs are self-describing and reruns are comparable.
Floats are written with 17 significant digits, enough to round-trip a
double exactly.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from .classical import ProbabilitySeries
from .quantum import AmplitudeSeries


def fmt(x: float) -> str:
    return f"{x:.17g}"


def config_line(config: Mapping[str, Any]) -> str:
    parts = " ".join(f"{k}={config[k]}" for k in sorted(config))
    return f"# config: {parts}"


def write_columns_csv(
    path: str | Path,
    header: Sequence[str],
    columns: Sequence[np.ndarray],
    config: Mapping[str, Any],
) -> None:
    """Write equal-length columns under the given header names."""
    lengths = {len(c) for c in columns}
    if len(lengths) != 1:
        raise ValueError(f"columns have unequal lengths {sorted(lengths)}")
    rows = len(columns[0])
    with open(path, "w") as fh:
        fh.write(config_line(config) + "\n")
        fh.write(",".join(header) + "\n")
        for i in range(rows):
            fh.write(",".join(fmt(float(c[i])) for c in columns) + "\n")


def write_probability_series_csv(
    path: str | Path, series: ProbabilitySeries, config: Mapping[str, Any]
) -> None:
    """Header t,p1,...,pn; one row per grid point."""
    n = series.values.shape[1]
    header = ["t"] + [f"p{v}" for v in range(1, n + 1)]
    cols = [series.grid.times] + [series.values[:, v] for v in range(n)]
    write_columns_csv(path, header, cols, config)


def write_amplitude_series_csv(
    path: str | Path, series: AmplitudeSeries, config: Mapping[str, Any]
) -> None:
    """Header t,re_psi1,im_psi1,...; one row per grid point."""
    n = series.values.shape[1]
    header = ["t"]
    cols: list[np.ndarray] = [series.grid.times]
    for v in range(n):
        header += [f"re_psi{v + 1}", f"im_psi{v + 1}"]
        cols += [series.values[:, v].real, series.values[:, v].imag]
    write_columns_csv(path, header, cols, config)


def write_occupation_csv(
    path: str | Path, series: AmplitudeSeries, config: Mapping[str, Any]
) -> None:
    """Header t,P1,...,Pn with occupation probabilities."""
    n = series.values.shape[1]
    header = ["t"] + [f"P{v}" for v in range(1, n + 1)]
    probs = np.abs(series.values) ** 2
    cols = [series.grid.times] + [probs[:, v] for v in range(n)]
    write_columns_csv(path, header, cols, config)


def write_json(path: str | Path, payload: Mapping[str, Any], config: Mapping[str, Any]) -> None:
    doc = {"config": dict(config)}
    doc.update(payload)
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def write_jsonl(path: str | Path, rows: Sequence[Mapping[str, Any]]) -> None:
    with open(path, "w") as fh:
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True) + "\n")
