"""Delimited output for trajectories, model comparisons, and weight tables.

Column layouts are fixed so downstream tooling can rely on them. Floats
are written with 17 significant digits, which round-trips IEEE doubles
exactly. The time column holds absolute time by default; with
``dimensionless=True`` it holds k_S * t instead.
"""

from __future__ import annotations

import csv
import json
import math
from typing import IO, Sequence

import numpy as np

from .analytic import (
    decomposition_weights,
    independent_entry_distance,
    kominis_claimed_state,
    unrecombined_state,
)
from .errors import DomainError
from .integrate import Trajectory
from .spinsys import BasisKind, InitialState

ST_COLUMNS = ["t", "ss_re", "st_re", "st_im", "tt_re", "trace", "p_s", "p_t", "coherence_abs", "purity"]
PST_COLUMNS = ["t", "pp", "ss", "st_re", "st_im", "tt", "trace", "p_p", "p_s", "p_t", "coherence_abs", "purity"]
COMPARE_COLUMNS = ["t", "d_trace", "d_p_p", "d_p_s", "d_p_t", "d_coherence_abs", "d_purity", "coherence_ratio"]
DECOMPOSE_COLUMNS = ["t", "w_0", "w_t", "w_p", "w_sum", "dist_claimed_corrected"]


def format_float(x: float) -> str:
    return f"{x:.17g}"


def trajectory_table(traj: Trajectory, dimensionless: bool = False) -> tuple[list[str], list[list[float]]]:
    """Rows of state entries and observables, one per recorded time."""
    k_s = traj.params.k_s
    rows = []
    if traj.basis.kind is BasisKind.ST:
        columns = ST_COLUMNS
        for p in traj.points:
            m = p.state.mat
            o = p.obs
            rows.append([
                p.t * k_s if dimensionless else p.t,
                m[0, 0].real, m[0, 1].real, m[0, 1].imag, m[1, 1].real,
                o.trace, o.p_s, o.p_t, o.coherence_abs, o.purity,
            ])
    else:
        columns = PST_COLUMNS
        for p in traj.points:
            m = p.state.mat
            o = p.obs
            rows.append([
                p.t * k_s if dimensionless else p.t,
                m[0, 0].real, m[1, 1].real, m[1, 2].real, m[1, 2].imag, m[2, 2].real,
                o.trace, o.p_p, o.p_s, o.p_t, o.coherence_abs, o.purity,
            ])
    return columns, rows


def compare_table(
    traj_a: Trajectory, traj_b: Trajectory, dimensionless: bool = False
) -> tuple[list[str], list[list[float]]]:
    """Observable differences (A minus B) plus the coherence ratio A/B."""
    if len(traj_a.points) != len(traj_b.points):
        raise DomainError("trajectories record different numbers of points")
    k_s = traj_a.params.k_s
    rows = []
    for pa, pb in zip(traj_a.points, traj_b.points):
        if abs(pa.t - pb.t) > 1e-12 * max(1.0, abs(pa.t)):
            raise DomainError(f"trajectories record different times: {pa.t} vs {pb.t}")
        oa, ob = pa.obs, pb.obs
        ratio = oa.coherence_abs / ob.coherence_abs if ob.coherence_abs > 0.0 else math.nan
        rows.append([
            pa.t * k_s if dimensionless else pa.t,
            oa.trace - ob.trace,
            oa.p_p - ob.p_p,
            oa.p_s - ob.p_s,
            oa.p_t - ob.p_t,
            oa.coherence_abs - ob.coherence_abs,
            oa.purity - ob.purity,
            ratio,
        ])
    return COMPARE_COLUMNS, rows


def decompose_table(
    state: InitialState,
    k_s: float,
    times: Sequence[float],
    dimensionless: bool = False,
) -> tuple[list[str], list[list[float]]]:
    """Weight rows plus the gap between the two-weight and three-weight states.

    The distance column is the Euclidean norm over the independent state
    entries (each Hermitian pair counted once).
    """
    rows = []
    for t in times:
        w = decomposition_weights(state, k_s, t)
        dist = independent_entry_distance(
            kominis_claimed_state(state, k_s, t), unrecombined_state(state, k_s, t)
        )
        rows.append([
            t * k_s if dimensionless else t,
            w.w_0, w.w_t, w.w_p, w.w_0 + w.w_t + w.w_p, dist,
        ])
    return DECOMPOSE_COLUMNS, rows


def write_csv(stream: IO[str], columns: Sequence[str], rows: Sequence[Sequence[float]]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_float(x) for x in row])


def write_json(
    stream: IO[str],
    columns: Sequence[str],
    rows: Sequence[Sequence[float]],
    meta: dict | None = None,
) -> None:
    doc = dict(meta or {})
    doc["columns"] = list(columns)
    doc["rows"] = [[float(x) for x in row] for row in rows]
    json.dump(doc, stream, indent=2)
    stream.write("\n")


def read_csv(stream: IO[str]) -> tuple[list[str], np.ndarray]:
    """Parse a table written by ``write_csv`` back into floats."""
    reader = csv.reader(stream)
    try:
        columns = next(reader)
    except StopIteration:
        raise DomainError("CSV file is empty") from None
    data = [[float(x) for x in row] for row in reader if row]
    if not data:
        raise DomainError("CSV file has no data rows")
    return columns, np.array(data)
