"""Invariant monitors, reference solutions, and convergence-order studies.

Casimir monitoring defaults to trace powers: they are exactly computable,
carry the same isospectrality information as eigenvalues, and do not add an
iterative solver whose own error would pollute drift plots near 1e-13.
Eigenvalue-based drift is available behind a flag.
"""

from __future__ import annotations

import hashlib
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DegenerateStudyError
from .flows import momentum_vector
from .integrators import SolverConfig, integrate
from .linalg import eigenvalues, frobenius_norm, trace_powers
from .tableaux import gauss_legendre
from .trajectory import TrajectoryRecord

__all__ = [
    "casimir_drift",
    "DriftSummary",
    "hamiltonian_drift",
    "momentum_drift",
    "momentum_component_drift",
    "reference_solution",
    "ConvergenceReport",
    "convergence_study",
    "linear_slope",
    "write_trajectory_csv",
    "write_monitor_csvs",
    "write_convergence_outputs",
]

ROUNDOFF_FLOOR = 1e-12


def _state_trace_powers(state, pmax):
    if isinstance(state, tuple):
        return np.concatenate([trace_powers(w, min(w.shape[0], pmax)) for w in state])
    return trace_powers(state, pmax)


def casimir_drift(tr: TrajectoryRecord, pmax: int = 6, use_eigenvalues: bool = False) -> np.ndarray:
    """Per-step worst-case drift of the spectral invariants.

    Returns max_p |Tr(W_k^p) - Tr(W_0^p)| over p = 1..pmax (and over
    components for product states).  With ``use_eigenvalues`` the drift of
    the sorted spectrum is measured instead.
    """
    if use_eigenvalues:
        def extract(state):
            if isinstance(state, tuple):
                return np.concatenate([eigenvalues(w) for w in state])
            return eigenvalues(state)
    else:
        def extract(state):
            return _state_trace_powers(state, pmax)

    base = extract(tr.states[0])
    out = np.empty(len(tr.states))
    for k, state in enumerate(tr.states):
        out[k] = float(np.max(np.abs(extract(state) - base)))
    return out


def linear_slope(times: np.ndarray, values: np.ndarray) -> float:
    """Least-squares slope of values against time."""
    t = np.asarray(times, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    if len(t) < 2:
        return 0.0
    t0 = t - t.mean()
    denom = float(np.dot(t0, t0))
    if denom == 0.0:
        return 0.0
    return float(np.dot(t0, v - v.mean()) / denom)


@dataclass
class DriftSummary:
    series: np.ndarray
    max_abs: float
    slope_per_time: float


def hamiltonian_drift(tr: TrajectoryRecord, flow) -> DriftSummary:
    """Energy drift H(W_k) - H(W_0) with max and least-squares slope."""
    if getattr(flow, "hamiltonian", None) is None:
        raise ConfigurationError(f"flow '{getattr(flow, 'name', '?')}' has no Hamiltonian")
    values = np.array([float(flow.hamiltonian(state)) for state in tr.states])
    series = values - values[0]
    return DriftSummary(
        series=series,
        max_abs=float(np.max(np.abs(series))),
        slope_per_time=linear_slope(tr.times, series),
    )


def _momentum_matrices(tr: TrajectoryRecord, strengths):
    if not tr.is_product:
        raise ConfigurationError("momentum drift applies to product-state trajectories")
    strengths = np.asarray(strengths, dtype=np.float64)
    return [sum(g * w for g, w in zip(strengths, state)) for state in tr.states]


def momentum_drift(tr: TrajectoryRecord, strengths) -> np.ndarray:
    """Series |M(W_k) - M(W_0)|_F for the weighted spin sum M."""
    mats = _momentum_matrices(tr, strengths)
    return np.array([frobenius_norm(m - mats[0]) for m in mats])


def momentum_component_drift(tr: TrajectoryRecord, strengths) -> np.ndarray:
    """Per-component drift |m_i(t) - m_i(0)| of the momentum 3-vector."""
    mats = _momentum_matrices(tr, strengths)
    vecs = np.stack([momentum_vector([m], [1.0]) for m in mats])
    return np.abs(vecs - vecs[0])


# -- reference solutions and convergence studies ------------------------------


def _cache_key(flow, w0, T, h_ref, tol):
    hasher = hashlib.sha256()
    hasher.update(getattr(flow, "name", "?").encode())
    hasher.update(np.asarray(w0).tobytes())
    hasher.update(np.array([T, h_ref, tol]).tobytes())
    return hasher.hexdigest()[:24]


def reference_solution(
    flow,
    w0,
    T: float,
    h_min: float | None = None,
    variant=None,
    cfg: SolverConfig | None = None,
    cache_dir: str | None = None,
) -> np.ndarray:
    """High-accuracy endpoint state used as the comparison point for studies.

    Runs the 3-stage (order 6) method at h_ref = min(0.5^14, h_min / 8); at
    that step the order-6 truncation error is far below round-off, so two
    references at h_ref and 2 h_ref agree to ~1e-12 (checked in the suite).
    Results can be cached on disk keyed by (flow, initial state, T, h_ref).
    """
    if not T > 0:
        raise ConfigurationError("T must be positive")
    cfg = cfg or SolverConfig()
    h_ref = 0.5**14
    if h_min is not None:
        h_ref = min(h_ref, h_min / 8.0)
    nsteps = max(1, math.ceil(T / h_ref - 1e-9))
    h = T / nsteps

    cache_path = None
    if cache_dir is not None:
        os.makedirs(cache_dir, exist_ok=True)
        cache_path = os.path.join(
            cache_dir, f"ref-{_cache_key(flow, w0, T, h, cfg.abs_tol)}.npy"
        )
        if os.path.exists(cache_path):
            return np.load(cache_path)

    record = integrate(
        flow, gauss_legendre(3), w0, h, nsteps, variant=variant, cfg=cfg, stride=nsteps
    )
    final = record.states[-1]
    if cache_path is not None:
        tmp = cache_path + ".tmp.npy"
        np.save(tmp, final)
        os.replace(tmp, cache_path)
    return final


@dataclass
class ConvergenceReport:
    """Max-over-time errors against a reference, with fitted log-log slopes.

    Points at or below the round-off floor are excluded from each fit; the
    number of points actually used is recorded per method.
    """

    hs: np.ndarray
    errors: dict
    slopes: dict
    points_used: dict = field(default_factory=dict)
    floor: float = ROUNDOFF_FLOOR

    def to_json(self) -> dict:
        return {
            "h": [float(h) for h in self.hs],
            "errors": {str(k): [float(e) for e in v] for k, v in self.errors.items()},
            "slopes": {str(k): float(v) for k, v in self.slopes.items()},
            "points_used": {str(k): int(v) for k, v in self.points_used.items()},
            "floor": self.floor,
        }


def _fit_slope(hs, errs, floor):
    hs = np.asarray(hs, dtype=np.float64)
    errs = np.asarray(errs, dtype=np.float64)
    mask = errs > floor
    if int(mask.sum()) < 2:
        raise DegenerateStudyError(
            "not enough error points above the round-off floor to fit a slope; "
            "increase T or use larger step sizes"
        )
    coeffs = np.polyfit(np.log(hs[mask]), np.log(errs[mask]), 1)
    return float(coeffs[0]), int(mask.sum())


def convergence_study(
    flow,
    w0,
    stage_counts,
    hs,
    T: float,
    variant=None,
    cfg: SolverConfig | None = None,
    cache_dir: str | None = None,
) -> ConvergenceReport:
    """Global-error study: max-over-time error vs step size, per method order.

    Every h must divide T and be an integer multiple of the smallest h so a
    single reference trajectory can serve all runs.  The fitted slope of an
    s-stage method is 2s (the classical order), up to floor effects.
    """
    cfg = cfg or SolverConfig()
    hs = sorted(float(h) for h in hs)
    if len(hs) < 1:
        raise ConfigurationError("need at least one step size")
    if len(hs) < 2:
        raise DegenerateStudyError("cannot fit a slope from a single step size")
    h_min = hs[0]
    for h in hs:
        if abs(T / h - round(T / h)) > 1e-9 or abs(h / h_min - round(h / h_min)) > 1e-9:
            raise ConfigurationError(
                f"h = {h} must divide T and be a multiple of the smallest h"
            )

    # one reference trajectory recorded on the finest comparison grid
    m = max(8, math.ceil(h_min / 0.5**14 - 1e-9))
    h_ref = h_min / m
    total = round(T / h_ref)
    ref_record = integrate(
        flow, gauss_legendre(3), w0, h_ref, total, variant=variant, cfg=cfg, stride=m
    )
    ref_states = ref_record.states  # states at multiples of h_min

    errors = {}
    slopes = {}
    points_used = {}
    for s in stage_counts:
        tableau = gauss_legendre(s)
        errs = []
        for h in hs:
            nsteps = round(T / h)
            record = integrate(flow, tableau, w0, h, nsteps, variant=variant, cfg=cfg)
            skip = round(h / h_min)
            worst = 0.0
            for k in range(1, nsteps + 1):
                diff = record.states[k] - ref_states[k * skip]
                worst = max(worst, frobenius_norm(diff))
            errs.append(worst)
        order = 2 * s
        errors[order] = np.asarray(errs)
        slopes[order], points_used[order] = _fit_slope(hs, errs, ROUNDOFF_FLOOR)
    return ConvergenceReport(
        hs=np.asarray(hs), errors=errors, slopes=slopes, points_used=points_used
    )


# -- CSV output ----------------------------------------------------------------


def _atomic_write(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _fmt(x) -> str:
    return repr(float(x))


def _state_columns(state, prefix=""):
    cols = []
    if isinstance(state, tuple):
        for m, w in enumerate(state):
            cols.extend(_state_columns(w, prefix=f"c{m}_"))
        return cols
    n = state.shape[0]
    for i in range(n):
        for j in range(n):
            cols.append((f"{prefix}w{i}{j}_re", f"{prefix}w{i}{j}_im", i, j))
    return cols


def write_trajectory_csv(tr: TrajectoryRecord, path: str) -> None:
    """One row per recorded step: time plus every state entry (re, im)."""
    header = ["time"]
    first = tr.states[0]
    mats = (lambda s: s) if tr.is_product else (lambda s: (s,))
    for m, w in enumerate(mats(first)):
        prefix = f"c{m}_" if tr.is_product else ""
        n = w.shape[0]
        for i in range(n):
            for j in range(n):
                header.append(f"{prefix}w{i}{j}_re")
                header.append(f"{prefix}w{i}{j}_im")
    lines = [",".join(header)]
    for t, state in zip(tr.times, tr.states):
        row = [_fmt(t)]
        for w in mats(state):
            for v in np.asarray(w).ravel():
                row.append(_fmt(v.real))
                row.append(_fmt(v.imag))
        lines.append(",".join(row))
    _atomic_write(path, "\n".join(lines) + "\n")


def write_monitor_csvs(tr: TrajectoryRecord, out_dir: str) -> list:
    """One CSV per monitor series; returns the written paths."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for name, series in tr.monitors.items():
        fname = name.replace("-", "_") + ".csv"
        path = os.path.join(out_dir, fname)
        arr = np.asarray(series)
        lines = []
        if np.iscomplexobj(arr):
            flat = arr.reshape(len(tr.times), -1)
            header = ["time"]
            for idx in range(flat.shape[1]):
                header.append(f"{name.replace('-', '_')}_{idx}_re")
                header.append(f"{name.replace('-', '_')}_{idx}_im")
            lines.append(",".join(header))
            for t, row in zip(tr.times, flat):
                cells = [_fmt(t)]
                for v in row:
                    cells.append(_fmt(v.real))
                    cells.append(_fmt(v.imag))
                lines.append(",".join(cells))
        else:
            flat = arr.reshape(len(tr.times), -1)
            header = ["time"] + [
                f"{name.replace('-', '_')}_{idx}" for idx in range(flat.shape[1])
            ]
            lines.append(",".join(header))
            for t, row in zip(tr.times, flat):
                lines.append(",".join([_fmt(t)] + [_fmt(v) for v in row]))
        _atomic_write(path, "\n".join(lines) + "\n")
        written.append(path)
    return written


def write_convergence_outputs(report: ConvergenceReport, out_dir: str) -> list:
    """CSV of (h, error per order) plus a JSON summary with fitted slopes."""
    import json

    os.makedirs(out_dir, exist_ok=True)
    orders = sorted(report.errors)
    lines = [",".join(["h"] + [f"error_order{o}" for o in orders])]
    for idx, h in enumerate(report.hs):
        row = [_fmt(h)] + [_fmt(report.errors[o][idx]) for o in orders]
        lines.append(",".join(row))
    csv_path = os.path.join(out_dir, "convergence.csv")
    _atomic_write(csv_path, "\n".join(lines) + "\n")
    json_path = os.path.join(out_dir, "convergence_summary.json")
    _atomic_write(json_path, json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n")
    return [csv_path, json_path]
