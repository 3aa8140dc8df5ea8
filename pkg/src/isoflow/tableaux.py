"""Butcher tableaux and the algebraic conditions for symplecticity.

A Runge-Kutta method preserves the canonical symplectic form exactly when

    b[i] * A[i, j] + b[j] * A[j, i] - b[i] * b[j] == 0    for all i, j,

and a partitioned pair (A, b), (Ahat, bhat) is symplectic when

    b[i] * Ahat[i, j] + bhat[j] * A[j, i] - b[i] * bhat[j] == 0,
    bhat[i] == b[i].

The spectrum-preserving step maps in :mod:`isoflow.integrators` are derived
from these conditions, so the residuals below are the quantities to inspect
when a custom tableau misbehaves.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DimensionError

__all__ = [
    "ButcherTableau",
    "PartitionedTableau",
    "gauss_legendre",
    "lobatto_iiia_iiib",
    "check_symplectic",
    "symplectic_residuals",
    "check_partitioned_symplectic",
    "tableau_to_json",
    "tableau_from_json",
    "partitioned_to_json",
    "partitioned_from_json",
    "load_tableau_file",
]

_CONSISTENCY_TOL = 1e-14


@dataclass(frozen=True)
class ButcherTableau:
    """Coefficients (A, b, c) of an s-stage Runge-Kutta method."""

    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    name: str = field(default="", compare=False)
    # Lobatto IIIB takes its nodes from the IIIA partner and is not a
    # collocation method, so it opts out of the row-sum warning.
    warn_inconsistent: bool = field(default=True, compare=False)

    def __post_init__(self):
        A = np.asarray(self.A, dtype=np.float64)
        b = np.asarray(self.b, dtype=np.float64)
        c = np.asarray(self.c, dtype=np.float64)
        s = b.shape[0]
        if A.shape != (s, s) or c.shape != (s,):
            raise DimensionError(
                f"inconsistent tableau shapes A{A.shape}, b{b.shape}, c{c.shape}"
            )
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        drift = float(np.max(np.abs(c - A.sum(axis=1))))
        if drift > _CONSISTENCY_TOL and self.warn_inconsistent:
            warnings.warn(
                f"tableau '{self.name}': nodes c deviate from row sums of A "
                f"by {drift:.2e} (collocation convention violated)",
                stacklevel=2,
            )

    @property
    def stages(self) -> int:
        return self.b.shape[0]


@dataclass(frozen=True)
class PartitionedTableau:
    """A pair of tableaux; `first` drives the X stages, `second` the Y/K stages."""

    first: ButcherTableau
    second: ButcherTableau
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.first.stages != self.second.stages:
            raise DimensionError(
                f"stage-count mismatch: {self.first.stages} vs {self.second.stages}"
            )

    @property
    def stages(self) -> int:
        return self.first.stages

    def coincide(self, tol: float = 1e-14) -> bool:
        return (
            np.max(np.abs(self.first.A - self.second.A)) <= tol
            and np.max(np.abs(self.first.b - self.second.b)) <= tol
        )


def symplectic_residuals(t: ButcherTableau) -> np.ndarray:
    """Per-pair residuals r[i, j] = b_i a_ij + b_j a_ji - b_i b_j."""
    b = t.b
    return b[:, None] * t.A + (b[:, None] * t.A).T - np.outer(b, b)


def check_symplectic(t: ButcherTableau) -> float:
    """Max-abs symplecticity residual; 0 for an exactly symplectic method."""
    return float(np.max(np.abs(symplectic_residuals(t))))


def check_partitioned_symplectic(pt: PartitionedTableau) -> float:
    """Max-abs residual of the partitioned symplecticity conditions."""
    a, b = pt.first.A, pt.first.b
    ahat, bhat = pt.second.A, pt.second.b
    cross = b[:, None] * ahat + (bhat[:, None] * a).T - np.outer(b, bhat)
    weights = np.abs(bhat - b)
    return float(max(np.max(np.abs(cross)), np.max(weights)))


def gauss_legendre(s: int) -> ButcherTableau:
    """The s-stage Gauss-Legendre collocation tableau (order 2s), s in {1, 2, 3}.

    Coefficients are exact closed forms; the symplecticity condition holds to
    machine precision by construction.
    """
    r3 = math.sqrt(3.0)
    r15 = math.sqrt(15.0)
    if s == 1:
        return ButcherTableau(A=[[0.5]], b=[1.0], c=[0.5], name="gauss-legendre-1")
    if s == 2:
        return ButcherTableau(
            A=[[0.25, 0.25 - r3 / 6.0], [0.25 + r3 / 6.0, 0.25]],
            b=[0.5, 0.5],
            c=[0.5 - r3 / 6.0, 0.5 + r3 / 6.0],
            name="gauss-legendre-2",
        )
    if s == 3:
        return ButcherTableau(
            A=[
                [5.0 / 36.0, 2.0 / 9.0 - r15 / 15.0, 5.0 / 36.0 - r15 / 30.0],
                [5.0 / 36.0 + r15 / 24.0, 2.0 / 9.0, 5.0 / 36.0 - r15 / 24.0],
                [5.0 / 36.0 + r15 / 30.0, 2.0 / 9.0 + r15 / 15.0, 5.0 / 36.0],
            ],
            b=[5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0],
            c=[0.5 - r15 / 10.0, 0.5, 0.5 + r15 / 10.0],
            name="gauss-legendre-3",
        )
    raise ConfigurationError(f"gauss_legendre supports s in {{1, 2, 3}}, got {s}")


def lobatto_iiia_iiib(s: int = 2) -> PartitionedTableau:
    """The classical Lobatto IIIA-IIIB symplectic pair, s in {2, 3}."""
    if s == 2:
        iiia = ButcherTableau(
            A=[[0.0, 0.0], [0.5, 0.5]], b=[0.5, 0.5], c=[0.0, 1.0], name="lobatto-iiia-2"
        )
        iiib = ButcherTableau(
            A=[[0.5, 0.0], [0.5, 0.0]],
            b=[0.5, 0.5],
            c=[0.0, 1.0],
            name="lobatto-iiib-2",
            warn_inconsistent=False,
        )
        return PartitionedTableau(iiia, iiib, name="lobatto-iiia-iiib-2")
    if s == 3:
        iiia = ButcherTableau(
            A=[
                [0.0, 0.0, 0.0],
                [5.0 / 24.0, 1.0 / 3.0, -1.0 / 24.0],
                [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0],
            ],
            b=[1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0],
            c=[0.0, 0.5, 1.0],
            name="lobatto-iiia-3",
        )
        iiib = ButcherTableau(
            A=[
                [1.0 / 6.0, -1.0 / 6.0, 0.0],
                [1.0 / 6.0, 1.0 / 3.0, 0.0],
                [1.0 / 6.0, 5.0 / 6.0, 0.0],
            ],
            b=[1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0],
            c=[0.0, 0.5, 1.0],
            name="lobatto-iiib-3",
            warn_inconsistent=False,
        )
        return PartitionedTableau(iiia, iiib, name="lobatto-iiia-iiib-3")
    raise ConfigurationError(f"lobatto_iiia_iiib supports s in {{2, 3}}, got {s}")


def tableau_to_json(t: ButcherTableau) -> dict:
    return {
        "s": t.stages,
        "A": [[float(v) for v in row] for row in t.A],
        "b": [float(v) for v in t.b],
        "c": [float(v) for v in t.c],
    }


def tableau_from_json(obj: dict, name: str = "") -> ButcherTableau:
    t = ButcherTableau(A=obj["A"], b=obj["b"], c=obj["c"], name=name or obj.get("name", ""))
    if "s" in obj and int(obj["s"]) != t.stages:
        raise ConfigurationError(f"declared s={obj['s']} but b has {t.stages} entries")
    return t


def partitioned_to_json(pt: PartitionedTableau) -> dict:
    return {"first": tableau_to_json(pt.first), "second": tableau_to_json(pt.second)}


def partitioned_from_json(obj: dict, name: str = "") -> PartitionedTableau:
    return PartitionedTableau(
        tableau_from_json(obj["first"]), tableau_from_json(obj["second"]), name=name
    )


def load_tableau_file(path: str):
    """Load a tableau (or nested pair) from JSON, warning if not symplectic.

    Non-symplectic tableaux are accepted on purpose: running one is the
    standard negative control showing that conservation is a property of the
    method, not of the harness.  The step map's derivation assumes the
    symplectic condition, so expect drifting invariants.
    """
    with open(path) as fh:
        obj = json.load(fh)
    if "first" in obj:
        pt = partitioned_from_json(obj, name=str(path))
        residual = check_partitioned_symplectic(pt)
        if residual > 1e-12:
            warnings.warn(
                f"partitioned tableau {path}: symplecticity residual {residual:.2e}; "
                "structure preservation is not guaranteed"
            )
        return pt
    t = tableau_from_json(obj, name=str(path))
    residual = check_symplectic(t)
    if residual > 1e-12:
        warnings.warn(
            f"tableau {path}: symplecticity residual {residual:.2e}; "
            "structure preservation is not guaranteed"
        )
    return t
