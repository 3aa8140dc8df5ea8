"""Spectrum-preserving implicit Runge-Kutta step maps for dW/dt = [B(W), W].

Applying a symplectic Runge-Kutta method naively to a matrix commutator flow
does not preserve the spectrum of W.  The step maps here solve instead a
coupled stage system in auxiliary unknowns X_i, Y_i, K_ij (s matrices, s
matrices, and an s x s grid of matrices), from which the update is assembled:

    X_i  = -(W + sum_j a_ij X_j) h B(Wt_i)
    Y_i  =  h B(Wt_i) (W + sum_j a_ij Y_j)
    K_ij =  h B(Wt_j) sum_j' (a_ij' X_j' + a_jj' K_ij')
    Wt_i =  W + sum_j a_ij (X_j + Y_j + K_ij)
    W'   =  W + sum_i b_i [h B(Wt_i), Wt_i]

(Note the stage index on B in the K equation: K_ij descends from the
transposed j-th stage of the underlying cotangent-space method, so its B
factor is evaluated at Wt_j.  Only this indexing makes the map exactly
isospectral for s >= 2; it is invisible for the one-stage midpoint.)

For a tableau satisfying the symplecticity condition (see
:mod:`isoflow.tableaux`) the resulting map conserves every Tr(W^p) to the
accuracy of the stage solve, and is a Poisson integrator when B is a
Hamiltonian gradient.

Three variants are provided.  ``general`` solves the full system above and
works on gl(n, C) or sl(n, C).  When the state lives in a quadratic algebra
{W : W^H J + J W = 0} (e.g. skew-symmetric or skew-Hermitian matrices), the
Y unknowns collapse to Y_i = -J^-1 X_i^H J and the update

    W' = W + sum_i b_i (X_i - J^-1 X_i^H J + K_ii - J^-1 K_ii^H J)

stays on the algebra exactly; that is the ``j_quadratic`` variant.  The
``complement`` variant covers states in the orthogonal complement of such an
algebra (symmetric or Hermitian matrices) with Y_i = +J^-1 X_i^H J and plus
signs in the update.

During the iteration the stage states Wt_i drift off the invariant subspace
at order h; restricted variants therefore evaluate B on the orthogonal
projection of Wt_i, which extends B constantly along complement directions.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ConvergenceError
from .linalg import as_matrix, frobenius_norm
from .subspaces import _validate_involution_j
from .tableaux import ButcherTableau, PartitionedTableau, check_partitioned_symplectic
from .trajectory import TrajectoryRecord

__all__ = [
    "SchemeVariant",
    "general",
    "j_quadratic",
    "complement",
    "SolverConfig",
    "StageSet",
    "solve_stages",
    "rk_step",
    "prk_step",
    "product_step",
    "integrate",
]

_MEMBERSHIP_TOL = 1e-10


class SchemeVariant:
    """Which stage system to solve; restricted kinds carry the defining J."""

    def __init__(self, kind: str, j=None):
        if kind not in ("general", "j-quadratic", "complement"):
            raise ConfigurationError(f"unknown variant kind '{kind}'")
        self.kind = kind
        if kind == "general":
            self.j = None
            self.c = None
            self._j_inv = None
        else:
            j = as_matrix(j)
            self.c = _validate_involution_j(j)
            self.j = j
            self._j_inv = j / self.c

    def sigma(self, x: np.ndarray) -> np.ndarray:
        """J^-1 X^H J applied along the last two axes."""
        return self._j_inv @ np.conj(np.swapaxes(x, -1, -2)) @ self.j

    @property
    def restricted(self) -> bool:
        return self.kind != "general"

    @property
    def y_sign(self) -> float:
        # Y_i = y_sign * sigma(X_i) on the restricted variants
        return -1.0 if self.kind == "j-quadratic" else 1.0

    def __repr__(self):
        return f"SchemeVariant({self.kind!r}, n={None if self.j is None else self.j.shape[0]})"


def general() -> SchemeVariant:
    return SchemeVariant("general")


def j_quadratic(j) -> SchemeVariant:
    return SchemeVariant("j-quadratic", j)


def complement(j) -> SchemeVariant:
    return SchemeVariant("complement", j)


@dataclass(frozen=True)
class SolverConfig:
    """Stage solver settings.

    The residual metric is the maximum Frobenius norm over all stage
    equations; it is an absolute tolerance since states are O(1) in every
    shipped experiment.  ``newton`` solves the vectorised stage system with a
    forward-difference Jacobian and is intended for small, stiff systems; the
    derivative-free fixed point is the default and is sufficient at the step
    sizes used here.
    """

    method: str = "fixed-point"
    abs_tol: float = 1e-13
    max_iter: int = 100

    def __post_init__(self):
        if self.method not in ("fixed-point", "newton"):
            raise ConfigurationError(f"unknown solver method '{self.method}'")
        if not self.abs_tol > 0:
            raise ConfigurationError("abs_tol must be positive")
        if self.max_iter < 1:
            raise ConfigurationError("max_iter must be >= 1")


@dataclass
class StageSet:
    """Solved stage unknowns; residual certifies the defining equations."""

    x: np.ndarray
    y: np.ndarray
    k: np.ndarray
    wtilde: np.ndarray
    iterations: int
    residual: float


def _b_evaluator(flow, variant: SchemeVariant):
    """B composed with the subspace projector on restricted variants."""
    if variant.restricted and getattr(flow, "subspace", None) is not None:
        project = flow.subspace.project
        return lambda w: flow.b(project(w))
    return flow.b


def _check_membership(flow, w, what="state"):
    subspace = getattr(flow, "subspace", None)
    if subspace is None:
        return
    residual = subspace.membership(w)
    if residual > _MEMBERSHIP_TOL * max(1.0, frobenius_norm(w)):
        raise ConfigurationError(
            f"{what} is off the declared subspace ({subspace.describe()}): "
            f"residual {residual:.2e}"
        )


def _block_norms(*arrays) -> float:
    """Max Frobenius norm over stage matrices stacked in leading axes."""
    worst = 0.0
    with np.errstate(over="ignore", invalid="ignore"):
        for arr in arrays:
            if arr is None or arr.size == 0:
                continue
            flat = arr.reshape(-1, arr.shape[-2], arr.shape[-1])
            worst = max(worst, float(np.max(np.sqrt(np.sum(np.abs(flat) ** 2, axis=(1, 2))))))
    return worst


def _sweep_general(w, h, a, ahat, beval, x, y, k):
    """One pass of the full stage system; returns residual and refreshed values.

    ``a`` weights the X stages, ``ahat`` the Y and the second K index; they
    coincide for a plain (non-partitioned) method.
    """
    wt = (
        w
        + np.einsum("ij,jmn->imn", a, x)
        + np.einsum("ij,jmn->imn", ahat, y)
        + np.einsum("ij,ijmn->imn", ahat, k)
    )
    bv = np.stack([beval(wt[i]) for i in range(a.shape[0])])
    hb = h * bv
    new_x = -np.matmul(w + np.einsum("ij,jmn->imn", a, x), hb)
    new_y = np.matmul(hb, w + np.einsum("ij,jmn->imn", ahat, y))
    inner = np.einsum("ij,jmn->imn", a, x)[:, None] + np.einsum("jp,ipmn->ijmn", ahat, k)
    new_k = np.einsum("jmn,ijnp->ijmp", hb, inner)
    residual = _block_norms(x - new_x, y - new_y, k - new_k)
    return residual, new_x, new_y, new_k


def _sweep_restricted(w, h, a, beval, variant, x, k):
    """One pass with Y synthesised as y_sign * J^-1 X^H J."""
    y = variant.y_sign * variant.sigma(x)
    wt = (
        w
        + np.einsum("ij,jmn->imn", a, x + y)
        + np.einsum("ij,ijmn->imn", a, k)
    )
    bv = np.stack([beval(wt[i]) for i in range(a.shape[0])])
    hb = h * bv
    new_x = -np.matmul(w + np.einsum("ij,jmn->imn", a, x), hb)
    inner = np.einsum("ij,jmn->imn", a, x)[:, None] + np.einsum("jp,ipmn->ijmn", a, k)
    new_k = np.einsum("jmn,ijnp->ijmp", hb, inner)
    residual = _block_norms(x - new_x, k - new_k)
    return residual, new_x, new_k


def _assemble_wtilde(w, a, ahat, x, y, k):
    return (
        w
        + np.einsum("ij,jmn->imn", a, x)
        + np.einsum("ij,jmn->imn", ahat, y)
        + np.einsum("ij,ijmn->imn", ahat, k)
    )


def _fixed_point(sweep, unknowns, cfg: SolverConfig):
    """Iterate ``sweep`` until the stage residual drops below tolerance.

    Returns the freshly swept values (whose own residual is contracted below
    the certified one) plus the iteration count and certified residual.
    """
    residual = np.inf
    for iteration in range(cfg.max_iter):
        out = sweep(*unknowns)
        residual, new = out[0], out[1:]
        if not np.isfinite(residual):
            raise ConvergenceError(
                f"stage iteration diverged after {iteration} sweeps", residual=residual
            )
        if residual <= cfg.abs_tol:
            return new, iteration, residual
        unknowns = new
    raise ConvergenceError(
        f"stage iteration did not reach {cfg.abs_tol:.1e} within "
        f"{cfg.max_iter} sweeps (last residual {residual:.2e})",
        residual=residual,
    )


def _pack(arrays):
    return np.concatenate([np.ascontiguousarray(a).view(np.float64).ravel() for a in arrays])


def _unpack(vec, templates):
    out = []
    offset = 0
    for t in templates:
        size = t.size * 2
        chunk = vec[offset : offset + size]
        out.append(chunk.view(np.complex128).reshape(t.shape).copy())
        offset += size
    return tuple(out)


def _newton(sweep, unknowns, cfg: SolverConfig):
    """Newton on the vectorised stage system, forward-difference Jacobian.

    Cost grows with the square of the unknown count, so this is only suited
    to modest stage counts and dimensions.  A singular Jacobian falls back to
    fixed-point iteration with a warning.
    """
    templates = [u for u in unknowns]

    def residual_vector(vec):
        current = _unpack(vec, templates)
        out = sweep(*current)
        new = out[1:]
        return out[0], _pack([c - n for c, n in zip(current, new)])

    u = _pack(unknowns)
    dim = u.size
    residual = np.inf
    for iteration in range(cfg.max_iter):
        residual, f = residual_vector(u)
        if residual <= cfg.abs_tol:
            return _unpack(u, templates), iteration, residual
        jac = np.empty((dim, dim))
        base = f
        for col in range(dim):
            eps = 1.4901161193847656e-08 * max(1.0, abs(u[col]))
            probe = u.copy()
            probe[col] += eps
            _, f_probe = residual_vector(probe)
            jac[:, col] = (f_probe - base) / eps
        try:
            delta = np.linalg.solve(jac, f)
        except np.linalg.LinAlgError:
            warnings.warn("singular Newton system; falling back to fixed-point iteration")
            zeros = tuple(np.zeros_like(t) for t in templates)
            return _fixed_point(sweep, zeros, cfg)
        u = u - delta
    raise ConvergenceError(
        f"Newton did not reach {cfg.abs_tol:.1e} within {cfg.max_iter} iterations "
        f"(last residual {residual:.2e})",
        residual=residual,
    )


def _solve(sweep, zeros, cfg):
    if cfg.method == "newton":
        return _newton(sweep, zeros, cfg)
    return _fixed_point(sweep, zeros, cfg)


def solve_stages(
    flow,
    tableau: ButcherTableau,
    w: np.ndarray,
    h: float,
    variant: SchemeVariant | None = None,
    cfg: SolverConfig | None = None,
) -> StageSet:
    """Solve the stage system for one step from ``w``.

    ``h = 0`` is accepted (all stages vanish); ``h > 0`` otherwise.  On
    restricted variants the state must lie on the flow's declared subspace.
    """
    variant = variant if variant is not None else getattr(flow, "variant", None) or general()
    cfg = cfg or SolverConfig()
    w = as_matrix(w)
    if h < 0:
        raise ConfigurationError("step size must be nonnegative")
    if variant.restricted:
        _check_membership(flow, w)
    s = tableau.stages
    n = w.shape[0]
    a = tableau.A
    beval = _b_evaluator(flow, variant)
    zero_s = np.zeros((s, n, n), dtype=np.complex128)
    zero_k = np.zeros((s, s, n, n), dtype=np.complex128)

    if variant.restricted:
        sweep = lambda x, k: _sweep_restricted(w, h, a, beval, variant, x, k)
        (x, k), iterations, residual = _solve(sweep, (zero_s, zero_k), cfg)
        y = variant.y_sign * variant.sigma(x)
    else:
        sweep = lambda x, y, k: _sweep_general(w, h, a, a, beval, x, y, k)
        (x, y, k), iterations, residual = _solve(sweep, (zero_s, zero_s, zero_k), cfg)
    wtilde = _assemble_wtilde(w, a, a, x, y, k)
    return StageSet(x=x, y=y, k=k, wtilde=wtilde, iterations=iterations, residual=residual)


def _rk_update(flow, tableau, w, h, variant, stages: StageSet):
    b = tableau.b
    if variant.restricted:
        diag_k = stages.k[np.arange(tableau.stages), np.arange(tableau.stages)]
        sign = variant.y_sign
        terms = stages.x + sign * variant.sigma(stages.x) + diag_k + sign * variant.sigma(diag_k)
        return w + np.einsum("i,imn->mn", b, terms)
    beval = _b_evaluator(flow, variant)
    bv = np.stack([beval(stages.wtilde[i]) for i in range(tableau.stages)])
    hb = h * bv
    comm = np.matmul(hb, stages.wtilde) - np.matmul(stages.wtilde, hb)
    return w + np.einsum("i,imn->mn", b, comm)


def _rk_step_info(flow, tableau, w, h, variant=None, cfg=None):
    variant = variant if variant is not None else getattr(flow, "variant", None) or general()
    stages = solve_stages(flow, tableau, w, h, variant, cfg)
    return _rk_update(flow, tableau, as_matrix(w), h, variant, stages), stages


def rk_step(
    flow,
    tableau: ButcherTableau,
    w: np.ndarray,
    h: float,
    variant: SchemeVariant | None = None,
    cfg: SolverConfig | None = None,
) -> np.ndarray:
    """One spectrum-preserving step; returns the updated state.

    Trace powers of the result match those of ``w`` up to the solver
    tolerance; restricted variants also return a state on the declared
    subspace (exactly in exact arithmetic).
    """
    w1, _ = _rk_step_info(flow, tableau, w, h, variant, cfg)
    return w1


def _prk_step_info(flow, pt: PartitionedTableau, w, h, cfg=None):
    residual = check_partitioned_symplectic(pt)
    if residual > 1e-12:
        raise ConfigurationError(
            f"partitioned tableau fails the symplecticity conditions (residual {residual:.2e})"
        )
    variant = getattr(flow, "variant", None) or general()
    if variant.restricted and not pt.coincide():
        raise ConfigurationError(
            "flows on a quadratic algebra or its complement require coinciding "
            "partitioned tableaux; this pair differs"
        )
    cfg = cfg or SolverConfig()
    w = as_matrix(w)
    if variant.restricted:
        _check_membership(flow, w)
    a, ahat = pt.first.A, pt.second.A
    b = pt.first.b
    s = pt.stages
    n = w.shape[0]
    beval = _b_evaluator(flow, variant)
    zero_s = np.zeros((s, n, n), dtype=np.complex128)
    zero_k = np.zeros((s, s, n, n), dtype=np.complex128)
    sweep = lambda x, y, k: _sweep_general(w, h, a, ahat, beval, x, y, k)
    (x, y, k), iterations, residual = _solve(sweep, (zero_s, zero_s, zero_k), cfg)
    wtilde = _assemble_wtilde(w, a, ahat, x, y, k)
    bv = np.stack([beval(wtilde[i]) for i in range(s)])
    hb = h * bv
    comm = np.matmul(hb, wtilde) - np.matmul(wtilde, hb)
    w1 = w + np.einsum("i,imn->mn", b, comm)
    return w1, StageSet(x=x, y=y, k=k, wtilde=wtilde, iterations=iterations, residual=residual)


def prk_step(
    flow,
    pt: PartitionedTableau,
    w: np.ndarray,
    h: float,
    cfg: SolverConfig | None = None,
) -> np.ndarray:
    """One partitioned-tableau step (same isospectrality contract as rk_step).

    Flows declaring a quadratic-algebra or complement subspace only admit
    coinciding tableaux; other pairs are rejected at configuration time
    because subspace preservation provably fails for them.
    """
    w1, _ = _prk_step_info(flow, pt, w, h, cfg)
    return w1


# -- direct products ---------------------------------------------------------


def _product_sweep(flow, ws, h, a, variants, projections, xs, ks):
    s = a.shape[0]
    wts = []
    for m, w in enumerate(ws):
        y = variants[m].y_sign * variants[m].sigma(xs[m])
        wts.append(
            w
            + np.einsum("ij,jmn->imn", a, xs[m] + y)
            + np.einsum("ij,ijmn->imn", a, ks[m])
        )
    bvals = [flow.b(tuple(projections[m](wts[m][i]) for m in range(len(ws)))) for i in range(s)]
    residual = 0.0
    new_xs, new_ks = [], []
    for m, w in enumerate(ws):
        hb = h * np.stack([bvals[i][m] for i in range(s)])
        new_x = -np.matmul(w + np.einsum("ij,jmn->imn", a, xs[m]), hb)
        inner = np.einsum("ij,jmn->imn", a, xs[m])[:, None] + np.einsum(
            "jp,ipmn->ijmn", a, ks[m]
        )
        new_k = np.einsum("jmn,ijnp->ijmp", hb, inner)
        residual = max(residual, _block_norms(xs[m] - new_x, ks[m] - new_k))
        new_xs.append(new_x)
        new_ks.append(new_k)
    return residual, new_xs, new_ks


def product_step(
    flow,
    tableau: ButcherTableau,
    ws,
    h: float,
    cfg: SolverConfig | None = None,
):
    """One step of a direct-product flow; componentwise stage systems coupled
    through B, equivalent to a step on the block-diagonal embedding.

    Components are kept as a tuple of small matrices rather than one block
    matrix so the cost stays cubic in the component size, not in the total.
    """
    cfg = cfg or SolverConfig()
    ws = tuple(as_matrix(w) for w in ws)
    if len(ws) != len(flow.components):
        raise ConfigurationError(
            f"expected {len(flow.components)} component states, got {len(ws)}"
        )
    for m, (w, sub) in enumerate(zip(ws, flow.components)):
        residual = sub.membership(w)
        if residual > _MEMBERSHIP_TOL * max(1.0, frobenius_norm(w)):
            raise ConfigurationError(
                f"component {m} is off its declared subspace: residual {residual:.2e}"
            )
    w1, _ = _product_step_info(flow, tableau, ws, h, cfg)
    return w1


def _product_step_info(flow, tableau, ws, h, cfg):
    a, b = tableau.A, tableau.b
    s = tableau.stages
    variants = flow.component_variants
    projections = [sub.project for sub in flow.components]
    xs = [np.zeros((s, w.shape[0], w.shape[0]), dtype=np.complex128) for w in ws]
    ks = [np.zeros((s, s, w.shape[0], w.shape[0]), dtype=np.complex128) for w in ws]

    def sweep(xs_, ks_):
        return _product_sweep(flow, ws, h, a, variants, projections, xs_, ks_)

    # fixed point over list-of-arrays unknowns
    residual = np.inf
    iterations = 0
    for iteration in range(cfg.max_iter):
        residual, new_xs, new_ks = sweep(xs, ks)
        if not np.isfinite(residual):
            raise ConvergenceError("product stage iteration diverged", residual=residual)
        if residual <= cfg.abs_tol:
            iterations = iteration
            xs, ks = new_xs, new_ks
            break
        xs, ks = new_xs, new_ks
    else:
        raise ConvergenceError(
            f"product stage iteration did not converge (last residual {residual:.2e})",
            residual=residual,
        )

    out = []
    for m, w in enumerate(ws):
        sign = variants[m].y_sign
        diag_k = ks[m][np.arange(s), np.arange(s)]
        terms = xs[m] + sign * variants[m].sigma(xs[m]) + diag_k + sign * variants[m].sigma(diag_k)
        out.append(w + np.einsum("i,imn->mn", b, terms))
    return tuple(out), iterations


# -- trajectory driver -------------------------------------------------------


def _monitor_recorders(flow, monitors, is_product):
    from . import flows as _flows  # deferred: flows imports this module

    recorders = {}
    for name in monitors:
        if name == "trace-powers":
            if is_product:
                pmax = min(min(s.n for s in flow.components), 6)
                recorders[name] = lambda ws, info, p=pmax: np.stack(
                    [_trace_powers_of(w, p) for w in ws]
                )
            else:
                pmax = min(flow.n, 6)
                recorders[name] = lambda w, info, p=pmax: _trace_powers_of(w, p)
        elif name == "hamiltonian":
            if getattr(flow, "hamiltonian", None) is None:
                raise ConfigurationError(
                    f"flow '{getattr(flow, 'name', '?')}' has no Hamiltonian to monitor"
                )
            recorders[name] = lambda w, info: float(flow.hamiltonian(w))
        elif name == "momentum":
            if not is_product:
                raise ConfigurationError("momentum monitor applies to product flows only")
            strengths = np.asarray(flow.strengths, dtype=np.float64)
            recorders[name] = lambda ws, info: _flows.momentum_vector(ws, strengths)
        elif name == "subspace-residual":
            if is_product:
                recorders[name] = lambda ws, info: max(
                    s.membership(w) for s, w in zip(flow.components, ws)
                )
            else:
                recorders[name] = lambda w, info: flow.subspace.membership(w)
        elif name == "iterations":
            recorders[name] = lambda w, info: info
        else:
            raise ConfigurationError(f"unknown monitor '{name}'")
    return recorders


def _trace_powers_of(w, pmax):
    from .linalg import trace_powers

    return trace_powers(w, pmax)


def integrate(
    flow,
    scheme,
    w0,
    h: float,
    nsteps: int,
    monitors=(),
    variant: SchemeVariant | None = None,
    cfg: SolverConfig | None = None,
    stride: int = 1,
) -> TrajectoryRecord:
    """Drive ``nsteps`` uniform steps and record states plus monitor series.

    ``scheme`` is a ButcherTableau or a PartitionedTableau (single-matrix
    flows only).  A failure on the very first step raises; a later failure
    returns the integrated prefix with ``complete=False``.  The run is fully
    deterministic for a fixed configuration.
    """
    cfg = cfg or SolverConfig()
    if nsteps < 0:
        raise ConfigurationError("nsteps must be >= 0")
    if nsteps > 0 and not h > 0:
        raise ConfigurationError("step size h must be positive")
    if stride < 1 or (nsteps > 0 and nsteps % stride != 0):
        raise ConfigurationError("stride must be >= 1 and divide nsteps")

    is_product = hasattr(flow, "components")
    if is_product:
        if isinstance(scheme, PartitionedTableau):
            raise ConfigurationError("partitioned tableaux are not supported on product flows")
        w = tuple(as_matrix(x) for x in w0)
        for m, (x, sub) in enumerate(zip(w, flow.components)):
            residual = sub.membership(x)
            if residual > _MEMBERSHIP_TOL * max(1.0, frobenius_norm(x)):
                raise ConfigurationError(
                    f"initial component {m} off its subspace: residual {residual:.2e}"
                )
        stepper = lambda state: _product_step_info(flow, scheme, state, h, cfg)
    else:
        w = as_matrix(w0)
        effective = variant if variant is not None else getattr(flow, "variant", None) or general()
        if effective.restricted:
            _check_membership(flow, w, what="initial state")
        if isinstance(scheme, PartitionedTableau):
            stepper = lambda state: _with_iterations(_prk_step_info(flow, scheme, state, h, cfg))
        else:
            stepper = lambda state: _with_iterations(
                _rk_step_info(flow, scheme, state, h, variant=effective, cfg=cfg)
            )

    recorders = _monitor_recorders(flow, monitors, is_product)
    times = [0.0]
    states = [w]
    series = {name: [rec(w, 0)] for name, rec in recorders.items()}
    complete = True
    for step in range(1, nsteps + 1):
        try:
            w, iterations = stepper(w)
        except ConvergenceError as exc:
            if step == 1:
                raise ConvergenceError(f"first step failed: {exc}", residual=exc.residual)
            warnings.warn(f"solver failed at step {step}; returning partial trajectory")
            complete = False
            break
        if step % stride == 0:
            times.append(step * h)
            states.append(w)
            for name, rec in recorders.items():
                series[name].append(rec(w, iterations))
    monitors_out = {name: np.asarray(vals) for name, vals in series.items()}
    return TrajectoryRecord(
        times=np.asarray(times),
        states=states,
        monitors=monitors_out,
        complete=complete,
        h=h * stride,
        flow_name=getattr(flow, "name", ""),
    )


def _with_iterations(result):
    w1, stages = result
    return w1, stages.iterations
