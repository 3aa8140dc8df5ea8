"""Catalogue of concrete matrix flows dW/dt = [B(W), W].

Each constructor returns a :class:`FlowDefinition` bundling the map B, an
optional Hamiltonian for monitoring, the invariant subspace the state lives
on, and the natural integrator variant.  Hamiltonian flows satisfy
B(W) = grad H(W)^H on the subspace, so the commutator flow is the
Lie-Poisson dynamics of H; that identity is what the finite-difference
gradient tests in the suite verify.

Presets carry the initial data used by the long-run conservation
experiments, addressable by name (see :data:`PRESET_NAMES`).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ConfigurationError, SingularityError
from .integrators import SchemeVariant, complement, general, j_quadratic
from .linalg import as_matrix, frobenius_norm
from .rng import SplitMix64, random_hermitian
from .subspaces import (
    Centrosymmetric,
    SubspaceDescriptor,
    SymmetricReal,
    hermitian,
    so_n,
    su_n,
    symmetric_centrosymmetric,
)

__all__ = [
    "FlowDefinition",
    "ProductFlowDefinition",
    "rigid_body_flow",
    "toda_flow",
    "bloch_iserles_flow",
    "chu_flow",
    "brockett_flow",
    "point_vortex_flow",
    "heisenberg_chain_flow",
    "project_subspace",
    "vector_to_su2",
    "su2_to_vector",
    "momentum_vector",
    "preset",
    "list_presets",
    "PRESET_NAMES",
]


@dataclass
class FlowDefinition:
    """A single-matrix flow: state dimension, B map, and its structure."""

    name: str
    n: int
    b: Callable[[np.ndarray], np.ndarray]
    subspace: SubspaceDescriptor
    variant: SchemeVariant
    hamiltonian: Optional[Callable[[np.ndarray], float]] = None
    initial_state: Optional[np.ndarray] = None


@dataclass
class ProductFlowDefinition:
    """A flow on a direct product; B takes and returns tuples of matrices.

    ``strengths`` are the weights of the conserved spin sum
    M = sum_i strengths[i] * W_i; each component map is
    B_i = (1/strengths[i]) * grad_{W_i} H^H so that M is conserved stage by
    stage, not just on average.
    """

    name: str
    components: list
    b: Callable
    component_variants: list = field(default_factory=list)
    hamiltonian: Optional[Callable] = None
    strengths: Optional[np.ndarray] = None
    initial_state: Optional[tuple] = None

    def __post_init__(self):
        if not self.component_variants:
            self.component_variants = [
                j_quadratic(np.eye(sub.n)) for sub in self.components
            ]
        if self.strengths is None:
            self.strengths = np.ones(len(self.components))
        self.strengths = np.asarray(self.strengths, dtype=np.float64)


def project_subspace(w: np.ndarray, subspace: SubspaceDescriptor) -> np.ndarray:
    """Orthogonal projection of ``w`` onto the subspace."""
    return subspace.project(w)


# -- generalized rigid body ---------------------------------------------------


def rigid_body_flow(n: int = 10, inertia_diagonal: Sequence[float] | None = None) -> FlowDefinition:
    """Free rigid body on the skew-symmetric matrices so(n).

    The inertia acts entrywise, scaling row i by ``inertia_diagonal[i]``.
    Since plain row scaling does not map so(n) to itself, the Hamiltonian
    H(W) = 0.5 * <inv_inertia(W), W> is extended constantly along directions
    orthogonal to so(n); its gradient flow uses the symmetrised weights
    m_ij = (1/d_i + 1/d_j) / 2, giving B(W) = -m * W entrywise on so(n).
    On so(n) this is exactly the skew projection of the row-scaled flow.
    """
    d = np.arange(1.0, n + 1.0) if inertia_diagonal is None else np.asarray(
        inertia_diagonal, dtype=np.float64
    )
    if d.shape != (n,):
        raise ConfigurationError(f"inertia diagonal must have length {n}")
    if np.any(d <= 0):
        raise ConfigurationError("inertia must be symmetric positive definite (all d_i > 0)")
    weights = 0.5 * (1.0 / d[:, None] + 1.0 / d[None, :])
    subspace = so_n(n)

    def b(w):
        a = subspace.project(w)
        return -(weights * a)

    def hamiltonian(w):
        a = subspace.project(w).real
        return float(0.5 * np.sum(weights * a * a))

    w0 = np.triu(np.full((n, n), 0.1), k=1)
    w0 = (w0 - w0.T).astype(np.complex128)
    return FlowDefinition(
        name=f"rigid-body-{n}",
        n=n,
        b=b,
        subspace=subspace,
        variant=j_quadratic(np.eye(n)),
        hamiltonian=hamiltonian,
        initial_state=w0,
    )


# -- periodic Toda lattice ----------------------------------------------------


def _toda_b(w: np.ndarray) -> np.ndarray:
    n = w.shape[0]
    out = np.zeros_like(w)
    idx = np.arange(n - 1)
    out[idx, idx + 1] = w[idx, idx + 1]
    out[idx + 1, idx] = -w[idx + 1, idx]
    out[0, n - 1] = -w[0, n - 1]
    out[n - 1, 0] = w[n - 1, 0]
    return out


def toda_flow(n: int = 4) -> FlowDefinition:
    """Periodic Toda lattice in Lax form on the real symmetric matrices.

    B keeps the superdiagonal, negates the subdiagonal, and carries the
    periodic coupling in the corners; it is skew for symmetric input.  The
    monitored Hamiltonian -0.5 Tr(W^H B(W)) + 2 Tr(W^2) generates this flow;
    on the symmetric matrices its first term vanishes and the second is a
    spectral invariant, so the monitor doubles as a conservation check.
    """
    if n < 3:
        raise ConfigurationError("periodic Toda needs n >= 3 (band and corner collide)")

    def hamiltonian(w):
        w = as_matrix(w)
        value = -0.5 * np.trace(w.conj().T @ _toda_b(w)) + 2.0 * np.trace(w @ w)
        return float(value.real)

    a = np.array([(-1.0) ** i for i in range(1, n + 1)])
    bvals = np.array([(-1.0) ** i for i in range(1, n + 1)])
    w0 = np.diag(a)
    for k in range(n - 1):
        w0[k, k + 1] = w0[k + 1, k] = bvals[k]
    w0[0, n - 1] = w0[n - 1, 0] = bvals[n - 1]
    return FlowDefinition(
        name=f"toda-{n}",
        n=n,
        b=_toda_b,
        subspace=SymmetricReal(n),
        variant=complement(np.eye(n)),
        hamiltonian=hamiltonian,
        initial_state=w0.astype(np.complex128),
    )


# -- Bloch-Iserles flow -------------------------------------------------------


def bloch_iserles_flow(n_matrix: np.ndarray) -> FlowDefinition:
    """Flow dW/dt = [W^2, N] on symmetric matrices, with B(W) = -(NW + WN).

    Expanding the commutator shows [-(NW + WN), W] = [W^2, N] exactly.  N
    must be real skew-symmetric.  The Hamiltonian -Tr(W^2 N) vanishes on the
    symmetric matrices; its transverse gradient is what drives the dynamics.
    """
    nm = as_matrix(n_matrix)
    size = nm.shape[0]
    if frobenius_norm(nm.imag) > 1e-12 or frobenius_norm(nm + nm.T) > 1e-12 * max(
        1.0, frobenius_norm(nm)
    ):
        raise ConfigurationError("Bloch-Iserles N must be real skew-symmetric")

    def b(w):
        w = as_matrix(w)
        return -(nm @ w + w @ nm)

    def hamiltonian(w):
        w = as_matrix(w)
        return float(-np.trace(w @ w @ nm).real)

    return FlowDefinition(
        name=f"bloch-iserles-{size}",
        n=size,
        b=b,
        subspace=SymmetricReal(size),
        variant=complement(np.eye(size)),
        hamiltonian=hamiltonian,
    )


def bloch_iserles_preset() -> FlowDefinition:
    nm = (1.0 / math.sqrt(2.0)) * np.array(
        [[0.0, 1.0, 0.0], [-1.0, 0.0, 1.0], [0.0, -1.0, 0.0]]
    )
    flow = bloch_iserles_flow(nm)
    flow.initial_state = np.array(
        [
            [0.0163, 0.3928, 0.2415],
            [0.3928, 0.1501, 0.3443],
            [0.2415, 0.3443, 0.6603],
        ],
        dtype=np.complex128,
    )
    return flow


# -- Chu's flow (Toeplitz inverse eigenvalue problem) --------------------------


def _chu_b(w: np.ndarray) -> np.ndarray:
    """Shifted-difference pattern: entries compare adjacent diagonals.

    For i < j:  B_ij = W[i, j-1] - W[i+1, j]; for i > j the mirror
    B_ij = W[i, j+1] - W[i-1, j]; zero diagonal.  Symmetric Toeplitz
    matrices (constant diagonals) are exactly its kernel.
    """
    n = w.shape[0]
    s1 = np.zeros_like(w)
    s1[:, 1:] = w[:, :-1]
    s2 = np.zeros_like(w)
    s2[: n - 1, :] = w[1:, :]
    s3 = np.zeros_like(w)
    s3[:, : n - 1] = w[:, 1:]
    s4 = np.zeros_like(w)
    s4[1:, :] = w[: n - 1, :]
    return np.triu(s1 - s2, k=1) + np.tril(s3 - s4, k=-1)


def chu_flow(n: int = 4, force_centro: bool = False) -> FlowDefinition:
    """Chu's isospectral flow on symmetric matrices.

    Fixed points are symmetric Toeplitz matrices.  With ``force_centro`` the
    state is restricted to the symmetric-centrosymmetric matrices and B is
    evaluated on that restriction, which keeps the flow's periodic orbits
    instead of letting rounding noise collapse them onto fixed points.
    """
    if n < 2:
        raise ConfigurationError("chu flow needs n >= 2")
    subspace = symmetric_centrosymmetric(n) if force_centro else SymmetricReal(n)
    name = f"chu-{n}-centro" if force_centro else f"chu-{n}"
    return FlowDefinition(
        name=name,
        n=n,
        b=_chu_b,
        subspace=subspace,
        variant=complement(np.eye(n)),
        hamiltonian=None,
    )


def chu_preset(force_centro: bool) -> FlowDefinition:
    flow = chu_flow(4, force_centro=force_centro)
    flow.initial_state = np.array(
        [
            [0.1336, 0.0, 0.0, 0.5669],
            [0.0, -0.1336, 0.378, 0.0],
            [0.0, 0.378, -0.1336, 0.0],
            [0.5669, 0.0, 0.0, 0.1336],
        ],
        dtype=np.complex128,
    )
    return flow


# -- Brockett double-bracket flow ----------------------------------------------


BROCKETT_SEED = 11


def brockett_flow(n_matrix: np.ndarray) -> FlowDefinition:
    """Double-bracket flow dW/dt = [[N, W], W] on Hermitian matrices.

    B(W) = [N, W] is skew-Hermitian for Hermitian W.  Not Hamiltonian in
    this formulation; for diagonal N with distinct entries the flow sorts
    the spectrum of W onto the diagonal.
    """
    nm = as_matrix(n_matrix)
    size = nm.shape[0]
    if frobenius_norm(nm - nm.conj().T) > 1e-12 * max(1.0, frobenius_norm(nm)):
        raise ConfigurationError("Brockett N must be self-adjoint")

    def b(w):
        w = as_matrix(w)
        return nm @ w - w @ nm

    return FlowDefinition(
        name=f"brockett-{size}",
        n=size,
        b=b,
        subspace=hermitian(size),
        variant=complement(np.eye(size)),
        hamiltonian=None,
    )


def brockett_preset(seed: int = BROCKETT_SEED) -> FlowDefinition:
    flow = brockett_flow(np.diag([1.0, 2.0, 3.0]))
    flow.initial_state = random_hermitian(3, SplitMix64(seed))
    return flow


# -- su(2) products: point vortices and the Heisenberg chain -------------------

_SIGMA = [
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
]


def vector_to_su2(x: Sequence[float]) -> np.ndarray:
    """Identify x in R^3 with -(i/2) (x1 s1 + x2 s2 + x3 s3) in su(2).

    Under this map the commutator realises the cross product:
    [vec(x), vec(y)] = vec(x cross y), and |vec(x)|_F^2 = |x|^2 / 2.
    """
    x = np.asarray(x, dtype=np.float64)
    return (-0.5j) * (x[0] * _SIGMA[0] + x[1] * _SIGMA[1] + x[2] * _SIGMA[2])


def su2_to_vector(w: np.ndarray) -> np.ndarray:
    w = as_matrix(w)
    return np.array([float((1j * np.trace(w @ s)).real) for s in _SIGMA])


def momentum_vector(ws, strengths) -> np.ndarray:
    """Components of the weighted spin sum sum_i strengths[i] W_i."""
    total = sum(g * w for g, w in zip(strengths, ws))
    return su2_to_vector(total)


def point_vortex_flow(
    strengths: Sequence[float], positions: Sequence[Sequence[float]] | None = None
) -> ProductFlowDefinition:
    """Point vortices on the sphere as a flow on a product of su(2) copies.

    The interaction potential is logarithmic in the normalised chordal
    distance 1 - <W_i, W_j> / (|W_i| |W_j|), which for unit position vectors
    equals 1 - cos(angle between vortices).  Evaluation at (near-)coincident
    vortices raises :class:`SingularityError`.
    """
    gammas = np.asarray(strengths, dtype=np.float64)
    count = gammas.shape[0]
    if count < 2:
        raise ConfigurationError("need at least two vortices")
    if np.any(gammas == 0):
        raise ConfigurationError("vortex strengths must be nonzero")

    def _pair_data(ws):
        norms = np.array([frobenius_norm(w) for w in ws])
        theta = np.empty((count, count))
        for i in range(count):
            for j in range(count):
                if i == j:
                    theta[i, j] = 1.0
                else:
                    r = float(np.trace(ws[i].conj().T @ ws[j]).real)
                    theta[i, j] = r / (norms[i] * norms[j])
        return norms, theta

    def hamiltonian(ws):
        norms, theta = _pair_data(ws)
        total = 0.0
        for i in range(count):
            for j in range(i + 1, count):
                u = 1.0 - theta[i, j]
                if u <= 1e-12:
                    raise SingularityError(f"vortices {i} and {j} have collided")
                total -= gammas[i] * gammas[j] * math.log(u) / (4.0 * math.pi)
        return total

    def b(ws):
        norms, theta = _pair_data(ws)
        out = []
        for i in range(count):
            acc = np.zeros((2, 2), dtype=np.complex128)
            for j in range(count):
                if j == i:
                    continue
                u = 1.0 - theta[i, j]
                if u <= 1e-12:
                    raise SingularityError(f"vortices {i} and {j} have collided")
                grad_dir = ws[j] / (norms[i] * norms[j]) - theta[i, j] * ws[i] / norms[i] ** 2
                acc += gammas[j] * grad_dir / u
            out.append(-acc / (4.0 * math.pi))
        return tuple(out)

    flow = ProductFlowDefinition(
        name=f"vortices-{count}",
        components=[su_n(2) for _ in range(count)],
        b=b,
        hamiltonian=hamiltonian,
        strengths=gammas,
    )
    if positions is not None:
        flow.initial_state = tuple(vector_to_su2(x) for x in positions)
    return flow


def vortices_preset() -> ProductFlowDefinition:
    return point_vortex_flow(
        [1.0, 1.0, 1.0, 1.0],
        positions=[[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, -1.0, 0.0]],
    )


def heisenberg_chain_flow(n: int = 3) -> ProductFlowDefinition:
    """Cyclic chain of su(2) spins with nearest-neighbour coupling.

    H = sum_i Re Tr(W_i^H W_{i+1}) with W_{n+1} = W_1, so each spin precesses
    around the sum of its neighbours: B_i = -(W_{i-1} + W_{i+1}).
    """
    if n < 2:
        raise ConfigurationError("chain needs at least two spins")

    def hamiltonian(ws):
        return float(
            sum(np.trace(ws[i].conj().T @ ws[(i + 1) % n]).real for i in range(n))
        )

    def b(ws):
        return tuple(-(ws[(i - 1) % n] + ws[(i + 1) % n]) for i in range(n))

    axes = np.eye(3)
    initial = tuple(vector_to_su2(axes[i % 3]) for i in range(n))
    return ProductFlowDefinition(
        name=f"heisenberg-{n}",
        components=[su_n(2) for _ in range(n)],
        b=b,
        hamiltonian=hamiltonian,
        strengths=np.ones(n),
        initial_state=initial,
    )


# -- preset registry -----------------------------------------------------------

PRESET_NAMES = [
    "rigid-body-10",
    "toda-4",
    "bloch-iserles-3",
    "chu-4",
    "chu-4-centro",
    "brockett-3",
    "vortices-4",
    "heisenberg-3",
]

_FACTORIES = {
    "rigid-body-10": lambda: rigid_body_flow(10),
    "toda-4": lambda: toda_flow(4),
    "bloch-iserles-3": bloch_iserles_preset,
    "chu-4": lambda: chu_preset(force_centro=False),
    "chu-4-centro": lambda: chu_preset(force_centro=True),
    "brockett-3": brockett_preset,
    "vortices-4": vortices_preset,
    "heisenberg-3": lambda: heisenberg_chain_flow(3),
}


def preset(name: str):
    """Resolve a preset name to a flow carrying its shipped initial state.

    ``heisenberg-N`` is accepted for any chain length N >= 2.
    """
    if name in _FACTORIES:
        return _FACTORIES[name]()
    match = re.fullmatch(r"heisenberg-(\d+)", name)
    if match:
        return heisenberg_chain_flow(int(match.group(1)))
    match = re.fullmatch(r"rigid-body-(\d+)", name)
    if match:
        return rigid_body_flow(int(match.group(1)))
    match = re.fullmatch(r"toda-(\d+)", name)
    if match:
        return toda_flow(int(match.group(1)))
    raise ConfigurationError(
        f"unknown flow preset '{name}' (known: {', '.join(PRESET_NAMES)})"
    )


def list_presets() -> list:
    """One metadata record per shipped preset."""
    out = []
    for name in PRESET_NAMES:
        flow = preset(name)
        if isinstance(flow, ProductFlowDefinition):
            dimension = f"{len(flow.components)} x {flow.components[0].n}"
            subspace = "product of " + flow.components[0].describe()
        else:
            dimension = str(flow.n)
            subspace = flow.subspace.describe()
        out.append(
            {
                "name": name,
                "dimension": dimension,
                "subspace": subspace,
                "hamiltonian": flow.hamiltonian is not None,
            }
        )
    return out
