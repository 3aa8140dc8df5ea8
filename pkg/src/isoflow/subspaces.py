"""Linear subspaces of the n x n complex matrices, with orthogonal projectors.

Each descriptor knows how to project onto the subspace (orthogonally with
respect to the real Frobenius inner product Re trace(A^H B)) and reports a
membership residual ``|W - project(W)|_F``.  Restricted integrator variants
evaluate the flow map B on the projection of their stage iterates, which is
the canonical extension of B off the subspace (constant along the orthogonal
complement).
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigurationError, DimensionError
from .linalg import as_matrix, frobenius_norm

__all__ = [
    "SubspaceDescriptor",
    "FullSpace",
    "SpecialLinear",
    "RealForm",
    "JQuadratic",
    "JComplement",
    "SymmetricReal",
    "Centrosymmetric",
    "Intersection",
    "exchange_matrix",
    "so_n",
    "su_n",
    "hermitian",
    "symmetric_centrosymmetric",
]


def exchange_matrix(n: int) -> np.ndarray:
    """The anti-diagonal permutation matrix E (E @ E == I)."""
    return np.fliplr(np.eye(n)).astype(np.complex128)


def _validate_involution_j(j: np.ndarray) -> float:
    """Check J^2 = c I with c != 0 and return c."""
    j = as_matrix(j)
    if j.shape[0] != j.shape[1]:
        raise DimensionError("J must be square")
    j2 = j @ j
    c = complex(j2[0, 0])
    n = j.shape[0]
    if abs(c) < 1e-12 or frobenius_norm(j2 - c * np.eye(n)) > 1e-12 * max(1.0, abs(c)):
        raise ConfigurationError("J must satisfy J @ J = c I with c != 0")
    if abs(c.imag) > 1e-12:
        raise ConfigurationError("J @ J = c I requires real c")
    # scaled unitarity makes X -> J^-1 X^H J an isometry, hence the projector orthogonal
    jj = j.conj().T @ j
    gamma = complex(jj[0, 0])
    if frobenius_norm(jj - gamma * np.eye(n)) > 1e-12 * max(1.0, abs(gamma)):
        raise ConfigurationError("J^H @ J must be a multiple of the identity")
    return c.real


class SubspaceDescriptor:
    """Base class: a real-linear subspace with an orthogonal projector."""

    kind = "abstract"

    def __init__(self, n: int):
        self.n = int(n)

    def project(self, w: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def membership(self, w: np.ndarray) -> float:
        """Frobenius distance from w to the subspace."""
        return frobenius_norm(np.asarray(w) - self.project(w))

    def contains(self, w: np.ndarray, tol: float = 1e-10) -> bool:
        return self.membership(w) <= tol * max(1.0, frobenius_norm(w))

    def describe(self) -> str:
        return self.kind


class FullSpace(SubspaceDescriptor):
    kind = "full"

    def project(self, w):
        return np.asarray(w, dtype=np.complex128)


class SpecialLinear(SubspaceDescriptor):
    """Traceless matrices sl(n, C)."""

    kind = "special-linear"

    def project(self, w):
        w = as_matrix(w)
        return w - (np.trace(w) / self.n) * np.eye(self.n)


class RealForm(SubspaceDescriptor):
    """Matrices with real entries, gl(n, R)."""

    kind = "real-form"

    def project(self, w):
        return as_matrix(w).real.astype(np.complex128)


class JQuadratic(SubspaceDescriptor):
    """Matrices with W^H J + J W = 0 for a fixed J with J^2 = c I.

    J = I gives the skew-Hermitian matrices u(n); a symplectic J gives sp(n).
    """

    kind = "j-quadratic"

    def __init__(self, j: np.ndarray):
        j = as_matrix(j)
        super().__init__(j.shape[0])
        self.c = _validate_involution_j(j)
        self.j = j
        self.j_inv = j / self.c
        self._j_is_identity = bool(np.array_equal(j, np.eye(self.n)))

    def sigma(self, w: np.ndarray) -> np.ndarray:
        """The involution W -> J^-1 W^H J; the subspace is its (-1)-eigenspace."""
        w = as_matrix(w)
        if self._j_is_identity:
            return w.conj().T
        return self.j_inv @ w.conj().T @ self.j

    def project(self, w):
        w = as_matrix(w)
        return (w - self.sigma(w)) / 2.0


class JComplement(SubspaceDescriptor):
    """Orthogonal complement of a J-quadratic algebra: W^H J = J W.

    J = I gives the Hermitian matrices; restricted to real entries, the
    symmetric ones.
    """

    kind = "j-complement"

    def __init__(self, j: np.ndarray):
        j = as_matrix(j)
        super().__init__(j.shape[0])
        self.c = _validate_involution_j(j)
        self.j = j
        self.j_inv = j / self.c
        self._j_is_identity = bool(np.array_equal(j, np.eye(self.n)))

    def sigma(self, w: np.ndarray) -> np.ndarray:
        w = as_matrix(w)
        if self._j_is_identity:
            return w.conj().T
        return self.j_inv @ w.conj().T @ self.j

    def project(self, w):
        w = as_matrix(w)
        return (w + self.sigma(w)) / 2.0


class SymmetricReal(SubspaceDescriptor):
    """Real symmetric matrices."""

    kind = "symmetric-real"

    def project(self, w):
        re = as_matrix(w).real
        return ((re + re.T) / 2.0).astype(np.complex128)


class Centrosymmetric(SubspaceDescriptor):
    """Matrices commuting with the exchange matrix E (180-degree rotation symmetry)."""

    kind = "centrosymmetric"

    def __init__(self, n: int):
        super().__init__(n)
        self.e = exchange_matrix(n)

    def project(self, w):
        w = as_matrix(w)
        return (w + self.e @ w @ self.e) / 2.0


class Intersection(SubspaceDescriptor):
    """Intersection of subspaces, projected by cycling the member projectors.

    For members with commuting projectors (every combination used in the flow
    catalogue) one pass is exact; otherwise the cycle is von Neumann's
    alternating projection, iterated to convergence.
    """

    kind = "intersection"

    def __init__(self, members, commuting: bool = False):
        members = list(members)
        if not members:
            raise ConfigurationError("intersection needs at least one member")
        dims = {m.n for m in members}
        if len(dims) != 1:
            raise DimensionError(f"members have mixed dimensions: {sorted(dims)}")
        super().__init__(members[0].n)
        self.members = members
        # commuting member projectors compose to the intersection projector
        # in a single pass; set only when that is known to hold
        self.commuting = commuting

    def _pass(self, w):
        for m in self.members:
            w = m.project(w)
        return w

    def project(self, w):
        w = self._pass(as_matrix(w))
        if self.commuting:
            return w
        for _ in range(256):
            nxt = self._pass(w)
            if frobenius_norm(nxt - w) <= 1e-15 * max(1.0, frobenius_norm(w)):
                return nxt
            w = nxt
        return w

    def describe(self) -> str:
        return " & ".join(m.describe() for m in self.members)


def so_n(n: int) -> Intersection:
    """Real skew-symmetric matrices so(n) = u(n) with real entries."""
    return Intersection([JQuadratic(np.eye(n)), RealForm(n)], commuting=True)


def su_n(n: int) -> Intersection:
    """Traceless skew-Hermitian matrices su(n)."""
    return Intersection([JQuadratic(np.eye(n)), SpecialLinear(n)], commuting=True)


def hermitian(n: int) -> JComplement:
    return JComplement(np.eye(n))


def symmetric_centrosymmetric(n: int) -> Intersection:
    return Intersection([SymmetricReal(n), Centrosymmetric(n)], commuting=True)
