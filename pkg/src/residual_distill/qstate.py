"""State representations and small dense linear algebra.

Conventions
-----------
Computational basis ordering is ``00, 01, 10, 11`` with the first tensor
factor most significant.  The Bell basis is ordered ``(psi+, psi-, phi+,
phi-)`` with::

    psi± = (|00> ± |11>) / sqrt(2)
    phi± = (|01> ± |10>) / sqrt(2)

Fidelity is the *root* fidelity ``F = || sqrt(rho) sqrt(sigma) ||_1`` (not
squared), so that ``arccos F`` is a metric on states and obeys the triangle
inequality.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import DimensionError, DomainError, PSDError, ValidationError

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-8
WEIGHT_TOL = 1e-12

_S = 1 / np.sqrt(2)
BELL_KETS = np.array(
    [
        [_S, 0, 0, _S],   # psi+
        [_S, 0, 0, -_S],  # psi-
        [0, _S, _S, 0],   # phi+
        [0, _S, -_S, 0],  # phi-
    ],
    dtype=complex,
)
BELL_NAMES = ("psi+", "psi-", "phi+", "phi-")


@dataclass(frozen=True)
class BellDiagonalState:
    """Mixture ``w psi+ + x psi- + y phi+ + z phi-``."""

    w: float
    x: float
    y: float
    z: float

    def __post_init__(self):
        vals = (self.w, self.x, self.y, self.z)
        if any(not np.isfinite(v) for v in vals):
            raise ValidationError(f"non-finite Bell weights {vals}")
        if min(vals) < -WEIGHT_TOL:
            raise ValidationError(f"negative Bell weight in {vals}")
        if abs(sum(vals) - 1.0) > WEIGHT_TOL:
            raise ValidationError(f"Bell weights {vals} sum to {sum(vals)!r}")
        # clamp round-off below zero
        for name, v in zip("wxyz", vals):
            object.__setattr__(self, name, max(float(v), 0.0))

    @classmethod
    def from_weights(cls, weights) -> "BellDiagonalState":
        w, x, y, z = (float(v) for v in weights)
        return cls(w, x, y, z)

    @property
    def weights(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    @property
    def theta(self) -> float:
        """Product ``(w + x)(y + z)``; half the step-B failure probability."""
        return (self.w + self.x) * (self.y + self.z)

    def phase_swapped(self) -> "BellDiagonalState":
        """Swap ``w<->x`` and ``y<->z`` (a phase flip on one qubit)."""
        return BellDiagonalState(self.x, self.w, self.z, self.y)

    def allclose(self, other: "BellDiagonalState", atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.weights, other.weights, rtol=0, atol=atol))


def isotropic(f: float) -> BellDiagonalState:
    """Isotropic state with singlet fraction ``f`` on ``psi+``."""
    if not 0.0 <= f <= 1.0:
        raise DomainError(f"isotropic fraction must lie in [0, 1], got {f}")
    r = (1.0 - f) / 3.0
    return BellDiagonalState(f, r, r, r)


def p_to_f(p: float) -> float:
    """Map the depolarising parameter ``p`` to singlet fraction ``(1+3p)/4``."""
    return (1.0 + 3.0 * p) / 4.0


def f_to_p(f: float) -> float:
    return (4.0 * f - 1.0) / 3.0


def to_density_matrix(s: BellDiagonalState) -> np.ndarray:
    """4x4 density matrix of a Bell-diagonal state."""
    return np.einsum("k,ki,kj->ij", s.weights, BELL_KETS, BELL_KETS.conj())


def bell_weights(rho: np.ndarray) -> np.ndarray:
    """Diagonal of a two-qubit operator in the Bell basis."""
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise DimensionError(f"expected a 4x4 operator, got {rho.shape}")
    return np.real(np.einsum("ki,ij,kj->k", BELL_KETS.conj(), rho, BELL_KETS))


def check_density_matrix(rho) -> np.ndarray:
    """Return ``rho`` as a complex array after shape, hermiticity and trace checks."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"density matrix must be square, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL:
        raise ValidationError("matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > TRACE_TOL:
        raise ValidationError(f"trace is {np.trace(rho).real!r}, not 1")
    return rho


def _herm_eig(rho: np.ndarray):
    return np.linalg.eigh(0.5 * (rho + rho.conj().T))


def density_eigvals(rho) -> np.ndarray:
    """Validated eigenvalues of a density matrix, small negatives clamped to 0."""
    rho = check_density_matrix(rho)
    lam = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if lam.min() < -PSD_TOL:
        raise PSDError(f"eigenvalue {lam.min()!r} below -{PSD_TOL}")
    return np.clip(lam, 0.0, None)


def _psd_sqrt(rho: np.ndarray) -> np.ndarray:
    lam, vec = _herm_eig(rho)
    if lam.min() < -PSD_TOL:
        raise PSDError(f"eigenvalue {lam.min()!r} below -{PSD_TOL}")
    root = np.sqrt(np.clip(lam, 0.0, None))
    return (vec * root) @ vec.conj().T


def partial_trace(rho, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    Parameters
    ----------
    rho : array, shape (D, D)
    dims : sequence of int
        Local dimensions; their product must equal ``D``.
    keep : sequence of int
        Indices of the subsystems to keep, in the order they should appear.
    """
    rho = np.asarray(rho)
    dims = [int(d) for d in dims]
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise DimensionError(f"dims {dims} do not factor a {rho.shape} matrix")
    keep = list(keep)
    n = len(dims)
    if any(k < 0 or k >= n for k in keep) or len(set(keep)) != len(keep):
        raise DimensionError(f"invalid subsystem selection {keep} for {n} parties")
    t = rho.reshape(dims + dims)
    row = list(range(n))
    col = [i + n if i in keep else i for i in range(n)]
    out = [k for k in keep] + [k + n for k in keep]
    reduced = np.einsum(t, row + col, out)
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return reduced.reshape(d_keep, d_keep)


def purify(rho) -> np.ndarray:
    """Purification ``sum_i sqrt(lam_i) |v_i> (x) |i>_E``.

    The environment has the same dimension ``d`` as the system and its basis
    follows the eigenvalues of ``rho`` in descending order.  Each eigenvector
    is phase-fixed so its largest-magnitude entry is real and positive.

    Returns
    -------
    ndarray, shape (d * d,)
        State vector on ``system (x) environment``.
    """
    rho = check_density_matrix(rho)
    lam, vec = _herm_eig(rho)
    if lam.min() < -PSD_TOL:
        raise PSDError(f"eigenvalue {lam.min()!r} below -{PSD_TOL}")
    order = np.argsort(-lam, kind="stable")
    lam = np.clip(lam[order], 0.0, None)
    vec = vec[:, order]
    for j in range(vec.shape[1]):
        col = vec[:, j]
        k = np.argmax(np.abs(col))
        vec[:, j] = col * (abs(col[k]) / col[k])
    d = rho.shape[0]
    psi = np.zeros((d, d), dtype=complex)
    psi[:, :] = vec * np.sqrt(lam)
    return psi.reshape(d * d)


def ket_to_dm(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).ravel()
    return np.outer(psi, psi.conj())


def fidelity(rho, sigma) -> float:
    """Root fidelity ``|| sqrt(rho) sqrt(sigma) ||_1`` in ``[0, 1]``."""
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != sigma.shape:
        raise DimensionError(f"shape mismatch {rho.shape} vs {sigma.shape}")
    sv = np.linalg.svd(_psd_sqrt(rho) @ _psd_sqrt(sigma), compute_uv=False)
    return float(np.clip(sv.sum(), 0.0, 1.0))


def trace_distance(rho, sigma) -> float:
    """``(1/2) || rho - sigma ||_1``."""
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != sigma.shape:
        raise DimensionError(f"shape mismatch {rho.shape} vs {sigma.shape}")
    lam = np.linalg.eigvalsh(0.5 * ((rho - sigma) + (rho - sigma).conj().T))
    return float(np.clip(0.5 * np.abs(lam).sum(), 0.0, 1.0))


def random_bell_diagonal(rng: np.random.Generator) -> BellDiagonalState:
    """Bell weights drawn uniformly from the probability simplex."""
    return BellDiagonalState.from_weights(rng.dirichlet(np.ones(4)))


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random mixed state ``G G^dag / tr`` with complex Gaussian ``G`` (Ginibre)."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
