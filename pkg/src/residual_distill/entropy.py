"""Entropic functionals in bits.

All logarithms are base 2 and ``0 log 0`` is taken as 0.  Density matrices
are plain complex ``numpy`` arrays; see :mod:`residual_distill.qstate` for
the validation rules they have to satisfy.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import DimensionError, DomainError, ValidationError
from .qstate import density_eigvals, partial_trace

PROB_NEG_TOL = 1e-12
PROB_SUM_TOL = 1e-9


def as_prob_vec(p) -> np.ndarray:
    """Validate a probability vector and return it as a float array.

    Entries within ``1e-12`` below zero are clamped to zero.
    """
    p = np.asarray(p, dtype=float).ravel()
    if p.size == 0:
        raise ValidationError("empty probability vector")
    if np.any(p < -PROB_NEG_TOL) or np.any(p > 1 + PROB_NEG_TOL):
        raise ValidationError(f"probabilities outside [0, 1]: {p}")
    if abs(p.sum() - 1.0) > PROB_SUM_TOL:
        raise ValidationError(f"probabilities sum to {p.sum()!r}, not 1")
    return np.clip(p, 0.0, None)


def _entropy_terms(p: np.ndarray) -> float:
    nz = p[p > 0]
    return float(-np.sum(nz * np.log2(nz)))


def shannon(p) -> float:
    """Shannon entropy ``-sum p_i log2 p_i`` of a distribution."""
    return _entropy_terms(as_prob_vec(p))


def binary_entropy(q: float) -> float:
    """Binary entropy ``h(q)``."""
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"binary entropy needs q in [0, 1], got {q}")
    return _entropy_terms(np.array([q, 1.0 - q]))


def von_neumann(rho: np.ndarray) -> float:
    """Von Neumann entropy of a density matrix.

    Raises
    ------
    ValidationError
        If ``rho`` is not Hermitian within ``1e-10``.
    PSDError
        If an eigenvalue lies below ``-1e-8``.
    """
    lam = density_eigvals(rho)
    return _entropy_terms(lam)


def conditional_entropy_AB(rho_ab: np.ndarray, dim_a: int, dim_b: int) -> float:
    """``S(A|B) = S(AB) - S(B)``; may be negative."""
    rho_ab = np.asarray(rho_ab)
    if rho_ab.shape != (dim_a * dim_b, dim_a * dim_b):
        raise DimensionError(
            f"state of shape {rho_ab.shape} does not match dims {dim_a}x{dim_b}"
        )
    rho_b = partial_trace(rho_ab, [dim_a, dim_b], keep=[1])
    return von_neumann(rho_ab) - von_neumann(rho_b)


@dataclass(frozen=True)
class CqEnsemble:
    """Classical-quantum ensemble ``{P(x), rho^x}``."""

    probs: np.ndarray
    states: tuple

    def __init__(self, probs, states: Sequence[np.ndarray]):
        probs = as_prob_vec(probs)
        states = tuple(np.asarray(s, dtype=complex) for s in states)
        if len(states) != probs.size:
            raise DimensionError(
                f"{probs.size} probabilities but {len(states)} states"
            )
        shapes = {s.shape for s in states}
        if len(shapes) != 1:
            raise DimensionError(f"ensemble members differ in shape: {shapes}")
        (shape,) = shapes
        if len(shape) != 2 or shape[0] != shape[1]:
            raise DimensionError(f"ensemble states must be square, got {shape}")
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "states", states)

    @property
    def dim(self) -> int:
        return self.states[0].shape[0]

    def average(self) -> np.ndarray:
        return sum(p * s for p, s in zip(self.probs, self.states))


def mutual_info_cq(ens: CqEnsemble) -> float:
    """Holevo quantity ``S(sum_x P(x) rho^x) - sum_x P(x) S(rho^x)``."""
    total = von_neumann(ens.average())
    for p, s in zip(ens.probs, ens.states):
        if p > 0:
            total -= p * von_neumann(s)
    # concavity guarantees >= 0; clip eigensolver round-off
    return max(float(total), 0.0)
