"""One-way key plus shield randomness (Devetak-Winter) rates.

Measuring Alice's half of a purification ``|psi>_ABE`` in the computational
basis gives a cqq state ``sigma_XBE``.  The key rate is
``I(X;B) - I(X;E)``; the shield that protects it carries ``I(X;E)`` bits of
randomness that stay private from Eve.  The two add up to ``I(X;B)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .entropy import CqEnsemble, binary_entropy, mutual_info_cq, shannon
from .exceptions import DimensionError, DomainError
from .qstate import check_density_matrix, f_to_p, isotropic, ket_to_dm, partial_trace, purify

__all__ = [
    "CqEnsemble",
    "DwRates",
    "Toy1Yields",
    "cq_ensembles",
    "dw_rates_from_state",
    "isotropic_dw_rand",
    "key_threshold",
    "randomness_curve",
    "toy1_yields",
]

ZERO_PROB = 1e-15


@dataclass(frozen=True)
class DwRates:
    r_key: float  # raw, may be negative
    r_rand: float
    i_xb: float
    i_xe: float

    @property
    def r_key_clamped(self) -> float:
        return max(self.r_key, 0.0)


def cq_ensembles(rho_ab, dim_a: int, dim_b: int) -> tuple[CqEnsemble, CqEnsemble]:
    """B- and E-marginal ensembles after measuring A of a purification of ``rho_ab``."""
    rho_ab = check_density_matrix(rho_ab)
    d = dim_a * dim_b
    if rho_ab.shape != (d, d):
        raise DimensionError(f"state of shape {rho_ab.shape} does not match dims {dim_a}x{dim_b}")
    psi = purify(rho_ab).reshape(dim_a, dim_b * d)
    probs, on_b, on_e = [], [], []
    for x in range(dim_a):
        branch = psi[x]
        p = float(np.vdot(branch, branch).real)
        if p < ZERO_PROB:
            continue
        phi = ket_to_dm(branch / np.sqrt(p))
        probs.append(p)
        on_b.append(partial_trace(phi, [dim_b, d], keep=[0]))
        on_e.append(partial_trace(phi, [dim_b, d], keep=[1]))
    probs = np.array(probs) / sum(probs)
    return CqEnsemble(probs, on_b), CqEnsemble(probs, on_e)


def dw_rates_from_state(rho_ab, dim_a: int, dim_b: int) -> DwRates:
    ens_b, ens_e = cq_ensembles(rho_ab, dim_a, dim_b)
    i_xb = mutual_info_cq(ens_b)
    i_xe = mutual_info_cq(ens_e)
    return DwRates(r_key=i_xb - i_xe, r_rand=i_xe, i_xb=i_xb, i_xe=i_xe)


def isotropic_dw_rand(p: float) -> float:
    """Closed form of ``I(X;E)`` for ``p psi+ + (1 - p) I/4``."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p}")
    hi, lo = (1 + 3 * p) / 4, (1 - p) / 4
    h_ab = shannon([hi, lo, lo, lo])
    return h_ab - binary_entropy((1 + p) / 2)


def randomness_curve(f: float) -> float:
    """Randomness rate from an isotropic state, by regime.

    Where the coherent information ``1 - H(weights)`` is positive the shield
    randomness ``I(X;E)`` is returned; otherwise the local rate
    ``2 - H(weights)``.
    """
    if not 0.0 <= f <= 1.0:
        raise DomainError(f"f must lie in [0, 1], got {f}")
    h = shannon(isotropic(f).weights)
    if 1.0 - h > 0:
        return isotropic_dw_rand(f_to_p(f))
    return 2.0 - h


def key_threshold(xtol: float = 1e-10) -> float:
    """Singlet fraction where ``H(f, (1-f)/3, (1-f)/3, (1-f)/3) = 1``."""
    return float(bisect(lambda f: shannon(isotropic(f).weights) - 1.0, 0.25, 1.0, xtol=xtol))


@dataclass(frozen=True)
class Toy1Yields:
    """Outcome probabilities and expected yields per two copies of ``a|00> + b|11>``."""

    p_ent: float
    p_00: float
    p_11: float
    ebits: float
    rand_bits: float
    activity_bits: float


def toy1_yields(a_sq: float) -> Toy1Yields:
    if not 0.0 <= a_sq <= 1.0:
        raise DomainError(f"a^2 must lie in [0, 1], got {a_sq}")
    b_sq = 1.0 - a_sq
    p_ent, p_00, p_11 = 2 * a_sq * b_sq, a_sq * a_sq, b_sq * b_sq
    # 'ent' leaves one ebit plus |00> (2 random bits after Hadamards);
    # '00' gives 4 random bits; '11' leaves 2 bits of activity per party
    return Toy1Yields(
        p_ent=p_ent,
        p_00=p_00,
        p_11=p_11,
        ebits=p_ent,
        rand_bits=2 * p_ent + 4 * p_00,
        activity_bits=4 * p_11,
    )
