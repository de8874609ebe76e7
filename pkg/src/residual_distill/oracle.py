"""Independent checks of the analytic step maps.

Two routes that do not share code with :mod:`residual_distill.gl_protocol`:

* exact density-matrix simulation of the step B (4 qubits, 16 dims) and
  step P (6 qubits, 64 dims) circuits;
* a seeded Monte-Carlo sampler over classical Bell labels for step B.

Qubit ``0`` is the most significant bit of the computational index.  Bell
labels are ``(amp, phase)`` bits with ``psi+=(0,0)``, ``psi-=(0,1)``,
``phi+=(1,0)``, ``phi-=(1,1)``, so the label index ``2*amp + phase`` matches
the Bell-basis ordering of :mod:`residual_distill.qstate`.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, Optional

import numpy as np

from .exceptions import DomainError
from .gl_protocol import NO_FAIL_TOL, StepBOutcome, StepPOutcome
from .qstate import BellDiagonalState, bell_weights, partial_trace, to_density_matrix

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_Z = np.diag([1.0, -1.0]).astype(complex)

Correction = Literal["zz", "none", "z_a"]


# --------------------------------------------------------------------------
# gates


def single_qubit_gate(gate: np.ndarray, target: int, n: int) -> np.ndarray:
    ops = [np.eye(2, dtype=complex)] * n
    ops[target] = gate
    out = ops[0]
    for op in ops[1:]:
        out = np.kron(out, op)
    return out


@lru_cache(maxsize=None)
def cnot(control: int, target: int, n: int) -> np.ndarray:
    """Permutation matrix of CNOT on ``n`` qubits."""
    dim = 2**n
    u = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        j = i ^ (1 << (n - 1 - target)) if (i >> (n - 1 - control)) & 1 else i
        u[j, i] = 1
    return u


def apply_unitary(rho: np.ndarray, u: np.ndarray) -> np.ndarray:
    return u @ rho @ u.conj().T


def _bit(index: int, qubit: int, n: int) -> int:
    return (index >> (n - 1 - qubit)) & 1


def _outcome_projector(n: int, fixed: dict) -> np.ndarray:
    """Diagonal projector fixing computational values of some qubits."""
    diag = np.array(
        [all(_bit(i, q, n) == v for q, v in fixed.items()) for i in range(2**n)],
        dtype=float,
    )
    return diag


# --------------------------------------------------------------------------
# exact step B


def bilateral_xor_transfer(s1: BellDiagonalState, s2: BellDiagonalState):
    """Unnormalised Bell weights of the source pair after one step B.

    ``s1`` sits on qubits ``A, B`` and ``s2`` on ``A', B'``.  Returns
    ``(kept, failed)``: Bell weights of the source pair projected on equal
    and on unequal ``A'B'`` outcomes.  Their traces are the branch
    probabilities.
    """
    rho = np.kron(to_density_matrix(s1), to_density_matrix(s2))
    rho = apply_unitary(rho, cnot(0, 2, 4) @ cnot(1, 3, 4))
    branches = []
    for agree in (True, False):
        pairs = [(0, 0), (1, 1)] if agree else [(0, 1), (1, 0)]
        mask = sum(_outcome_projector(4, {2: a, 3: b}) for a, b in pairs)
        proj = rho * np.outer(mask, mask)
        branches.append(bell_weights(partial_trace(proj, [2, 2, 2, 2], keep=[0, 1])))
    return branches[0], branches[1]


def exact_step_b(s: BellDiagonalState) -> StepBOutcome:
    kept, failed = bilateral_xor_transfer(s, s)
    p_keep, p_fail = kept.sum(), failed.sum()
    accepted = BellDiagonalState.from_weights(kept / p_keep)
    if p_fail < NO_FAIL_TOL:
        return StepBOutcome(accepted, None, float(max(p_fail, 0.0)))
    return StepBOutcome(accepted, BellDiagonalState.from_weights(failed / p_fail), float(p_fail))


# --------------------------------------------------------------------------
# exact step P


@lru_cache(maxsize=None)
def _step_p_unitary() -> np.ndarray:
    n = 6
    had_all = np.eye(1, dtype=complex)
    for _ in range(n):
        had_all = np.kron(had_all, _H)
    xors = cnot(0, 2, n) @ cnot(0, 4, n) @ cnot(1, 3, n) @ cnot(1, 5, n)
    return xors @ had_all


def exact_step_p_classes(s: BellDiagonalState, correction: Correction = "zz") -> dict:
    """Unnormalised Bell weights of the kept pair for each syndrome class.

    Keys are ``(disagree_1, disagree_2)``: whether ``Z_A' Z_B'`` and
    ``Z_A'' Z_B''`` found different bits on the two sides.  The correction
    is applied in the ``(True, True)`` class only:

    ``"zz"``
        ``Z_A (x) Z_B``; a global phase on every Bell state.
    ``"z_a"``
        ``Z_A`` alone, which flips the phase bit.
    ``"none"``
        No correction.
    """
    n = 6
    rho = to_density_matrix(s)
    rho = np.kron(np.kron(rho, rho), rho)
    rho = apply_unitary(rho, _step_p_unitary())
    fix = {"zz": np.kron(_Z, _Z), "z_a": np.kron(_Z, np.eye(2)), "none": np.eye(4)}[correction]
    back = np.kron(_H, _H)
    out = {}
    for m in range(16):
        bits = [(m >> (3 - i)) & 1 for i in range(4)]
        mask = _outcome_projector(n, dict(zip((2, 3, 4, 5), bits)))
        red = partial_trace(rho * np.outer(mask, mask), [2] * n, keep=[0, 1])
        key = (bits[0] != bits[1], bits[2] != bits[3])
        if key == (True, True):
            red = apply_unitary(red, fix)
        red = apply_unitary(red, back)
        out[key] = out.get(key, 0) + bell_weights(red)
    return out


def exact_step_p(s: BellDiagonalState, correction: Correction = "zz") -> StepPOutcome:
    """Outcome-averaged Bell weights of the step P circuit.

    ``q_main`` is the probability of *not* seeing disagreement on both
    parity checks.
    """
    classes = exact_step_p_classes(s, correction)
    total = sum(classes.values())
    main = BellDiagonalState.from_weights(total / total.sum())
    q_main = 1.0 - classes[(True, True)].sum() / total.sum()
    return StepPOutcome(main, main.phase_swapped(), float(np.clip(q_main, 0.0, 1.0)))


# --------------------------------------------------------------------------
# Bell-label Monte Carlo


def bilateral_xor_labels(a1: int, b1: int, a2: int, b2: int):
    """Classical label update of one bilateral XOR.

    Returns ``(failed, (a, b))`` for the source pair; the pair is discarded
    when the amplitude bits differ.
    """
    return bool(a1 ^ a2), (a1, b1 ^ b2)


@dataclass(frozen=True)
class McReport:
    n_samples: int
    seed: int
    shards: int
    n_fail: int
    empirical_p_fail: float
    empirical_residual: Optional[BellDiagonalState]
    empirical_accepted: Optional[BellDiagonalState]
    std_errors: dict


def _shard_sizes(n: int, shards: int) -> list[int]:
    base, extra = divmod(n, shards)
    return [base + (1 if i < extra else 0) for i in range(shards)]


def mc_step_b(s: BellDiagonalState, n: int, seed: int, shards: int = 1) -> McReport:
    """Sample ``n`` pairs of Bell labels and push them through step B.

    Shard ``i`` draws from ``PCG64(SeedSequence([seed, i]))``, so results
    depend only on ``(s, n, seed, shards)``.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"sample count must be a positive integer, got {n}")
    if int(shards) != shards or shards < 1:
        raise DomainError(f"shard count must be a positive integer, got {shards}")
    p = s.weights / s.weights.sum()
    fail_counts = np.zeros(4, dtype=np.int64)
    keep_counts = np.zeros(4, dtype=np.int64)
    for shard, size in enumerate(_shard_sizes(int(n), int(shards))):
        if size == 0:
            continue
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), shard])))
        labels = rng.choice(4, size=(size, 2), p=p)
        a1, b1 = labels[:, 0] >> 1, labels[:, 0] & 1
        a2, b2 = labels[:, 1] >> 1, labels[:, 1] & 1
        failed = (a1 ^ a2).astype(bool)
        out = 2 * a1 + (b1 ^ b2)
        fail_counts += np.bincount(out[failed], minlength=4)
        keep_counts += np.bincount(out[~failed], minlength=4)
    n_fail = int(fail_counts.sum())
    n_keep = int(keep_counts.sum())
    p_fail = n_fail / n
    std = {"p_fail": float(np.sqrt(p_fail * (1 - p_fail) / n))}
    residual = accepted = None
    if n_fail:
        q = fail_counts / n_fail
        residual = BellDiagonalState.from_weights(q)
        std["residual"] = np.sqrt(q * (1 - q) / n_fail)
    if n_keep:
        q = keep_counts / n_keep
        accepted = BellDiagonalState.from_weights(q)
        std["accepted"] = np.sqrt(q * (1 - q) / n_keep)
    return McReport(int(n), int(seed), int(shards), n_fail, p_fail, residual, accepted, std)
