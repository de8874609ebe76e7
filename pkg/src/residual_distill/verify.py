"""Cross-checks between the analytic maps and the independent oracles."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dw_rates import dw_rates_from_state, isotropic_dw_rand, key_threshold
from .gl_protocol import step_b, step_p, theta_step
from .oracle import exact_step_b, exact_step_p, mc_step_b
from .qstate import BellDiagonalState, isotropic, p_to_f, random_bell_diagonal, to_density_matrix

DEFAULT_SEED = 20240611
REFERENCE_THRESHOLD = 0.8125


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def _max_diff(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def check_step_b(rng, n=200, tol=1e-10) -> CheckResult:
    worst = 0.0
    for _ in range(n):
        s = random_bell_diagonal(rng)
        ex, an = exact_step_b(s), step_b(s)
        worst = max(worst, _max_diff(ex.accepted.weights, an.accepted.weights),
                    abs(ex.p_fail - an.p_fail))
        if an.residual is not None:
            worst = max(worst, _max_diff(ex.residual.weights, an.residual.weights))
    return CheckResult("exact step B", worst < tol, f"{n} states, max dev {worst:.2e} (tol {tol:g})")


def check_step_p(rng, n=50, tol=1e-9) -> CheckResult:
    worst = 0.0
    for _ in range(n):
        s = random_bell_diagonal(rng)
        ex, an = exact_step_p(s), step_p(s)
        worst = max(worst, _max_diff(ex.branch_main.weights, an.branch_main.weights),
                    abs(ex.q_main - an.q_main))
    return CheckResult("exact step P", worst < tol, f"{n} states, max dev {worst:.2e} (tol {tol:g})")


def check_theta(rng, n=100, tol=1e-12) -> list[CheckResult]:
    worst = 0.0
    for _ in range(n):
        s = random_bell_diagonal(rng)
        direct = step_p(step_b(s).accepted).branch_main.theta
        worst = max(worst, abs(theta_step(s.theta) - direct))
    fixed = theta_step(0.0) == 0.0 and theta_step(0.25) == 0.25
    s0 = isotropic(0.79)
    direct0 = step_p(step_b(s0).accepted).branch_main.theta
    verb = theta_step(s0.theta, verbatim=True)
    return [
        CheckResult("theta recursion", worst < tol and fixed,
                    f"{n} states, max dev {worst:.2e}; fixed points 0, 1/4 exact: {fixed}"),
        CheckResult("alternate theta denominator rejected", abs(verb - direct0) > 1e-3,
                    f"theta0={s0.theta:.4f}: (1-2t^2)^6 gives {verb:.4f}, direct map {direct0:.4f}"),
    ]


def check_monte_carlo(seed: int, samples: int) -> list[CheckResult]:
    out = []
    cases = {"isotropic f=0.79": isotropic(0.79), "(0.5,0,0.5,0)": BellDiagonalState(0.5, 0, 0.5, 0)}
    for label, s in cases.items():
        an = step_b(s)
        rep = mc_step_b(s, samples, seed)
        z = abs(rep.empirical_p_fail - an.p_fail) / max(rep.std_errors["p_fail"], 1e-300)
        ok = z < 3
        detail = f"p_fail {rep.empirical_p_fail:.5f} vs {an.p_fail:.5f} ({z:.2f} sigma)"
        if an.residual is not None and rep.empirical_residual is not None:
            se = rep.std_errors["residual"]
            diff = np.abs(rep.empirical_residual.weights - an.residual.weights)
            # components with zero analytic weight are never sampled
            zr = np.where(se > 0, diff / np.where(se > 0, se, 1), np.where(diff > 0, np.inf, 0))
            ok = ok and bool(np.all(zr < 3))
            detail += f"; residual max {float(zr.max()):.2f} sigma"
        out.append(CheckResult(f"monte carlo {label}", ok, f"n={samples}, seed={seed}: {detail}"))
    return out


def check_dw(points=50, tol=1e-9, split_tol=1e-12) -> list[CheckResult]:
    worst = worst_split = worst_ci = 0.0
    for p in np.linspace(0.0, 1.0, points):
        s = isotropic(p_to_f(p))
        r = dw_rates_from_state(to_density_matrix(s), 2, 2)
        worst = max(worst, abs(isotropic_dw_rand(p) - r.r_rand))
        worst_split = max(worst_split, abs(r.r_key + r.r_rand - r.i_xb))
        h = -sum(w * np.log2(w) for w in s.weights if w > 0)
        worst_ci = max(worst_ci, abs(r.r_key - (1 - h)))
    return [
        CheckResult("DW closed form", worst < tol, f"{points} p values, max dev {worst:.2e}"),
        CheckResult("DW split identity", worst_split < split_tol, f"max dev {worst_split:.2e}"),
        CheckResult("DW key = coherent info", worst_ci < tol, f"max dev {worst_ci:.2e}"),
    ]


def check_threshold() -> CheckResult:
    f = key_threshold()
    ok = abs(f - REFERENCE_THRESHOLD) < 0.005
    return CheckResult("key threshold", ok, f"f*={f:.4f} vs reference {REFERENCE_THRESHOLD}")


def run_checks(seed: int = DEFAULT_SEED, samples: int = 10**6) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    results = [check_step_b(rng), check_step_p(rng)]
    results += check_theta(rng)
    results += check_monte_carlo(seed, samples)
    results += check_dw()
    results.append(check_threshold())
    return results
