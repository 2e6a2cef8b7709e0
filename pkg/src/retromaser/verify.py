"""Self-checks run by ``retromaser verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import MaserParams, c_factor, s_factor
from .oracle import matrix_exponential_check, sequence_likelihood
from .pom import all_sequences, completeness_check, pom_coefficients


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def _completeness(params: MaserParams) -> tuple[bool, str]:
    worst = max(completeness_check(s, params) for s in range(11))
    return worst <= 1e-11, f"max |sum - 1| = {worst:.3g} over s <= 10 (tol 1e-11)"


def _oracle_equivalence(params: MaserParams) -> tuple[bool, str]:
    small = MaserParams(theta=params.theta, n_max=min(params.n_max, 30))
    worst = 0.0
    for s in range(7):
        for seq in all_sequences(s):
            gap = np.abs(sequence_likelihood(seq, small).per_initial_n - pom_coefficients(seq, small))
            worst = max(worst, float(gap.max()))
    return worst <= 1e-12, f"max |P(seq|n) - C_n| = {worst:.3g} over s <= 6 (tol 1e-12)"


def _unitary(params: MaserParams) -> tuple[bool, str]:
    worst = max(matrix_exponential_check(params, m) for m in (5, 20, 60))
    return worst <= 1e-9, f"max entry gap = {worst:.3g} for M in 5, 20, 60 (tol 1e-9)"


def _trapping(params: MaserParams) -> tuple[bool, str]:
    # Trapping states exist only at theta = pi; elsewhere this is reported but vacuous.
    pi = MaserParams(theta=math.pi, n_max=params.n_max)
    k = np.arange(1, math.isqrt(params.n_max + 1) + 1)
    n = k ** 2 - 1
    c_gap = float(np.max(np.abs(c_factor(n, 1, pi) - 1)))
    s_gap = float(np.max(np.abs(s_factor(n, 1, pi))))
    ok = c_gap <= 1e-12 and s_gap <= 1e-12
    return ok, f"n in {n.tolist()}: |c-1| <= {c_gap:.2g}, s <= {s_gap:.2g} (tol 1e-12)"


CHECKS: dict[str, Callable[[MaserParams], tuple[bool, str]]] = {
    "completeness": _completeness,
    "oracle-equivalence": _oracle_equivalence,
    "unitary-cross-check": _unitary,
    "trapping-states": _trapping,
}


def run_checks(params: MaserParams) -> list[CheckResult]:
    results = []
    for name, check in CHECKS.items():
        try:
            passed, detail = check(params)
        except Exception as exc:  # a crashing invariant is a failed invariant
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append(CheckResult(name, passed, detail))
    return results
