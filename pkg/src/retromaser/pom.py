"""Cavity-field POM elements for sequences of atomic detections.

Every element is diagonal in the Fock basis, so it is stored as its
vector of coefficients ``C_n``. The construction runs forward over the
atoms: an excited detection multiplies by ``cos^2(theta sqrt(n+k))``, a
ground detection by ``sin^2(theta sqrt(n+k))`` and then bumps the shift
``k`` because the field has gained a photon for every later atom.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import (
    AtomOutcome,
    DetectionSequence,
    FockWeights,
    MaserParams,
    ParameterError,
    RetromaserError,
    as_sequence,
    c_factor,
    s_factor,
)

# Rounding slack tolerated on the [0, 1] bounds of a coefficient.
BOUND_SLACK = 1e-12
MAX_ENUMERATION_LENGTH = 16

TABLE1_ROWS = ("ee", "gg", "eg", "ge")


class CoefficientBoundsError(RetromaserError, ArithmeticError):
    pass


@dataclass(frozen=True)
class PomElement:
    coefficients: FockWeights
    sequence: DetectionSequence
    params: MaserParams

    def __getitem__(self, n):
        return self.coefficients[n]

    @property
    def values(self) -> np.ndarray:
        return self.coefficients.weights

    def probability(self, field_weights: FockWeights) -> float:
        """Trace of the element against a diagonal field state."""
        w = field_weights.normalized().weights
        if w.size != self.values.size:
            raise ParameterError("field state and POM element have different truncations")
        return float(np.dot(w, self.values))


def _checked(coefficients: np.ndarray) -> np.ndarray:
    lo, hi = coefficients.min(), coefficients.max()
    if lo < -BOUND_SLACK or hi > 1 + BOUND_SLACK:
        raise CoefficientBoundsError(
            f"POM coefficient left [0, 1]: range [{lo!r}, {hi!r}]"
        )
    return np.clip(coefficients, 0.0, 1.0)


def pom_coefficients(seq, params: MaserParams) -> np.ndarray:
    """Raw coefficient array for ``seq``; see :func:`build_pom`."""
    seq = as_sequence(seq)
    n = params.photon_numbers
    coefficients = np.ones(n.size)
    shift = 1
    for outcome in seq:
        if outcome is AtomOutcome.EXCITED:
            coefficients = _checked(coefficients * c_factor(n, shift, params))
        else:
            coefficients = _checked(coefficients * s_factor(n, shift, params))
            shift += 1
    return coefficients


def build_pom(seq, params: MaserParams) -> PomElement:
    """Field POM element for a chronological detection sequence.

    The coefficients are exact for each photon number ``0..n_max``; the
    truncation only limits which ``n`` are reported.
    """
    seq = as_sequence(seq)
    return PomElement(FockWeights(pom_coefficients(seq, params)), seq, params)


def all_sequences(length: int):
    """All ``2**length`` sequences in a fixed (lexicographic e<g) order."""
    for combo in itertools.product((AtomOutcome.EXCITED, AtomOutcome.GROUND), repeat=length):
        yield DetectionSequence(combo)


def completeness_check(length: int, params: MaserParams) -> float:
    """Max deviation from identity of the sum over all ``2**length`` elements.

    Elements sharing a prefix share its partial product, so the walk costs
    one multiply per tree node. Leaves are summed in :func:`all_sequences`
    order.
    """
    if length < 0:
        raise ParameterError("sequence length must be >= 0")
    if length > MAX_ENUMERATION_LENGTH:
        raise ParameterError(
            f"refusing to enumerate 2**{length} POM elements "
            f"(limit is length {MAX_ENUMERATION_LENGTH})"
        )
    n = params.photon_numbers
    excited = {k: c_factor(n, k, params) for k in range(1, length + 1)}
    ground = {k: s_factor(n, k, params) for k in range(1, length + 1)}
    total = np.zeros(n.size)

    def walk(coefficients, depth, shift):
        nonlocal total
        if depth == length:
            total = total + coefficients
            return
        walk(_checked(coefficients * excited[shift]), depth + 1, shift)
        walk(_checked(coefficients * ground[shift]), depth + 1, shift + 1)

    walk(np.ones(n.size), 0, 1)
    return float(np.max(np.abs(total - 1.0)))


def symbolic_table1(row: str, params: MaserParams) -> Callable[[np.ndarray], np.ndarray]:
    """Closed-form two-atom coefficient for ``row`` as a function of ``n``.

    Written out directly from the trig products rather than through the
    iteration in :func:`build_pom`; used to cross-check it.
    """
    theta = params.theta

    def c2(n, m):
        return np.cos(theta * np.sqrt(np.asarray(n, dtype=float) + m)) ** 2

    def s2(n, m):
        return np.sin(theta * np.sqrt(np.asarray(n, dtype=float) + m)) ** 2

    forms = {
        "ee": lambda n: c2(n, 1) ** 2,
        "gg": lambda n: s2(n, 2) * s2(n, 1),
        "eg": lambda n: c2(n, 1) * s2(n, 1),
        "ge": lambda n: c2(n, 2) * s2(n, 1),
    }
    try:
        return forms[row]
    except KeyError:
        raise ParameterError(f"unknown Table 1 row {row!r}; expected one of {TABLE1_ROWS}") from None


def table1_deviation(row: str, params: MaserParams) -> float:
    """Max |build_pom - closed form| over n for one Table 1 row."""
    n = params.photon_numbers
    return float(np.max(np.abs(pom_coefficients(row, params) - symbolic_table1(row, params)(n))))
