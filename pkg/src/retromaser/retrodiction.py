"""Retrodictive photon-number distributions of the cavity field.

Two routes give the same answer and are kept deliberately separate:

* :func:`retrodict_with_final` walks backwards from the last detected
  atom, applying one single-atom update per detection to a set of final
  field weights.
* :func:`retrodict_state` multiplies a prior over the initial photon
  number by the POM coefficients and normalizes once at the end.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .core import (
    AtomOutcome,
    DetectionSequence,
    EmptySupportError,
    FockWeights,
    MaserParams,
    ParameterError,
    as_sequence,
    c_factor,
    s_factor,
)
from .pom import pom_coefficients

log = logging.getLogger(__name__)

# Entries at or below this are treated as zero when describing support.
ZERO_TOL = 1e-12
# "Significant" probability, relative to the largest entry.
SIGNIFICANCE = 1e-3


@dataclass(frozen=True)
class PriorSpec:
    """Prior over the photon number before the first atom enters.

    kind is one of ``"uniform"``, ``"cap"`` (uniform on 0..cap) or
    ``"explicit"`` (user-supplied relative weights).
    """

    kind: str = "uniform"
    cap: Optional[int] = None
    explicit: Optional[FockWeights] = None

    def __post_init__(self):
        if self.kind not in ("uniform", "cap", "explicit"):
            raise ParameterError(f"unknown prior kind {self.kind!r}")
        if self.kind == "cap" and (self.cap is None or self.cap < 0):
            raise ParameterError("cap prior needs a non-negative cap")
        if self.kind == "explicit" and self.explicit is None:
            raise ParameterError("explicit prior needs weights")

    @classmethod
    def uniform(cls) -> "PriorSpec":
        return cls("uniform")

    @classmethod
    def capped(cls, max_n: int) -> "PriorSpec":
        return cls("cap", cap=int(max_n))

    @classmethod
    def from_weights(cls, weights) -> "PriorSpec":
        if not isinstance(weights, FockWeights):
            weights = FockWeights(weights)
        return cls("explicit", explicit=weights)

    @classmethod
    def parse(cls, text: str) -> "PriorSpec":
        """Parse ``uniform``, ``cap:K`` or a path to an ``n,value`` CSV file."""
        text = text.strip()
        if text.lower() == "uniform":
            return cls.uniform()
        if text.lower().startswith("cap:"):
            try:
                return cls.capped(int(text[4:]))
            except ValueError:
                raise ParameterError(f"bad cap prior {text!r}; expected cap:K") from None
        path = Path(text)
        if not path.is_file():
            raise ParameterError(f"prior {text!r} is not 'uniform', 'cap:K' or a readable file")
        return cls.from_weights(read_weights_csv(path))

    def weights(self, n_max: int) -> FockWeights:
        if self.kind == "uniform":
            return FockWeights.uniform(n_max)
        if self.kind == "cap":
            if self.cap > n_max:
                raise ParameterError(f"prior cap {self.cap} exceeds n_max {n_max}")
            w = np.zeros(n_max + 1)
            w[: self.cap + 1] = 1.0
            return FockWeights(w)
        w = self.explicit.weights
        if w.size > n_max + 1 and np.any(w[n_max + 1:] > 0):
            raise ParameterError(f"explicit prior has weight above n_max {n_max}")
        out = np.zeros(n_max + 1)
        out[: min(w.size, n_max + 1)] = w[: n_max + 1]
        return FockWeights(out)

    def __str__(self) -> str:
        if self.kind == "cap":
            return f"cap:{self.cap}"
        if self.kind == "explicit":
            return f"explicit(n_max={self.explicit.n_max})"
        return "uniform"


def read_weights_csv(path) -> FockWeights:
    """Read ``n,value`` rows (header optional, ``#`` comments skipped)."""
    rows = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if parts == ["n", "value"]:
            continue
        try:
            n, value = int(parts[0]), float(parts[1])
        except (ValueError, IndexError):
            raise ParameterError(f"{path}:{lineno}: expected 'n,value', got {line!r}") from None
        if n < 0:
            raise ParameterError(f"{path}:{lineno}: negative photon number")
        rows[n] = value
    if not rows:
        raise ParameterError(f"{path}: no weights found")
    w = np.zeros(max(rows) + 1)
    for n, value in rows.items():
        w[n] = value
    return FockWeights(w)


@dataclass(frozen=True)
class RetrodictiveState:
    distribution: FockWeights
    sequence: DetectionSequence
    prior: PriorSpec

    @property
    def probabilities(self) -> np.ndarray:
        return self.distribution.weights


@dataclass(frozen=True)
class SupportReport:
    min_n: int
    gaps: tuple[tuple[int, int], ...]  # inclusive (start, stop) runs of zeros
    implied_final_min: int
    significant: tuple[int, ...]

    def summary(self) -> str:
        gaps = ", ".join(f"{a}-{b}" if a != b else f"{a}" for a, b in self.gaps) or "none"
        return (f"min_n={self.min_n}; gaps={gaps}; "
                f"implied_final_min={self.implied_final_min}")

    def as_dict(self) -> dict:
        return {
            "min_n": self.min_n,
            "gaps": [list(g) for g in self.gaps],
            "implied_final_min": self.implied_final_min,
            "significant": list(self.significant),
        }


def backward_update(dist_at_tm: FockWeights, outcome: AtomOutcome, params: MaserParams) -> FockWeights:
    """Carry photon-number weights from after one atom to before it.

    Excited: ``out[n] = in[n] cos^2(theta sqrt(n+1))``.
    Ground:  ``out[n] = in[n+1] sin^2(theta sqrt(n+1))``, with nothing
    above the top entry (``in[len] == 0``).

    The result is left unnormalized and may be all zero.
    """
    w = dist_at_tm.weights
    n = np.arange(w.size)
    outcome = AtomOutcome(outcome)
    if outcome is AtomOutcome.EXCITED:
        out = w * c_factor(n, 1, params)
    else:
        shifted = np.zeros_like(w)
        shifted[:-1] = w[1:]
        out = shifted * s_factor(n, 1, params)
    result = FockWeights(out)
    if result.is_empty:
        log.debug("backward update through %s emptied the support", outcome)
    return result


def retrodict_with_final(final_weights: FockWeights, seq, params: MaserParams) -> FockWeights:
    """Backward-iterate ``final_weights`` through ``seq``, last atom first.

    The output has the same length as ``final_weights``. Pass a longer
    vector than ``n_max + 1`` to avoid the top-fill cutoff for ground
    detections.
    """
    seq = as_sequence(seq)
    weights = final_weights
    for outcome in reversed(seq.outcomes):
        weights = backward_update(weights, outcome, params)
    if weights.is_empty:
        log.info("sequence %r has empty support under the given final weights", str(seq))
    return weights


def retrodict_state(seq, prior: PriorSpec, params: MaserParams) -> RetrodictiveState:
    """Normalized photon-number distribution before the first atom."""
    seq = as_sequence(seq)
    prior_w = prior.weights(params.n_max)
    raw = FockWeights(prior_w.weights * pom_coefficients(seq, params))
    if raw.total <= 0:
        raise EmptySupportError(
            f"detection sequence {str(seq)!r} is impossible under prior {prior} "
            f"(theta={params.theta!r}, n_max={params.n_max})",
            sequence=seq, prior=prior,
        )
    return RetrodictiveState(raw.normalized(), seq, prior)


def _zero_runs(mask: np.ndarray, start: int) -> list[tuple[int, int]]:
    runs = []
    n = start
    while n < mask.size:
        if mask[n]:
            m = n
            while m + 1 < mask.size and mask[m + 1]:
                m += 1
            runs.append((n, m))
            n = m + 1
        else:
            n += 1
    return runs


def support_report(state: RetrodictiveState, zero_tol: float = ZERO_TOL) -> SupportReport:
    """Lowest supported photon number, zero gaps above it and significant entries."""
    p = state.probabilities
    zero = p <= zero_tol
    supported = np.flatnonzero(~zero)
    min_n = int(supported[0])
    significant = np.flatnonzero(p >= SIGNIFICANCE * p.max())
    return SupportReport(
        min_n=min_n,
        gaps=tuple(_zero_runs(zero, min_n)),
        implied_final_min=min_n + state.sequence.ground_count,
        significant=tuple(int(n) for n in significant),
    )
