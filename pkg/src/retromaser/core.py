"""Shared domain types and the Rabi-factor functions.

All photon-number structures here are diagonal in the Fock basis, so a
field state or measurement operator is just a vector of weights indexed
by photon number ``n = 0..n_max``.

The coupling enters only through the dimensionless product
``theta = lambda * tau``. With ``Omega(n) = 2 lambda sqrt(n)`` the Rabi
phase accumulated by an atom that sees ``n`` excitations is
``Omega(n) tau / 2 = theta * sqrt(n)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

import numpy as np

ArrayLike = Union[int, float, np.ndarray]


class RetromaserError(Exception):
    """Base class for errors raised by this package."""


class ParameterError(RetromaserError, ValueError):
    """Invalid physical or numerical parameters."""


class EmptySupportError(RetromaserError, ValueError):
    """A detection record is impossible under the given prior or final weights.

    Carries the offending sequence and prior so the caller can report them.
    """

    def __init__(self, message: str, sequence=None, prior=None):
        super().__init__(message)
        self.sequence = sequence
        self.prior = prior


@dataclass(frozen=True)
class MaserParams:
    """Micromaser parameters.

    theta:    coupling-time product lambda*tau (radians)
    n_max:    photon-number truncation N
    detuning: atom-field detuning; only resonance (0) is supported
    """

    theta: float = math.pi
    n_max: int = 25
    detuning: float = 0.0

    def __post_init__(self):
        theta = float(self.theta)
        if not math.isfinite(theta) or theta < 0:
            raise ParameterError(f"theta must be finite and >= 0, got {self.theta!r}")
        if isinstance(self.n_max, bool) or int(self.n_max) != self.n_max:
            raise ParameterError(f"n_max must be an integer, got {self.n_max!r}")
        if self.n_max < 1:
            raise ParameterError(f"n_max must be >= 1, got {self.n_max}")
        if self.detuning != 0:
            raise ParameterError("only resonant operation is supported (detuning must be 0)")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "n_max", int(self.n_max))
        object.__setattr__(self, "detuning", float(self.detuning))

    @property
    def photon_numbers(self) -> np.ndarray:
        return np.arange(self.n_max + 1)


class AtomOutcome(enum.Enum):
    EXCITED = "e"
    GROUND = "g"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class DetectionSequence:
    """Chronologically ordered atomic detections (first atom first)."""

    outcomes: tuple[AtomOutcome, ...] = ()

    def __post_init__(self):
        outcomes = tuple(AtomOutcome(o) if not isinstance(o, AtomOutcome) else o
                         for o in self.outcomes)
        object.__setattr__(self, "outcomes", outcomes)

    @classmethod
    def parse(cls, text: str) -> "DetectionSequence":
        """Build a sequence from a string such as ``"gege"``.

        Whitespace and commas are ignored; any other character except
        ``e``/``g`` (case-insensitive) is rejected.
        """
        outcomes = []
        for ch in text:
            if ch.isspace() or ch == ",":
                continue
            try:
                outcomes.append(AtomOutcome(ch.lower()))
            except ValueError:
                raise ParameterError(
                    f"invalid detection {ch!r} in sequence {text!r}; use 'e' or 'g'"
                ) from None
        return cls(tuple(outcomes))

    def __len__(self) -> int:
        return len(self.outcomes)

    def __iter__(self) -> Iterator[AtomOutcome]:
        return iter(self.outcomes)

    def __getitem__(self, index):
        return self.outcomes[index]

    def __str__(self) -> str:
        return "".join(o.value for o in self.outcomes)

    @property
    def ground_count(self) -> int:
        return sum(o is AtomOutcome.GROUND for o in self.outcomes)

    def appended(self, outcome: AtomOutcome) -> "DetectionSequence":
        return DetectionSequence(self.outcomes + (AtomOutcome(outcome),))


def as_sequence(seq: Union[DetectionSequence, str, Iterable]) -> DetectionSequence:
    if isinstance(seq, DetectionSequence):
        return seq
    if isinstance(seq, str):
        return DetectionSequence.parse(seq)
    return DetectionSequence(tuple(seq))


@dataclass(frozen=True)
class FockWeights:
    """Non-negative relative weights over photon numbers 0..len-1.

    The weights are not normalized unless produced by :meth:`normalized`.
    """

    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.array(self.weights, dtype=float, copy=True)
        if w.ndim != 1 or w.size == 0:
            raise ParameterError("FockWeights must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(w)):
            raise ParameterError("FockWeights entries must be finite")
        if np.any(w < 0):
            raise ParameterError(f"FockWeights entries must be >= 0 (min {w.min()!r})")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, n_max: int) -> "FockWeights":
        return cls(np.ones(n_max + 1))

    @classmethod
    def point(cls, n: int, n_max: int) -> "FockWeights":
        w = np.zeros(n_max + 1)
        w[n] = 1.0
        return cls(w)

    def __len__(self) -> int:
        return self.weights.size

    def __getitem__(self, n):
        return self.weights[n]

    @property
    def n_max(self) -> int:
        return self.weights.size - 1

    @property
    def total(self) -> float:
        return float(self.weights.sum())

    @property
    def is_empty(self) -> bool:
        return not np.any(self.weights > 0)

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.weights > 0)

    def normalized(self) -> "FockWeights":
        total = self.total
        if total <= 0:
            raise EmptySupportError("cannot normalize weights with zero total")
        return FockWeights(self.weights / total)

    def __repr__(self) -> str:
        return f"FockWeights(n_max={self.n_max}, total={self.total:.6g})"


def rabi_frequency_factor(n: ArrayLike, m: int, params: MaserParams) -> ArrayLike:
    """Rabi phase ``Omega(n+m) tau / 2 = theta * sqrt(n+m)``."""
    if m < 1:
        raise ParameterError(f"shift m must be >= 1, got {m}")
    return params.theta * np.sqrt(np.asarray(n, dtype=float) + m)


# |sin(x)| below this many ulps of x is indistinguishable from an exact zero.
_ROUNDING_ULPS = 4


def _snapped_sin_cos(n: ArrayLike, m: int, params: MaserParams):
    phase = rabi_frequency_factor(n, m, params)
    sin, cos = np.sin(phase), np.cos(phase)
    noise = _ROUNDING_ULPS * np.spacing(np.maximum(np.abs(phase), 1.0))
    on_node = np.abs(sin) <= noise
    sin = np.where(on_node, 0.0, sin)
    cos = np.where(on_node, np.sign(cos), cos)
    return sin, cos


def c_factor(n: ArrayLike, m: int, params: MaserParams) -> ArrayLike:
    """cos^2 of the Rabi phase: probability an excited atom leaves excited.

    Phases that sit on a multiple of pi to within rounding (trapping
    states) give exactly 1, so the matching sine factor is exactly 0.
    """
    sin, cos = _snapped_sin_cos(n, m, params)
    return cos ** 2


def s_factor(n: ArrayLike, m: int, params: MaserParams) -> ArrayLike:
    """sin^2 of the Rabi phase: probability an excited atom leaves in ground."""
    sin, cos = _snapped_sin_cos(n, m, params)
    return sin ** 2
