"""Parameters behind each published figure, and the data they plot."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import DetectionSequence, MaserParams, ParameterError
from .retrodiction import PriorSpec, RetrodictiveState, retrodict_state


@dataclass(frozen=True)
class FigureSpec:
    sequence: str
    prior: str = "uniform"
    theta: float = math.pi


FIGURES: dict[str, FigureSpec] = {
    "1a": FigureSpec("e"),
    "1b": FigureSpec("eeeee"),
    "2a": FigureSpec("g"),
    "2b": FigureSpec("ggg"),
    "2c": FigureSpec("gggggg"),
    "3": FigureSpec("gg", prior="cap:3"),
    "4a": FigureSpec("gegege"),
    "4b": FigureSpec("egegeg"),
}


def figure_state(figure_id: str, n_max: int = 25) -> RetrodictiveState:
    try:
        spec = FIGURES[figure_id]
    except KeyError:
        raise ParameterError(
            f"unknown figure {figure_id!r}; choose from {', '.join(FIGURES)}"
        ) from None
    params = MaserParams(theta=spec.theta, n_max=n_max)
    return retrodict_state(DetectionSequence.parse(spec.sequence), PriorSpec.parse(spec.prior), params)
