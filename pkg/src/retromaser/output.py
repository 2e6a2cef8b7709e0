"""Plot-ready CSV/JSON rendering of per-photon-number results."""

from __future__ import annotations

import json
from typing import Iterable, Optional, Sequence


def format_value(value: float) -> str:
    return format(float(value), ".17g")


def to_csv(rows: Iterable[Sequence], header: tuple[str, str] = ("n", "value")) -> str:
    lines = [",".join(header)]
    for key, value in rows:
        lines.append(f"{key},{format_value(value)}")
    return "\n".join(lines) + "\n"


def to_json(rows: Iterable[Sequence], theta: float, n_max: int, sequence: Optional[str] = None,
            prior: Optional[str] = None, **extra) -> str:
    doc = {
        "params": {"theta": float(theta), "n_max": int(n_max)},
        "sequence": sequence,
        "prior": prior,
        "rows": [[k if isinstance(k, str) else int(k), float(v)] for k, v in rows],
    }
    doc.update(extra)
    return json.dumps(doc, indent=2) + "\n"
