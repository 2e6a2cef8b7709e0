"""Retrodictive micromaser field measurements.

Field POM elements for sequences of atomic detections, retrodicted
photon-number distributions, and a forward Jaynes-Cummings oracle that
checks them.
"""

from .core import (
    AtomOutcome,
    DetectionSequence,
    EmptySupportError,
    FockWeights,
    MaserParams,
    ParameterError,
    RetromaserError,
    c_factor,
    rabi_frequency_factor,
    s_factor,
)
from .oracle import (
    JointState,
    SequenceLikelihood,
    bayes_posterior,
    evolve_one_atom,
    matrix_exponential_check,
    sequence_likelihood,
)
from .pom import PomElement, build_pom, completeness_check, symbolic_table1
from .retrodiction import (
    PriorSpec,
    RetrodictiveState,
    SupportReport,
    backward_update,
    retrodict_state,
    retrodict_with_final,
    support_report,
)

__version__ = "0.1.0"
