"""Forward (predictive) engine used as an independent check on retrodiction.

Nothing here uses the POM coefficients. Each initial Fock state is
propagated as a pure joint atom-field state: inject an excited atom, apply
the resonant Jaynes-Cummings unitary, project onto the detected atomic
level, repeat. The squared norm left at the end is ``P(seq | n)``.

The interaction-picture Hamiltonian is

    H / hbar = (Delta/2) sigma_3 - i lambda (sigma_+ a - a^dag sigma_-)

which, on resonance, couples each pair ``{|e,n>, |g,n+1>}`` as
``lambda sqrt(n+1) sigma_y``. Over one transit the pair rotates by
``phi = theta sqrt(n+1)``:

    |e,n>   ->  cos(phi) |e,n> + sin(phi) |g,n+1>
    |g,n+1> -> -sin(phi) |e,n> + cos(phi) |g,n+1>
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    AtomOutcome,
    DetectionSequence,
    EmptySupportError,
    FockWeights,
    MaserParams,
    ParameterError,
    as_sequence,
)

MAX_DENSE_M = 60
# Forward likelihoods of forbidden records are rounding noise of order (eps*phase)^2.
EVIDENCE_FLOOR = 1e-28


@dataclass(frozen=True)
class JointState:
    """Atom-field amplitudes over ``|e,0..M>`` followed by ``|g,0..M>``."""

    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex, copy=True)
        if a.ndim != 1 or a.size % 2 or a.size < 2:
            raise ParameterError("joint amplitudes must be a 1-d vector of even length")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @classmethod
    def excited_with_field(cls, field: np.ndarray) -> "JointState":
        field = np.asarray(field, dtype=complex)
        return cls(np.concatenate([field, np.zeros_like(field)]))

    @classmethod
    def excited_fock(cls, n: int, m_max: int) -> "JointState":
        field = np.zeros(m_max + 1, dtype=complex)
        field[n] = 1.0
        return cls.excited_with_field(field)

    @property
    def m_max(self) -> int:
        return self.amplitudes.size // 2 - 1

    @property
    def excited(self) -> np.ndarray:
        return self.amplitudes[: self.m_max + 1]

    @property
    def ground(self) -> np.ndarray:
        return self.amplitudes[self.m_max + 1:]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def project(self, outcome: AtomOutcome) -> np.ndarray:
        """Sub-normalized field amplitudes conditioned on the atomic outcome."""
        if AtomOutcome(outcome) is AtomOutcome.EXCITED:
            return self.excited.copy()
        return self.ground.copy()


def _check_resonant(params: MaserParams):
    if params.detuning != 0:
        raise ParameterError("closed-form evolution requires zero detuning")


def evolve_one_atom(state: JointState, params: MaserParams) -> JointState:
    """Closed-form resonant JC evolution over one atomic transit.

    ``|g,0>`` is untouched. ``|e,M>`` has no partner inside the truncated
    space and is left alone, which is also what the truncated Hamiltonian
    does.
    """
    _check_resonant(params)
    m = state.m_max
    e, g = state.excited, state.ground
    phi = params.theta * np.sqrt(np.arange(1, m + 1))
    c, s = np.cos(phi), np.sin(phi)
    new_e = e.copy()
    new_g = g.copy()
    new_e[:m] = c * e[:m] - s * g[1:]
    new_g[1:] = s * e[:m] + c * g[1:]
    return JointState(np.concatenate([new_e, new_g]))


def closed_form_unitary(params: MaserParams, m_max: int) -> np.ndarray:
    """Matrix of :func:`evolve_one_atom`, assembled column by column."""
    dim = 2 * (m_max + 1)
    u = np.empty((dim, dim), dtype=complex)
    for j in range(dim):
        basis = np.zeros(dim)
        basis[j] = 1.0
        u[:, j] = evolve_one_atom(JointState(basis), params).amplitudes
    return u


def jc_hamiltonian(params: MaserParams, m_max: int, tau: float = 1.0) -> np.ndarray:
    """Dense interaction-picture JC Hamiltonian (units of hbar).

    Built from atomic and field operators via Kronecker products, atom
    factor first, so the basis order matches :class:`JointState`.
    ``lambda = theta / tau``.
    """
    lam = params.theta / tau
    a = np.diag(np.sqrt(np.arange(1, m_max + 1)), k=1)
    field_id = np.eye(m_max + 1)
    sigma_plus = np.array([[0, 1], [0, 0]], dtype=complex)  # |e><g|, e first
    sigma_minus = sigma_plus.conj().T
    sigma_3 = np.diag([1.0, -1.0])
    return (params.detuning / 2 * np.kron(sigma_3, field_id)
            - 1j * lam * (np.kron(sigma_plus, a) - np.kron(sigma_minus, a.conj().T)))


def dense_unitary(params: MaserParams, m_max: int, tau: float = 1.0) -> np.ndarray:
    """``exp(-i H tau)`` by eigendecomposition of the Hermitian matrix."""
    h = jc_hamiltonian(params, m_max, tau)
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * tau)) @ v.conj().T


def matrix_exponential_check(params: MaserParams, m_max: int) -> float:
    """Max entrywise gap between closed-form and numerically exponentiated unitaries."""
    if m_max > MAX_DENSE_M:
        raise ParameterError(f"dense check limited to M <= {MAX_DENSE_M}")
    return float(np.max(np.abs(closed_form_unitary(params, m_max) - dense_unitary(params, m_max))))


@dataclass(frozen=True)
class SequenceLikelihood:
    per_initial_n: np.ndarray  # P(seq | n) for n = 0..n_max

    def __getitem__(self, n):
        return self.per_initial_n[n]


def likelihood_for_fock(n: int, seq: DetectionSequence, params: MaserParams,
                        m_max: int | None = None) -> float:
    """``P(seq | n)`` from explicit atom-by-atom propagation."""
    if m_max is None:
        m_max = params.n_max + len(seq)
    field = np.zeros(m_max + 1, dtype=complex)
    field[n] = 1.0
    for outcome in seq:
        joint = evolve_one_atom(JointState.excited_with_field(field), params)
        field = joint.project(outcome)
    return float(np.vdot(field, field).real)


def sequence_likelihood(seq, params: MaserParams, m_max: int | None = None) -> SequenceLikelihood:
    """``P(seq | n)`` for every initial photon number 0..n_max.

    Headroom defaults to ``n_max + len(seq)``: each atom adds at most one
    photon, so nothing ever reaches the truncation edge.
    """
    seq = as_sequence(seq)
    if m_max is not None and m_max < params.n_max + len(seq):
        raise ParameterError("headroom must be at least n_max + len(seq)")
    values = np.array([likelihood_for_fock(n, seq, params, m_max)
                       for n in range(params.n_max + 1)])
    return SequenceLikelihood(values)


def bayes_posterior(seq, prior, params: MaserParams) -> FockWeights:
    """Posterior over the initial photon number by Bayes' rule on forward likelihoods."""
    seq = as_sequence(seq)
    prior_w = prior.weights(params.n_max).normalized().weights
    joint = prior_w * sequence_likelihood(seq, params).per_initial_n
    evidence = joint.sum()
    if evidence <= EVIDENCE_FLOOR:
        raise EmptySupportError(
            f"sequence {str(seq)!r} has zero probability under prior {prior}",
            sequence=seq, prior=prior,
        )
    return FockWeights(joint / evidence)
